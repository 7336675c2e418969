mod common;

use common::graph_from_bits;
use proptest::prelude::*;
use srgsub::canon::{canonical_code, graph_from_labeled_code, labeled_code};
use srgsub::catalog::catalog;
use srgsub::{graph6, Graph};

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

fn graph_and_perm(min: usize, max: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (min..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits)),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graph6_round_trips(g in graph(50)) {
        let text = graph6::write(&g);
        prop_assert!(text.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(graph6::read(&text).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_code_ignores_labels((g, perm) in graph_and_perm(3, 7)) {
        let h = g.permuted(&perm).unwrap();
        prop_assert_eq!(canonical_code(&g).unwrap(), canonical_code(&h).unwrap());
        let back = canonical_code(&g).unwrap().to_graph();
        prop_assert_eq!(canonical_code(&back).unwrap(), canonical_code(&g).unwrap());
    }

    #[test]
    fn lookup_agrees_with_canonical_code((g, _) in graph_and_perm(3, 6)) {
        let cat = catalog(g.order()).unwrap();
        let class = cat.classify_code(labeled_code(&g));
        prop_assert_eq!(cat.classes()[class].code, canonical_code(&g).unwrap());
        prop_assert_eq!(cat.classify(&g).unwrap(), class);
    }
}

#[test]
fn lookup_is_exhaustive_up_to_five() {
    for m in 3..=5 {
        let cat = catalog(m).unwrap();
        for code in 0..1u32 << (m * (m - 1) / 2) {
            let g = graph_from_labeled_code(m, code);
            assert_eq!(cat.classes()[cat.classify_code(code)].code, canonical_code(&g).unwrap());
        }
    }
}

#[test]
fn graph6_rejects_malformed_input() {
    for bad in ["", "~", "~?", "C~~", "Bg!", "A_?"] {
        assert!(graph6::read(bad).is_err(), "{bad:?} accepted");
    }
}
