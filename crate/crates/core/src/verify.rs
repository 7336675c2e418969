//! End-to-end verification of a host graph against the closed forms and
//! counting relations.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::catalog::{anchor_classes, catalog, Anchors};
use crate::census::{binomial, census_up_to, CensusOptions, CensusResult, Method};
use crate::error::{Error, Result};
use crate::expr::{Family, Symbol};
use crate::formulas::{all_symbols, FormulaBook, N3Range};
use crate::graph::{Graph, SrgParams};
use crate::identities::{check_all, check_numeric, ClosedForms, EquationTable, Group, Status};
use crate::numbering::{assign, Assignment};

/// Count of the free-parameter class in a complete order-six census.
pub fn measure_n3(census6: &[u64], anchors: &Anchors) -> u64 {
    census6[anchors.n3]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTotal {
    pub order: usize,
    pub method: Method,
    pub total: String,
    pub expected: String,
    /// Nonzero count vector as decimal strings, by catalog index.
    pub counts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetCheck {
    pub order: usize,
    pub passed: bool,
    /// Sorted nonzero values predicted by the closed forms.
    pub predicted: Vec<String>,
    /// Sorted nonzero measured counts.
    pub measured: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaRow {
    pub symbol: String,
    /// Catalog classes carrying this subscript (one unless tied).
    pub classes: Vec<usize>,
    /// Canonical codes of those classes, hex.
    pub codes: Vec<String>,
    pub predicted: String,
    pub measured: Option<String>,
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationRow {
    pub name: String,
    pub group: Group,
    pub symbolic: Status,
    /// Absent when a count in the relation could not be assigned.
    pub numeric: Option<Status>,
    pub printed_residual: Option<String>,
    pub repaired_residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentSummary {
    pub consistent: bool,
    pub complete: bool,
    pub anchors_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub host: String,
    pub params: SrgParams,
    pub measured_n3: String,
    pub n3_range: N3Range,
    pub n3_feasible: bool,
    pub census: Vec<OrderTotal>,
    pub multiset: Vec<MultisetCheck>,
    pub cycles: Vec<FormulaRow>,
    pub assignment: AssignmentSummary,
    pub formulas: Vec<FormulaRow>,
    /// Subscripts whose closed forms are identical polynomials.
    pub tie_groups: Vec<Vec<String>>,
    pub equations: Vec<EquationRow>,
    pub discrepancies: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub census: CensusOptions,
    pub method: Method,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            census: CensusOptions::default(),
            method: Method::EsuCompletion,
        }
    }
}

/// Checks that `g` is an srg(n,k,1,2).
pub fn family_params(g: &Graph) -> Result<SrgParams> {
    let p = g
        .is_srg()
        .ok_or_else(|| Error::NotInFamily("host is not strongly regular".into()))?;
    if p.lambda != 1 || p.mu != 2 {
        return Err(Error::NotInFamily(format!("parameters {p}")));
    }
    Ok(p)
}

fn sorted_nonzero(v: impl IntoIterator<Item = BigInt>) -> Vec<String> {
    let mut x: Vec<BigInt> = v.into_iter().filter(|c| *c != BigInt::from(0)).collect();
    x.sort();
    x.iter().map(ToString::to_string).collect()
}

/// Subscripts with identical closed forms, per family.
pub fn tie_groups(closed: &ClosedForms) -> Vec<Vec<String>> {
    let mut groups: Vec<Vec<String>> = Vec::new();
    for family in Family::ALL {
        let mut seen: Vec<(crate::poly::Poly, Vec<String>)> = Vec::new();
        for i in family.indices() {
            let s = Symbol::new(family, i);
            let p = closed.get(s);
            match seen.iter_mut().find(|(q, _)| q == p) {
                Some((_, v)) => v.push(s.to_string()),
                None => seen.push((p.clone(), vec![s.to_string()])),
            }
        }
        groups.extend(seen.into_iter().map(|(_, v)| v).filter(|v| v.len() > 1));
    }
    groups
}

pub fn verify(g: &Graph, host: &str, opts: VerifyOptions) -> Result<VerificationReport> {
    let params = family_params(g)?;
    let n = BigInt::from(params.n);
    let k = BigInt::from(params.k);
    let book = FormulaBook::builtin();
    let table = EquationTable::builtin();
    let fs = book.evaluate(&n, &k)?;
    let censuses: Vec<CensusResult> = census_up_to(g, host, 6, opts.method, opts.census)?;
    let anchors = anchor_classes(catalog(6)?)?;
    let n3 = measure_n3(&censuses[5].counts, &anchors);
    let n3_big = BigInt::from(n3);
    let n3_range = fs.feasible_n3_range();
    let mut discrepancies = Vec::new();

    // census totals and infeasible classes
    let mut totals = Vec::new();
    for c in &censuses {
        let expected = binomial(params.n as u128, c.order as u128);
        if c.total() != expected {
            discrepancies.push(format!(
                "order-{} census totals {} instead of {expected}",
                c.order,
                c.total()
            ));
        }
        for info in catalog(c.order)?.classes() {
            if !info.feasible && c.counts[info.index] != 0 {
                discrepancies.push(format!(
                    "infeasible order-{} class {} occurs {} times",
                    c.order, info.index, c.counts[info.index]
                ));
            }
        }
        totals.push(OrderTotal {
            order: c.order,
            method: c.method,
            total: c.total().to_string(),
            expected: expected.to_string(),
            counts: c.counts.iter().map(u64::to_string).collect(),
        });
    }

    // closed forms at the measured n3
    let six = match fs.instantiate(&n3_big) {
        Ok(v) => Some(v),
        Err(e) => {
            discrepancies.push(format!("closed forms at measured n3: {e}"));
            None
        }
    };
    let n3_feasible = n3_range.contains(&n3_big);
    if !n3_feasible {
        discrepancies.push(format!("measured n3 = {n3} lies outside the feasible range"));
    }

    // numbering-independent multiset comparison
    let mut multiset = Vec::new();
    let predictions: [(usize, Option<Vec<BigInt>>); 3] =
        [(4, Some(fs.l.clone())), (5, Some(fs.m.clone())), (6, six.clone())];
    for (order, predicted) in predictions {
        let measured = sorted_nonzero(censuses[order - 1].counts.iter().map(|&c| BigInt::from(c)));
        let predicted = predicted.map(sorted_nonzero).unwrap_or_default();
        let passed = predicted == measured;
        if !passed {
            discrepancies.push(format!(
                "order-{order} multiset of counts differs from the closed forms"
            ));
        }
        multiset.push(MultisetCheck {
            order,
            passed,
            predicted,
            measured,
        });
    }

    // cycle counts
    let c4 = catalog(4)?.classify(&Graph::cycle(4)?)?;
    let c5 = catalog(5)?.classify(&Graph::cycle(5)?)?;
    let measured_p = [censuses[2].counts[3], censuses[3].counts[c4], censuses[4].counts[c5]];
    let cycles: Vec<FormulaRow> = (0..3)
        .map(|i| {
            let matches = BigInt::from(measured_p[i]) == fs.p[i];
            if !matches {
                discrepancies.push(format!(
                    "p{} = {} but the census finds {}",
                    i + 3,
                    fs.p[i],
                    measured_p[i]
                ));
            }
            FormulaRow {
                symbol: format!("p{}", i + 3),
                classes: vec![],
                codes: vec![],
                predicted: fs.p[i].to_string(),
                measured: Some(measured_p[i].to_string()),
                matches: Some(matches),
            }
        })
        .collect();

    // per-subscript comparison (diagnostic)
    let assignment: Assignment = assign(table)?;
    let mut measured: BTreeMap<Symbol, BigRational> = BTreeMap::new();
    for i in 3..=5 {
        measured.insert(
            Symbol::new(Family::P, i),
            BigRational::from_integer(measured_p[i - 3].into()),
        );
    }
    let mut formulas = Vec::new();
    for s in all_symbols().filter(|s| s.family != Family::P) {
        let order = s.family.subgraph_order().expect("class family");
        let predicted = match s.family {
            Family::L => fs.l[s.index - 1].to_string(),
            Family::M => fs.m[s.index - 1].to_string(),
            _ => match &six {
                Some(v) => v[s.index - 1].to_string(),
                None => fs.six[s.index - 1].at(&n3_big).to_string(),
            },
        };
        let classes = assignment.classes_of(s).to_vec();
        let cat = catalog(order)?;
        let value = assignment.class_of(s).map(|c| censuses[order - 1].counts[c]);
        if let Some(v) = value {
            measured.insert(s, BigRational::from_integer(v.into()));
        }
        formulas.push(FormulaRow {
            symbol: s.to_string(),
            codes: classes.iter().map(|&c| cat.classes()[c].code.to_string()).collect(),
            classes,
            matches: value.map(|v| v.to_string() == predicted),
            measured: value.map(|v| v.to_string()),
            predicted,
        });
    }

    // relations on measured counts
    let symbolic = check_all(table, book, None)?;
    let numeric = if assignment.is_complete() {
        Some(check_numeric(table, &n, &k, &|s| measured.get(&s).cloned())?)
    } else {
        None
    };
    let equations: Vec<EquationRow> = symbolic
        .checks
        .iter()
        .enumerate()
        .map(|(i, sym)| {
            let num = numeric.as_ref().map(|v| &v[i]);
            if let Some(c) = num {
                if c.status == Status::Fails {
                    discrepancies.push(format!(
                        "relation {} fails on the census: residual {}",
                        c.name, c.printed_residual
                    ));
                }
            }
            EquationRow {
                name: sym.name.clone(),
                group: sym.group,
                symbolic: sym.status,
                numeric: num.map(|c| c.status),
                printed_residual: num.map(|c| c.printed_residual.clone()),
                repaired_residual: num.and_then(|c| c.repaired_residual.clone()),
            }
        })
        .collect();
    if numeric.is_none() {
        discrepancies.push("subscript assignment is incomplete; relations were not evaluated".into());
    }

    Ok(VerificationReport {
        host: host.to_string(),
        params,
        measured_n3: n3.to_string(),
        n3_range,
        n3_feasible,
        census: totals,
        multiset,
        cycles,
        assignment: AssignmentSummary {
            consistent: assignment.consistent,
            complete: assignment.is_complete(),
            anchors_agree: assignment.anchors_agree,
        },
        formulas,
        tie_groups: tie_groups(ClosedForms::builtin()),
        equations,
        passed: discrepancies.is_empty(),
        discrepancies,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub fn render_report(report: &VerificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Serialize(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let ser = |e: csv::Error| Error::Serialize(e.to_string());
            w.write_record(["kind", "name", "classes", "predicted", "measured", "status"])
                .map_err(ser)?;
            w.write_record([
                "host",
                &report.host,
                "",
                "",
                &report.measured_n3,
                if report.passed { "pass" } else { "fail" },
            ])
            .map_err(ser)?;
            for t in &report.census {
                let status = if t.total == t.expected { "ok" } else { "mismatch" };
                w.write_record([
                    "census",
                    &format!("order{}", t.order),
                    "",
                    &t.expected,
                    &t.total,
                    status,
                ])
                .map_err(ser)?;
            }
            for row in report.cycles.iter().chain(&report.formulas) {
                let classes = row
                    .classes
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                let status = match row.matches {
                    Some(true) => "ok",
                    Some(false) => "mismatch",
                    None => "unassigned",
                };
                w.write_record([
                    "formula",
                    &row.symbol,
                    &classes,
                    &row.predicted,
                    row.measured.as_deref().unwrap_or(""),
                    status,
                ])
                .map_err(ser)?;
            }
            for e in &report.equations {
                let status = match e.numeric {
                    Some(Status::Holds) => "holds",
                    Some(Status::HoldsRepaired) => "holds-repaired",
                    Some(Status::Fails) => "fails",
                    None => "unevaluated",
                };
                w.write_record([
                    "equation",
                    &e.name,
                    "",
                    "0",
                    e.printed_residual.as_deref().unwrap_or(""),
                    status,
                ])
                .map_err(ser)?;
            }
            for d in &report.discrepancies {
                w.write_record(["discrepancy", d, "", "", "", ""]).map_err(ser)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

pub fn emit_report(report: &VerificationReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = render_report(report, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_report(path: &Path) -> Result<VerificationReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Serialize(e.to_string()))
}
