//! C interface to `srgsub`.
//!
//! Every fallible function returns an [`SrgStatus`]. On failure the message is
//! kept per thread and can be read with [`srg_last_error_message`]. Graphs are
//! opaque [`SrgGraph`] handles released with [`srg_graph_free`]; strings
//! returned by the library are released with [`srg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use srgsub::census::{census, CensusOptions, Method, DEFAULT_BUDGET, LONG_BUDGET};
use srgsub::verify::{render_report, verify, ReportFormat, VerifyOptions};
use srgsub::{catalog, graph6, instances, Error, Graph};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotInFamily = 4,
    BudgetExceeded = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Census algorithm.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrgMethod {
    Brute = 0,
    Fast = 1,
}

/// Parameters of a strongly regular graph.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SrgParamsC {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// Opaque graph handle.
pub struct SrgGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: SrgStatus, msg: impl Into<String>) -> SrgStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> SrgStatus {
    match e {
        Error::Graph6(_) | Error::GraphCount { .. } => SrgStatus::Parse,
        Error::NotInFamily(_) => SrgStatus::NotInFamily,
        Error::BudgetExceeded { .. } => SrgStatus::BudgetExceeded,
        Error::OrderOutOfRange(_) | Error::CatalogOrder(_) | Error::CanonicalOrder { .. } | Error::InvalidParams(_) => {
            SrgStatus::InvalidArgument
        }
        _ => SrgStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SrgStatus>) -> SrgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(SrgStatus::Internal, "panic inside srgsub"),
    }
}

fn lib<T>(r: srgsub::Result<T>) -> Result<T, SrgStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), SrgStatus> {
    if p.is_null() {
        Err(fail(SrgStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn pool_threads(n: usize) -> Option<usize> {
    (n > 0).then_some(n)
}

unsafe fn store_graph(out: *mut *mut SrgGraph, g: Graph) {
    *out = Box::into_raw(Box::new(SrgGraph(g)));
}

/// Message of the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn srg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses one graph in graph6 format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_from_graph6(text: *const c_char, out: *mut *mut SrgGraph) -> SrgStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(SrgStatus::Parse, "graph6 text is not UTF-8"))?;
        let g = lib(graph6::read(s.trim_end()))?;
        store_graph(out, g);
        Ok(())
    })
}

/// Builds the 3x3 rook's graph, srg(9,4,1,2).
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_rook9(out: *mut *mut SrgGraph) -> SrgStatus {
    guard(|| {
        non_null(out, "out")?;
        store_graph(out, instances::rook9());
        Ok(())
    })
}

/// Builds the ternary Golay coset graph, srg(243,22,1,2).
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_bvls243(out: *mut *mut SrgGraph) -> SrgStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = lib(instances::bvls243())?;
        store_graph(out, g);
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_free(graph: *mut SrgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_order(graph: *const SrgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.order())
}

/// Encodes a graph as a graph6 string, to be freed with [`srg_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_to_graph6(graph: *const SrgGraph, out: *mut *mut c_char) -> SrgStatus {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(out, "out")?;
        *out = into_c_string(graph6::write(&(*graph).0))?;
        Ok(())
    })
}

/// Writes the strongly regular parameters of `graph`.
///
/// Returns `NotInFamily` when the graph is not strongly regular.
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn srg_graph_is_srg(graph: *const SrgGraph, out: *mut SrgParamsC) -> SrgStatus {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(out, "out")?;
        let p = (*graph)
            .0
            .is_srg()
            .ok_or_else(|| fail(SrgStatus::NotInFamily, "graph is not strongly regular"))?;
        *out = SrgParamsC {
            n: p.n,
            k: p.k,
            lambda: p.lambda,
            mu: p.mu,
        };
        Ok(())
    })
}

/// Number of isomorphism classes of order `order` (1..=6), in total and
/// feasible in srg(n,k,1,2).
///
/// # Safety
/// `total` and `feasible` must be writable pointers.
#[no_mangle]
pub unsafe extern "C" fn srg_catalog_size(order: usize, total: *mut usize, feasible: *mut usize) -> SrgStatus {
    guard(|| {
        non_null(total, "total")?;
        non_null(feasible, "feasible")?;
        let cat = lib(catalog::catalog(order))?;
        *total = cat.len();
        *feasible = cat.feasible_count();
        Ok(())
    })
}

/// Counts induced subgraphs of order `order` by isomorphism class.
///
/// `counts` receives one entry per class in catalog order; `written` receives
/// the number of classes, also when the buffer is too small. `threads` = 0
/// uses the default pool. `long_budget` raises the brute-force budget.
///
/// # Safety
/// `graph` must be a live handle, `counts` must hold `len` entries and
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn srg_census(
    graph: *const SrgGraph,
    order: usize,
    method: SrgMethod,
    threads: usize,
    long_budget: bool,
    counts: *mut u64,
    len: usize,
    written: *mut usize,
) -> SrgStatus {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(written, "written")?;
        let need = lib(catalog::catalog(order))?.len();
        *written = need;
        if len < need {
            return Err(fail(
                SrgStatus::BufferTooSmall,
                format!("order {order} has {need} classes, buffer holds {len}"),
            ));
        }
        non_null(counts, "counts")?;
        let opts = CensusOptions {
            threads: pool_threads(threads),
            budget: if long_budget { LONG_BUDGET } else { DEFAULT_BUDGET },
        };
        let method = match method {
            SrgMethod::Brute => Method::Brute,
            SrgMethod::Fast => Method::EsuCompletion,
        };
        let result = lib(census(&(*graph).0, "ffi", order, method, opts))?;
        std::slice::from_raw_parts_mut(counts, need).copy_from_slice(&result.counts);
        Ok(())
    })
}

/// Runs the full verification and returns the JSON report.
///
/// `passed` receives whether the report lists no discrepancies. The report is
/// freed with [`srg_string_free`].
///
/// # Safety
/// `graph` must be a live handle, `host` NULL or a NUL-terminated string, and
/// `report` and `passed` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn srg_verify_json(
    graph: *const SrgGraph,
    host: *const c_char,
    threads: usize,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> SrgStatus {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(report, "report")?;
        non_null(passed, "passed")?;
        let host = if host.is_null() {
            "graph".to_string()
        } else {
            CStr::from_ptr(host).to_string_lossy().into_owned()
        };
        let opts = VerifyOptions {
            census: CensusOptions {
                threads: pool_threads(threads),
                budget: DEFAULT_BUDGET,
            },
            method: Method::EsuCompletion,
        };
        let r = lib(verify(&(*graph).0, &host, opts))?;
        let text = lib(render_report(&r, ReportFormat::Json))?;
        *report = into_c_string(text)?;
        *passed = r.passed;
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn srg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn into_c_string(s: String) -> Result<*mut c_char, SrgStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(SrgStatus::Internal, "string contains NUL"))
}
