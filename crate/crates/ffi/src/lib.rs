//! C ABI over `dirflag`.
//!
//! Objects are opaque handles created by `*_new`/`*_parse`/`*_compute`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`DirflagStatus`]; on failure a message is available from
//! [`dirflag_last_error`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dirflag::chains::{allowed_betti_numbers, flag_betti_numbers};
use dirflag::digraph::{Digraph, VertexMap, WeightedDigraph};
use dirflag::field::FieldSpec;
use dirflag::homotopy::{multi_step_search, one_step, SearchOutcome, SystemKind};
use dirflag::io::parse_graph;
use dirflag::persistence::{bottleneck_distance, grounded_persistent_h1, persistent_dfl_homology, shortest_path_filtration, Barcode};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirflagStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirflagSystem {
    A = 0,
    Dfl = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirflagPipeline {
    SpDfl = 0,
    GroundedH1 = 1,
}

/// Outcome of a homotopy search.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirflagVerdict {
    Found = 0,
    Absent = 1,
    Inconclusive = 2,
}

/// Opaque digraph handle.
pub struct DirflagDigraph {
    graph: Digraph,
}

/// Opaque weighted digraph handle.
pub struct DirflagWeightedDigraph {
    graph: WeightedDigraph,
}

/// Opaque barcode handle.
pub struct DirflagBarcode {
    barcode: Barcode,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Outcome = Result<(), (DirflagStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> DirflagStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DirflagStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DirflagStatus::Panic
        }
    }
}

fn null(name: &str) -> (DirflagStatus, String) {
    (DirflagStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(msg: impl ToString) -> (DirflagStatus, String) {
    (DirflagStatus::InvalidArgument, msg.to_string())
}

unsafe fn text_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (DirflagStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("`{name}` is not UTF-8")))
}

fn field_of(prime: u64) -> Result<FieldSpec, (DirflagStatus, String)> {
    if prime == 0 {
        Ok(FieldSpec::Rationals)
    } else {
        prime.to_string().parse().map_err(|e: dirflag::field::FieldError| invalid(e))
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn dirflag_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a digraph on `vertex_count` vertices from `edge_count` pairs stored
/// flat in `edges` (`src0, dst0, src1, dst1, …`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (it may be null when
/// `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_digraph_new(
    vertex_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut DirflagDigraph,
) -> DirflagStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if edges.is_null() && edge_count > 0 {
            return Err(null("edges"));
        }
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        let graph = Digraph::new(vertex_count, &pairs).map_err(invalid)?;
        *out = Box::into_raw(Box::new(DirflagDigraph { graph }));
        Ok(())
    })
}

/// Parse a flag file or edge list.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_digraph_parse(text: *const c_char, out: *mut *mut DirflagDigraph) -> DirflagStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = text_arg(text, "text")?;
        let input = parse_graph(text).map_err(|e| (DirflagStatus::ParseError, e.to_string()))?;
        let graph = input.digraph().map_err(|e| (DirflagStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(DirflagDigraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dirflag_digraph_free(g: *mut DirflagDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirflag_digraph_vertex_count(g: *const DirflagDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirflag_digraph_edge_count(g: *const DirflagDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.edge_count())
}

unsafe fn betti(
    g: *const DirflagDigraph,
    max_dim: usize,
    prime: u64,
    out: *mut usize,
    out_len: usize,
    allowed: bool,
) -> DirflagStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("g"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if out_len <= max_dim {
            return Err(invalid(format!("`out_len` must be at least {}", max_dim + 1)));
        }
        let field = field_of(prime)?;
        let b = if allowed {
            allowed_betti_numbers(&g.graph, max_dim, field)
        } else {
            flag_betti_numbers(&g.graph, max_dim, field)
        };
        std::slice::from_raw_parts_mut(out, b.len()).copy_from_slice(&b);
        Ok(())
    })
}

/// Betti numbers of the directed flag complex in degrees `0..=max_dim`,
/// over `GF(prime)`, or over the rationals when `prime` is 0.
///
/// # Safety
/// `g` must be a live handle and `out` must hold `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn dirflag_flag_betti(
    g: *const DirflagDigraph,
    max_dim: usize,
    prime: u64,
    out: *mut usize,
    out_len: usize,
) -> DirflagStatus {
    betti(g, max_dim, prime, out, out_len, false)
}

/// As [`dirflag_flag_betti`] for the allowed-path complex.
///
/// # Safety
/// As [`dirflag_flag_betti`].
#[no_mangle]
pub unsafe extern "C" fn dirflag_allowed_betti(
    g: *const DirflagDigraph,
    max_dim: usize,
    prime: u64,
    out: *mut usize,
    out_len: usize,
) -> DirflagStatus {
    betti(g, max_dim, prime, out, out_len, true)
}

fn system_of(s: DirflagSystem) -> SystemKind {
    match s {
        DirflagSystem::A => SystemKind::A,
        DirflagSystem::Dfl => SystemKind::Dfl,
    }
}

unsafe fn maps(
    g: &Digraph,
    h: &Digraph,
    f: *const usize,
    k: *const usize,
) -> Result<(VertexMap, VertexMap), (DirflagStatus, String)> {
    let n = g.vertex_count();
    let read = |p: *const usize, name: &str| -> Result<VertexMap, (DirflagStatus, String)> {
        if p.is_null() && n > 0 {
            return Err(null(name));
        }
        let image = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(p, n).to_vec() };
        VertexMap::new(image, h.vertex_count()).map_err(invalid)
    };
    Ok((read(f, "f")?, read(k, "g_map")?))
}

/// Whether there is a one-step homotopy from `f` to `g_map` in the chosen
/// system. Both maps list one image per vertex of `g`.
///
/// # Safety
/// Handles must be live; `f` and `g_map` must hold one value per vertex of
/// `g`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_one_step(
    system: DirflagSystem,
    g: *const DirflagDigraph,
    h: *const DirflagDigraph,
    f: *const usize,
    g_map: *const usize,
    out: *mut bool,
) -> DirflagStatus {
    guard(|| {
        let (g, h) = (g.as_ref().ok_or_else(|| null("g"))?, h.as_ref().ok_or_else(|| null("h"))?);
        if out.is_null() {
            return Err(null("out"));
        }
        let (f, k) = maps(&g.graph, &h.graph, f, g_map)?;
        *out = one_step(&system_of(system), &f, &k, &g.graph, &h.graph).map_err(invalid)?;
        Ok(())
    })
}

/// Breadth-first search for a zig-zag from `f` to `g_map`. On `Found`,
/// `out_steps` receives the witness length. Running out of budget is not an
/// error: the verdict is `Inconclusive`.
///
/// # Safety
/// As [`dirflag_one_step`]; `out_verdict` and `out_steps` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_homotopy_search(
    system: DirflagSystem,
    g: *const DirflagDigraph,
    h: *const DirflagDigraph,
    f: *const usize,
    g_map: *const usize,
    budget: usize,
    out_verdict: *mut DirflagVerdict,
    out_steps: *mut usize,
) -> DirflagStatus {
    guard(|| {
        let (g, h) = (g.as_ref().ok_or_else(|| null("g"))?, h.as_ref().ok_or_else(|| null("h"))?);
        if out_verdict.is_null() || out_steps.is_null() {
            return Err(null("out"));
        }
        let (f, k) = maps(&g.graph, &h.graph, f, g_map)?;
        let outcome = multi_step_search(&f, &k, &g.graph, &h.graph, &system_of(system), budget).map_err(invalid)?;
        let (v, s) = match outcome {
            SearchOutcome::Found(w) => (DirflagVerdict::Found, w.len()),
            SearchOutcome::Absent { .. } => (DirflagVerdict::Absent, 0),
            SearchOutcome::Inconclusive { .. } => (DirflagVerdict::Inconclusive, 0),
        };
        *out_verdict = v;
        *out_steps = s;
        Ok(())
    })
}

/// Parse a weighted digraph (flag file or edge list; missing weights are 1).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_weighted_parse(text: *const c_char, out: *mut *mut DirflagWeightedDigraph) -> DirflagStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = text_arg(text, "text")?;
        let input = parse_graph(text).map_err(|e| (DirflagStatus::ParseError, e.to_string()))?;
        let graph = input.weighted().map_err(|e| (DirflagStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(DirflagWeightedDigraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirflag_weighted_free(g: *mut DirflagWeightedDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Persistence barcode of a weighted digraph. `max_degree` is ignored by
/// the grounded pipeline, which reports degree 1 only.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_compute(
    g: *const DirflagWeightedDigraph,
    pipeline: DirflagPipeline,
    max_degree: usize,
    prime: u64,
    out: *mut *mut DirflagBarcode,
) -> DirflagStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("g"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let field = field_of(prime)?;
        let barcode = match pipeline {
            DirflagPipeline::SpDfl => persistent_dfl_homology(&shortest_path_filtration(&g.graph), max_degree, field),
            DirflagPipeline::GroundedH1 => grounded_persistent_h1(&g.graph, field),
        };
        *out = Box::into_raw(Box::new(DirflagBarcode { barcode }));
        Ok(())
    })
}

/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_free(b: *mut DirflagBarcode) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of bars, or 0 for a null handle.
///
/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_len(b: *const DirflagBarcode) -> usize {
    b.as_ref().map_or(0, |b| b.barcode.bars().len())
}

/// Bar `index` in `(degree, birth, death)` order; an infinite death is
/// reported as `INFINITY`. Times are rounded to doubles; use
/// [`dirflag_barcode_csv`] for exact values.
///
/// # Safety
/// `b` must be a live handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_bar(
    b: *const DirflagBarcode,
    index: usize,
    degree: *mut usize,
    birth: *mut f64,
    death: *mut f64,
) -> DirflagStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        if degree.is_null() || birth.is_null() || death.is_null() {
            return Err(null("out"));
        }
        let bar = b.barcode.bars().get(index).ok_or_else(|| invalid(format!("bar index {index} out of range")))?;
        *degree = bar.degree;
        *birth = dirflag::rational::to_f64(&bar.birth);
        *death = bar.death.to_f64();
        Ok(())
    })
}

/// Exact CSV text (`degree,birth,death`, `inf` for infinite deaths). Free
/// the result with [`dirflag_string_free`].
///
/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_csv(b: *const DirflagBarcode, out: *mut *mut c_char) -> DirflagStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(b.barcode.to_csv()).map_err(invalid)?.into_raw();
        Ok(())
    })
}

/// Bottleneck distance in one degree; `INFINITY` when the infinite bars
/// cannot be matched.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dirflag_barcode_bottleneck(
    a: *const DirflagBarcode,
    b: *const DirflagBarcode,
    degree: usize,
    out: *mut f64,
) -> DirflagStatus {
    guard(|| {
        let (a, b) = (a.as_ref().ok_or_else(|| null("a"))?, b.as_ref().ok_or_else(|| null("b"))?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = bottleneck_distance(&a.barcode, &b.barcode, degree).to_f64();
        Ok(())
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dirflag_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
