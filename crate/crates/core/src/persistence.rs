//! Digraph filtrations, persistent directed-flag homology, bottleneck
//! distance, the grounded degree-1 pipeline and interleaving certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::{directed_flag_complex, ElementaryPath};
use crate::digraph::{
    classify_digraph_map, edge_subdivide, shortest_path_quasimetric, Digraph, GraphError, SubdivisionLayout,
    VertexMap, WeightedDigraph,
};
use crate::field::{Field, FieldSpec};
use crate::homotopy::{MultiStepWitness, SystemKind};
use crate::linalg::add_scaled;
use crate::rational::{format_rational, int, ExtRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PersistenceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
}

/// Entrance times of the ordered vertex pairs of a growing family of
/// digraphs. Pairs without an entry never enter. Vertices enter at their
/// `vertex_times` (zero unless set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    vertex_count: usize,
    vertex_times: Vec<Rational>,
    entrance: BTreeMap<(usize, usize), Rational>,
}

impl Filtration {
    pub fn new(vertex_count: usize) -> Self {
        Filtration { vertex_count, vertex_times: vec![Rational::zero(); vertex_count], entrance: BTreeMap::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn set_vertex_time(&mut self, v: usize, t: Rational) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.vertex_times[v] = t;
        Ok(())
    }

    /// Set the entrance time of `(u, v)`; `Infinity` removes the entry.
    pub fn set_entrance(&mut self, u: usize, v: usize, t: ExtRational) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match t {
            ExtRational::Finite(t) => self.entrance.insert((u, v), t),
            ExtRational::Infinity => self.entrance.remove(&(u, v)),
        };
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange { vertex: v, count: self.vertex_count });
        }
        Ok(())
    }

    pub fn vertex_time(&self, v: usize) -> &Rational {
        &self.vertex_times[v]
    }

    pub fn entrance_time(&self, u: usize, v: usize) -> ExtRational {
        self.entrance.get(&(u, v)).map_or(ExtRational::Infinity, |t| ExtRational::Finite(t.clone()))
    }

    /// Finite entries, in lexicographic pair order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.entrance.iter().map(|(k, t)| (*k, t))
    }

    /// Time at which the edge `(u, v)` is actually present: no earlier than
    /// either endpoint.
    fn effective(&self, u: usize, v: usize) -> Option<Rational> {
        let t = self.entrance.get(&(u, v))?;
        Some(t.max(&self.vertex_times[u]).max(&self.vertex_times[v]).clone())
    }

    /// All finite vertex and edge entrance times.
    pub fn critical_times(&self) -> BTreeSet<Rational> {
        self.vertex_times.iter().cloned().chain(self.entrance.values().cloned()).collect()
    }

    /// Vertices present at `t`.
    pub fn present_at(&self, t: &Rational) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| &self.vertex_times[v] <= t).collect()
    }

    /// The digraph at time `t` on the vertices present at `t`, together with
    /// the original index of each of its vertices.
    pub fn digraph_at(&self, t: &Rational) -> (Digraph, Vec<usize>) {
        let keep = self.present_at(t);
        let mut pos = vec![usize::MAX; self.vertex_count];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .entrance
            .keys()
            .filter(|&&(u, v)| self.effective(u, v).is_some_and(|e| &e <= t))
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        (Digraph::new(keep.len(), &edges).expect("filtration edges are valid"), keep)
    }

    /// The digraph of all edges that ever enter, on all vertices.
    pub fn final_digraph(&self) -> Digraph {
        let edges: Vec<(usize, usize)> = self.entrance.keys().copied().collect();
        Digraph::new(self.vertex_count, &edges).expect("filtration edges are valid")
    }

    /// Entrance time of a directed clique: the latest of its vertices and of
    /// the edges between them.
    pub fn simplex_time(&self, s: &[usize]) -> ExtRational {
        let mut t = s.iter().map(|&v| self.vertex_times[v].clone()).max().unwrap_or_else(Rational::zero);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                match self.entrance.get(&(s[i], s[j])) {
                    Some(e) if e > &t => t = e.clone(),
                    Some(_) => {}
                    None => return ExtRational::Infinity,
                }
            }
        }
        ExtRational::Finite(t)
    }
}

/// `(i, j)` enters when some directed path from `i` to `j` has length at most
/// the current time.
pub fn shortest_path_filtration(g: &WeightedDigraph) -> Filtration {
    let d = shortest_path_quasimetric(g);
    let mut f = Filtration::new(g.vertex_count());
    for (i, row) in d.into_iter().enumerate() {
        for (j, dij) in row.into_iter().enumerate() {
            if i != j {
                if let ExtRational::Finite(t) = dij {
                    f.entrance.insert((i, j), t);
                }
            }
        }
    }
    f
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bar {
    pub degree: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub birth: Rational,
    pub death: ExtRational,
}

impl Bar {
    pub fn new(degree: usize, birth: Rational, death: ExtRational) -> Self {
        debug_assert!(ExtRational::Finite(birth.clone()) < death);
        Bar { degree, birth, death }
    }

    pub fn is_infinite(&self) -> bool {
        !self.death.is_finite()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.birth <= t && ExtRational::Finite(t.clone()) < self.death
    }
}

/// A multiset of bars, kept sorted by `(degree, birth, death)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn in_degree(&self, k: usize) -> Vec<&Bar> {
        self.bars.iter().filter(|b| b.degree == k).collect()
    }

    /// Number of degree-`k` bars alive at `t`.
    pub fn rank_at(&self, k: usize, t: &Rational) -> usize {
        self.bars.iter().filter(|b| b.degree == k && b.contains(t)).count()
    }

    /// CSV with header `degree,birth,death`; infinite deaths print as `inf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,birth,death\n");
        for b in &self.bars {
            let _ = writeln!(s, "{},{},{}", b.degree, format_rational(&b.birth), b.death);
        }
        s
    }
}

/// Filtered chain complex with entries in non-decreasing time.
struct FilteredComplex {
    cells: Vec<(Rational, ElementaryPath)>,
}

impl FilteredComplex {
    fn sort(&mut self) {
        self.cells.sort_by(|a, b| (&a.0, a.1.degree(), &a.1).cmp(&(&b.0, b.1.degree(), &b.1)));
    }

    /// Standard column reduction; boundaries use the alternating face sum.
    fn barcode<F: Field>(&self, field: &F, max_degree: usize) -> Barcode {
        let index: HashMap<&[usize], usize> = self.cells.iter().enumerate().map(|(i, c)| (&c.1[..], i)).collect();
        let mut pivot_col: HashMap<usize, usize> = HashMap::new();
        let mut reduced: Vec<Vec<(usize, F::Elem)>> = Vec::with_capacity(self.cells.len());
        let mut paired = vec![false; self.cells.len()];
        let mut bars = Vec::new();
        for (j, (tj, s)) in self.cells.iter().enumerate() {
            let mut col: Vec<(usize, F::Elem)> = Vec::new();
            if s.degree() > 0 {
                let mut entries: Vec<(usize, F::Elem)> =
                    (0..s.len()).map(|i| (index[&s.face(i)[..]], field.sign(i))).collect();
                entries.sort_by_key(|e| e.0);
                col = crate::linalg::collect_sparse(field, entries);
            }
            while let Some((low, v)) = col.last().cloned() {
                let Some(&i) = pivot_col.get(&low) else { break };
                let other = &reduced[i];
                let c = field.neg(&field.div(&v, &other.last().unwrap().1));
                col = add_scaled(field, &col, &c, other);
            }
            if let Some((low, _)) = col.last() {
                pivot_col.insert(*low, j);
                paired[*low] = true;
                paired[j] = true;
                let (tb, b) = &self.cells[*low];
                if b.degree() <= max_degree && tb < tj {
                    bars.push(Bar::new(b.degree(), tb.clone(), ExtRational::Finite(tj.clone())));
                }
            }
            reduced.push(col);
        }
        for (i, (t, s)) in self.cells.iter().enumerate() {
            if !paired[i] && s.degree() <= max_degree {
                bars.push(Bar::new(s.degree(), t.clone(), ExtRational::Infinity));
            }
        }
        Barcode::new(bars)
    }
}

/// Persistent homology of the directed flag complexes of `filtration`, in
/// degrees `0..=max_degree`. Columns are ordered by time, then degree, then
/// lexicographically.
pub fn persistent_dfl_homology(filtration: &Filtration, max_degree: usize, field: FieldSpec) -> Barcode {
    let fc = flag_filtered_complex(filtration, max_degree + 1);
    crate::with_field!(field, |f| fc.barcode(&f, max_degree))
}

fn flag_filtered_complex(filtration: &Filtration, top: usize) -> FilteredComplex {
    let flag = directed_flag_complex(&filtration.final_digraph(), top);
    let mut cells = Vec::new();
    for p in flag.iter() {
        if let ExtRational::Finite(t) = filtration.simplex_time(p) {
            cells.push((t, p.clone()));
        }
    }
    let mut fc = FilteredComplex { cells };
    fc.sort();
    fc
}

/// Entrance time of the edges of `G` itself in the grounded pipeline: the
/// global minimum entrance time, which is that of the vertices.
pub const GROUNDING_TIME: i64 = 0;

/// Degree-1 persistence of the grounded complex of `g`: vertices and the
/// edges of `g ∪ SP(g)_t` below, directed 3-cliques of `SP(g)_t` above.
/// Edges of `g` enter at [`GROUNDING_TIME`], other edges at their
/// shortest-path distance.
pub fn grounded_persistent_h1(g: &WeightedDigraph, field: FieldSpec) -> Barcode {
    let sp = shortest_path_filtration(g);
    let ground = int(GROUNDING_TIME);
    let mut cells: Vec<(Rational, ElementaryPath)> =
        (0..g.vertex_count()).map(|v| (ground.clone(), ElementaryPath::new(vec![v]))).collect();
    let mut edges: BTreeMap<(usize, usize), Rational> = sp.entrance.clone();
    for (u, v) in g.graph().edges() {
        edges.insert((u, v), ground.clone());
    }
    cells.extend(edges.into_iter().map(|((u, v), t)| (t, ElementaryPath::new(vec![u, v]))));
    let flag = directed_flag_complex(&sp.final_digraph(), 2);
    for p in flag.paths(2) {
        if let ExtRational::Finite(t) = sp.simplex_time(p) {
            cells.push((t, p.clone()));
        }
    }
    let mut fc = FilteredComplex { cells };
    fc.sort();
    let full = crate::with_field!(field, |f| fc.barcode(&f, 1));
    Barcode::new(full.bars.into_iter().filter(|b| b.degree == 1).collect())
}

/// Sup-norm distance between entrance-time functions. `∞ − ∞` counts as 0
/// and a finite time against `∞` as `∞`. Vertex times are compared too.
pub fn entrance_time_linf(f1: &Filtration, f2: &Filtration) -> Result<ExtRational, PersistenceError> {
    if f1.vertex_count != f2.vertex_count {
        return Err(PersistenceError::VertexCountMismatch(f1.vertex_count, f2.vertex_count));
    }
    let mut best = ExtRational::zero();
    for (a, b) in f1.vertex_times.iter().zip(&f2.vertex_times) {
        best = best.max(ExtRational::Finite(abs(a - b)));
    }
    let keys: BTreeSet<(usize, usize)> = f1.entrance.keys().chain(f2.entrance.keys()).copied().collect();
    for (u, v) in keys {
        best = best.max(f1.entrance_time(u, v).abs_diff(&f2.entrance_time(u, v)));
    }
    Ok(best)
}

fn abs(r: Rational) -> Rational {
    if r < Rational::zero() {
        -r
    } else {
        r
    }
}

/// Bottleneck distance between the degree-`k` parts of two barcodes.
///
/// Infinite bars can only be matched with each other; sorted births give an
/// optimal matching for them. Finite bars are matched by binary search over
/// the finite set of candidate costs with a perfect-matching feasibility
/// test, where any bar may also be sent to the diagonal at half its length.
pub fn bottleneck_distance(b1: &Barcode, b2: &Barcode, k: usize) -> ExtRational {
    let split = |b: &Barcode| {
        let (inf, fin): (Vec<&Bar>, Vec<&Bar>) = b.bars.iter().filter(|x| x.degree == k).partition(|x| x.is_infinite());
        let inf: Vec<Rational> = inf.iter().map(|x| x.birth.clone()).collect();
        let fin: Vec<(Rational, Rational)> =
            fin.iter().map(|x| (x.birth.clone(), x.death.finite().unwrap().clone())).collect();
        (inf, fin)
    };
    let (i1, f1) = split(b1);
    let (i2, f2) = split(b2);
    if i1.len() != i2.len() {
        return ExtRational::Infinity;
    }
    let mut best = Rational::zero();
    for (a, b) in i1.iter().zip(&i2) {
        best = best.max(abs(a - b));
    }
    ExtRational::Finite(best.max(finite_bottleneck(&f1, &f2)))
}

fn finite_bottleneck(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Rational {
    let half = |x: &(Rational, Rational)| (&x.1 - &x.0) / int(2);
    let cost = |x: &(Rational, Rational), y: &(Rational, Rational)| abs(&x.0 - &y.0).max(abs(&x.1 - &y.1));
    let mut cands: BTreeSet<Rational> = BTreeSet::new();
    cands.insert(Rational::zero());
    cands.extend(a.iter().chain(b).map(half));
    for x in a {
        for y in b {
            cands.insert(cost(x, y));
        }
    }
    let cands: Vec<Rational> = cands.into_iter().collect();
    let (n, m) = (a.len(), b.len());
    // left: a_0..a_n, then diagonal copies of b; right: b_0..b_m, then diagonal copies of a
    let feasible = |eps: &Rational| -> bool {
        let adj: Vec<Vec<usize>> = (0..n + m)
            .map(|l| {
                if l < n {
                    let mut r: Vec<usize> = (0..m).filter(|&j| &cost(&a[l], &b[j]) <= eps).collect();
                    if &half(&a[l]) <= eps {
                        r.push(m + l);
                    }
                    r
                } else {
                    let j = l - n;
                    let mut r = Vec::new();
                    if &half(&b[j]) <= eps {
                        r.push(j);
                    }
                    r.extend(m..m + n);
                    r
                }
            })
            .collect();
        perfect_matching(&adj, n + m)
    };
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo].clone()
}

/// Kuhn's augmenting-path algorithm; true when every left vertex is matched.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if !seen[r] {
                seen[r] = true;
                if owner[r].map_or(true, |o| augment(o, adj, seen, owner)) {
                    owner[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(l, adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

/// Witnesses indexed by the time from which each applies. A `None` key
/// applies from `-∞`. At time `t` the entry with the largest key `≤ t` is
/// used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSchedule {
    entries: Vec<(Option<Rational>, MultiStepWitness)>,
}

impl WitnessSchedule {
    pub fn uniform(w: MultiStepWitness) -> Self {
        WitnessSchedule { entries: vec![(None, w)] }
    }

    pub fn new(mut entries: Vec<(Option<Rational>, MultiStepWitness)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        WitnessSchedule { entries }
    }

    pub fn entries(&self) -> &[(Option<Rational>, MultiStepWitness)] {
        &self.entries
    }

    pub fn at(&self, t: &Rational) -> Option<&MultiStepWitness> {
        self.entries.iter().rev().find(|(from, _)| from.as_ref().map_or(true, |f| f <= t)).map(|e| &e.1)
    }
}

/// Data for a `δ`-interleaving up to `≃_dFl` between two filtrations:
/// `f: V1 → V2`, `g: V2 → V1`, and zig-zags from `g∘f` to the identity in
/// `Sys[dFl](F1(t), F1(t+2δ))` and from `f∘g` to the identity in
/// `Sys[dFl](F2(t), F2(t+2δ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingCertificate {
    pub delta: Rational,
    pub f: VertexMap,
    pub g: VertexMap,
    pub witnesses_gf: WitnessSchedule,
    pub witnesses_fg: WitnessSchedule,
}

/// Summary of a successful interleaving check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingReport {
    /// Upper bound on the interleaving distance implied by the certificate.
    pub bound: Rational,
    pub times_checked: usize,
}

/// Check an interleaving certificate at every critical value. Between
/// consecutive values of `{e − s : e an entrance time, s ∈ {0, δ, 2δ}}`
/// every digraph involved is constant, so this covers all `t`. Failures are
/// listed per time.
pub fn verify_interleaving_certificate(
    f1: &Filtration,
    f2: &Filtration,
    cert: &InterleavingCertificate,
) -> Result<InterleavingReport, Vec<String>> {
    let (n1, n2) = (f1.vertex_count, f2.vertex_count);
    let mut failures = Vec::new();
    if cert.delta < Rational::zero() {
        failures.push("δ is negative".to_string());
    }
    if cert.f.source_count() != n1 || cert.f.target_count() != n2 {
        failures.push("f has the wrong shape".to_string());
    }
    if cert.g.source_count() != n2 || cert.g.target_count() != n1 {
        failures.push("g has the wrong shape".to_string());
    }
    if !failures.is_empty() {
        return Err(failures);
    }
    let d = &cert.delta;
    let d2 = d * int(2);
    let mut times = BTreeSet::new();
    for e in f1.critical_times().into_iter().chain(f2.critical_times()) {
        for s in [Rational::zero(), d.clone(), d2.clone()] {
            times.insert(&e - &s);
        }
    }
    let gf = cert.g.after(&cert.f);
    let fg = cert.f.after(&cert.g);
    for t in &times {
        let td = t + d;
        let t2d = t + &d2;
        let label = format_rational(t);
        if let Err(e) = check_shifted_map(&cert.f, f1, f2, t, &td) {
            failures.push(format!("t = {label}: f: {e}"));
        }
        if let Err(e) = check_shifted_map(&cert.g, f2, f1, t, &td) {
            failures.push(format!("t = {label}: g: {e}"));
        }
        for (name, sched, comp, fil) in [("g∘f", &cert.witnesses_gf, &gf, f1), ("f∘g", &cert.witnesses_fg, &fg, f2)] {
            match sched.at(t) {
                None => failures.push(format!("t = {label}: no {name} witness")),
                Some(w) => {
                    if let Err(e) = check_transition_witness(w, comp, fil, t, &t2d) {
                        failures.push(format!("t = {label}: {name} witness: {e}"));
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(InterleavingReport { bound: d.clone(), times_checked: times.len() })
    } else {
        Err(failures)
    }
}

/// Restrict `m` to the vertices present in `src` at `s`, landing in those
/// present in `dst` at `t`.
fn restrict(m: &VertexMap, src: &[usize], dst: &[usize], dst_count: usize) -> Result<VertexMap, String> {
    let mut pos = vec![usize::MAX; dst_count];
    for (i, &v) in dst.iter().enumerate() {
        pos[v] = i;
    }
    let image = src
        .iter()
        .map(|&v| {
            let w = m.apply(v);
            if pos[w] == usize::MAX {
                Err(format!("vertex {v} is sent to {w}, which is not yet present"))
            } else {
                Ok(pos[w])
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexMap::new(image, dst.len()).unwrap())
}

fn check_shifted_map(m: &VertexMap, a: &Filtration, b: &Filtration, s: &Rational, t: &Rational) -> Result<(), String> {
    let (ga, ka) = a.digraph_at(s);
    let (gb, kb) = b.digraph_at(t);
    let r = restrict(m, &ka, &kb, b.vertex_count)?;
    let class = classify_digraph_map(&r, &ga, &gb).map_err(|e| e.to_string())?;
    if !class.is_tc() {
        return Err(format!("not triangle-collapsing ({class:?})"));
    }
    Ok(())
}

fn check_transition_witness(
    w: &MultiStepWitness,
    start: &VertexMap,
    fil: &Filtration,
    s: &Rational,
    t: &Rational,
) -> Result<(), String> {
    let n = fil.vertex_count;
    if w.source() != start {
        return Err("does not start at the composite".into());
    }
    if w.target() != &VertexMap::identity(n) {
        return Err("does not end at the identity".into());
    }
    let (ga, ka) = fil.digraph_at(s);
    let (gb, kb) = fil.digraph_at(t);
    let maps = w.maps().iter().map(|m| restrict(m, &ka, &kb, n)).collect::<Result<Vec<_>, _>>()?;
    let restricted = MultiStepWitness::new(maps, w.directions().to_vec()).map_err(|e| e.to_string())?;
    restricted.verify(&SystemKind::Dfl, &ga, &gb).map_err(|e| e.to_string())
}

/// A failed `δ`-shifting condition for the pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftViolation {
    pub i: usize,
    pub j: usize,
    pub reason: String,
}

/// Whether `f: V(G) → V(H)` induces weak maps `SP(G)_t → SP(H)_{t+δ}` and
/// `G ∪ SP(G)_t → H ∪ SP(H)_{t+δ}` for all `t ≥ 0`. That reduces to
/// `d_H(f i, f j) ≤ d_G(i, j) + δ` whenever `f i ≠ f j`, and for each edge
/// `(i, j)` of `G` to `f i → f j` in `H` or `d_H(f i, f j) ≤ δ`.
pub fn check_delta_shifting(
    f: &VertexMap,
    g: &WeightedDigraph,
    h: &WeightedDigraph,
    delta: &Rational,
) -> Result<(), Vec<ShiftViolation>> {
    if f.source_count() != g.vertex_count() || f.target_count() != h.vertex_count() {
        return Err(vec![ShiftViolation { i: 0, j: 0, reason: "map has the wrong shape".into() }]);
    }
    let dg = shortest_path_quasimetric(g);
    let dh = shortest_path_quasimetric(h);
    let mut out = Vec::new();
    for (i, row) in dg.iter().enumerate() {
        for (j, dij) in row.iter().enumerate() {
            let (fi, fj) = (f.apply(i), f.apply(j));
            if i == j || fi == fj {
                continue;
            }
            if dij.is_finite() && dh[fi][fj] > dij.add_finite(delta) {
                out.push(ShiftViolation {
                    i,
                    j,
                    reason: format!("d_H(f {i}, f {j}) = {} exceeds d_G({i}, {j}) + δ = {}", dh[fi][fj], dij.add_finite(delta)),
                });
            }
            if g.graph().has_edge(i, j) && !h.graph().has_edge(fi, fj) && dh[fi][fj] > ExtRational::Finite(delta.clone()) {
                out.push(ShiftViolation { i, j, reason: format!("edge ({i}, {j}) is not carried into H ∪ SP(H)_δ") });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Grounded codistortion of `(g, f)` at most `δ`: with `G_diff` the edges of
/// `G` moved by `g∘f` and `V_fix` the vertices it fixes, both `id` and `g∘f`
/// must be triangle-collapsing `G_diff → SP(G)_{2δ}` and the supplied
/// zig-zag, from `g∘f` to `id`, must verify relative `V_fix`.
pub fn check_grounded_codistortion(
    gr: &WeightedDigraph,
    f: &VertexMap,
    g: &VertexMap,
    delta: &Rational,
    witness: &MultiStepWitness,
) -> Result<(), Vec<String>> {
    let n = gr.vertex_count();
    if f.source_count() != n || g.target_count() != n || f.target_count() != g.source_count() {
        return Err(vec!["maps have the wrong shape".into()]);
    }
    let gf = g.after(f);
    let fixed: Vec<usize> = (0..n).filter(|&v| gf.apply(v) == v).collect();
    let diff_edges: Vec<(usize, usize)> =
        gr.graph().edges().filter(|&(u, v)| (gf.apply(u), gf.apply(v)) != (u, v)).collect();
    let g_diff = Digraph::new(n, &diff_edges).expect("subgraph of a digraph");
    let sp = shortest_path_filtration(gr);
    let two_delta = delta * int(2);
    let (target, _) = sp.digraph_at(&two_delta);
    let mut failures = Vec::new();
    let id = VertexMap::identity(n);
    for (name, m) in [("id", &id), ("g∘f", &gf)] {
        match classify_digraph_map(m, &g_diff, &target) {
            Ok(c) if c.is_tc() => {}
            Ok(c) => failures.push(format!("{name} is {c:?} into SP(G)_2δ")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    if witness.source() != &gf || witness.target() != &id {
        failures.push("witness must run from g∘f to the identity".into());
    }
    if failures.is_empty() {
        if let Err(e) = witness.verify(&SystemKind::DflRel(fixed), &g_diff, &target) {
            failures.push(format!("witness {e}"));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

/// Subdivide `g` by `parts` and build the interleaving certificate between
/// `SP(g)` and `SP` of the subdivision: `f` includes the original vertices,
/// `g` rounds each fresh vertex to the nearer end of its edge (ties to the
/// head), and the zig-zag `f∘g ← h → id` goes through the map `h` that
/// rounds only the fresh vertices in the first half of an edge. `δ` is the
/// largest subdivided weight.
pub fn subdivision_certificate(
    g: &WeightedDigraph,
    parts: &BTreeMap<(usize, usize), Vec<Rational>>,
) -> Result<(WeightedDigraph, SubdivisionLayout, InterleavingCertificate), GraphError> {
    let (sub, layout) = edge_subdivide(g, parts)?;
    let (n, m) = (g.vertex_count(), sub.vertex_count());
    let delta = parts.keys().filter_map(|&(u, v)| g.weight(u, v)).max().cloned().unwrap_or_else(Rational::zero);
    let f = VertexMap::new((0..n).collect(), m)?;
    let mut round = (0..m).map(|v| v.min(n.saturating_sub(1))).collect::<Vec<_>>();
    let mut h_img: Vec<usize> = (0..m).collect();
    let half = Rational::new(One::one(), 2.into());
    for (v, (s, t), _, before) in layout.fresh_vertices() {
        if before < half {
            round[v] = s;
            h_img[v] = s;
        } else {
            round[v] = t;
        }
    }
    let gmap = VertexMap::new(round, n)?;
    let h = VertexMap::new(h_img, m)?;
    let fg = f.after(&gmap);
    let w_fg = MultiStepWitness::new(vec![fg, h, VertexMap::identity(m)], vec![false, true])
        .expect("well-formed zig-zag");
    let cert = InterleavingCertificate {
        delta,
        f,
        g: gmap,
        witnesses_gf: WitnessSchedule::uniform(MultiStepWitness::trivial(VertexMap::identity(n))),
        witnesses_fg: WitnessSchedule::uniform(w_fg),
    };
    Ok((sub, layout, cert))
}
