//! Path complexes and ordered simplicial complexes, the functors `dFl` and
//! `A`, cylinders, simplicial closures and mapping cylinders.
//!
//! Every complex is truncated at a `max_dim` recorded in the value. Paths of
//! each degree are kept in lexicographic order with a hash index.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::digraph::{Digraph, VertexMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("path {0} uses a vertex outside 0..{1}")]
    VertexOutOfRange(ElementaryPath, usize),
    #[error("path {0} has degree above max_dim {1}")]
    AboveMaxDim(ElementaryPath, usize),
    #[error("singleton {0} is missing")]
    MissingSingleton(usize),
    #[error("path {path} is stored but its sub-path {missing} is not")]
    NotClosed { path: ElementaryPath, missing: ElementaryPath },
    #[error("path {0} is not simplicial")]
    NotSimplicial(ElementaryPath),
    #[error("map is not a weak path morphism: {0} is sent to {1}")]
    NotWeak(ElementaryPath, ElementaryPath),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A nonempty sequence of vertices `v0 … vk` (degree `k`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryPath(Vec<usize>);

impl ElementaryPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "elementary paths are nonempty");
        ElementaryPath(vertices)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_regular(&self) -> bool {
        is_regular(&self.0)
    }

    pub fn is_simplicial(&self) -> bool {
        is_simplicial(&self.0)
    }

    /// The path with entry `i` removed.
    pub fn face(&self, i: usize) -> ElementaryPath {
        let mut v = self.0.clone();
        v.remove(i);
        ElementaryPath(v)
    }

    pub fn map(&self, f: &VertexMap) -> ElementaryPath {
        ElementaryPath(self.0.iter().map(|&v| f.apply(v)).collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

pub(crate) fn is_regular(p: &[usize]) -> bool {
    p.windows(2).all(|w| w[0] != w[1])
}

pub(crate) fn is_simplicial(p: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    p.iter().all(|v| seen.insert(*v))
}

impl Deref for ElementaryPath {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl Borrow<[usize]> for ElementaryPath {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

impl From<&[usize]> for ElementaryPath {
    fn from(v: &[usize]) -> Self {
        ElementaryPath::new(v.to_vec())
    }
}

impl fmt::Debug for ElementaryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ElementaryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Level {
    paths: Vec<ElementaryPath>,
    index: HashMap<ElementaryPath, usize>,
}

impl Level {
    fn from_sorted(paths: Vec<ElementaryPath>) -> Self {
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Level { paths, index }
    }
}

/// A graded set of elementary paths on `0..vertex_count`, truncated at
/// `max_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathComplex {
    n: usize,
    max_dim: usize,
    levels: Vec<Level>,
}

impl PathComplex {
    /// Collect paths into a complex. Duplicates are merged; the result is not
    /// validated (see [`PathComplex::validate`]).
    pub fn from_paths<I>(vertex_count: usize, max_dim: usize, paths: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = ElementaryPath>,
    {
        let mut sets: Vec<BTreeSet<ElementaryPath>> = vec![BTreeSet::new(); max_dim + 1];
        for p in paths {
            if p.iter().any(|&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange(p, vertex_count));
            }
            if p.degree() > max_dim {
                return Err(ComplexError::AboveMaxDim(p, max_dim));
            }
            sets[p.degree()].insert(p);
        }
        Ok(Self::from_levels(vertex_count, max_dim, sets.into_iter().map(|s| s.into_iter().collect()).collect()))
    }

    fn from_levels(n: usize, max_dim: usize, levels: Vec<Vec<ElementaryPath>>) -> Self {
        debug_assert_eq!(levels.len(), max_dim + 1);
        debug_assert!(levels.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        PathComplex { n, max_dim, levels: levels.into_iter().map(Level::from_sorted).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Paths of degree `k`, sorted; empty above `max_dim`.
    pub fn paths(&self, k: usize) -> &[ElementaryPath] {
        self.levels.get(k).map_or(&[], |l| &l.paths)
    }

    pub fn count(&self, k: usize) -> usize {
        self.paths(k).len()
    }

    /// Per-degree path counts `0..=max_dim`.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.paths.len()).collect()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.index_of(p).is_some()
    }

    /// Position of `p` in the sorted list of its degree.
    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.levels.get(p.len().checked_sub(1)?)?.index.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ElementaryPath> {
        self.levels.iter().flat_map(|l| l.paths.iter())
    }

    pub fn is_regular(&self) -> bool {
        self.iter().all(|p| p.is_regular())
    }

    pub fn is_simplicial(&self) -> bool {
        self.iter().all(|p| p.is_simplicial())
    }

    /// Highest degree holding at least one path.
    pub fn top_nonempty_degree(&self) -> usize {
        (0..=self.max_dim).rev().find(|&k| self.count(k) > 0).unwrap_or(0)
    }

    /// Whether the top stored degree is empty, so that truncation lost
    /// nothing.
    pub fn is_saturated(&self) -> bool {
        self.count(self.max_dim) == 0
    }

    /// Check the singleton and truncation axioms. Irregular sub-paths are
    /// exempt, so that complexes carrying irregular paths (mapping cylinders
    /// of non-strong maps) can be validated too.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for v in 0..self.n {
            if !self.contains(&[v]) {
                return Err(ComplexError::MissingSingleton(v));
            }
        }
        for p in self.iter().filter(|p| p.degree() > 0) {
            for q in [&p[1..], &p[..p.len() - 1]] {
                if is_regular(q) && !self.contains(q) {
                    return Err(ComplexError::NotClosed { path: p.clone(), missing: q.into() });
                }
            }
        }
        Ok(())
    }

    /// Paths of degree at most `k`.
    pub fn skeleton(&self, k: usize) -> PathComplex {
        let k = k.min(self.max_dim);
        let levels = self.levels[..=k].iter().map(|l| l.paths.clone()).collect();
        PathComplex::from_levels(self.n, k, levels)
    }

    /// The maximal regular sub-complex.
    pub fn regularise(&self) -> PathComplex {
        let levels = self.levels.iter().map(|l| l.paths.iter().filter(|p| p.is_regular()).cloned().collect()).collect();
        PathComplex::from_levels(self.n, self.max_dim, levels)
    }

    /// Same paths, truncated lower (or kept) at `max_dim`.
    pub fn truncate(&self, max_dim: usize) -> PathComplex {
        self.skeleton(max_dim)
    }
}

/// A path complex whose paths are simplicial and closed under ordered subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedSimplicialComplex(PathComplex);

impl OrderedSimplicialComplex {
    /// Wrap a path complex after checking the simplicial axioms.
    pub fn new(p: PathComplex) -> Result<Self, ComplexError> {
        let k = OrderedSimplicialComplex(p);
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        for v in 0..self.0.n {
            if !self.0.contains(&[v]) {
                return Err(ComplexError::MissingSingleton(v));
            }
        }
        for p in self.0.iter() {
            if !p.is_simplicial() {
                return Err(ComplexError::NotSimplicial(p.clone()));
            }
            if p.degree() > 0 {
                for i in 0..p.len() {
                    let q = p.face(i);
                    if !self.0.contains(&q) {
                        return Err(ComplexError::NotClosed { path: p.clone(), missing: q });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn as_path_complex(&self) -> &PathComplex {
        &self.0
    }

    pub fn into_path_complex(self) -> PathComplex {
        self.0
    }

    pub fn skeleton(&self, k: usize) -> OrderedSimplicialComplex {
        OrderedSimplicialComplex(self.0.skeleton(k))
    }
}

impl Deref for OrderedSimplicialComplex {
    type Target = PathComplex;
    fn deref(&self) -> &PathComplex {
        &self.0
    }
}

/// All directed cliques of `g` with at most `max_dim + 1` vertices.
pub fn directed_flag_complex(g: &Digraph, max_dim: usize) -> OrderedSimplicialComplex {
    let n = g.vertex_count();
    let mut levels = vec![(0..n).map(|v| ElementaryPath(vec![v])).collect::<Vec<_>>()];
    for k in 1..=max_dim {
        let mut next = Vec::new();
        for p in &levels[k - 1] {
            let last = p[p.len() - 1];
            for &w in g.out_neighbors(last) {
                if p[..p.len() - 1].iter().all(|&u| g.has_edge(u, w)) {
                    let mut q = p.0.clone();
                    q.push(w);
                    next.push(ElementaryPath(q));
                }
            }
        }
        levels.push(next);
    }
    OrderedSimplicialComplex(PathComplex::from_levels(n, max_dim, levels))
}

/// All directed walks of `g` with at most `max_dim` edges.
pub fn allowed_path_complex(g: &Digraph, max_dim: usize) -> PathComplex {
    let n = g.vertex_count();
    let mut levels = vec![(0..n).map(|v| ElementaryPath(vec![v])).collect::<Vec<_>>()];
    for k in 1..=max_dim {
        let mut next = Vec::new();
        for p in &levels[k - 1] {
            for &w in g.out_neighbors(p[p.len() - 1]) {
                let mut q = p.0.clone();
                q.push(w);
                next.push(ElementaryPath(q));
            }
        }
        levels.push(next);
    }
    PathComplex::from_levels(n, max_dim, levels)
}

/// Cylinder vertex `(v, i)`.
#[inline]
pub fn cyl_vertex(v: usize, i: usize) -> usize {
    2 * v + i
}

/// Inverse of [`cyl_vertex`].
#[inline]
pub fn cyl_decode(u: usize) -> (usize, usize) {
    (u / 2, u % 2)
}

/// `(v0,0)…(vi,0)(vi,1)…(vk,1)`.
pub fn cylinder_lift_path(p: &[usize], i: usize) -> ElementaryPath {
    let mut q: Vec<usize> = p[..=i].iter().map(|&v| cyl_vertex(v, 0)).collect();
    q.extend(p[i..].iter().map(|&v| cyl_vertex(v, 1)));
    ElementaryPath(q)
}

fn level_copy(p: &[usize], i: usize) -> ElementaryPath {
    ElementaryPath(p.iter().map(|&v| cyl_vertex(v, i)).collect())
}

/// The cylinder `Cyl(P)` on `V × {0, 1}` (vertex `(v, i)` is `2v + i`),
/// truncated at `P.max_dim`.
pub fn cylinder(p: &PathComplex) -> PathComplex {
    let m = p.max_dim;
    let mut all = Vec::new();
    for q in p.iter() {
        all.push(level_copy(q, 0));
        all.push(level_copy(q, 1));
        if q.degree() < m {
            all.extend((0..q.len()).map(|i| cylinder_lift_path(q, i)));
        }
    }
    PathComplex::from_paths(2 * p.n, m, all).unwrap()
}

/// Simplicial closure of `Cyl(K)`: the cylinder together with every
/// `(v0,0)…(vi,0)(v_{i+1},1)…(vk,1)` for `v0…vk ∈ K`, `0 ≤ i < k`.
pub fn simplicial_closure_of_cylinder(k: &OrderedSimplicialComplex) -> OrderedSimplicialComplex {
    let cyl = cylinder(&k.0);
    let mut all: Vec<ElementaryPath> = cyl.iter().cloned().collect();
    for q in k.iter().filter(|q| q.degree() > 0) {
        for i in 0..q.degree() {
            let mut r: Vec<usize> = q[..=i].iter().map(|&v| cyl_vertex(v, 0)).collect();
            r.extend(q[i + 1..].iter().map(|&v| cyl_vertex(v, 1)));
            all.push(ElementaryPath(r));
        }
    }
    OrderedSimplicialComplex(PathComplex::from_paths(cyl.n, cyl.max_dim, all).unwrap())
}

/// Close a set of simplicial paths under ordered subsets. Exact when `p`
/// is saturated (nothing was cut off by truncation).
pub fn simplicial_closure(p: &PathComplex) -> Result<OrderedSimplicialComplex, ComplexError> {
    let mut all = BTreeSet::new();
    for q in p.iter() {
        if !q.is_simplicial() {
            return Err(ComplexError::NotSimplicial(q.clone()));
        }
        let len = q.len();
        for mask in 1u64..(1u64 << len) {
            let sub: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).map(|i| q[i]).collect();
            all.insert(ElementaryPath(sub));
        }
    }
    for v in 0..p.n {
        all.insert(ElementaryPath(vec![v]));
    }
    Ok(OrderedSimplicialComplex(PathComplex::from_paths(p.n, p.max_dim, all)?))
}

/// Mapping cylinder vertex `(x, 0)` for `x ∈ V(P1)`.
#[inline]
pub fn mapcyl_bottom(x: usize) -> usize {
    x
}

/// Mapping cylinder vertex `(y, 1)` for `y ∈ V(P2)`, given `|V(P1)|`.
#[inline]
pub fn mapcyl_top(source_count: usize, y: usize) -> usize {
    source_count + y
}

/// Mapping cylinder of a weak path morphism `f: P1 → P2`, on the disjoint
/// union `V(P1) ⊔ V(P2)` (see [`mapcyl_bottom`], [`mapcyl_top`]), truncated at
/// the smaller `max_dim`. The result carries irregular paths when `f` is not
/// strong; pass it through [`PathComplex::regularise`] before taking chains.
pub fn mapping_cylinder(f: &VertexMap, p1: &PathComplex, p2: &PathComplex) -> Result<PathComplex, ComplexError> {
    check_map_dims(f, p1, p2)?;
    if let Some((p, img)) = path_morphism_violation(f, p1, p2) {
        return Err(ComplexError::NotWeak(p, img));
    }
    let n1 = p1.n;
    let m = p1.max_dim.min(p2.max_dim);
    let mut all = Vec::new();
    for q in p1.iter().filter(|q| q.degree() <= m) {
        all.push(q.clone());
        if q.degree() < m {
            for i in 0..q.len() {
                let mut r: Vec<usize> = q[..=i].iter().map(|&x| mapcyl_bottom(x)).collect();
                r.extend(q[i..].iter().map(|&x| mapcyl_top(n1, f.apply(x))));
                all.push(ElementaryPath(r));
            }
        }
    }
    for q in p2.iter().filter(|q| q.degree() <= m) {
        all.push(ElementaryPath(q.iter().map(|&y| mapcyl_top(n1, y)).collect()));
    }
    PathComplex::from_paths(n1 + p2.n, m, all)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathMorphismClass {
    NotWeak,
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimplicialMorphismClass {
    NotWeak,
    Weak,
    TriangleCollapsing,
    Strong,
}

fn check_map_dims(f: &VertexMap, p1: &PathComplex, p2: &PathComplex) -> Result<(), ComplexError> {
    if f.source_count() != p1.n || f.target_count() != p2.n {
        return Err(ComplexError::DimensionMismatch(format!(
            "map {}→{} against complexes on {} and {} vertices",
            f.source_count(),
            f.target_count(),
            p1.n,
            p2.n
        )));
    }
    Ok(())
}

/// First path whose image is regular but absent from `p2`, scanning degrees
/// up to the smaller `max_dim`.
pub fn path_morphism_violation(
    f: &VertexMap,
    p1: &PathComplex,
    p2: &PathComplex,
) -> Option<(ElementaryPath, ElementaryPath)> {
    let m = p1.max_dim.min(p2.max_dim);
    p1.levels[..=m].iter().flat_map(|l| l.paths.iter()).find_map(|p| {
        let img = p.map(f);
        (img.is_regular() && !p2.contains(&img)).then(|| (p.clone(), img))
    })
}

/// Strongest path-morphism class of `f` over stored paths up to the smaller
/// `max_dim`.
pub fn classify_path_morphism(
    f: &VertexMap,
    p1: &PathComplex,
    p2: &PathComplex,
) -> Result<PathMorphismClass, ComplexError> {
    check_map_dims(f, p1, p2)?;
    let m = p1.max_dim.min(p2.max_dim);
    let mut strong = true;
    for p in p1.levels[..=m].iter().flat_map(|l| l.paths.iter()) {
        let img = p.map(f);
        if !p2.contains(&img) {
            if img.is_regular() {
                return Ok(PathMorphismClass::NotWeak);
            }
            strong = false;
        }
    }
    Ok(if strong { PathMorphismClass::Strong } else { PathMorphismClass::Weak })
}

/// Strongest simplicial-morphism class of `f` over stored simplices up to the
/// smaller `max_dim`.
pub fn classify_simplicial_morphism(
    f: &VertexMap,
    k1: &OrderedSimplicialComplex,
    k2: &OrderedSimplicialComplex,
) -> Result<SimplicialMorphismClass, ComplexError> {
    check_map_dims(f, &k1.0, &k2.0)?;
    let m = k1.max_dim.min(k2.max_dim);
    let mut strong = true;
    for p in k1.levels[..=m].iter().flat_map(|l| l.paths.iter()) {
        let img = p.map(f);
        if !k2.contains(&img) {
            if img.is_simplicial() {
                return Ok(SimplicialMorphismClass::NotWeak);
            }
            strong = false;
        }
    }
    if strong {
        return Ok(SimplicialMorphismClass::Strong);
    }
    let collapses = k1.paths(2).iter().any(|t| {
        let (a, b, c) = (f.apply(t[0]), f.apply(t[1]), f.apply(t[2]));
        a == c && a != b
    });
    Ok(if collapses { SimplicialMorphismClass::Weak } else { SimplicialMorphismClass::TriangleCollapsing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(v: &[usize]) -> ElementaryPath {
        ElementaryPath::new(v.to_vec())
    }

    // W=0, E=1, N=2, S=3
    fn suspended_pair() -> Digraph {
        Digraph::new(4, &[(0, 1), (1, 0), (2, 0), (2, 1), (3, 0), (3, 1)]).unwrap()
    }

    #[test]
    fn suspended_pair_flag_complex() {
        let k = directed_flag_complex(&suspended_pair(), 3);
        assert_eq!(k.counts(), vec![4, 6, 4, 0]);
        let tri: Vec<_> = k.paths(2).iter().map(|p| p.to_vec()).collect();
        assert_eq!(tri, vec![vec![2, 0, 1], vec![2, 1, 0], vec![3, 0, 1], vec![3, 1, 0]]);
        k.validate().unwrap();
        let a = allowed_path_complex(&suspended_pair(), 3);
        assert!(a.contains(&[1, 0, 1]));
        a.validate().unwrap();
    }

    #[test]
    fn small_counts() {
        let k3 = directed_flag_complex(&Digraph::complete(3), 2);
        assert_eq!(k3.counts(), vec![3, 6, 6]);
        let e = Digraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(allowed_path_complex(&e, 5).counts(), vec![2, 1, 0, 0, 0, 0]);
        assert_eq!(directed_flag_complex(&Digraph::empty(3), 2).counts(), vec![3, 0, 0]);
    }

    #[test]
    fn regularise_drops_irregular_paths() {
        let p = PathComplex::from_paths(2, 2, [path(&[0]), path(&[1]), path(&[0, 0]), path(&[0, 1]), path(&[0, 0, 1])])
            .unwrap();
        p.validate().unwrap();
        let r = p.regularise();
        assert_eq!(r.counts(), vec![2, 1, 0]);
        assert!(r.contains(&[0, 1]));
        assert_eq!(r.regularise(), r);
    }

    #[test]
    fn cylinder_of_singleton() {
        let p = PathComplex::from_paths(1, 1, [path(&[0])]).unwrap();
        let c = cylinder(&p);
        assert_eq!(c.counts(), vec![2, 1]);
        assert!(c.contains(&[0, 1]));
    }

    #[test]
    fn closure_of_single_edge() {
        let k = directed_flag_complex(&Digraph::new(2, &[(0, 1)]).unwrap(), 2);
        let cyl = cylinder(&k);
        let cl = simplicial_closure_of_cylinder(&k);
        let extra: Vec<_> = cl.iter().filter(|p| !cyl.contains(p)).cloned().collect();
        assert_eq!(extra, vec![path(&[cyl_vertex(0, 0), cyl_vertex(1, 1)])]);
        cl.validate().unwrap();
    }

    #[test]
    fn counterexample_weak_simplicial_not_tc() {
        let k1 = directed_flag_complex(&Digraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap(), 2);
        let k2 = directed_flag_complex(&Digraph::new(2, &[(0, 1), (1, 0)]).unwrap(), 2);
        let f = VertexMap::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(classify_simplicial_morphism(&f, &k1, &k2).unwrap(), SimplicialMorphismClass::Weak);
        assert_eq!(classify_path_morphism(&f, &k1, &k2).unwrap(), PathMorphismClass::NotWeak);
        let (p, img) = path_morphism_violation(&f, &k1, &k2).unwrap();
        assert_eq!((p.to_vec(), img.to_vec()), (vec![0, 1, 2], vec![0, 1, 0]));
    }

    #[test]
    fn mapping_cylinder_of_identity_is_cylinder() {
        let g = suspended_pair();
        let a = allowed_path_complex(&g, 2);
        let mc = mapping_cylinder(&VertexMap::identity(4), &a, &a).unwrap();
        let relabel: Vec<usize> = (0..8).map(|u| if u < 4 { cyl_vertex(u, 0) } else { cyl_vertex(u - 4, 1) }).collect();
        let relabel = VertexMap::new(relabel, 8).unwrap();
        let moved = PathComplex::from_paths(8, 2, mc.iter().map(|p| p.map(&relabel))).unwrap();
        assert_eq!(moved, cylinder(&a));
    }
}
