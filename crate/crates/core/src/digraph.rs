//! Simple digraphs, weighted digraphs, vertex maps and their classification,
//! graph products and shortest-path distances.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_traits::Zero;

use crate::rational::{is_positive, ExtRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, String),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("subdivision of ({0}, {1}) is invalid: {2}")]
    BadSubdivision(usize, usize, String),
    #[error("label table has {labels} names for {count} vertices")]
    LabelCount { labels: usize, count: usize },
    #[error("map dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A simple directed graph on the vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    adj: Vec<bool>,
    labels: Option<Vec<String>>,
}

impl Digraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = vertex_count;
        let mut adj = vec![false; n * n];
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, count: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u * n + v] {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u * n + v] = true;
            out[u].push(v);
            inn[v].push(u);
        }
        out.iter_mut().for_each(|l| l.sort_unstable());
        inn.iter_mut().for_each(|l| l.sort_unstable());
        Ok(Digraph { n, out, inn, adj, labels: None })
    }

    /// The edgeless digraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Digraph::new(n, &[]).unwrap()
    }

    /// Every ordered pair of distinct vertices is an edge.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        Digraph::new(n, &edges).unwrap()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { labels: labels.len(), count: self.n });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of `v`, falling back to its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// `u ⇒≤ v`: either `u == v` or `u → v`.
    #[inline]
    pub fn tooreq(&self, u: usize, v: usize) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    /// Vertices adjacent to `v` in either direction, sorted.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out[v].iter().chain(&self.inn[v]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Directed 3-cliques `(v0, v1, v2)` with `v0→v1`, `v0→v2`, `v1→v2`.
    pub fn triangles(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges().flat_map(move |(a, b)| {
            self.out[b].iter().filter(move |&&c| self.has_edge(a, c)).map(move |&c| (a, b, c))
        })
    }

    /// Subgraph induced on `keep` (sorted, distinct); vertex `i` of the
    /// result is `keep[i]`.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|(u, v)| (pos[u], pos[v]))
            .collect();
        let mut g = Digraph::new(keep.len(), &edges).unwrap();
        if let Some(l) = &self.labels {
            g.labels = Some(keep.iter().map(|&v| l[v].clone()).collect());
        }
        g
    }

    /// Union of edge sets on the same vertex set.
    pub fn union(&self, other: &Digraph) -> Result<Digraph, GraphError> {
        if self.n != other.n {
            return Err(GraphError::DimensionMismatch(format!("{} vs {} vertices", self.n, other.n)));
        }
        let edges: Vec<_> = (0..self.n)
            .flat_map(|u| (0..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.has_edge(u, v) || other.has_edge(u, v))
            .collect();
        Digraph::new(self.n, &edges)
    }
}

/// The digraph with vertices `0, 1` and the single edge `0 → 1`.
pub fn unit_interval() -> Digraph {
    Digraph::new(2, &[(0, 1)]).unwrap()
}

/// Box product. Vertex `(x, y)` is encoded as `x * |V(H)| + y`.
pub fn box_product(g: &Digraph, h: &Digraph) -> Digraph {
    product(g, h, false)
}

/// Cross (strong-style) product, with the same vertex encoding as
/// [`box_product`].
pub fn cross_product(g: &Digraph, h: &Digraph) -> Digraph {
    product(g, h, true)
}

fn product(g: &Digraph, h: &Digraph, cross: bool) -> Digraph {
    let m = h.vertex_count();
    let n = g.vertex_count() * m;
    let mut edges = Vec::new();
    for x in 0..g.vertex_count() {
        for y in 0..m {
            for x2 in 0..g.vertex_count() {
                for y2 in 0..m {
                    let (ex, ey) = (x == x2, y == y2);
                    let ok = if cross {
                        g.tooreq(x, x2) && h.tooreq(y, y2) && !(ex && ey)
                    } else {
                        (ex && h.has_edge(y, y2)) || (g.has_edge(x, x2) && ey)
                    };
                    if ok {
                        edges.push((x * m + y, x2 * m + y2));
                    }
                }
            }
        }
    }
    Digraph::new(n, &edges).unwrap()
}

/// Weakly connected components, each sorted, ordered by smallest vertex.
pub fn weak_components(g: &Digraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut parts = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = parts.len();
        let mut stack = vec![s];
        let mut part = Vec::new();
        comp[s] = id;
        while let Some(v) = stack.pop() {
            part.push(v);
            for &w in g.out_neighbors(v).iter().chain(g.in_neighbors(v)) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

/// Unordered pairs `{u, v}` (reported as `u < v`) with both `u→v` and `v→u`.
pub fn reciprocal_pairs(g: &Digraph) -> Vec<(usize, usize)> {
    g.edges().filter(|&(u, v)| u < v && g.has_edge(v, u)).collect()
}

pub fn is_oriented(g: &Digraph) -> bool {
    reciprocal_pairs(g).is_empty()
}

/// A raw map of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMap {
    target_count: usize,
    image: Vec<usize>,
}

impl VertexMap {
    pub fn new(image: Vec<usize>, target_count: usize) -> Result<Self, GraphError> {
        if let Some(&bad) = image.iter().find(|&&v| v >= target_count) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, count: target_count });
        }
        Ok(VertexMap { target_count, image })
    }

    pub fn identity(n: usize) -> Self {
        VertexMap { target_count: n, image: (0..n).collect() }
    }

    pub fn constant(source_count: usize, target_count: usize, value: usize) -> Self {
        assert!(value < target_count);
        VertexMap { target_count, image: vec![value; source_count] }
    }

    pub fn source_count(&self) -> usize {
        self.image.len()
    }

    pub fn target_count(&self) -> usize {
        self.target_count
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &VertexMap) -> VertexMap {
        assert_eq!(first.target_count, self.source_count(), "maps are not composable");
        VertexMap { target_count: self.target_count, image: first.image.iter().map(|&v| self.image[v]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_count];
        self.image.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub(crate) fn check_dims(&self, g: &Digraph, h: &Digraph) -> Result<(), GraphError> {
        if self.source_count() != g.vertex_count() || self.target_count != h.vertex_count() {
            return Err(GraphError::DimensionMismatch(format!(
                "map {}→{} against digraphs with {} and {} vertices",
                self.source_count(),
                self.target_count,
                g.vertex_count(),
                h.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Strongest class a vertex map satisfies between two digraphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DigraphMapClass {
    NotWeak,
    Weak,
    TriangleCollapsing,
    Strong,
}

impl DigraphMapClass {
    pub fn is_weak(self) -> bool {
        self >= DigraphMapClass::Weak
    }

    pub fn is_tc(self) -> bool {
        self >= DigraphMapClass::TriangleCollapsing
    }
}

pub fn classify_digraph_map(f: &VertexMap, g: &Digraph, h: &Digraph) -> Result<DigraphMapClass, GraphError> {
    f.check_dims(g, h)?;
    let mut strong = true;
    for (u, v) in g.edges() {
        let (a, b) = (f.apply(u), f.apply(v));
        if a == b {
            strong = false;
        } else if !h.has_edge(a, b) {
            return Ok(DigraphMapClass::NotWeak);
        }
    }
    if strong {
        return Ok(DigraphMapClass::Strong);
    }
    let collapses = g.triangles().any(|(a, b, c)| f.apply(a) == f.apply(c) && f.apply(a) != f.apply(b));
    Ok(if collapses { DigraphMapClass::Weak } else { DigraphMapClass::TriangleCollapsing })
}

/// A digraph with strictly positive rational edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    graph: Digraph,
    weights: BTreeMap<(usize, usize), Rational>,
}

impl WeightedDigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self, GraphError> {
        let pairs: Vec<_> = edges.iter().map(|(u, v, _)| (*u, *v)).collect();
        let graph = Digraph::new(vertex_count, &pairs)?;
        let mut weights = BTreeMap::new();
        for (u, v, w) in edges {
            if !is_positive(&w) {
                return Err(GraphError::NonPositiveWeight(u, v, crate::rational::format_rational(&w)));
            }
            weights.insert((u, v), w);
        }
        Ok(WeightedDigraph { graph, weights })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        self.graph = self.graph.with_labels(labels)?;
        Ok(self)
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.weights.get(&(u, v))
    }

    /// `(u, v, w)` in lexicographic edge order.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.weights.iter().map(|(&(u, v), w)| (u, v, w))
    }
}

/// All-pairs directed shortest-path lengths, `+∞` when unreachable.
pub fn shortest_path_quasimetric(g: &WeightedDigraph) -> Vec<Vec<ExtRational>> {
    let n = g.vertex_count();
    (0..n)
        .map(|s| {
            let mut dist: Vec<Option<Rational>> = vec![None; n];
            let mut done = vec![false; n];
            let mut heap = BinaryHeap::new();
            dist[s] = Some(Rational::zero());
            heap.push(Reverse((Rational::zero(), s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if done[u] {
                    continue;
                }
                done[u] = true;
                for &v in g.graph.out_neighbors(u) {
                    let nd = &d + &g.weights[&(u, v)];
                    if dist[v].as_ref().map_or(true, |old| nd < *old) {
                        dist[v] = Some(nd.clone());
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            dist.into_iter().map(|d| d.map_or(ExtRational::Infinity, ExtRational::Finite)).collect()
        })
        .collect()
}

/// Replacement of selected edges by weighted directed chains.
///
/// `parts[e]` lists the proportions `S(e)_0, …, S(e)_d`; the edge `e = (s, t)`
/// becomes `s → v_1 → … → v_d → t` with the `i`-th edge weighted
/// `S(e)_i · w(e)`. Fresh vertices are numbered from `vertex_count` upward,
/// in key order of `parts`, and are recorded in the returned layout.
pub fn edge_subdivide(
    g: &WeightedDigraph,
    parts: &BTreeMap<(usize, usize), Vec<Rational>>,
) -> Result<(WeightedDigraph, SubdivisionLayout), GraphError> {
    let mut next = g.vertex_count();
    let mut edges = Vec::new();
    let mut chains = BTreeMap::new();
    for (&(u, v), props) in parts {
        let w = g.weight(u, v).ok_or(GraphError::NotAnEdge(u, v))?;
        if props.is_empty() {
            return Err(GraphError::BadSubdivision(u, v, "no proportions".into()));
        }
        if props.iter().any(|p| !is_positive(p)) {
            return Err(GraphError::BadSubdivision(u, v, "proportions must be positive".into()));
        }
        let total: Rational = props.iter().sum();
        if total != crate::rational::one() {
            return Err(GraphError::BadSubdivision(u, v, format!("proportions sum to {}", total)));
        }
        let inner: Vec<usize> = (next..next + props.len() - 1).collect();
        next += inner.len();
        let mut chain = vec![u];
        chain.extend(&inner);
        chain.push(v);
        for (i, p) in props.iter().enumerate() {
            edges.push((chain[i], chain[i + 1], p * w));
        }
        chains.insert((u, v), SubdividedEdge { inner, proportions: props.clone() });
    }
    for (u, v, w) in g.weighted_edges() {
        if !parts.contains_key(&(u, v)) {
            edges.push((u, v, w.clone()));
        }
    }
    edges.sort_by_key(|e| (e.0, e.1));
    let out = WeightedDigraph::new(next, edges)?;
    Ok((out, SubdivisionLayout { original_count: g.vertex_count(), chains }))
}

/// Where the fresh vertices of a subdivision went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionLayout {
    pub original_count: usize,
    pub chains: BTreeMap<(usize, usize), SubdividedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedEdge {
    /// `v_{e,1}, …, v_{e,d}` in chain order.
    pub inner: Vec<usize>,
    pub proportions: Vec<Rational>,
}

impl SubdivisionLayout {
    /// For each fresh vertex: its edge, its 1-based chain position `i`, and
    /// the fraction `Σ_{j<i} S(e)_j` of the edge lying before it.
    pub fn fresh_vertices(&self) -> Vec<(usize, (usize, usize), usize, Rational)> {
        let mut out = Vec::new();
        for (&e, chain) in &self.chains {
            let mut before = Rational::zero();
            for (k, &v) in chain.inner.iter().enumerate() {
                before += &chain.proportions[k];
                out.push((v, e, k + 1, before.clone()));
            }
        }
        out.sort_by_key(|x| x.0);
        out
    }
}
