#![allow(dead_code)]

use proptest::prelude::*;

use dirflag::digraph::{classify_digraph_map, Digraph, VertexMap, WeightedDigraph};
use dirflag::rational::ratio;

/// Digraph on `lo..=hi` vertices, each ordered pair an edge with
/// probability `p`.
pub fn digraph(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Digraph> {
    (lo..=hi).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(p), n * n.saturating_sub(1)).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v);
            let edges: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Digraph::new(n, &edges).unwrap()
        })
    })
}

/// Weighted digraph with weights in {1/2, 1, …, 3}.
pub fn weighted(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = WeightedDigraph> {
    digraph(lo, hi, p).prop_flat_map(|g| {
        let m = g.edge_count();
        proptest::collection::vec(1i64..=6, m).prop_map(move |ws| {
            let edges = g.edges().zip(ws).map(|((u, v), w)| (u, v, ratio(w, 2))).collect();
            WeightedDigraph::new(g.vertex_count(), edges).unwrap()
        })
    })
}

pub fn map(n: usize, m: usize) -> impl Strategy<Value = VertexMap> {
    proptest::collection::vec(0..m, n).prop_map(move |v| VertexMap::new(v, m).unwrap())
}

/// `(G, H, f)` with `f` an arbitrary vertex map.
pub fn graphs_and_map(hi: usize) -> impl Strategy<Value = (Digraph, Digraph, VertexMap)> {
    (digraph(1, hi, 0.45), digraph(1, hi, 0.6)).prop_flat_map(|(g, h)| {
        let (n, m) = (g.vertex_count(), h.vertex_count());
        (Just(g), Just(h), map(n, m))
    })
}

/// `(G, H, f, g)` with two arbitrary vertex maps.
pub fn graphs_and_maps(hi: usize) -> impl Strategy<Value = (Digraph, Digraph, VertexMap, VertexMap)> {
    (digraph(1, hi, 0.45), digraph(1, hi, 0.6)).prop_flat_map(|(g, h)| {
        let (n, m) = (g.vertex_count(), h.vertex_count());
        (Just(g), Just(h), map(n, m), map(n, m))
    })
}

pub fn is_tc(f: &VertexMap, g: &Digraph, h: &Digraph) -> bool {
    classify_digraph_map(f, g, h).unwrap().is_tc()
}

pub fn is_weak(f: &VertexMap, g: &Digraph, h: &Digraph) -> bool {
    classify_digraph_map(f, g, h).unwrap().is_weak()
}
