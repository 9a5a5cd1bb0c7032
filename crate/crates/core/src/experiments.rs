//! Seeded experiment drivers and the random instance generators they share
//! with the test suites. Reports are JSON documents that depend only on the
//! experiment name, seed and trial count.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chains::{flag_betti_numbers, omega_complex};
use crate::complexes::{directed_flag_complex, simplicial_closure_of_cylinder};
use crate::digraph::{cross_product, unit_interval, Digraph, WeightedDigraph};
use crate::field::{FieldSpec, Rationals};
use crate::persistence::{
    bottleneck_distance, persistent_dfl_homology, shortest_path_filtration, subdivision_certificate,
    verify_interleaving_certificate, Barcode,
};
use crate::rational::{format_rational, int, ratio, ExtRational, Rational};

pub const EXPERIMENTS: [&str; 5] = ["subdiv-dag", "subdiv-nondag", "appendage", "derangement", "cylinder-k2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown experiment `{0}` (expected one of {list})", list = EXPERIMENTS.join(", "))]
    Unknown(String),
}

/// Deterministic generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Each ordered pair becomes an edge with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, &edges).unwrap()
}

/// Random DAG: a hidden random vertex order, each forward pair an edge with
/// probability `p`, weights in `{1/2, 1, …, 3}`.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, p: f64) -> WeightedDigraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[i], order[j], ratio(rng.gen_range(1..=6), 2)));
            }
        }
    }
    edges.sort_by_key(|e| (e.0, e.1));
    WeightedDigraph::new(n, edges).unwrap()
}

/// Random weighted digraph with weights in `{1/2, 1, …, 3}`.
pub fn random_weighted<R: Rng>(rng: &mut R, n: usize, p: f64) -> WeightedDigraph {
    let g = random_digraph(rng, n, p);
    let edges = g.edges().map(|(u, v)| (u, v, ratio(rng.gen_range(1..=6), 2))).collect();
    WeightedDigraph::new(n, edges).unwrap()
}

/// Subdivide random edges into 2 or 3 parts with random positive
/// proportions, adding at most `budget` fresh vertices.
pub fn random_subdivision<R: Rng>(
    rng: &mut R,
    g: &WeightedDigraph,
    budget: usize,
) -> BTreeMap<(usize, usize), Vec<Rational>> {
    let mut edges: Vec<(usize, usize)> = g.graph().edges().collect();
    edges.shuffle(rng);
    let mut left = budget;
    let mut out = BTreeMap::new();
    for e in edges {
        if left == 0 {
            break;
        }
        if !rng.gen_bool(0.5) {
            continue;
        }
        let parts = rng.gen_range(2..=3usize).min(left + 1);
        left -= parts - 1;
        let raw: Vec<i64> = (0..parts).map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        out.insert(e, raw.iter().map(|&a| ratio(a, total)).collect());
    }
    out
}

/// `!n` by `!n = (n − 1)(!(n−1) + !(n−2))`.
pub fn derangements(n: usize) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    if n == 0 {
        return 1;
    }
    for k in 2..=n as u64 {
        let c = (k - 1) * (a + b);
        a = b;
        b = c;
    }
    b
}

fn ext(e: &ExtRational) -> Value {
    Value::String(e.to_string())
}

fn weighted_json(g: &WeightedDigraph) -> Value {
    let edges: Vec<Value> = g.weighted_edges().map(|(u, v, w)| json!([u, v, format_rational(w)])).collect();
    json!({ "vertices": g.vertex_count(), "edges": edges })
}

fn barcode_json(b: &Barcode) -> Value {
    let bars: Vec<Value> =
        b.bars().iter().map(|x| json!([x.degree, format_rational(&x.birth), x.death.to_string()])).collect();
    Value::Array(bars)
}

/// One random DAG subdivision trial.
#[derive(Clone, Debug)]
pub struct SubdivisionTrial {
    pub original: WeightedDigraph,
    pub parts: BTreeMap<(usize, usize), Vec<Rational>>,
    pub subdivided: WeightedDigraph,
    pub delta: Rational,
    /// Bottleneck distance in degrees 0, 1 and 2.
    pub bottleneck: Vec<ExtRational>,
    pub certificate_verified: bool,
}

impl SubdivisionTrial {
    pub fn within_bound(&self) -> bool {
        self.bottleneck.iter().all(|b| b <= &ExtRational::Finite(self.delta.clone()))
    }
}

/// A DAG on at most 7 vertices, subdivided up to 12 vertices in total.
pub fn subdivision_trial(seed: u64, index: u64) -> SubdivisionTrial {
    let mut rng = trial_rng(seed, index);
    let n = rng.gen_range(2..=7);
    let g = loop {
        let g = random_dag(&mut rng, n, 0.5);
        if g.graph().edge_count() > 0 {
            break g;
        }
    };
    let parts = loop {
        let p = random_subdivision(&mut rng, &g, 12 - n);
        if !p.is_empty() {
            break p;
        }
    };
    let (sub, _, cert) = subdivision_certificate(&g, &parts).expect("valid subdivision");
    let (f1, f2) = (shortest_path_filtration(&g), shortest_path_filtration(&sub));
    let b1 = persistent_dfl_homology(&f1, 2, FieldSpec::Prime(2));
    let b2 = persistent_dfl_homology(&f2, 2, FieldSpec::Prime(2));
    let bottleneck = (0..=2).map(|k| bottleneck_distance(&b1, &b2, k)).collect();
    let certificate_verified = verify_interleaving_certificate(&f1, &f2, &cert).is_ok();
    SubdivisionTrial { original: g, parts, subdivided: sub, delta: cert.delta, bottleneck, certificate_verified }
}

pub fn subdivided_pair() -> (WeightedDigraph, WeightedDigraph) {
    let g = WeightedDigraph::new(2, vec![(0, 1, int(1)), (1, 0, int(1))]).unwrap();
    let mut s = BTreeMap::new();
    s.insert((0, 1), vec![ratio(1, 2); 2]);
    s.insert((1, 0), vec![ratio(1, 2); 2]);
    let (sub, _) = crate::digraph::edge_subdivide(&g, &s).unwrap();
    (g, sub)
}

pub fn appendage_pair() -> (WeightedDigraph, WeightedDigraph) {
    let g = WeightedDigraph::new(2, vec![(0, 1, int(1)), (1, 0, int(1))]).unwrap();
    let h = WeightedDigraph::new(3, vec![(0, 1, int(1)), (1, 0, int(1)), (2, 0, int(1))]).unwrap();
    (g, h)
}

fn instability(g: &WeightedDigraph, h: &WeightedDigraph) -> (Barcode, Barcode, ExtRational) {
    let b1 = persistent_dfl_homology(&shortest_path_filtration(g), 1, FieldSpec::Rationals);
    let b2 = persistent_dfl_homology(&shortest_path_filtration(h), 1, FieldSpec::Rationals);
    let d = bottleneck_distance(&b1, &b2, 1);
    (b1, b2, d)
}

fn instability_report(name: &str, seed: u64, trials: usize, g: &WeightedDigraph, h: &WeightedDigraph) -> Value {
    let (b1, b2, d) = instability(g, h);
    let reproduced = !d.is_finite();
    json!({
        "experiment": name,
        "seed": seed,
        "trials": trials,
        "instances": [{
            "before": weighted_json(g),
            "after": weighted_json(h),
            "barcode_before": barcode_json(&b1),
            "barcode_after": barcode_json(&b2),
            "bottleneck_degree_1": ext(&d),
        }],
        "status": if reproduced { "instability reproduced" } else { "not reproduced" },
    })
}

/// Run a named experiment.
pub fn run_experiment(name: &str, seed: u64, trials: Option<usize>) -> Result<Value, ExperimentError> {
    match name {
        "subdiv-dag" => {
            let trials = trials.unwrap_or(50);
            let results: Vec<SubdivisionTrial> =
                (0..trials as u64).into_par_iter().map(|i| subdivision_trial(seed, i)).collect();
            let instances: Vec<Value> = results
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let parts: Vec<Value> = t
                        .parts
                        .iter()
                        .map(|(e, p)| json!([e.0, e.1, p.iter().map(format_rational).collect::<Vec<_>>()]))
                        .collect();
                    json!({
                        "index": i,
                        "graph": weighted_json(&t.original),
                        "subdivision": parts,
                        "delta": format_rational(&t.delta),
                        "bottleneck": t.bottleneck.iter().map(ext).collect::<Vec<_>>(),
                        "bound_holds": t.within_bound(),
                        "certificate_verified": t.certificate_verified,
                    })
                })
                .collect();
            let bound = results.iter().filter(|t| t.within_bound()).count();
            let cert = results.iter().filter(|t| t.certificate_verified).count();
            let pass = bound == trials && cert == trials;
            Ok(json!({
                "experiment": name,
                "seed": seed,
                "trials": trials,
                "instances": instances,
                "summary": { "bound_holds": bound, "certificates_verified": cert },
                "status": if pass { "pass" } else { "fail" },
            }))
        }
        "subdiv-nondag" => {
            let (g, h) = subdivided_pair();
            Ok(instability_report(name, seed, trials.unwrap_or(1), &g, &h))
        }
        "appendage" => {
            let (g, h) = appendage_pair();
            Ok(instability_report(name, seed, trials.unwrap_or(1), &g, &h))
        }
        "derangement" => {
            let max_n = trials.unwrap_or(5).max(2);
            let rows: Vec<Value> = (2..=max_n)
                .into_par_iter()
                .map(|n| {
                    let k = directed_flag_complex(&Digraph::complete(n), n);
                    let b = omega_complex(&k, n - 1, Rationals).unwrap().betti_numbers(n - 1);
                    let top = b.values[n - 1];
                    json!({ "n": n, "betti": b.values, "top": top, "derangements": derangements(n), "match": top as u64 == derangements(n) })
                })
                .collect();
            let pass = rows.iter().all(|r| r["match"] == json!(true));
            Ok(json!({
                "experiment": name,
                "seed": seed,
                "trials": max_n,
                "instances": rows,
                "status": if pass { "pass" } else { "fail" },
            }))
        }
        "cylinder-k2" => {
            let k2 = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
            let k2i = cross_product(&k2, &unit_interval());
            let closure = simplicial_closure_of_cylinder(&directed_flag_complex(&k2, 3));
            let bk2 = flag_betti_numbers(&k2, 2, FieldSpec::Rationals);
            let bk2i = flag_betti_numbers(&k2i, 2, FieldSpec::Rationals);
            let bcyl = omega_complex(&closure, 2, Rationals).unwrap().betti_numbers(2).values;
            let pass = bk2[1] == 1 && bk2i[1] == 0 && bcyl[1] == 1;
            Ok(json!({
                "experiment": name,
                "seed": seed,
                "trials": trials.unwrap_or(1),
                "instances": [{
                    "betti_k2": bk2,
                    "betti_k2_times_interval": bk2i,
                    "betti_cylinder_closure": bcyl,
                }],
                "status": if pass { "pass" } else { "fail" },
            }))
        }
        other => Err(ExperimentError::Unknown(other.to_string())),
    }
}
