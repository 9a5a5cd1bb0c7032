mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::weighted;
use dirflag::chains::flag_betti_numbers;
use dirflag::digraph::{edge_subdivide, VertexMap, WeightedDigraph};
use dirflag::experiments::{random_dag, random_subdivision, run_experiment, trial_rng};
use dirflag::field::FieldSpec;
use dirflag::homotopy::MultiStepWitness;
use dirflag::persistence::{
    bottleneck_distance, check_delta_shifting, entrance_time_linf, persistent_dfl_homology, shortest_path_filtration,
    subdivision_certificate, verify_interleaving_certificate, Bar, Barcode, Filtration, InterleavingCertificate,
    WitnessSchedule,
};
use dirflag::rational::{int, ratio, ExtRational, Rational};

fn filtration() -> impl Strategy<Value = Filtration> {
    (2usize..=6).prop_flat_map(|n| {
        (
            proptest::collection::vec(0i64..=4, n),
            proptest::collection::vec(proptest::option::weighted(0.5, 0i64..=8), n * (n - 1)),
        )
            .prop_map(move |(vt, et)| {
                let mut f = Filtration::new(n);
                for (v, t) in vt.into_iter().enumerate() {
                    f.set_vertex_time(v, ratio(t, 2)).unwrap();
                }
                let pairs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v);
                for ((u, v), t) in pairs.zip(et) {
                    if let Some(t) = t {
                        f.set_entrance(u, v, ExtRational::Finite(ratio(t, 2))).unwrap();
                    }
                }
                f
            })
    })
}

/// A second filtration on the same vertices: times moved by at most 1 and
/// occasionally an edge dropped.
fn perturbed(f: &Filtration, moves: &[i64], drop: &[bool]) -> Filtration {
    let n = f.vertex_count();
    let clamp = |r: Rational| if r < Rational::from_integer(0.into()) { Rational::from_integer(0.into()) } else { r };
    let mut g = Filtration::new(n);
    for v in 0..n {
        g.set_vertex_time(v, clamp(f.vertex_time(v) + ratio(moves[v % moves.len()], 2))).unwrap();
    }
    for (i, ((u, v), t)) in f.entries().enumerate() {
        if !drop[i % drop.len()] {
            let m = ratio(moves[(i + n) % moves.len()], 2);
            g.set_entrance(u, v, ExtRational::Finite(clamp(t + m))).unwrap();
        }
    }
    g
}

fn barcode() -> impl Strategy<Value = Barcode> {
    proptest::collection::vec((0i64..6, proptest::option::weighted(0.8, 1i64..6)), 0..=3).prop_map(|bars| {
        Barcode::new(
            bars.into_iter()
                .map(|(b, len)| {
                    let death = len.map_or(ExtRational::Infinity, |l| ExtRational::Finite(ratio(b + l, 2)));
                    Bar::new(0, ratio(b, 2), death)
                })
                .collect(),
        )
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Bottleneck distance by trying every matching of the diagonal-augmented
/// diagrams.
fn bottleneck_brute(b1: &Barcode, b2: &Barcode) -> ExtRational {
    let x: Vec<&Bar> = b1.bars().iter().collect();
    let y: Vec<&Bar> = b2.bars().iter().collect();
    let half = |b: &Bar| match &b.death {
        ExtRational::Finite(d) => ExtRational::Finite((d - &b.birth) / int(2)),
        ExtRational::Infinity => ExtRational::Infinity,
    };
    let pair = |a: &Bar, b: &Bar| {
        let births = ExtRational::Finite(a.birth.clone()).abs_diff(&ExtRational::Finite(b.birth.clone()));
        births.max(a.death.abs_diff(&b.death))
    };
    let n = x.len() + y.len();
    let cost = |i: usize, j: usize| match (i < x.len(), j < y.len()) {
        (true, true) => pair(x[i], y[j]),
        (true, false) => half(x[i]),
        (false, true) => half(y[j]),
        (false, false) => ExtRational::zero(),
    };
    permutations(n)
        .into_iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| cost(i, j)).max().unwrap_or_else(ExtRational::zero))
        .min()
        .unwrap_or_else(ExtRational::zero)
}

fn identity_certificate(n: usize, delta: Rational) -> InterleavingCertificate {
    let id = VertexMap::identity(n);
    InterleavingCertificate {
        delta,
        f: id.clone(),
        g: id.clone(),
        witnesses_gf: WitnessSchedule::uniform(MultiStepWitness::trivial(id.clone())),
        witnesses_fg: WitnessSchedule::uniform(MultiStepWitness::trivial(id)),
    }
}

fn shifted(f: &Filtration, c: &Rational) -> Filtration {
    let mut g = Filtration::new(f.vertex_count());
    for v in 0..f.vertex_count() {
        g.set_vertex_time(v, f.vertex_time(v) + c).unwrap();
    }
    for ((u, v), t) in f.entries() {
        g.set_entrance(u, v, ExtRational::Finite(t + c)).unwrap();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bars_alive_match_static_betti(f in filtration(), slices in proptest::collection::vec(0i64..=20, 5)) {
        let barcode = persistent_dfl_homology(&f, 2, FieldSpec::Prime(2));
        for s in slices {
            let t = ratio(s, 4);
            let (g, _) = f.digraph_at(&t);
            let want = if g.vertex_count() == 0 { vec![0; 3] } else { flag_betti_numbers(&g, 2, FieldSpec::Rationals) };
            let got: Vec<usize> = (0..=2).map(|k| barcode.rank_at(k, &t)).collect();
            prop_assert_eq!(got, want);
        }
        for b in barcode.bars() {
            prop_assert!(ExtRational::Finite(b.birth.clone()) < b.death);
        }
    }

    #[test]
    fn stability_inequality(
        f in filtration(),
        moves in proptest::collection::vec(-2i64..=2, 1..8),
        drop in proptest::collection::vec(proptest::bool::weighted(0.1), 1..8),
    ) {
        let g = perturbed(&f, &moves, &drop);
        let linf = entrance_time_linf(&f, &g).unwrap();
        let b1 = persistent_dfl_homology(&f, 2, FieldSpec::Prime(2));
        let b2 = persistent_dfl_homology(&g, 2, FieldSpec::Prime(2));
        for k in 0..=2 {
            prop_assert!(bottleneck_distance(&b1, &b2, k) <= linf);
        }
    }

    #[test]
    fn bottleneck_matches_brute_force(a in barcode(), b in barcode(), c in barcode()) {
        let d = bottleneck_distance(&a, &b, 0);
        prop_assert_eq!(&d, &bottleneck_brute(&a, &b));
        prop_assert_eq!(&d, &bottleneck_distance(&b, &a, 0));
        prop_assert_eq!(bottleneck_distance(&a, &a, 0), ExtRational::zero());
        let via = bottleneck_distance(&a, &c, 0);
        if let ExtRational::Finite(x) = &bottleneck_distance(&c, &b, 0) {
            prop_assert!(d <= via.add_finite(x));
        }
    }

    #[test]
    fn shift_certificates_are_sound(f in filtration(), c in 0i64..=4) {
        let c = ratio(c, 2);
        let g = shifted(&f, &c);
        let n = f.vertex_count();
        prop_assert!(verify_interleaving_certificate(&f, &g, &identity_certificate(n, c.clone())).is_ok());
        let b1 = persistent_dfl_homology(&f, 2, FieldSpec::Prime(2));
        let b2 = persistent_dfl_homology(&g, 2, FieldSpec::Prime(2));
        for k in 0..=2 {
            prop_assert!(bottleneck_distance(&b1, &b2, k) <= ExtRational::Finite(c.clone()));
        }
        let tight = (0..=2).map(|k| bottleneck_distance(&b1, &b2, k)).max().unwrap();
        if let ExtRational::Finite(t) = tight {
            if t > Rational::from_integer(0.into()) {
                let smaller = t / int(2);
                prop_assert!(verify_interleaving_certificate(&f, &g, &identity_certificate(n, smaller)).is_err());
            }
        }
    }

    #[test]
    fn identity_is_zero_shifting(g in weighted(1, 6, 0.4)) {
        let n = g.vertex_count();
        prop_assert!(check_delta_shifting(&VertexMap::identity(n), &g, &g, &Rational::from_integer(0.into())).is_ok());
        let f = shortest_path_filtration(&g);
        prop_assert!(verify_interleaving_certificate(&f, &f, &identity_certificate(n, Rational::from_integer(0.into()))).is_ok());
    }

    #[test]
    fn subdivision_certificates_bound_bottleneck(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let g = random_dag(&mut rng, 5, 0.5);
        let parts = random_subdivision(&mut rng, &g, 5);
        prop_assume!(!parts.is_empty());
        let (sub, _, cert) = subdivision_certificate(&g, &parts).unwrap();
        let (f1, f2) = (shortest_path_filtration(&g), shortest_path_filtration(&sub));
        prop_assert!(verify_interleaving_certificate(&f1, &f2, &cert).is_ok());
        let b1 = persistent_dfl_homology(&f1, 2, FieldSpec::Prime(2));
        let b2 = persistent_dfl_homology(&f2, 2, FieldSpec::Prime(2));
        for k in 0..=2 {
            prop_assert!(bottleneck_distance(&b1, &b2, k) <= ExtRational::Finite(cert.delta.clone()));
        }
    }
}

#[test]
fn subdivision_inclusion_shift() {
    // a→b (1), b→c (3), a→c (3); a→c is split in half, so its image needs δ ≥ 3
    let g = WeightedDigraph::new(3, vec![(0, 1, int(1)), (1, 2, int(3)), (0, 2, int(3))]).unwrap();
    let mut parts = BTreeMap::new();
    parts.insert((0, 2), vec![ratio(1, 2), ratio(1, 2)]);
    let (sub, _) = edge_subdivide(&g, &parts).unwrap();
    let f = VertexMap::new(vec![0, 1, 2], 4).unwrap();
    let violations = check_delta_shifting(&f, &g, &sub, &ratio(5, 2)).unwrap_err();
    assert!(violations.iter().all(|v| (v.i, v.j) == (0, 2)), "{violations:?}");
    assert!(check_delta_shifting(&f, &g, &sub, &int(3)).is_ok());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run_in = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&run_experiment("subdiv-dag", 3, Some(8)).unwrap()).unwrap())
    };
    assert_eq!(run_in(1), run_in(4));
}
