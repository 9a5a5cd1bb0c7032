mod common;

use proptest::prelude::*;

use common::{digraph, graphs_and_map, is_tc};
use dirflag::complexes::{
    allowed_path_complex, classify_path_morphism, classify_simplicial_morphism, cyl_decode, cylinder,
    directed_flag_complex, mapping_cylinder, simplicial_closure, simplicial_closure_of_cylinder, ElementaryPath,
    OrderedSimplicialComplex, PathComplex, PathMorphismClass, SimplicialMorphismClass,
};
use dirflag::digraph::{box_product, classify_digraph_map, DigraphMapClass, cross_product, is_oriented, unit_interval, VertexMap};

/// A random ordered simplicial complex: the closure of a few random simplicial
/// paths on at most five vertices.
fn osc() -> impl Strategy<Value = OrderedSimplicialComplex> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_flat_map(move |perm| {
            (1..=perm.len().min(4)).prop_map(move |len| perm[..len].to_vec())
        }), 0..5)
        .prop_map(move |paths| {
            let p = PathComplex::from_paths(n, 4, paths.into_iter().map(ElementaryPath::new)).unwrap();
            simplicial_closure(&p).unwrap()
        })
    })
}

fn same_paths(a: &PathComplex, b: &PathComplex) -> bool {
    a.vertex_count() == b.vertex_count() && (0..=a.max_dim().max(b.max_dim())).all(|k| {
        let pa = if k <= a.max_dim() { a.paths(k) } else { &[] };
        let pb = if k <= b.max_dim() { b.paths(k) } else { &[] };
        pa == pb
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn constructions_validate(g in digraph(1, 5, 0.5), k in osc()) {
        let flag = directed_flag_complex(&g, 3);
        prop_assert!(flag.validate().is_ok());
        prop_assert!(flag.is_simplicial());
        let a = allowed_path_complex(&g, 3);
        prop_assert!(a.validate().is_ok() && a.is_regular());
        prop_assert!(cylinder(&a).validate().is_ok());
        prop_assert!(cylinder(&a).is_regular());
        prop_assert!(k.validate().is_ok());
        let closed = simplicial_closure_of_cylinder(&k);
        prop_assert!(closed.validate().is_ok());
        for p in flag.iter() {
            prop_assert!(a.contains(p));
        }
    }

    #[test]
    fn walk_cylinder_is_walks_on_box_product(g in digraph(1, 4, 0.5)) {
        let lhs = cylinder(&allowed_path_complex(&g, 3));
        let rhs = allowed_path_complex(&box_product(&g, &unit_interval()), 3);
        prop_assert!(same_paths(&lhs, &rhs));
    }

    #[test]
    fn closure_formula_matches_subset_closure(k in osc()) {
        let formula = simplicial_closure_of_cylinder(&k);
        let generic = simplicial_closure(&cylinder(&k)).unwrap();
        prop_assert!(same_paths(&formula, &generic));
    }

    #[test]
    fn closure_equals_product_flag_iff_oriented(g in digraph(1, 4, 0.5)) {
        let closed = simplicial_closure_of_cylinder(&directed_flag_complex(&g, 4));
        let product = directed_flag_complex(&cross_product(&g, &unit_interval()), 4);
        prop_assert_eq!(same_paths(&closed, &product), is_oriented(&g));
    }

    #[test]
    fn closure_results(k in osc()) {
        let closed = simplicial_closure_of_cylinder(&k);
        for p in closed.iter() {
            let (vs, js): (Vec<usize>, Vec<usize>) = p.iter().map(|&u| cyl_decode(u)).unzip();
            let base = ElementaryPath::new(vs.clone());
            if js.iter().all(|&j| j == js[0]) {
                prop_assert!(k.contains(&base));
            }
            if base.is_simplicial() {
                prop_assert!(k.contains(&base));
            }
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    if vs[i] == vs[j] {
                        prop_assert_eq!(j, i + 1);
                    }
                }
            }
            if vs.len() == 3 {
                prop_assert_ne!(vs[0], vs[2]);
            }
        }
    }

    #[test]
    fn weak_path_morphism_iff_tc((g, h, f) in graphs_and_map(4)) {
        let k1 = directed_flag_complex(&g, 3);
        let k2 = directed_flag_complex(&h, 3);
        let path = classify_path_morphism(&f, &k1, &k2).unwrap();
        let simp = classify_simplicial_morphism(&f, &k1, &k2).unwrap();
        prop_assert_eq!(path != PathMorphismClass::NotWeak, simp >= SimplicialMorphismClass::TriangleCollapsing);
        let digraph_class = classify_digraph_map(&f, &g, &h).unwrap();
        prop_assert_eq!(simp == SimplicialMorphismClass::TriangleCollapsing, digraph_class == DigraphMapClass::TriangleCollapsing);
        prop_assert_eq!(simp >= SimplicialMorphismClass::TriangleCollapsing, is_tc(&f, &g, &h));
    }

    #[test]
    fn regularise_and_skeleta(g in digraph(1, 4, 0.5), j in 0usize..4, k in 0usize..4) {
        let a = allowed_path_complex(&g, 3);
        prop_assert_eq!(a.regularise(), a.clone());
        let r = a.regularise();
        prop_assert_eq!(r.regularise(), r);
        prop_assert_eq!(a.skeleton(j).skeleton(k), a.skeleton(j.min(k)));
        prop_assert!(a.skeleton(0).counts().iter().sum::<usize>() == g.vertex_count());
    }

    #[test]
    fn mapping_cylinder_regular_iff_strong((g, h, f) in graphs_and_map(4)) {
        let p1 = allowed_path_complex(&g, 3);
        let p2 = allowed_path_complex(&h, 3);
        match classify_path_morphism(&f, &p1, &p2).unwrap() {
            PathMorphismClass::NotWeak => prop_assert!(mapping_cylinder(&f, &p1, &p2).is_err()),
            class => {
                let mc = mapping_cylinder(&f, &p1, &p2).unwrap();
                prop_assert_eq!(mc.is_regular(), class == PathMorphismClass::Strong);
                prop_assert!(mc.regularise().is_regular());
            }
        }
    }

    #[test]
    fn mapping_cylinder_of_identity_is_cylinder(g in digraph(1, 4, 0.5)) {
        let p = allowed_path_complex(&g, 3);
        let n = g.vertex_count();
        let mc = mapping_cylinder(&VertexMap::identity(n), &p, &p).unwrap();
        let cyl = cylinder(&p);
        // MapCyl numbers V(P1) then V(P2); the cylinder interleaves levels.
        let relabel = VertexMap::new((0..2 * n).map(|u| if u < n { 2 * u } else { 2 * (u - n) + 1 }).collect(), 2 * n).unwrap();
        let moved = PathComplex::from_paths(2 * n, mc.max_dim(), mc.iter().map(|q| q.map(&relabel))).unwrap();
        prop_assert!(same_paths(&moved, &cyl));
    }
}

#[test]
fn single_edge_closure_adds_one_diagonal() {
    let g = dirflag::digraph::Digraph::new(2, &[(0, 1)]).unwrap();
    let k = directed_flag_complex(&g, 2);
    let closed = simplicial_closure_of_cylinder(&k);
    let cyl = cylinder(&k);
    let extra: Vec<&ElementaryPath> = closed.iter().filter(|p| !cyl.contains(p)).collect();
    assert_eq!(extra, vec![&ElementaryPath::new(vec![0, 3])]);
}
