use c2lab_core::counting::{c2_direct, DEFAULT_BUDGET};
use c2lab_core::ffield::field_of_size;
use c2lab_core::graph::{
    ancestor, certificate, complete, decomplete, dt_reduce, generate_completed_primitive, Graph,
};
use c2lab_core::sympoly::{graph_polynomial, spanning_tree_count};
use proptest::prelude::*;

fn census(loops: usize) -> Vec<Graph> {
    generate_completed_primitive(loops).unwrap()
}

fn arb_completed() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (3usize..=6).prop_flat_map(|l| {
        let gs = census(l);
        let n = gs[0].vertex_count();
        (prop::sample::select(gs), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificate_ignores_labels((g, perm) in arb_completed()) {
        prop_assert_eq!(certificate(&g).unwrap(), certificate(&g.relabel(&perm)).unwrap());
    }

    #[test]
    fn decompletions_complete_back((g, perm) in arb_completed(), v in 0usize..16) {
        let g = g.relabel(&perm);
        let v = v % g.vertex_count();
        let d = decomplete(&g, v).unwrap();
        let back = complete(&d).unwrap().completed;
        prop_assert_eq!(certificate(&back).unwrap(), certificate(&g).unwrap());
    }

    #[test]
    fn ancestor_is_stable_under_relabelling((g, perm) in arb_completed()) {
        let a = ancestor(&g).unwrap().certificates();
        let b = ancestor(&g.relabel(&perm)).unwrap().certificates();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn psi_terms_count_spanning_trees() {
    for l in 3..=6 {
        for g in census(l) {
            let d = decomplete(&g, 0).unwrap();
            let psi = graph_polynomial(&d).unwrap();
            assert_eq!(psi.len(), spanning_tree_count(&d).unwrap());
        }
    }
}

#[test]
fn double_triangle_reduction_keeps_c2() {
    let f = field_of_size(3).unwrap();
    for g in census(6) {
        if let Some(r) = dt_reduce(&g).unwrap() {
            let a = c2_direct(&decomplete(&g, 0).unwrap(), &f, DEFAULT_BUDGET).unwrap();
            let b = c2_direct(&decomplete(&r, 0).unwrap(), &f, DEFAULT_BUDGET).unwrap();
            assert_eq!(a, b);
        }
    }
}
