use c2lab::format::{parse_graph, write_graph};
use c2lab_core::graph::Graph;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..9).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..16).prop_filter_map("loops only", move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            if edges.is_empty() {
                None
            } else {
                Graph::new(n, edges).ok()
            }
        })
    })
}

proptest! {
    #[test]
    fn graph_file_round_trip(g in arb_graph(), name in "[A-Za-z][A-Za-z0-9_]{0,8}") {
        let g = g.with_name(name.clone());
        let back = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.name(), Some(name.as_str()));
    }
}
