use super::{component_labels_masked, Graph, GraphError};

/// Exhaustive subgraph search is only attempted up to this many edges.
pub const MAX_DIVERGENCE_EDGES: usize = 20;

/// `N = 2h` and `N_γ > 2h_γ` for every strict edge subset with a cycle.
///
/// Minimizes `N_γ - 2h_γ` over all strict edge subsets; stops at the first
/// subset with `h_γ >= 1` and `N_γ <= 2h_γ`.
pub fn is_primitive_divergent(g: &Graph) -> Result<bool, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let e = g.edge_count();
    if e > MAX_DIVERGENCE_EDGES {
        return Err(GraphError::TooManyEdges { edges: e, limit: MAX_DIVERGENCE_EDGES });
    }
    if e != 2 * g.loop_number() {
        return Ok(false);
    }
    let n = g.vertex_count();
    let full: u32 = (1u32 << e) - 1;
    let edges = g.edges();
    let mut touched = alloc::vec![false; n];
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        touched.iter_mut().for_each(|t| *t = false);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                touched[a] = true;
                touched[b] = true;
            }
        }
        let verts = touched.iter().filter(|&&t| t).count();
        let (comps, _) = component_labels_masked(n, edges, |i| mask >> i & 1 == 1);
        // untouched vertices are singleton components
        let comps = comps - (n - verts);
        let loops = size + comps - verts;
        if loops >= 1 && size <= 2 * loops {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn k4_is_primitive() {
        assert!(is_primitive_divergent(&Graph::k4()).unwrap());
    }

    #[test]
    fn wheel_with_four_spokes_is_primitive() {
        let w4 = Graph::octahedron().delete_vertex(0).unwrap();
        assert!(is_primitive_divergent(&w4).unwrap());
    }

    #[test]
    fn triangle_fails_edge_count() {
        assert!(!is_primitive_divergent(&Graph::cycle(3)).unwrap());
    }

    #[test]
    fn double_edge_subdivergence() {
        // K4 with one edge doubled and another removed keeps N = 2h
        // but the doubled pair is a one-loop subgraph with N = 2.
        let g = Graph::new(4, vec![(0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2 * g.loop_number());
        assert!(!is_primitive_divergent(&g).unwrap());
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(is_primitive_divergent(&g), Err(GraphError::NotConnected));
    }

    #[test]
    fn size_guard() {
        let g = Graph::complete_graph(7);
        assert!(matches!(
            is_primitive_divergent(&g),
            Err(GraphError::TooManyEdges { edges: 21, .. })
        ));
    }
}
