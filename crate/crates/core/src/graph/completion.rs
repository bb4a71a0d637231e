use super::{component_labels_masked, Graph, GraphError};

/// A 4-regular completion together with the vertex that was added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub completed: Graph,
    pub apex: usize,
}

/// Adds an apex joined once to every 3-valent vertex and twice to every
/// 2-valent vertex. The apex gets index `vertex_count`; its edges follow
/// the original edges in vertex order.
pub fn complete(g: &Graph) -> Result<Completion, GraphError> {
    let deg = g.degrees();
    let mut deficit = 0;
    for (v, &d) in deg.iter().enumerate() {
        if d > 4 {
            return Err(GraphError::DegreeTooLarge { vertex: v, degree: d });
        }
        deficit += 4 - d;
    }
    if deficit != 4 {
        return Err(GraphError::DegreeDeficit { deficit });
    }
    let apex = g.vertex_count();
    let mut edges = g.edges().to_vec();
    for (v, &d) in deg.iter().enumerate() {
        for _ in d..4 {
            edges.push((v, apex));
        }
    }
    let mut completed = Graph::new(apex + 1, edges)?;
    if let Some(name) = g.name() {
        completed.set_name(Some(alloc::format!("{name}+")));
    }
    Ok(Completion { completed, apex })
}

pub fn decomplete(g: &Graph, v: usize) -> Result<Graph, GraphError> {
    g.delete_vertex(v)
}

/// Connected, 4-regular, at least 3 vertices, and every 4-edge cut either
/// leaves the graph connected or splits off a single vertex.
pub fn is_completed_primitive(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n < 3 || !g.is_regular(4) || !g.is_connected() {
        return false;
    }
    let edges = g.edges();
    let e = edges.len();
    let mut removed = [0usize; 4];
    for a in 0..e {
        removed[0] = a;
        for b in a + 1..e {
            removed[1] = b;
            for c in b + 1..e {
                removed[2] = c;
                for d in c + 1..e {
                    removed[3] = d;
                    let (comps, labels) =
                        component_labels_masked(n, edges, |i| !removed.contains(&i));
                    if comps == 1 {
                        continue;
                    }
                    let mut sizes = alloc::vec![0usize; comps];
                    for &l in &labels {
                        sizes[l] += 1;
                    }
                    if !sizes.contains(&1) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;
    use alloc::vec;

    #[test]
    fn k4_completes_to_k5() {
        let c = complete(&Graph::k4()).unwrap();
        assert_eq!(c.apex, 4);
        assert!(c.completed.is_regular(4));
        assert!(is_isomorphic(&c.completed, &Graph::k5()).unwrap());
    }

    #[test]
    fn octahedron_recompletes_from_every_vertex() {
        let o3 = Graph::octahedron();
        for v in 0..6 {
            let g = decomplete(&o3, v).unwrap();
            let c = complete(&g).unwrap();
            assert!(is_isomorphic(&c.completed, &o3).unwrap());
        }
    }

    #[test]
    fn double_edge_triangle_roundtrip() {
        let t = Graph::double_edge_triangle();
        let g = decomplete(&t, 2).unwrap();
        // two vertices of degree 2 joined by a double edge
        assert_eq!(g.degrees(), vec![2, 2]);
        let c = complete(&g).unwrap();
        assert!(is_isomorphic(&c.completed, &t).unwrap());
        assert!(is_completed_primitive(&c.completed));
    }

    #[test]
    fn completion_errors() {
        assert_eq!(
            complete(&Graph::cycle(3)).unwrap_err(),
            GraphError::DegreeDeficit { deficit: 6 }
        );
        let star = Graph::new(6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert!(matches!(complete(&star), Err(GraphError::DegreeTooLarge { vertex: 0, .. })));
    }

    #[test]
    fn small_completed_primitives() {
        assert!(is_completed_primitive(&Graph::k5()));
        assert!(is_completed_primitive(&Graph::octahedron()));
        assert!(is_completed_primitive(&Graph::double_edge_triangle()));
        assert!(!is_completed_primitive(&Graph::k4()));
    }

    #[test]
    fn four_edge_bridge_between_k5s() {
        // two copies of K5 minus a perfect-ish matching, joined by 4 edges
        let mut edges = vec![];
        for base in [0, 5] {
            for a in 0..5 {
                for b in a + 1..5 {
                    if !((a, b) == (0, 1) || (a, b) == (2, 3)) {
                        edges.push((base + a, base + b));
                    }
                }
            }
        }
        edges.extend([(0, 5), (1, 6), (2, 7), (3, 8)]);
        let g = Graph::new(10, edges).unwrap();
        assert!(g.is_regular(4) && g.is_connected());
        assert!(!is_completed_primitive(&g));
    }
}
