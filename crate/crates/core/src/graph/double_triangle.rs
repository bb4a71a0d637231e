use super::{is_completed_primitive, Graph, GraphError};
use alloc::vec::Vec;

/// Edge `ab` shared by exactly the two triangles `abc` and `abd`; `e` is the
/// fourth neighbor of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleTriangle {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
}

fn common_neighbors(adj: &[Vec<u8>], a: usize, b: usize) -> Vec<usize> {
    (0..adj.len())
        .filter(|&w| w != a && w != b && adj[a][w] > 0 && adj[b][w] > 0)
        .collect()
}

/// Double triangles of a simple 4-regular graph, ordered by `(a, b)`.
/// For each edge both orientations describe isomorphic reductions, so only
/// `a < b` is listed.
pub fn double_triangles(g: &Graph) -> Vec<DoubleTriangle> {
    let adj = g.adjacency_counts();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if adj[a][b] != 1 {
                continue;
            }
            let common = common_neighbors(&adj, a, b);
            if common.len() != 2 {
                continue;
            }
            let (c, d) = (common[0], common[1]);
            let others: Vec<usize> = (0..n)
                .filter(|&w| adj[b][w] > 0 && w != a && w != c && w != d)
                .collect();
            if others.len() != 1 || adj[b][others[0]] != 1 {
                continue;
            }
            out.push(DoubleTriangle { a, b, c, d, e: others[0] });
        }
    }
    out
}

/// Deletes `b`, then adds the crossing edges `c–d` and `a–e`.
/// Vertices above `b` shift down by one.
pub fn dt_reduce_at(g: &Graph, dt: DoubleTriangle) -> Graph {
    let DoubleTriangle { a, b, c, d, e } = dt;
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().copied().filter(|&(u, v)| u != b && v != b).collect();
    edges.push((c, d));
    edges.push((a, e));
    let shift = |w: usize| if w > b { w - 1 } else { w };
    let edges = edges.into_iter().map(|(u, v)| (shift(u), shift(v))).collect();
    Graph::new(g.vertex_count() - 1, edges).expect("indices in range")
}

/// First available double-triangle reduction of a completed primitive graph
/// with at least 6 vertices.
pub fn dt_reduce(g: &Graph) -> Result<Option<Graph>, GraphError> {
    if g.vertex_count() < 6 {
        return Ok(None);
    }
    match double_triangles(g).first() {
        None => Ok(None),
        Some(&dt) => {
            let r = dt_reduce_at(g, dt);
            if !is_completed_primitive(&r) {
                return Err(GraphError::DtBroken);
            }
            Ok(Some(r))
        }
    }
}

/// Inverse move: for a triangle `a, c, d` and an extra edge `a–e`, removes
/// `c–d` and `a–e` and inserts a new vertex `b` joined to `a, c, d, e`.
/// The new vertex gets the highest index.
pub fn dt_expand_at(g: &Graph, a: usize, c: usize, d: usize, e: usize) -> Option<Graph> {
    let pos = |u: usize, v: usize| {
        g.edges()
            .iter()
            .position(|&(x, y)| (x == u && y == v) || (x == v && y == u))
    };
    pos(a, c)?;
    pos(a, d)?;
    let cd = pos(c, d)?;
    let ae = pos(a, e)?;
    if e == c || e == d {
        return None;
    }
    let b = g.vertex_count();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != cd && i != ae)
        .map(|(_, &x)| x)
        .collect();
    edges.extend([(a, b), (c, b), (d, b), (e, b)]);
    Graph::new(b + 1, edges).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    #[test]
    fn octahedron_reduces_to_k5() {
        let r = dt_reduce(&Graph::octahedron()).unwrap().unwrap();
        assert!(is_isomorphic(&r, &Graph::k5()).unwrap());
    }

    #[test]
    fn k5_has_no_reduction() {
        assert!(double_triangles(&Graph::k5()).is_empty());
        assert_eq!(dt_reduce(&Graph::k5()), Ok(None));
    }

    #[test]
    fn every_octahedron_double_triangle_gives_k5() {
        let o3 = Graph::octahedron();
        let dts = double_triangles(&o3);
        assert_eq!(dts.len(), 12);
        for dt in dts {
            assert!(is_isomorphic(&dt_reduce_at(&o3, dt), &Graph::k5()).unwrap());
        }
    }

    #[test]
    fn expansion_then_reduction_at_the_same_place() {
        let k5 = Graph::k5();
        let big = dt_expand_at(&k5, 0, 1, 2, 3).unwrap();
        assert!(is_completed_primitive(&big));
        let dt = double_triangles(&big)
            .into_iter()
            .find(|dt| dt.b == 5 || dt.a == 5)
            .expect("new double triangle");
        let back = dt_reduce_at(&big, dt);
        assert!(is_isomorphic(&back, &k5).unwrap());
    }
}
