use super::{components_without, is_completed_primitive, Graph};
use alloc::vec;
use alloc::vec::Vec;

/// All vertex triples (in lexicographic order) whose removal disconnects `g`.
pub fn three_vertex_separators(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut alive = vec![true; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                alive[a] = false;
                alive[b] = false;
                alive[c] = false;
                if components_without(g, &alive).len() > 1 {
                    out.push([a, b, c]);
                }
                alive[a] = true;
                alive[b] = true;
                alive[c] = true;
            }
        }
    }
    out
}

/// Builds the side graph on `sep ∪ side`: the separator occupies indices
/// 0..3, side vertices follow in increasing order, and the triangle on the
/// separator is restored.
fn side_graph(g: &Graph, sep: [usize; 3], side: &[usize]) -> Graph {
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in sep.iter().chain(side.iter()).enumerate() {
        index[v] = i;
    }
    let in_side = |v: usize| side.contains(&v);
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(a, b)| {
            index[a] != usize::MAX && index[b] != usize::MAX && (in_side(a) || in_side(b))
        })
        .map(|&(a, b)| (index[a], index[b]))
        .collect();
    edges.extend([(0, 1), (1, 2), (0, 2)]);
    Graph::new(3 + side.len(), edges).expect("indices in range")
}

/// Splits a reducible completed primitive graph at a 3-vertex separator into
/// its two completed primitive factors. Separators and component groupings
/// are tried in lexicographic order; a grouping is accepted only when both
/// rebuilt sides are completed primitive.
pub fn split_product(g: &Graph) -> Option<(Graph, Graph)> {
    split_product_all(g).into_iter().next().map(|(_, a, b)| (a, b))
}

/// Every valid split, each with its separator.
pub(crate) fn split_product_all(g: &Graph) -> Vec<([usize; 3], Graph, Graph)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for sep in three_vertex_separators(g) {
        let mut alive = vec![true; n];
        for &v in &sep {
            alive[v] = false;
        }
        let comps = components_without(g, &alive);
        for (ci, comp) in comps.iter().enumerate() {
            let rest: Vec<usize> = {
                let mut r: Vec<usize> = comps
                    .iter()
                    .enumerate()
                    .filter(|&(cj, _)| cj != ci)
                    .flat_map(|(_, c)| c.iter().copied())
                    .collect();
                r.sort_unstable();
                r
            };
            let g1 = side_graph(g, sep, comp);
            let g2 = side_graph(g, sep, &rest);
            if is_completed_primitive(&g1) && is_completed_primitive(&g2) {
                out.push((sep, g1, g2));
            }
            if comps.len() == 2 {
                break;
            }
        }
    }
    out
}

/// Glues `g1` and `g2` along the triangles `t1` and `t2` (identifying
/// `t1[i]` with `t2[i]`) and removes the triangle edges of both.
pub fn glue_on_triangles(g1: &Graph, t1: [usize; 3], g2: &Graph, t2: [usize; 3]) -> Graph {
    let is_tri_edge = |t: [usize; 3], a: usize, b: usize| {
        a != b && t.contains(&a) && t.contains(&b)
    };
    let mut map2 = vec![usize::MAX; g2.vertex_count()];
    let mut next = g1.vertex_count();
    for v in 0..g2.vertex_count() {
        if let Some(i) = t2.iter().position(|&w| w == v) {
            map2[v] = t1[i];
        } else {
            map2[v] = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    let mut dropped1 = [false; 3];
    for &(a, b) in g1.edges() {
        if is_tri_edge(t1, a, b) {
            let k = tri_slot(t1, a, b);
            if !dropped1[k] {
                dropped1[k] = true;
                continue;
            }
        }
        edges.push((a, b));
    }
    let mut dropped2 = [false; 3];
    for &(a, b) in g2.edges() {
        if is_tri_edge(t2, a, b) {
            let k = tri_slot(t2, a, b);
            if !dropped2[k] {
                dropped2[k] = true;
                continue;
            }
        }
        edges.push((map2[a], map2[b]));
    }
    Graph::new(next, edges).expect("indices in range")
}

fn tri_slot(t: [usize; 3], a: usize, b: usize) -> usize {
    let i = t.iter().position(|&w| w == a).unwrap();
    let j = t.iter().position(|&w| w == b).unwrap();
    // slot of the edge opposite the remaining triangle vertex
    3 - i - j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    fn k5_squared() -> Graph {
        glue_on_triangles(&Graph::k5(), [0, 1, 2], &Graph::k5(), [0, 1, 2])
    }

    #[test]
    fn glued_k5_pair_is_completed_primitive() {
        let g = k5_squared();
        assert_eq!(g.vertex_count(), 7);
        assert!(g.is_regular(4));
        assert!(is_completed_primitive(&g));
    }

    #[test]
    fn glued_pair_splits_back() {
        let (a, b) = split_product(&k5_squared()).expect("reducible");
        assert!(is_isomorphic(&a, &Graph::k5()).unwrap());
        assert!(is_isomorphic(&b, &Graph::k5()).unwrap());
    }

    #[test]
    fn k5_and_octahedron_do_not_split() {
        assert!(three_vertex_separators(&Graph::k5()).is_empty());
        assert!(split_product(&Graph::k5()).is_none());
        assert!(three_vertex_separators(&Graph::octahedron()).is_empty());
        assert!(split_product(&Graph::octahedron()).is_none());
    }

    #[test]
    fn k5_times_octahedron() {
        let g = glue_on_triangles(&Graph::k5(), [0, 1, 2], &Graph::octahedron(), [0, 1, 2]);
        assert_eq!(g.vertex_count(), 8);
        assert!(is_completed_primitive(&g));
        let (a, b) = split_product(&g).unwrap();
        let mut sizes = [a.vertex_count(), b.vertex_count()];
        sizes.sort_unstable();
        assert_eq!(sizes, [5, 6]);
    }
}
