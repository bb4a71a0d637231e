use super::double_triangle::{double_triangles, dt_reduce_at};
use super::product::split_product_all;
use super::{canonical_form, is_completed_primitive, Graph, GraphError};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    ProductSplit { vertices: usize, separator: [usize; 3] },
    DoubleTriangle { vertices: usize, a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestorResult {
    /// Prime components in canonical form, sorted by certificate.
    pub components: Vec<Graph>,
    pub trace: Vec<ReductionStep>,
}

impl AncestorResult {
    pub fn is_prime(&self) -> bool {
        self.components.len() == 1
    }

    pub fn certificates(&self) -> Vec<Vec<u8>> {
        self.components
            .iter()
            .map(|g| canonical_form(g).expect("canonical components").certificate)
            .collect()
    }
}

/// True when `g` admits neither a product split nor a double-triangle
/// reduction.
pub fn is_prime_ancestor(g: &Graph) -> bool {
    (g.vertex_count() < 6 || double_triangles(g).is_empty()) && split_product_all(g).is_empty()
}

/// Reduces to the prime ancestor, always taking the first available move.
pub fn ancestor(g: &Graph) -> Result<AncestorResult, GraphError> {
    ancestor_with(g, |_| 0)
}

/// Reduces to the ancestor; `choose(k)` picks which of the `k` available
/// moves (product splits first, then double triangles) is applied.
pub fn ancestor_with(
    g: &Graph,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<AncestorResult, GraphError> {
    let mut stack = vec![g.clone()];
    let mut done: Vec<(Vec<u8>, Graph)> = Vec::new();
    let mut trace = Vec::new();
    while let Some(h) = stack.pop() {
        let splits = split_product_all(&h);
        let dts = if h.vertex_count() >= 6 { double_triangles(&h) } else { Vec::new() };
        let options = splits.len() + dts.len();
        if options == 0 {
            let cf = canonical_form(&h)?;
            done.push((cf.certificate, cf.graph));
            continue;
        }
        let pick = choose(options) % options;
        if pick < splits.len() {
            let (sep, a, b) = splits.into_iter().nth(pick).unwrap();
            trace.push(ReductionStep::ProductSplit { vertices: h.vertex_count(), separator: sep });
            stack.push(a);
            stack.push(b);
        } else {
            let dt = dts[pick - splits.len()];
            let r = dt_reduce_at(&h, dt);
            if !is_completed_primitive(&r) {
                return Err(GraphError::DtBroken);
            }
            trace.push(ReductionStep::DoubleTriangle { vertices: h.vertex_count(), a: dt.a, b: dt.b });
            stack.push(r);
        }
    }
    done.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(AncestorResult { components: done.into_iter().map(|(_, g)| g).collect(), trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{glue_on_triangles, is_isomorphic};

    #[test]
    fn octahedron_family() {
        let r = ancestor(&Graph::octahedron()).unwrap();
        assert!(r.is_prime());
        assert!(is_isomorphic(&r.components[0], &Graph::k5()).unwrap());
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn k5_is_fixed() {
        let r = ancestor(&Graph::k5()).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn product_of_two_k5() {
        let g = glue_on_triangles(&Graph::k5(), [0, 1, 2], &Graph::k5(), [2, 3, 4]);
        let r = ancestor(&g).unwrap();
        assert_eq!(r.components.len(), 2);
        for c in &r.components {
            assert!(is_isomorphic(c, &Graph::k5()).unwrap());
        }
    }

    #[test]
    fn choice_does_not_matter_for_octahedron_times_k5() {
        let g = glue_on_triangles(&Graph::octahedron(), [0, 1, 2], &Graph::k5(), [0, 1, 2]);
        let first = ancestor(&g).unwrap().certificates();
        for seed in 0..12usize {
            let mut s = seed;
            let r = ancestor_with(&g, |k| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 33) % k
            })
            .unwrap();
            assert_eq!(r.certificates(), first);
        }
    }
}
