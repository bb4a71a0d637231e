//! The graph matrix and its determinants.

use super::poly::{SparsePoly, MAX_VARS};
use super::SympolyError;
use crate::graph::Graph;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Square matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: Vec<Vec<SparsePoly>>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, rows: Vec<Vec<SparsePoly>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == rows.len()), "matrix must be square");
        PolyMatrix { nvars, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePoly {
        &self.rows[i][j]
    }

    /// Removes the listed rows and columns (each list in any order).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let keep_r: Vec<usize> = (0..self.dim()).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.dim()).filter(|j| !cols.contains(j)).collect();
        assert_eq!(keep_r.len(), keep_c.len(), "minor must stay square");
        PolyMatrix {
            nvars: self.nvars,
            rows: keep_r
                .iter()
                .map(|&i| keep_c.iter().map(|&j| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Sets the listed variables to zero in every entry.
    pub fn set_zero(&self, vars: &[usize]) -> PolyMatrix {
        if vars.is_empty() {
            return self.clone();
        }
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows.iter().map(|r| r.iter().map(|e| e.set_zero(vars)).collect()).collect(),
        }
    }

    /// Determinant: Laplace expansion up to dimension 6, Bareiss above.
    pub fn determinant(&self) -> SparsePoly {
        if self.dim() <= 6 {
            self.det_laplace()
        } else {
            self.det_bareiss()
        }
    }

    /// Cofactor expansion along the sparsest row.
    pub fn det_laplace(&self) -> SparsePoly {
        let n = self.dim();
        if n == 0 {
            return SparsePoly::one(self.nvars);
        }
        if n == 1 {
            return self.rows[0][0].clone();
        }
        let r = (0..n)
            .min_by_key(|&i| self.rows[i].iter().filter(|e| !e.is_zero()).count())
            .unwrap();
        let mut total = SparsePoly::zero(self.nvars);
        for j in 0..n {
            let e = &self.rows[r][j];
            if e.is_zero() {
                continue;
            }
            let sub = self.minor(&[r], &[j]).det_laplace();
            let term = e.mul(&sub);
            total = if (r + j) % 2 == 0 { total.add(&term) } else { total.sub(&term) };
        }
        total
    }

    /// Fraction-free elimination with full pivoting. Pivots are chosen to
    /// keep the arithmetic cheap: constant entries first (unit ones before
    /// others), then the fewest terms, ties broken by Markowitz cost.
    pub fn det_bareiss(&self) -> SparsePoly {
        let n = self.dim();
        let nvars = self.nvars;
        let mut a = self.rows.clone();
        let mut prev = SparsePoly::one(nvars);
        let mut negate = false;
        for k in 0..n {
            let Some((pi, pj)) = choose_pivot(&a, k) else {
                return SparsePoly::zero(nvars);
            };
            if pi != k {
                a.swap(pi, k);
                negate = !negate;
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                negate = !negate;
            }
            let pivot = a[k][k].clone();
            let prev_is_one = prev.constant_value().is_some_and(|c| c.is_one());
            let prev_neg_one = prev.constant_value().is_some_and(|c| c.is_negative() && c.abs().is_one());
            for i in k + 1..n {
                let aik = a[i][k].clone();
                for j in k + 1..n {
                    let akj = &a[k][j];
                    let mut v = if a[i][j].is_zero() {
                        SparsePoly::zero(nvars)
                    } else {
                        pivot.mul(&a[i][j])
                    };
                    if !aik.is_zero() && !akj.is_zero() {
                        v = v.sub(&aik.mul(akj));
                    }
                    a[i][j] = if v.is_zero() || prev_is_one {
                        v
                    } else if prev_neg_one {
                        v.neg()
                    } else {
                        v.div_exact(&prev).expect("Bareiss division is exact")
                    };
                }
                a[i][k] = SparsePoly::zero(nvars);
            }
            prev = pivot;
        }
        if negate {
            prev.neg()
        } else {
            prev
        }
    }
}

fn choose_pivot(a: &[Vec<SparsePoly>], k: usize) -> Option<(usize, usize)> {
    let n = a.len();
    let row_nz: Vec<usize> =
        (0..n).map(|i| if i < k { 0 } else { (k..n).filter(|&j| !a[i][j].is_zero()).count() }).collect();
    let col_nz: Vec<usize> =
        (0..n).map(|j| if j < k { 0 } else { (k..n).filter(|&i| !a[i][j].is_zero()).count() }).collect();
    let mut best: Option<((u8, usize, usize), (usize, usize))> = None;
    for i in k..n {
        for j in k..n {
            let e = &a[i][j];
            if e.is_zero() {
                continue;
            }
            let class = match e.constant_value() {
                Some(c) if c.abs().is_one() => 0u8,
                Some(_) => 1,
                None => 2,
            };
            let key = (class, e.len(), (row_nz[i] - 1) * (col_nz[j] - 1));
            if best.as_ref().map_or(true, |(b, _)| key < *b) {
                best = Some((key, (i, j)));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// `M_G` with edge rows `0..N` and vertex rows `N..N+V-1`; the vertex
/// `deleted` is dropped. Edge `(u, v)` is oriented from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMatrix {
    pub edge_count: usize,
    pub vertex_count: usize,
    pub deleted_vertex: usize,
    pub matrix: PolyMatrix,
}

impl GraphMatrix {
    pub fn new(g: &Graph) -> Result<Self, SympolyError> {
        Self::with_deleted_vertex(g, g.vertex_count() - 1)
    }

    pub fn with_deleted_vertex(g: &Graph, deleted: usize) -> Result<Self, SympolyError> {
        let ne = g.edge_count();
        let nv = g.vertex_count();
        if ne > MAX_VARS {
            return Err(SympolyError::TooManyEdges(ne));
        }
        if deleted >= nv {
            return Err(SympolyError::IndexOutOfRange(deleted));
        }
        let vindex = |v: usize| -> Option<usize> {
            match v.cmp(&deleted) {
                core::cmp::Ordering::Less => Some(ne + v),
                core::cmp::Ordering::Equal => None,
                core::cmp::Ordering::Greater => Some(ne + v - 1),
            }
        };
        let dim = ne + nv - 1;
        let mut rows = vec![vec![SparsePoly::zero(ne); dim]; dim];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            rows[e][e] = SparsePoly::var(ne, e);
            if u == v {
                continue;
            }
            if let Some(cu) = vindex(u) {
                rows[e][cu] = SparsePoly::constant(ne, 1);
                rows[cu][e] = SparsePoly::constant(ne, -1);
            }
            if let Some(cv) = vindex(v) {
                rows[e][cv] = SparsePoly::constant(ne, -1);
                rows[cv][e] = SparsePoly::constant(ne, 1);
            }
        }
        Ok(GraphMatrix {
            edge_count: ne,
            vertex_count: nv,
            deleted_vertex: deleted,
            matrix: PolyMatrix::new(ne, rows),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Ψ^{I,J}_K`: rows `I` and columns `J` (edge indices) removed, `x_e = 0`
    /// for `e ∈ K`. Remaining rows and columns keep their natural order.
    pub fn dodgson(&self, i: &[usize], j: &[usize], k: &[usize]) -> Result<SparsePoly, SympolyError> {
        if i.len() != j.len() {
            return Err(SympolyError::UnequalIndexSets);
        }
        for &e in i.iter().chain(j).chain(k) {
            if e >= self.edge_count {
                return Err(SympolyError::IndexOutOfRange(e));
            }
        }
        for s in [i, j] {
            for (a, &x) in s.iter().enumerate() {
                if s[..a].contains(&x) {
                    return Err(SympolyError::RepeatedEdge(x));
                }
            }
        }
        Ok(self.matrix.minor(i, j).set_zero(k).determinant())
    }
}

/// `Ψ_G` as `det M_G`.
pub fn graph_polynomial(g: &Graph) -> Result<SparsePoly, SympolyError> {
    if !g.is_connected() {
        return Err(SympolyError::Disconnected);
    }
    Ok(GraphMatrix::new(g)?.matrix.determinant())
}

pub fn dodgson(g: &Graph, i: &[usize], j: &[usize], k: &[usize]) -> Result<SparsePoly, SympolyError> {
    GraphMatrix::new(g)?.dodgson(i, j, k)
}

/// Independent oracle: sum over spanning trees `T` of the product of the
/// variables of edges not in `T`, by enumerating edge subsets of size
/// `V - 1`.
pub fn spanning_tree_polynomial(g: &Graph) -> Result<SparsePoly, SympolyError> {
    if !g.is_connected() {
        return Err(SympolyError::Disconnected);
    }
    let ne = g.edge_count();
    if ne > MAX_VARS {
        return Err(SympolyError::TooManyEdges(ne));
    }
    let nv = g.vertex_count();
    let target = nv - 1;
    let mut terms = Vec::new();
    let mut chosen = Vec::with_capacity(target);
    tree_subsets(g, 0, target, &mut chosen, &mut |tree| {
        let mut m = super::poly::Monomial::ONE;
        for e in 0..ne {
            if !tree.contains(&e) {
                m = m.with_exp(e, 1);
            }
        }
        terms.push((m, BigInt::one()));
    });
    Ok(SparsePoly::from_terms(ne, terms))
}

fn tree_subsets(
    g: &Graph,
    start: usize,
    left: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if left == 0 {
        if is_forest(g, chosen) {
            emit(chosen);
        }
        return;
    }
    for e in start..g.edge_count() {
        if g.edge_count() - e < left {
            break;
        }
        chosen.push(e);
        if is_forest(g, chosen) {
            tree_subsets(g, e + 1, left - 1, chosen, emit);
        }
        chosen.pop();
    }
}

fn is_forest(g: &Graph, edges: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in edges {
        let (u, v) = g.edges()[e];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Spanning-tree count from the oracle, as a plain integer.
pub fn spanning_tree_count(g: &Graph) -> Result<usize, SympolyError> {
    Ok(spanning_tree_polynomial(g)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use alloc::vec;

    fn all_dodgson_checks(g: &Graph) {
        let psi = graph_polynomial(g).unwrap();
        let gm = GraphMatrix::new(g).unwrap();
        for e in 0..g.edge_count() {
            let del = gm.dodgson(&[e], &[e], &[]).unwrap();
            let con = gm.dodgson(&[], &[], &[e]).unwrap();
            // Ψ = x_e Ψ^{e,e} + Ψ_e
            let x = SparsePoly::var(g.edge_count(), e);
            assert_eq!(psi, x.mul(&del).add(&con), "edge {e}");
        }
    }

    #[test]
    fn triangle() {
        let p = graph_polynomial(&Graph::cycle(3)).unwrap();
        assert_eq!(p.to_string(), "x1 + x2 + x3");
    }

    #[test]
    fn double_edge() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(graph_polynomial(&g).unwrap().to_string(), "x1 + x2");
    }

    #[test]
    fn k4_has_sixteen_unit_monomials() {
        let p = graph_polynomial(&Graph::k4()).unwrap();
        assert_eq!(p.len(), 16);
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert!(p.terms().iter().all(|(_, c)| c.is_one()));
        assert_eq!(p, spanning_tree_polynomial(&Graph::k4()).unwrap());
    }

    #[test]
    fn bareiss_matches_laplace_and_trees() {
        for g in [Graph::k4(), Graph::cycle(5), Graph::double_edge_triangle()] {
            let gm = GraphMatrix::new(&g).unwrap();
            assert_eq!(gm.matrix.det_bareiss(), spanning_tree_polynomial(&g).unwrap());
            if gm.dim() <= 8 {
                assert_eq!(gm.matrix.det_laplace(), gm.matrix.det_bareiss());
            }
        }
        let k5 = Graph::k5();
        assert_eq!(graph_polynomial(&k5).unwrap(), spanning_tree_polynomial(&k5).unwrap());
    }

    #[test]
    fn deletion_contraction_split() {
        all_dodgson_checks(&Graph::k4());
        all_dodgson_checks(&Graph::cycle(4));
        all_dodgson_checks(&Graph::double_edge_triangle());
    }

    #[test]
    fn dodgson_deletion_and_contraction_graphs() {
        let k4 = Graph::k4();
        let gm = GraphMatrix::new(&k4).unwrap();
        for e in 0..6 {
            let deleted = k4.delete_edges(&[e]);
            let del = gm.dodgson(&[e], &[e], &[]).unwrap();
            let oracle = spanning_tree_polynomial(&deleted).unwrap();
            // the deleted graph has one variable fewer; map it back
            let map: Vec<usize> = (0..6).filter(|&f| f != e).collect();
            assert_eq!(del, oracle.rename(&map, 6));
            let contracted = k4.contract_edge(e);
            let con = gm.dodgson(&[], &[], &[e]).unwrap();
            let oracle = spanning_tree_polynomial(&contracted).unwrap();
            assert_eq!(con, oracle.rename(&map, 6));
        }
    }

    #[test]
    fn deleted_vertex_does_not_matter() {
        let g = Graph::k5();
        let a = GraphMatrix::with_deleted_vertex(&g, 0).unwrap().matrix.determinant();
        let b = GraphMatrix::with_deleted_vertex(&g, 4).unwrap().matrix.determinant();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let disc = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(graph_polynomial(&disc), Err(SympolyError::Disconnected));
        let gm = GraphMatrix::new(&Graph::k4()).unwrap();
        assert_eq!(gm.dodgson(&[0], &[], &[]), Err(SympolyError::UnequalIndexSets));
        assert_eq!(gm.dodgson(&[9], &[1], &[]), Err(SympolyError::IndexOutOfRange(9)));
    }
}
