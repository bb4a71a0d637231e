//! Five-invariant and the denominator-reduction cascade.

use super::matrix::GraphMatrix;
use super::poly::SparsePoly;
use super::SympolyError;
use crate::graph::Graph;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigInt;

pub const DEFAULT_NODE_BUDGET: usize = 10_000;

/// `⁵Ψ(i,j,k,l,m) = Ψ^{ij,kl}_m Ψ^{ikm,jlm} − Ψ^{ik,jl}_m Ψ^{ijm,klm}`
/// with the sign fixed so the lex-leading coefficient is positive.
pub fn five_invariant(g: &Graph, edges: [usize; 5]) -> Result<SparsePoly, SympolyError> {
    let gm = GraphMatrix::new(g)?;
    five_invariant_with(&gm, edges)
}

pub(crate) fn five_invariant_with(
    gm: &GraphMatrix,
    [i, j, k, l, m]: [usize; 5],
) -> Result<SparsePoly, SympolyError> {
    let e = [i, j, k, l, m];
    for (a, &x) in e.iter().enumerate() {
        if x >= gm.edge_count {
            return Err(SympolyError::IndexOutOfRange(x));
        }
        if e[..a].contains(&x) {
            return Err(SympolyError::RepeatedEdge(x));
        }
    }
    let a = gm.dodgson(&[i, j], &[k, l], &[m])?;
    let d = gm.dodgson(&[i, k, m], &[j, l, m], &[])?;
    let b = gm.dodgson(&[i, k], &[j, l], &[m])?;
    let c = gm.dodgson(&[i, j, m], &[k, l, m], &[])?;
    Ok(a.mul(&d).sub(&b.mul(&c)).canonical_sign())
}

/// `p = (a v + b)(c v + d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorQuadruple {
    pub a: SparsePoly,
    pub b: SparsePoly,
    pub c: SparsePoly,
    pub d: SparsePoly,
}

impl FactorQuadruple {
    /// `ad − bc`.
    pub fn resultant(&self) -> SparsePoly {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }
}

/// Result of testing one variable: the factorization and `±(ad − bc)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Absent when the resultant is known but the gcd recovering the
    /// factors hit its work limit.
    pub factors: Option<FactorQuadruple>,
    /// Sign-canonical resultant.
    pub resultant: SparsePoly,
}

/// Writes `p = A v² + B v + C` and factors it as `(a v + b)(c v + d)` when
/// the discriminant `B² − 4AC` is a perfect square. Since
/// `B² − 4AC = (ad − bc)²` the square root is the resultant. Degree one in
/// `v` gives `((B, C), (0, 1))`; no dependence on `v` gives `((0, p), (0, 1))`
/// with resultant 0.
pub fn split_bilinear(p: &SparsePoly, v: usize) -> Option<Split> {
    let n = p.nvars();
    assert!(p.degree_in(v) <= 2, "split_bilinear needs degree at most 2");
    let cs = p.coefficients_in(v);
    let zero = SparsePoly::zero(n);
    let one = SparsePoly::one(n);
    match cs.len() {
        1 => Some(Split {
            factors: Some(FactorQuadruple { a: zero.clone(), b: p.clone(), c: zero.clone(), d: one }),
            resultant: zero,
        }),
        2 => Some(Split {
            resultant: cs[1].clone().canonical_sign(),
            factors: Some(FactorQuadruple { a: cs[1].clone(), b: cs[0].clone(), c: zero, d: one }),
        }),
        _ => {
            let s = discriminant_root(&cs[2], &cs[1], &cs[0])?;
            let factors = factor_from_root(&cs[2], &cs[1], &cs[0], &s);
            Some(Split { factors, resultant: s.canonical_sign() })
        }
    }
}

/// Exact `sqrt(B² − 4AC)` or `None`.
fn discriminant_root(a: &SparsePoly, b: &SparsePoly, c: &SparsePoly) -> Option<SparsePoly> {
    if !probably_square(a, b, c) {
        return None;
    }
    let disc = b.square().sub(&a.mul(c).scale(&BigInt::from(4)));
    disc.sqrt()
}

/// Cheap filter: a polynomial square takes square values everywhere, so
/// evaluate the discriminant modulo a large prime at a few pseudo-random
/// points and reject on any quadratic non-residue.
fn probably_square(a: &SparsePoly, b: &SparsePoly, c: &SparsePoly) -> bool {
    const P: u64 = (1 << 61) - 1;
    let n = a.nvars();
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ (a.len() as u64) << 32 ^ b.len() as u64;
    let mut next = || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) % P
    };
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % P as u128) as u64;
    let powm = |mut base: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, base);
            }
            base = mulm(base, base);
            e >>= 1;
        }
        r
    };
    for _ in 0..12 {
        let point: Vec<u64> = (0..n).map(|_| next()).collect();
        let av = a.eval_mod(&point, P);
        let bv = b.eval_mod(&point, P);
        let cv = c.eval_mod(&point, P);
        let disc = (mulm(bv, bv) + P - mulm(4, mulm(av, cv))) % P;
        if disc != 0 && powm(disc, (P - 1) / 2) != 1 {
            return false;
        }
    }
    true
}

/// Given `s² = B² − 4AC`, returns one factorization. With
/// `P = (B + s)/2 = ad` and `Q = (B − s)/2 = bc`: take `a = gcd(A, P)`,
/// `c = A/a`, `d = P/a`, `b = Q/c` (or the mirrored choice when `P = 0`).
/// `None` when the gcd gives up.
fn factor_from_root(a_: &SparsePoly, b_: &SparsePoly, c_: &SparsePoly, s: &SparsePoly) -> Option<FactorQuadruple> {
    let two = SparsePoly::constant(a_.nvars(), 2);
    let p = b_.add(s).div_exact(&two).expect("B + s is even");
    let q = b_.sub(s).div_exact(&two).expect("B - s is even");
    let (a, b, c, d) = if !p.is_zero() {
        let a = a_.gcd(&p)?;
        let c = a_.div_exact(&a).expect("gcd divides A");
        let d = p.div_exact(&a).expect("gcd divides P");
        let b = q.div_exact(&c).expect("c divides Q");
        (a, b, c, d)
    } else {
        // ad = 0 with A = ac ≠ 0 forces d = 0, so bc = B
        let c = a_.gcd(&q)?;
        let a = a_.div_exact(&c).expect("gcd divides A");
        let b = q.div_exact(&c).expect("gcd divides Q");
        (a, b, c, SparsePoly::zero(a_.nvars()))
    };
    debug_assert_eq!(b.mul(&d), *c_, "constant coefficient reproduced");
    Some(FactorQuadruple { a, b, c, d })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStepLog {
    /// Eliminated edge index.
    pub variable: usize,
    pub factors: Option<FactorQuadruple>,
}

/// State of the cascade after `step` variables are eliminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionState {
    pub edge_count: usize,
    pub loop_number: usize,
    /// `D^step`, sign-canonical.
    pub current: SparsePoly,
    /// Edge indices in elimination order; the first five seed the 5-invariant.
    pub eliminated: Vec<usize>,
    pub step: usize,
    pub factor_log: Vec<ReductionStepLog>,
    /// True when the search ran out of budget before reaching `N − 1` or
    /// zero.
    pub stuck: bool,
    pub nodes_explored: usize,
}

impl ReductionState {
    /// Variables not yet eliminated; counting runs over all of them.
    pub fn remaining(&self) -> Vec<usize> {
        (0..self.edge_count).filter(|e| !self.eliminated.contains(e)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.current.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct ReduceOptions {
    /// Preferred edge order; its first five edges seed the 5-invariant.
    pub order_hint: Option<Vec<usize>>,
    pub node_budget: usize,
    /// Record factor quadruples along the final ordering.
    pub record_factors: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { order_hint: None, node_budget: DEFAULT_NODE_BUDGET, record_factors: true }
    }
}

pub fn denominator_reduce(g: &Graph, order_hint: Option<&[usize]>) -> Result<ReductionState, SympolyError> {
    denominator_reduce_with(
        g,
        &ReduceOptions { order_hint: order_hint.map(<[usize]>::to_vec), ..ReduceOptions::default() },
    )
}

/// Seed edges: five of the six edges at two 3-valent vertices without a
/// common edge, the sixth listed next. Falls back to an adjacent pair of
/// 3-valent vertices (five distinct edges), then to low-degree vertices.
pub fn initial_edges(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let incident = |v: usize| -> Vec<usize> {
        g.edges().iter().enumerate().filter(|(_, &(a, b))| a == v || b == v).map(|(i, _)| i).collect()
    };
    let deg = g.degrees();
    let three: Vec<usize> = (0..n).filter(|&v| deg[v] == 3).collect();
    let mut adjacent_pair = None;
    for (x, &u) in three.iter().enumerate() {
        for &w in &three[x + 1..] {
            let eu = incident(u);
            let ew = incident(w);
            if eu.iter().all(|e| !ew.contains(e)) {
                let mut out = eu;
                out.extend(ew);
                return out;
            }
            if adjacent_pair.is_none() {
                adjacent_pair = Some((u, w));
            }
        }
    }
    let mut out: Vec<usize> = Vec::new();
    let push_all = |es: Vec<usize>, out: &mut Vec<usize>| {
        for e in es {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    };
    if let Some((u, w)) = adjacent_pair {
        push_all(incident(u), &mut out);
        push_all(incident(w), &mut out);
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (deg[v], v));
    for v in by_degree {
        if out.len() >= 5 {
            break;
        }
        push_all(incident(v), &mut out);
    }
    for e in 0..g.edge_count() {
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

struct Search<'a> {
    n_edges: usize,
    loops: usize,
    preference: &'a [usize],
    budget: usize,
    nodes: usize,
    visited: BTreeSet<u32>,
    best_path: Vec<(usize, SparsePoly)>,
    done: bool,
}

impl Search<'_> {
    fn check(&self, d: &SparsePoly, n: usize) -> Result<(), SympolyError> {
        if d.is_zero() {
            return Ok(());
        }
        let expected = (2 * self.loops) as i64 - n as i64;
        if d.homogeneous_degree().map(i64::from) != Some(expected) {
            return Err(SympolyError::InvariantViolation { step: n, what: "homogeneous degree 2h - n" });
        }
        if d.max_degree_per_variable() > 2 {
            return Err(SympolyError::InvariantViolation { step: n, what: "degree at most 2 per variable" });
        }
        Ok(())
    }

    /// Depth-first over eliminated sets; `path` holds `(edge, D)` pairs
    /// beyond the seed.
    fn dfs(
        &mut self,
        d: &SparsePoly,
        mask: u32,
        n: usize,
        path: &mut Vec<(usize, SparsePoly)>,
    ) -> Result<(), SympolyError> {
        if self.done {
            return Ok(());
        }
        if path.len() > self.best_path.len() {
            self.best_path = path.clone();
        }
        if d.is_zero() || n + 1 >= self.n_edges {
            self.best_path = path.clone();
            self.done = true;
            return Ok(());
        }
        // variables of degree at most one always split, so try them first
        let mut order: Vec<usize> =
            self.preference.iter().copied().filter(|&v| mask >> v & 1 == 0).collect();
        order.sort_by_key(|&v| d.degree_in(v).min(2));
        for v in order {
            let child = mask | 1 << v;
            if self.visited.contains(&child) {
                continue;
            }
            if self.nodes >= self.budget {
                return Ok(());
            }
            self.nodes += 1;
            let Some(next) = resultant_only(d, v) else {
                continue;
            };
            self.visited.insert(child);
            self.check(&next, n + 1)?;
            path.push((v, next.clone()));
            self.dfs(&next, child, n + 1, path)?;
            path.pop();
            if self.done {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// The next reduced polynomial without building the factor quadruple.
fn resultant_only(d: &SparsePoly, v: usize) -> Option<SparsePoly> {
    let cs = d.coefficients_in(v);
    match cs.len() {
        1 => Some(SparsePoly::zero(d.nvars())),
        2 => Some(cs[1].clone().canonical_sign()),
        3 => discriminant_root(&cs[2], &cs[1], &cs[0]).map(SparsePoly::canonical_sign),
        _ => None,
    }
}

pub fn denominator_reduce_with(g: &Graph, opts: &ReduceOptions) -> Result<ReductionState, SympolyError> {
    let ne = g.edge_count();
    if !g.is_connected() {
        return Err(SympolyError::Disconnected);
    }
    if ne < 5 {
        return Err(SympolyError::Precondition("at least 5 edges are required"));
    }
    let h = g.loop_number();
    if 2 * h > ne {
        return Err(SympolyError::Precondition("loop number exceeds half the edge count"));
    }
    let gm = GraphMatrix::new(g)?;
    let mut preference = match &opts.order_hint {
        Some(hint) => {
            for &e in hint {
                if e >= ne {
                    return Err(SympolyError::IndexOutOfRange(e));
                }
            }
            let mut p: Vec<usize> = Vec::new();
            for &e in hint {
                if !p.contains(&e) {
                    p.push(e);
                }
            }
            if p.len() < 5 {
                for e in initial_edges(g) {
                    if !p.contains(&e) {
                        p.push(e);
                    }
                }
            }
            p
        }
        None => initial_edges(g),
    };
    for e in 0..ne {
        if !preference.contains(&e) {
            preference.push(e);
        }
    }
    let seed = [preference[0], preference[1], preference[2], preference[3], preference[4]];
    let d5 = five_invariant_with(&gm, seed)?;
    let mut search = Search {
        n_edges: ne,
        loops: h,
        preference: &preference[5..],
        budget: opts.node_budget,
        nodes: 0,
        visited: BTreeSet::new(),
        best_path: Vec::new(),
        done: false,
    };
    search.check(&d5, 5)?;
    let mask = seed.iter().fold(0u32, |m, &e| m | 1 << e);
    search.dfs(&d5, mask, 5, &mut Vec::new())?;
    let stuck = !search.done;
    let nodes = search.nodes;
    let path = search.best_path;

    let mut eliminated = seed.to_vec();
    let mut factor_log = Vec::new();
    let mut current = d5;
    for (v, next) in path {
        if opts.record_factors {
            let split = split_bilinear(&current, v).expect("path steps split");
            debug_assert_eq!(split.resultant, next);
            factor_log.push(ReductionStepLog { variable: v, factors: split.factors });
        }
        eliminated.push(v);
        current = next;
    }
    Ok(ReductionState {
        edge_count: ne,
        loop_number: h,
        step: eliminated.len(),
        current,
        eliminated,
        factor_log,
        stuck,
        nodes_explored: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use alloc::vec;
    use num_traits::One;

    fn x(n: usize, v: usize) -> SparsePoly {
        SparsePoly::var(n, v)
    }

    #[test]
    fn split_of_product_of_linear_factors() {
        let n = 2;
        // (v + y)(2v + 3y), v = x1, y = x2
        let f1 = x(n, 0).add(&x(n, 1));
        let f2 = x(n, 0).scale(&BigInt::from(2)).add(&x(n, 1).scale(&BigInt::from(3)));
        let p = f1.mul(&f2);
        let s = split_bilinear(&p, 0).unwrap();
        assert_eq!(s.resultant, x(n, 1));
        let f = s.factors.as_ref().unwrap();
        let rebuilt = f.a.mul(&x(n, 0)).add(&f.b).mul(&f.c.mul(&x(n, 0)).add(&f.d));
        assert_eq!(rebuilt, p);
        assert_eq!(f.resultant().canonical_sign(), s.resultant);
    }

    #[test]
    fn irreducible_and_square() {
        let n = 2;
        let p = x(n, 0).square().add(&x(n, 1).square());
        assert!(split_bilinear(&p, 0).is_none());
        let sq = x(n, 0).add(&x(n, 1)).square();
        let s = split_bilinear(&sq, 0).unwrap();
        assert!(s.resultant.is_zero());
    }

    #[test]
    fn degenerate_splits() {
        let n = 3;
        let lin = x(n, 0).mul(&x(n, 1)).add(&x(n, 2));
        let s = split_bilinear(&lin, 0).unwrap();
        assert_eq!(s.resultant, x(n, 1));
        let s = split_bilinear(&lin, 1).unwrap();
        assert_eq!(s.resultant, x(n, 0));
        let free = x(n, 2).square();
        assert!(split_bilinear(&free, 0).unwrap().resultant.is_zero());
    }

    #[test]
    fn k4_five_invariant_is_the_remaining_variable() {
        let k4 = Graph::k4();
        for skip in 0..6 {
            let five: Vec<usize> = (0..6).filter(|&e| e != skip).collect();
            let d5 = five_invariant(&k4, [five[0], five[1], five[2], five[3], five[4]]).unwrap();
            assert_eq!(d5.len(), 1);
            assert_eq!(d5.terms()[0].0, super::super::poly::Monomial::var(skip));
            assert!(d5.terms()[0].1.is_one());
        }
    }

    #[test]
    fn five_invariant_permutations() {
        let g = Graph::k5().delete_vertex(0).unwrap().with_name("K4");
        let w = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)]).unwrap();
        for g in [g, w] {
            let base = [0usize, 1, 2, 3, 4];
            let reference = five_invariant(&g, base).unwrap();
            let mut perm = base;
            for _ in 0..120 {
                perm = next_permutation(perm);
                assert_eq!(five_invariant(&g, perm).unwrap(), reference);
            }
        }
    }

    fn next_permutation(mut a: [usize; 5]) -> [usize; 5] {
        let Some(i) = (0..4).rev().find(|&i| a[i] < a[i + 1]) else {
            a.reverse();
            return a;
        };
        let j = (i + 1..5).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
        a
    }

    #[test]
    fn k4_reduces_to_the_end() {
        let st = denominator_reduce(&Graph::k4(), None).unwrap();
        assert_eq!(st.step, 5);
        assert_eq!(st.current.len(), 1);
        assert_eq!(st.current.homogeneous_degree(), Some(1));
        assert!(!st.stuck);
    }

    #[test]
    fn wheel_with_four_spokes() {
        let w = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)]).unwrap();
        let st = denominator_reduce(&w, None).unwrap();
        assert!(!st.stuck);
        assert_eq!(st.step, 7);
        assert_eq!(st.factor_log.len(), 2);
        for log in &st.factor_log {
            assert!(!log.factors.as_ref().unwrap().resultant().is_zero());
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(denominator_reduce(&Graph::cycle(4), None), Err(SympolyError::Precondition(_))));
        let dense = Graph::k5();
        assert!(matches!(denominator_reduce(&dense, None), Err(SympolyError::Precondition(_))));
        assert_eq!(
            five_invariant(&Graph::k4(), [0, 1, 2, 3, 3]),
            Err(SympolyError::RepeatedEdge(3))
        );
    }
}
