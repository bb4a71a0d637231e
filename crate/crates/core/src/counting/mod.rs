//! Point counts of polynomials over F_q and the c₂ residues built on them.

mod engine;
mod record;

pub use engine::Program;
pub use record::{C2Entry, C2Method, C2Record, RecordError};

use crate::ffield::FieldTable;
use crate::graph::Graph;
use crate::sympoly::{graph_polynomial, ReductionState, SparsePoly, SympolyError};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use engine::{degree_in, normalize, occurrences, reduce_coefficients, ModTerms};

pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountError {
    /// Estimated leaf evaluations exceed the budget.
    TooLarge { estimate: u128, budget: u64 },
    /// `[X_G]_q` was not divisible by q². Always a bug.
    NotDivisible { q: u32, count: u128 },
    TooFewVertices(usize),
    NotPrimeField(u32),
    Polynomial(SympolyError),
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::TooLarge { estimate, budget } => {
                write!(f, "count too large: about {estimate} evaluations, budget {budget}")
            }
            CountError::NotDivisible { q, count } => {
                write!(f, "point count {count} not divisible by {q}^2")
            }
            CountError::TooFewVertices(n) => write!(f, "graph has {n} vertices, need at least 3"),
            CountError::NotPrimeField(q) => write!(f, "q = {q} is not prime"),
            CountError::Polynomial(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CountError {}

impl From<SympolyError> for CountError {
    fn from(e: SympolyError) -> Self {
        CountError::Polynomial(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elimination {
    Off,
    /// Pick the degree-≤2 variable occurring in the most terms.
    Auto,
    Var(usize),
}

/// A counting request: `poly` over the variables `vars`, which may include
/// variables `poly` does not mention.
#[derive(Debug, Clone)]
pub struct CountJob {
    pub poly: SparsePoly,
    pub vars: Vec<usize>,
    pub use_homogeneity: bool,
    pub eliminate: Elimination,
    pub budget: u64,
}

impl CountJob {
    pub fn new(poly: SparsePoly, vars: Vec<usize>) -> Self {
        CountJob { poly, vars, use_homogeneity: true, eliminate: Elimination::Auto, budget: DEFAULT_BUDGET }
    }

    /// Counts over all ambient variables of `poly`.
    pub fn all_vars(poly: SparsePoly) -> Self {
        let vars = (0..poly.nvars()).collect();
        CountJob::new(poly, vars)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn plain(mut self) -> Self {
        self.use_homogeneity = false;
        self.eliminate = Elimination::Off;
        self
    }

    pub fn plan(&self, field: &FieldTable) -> Result<CountPlan, CountError> {
        CountPlan::new(self, field)
    }
}

/// One compiled sub-count, weighted by `multiplier`.
#[derive(Debug, Clone)]
pub struct PlanPart {
    pub multiplier: u128,
    pub program: Program,
}

/// A job compiled for one field. The total count is
/// `base + Σ multiplier · count(part)`.
#[derive(Debug, Clone)]
pub struct CountPlan {
    pub q: u32,
    pub base: u128,
    pub parts: Vec<PlanPart>,
}

/// A slice of one part's enumeration: the outermost variables pinned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub part: usize,
    pub prefix: Vec<u32>,
}

impl CountPlan {
    pub fn new(job: &CountJob, field: &FieldTable) -> Result<CountPlan, CountError> {
        let q = field.q();
        let p = field.p();
        let terms = reduce_coefficients(&job.poly, p);
        let mut plan = CountPlan { q, base: 0, parts: Vec::new() };
        let eliminate = if p == 2 { Elimination::Off } else { job.eliminate };
        let homogeneous = job.use_homogeneity && homogeneous_degree(&terms).is_some_and(|d| d > 0);
        if homogeneous {
            let (present, absent) = split_present(&terms, &job.vars);
            let scale = pow(q, absent);
            // the origin
            plan.base = scale;
            // order so the last variable, dehomogenized in the biggest
            // sub-count, merges the most terms
            let mut order = present;
            order.sort_by_key(|&v| (occurrences(&terms, v), core::cmp::Reverse(v)));
            for j in 0..order.len() {
                // y_j = 1 and y_{>j} = 0, over y_{<j}
                let zeroed: Vec<usize> = order[j + 1..].to_vec();
                let sub = set_one(&set_zero(&terms, &zeroed), order[j], p);
                plan.push_affine(&sub, &order[..j], eliminate, scale * (q as u128 - 1));
            }
        } else {
            plan.push_affine(&terms, &job.vars, eliminate, 1);
        }
        let estimate = plan.estimate();
        if estimate > job.budget as u128 {
            return Err(CountError::TooLarge { estimate, budget: job.budget });
        }
        Ok(plan)
    }

    fn push_affine(&mut self, terms: &ModTerms, vars: &[usize], eliminate: Elimination, mult: u128) {
        let q = self.q;
        let (present, absent) = split_present(terms, vars);
        let mult = mult * pow(q, absent);
        if terms.is_empty() {
            self.base += mult * pow(q, present.len());
            return;
        }
        let z = match eliminate {
            Elimination::Off => None,
            Elimination::Var(v) => {
                assert!(degree_in(terms, v) <= 2, "eliminated variable has degree above 2");
                present.contains(&v).then_some(v)
            }
            Elimination::Auto => present
                .iter()
                .copied()
                .filter(|&v| degree_in(terms, v) <= 2)
                .max_by_key(|&v| (occurrences(terms, v), core::cmp::Reverse(v))),
        };
        let mut outer: Vec<usize> = present.iter().copied().filter(|&v| Some(v) != z).collect();
        // most frequent outermost: their partial evaluation collapses the
        // most terms early
        outer.sort_by_key(|&v| (core::cmp::Reverse(occurrences(terms, v)), v));
        let program = Program::compile(terms, outer, z);
        self.parts.push(PlanPart { multiplier: mult, program });
    }

    /// Leaf evaluations summed over parts.
    pub fn estimate(&self) -> u128 {
        self.parts.iter().map(|part| pow(self.q, part.program.enumerated())).sum()
    }

    /// Splits every part into chunks of about `q^depth` pieces.
    pub fn chunks(&self, min_chunks: usize) -> Vec<Chunk> {
        let mut out = Vec::new();
        for (i, part) in self.parts.iter().enumerate() {
            let k = part.program.enumerated();
            let mut depth = 0;
            while depth < k && depth < 3 && (pow(self.q, depth) as usize) < min_chunks {
                depth += 1;
            }
            let n = pow(self.q, depth) as usize;
            for idx in 0..n {
                let mut prefix = vec![0u32; depth];
                let mut r = idx;
                for slot in prefix.iter_mut().rev() {
                    *slot = (r % self.q as usize) as u32;
                    r /= self.q as usize;
                }
                out.push(Chunk { part: i, prefix });
            }
        }
        out
    }

    /// Weighted count contributed by one chunk.
    pub fn count_chunk(&self, chunk: &Chunk, field: &FieldTable) -> u128 {
        let part = &self.parts[chunk.part];
        part.multiplier * part.program.count_prefix(field, &chunk.prefix)
    }

    /// Sequential total.
    pub fn count(&self, field: &FieldTable) -> u128 {
        self.base
            + self
                .parts
                .iter()
                .map(|part| part.multiplier * part.program.count_prefix(field, &[]))
                .sum::<u128>()
    }
}

fn pow(q: u32, e: usize) -> u128 {
    (q as u128).pow(e as u32)
}

fn homogeneous_degree(terms: &ModTerms) -> Option<u32> {
    let d = terms.first()?.0.degree();
    terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
}

fn split_present(terms: &ModTerms, vars: &[usize]) -> (Vec<usize>, usize) {
    let present: Vec<usize> = vars.iter().copied().filter(|&v| occurrences(terms, v) > 0).collect();
    let absent = vars.len() - present.len();
    (present, absent)
}

fn set_zero(terms: &ModTerms, vars: &[usize]) -> ModTerms {
    terms.iter().filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0)).cloned().collect()
}

fn set_one(terms: &ModTerms, v: usize, p: u32) -> ModTerms {
    normalize(terms.iter().map(|&(m, c)| (m.with_exp(v, 0), c)).collect(), p)
}

/// `#{x ∈ F_q^m : p(x) = 0}` over all ambient variables of `p`.
pub fn count_affine_zeros(p: &SparsePoly, field: &FieldTable) -> Result<u128, CountError> {
    CountJob::all_vars(p.clone()).plan(field).map(|plan| plan.count(field))
}

pub fn count_affine_zeros_with_budget(p: &SparsePoly, field: &FieldTable, budget: u64) -> Result<u128, CountError> {
    CountJob::all_vars(p.clone()).with_budget(budget).plan(field).map(|plan| plan.count(field))
}

/// Plain enumeration with no structure used at all; the oracle for the
/// engine above.
pub fn count_affine_zeros_naive(p: &SparsePoly, vars: &[usize], field: &FieldTable) -> u128 {
    let q = field.q();
    let prime = field.p();
    let terms = reduce_coefficients(p, prime);
    let nvars = p.nvars().max(vars.iter().map(|&v| v + 1).max().unwrap_or(0));
    let mut point = vec![0u32; nvars];
    let mut count = 0u128;
    loop {
        let mut total = 0u32;
        for (m, c) in &terms {
            let mut t = *c;
            for (v, &x) in point.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t = field.mul(t, field.pow(x, e as u64));
                }
            }
            total = field.add(total, t);
        }
        if total == 0 {
            count += 1;
        }
        // odometer over `vars`
        let mut i = 0;
        loop {
            if i == vars.len() {
                return count;
            }
            let v = vars[i];
            point[v] += 1;
            if point[v] < q {
                break;
            }
            point[v] = 0;
            i += 1;
        }
    }
}

/// `[X_G]_q`, the affine point count of `Ψ_G = 0`.
pub fn graph_point_count(g: &Graph, field: &FieldTable, budget: u64) -> Result<u128, CountError> {
    if g.vertex_count() < 3 {
        return Err(CountError::TooFewVertices(g.vertex_count()));
    }
    let psi = graph_polynomial(g)?;
    let nvars = g.edge_count().max(psi.nvars());
    let vars = (0..g.edge_count()).collect();
    let psi = psi.with_nvars(nvars);
    CountJob::new(psi, vars).with_budget(budget).plan(field).map(|plan| plan.count(field))
}

/// `([X_G]_q / q²) mod q`.
pub fn c2_direct(g: &Graph, field: &FieldTable, budget: u64) -> Result<u32, CountError> {
    let count = graph_point_count(g, field, budget)?;
    residue_from_point_count(count, field.q())
}

pub fn residue_from_point_count(count: u128, q: u32) -> Result<u32, CountError> {
    let qq = q as u128 * q as u128;
    if count % qq != 0 {
        return Err(CountError::NotDivisible { q, count });
    }
    Ok(((count / qq) % q as u128) as u32)
}

/// The count job behind `c2_from_reduction`: `D^n` over every variable not
/// yet eliminated.
pub fn reduction_job(state: &ReductionState, budget: u64) -> CountJob {
    let vars = state.remaining();
    let poly = state.current.clone().with_nvars(state.edge_count.max(state.current.nvars()));
    CountJob::new(poly, vars).with_budget(budget)
}

/// `(−1)^n [D^n]_q mod q`.
pub fn c2_from_reduction(state: &ReductionState, field: &FieldTable, budget: u64) -> Result<u32, CountError> {
    // a vanished D^n means c₂ = 0, even with no variables left to count over
    if state.current.is_zero() {
        return Ok(0);
    }
    let count = reduction_job(state, budget).plan(field)?.count(field);
    Ok(signed_residue(count, state.step, field.q()))
}

pub fn signed_residue(count: u128, step: usize, q: u32) -> u32 {
    let r = (count % q as u128) as u32;
    if step % 2 == 1 {
        (q - r) % q
    } else {
        r
    }
}

/// `−r mod q`, the form tables print.
pub fn negate_residue(r: u32, q: u32) -> u32 {
    (q - r % q) % q
}

/// Symmetric representative in (−q/2, q/2].
pub fn symmetric_residue(r: u32, q: u32) -> i64 {
    let r = (r % q) as i64;
    if 2 * r > q as i64 {
        r - q as i64
    } else {
        r
    }
}

/// The degree 6 polynomial in six variables (indices 0..6 for x₁..x₆) whose
/// point count carries the i₁₀₁ sequence.
pub fn i101_polynomial() -> SparsePoly {
    let n = 6;
    let x = |i: usize| SparsePoly::var(n, i - 1);
    let sum = |ps: &[SparsePoly]| ps.iter().fold(SparsePoly::zero(n), |acc, p| acc.add(p));
    let prod = |ps: &[SparsePoly]| ps.iter().fold(SparsePoly::one(n), |acc, p| acc.mul(p));
    let a = sum(&[
        prod(&[x(2).add(&x(5)), x(3).add(&x(6)), x(4)]),
        prod(&[x(2), x(3), x(5)]),
        prod(&[x(2), x(3), x(6)]),
        prod(&[x(2), x(5), x(6)]),
        prod(&[x(3), x(5), x(6)]),
    ]);
    let b_inner = sum(&[
        prod(&[x(1), x(3)]),
        prod(&[x(3), x(4)]),
        prod(&[x(3), x(6)]),
        prod(&[x(2), x(4)]).neg(),
        prod(&[x(2), x(5)]).neg(),
        prod(&[x(5), x(6)]).neg(),
    ]);
    let b = x(1).mul(&b_inner);
    let c_inner = sum(&[
        prod(&[x(2), x(4)]),
        prod(&[x(2), x(5)]),
        prod(&[x(2), x(3)]).neg(),
        prod(&[x(3), x(4)]).neg(),
        prod(&[x(3), x(6)]).neg(),
        prod(&[x(4), x(6)]).neg(),
    ]);
    let c = x(4).add(&x(6)).mul(&c_inner);
    let x4x5 = x(4).add(&x(5));
    let middle = prod(&[x(2), x(2), x4x5.clone(), x4x5, x(5), x(6)]);
    let last = prod(&[c, x(5), x(5), x(6)]);
    sum(&[a.mul(&b), middle, last])
}

/// Affine zero count of the i₁₀₁ polynomial over F_p, with x₁ eliminated.
pub fn i101_point_count(field: &FieldTable, budget: u64) -> Result<u128, CountError> {
    if !field.is_prime_field() {
        return Err(CountError::NotPrimeField(field.q()));
    }
    let mut job = CountJob::all_vars(i101_polynomial()).with_budget(budget);
    if field.p() != 2 {
        job.eliminate = Elimination::Var(0);
    }
    job.plan(field).map(|plan| plan.count(field))
}

/// The c₂ residue attributed to i₁₀₁ at p: the affine count itself mod p,
/// the same convention as an even-step reduced count.
pub fn count_i101_fourfold(field: &FieldTable, budget: u64) -> Result<u32, CountError> {
    let n = i101_point_count(field, budget)?;
    Ok((n % field.q() as u128) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_of_size;
    use crate::graph::Graph;
    use crate::sympoly::{denominator_reduce, Monomial};
    use num_bigint::BigInt;

    fn poly(n: usize, terms: &[(i64, &[u32])]) -> SparsePoly {
        SparsePoly::from_terms(
            n,
            terms.iter().map(|(c, e)| (Monomial::from_exponents(e), BigInt::from(*c))).collect(),
        )
    }

    #[test]
    fn linear_form_over_f2() {
        let p = poly(3, &[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])]);
        let f2 = field_of_size(2).unwrap();
        assert_eq!(count_affine_zeros(&p, &f2).unwrap(), 4);
    }

    #[test]
    fn two_lines_over_f3() {
        let p = poly(2, &[(1, &[1, 1])]);
        let f3 = field_of_size(3).unwrap();
        assert_eq!(count_affine_zeros(&p, &f3).unwrap(), 5);
        assert_eq!(count_affine_zeros_naive(&p, &[0, 1], &f3), 5);
        let plain = CountJob::all_vars(p).plain().plan(&f3).unwrap().count(&f3);
        assert_eq!(plain, 5);
    }

    #[test]
    fn zero_and_constant_polys() {
        let f5 = field_of_size(5).unwrap();
        assert_eq!(count_affine_zeros(&SparsePoly::zero(3), &f5).unwrap(), 125);
        assert_eq!(count_affine_zeros(&SparsePoly::constant(3, 7), &f5).unwrap(), 0);
        // 10 vanishes mod 5
        assert_eq!(count_affine_zeros(&SparsePoly::constant(2, 10), &f5).unwrap(), 25);
    }

    #[test]
    fn coefficients_vanishing_mod_p_change_structure() {
        // 3 x1^2 + x2 is linear in x2 over F_3 after reduction and also
        // over every other field
        let p = poly(2, &[(3, &[2, 0]), (1, &[0, 1])]);
        for q in [2, 3, 4, 5, 7, 9] {
            let f = field_of_size(q).unwrap();
            assert_eq!(count_affine_zeros(&p, &f).unwrap(), q as u128);
        }
    }

    #[test]
    fn k4_point_count_and_c2() {
        let k4 = Graph::k4();
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let f = field_of_size(q).unwrap();
            let r = c2_direct(&k4, &f, DEFAULT_BUDGET).unwrap();
            assert_eq!(r, q as u32 - 1, "q = {q}");
        }
        let f2 = field_of_size(2).unwrap();
        let psi = graph_polynomial(&k4).unwrap();
        let n = count_affine_zeros(&psi, &f2).unwrap();
        assert_eq!(n, count_affine_zeros_naive(&psi, &(0..6).collect::<Vec<_>>(), &f2));
        assert_eq!(n % 4, 0);
        assert_eq!((n / 4) % 2, 1);
    }

    #[test]
    fn k4_reduced_matches_direct() {
        let k4 = Graph::k4();
        let state = denominator_reduce(&k4, None).unwrap();
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let f = field_of_size(q).unwrap();
            assert_eq!(c2_from_reduction(&state, &f, DEFAULT_BUDGET).unwrap(), q as u32 - 1);
        }
    }

    #[test]
    fn vanished_five_invariant_gives_zero() {
        // K4 minus an edge: h = 2, N = 5, so D^5 has negative degree
        let g = Graph::new(4, alloc::vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let state = denominator_reduce(&g, None).unwrap();
        assert!(state.current.is_zero());
        for q in [2u64, 3, 5] {
            let f = field_of_size(q).unwrap();
            assert_eq!(c2_from_reduction(&state, &f, DEFAULT_BUDGET).unwrap(), 0);
            assert_eq!(c2_direct(&g, &f, DEFAULT_BUDGET).unwrap(), 0);
        }
    }

    #[test]
    fn budget_error_reports_estimate() {
        let k5 = Graph::k5();
        let f13 = field_of_size(13).unwrap();
        match graph_point_count(&k5, &f13, 1000) {
            Err(CountError::TooLarge { estimate, budget: 1000 }) => assert!(estimate > 1000),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn chunks_sum_to_total() {
        let psi = graph_polynomial(&Graph::k5()).unwrap();
        let f3 = field_of_size(3).unwrap();
        let plan = CountJob::all_vars(psi).plan(&f3).unwrap();
        let whole = plan.count(&f3);
        let by_chunks: u128 = plan.base + plan.chunks(20).iter().map(|c| plan.count_chunk(c, &f3)).sum::<u128>();
        assert_eq!(whole, by_chunks);
    }

    #[test]
    fn i101_polynomial_shape() {
        let f = i101_polynomial();
        assert_eq!(f.homogeneous_degree(), Some(6));
        assert_eq!(f.degree_in(0), 2);
        assert_eq!(f.variables(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn i101_engine_matches_naive_small_primes() {
        let f = i101_polynomial();
        for p in [2u64, 3, 5] {
            let field = field_of_size(p).unwrap();
            let fast = i101_point_count(&field, DEFAULT_BUDGET).unwrap();
            assert_eq!(fast, count_affine_zeros_naive(&f, &(0..6).collect::<Vec<_>>(), &field));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sparse(nvars: usize, max_exp: u32, homogeneous: Option<u32>) -> impl Strategy<Value = SparsePoly> {
            let mono = proptest::collection::vec(0..=max_exp, nvars);
            proptest::collection::vec((-6i64..=6, mono), 1..7).prop_map(move |raw| {
                let terms = raw
                    .into_iter()
                    .map(|(c, mut e)| {
                        if let Some(d) = homogeneous {
                            // push surplus degree onto the last variable
                            let head: u32 = e[..nvars - 1].iter().sum();
                            if head > d {
                                e.iter_mut().for_each(|x| *x = 0);
                                e[nvars - 1] = d;
                            } else {
                                e[nvars - 1] = d - head;
                            }
                        }
                        (Monomial::from_exponents(&e), BigInt::from(c))
                    })
                    .collect();
                SparsePoly::from_terms(nvars, terms)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn homogeneity_path_matches_enumeration(
                p in (2usize..=4).prop_flat_map(|n| sparse(n, 2, Some(3))),
                q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]),
            ) {
                let field = crate::ffield::field_of_size(q).unwrap();
                let vars: Vec<usize> = (0..p.nvars()).collect();
                let mut job = CountJob::new(p.clone(), vars.clone());
                job.eliminate = Elimination::Off;
                let fast = job.plan(&field).unwrap().count(&field);
                prop_assert_eq!(fast, count_affine_zeros_naive(&p, &vars, &field));
            }

            #[test]
            fn elimination_path_matches_enumeration(
                p in (1usize..=4).prop_flat_map(|n| sparse(n, 2, None)),
                q in prop::sample::select(vec![3u64, 5, 7, 9, 11]),
            ) {
                let field = crate::ffield::field_of_size(q).unwrap();
                let vars: Vec<usize> = (0..p.nvars()).collect();
                let mut job = CountJob::new(p.clone(), vars.clone());
                job.use_homogeneity = false;
                let fast = job.plan(&field).unwrap().count(&field);
                prop_assert_eq!(fast, count_affine_zeros_naive(&p, &vars, &field));
            }

            #[test]
            fn full_strategy_matches_enumeration(
                p in (1usize..=4).prop_flat_map(|n| sparse(n, 3, None)),
                extra in 0usize..2,
                q in prop::sample::select(vec![2u64, 3, 4, 5, 7]),
            ) {
                let field = crate::ffield::field_of_size(q).unwrap();
                let vars: Vec<usize> = (0..p.nvars() + extra).collect();
                let p = p.with_nvars(vars.len());
                let fast = CountJob::new(p.clone(), vars.clone()).plan(&field).unwrap().count(&field);
                prop_assert_eq!(fast, count_affine_zeros_naive(&p, &vars, &field));
            }
        }
    }
}
