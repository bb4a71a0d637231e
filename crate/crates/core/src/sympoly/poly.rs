//! Sparse multivariate polynomials over Z.
//!
//! A monomial packs one 6-bit field per variable into a `u128`: five bits
//! of exponent plus a guard bit that catches overflow on multiplication.
//! Variable 0 sits in the most significant field, so comparing the packed
//! words is the lexicographic monomial order. Terms are kept sorted in
//! decreasing order; the first term is the lex-leading one.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const MAX_VARS: usize = 21;
pub const MAX_EXP: u32 = 31;
const FIELD: u32 = 6;
const MASK: u128 = 0x3f;

const fn guard_mask() -> u128 {
    let mut g = 0u128;
    let mut i = 0;
    while i < MAX_VARS {
        g |= 1u128 << ((MAX_VARS - 1 - i) as u32 * FIELD + 5);
        i += 1;
    }
    g
}
const GUARD: u128 = guard_mask();

#[inline]
fn shift(var: usize) -> u32 {
    (MAX_VARS - 1 - var) as u32 * FIELD
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: usize) -> Self {
        Monomial::ONE.with_exp(v, 1)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (v, &e) in exps.iter().enumerate() {
            m = m.with_exp(v, e);
        }
        m
    }

    #[inline]
    pub fn exp(self, v: usize) -> u32 {
        ((self.0 >> shift(v)) & MASK) as u32
    }

    pub fn with_exp(self, v: usize, e: u32) -> Self {
        assert!(e <= MAX_EXP, "exponent {e} exceeds {MAX_EXP}");
        let s = shift(v);
        Monomial((self.0 & !(MASK << s)) | ((e as u128) << s))
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exp(v)).collect()
    }

    pub fn degree(self) -> u32 {
        (0..MAX_VARS).map(|v| self.exp(v)).sum()
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let s = self.0 + other.0;
        assert!(s & GUARD == 0, "monomial exponent overflow");
        Monomial(s)
    }

    /// True when `self` divides `other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        ((other.0 | GUARD) - self.0) & GUARD == GUARD
    }

    #[inline]
    pub fn div(self, d: Monomial) -> Monomial {
        debug_assert!(d.divides(self));
        Monomial(self.0 - d.0)
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Square root when every exponent is even.
    pub fn sqrt(self) -> Option<Monomial> {
        let mut r = Monomial::ONE;
        for v in 0..MAX_VARS {
            let e = self.exp(v);
            if e % 2 == 1 {
                return None;
            }
            r = r.with_exp(v, e / 2);
        }
        Some(r)
    }

    pub fn max_var(self) -> Option<usize> {
        (0..MAX_VARS).rev().find(|&v| self.exp(v) > 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in 0..MAX_VARS {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", v + 1)?;
            } else {
                write!(f, "x{}^{}", v + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    TooManyVariables(usize),
    Parse(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::TooManyVariables(n) => {
                write!(f, "{n} variables exceed the limit of {MAX_VARS}")
            }
            PolyError::Parse(s) => write!(f, "cannot parse polynomial: {s}"),
        }
    }
}

impl core::error::Error for PolyError {}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    /// Strictly decreasing monomials, nonzero coefficients.
    terms: Vec<(Monomial, BigInt)>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        SparsePoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        SparsePoly::constant(nvars, 1)
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        assert!(v < nvars, "variable index out of range");
        SparsePoly { nvars, terms: vec![(Monomial::var(v), BigInt::one())] }
    }

    pub fn monomial(nvars: usize, m: Monomial, c: impl Into<BigInt>) -> Self {
        SparsePoly::from_terms(nvars, vec![(m, c.into())])
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, BigInt)>) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.max_var().map_or(true, |v| v < nvars));
            *map.entry(m).or_default() += c;
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        SparsePoly { nvars, terms }
    }

    /// Builds from terms already sorted strictly decreasing with no zeros.
    fn from_sorted(nvars: usize, terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        SparsePoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<&BigInt> {
        match self.terms.as_slice() {
            [] => None,
            [(m, c)] if m.is_one() => Some(c),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    /// Reinterprets in a larger (or equal) ambient variable count.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        assert!(self.terms.iter().all(|(m, _)| m.max_var().map_or(true, |v| v < nvars)));
        self.nvars = nvars;
        self
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// `Some(d)` when every term has total degree `d`; zero gives `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn max_degree_per_variable(&self) -> u32 {
        (0..self.nvars).map(|v| self.degree_in(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    pub fn neg(&self) -> Self {
        SparsePoly::from_sorted(
            self.nvars,
            self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly::from_sorted(self.nvars, self.terms.iter().map(|(m, c)| (*m, c * k)).collect())
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        SparsePoly::from_sorted(
            self.nvars,
            self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        )
    }

    fn merge(&self, other: &SparsePoly, negate: bool) -> SparsePoly {
        let nvars = self.nvars.max(other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let sign = |c: &BigInt| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, sign(c))));
        SparsePoly::from_sorted(nvars, out)
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.merge(other, true)
    }

    /// Heap-merge product: one stream per term of the shorter factor.
    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let nvars = self.nvars.max(other.nvars);
        if self.is_zero() || other.is_zero() {
            return SparsePoly::zero(nvars);
        }
        let (f, g) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if f.len() == 1 {
            let (m, c) = &f.terms[0];
            return SparsePoly::from_sorted(
                nvars,
                g.terms.iter().map(|(t, d)| (t.mul(*m), c * d)).collect(),
            );
        }
        let mut heap: BinaryHeap<(Monomial, usize, usize)> = BinaryHeap::with_capacity(f.len());
        for (i, (m, _)) in f.terms.iter().enumerate() {
            heap.push((m.mul(g.terms[0].0), i, 0));
        }
        let mut out: Vec<(Monomial, BigInt)> = Vec::new();
        let mut cur: Option<(Monomial, BigInt)> = None;
        while let Some((m, i, j)) = heap.pop() {
            let prod = &f.terms[i].1 * &g.terms[j].1;
            match &mut cur {
                Some((cm, cc)) if *cm == m => *cc += prod,
                _ => {
                    if let Some((cm, cc)) = cur.take() {
                        if !cc.is_zero() {
                            out.push((cm, cc));
                        }
                    }
                    cur = Some((m, prod));
                }
            }
            if j + 1 < g.len() {
                heap.push((f.terms[i].0.mul(g.terms[j + 1].0), i, j + 1));
            }
        }
        if let Some((cm, cc)) = cur {
            if !cc.is_zero() {
                out.push((cm, cc));
            }
        }
        SparsePoly::from_sorted(nvars, out)
    }

    pub fn square(&self) -> SparsePoly {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut r = SparsePoly::one(self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &SparsePoly) -> Option<SparsePoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let nvars = self.nvars.max(d.nvars);
        if self.is_zero() {
            return Some(SparsePoly::zero(nvars));
        }
        if let Some(c) = d.constant_value() {
            let mut out = Vec::with_capacity(self.len());
            for (m, a) in &self.terms {
                let (q, r) = a.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                out.push((*m, q));
            }
            return Some(SparsePoly::from_sorted(nvars, out));
        }
        let (dm, dc) = d.terms[0].clone();
        let mut rem: BTreeMap<Monomial, BigInt> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let mut quo: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((&m, c)) = rem.iter().next_back() {
            if !dm.divides(m) {
                return None;
            }
            let (qc, r) = c.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.div(dm);
            for (t, tc) in &d.terms {
                let key = t.mul(qm);
                let e = rem.entry(key).or_default();
                *e -= tc * &qc;
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            quo.push((qm, qc));
        }
        Some(SparsePoly::from_sorted(nvars, quo))
    }

    /// Exact square root up to sign (the result has a positive leading
    /// coefficient), or `None` when `self` is not a perfect square.
    pub fn sqrt(&self) -> Option<SparsePoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = &self.terms[0];
        let (tm, _) = self.terms.last().unwrap();
        let s0m = lm.sqrt()?;
        let tail = tm.sqrt()?;
        if lc.is_negative() {
            return None;
        }
        let s0c = lc.sqrt();
        if &(&s0c * &s0c) != lc {
            return None;
        }
        let bound: Vec<u32> = (0..self.nvars).map(|v| self.degree_in(v) / 2).collect();
        let two_s0c = &s0c * 2u32;
        let mut root: Vec<(Monomial, BigInt)> = vec![(s0m, s0c)];
        let mut rem: BTreeMap<Monomial, BigInt> =
            self.terms.iter().skip(1).map(|(m, c)| (*m, c.clone())).collect();
        while let Some((&m, c)) = rem.iter().next_back() {
            if !s0m.divides(m) {
                return None;
            }
            let tm = m.div(s0m);
            if tm < tail || tm >= root.last().unwrap().0 {
                return None;
            }
            if (0..self.nvars).any(|v| tm.exp(v) > bound[v]) {
                return None;
            }
            let (tc, r) = c.div_rem(&two_s0c);
            if !r.is_zero() {
                return None;
            }
            // rem -= 2 * t * (root so far) + t^2
            let twice_tc = &tc * 2u32;
            for (sm, sc) in &root {
                let key = sm.mul(tm);
                let e = rem.entry(key).or_default();
                *e -= sc * &twice_tc;
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            let key = tm.mul(tm);
            let e = rem.entry(key).or_default();
            *e -= &tc * &tc;
            if e.is_zero() {
                rem.remove(&key);
            }
            root.push((tm, tc));
        }
        Some(SparsePoly::from_sorted(self.nvars, root))
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `x_v^k`.
    pub fn coefficients_in(&self, v: usize) -> Vec<SparsePoly> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            parts[e].push((m.with_exp(v, 0), c.clone()));
        }
        // Clearing one exponent can reorder monomials, so re-sort.
        parts
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                SparsePoly::from_sorted(self.nvars, t)
            })
            .collect()
    }

    /// Inverse of `coefficients_in`.
    pub fn from_coefficients(v: usize, coeffs: &[SparsePoly]) -> SparsePoly {
        let nvars = coeffs.first().map_or(v + 1, |c| c.nvars);
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.exp(v), 0);
                terms.push((m.with_exp(v, k as u32), a.clone()));
            }
        }
        SparsePoly::from_terms(nvars, terms)
    }

    /// Sets every variable in `vars` to zero.
    pub fn set_zero(&self, vars: &[usize]) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
            .cloned()
            .collect();
        SparsePoly::from_sorted(self.nvars, terms)
    }

    /// Sets `x_v = 1`.
    pub fn set_one(&self, v: usize) -> SparsePoly {
        SparsePoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.with_exp(v, 0), c.clone())).collect(),
        )
    }

    /// Renames variables: `map[old] = new`.
    pub fn rename(&self, map: &[usize], nvars: usize) -> SparsePoly {
        SparsePoly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut r = Monomial::ONE;
                    for (old, &new) in map.iter().enumerate() {
                        let e = m.exp(old);
                        if e > 0 {
                            r = r.with_exp(new, r.exp(new) + e);
                        }
                    }
                    (r, c.clone())
                })
                .collect(),
        )
    }

    pub fn eval_i64(&self, point: &[i64]) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &x) in point.iter().enumerate().take(self.nvars) {
                let e = m.exp(v);
                if e > 0 {
                    t *= BigInt::from(x).pow(e);
                }
            }
            total += t;
        }
        total
    }

    /// Evaluation modulo a prime `p < 2^63`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        let pb = BigInt::from(p);
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let cm = c.mod_floor(&pb);
            let mut t: u64 = (&cm).try_into().unwrap();
            for (v, &x) in point.iter().enumerate().take(self.nvars) {
                for _ in 0..m.exp(v) {
                    t = mulm(t, x);
                }
            }
            total = ((total as u128 + t as u128) % p as u128) as u64;
        }
        total
    }

    /// Greatest common divisor of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Flips the sign so that the lex-leading coefficient is positive.
    pub fn canonical_sign(self) -> SparsePoly {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self,
        }
    }

    /// One term per line, `coeff x1^a1 x2^a2 ...`, exponents of 1 written
    /// as bare variables, in decreasing lexicographic order. Zero is `0`.
    pub fn to_canonical_text(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        if self.is_zero() {
            s.push_str("0\n");
        }
        for (m, c) in &self.terms {
            let _ = write!(s, "{c}");
            for v in 0..self.nvars {
                match m.exp(v) {
                    0 => {}
                    1 => {
                        let _ = write!(s, " x{}", v + 1);
                    }
                    e => {
                        let _ = write!(s, " x{}^{}", v + 1, e);
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_canonical_text(nvars: usize, text: &str) -> Result<SparsePoly, PolyError> {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVariables(nvars));
        }
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.split_whitespace();
            let c: BigInt = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|_| PolyError::Parse(line.into()))?;
            let mut m = Monomial::ONE;
            for tok in parts {
                let (var, exp) = match tok.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u32>().map_err(|_| PolyError::Parse(line.into()))?),
                    None => (tok, 1),
                };
                let idx: usize = var
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i: &usize| i >= 1 && i <= nvars)
                    .ok_or_else(|| PolyError::Parse(line.into()))?;
                if m.exp(idx - 1) + exp > MAX_EXP {
                    return Err(PolyError::Parse(line.into()));
                }
                m = m.with_exp(idx - 1, m.exp(idx - 1) + exp);
            }
            terms.push((m, c));
        }
        Ok(SparsePoly::from_terms(nvars, terms))
    }

    /// Greatest common divisor with positive lex-leading coefficient.
    /// Exact gcd with a positive lex-leading coefficient, by primitive
    /// remainder sequences. Multivariate remainder sequences can blow up, so
    /// the work is capped at [`GCD_WORK_LIMIT`] term products; `None` means
    /// the cap (or the exponent range) was hit, not that the inputs are
    /// coprime.
    pub fn gcd(&self, other: &SparsePoly) -> Option<SparsePoly> {
        let mut work = GCD_WORK_LIMIT;
        self.gcd_with(other, &mut work)
    }

    fn gcd_with(&self, other: &SparsePoly, work: &mut usize) -> Option<SparsePoly> {
        let nvars = self.nvars.max(other.nvars);
        if self.is_zero() {
            return Some(other.clone().with_nvars(nvars).canonical_sign());
        }
        if other.is_zero() {
            return Some(self.clone().with_nvars(nvars).canonical_sign());
        }
        // pull out the monomial content first: it is cheap and it keeps the
        // remainder sequence below small exponents
        let mf = self.monomial_content();
        let mg = other.monomial_content();
        let mono = Monomial::from_exponents(
            &(0..nvars).map(|v| mf.exp(v).min(mg.exp(v))).collect::<Vec<_>>(),
        );
        let f = self.div_monomial(mf).with_nvars(nvars);
        let g = other.div_monomial(mg).with_nvars(nvars);
        Some(f.gcd_reduced(&g, work)?.mul_monomial(mono).canonical_sign())
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut exps: Vec<u32> = match self.terms.first() {
            Some((m, _)) => m.exponents(self.nvars),
            None => return Monomial::default(),
        };
        for (m, _) in &self.terms[1..] {
            for (v, e) in exps.iter_mut().enumerate() {
                *e = (*e).min(m.exp(v));
            }
        }
        Monomial::from_exponents(&exps)
    }

    fn div_monomial(&self, m: Monomial) -> SparsePoly {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(t, c)| (t.div(m), c.clone())).collect() }
    }

    fn scale_down(&self, k: &BigInt) -> SparsePoly {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, c / k)).collect() }
    }

    /// gcd of two nonzero polynomials without monomial content.
    fn gcd_reduced(&self, other: &SparsePoly, work: &mut usize) -> Option<SparsePoly> {
        let nvars = self.nvars;
        if self.is_constant() || other.is_constant() {
            return Some(SparsePoly::constant(nvars, self.content().gcd(&other.content())));
        }
        // a variable on one side only: the gcd divides every coefficient of
        // the other side with respect to it
        for v in 0..nvars {
            let (df, dg) = (self.degree_in(v), other.degree_in(v));
            if df > 0 && dg == 0 {
                return gcd_all(&self.coefficients_in(v), work)?.gcd_with(other, work);
            }
            if dg > 0 && df == 0 {
                return gcd_all(&other.coefficients_in(v), work)?.gcd_with(self, work);
            }
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let c_small = small.content();
        let prim_small = small.scale_down(&c_small);
        charge(work, small.len() * large.len())?;
        if large.div_exact(&prim_small).is_some() {
            return Some(prim_small.scale(&c_small.gcd(&large.content())));
        }
        let v = (0..nvars)
            .filter(|&v| self.degree_in(v) > 0)
            .min_by_key(|&v| (self.degree_in(v) + other.degree_in(v), v))
            .expect("non-constant polynomials share a variable");
        let fc = self.coefficients_in(v);
        let gc = other.coefficients_in(v);
        let cont_f = gcd_all(&fc, work)?;
        let cont_g = gcd_all(&gc, work)?;
        let cont = cont_f.gcd_with(&cont_g, work)?;
        let mut a: Vec<SparsePoly> = fc.iter().map(|c| c.div_exact(&cont_f).unwrap()).collect();
        let mut b: Vec<SparsePoly> = gc.iter().map(|c| c.div_exact(&cont_g).unwrap()).collect();
        if a.len() < b.len() {
            core::mem::swap(&mut a, &mut b);
        }
        // primitive PRS in x_v
        while b.len() > 1 {
            let r = pseudo_remainder(&a, &b, work)?;
            a = b;
            if r.is_empty() {
                b = Vec::new();
                break;
            }
            let c = gcd_all(&r, work)?;
            b = r.iter().map(|t| t.div_exact(&c).unwrap()).collect();
        }
        let g = if b.is_empty() {
            a
        } else {
            // a nonzero constant remainder in x_v: the primitive parts are coprime
            vec![SparsePoly::one(nvars)]
        };
        Some(SparsePoly::from_coefficients(v, &g).mul(&cont))
    }

    /// Product, or `None` if some exponent would leave the representable
    /// range.
    pub fn checked_mul(&self, other: &SparsePoly) -> Option<SparsePoly> {
        let n = self.nvars.max(other.nvars);
        (0..n)
            .all(|v| self.degree_in(v) + other.degree_in(v) <= MAX_EXP)
            .then(|| self.mul(other))
    }
}

/// Term products a single gcd may spend.
pub const GCD_WORK_LIMIT: usize = 20_000_000;

fn charge(work: &mut usize, cost: usize) -> Option<()> {
    *work = work.checked_sub(cost)?;
    Some(())
}

/// gcd of a list of polynomials.
fn gcd_all(ps: &[SparsePoly], work: &mut usize) -> Option<SparsePoly> {
    let mut g = SparsePoly::zero(ps[0].nvars);
    for p in ps {
        if p.is_zero() {
            continue;
        }
        g = g.gcd_with(p, work)?;
        if g.constant_value().is_some_and(|c| c.is_one()) {
            break;
        }
    }
    Some(g)
}

/// Pseudo-remainder of `a` by `b`, both as coefficient lists in one
/// variable (index = power), `deg a >= deg b >= 1`. Trailing zeros trimmed.
fn pseudo_remainder(a: &[SparsePoly], b: &[SparsePoly], work: &mut usize) -> Option<Vec<SparsePoly>> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<SparsePoly> = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            charge(work, c.len() * lb.len())?;
            *c = c.checked_mul(lb)?;
        }
        for k in 0..=db {
            charge(work, lr.len() * b[k].len())?;
            r[k + shift] = r[k + shift].sub(&lr.checked_mul(&b[k])?);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        while r.last().is_some_and(SparsePoly::is_zero) {
            r.pop();
        }
    }
    Some(r)
}

impl fmt::Display for SparsePoly {
    /// Inline form such as `x1 + x2 - 2*x3^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{abs}*{m:?}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, v: usize) -> SparsePoly {
        SparsePoly::var(n, v)
    }

    fn c(n: usize, k: i64) -> SparsePoly {
        SparsePoly::constant(n, k)
    }

    #[test]
    fn monomial_order_is_lex() {
        let a = Monomial::from_exponents(&[1, 0, 0]);
        let b = Monomial::from_exponents(&[0, 5, 5]);
        assert!(a > b);
        assert!(Monomial::from_exponents(&[0, 1, 0]) > Monomial::from_exponents(&[0, 0, 9]));
    }

    #[test]
    fn divisibility_via_guard_bits() {
        let a = Monomial::from_exponents(&[2, 1, 3]);
        assert!(Monomial::from_exponents(&[1, 1, 0]).divides(a));
        assert!(Monomial::from_exponents(&[2, 1, 3]).divides(a));
        assert!(!Monomial::from_exponents(&[3, 0, 0]).divides(a));
        assert!(!Monomial::from_exponents(&[0, 0, 4]).divides(a));
        assert!(Monomial::ONE.divides(a));
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn exponent_overflow_is_caught() {
        let m = Monomial::from_exponents(&[20]);
        let _ = m.mul(m);
    }

    #[test]
    fn arithmetic_identities() {
        let n = 3;
        let a = x(n, 0).add(&x(n, 1));
        let b = x(n, 0).sub(&x(n, 1));
        let prod = a.mul(&b);
        assert_eq!(prod, x(n, 0).square().sub(&x(n, 1).square()));
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&x(n, 2)).is_none());
        assert_eq!(a.sub(&a), SparsePoly::zero(n));
    }

    #[test]
    fn square_roots() {
        let n = 3;
        let s = x(n, 0).scale(&BigInt::from(3)).sub(&x(n, 1).mul(&x(n, 2))).add(&c(n, 2));
        let r = s.square().sqrt().unwrap();
        assert!(x(n, 0).square().add(&x(n, 1).square()).sqrt().is_none());
        assert!(s.square().add(&c(n, 1)).sqrt().is_none());
        assert_eq!(r, s.canonical_sign());
        assert_eq!(c(n, 49).sqrt().unwrap(), c(n, 7));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let n = 3;
        let g = x(n, 0).mul(&x(n, 1)).add(&x(n, 2)).add(&c(n, 1));
        let a = g.mul(&x(n, 0).add(&x(n, 2)));
        let b = g.mul(&x(n, 1).sub(&c(n, 2))).scale(&BigInt::from(6));
        assert_eq!(a.gcd(&b), Some(g));
        assert_eq!(x(n, 0).gcd(&x(n, 1)), Some(c(n, 1)));
        assert_eq!(c(n, 4).gcd(&c(n, 6)), Some(c(n, 2)));
    }

    #[test]
    fn coefficient_split_roundtrip() {
        let n = 3;
        let p = x(n, 1).square().mul(&x(n, 0)).add(&x(n, 1).mul(&x(n, 2))).add(&c(n, 5));
        let cs = p.coefficients_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], x(n, 0));
        assert_eq!(cs[1], x(n, 2));
        assert_eq!(cs[0], c(n, 5));
        assert_eq!(SparsePoly::from_coefficients(1, &cs), p);
    }

    #[test]
    fn text_forms() {
        let n = 3;
        let p = x(n, 0).add(&x(n, 1)).add(&x(n, 2));
        assert_eq!(p.to_string(), "x1 + x2 + x3");
        let q = x(n, 0).square().scale(&BigInt::from(-2)).add(&x(n, 2)).sub(&c(n, 7));
        assert_eq!(q.to_string(), "-2*x1^2 + x3 - 7");
        assert_eq!(q.to_canonical_text(), "-2 x1^2\n1 x3\n-7\n");
        assert_eq!(SparsePoly::parse_canonical_text(n, &q.to_canonical_text()).unwrap(), q);
    }

    #[test]
    fn modular_evaluation_matches_integer_evaluation() {
        let n = 3;
        let p = x(n, 0).square().mul(&x(n, 1)).scale(&BigInt::from(-5)).add(&x(n, 2)).add(&c(n, 3));
        let v = p.eval_i64(&[4, -3, 7]);
        let m = 1_000_003u64;
        let expect: u64 = (&v.mod_floor(&BigInt::from(m))).try_into().unwrap();
        assert_eq!(p.eval_mod(&[4, m - 3, 7], m), expect);
    }
}
