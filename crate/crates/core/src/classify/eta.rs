use super::NewformTable;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub const MAX_ETA_BOUND: usize = 100_000;

/// `Π η(m z)^r` over the factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaProduct {
    pub factors: Vec<(u32, i32)>,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtaError {
    BoundTooLarge(usize),
    /// Σ m·r is not a multiple of 24.
    FractionalOrder(i64),
}

impl fmt::Display for EtaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaError::BoundTooLarge(b) => write!(f, "bound {b} exceeds {MAX_ETA_BOUND}"),
            EtaError::FractionalOrder(s) => write!(f, "sum of m*r = {s} is not divisible by 24"),
        }
    }
}

impl core::error::Error for EtaError {}

impl EtaProduct {
    pub fn new(level: u32, factors: &[(u32, i32)]) -> Self {
        EtaProduct { factors: factors.to_vec(), level }
    }

    /// Half the total exponent; None when that is not an integer.
    pub fn weight(&self) -> Option<u32> {
        let total: i32 = self.factors.iter().map(|&(_, r)| r).sum();
        (total > 0 && total % 2 == 0).then_some(total as u32 / 2)
    }

    pub fn order_sum(&self) -> i64 {
        self.factors.iter().map(|&(m, r)| m as i64 * r as i64).sum()
    }

    /// Exponent of the leading power of q.
    pub fn leading_power(&self) -> Option<i64> {
        let s = self.order_sum();
        (s % 24 == 0).then_some(s / 24)
    }

    pub fn label(&self) -> String {
        let mut out = String::new();
        for (i, &(m, r)) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let arg = if m == 1 { String::from("z") } else { format!("{m}z") };
            if r == 1 {
                out.push_str(&format!("eta({arg})"));
            } else {
                out.push_str(&format!("eta({arg})^{r}"));
            }
        }
        out
    }

    /// a_1, …, a_bound (index 0 of the result is a_1).
    pub fn coefficients(&self, bound: usize) -> Result<Vec<BigInt>, EtaError> {
        eta_coefficients(self, bound)
    }

    pub fn to_newform(&self, bound: usize) -> Result<NewformTable, EtaError> {
        let coeffs = self.coefficients(bound)?;
        let mut table = BTreeMap::new();
        for p in 2..=bound as u32 {
            if crate::ffield::is_prime(p as u64) {
                table.insert(p, coeffs[p as usize - 1].clone());
            }
        }
        Ok(NewformTable {
            weight: self.weight().unwrap_or(0),
            level: self.level,
            label: self.label(),
            coefficients: table,
        })
    }
}

/// The twelve η-products among the low-weight newforms met in φ⁴ c₂
/// sequences, as (weight, level, factors).
pub fn bundled_eta_products() -> Vec<EtaProduct> {
    vec![
        EtaProduct::new(11, &[(1, 2), (11, 2)]),
        EtaProduct::new(14, &[(1, 1), (2, 1), (7, 1), (14, 1)]),
        EtaProduct::new(15, &[(1, 1), (3, 1), (5, 1), (15, 1)]),
        EtaProduct::new(7, &[(1, 3), (7, 3)]),
        EtaProduct::new(8, &[(1, 2), (2, 1), (4, 1), (8, 2)]),
        EtaProduct::new(12, &[(2, 3), (6, 3)]),
        EtaProduct::new(5, &[(1, 4), (5, 4)]),
        EtaProduct::new(6, &[(1, 2), (2, 2), (3, 2), (6, 2)]),
        EtaProduct::new(4, &[(1, 4), (2, 2), (4, 4)]),
        EtaProduct::new(3, &[(1, 6), (3, 6)]),
        EtaProduct::new(4, &[(2, 12)]),
        EtaProduct::new(2, &[(1, 8), (2, 8)]),
    ]
}

/// Π_{n≥1} (1 − qⁿ) up to q^len−1, from the pentagonal number theorem.
fn euler_series(len: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        terms.push((a, sign));
        if b < len {
            terms.push((b, sign));
        }
        k += 1;
    }
    terms
}

fn mul_sparse(dense: &[BigInt], sparse: &[(usize, i64)]) -> Vec<BigInt> {
    let len = dense.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, a) in dense.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for &(j, s) in sparse {
            if i + j >= len {
                break;
            }
            if s == 1 {
                out[i + j] += a;
            } else {
                out[i + j] -= a;
            }
        }
    }
    out
}

/// Multiplies by 1/E where E has constant term 1: solve out·E = dense.
fn div_sparse(dense: &[BigInt], sparse: &[(usize, i64)]) -> Vec<BigInt> {
    let len = dense.len();
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut v = dense[n].clone();
        for &(j, s) in sparse.iter().skip(1) {
            if j > n {
                break;
            }
            if s == 1 {
                v -= &out[n - j];
            } else {
                v += &out[n - j];
            }
        }
        out.push(v);
    }
    out
}

pub fn eta_coefficients(f: &EtaProduct, bound: usize) -> Result<Vec<BigInt>, EtaError> {
    if bound > MAX_ETA_BOUND {
        return Err(EtaError::BoundTooLarge(bound));
    }
    let lead = f.leading_power().ok_or(EtaError::FractionalOrder(f.order_sum()))?;
    // series index i stands for q^(lead + i)
    let len = (bound as i64 + 1 - lead).max(0) as usize;
    let mut series = vec![BigInt::zero(); len];
    if len > 0 {
        series[0] = BigInt::one();
    }
    for &(m, r) in &f.factors {
        let m = m as usize;
        let e: Vec<(usize, i64)> = euler_series(len.div_ceil(m).max(1))
            .into_iter()
            .map(|(i, s)| (i * m, s))
            .filter(|&(i, _)| i < len.max(1))
            .collect();
        for _ in 0..r.unsigned_abs() {
            series = if r > 0 { mul_sparse(&series, &e) } else { div_sparse(&series, &e) };
        }
    }
    Ok((1..=bound as i64)
        .map(|k| {
            let i = k - lead;
            if i >= 0 && (i as usize) < series.len() {
                series[i as usize].clone()
            } else {
                BigInt::zero()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(f: &EtaProduct, n: usize) -> Vec<i64> {
        f.coefficients(n).unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn bundled_products_are_well_formed() {
        let all = bundled_eta_products();
        assert_eq!(all.len(), 12);
        for f in &all {
            assert_eq!(f.order_sum() % 24, 0, "{}", f.label());
            assert_eq!(f.leading_power(), Some(1));
            assert!(f.weight().is_some());
        }
        let weights: Vec<(u32, u32)> = all.iter().map(|f| (f.weight().unwrap(), f.level)).collect();
        assert_eq!(
            weights,
            [(2, 11), (2, 14), (2, 15), (3, 7), (3, 8), (3, 12), (4, 5), (4, 6), (5, 4), (6, 3), (6, 4), (8, 2)]
        );
    }

    // Jacobi: Π(1 − qⁿ)³ = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}
    fn jacobi_cube(len: usize) -> Vec<i64> {
        let mut out = vec![0i64; len];
        let mut k = 0i64;
        while (k * (k + 1) / 2) < len as i64 {
            out[(k * (k + 1) / 2) as usize] = if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) };
            k += 1;
        }
        out
    }

    #[test]
    fn weight_three_level_seven_against_jacobi() {
        let f = EtaProduct::new(7, &[(1, 3), (7, 3)]);
        let n = 120;
        let got = coeffs(&f, n);
        // q · J(q) · J(q^7) with J the Jacobi cube series
        let j = jacobi_cube(n);
        let mut want = vec![0i64; n];
        for (a, &x) in j.iter().enumerate() {
            for (b, &y) in j.iter().enumerate() {
                let idx = 1 + a + 7 * b;
                if idx <= n && x != 0 && y != 0 {
                    want[idx - 1] += x * y;
                }
            }
        }
        assert_eq!(got, want);
        assert_eq!((got[1], got[2], got[4], got[6]), (-3, 0, 0, -7));
        assert_eq!(got[10].rem_euclid(11), 5);
        assert_eq!(got[12].rem_euclid(13), 0);
    }

    #[test]
    fn eta_2z_12_is_odd() {
        let f = EtaProduct::new(4, &[(2, 12)]);
        let c = coeffs(&f, 60);
        assert_eq!(c[0], 1);
        assert!(c.iter().enumerate().all(|(i, &a)| (i + 1) % 2 == 1 || a == 0));
    }

    #[test]
    fn negative_exponent_inverts() {
        // η(z)^{-1} η(z) = 1, checked through a product with order sum 24
        let f = EtaProduct::new(1, &[(1, 25), (1, -1)]);
        let g = EtaProduct::new(1, &[(1, 24)]);
        assert_eq!(coeffs(&f, 50), coeffs(&g, 50));
        // Ramanujan tau
        assert_eq!(&coeffs(&g, 5), &[1, -24, 252, -1472, 4830]);
    }

    #[test]
    fn bound_is_capped() {
        let f = EtaProduct::new(3, &[(1, 6), (3, 6)]);
        assert_eq!(f.coefficients(MAX_ETA_BOUND + 1), Err(EtaError::BoundTooLarge(MAX_ETA_BOUND + 1)));
    }

    #[test]
    fn labels() {
        assert_eq!(EtaProduct::new(3, &[(1, 6), (3, 6)]).label(), "eta(z)^6 eta(3z)^6");
        assert_eq!(EtaProduct::new(14, &[(1, 1), (2, 1)]).label(), "eta(z) eta(2z)");
    }
}
