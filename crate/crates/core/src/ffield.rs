//! Table-driven arithmetic in F_q for q = p^n ≤ 2^16.
//!
//! An element is the integer whose base-p digits are its coefficients in
//! F_p[t]/(f), constant term first, so the prime subfield is `0..p`.
//! Multiplication goes through exp/log tables over a generator and
//! addition through Zech logarithms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub const MAX_FIELD_SIZE: u32 = 1 << 16;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    ZeroDegree,
    TooLarge { p: u32, n: u32 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ZeroDegree => f.write_str("extension degree must be at least 1"),
            FieldError::TooLarge { p, n } => {
                write!(f, "field of size {p}^{n} exceeds {MAX_FIELD_SIZE}")
            }
        }
    }
}

impl core::error::Error for FieldError {}

#[derive(Debug, Clone)]
pub struct FieldTable {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, coefficients from degree 0 up to degree n.
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`.
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, `NONE` when `1 + g^k = 0`.
    zech: Vec<u32>,
    neg: Vec<u32>,
    chi: Vec<i8>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, n)` with `q = p^n`, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p as u32, n))
}

pub fn make_field(p: u32, n: u32) -> Result<FieldTable, FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p));
    }
    if n == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_FIELD_SIZE as u64);
    let Some(q) = q else {
        return Err(FieldError::TooLarge { p, n });
    };
    let q = q as u32;
    let poly = PolyArith { p, n };
    let (modulus, generator) = if n == 1 {
        (vec![0, 1], primitive_root(p))
    } else {
        least_irreducible(&poly, q)
    };
    let mut exp = vec![0u32; 2 * (q as usize - 1)];
    let mut log = vec![NONE; q as usize];
    let mut x = 1u32;
    for i in 0..(q - 1) as usize {
        exp[i] = x;
        log[x as usize] = i as u32;
        x = poly.mulmod(x, generator, &modulus);
    }
    debug_assert_eq!(x, 1);
    for i in (q - 1) as usize..exp.len() {
        exp[i] = exp[i - (q - 1) as usize];
    }
    let neg: Vec<u32> = (0..q).map(|a| poly.neg(a)).collect();
    let zech = (0..q - 1)
        .map(|k| {
            let s = poly.add(1, exp[k as usize]);
            if s == 0 {
                NONE
            } else {
                log[s as usize]
            }
        })
        .collect();
    let chi = (0..q)
        .map(|x| {
            if x == 0 {
                0
            } else if p == 2 || log[x as usize] % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(FieldTable { p, n, q, modulus, generator, exp, log, zech, neg, chi })
}

/// Field of size `q`, which must be a prime power.
pub fn field_of_size(q: u64) -> Result<FieldTable, FieldError> {
    match prime_power(q) {
        Some((p, n)) => make_field(p, n),
        None => Err(FieldError::NotPrime(q.min(u32::MAX as u64) as u32)),
    }
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| {
            factors.iter().all(|&f| powmod(g as u64, ((p - 1) / f) as u64, p as u64) != 1)
        })
        .unwrap()
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Arithmetic on base-p encoded polynomials of degree < n.
struct PolyArith {
    p: u32,
    n: u32,
}

impl PolyArith {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0; self.n as usize];
        for x in d.iter_mut() {
            *x = a % self.p;
            a /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&s)
    }

    /// Product modulo the monic `modulus` (coefficients low to high).
    fn mulmod(&self, a: u32, b: u32, modulus: &[u32]) -> u32 {
        let n = self.n as usize;
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * n];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                // t^k = t^(k-n) * t^n and t^n = -sum modulus[i] t^i
                let idx = k - n + i;
                prod[idx] = (prod[idx] + (p - c) * modulus[i] as u64) % p;
            }
        }
        let out: Vec<u32> = prod[..n].iter().map(|&x| x as u32).collect();
        self.encode(&out)
    }
}

/// Smallest monic irreducible modulus of degree n, ordering candidates by
/// the integer encoding of their lower coefficients, with a generator of
/// the multiplicative group. A candidate is irreducible exactly when the
/// quotient ring has an element of order q - 1.
fn least_irreducible(poly: &PolyArith, q: u32) -> (Vec<u32>, u32) {
    let factors = prime_factors(q - 1);
    for lower in 0..q {
        let mut modulus = poly.digits(lower);
        modulus.push(1);
        if modulus[0] == 0 {
            continue;
        }
        let pow = |mut b: u32, mut e: u32| {
            let mut r = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    r = poly.mulmod(r, b, &modulus);
                }
                b = poly.mulmod(b, b, &modulus);
                e >>= 1;
            }
            r
        };
        let has_root = (0..poly.p).any(|x| {
            // evaluate the modulus at the constant x
            modulus.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % poly.p as u64) == 0
        });
        if has_root {
            continue;
        }
        // a generator exists only in a field; zero divisors rule out the rest
        let generator = (2..q).find(|&g| {
            pow(g, q - 1) == 1 && factors.iter().all(|&f| pow(g, (q - 1) / f) != 1)
        });
        if let Some(g) = generator {
            return (modulus, g);
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    /// Integer embedded through the prime subfield.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let k = if lb >= la { lb - la } else { lb + self.q - 1 - la };
        let z = self.zech[k as usize];
        if z == NONE {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (e % (self.q as u64 - 1)) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    /// Discrete logarithm to the table generator.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, −1 otherwise.
    #[inline]
    pub fn character(&self, a: u32) -> i8 {
        self.chi[a as usize]
    }

    pub fn character_table(&self) -> &[i8] {
        &self.chi
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }
}

/// `#{x : x^k = 1}` by enumeration.
pub fn count_unity_roots_enumerated(field: &FieldTable, k: u64) -> u32 {
    field.elements().filter(|&x| x != 0 && field.pow(x, k) == 1).count() as u32
}

/// `#{x : x^k = 1} = gcd(k', q − 1)` where `k'` is `k` with its factors of
/// p removed (Frobenius is a bijection, so they do not matter).
pub fn count_unity_roots(field: &FieldTable, k: u64) -> u32 {
    let mut k = k;
    while k > 0 && k % field.p as u64 == 0 {
        k /= field.p as u64;
    }
    gcd(k, field.q as u64 - 1) as u32
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of roots of `a x² + b x + c` in F_q. In characteristic 2 the
/// roots are enumerated.
pub fn quadratic_root_count(field: &FieldTable, a: u32, b: u32, c: u32) -> u32 {
    if field.p == 2 {
        return field
            .elements()
            .filter(|&x| {
                let v = field.add(field.mul(field.add(field.mul(a, x), b), x), c);
                v == 0
            })
            .count() as u32;
    }
    if a == 0 {
        return match (b, c) {
            (0, 0) => field.q,
            (0, _) => 0,
            _ => 1,
        };
    }
    let four = field.from_int(4);
    let disc = field.sub(field.mul(b, b), field.mul(four, field.mul(a, c)));
    (1 + field.character(disc) as i32) as u32
}
