//! Compiled zero counting over F_q.
//!
//! A count job is a polynomial over `k` enumerated variables plus, in odd
//! characteristic, one eliminated variable `z` of degree at most two. The
//! polynomial is written as `a z² + b z + c` and the three coefficient
//! polynomials are evaluated together by levelled partial evaluation:
//! fixing the outermost variable collapses the terms onto the distinct
//! monomials in the inner variables, and so on down to three field values,
//! whose root count comes from the quadratic character.

use crate::ffield::FieldTable;
use crate::sympoly::{Monomial, SparsePoly};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;

/// Terms with coefficients reduced into the prime subfield.
pub(crate) type ModTerms = Vec<(Monomial, u32)>;

pub(crate) fn reduce_coefficients(p: &SparsePoly, prime: u32) -> ModTerms {
    let m = BigInt::from(prime);
    p.terms()
        .iter()
        .filter_map(|(mono, c)| {
            let r: u32 = (&c.mod_floor(&m)).try_into().unwrap();
            (r != 0).then_some((*mono, r))
        })
        .collect()
}

/// Merges equal monomials (coefficients added mod `prime`) and drops zeros.
pub(crate) fn normalize(terms: ModTerms, prime: u32) -> ModTerms {
    let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
    for (m, c) in terms {
        *map.entry(m).or_default() += c as u64;
    }
    map.into_iter()
        .rev()
        .filter_map(|(m, c)| {
            let c = (c % prime as u64) as u32;
            (c != 0).then_some((m, c))
        })
        .collect()
}

pub(crate) fn occurrences(terms: &ModTerms, v: usize) -> usize {
    terms.iter().filter(|(m, _)| m.exp(v) > 0).count()
}

pub(crate) fn degree_in(terms: &ModTerms, v: usize) -> u32 {
    terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
}

/// Sources at one level feed accumulators at the next.
#[derive(Debug, Clone)]
struct LevelMap {
    dst: Vec<u32>,
    exp: Vec<u8>,
    n_dst: usize,
}

/// A compiled count job.
#[derive(Debug, Clone)]
pub struct Program {
    /// Enumerated variables, outermost first.
    pub vars: Vec<usize>,
    /// Eliminated variable, if any.
    pub eliminated: Option<usize>,
    init: Vec<u32>,
    levels: Vec<LevelMap>,
    max_exp: usize,
}

impl Program {
    /// Compiles `terms` over `vars` (outermost first), optionally
    /// eliminating `z`, whose degree must then be at most 2.
    pub(crate) fn compile(terms: &ModTerms, vars: Vec<usize>, z: Option<usize>) -> Program {
        let k = vars.len();
        let targets = if z.is_some() { 3 } else { 1 };
        // key: target followed by the exponents of vars[level..]
        let key_of = |m: &Monomial| -> Vec<u8> {
            let t = match z {
                Some(z) => 2 - m.exp(z) as u8,
                None => 0,
            };
            let mut key = Vec::with_capacity(1 + k);
            key.push(t);
            key.extend(vars.iter().map(|&v| m.exp(v) as u8));
            key
        };
        let mut max_exp = 0usize;
        for (m, _) in terms {
            for &v in &vars {
                max_exp = max_exp.max(m.exp(v) as usize);
            }
        }
        let mut keys: Vec<Vec<u8>> = terms.iter().map(|(m, _)| key_of(m)).collect();
        let init: Vec<u32> = terms.iter().map(|&(_, c)| c).collect();
        let mut levels = Vec::with_capacity(k);
        for _ in 0..k {
            let mut index: BTreeMap<Vec<u8>, u32> = BTreeMap::new();
            let mut dst = Vec::with_capacity(keys.len());
            let mut exp = Vec::with_capacity(keys.len());
            for key in &keys {
                let mut next = Vec::with_capacity(key.len() - 1);
                next.push(key[0]);
                next.extend_from_slice(&key[2..]);
                let n = index.len() as u32;
                let id = *index.entry(next).or_insert(n);
                dst.push(id);
                exp.push(key[1]);
            }
            let mut next_keys = vec![Vec::new(); index.len()];
            for (key, id) in index {
                next_keys[id as usize] = key;
            }
            levels.push(LevelMap { dst, exp, n_dst: next_keys.len() });
            keys = next_keys;
        }
        // the last level's destinations are the targets, in key order
        let mut target_of = vec![0u8; keys.len()];
        for (i, key) in keys.iter().enumerate() {
            target_of[i] = key[0];
        }
        // remap so destination i at the final level is target i
        if let Some(last) = levels.last_mut() {
            for d in last.dst.iter_mut() {
                *d = target_of[*d as usize] as u32;
            }
            last.n_dst = targets;
        } else {
            // no enumerated variables: fold init straight into targets
            let mut vals = vec![0u32; targets];
            for (i, key) in keys.iter().enumerate() {
                vals[key[0] as usize] = init[i];
            }
            return Program { vars, eliminated: z, init: vals, levels, max_exp };
        }
        Program { vars, eliminated: z, init, levels, max_exp }
    }

    pub fn enumerated(&self) -> usize {
        self.vars.len()
    }

    fn targets(&self) -> usize {
        if self.eliminated.is_some() {
            3
        } else {
            1
        }
    }

    /// Number of distinct partial monomials carried at each level.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut v = vec![self.init.len()];
        v.extend(self.levels.iter().map(|l| l.n_dst));
        v
    }

    /// Counts zeros over the enumerated variables whose outermost values are
    /// pinned to `prefix`.
    pub fn count_prefix(&self, field: &FieldTable, prefix: &[u32]) -> u128 {
        if field.is_prime_field() {
            let arith = PrimeArith { p: field.p() as u64 };
            let chi = field.character_table();
            let q = field.q();
            if self.eliminated.is_some() {
                let p = field.p() as u64;
                self.run(&arith, field, prefix, |t: &[u32]| {
                    let (a, b, c) = (t[0] as u64, t[1] as u64, t[2] as u64);
                    if a == 0 {
                        if b == 0 {
                            if c == 0 {
                                q as u64
                            } else {
                                0
                            }
                        } else {
                            1
                        }
                    } else {
                        let disc = (b * b + (p - (4 * a % p) * c % p)) % p;
                        (1 + chi[disc as usize] as i64) as u64
                    }
                })
            } else {
                self.run(&arith, field, prefix, |t: &[u32]| (t[0] == 0) as u64)
            }
        } else {
            let arith = TableArith { field };
            if self.eliminated.is_some() {
                self.run(&arith, field, prefix, |t: &[u32]| {
                    crate::ffield::quadratic_root_count(field, t[0], t[1], t[2]) as u64
                })
            } else {
                self.run(&arith, field, prefix, |t: &[u32]| (t[0] == 0) as u64)
            }
        }
    }

    fn run<A: Arith, F: Fn(&[u32]) -> u64>(
        &self,
        arith: &A,
        field: &FieldTable,
        prefix: &[u32],
        leaf: F,
    ) -> u128 {
        let q = field.q();
        let stride = self.max_exp + 1;
        let mut pw = vec![0u32; q as usize * stride];
        for y in 0..q {
            let mut acc = 1u32;
            for e in 0..stride {
                pw[y as usize * stride + e] = acc;
                acc = field.mul(acc, y);
            }
        }
        let k = self.levels.len();
        let mut vals: Vec<Vec<u32>> = Vec::with_capacity(k + 1);
        vals.push(self.init.clone());
        for l in &self.levels {
            vals.push(vec![0; l.n_dst]);
        }
        let mut acc: Vec<A::Acc> = vec![arith.zero(); vals.iter().map(Vec::len).max().unwrap_or(0)];
        let ctx = Ctx { levels: &self.levels, pw: &pw, stride, q, prefix };
        if k == 0 {
            return leaf(&self.init[..self.targets()]) as u128;
        }
        ctx.rec(arith, 0, &mut vals, &mut acc, &leaf)
    }
}

struct Ctx<'a> {
    levels: &'a [LevelMap],
    pw: &'a [u32],
    stride: usize,
    q: u32,
    prefix: &'a [u32],
}

impl Ctx<'_> {
    fn rec<A: Arith, F: Fn(&[u32]) -> u64>(
        &self,
        arith: &A,
        level: usize,
        vals: &mut [Vec<u32>],
        acc: &mut [A::Acc],
        leaf: &F,
    ) -> u128 {
        let k = self.levels.len();
        let map = &self.levels[level];
        let (lo, hi) = match self.prefix.get(level) {
            Some(&y) => (y, y + 1),
            None => (0, self.q),
        };
        let mut total: u128 = 0;
        for y in lo..hi {
            let pw = &self.pw[y as usize * self.stride..(y as usize + 1) * self.stride];
            {
                let (cur, next) = vals.split_at_mut(level + 1);
                let src = &cur[level];
                let out = &mut next[0];
                let acc = &mut acc[..map.n_dst];
                acc.fill(arith.zero());
                for i in 0..src.len() {
                    let d = map.dst[i] as usize;
                    acc[d] = arith.mul_acc(acc[d], src[i], pw[map.exp[i] as usize]);
                }
                for (o, a) in out.iter_mut().zip(acc.iter()) {
                    *o = arith.finish(*a);
                }
            }
            if level + 1 == k {
                total += leaf(&vals[k]) as u128;
            } else {
                total += self.rec(arith, level + 1, vals, acc, leaf);
            }
        }
        total
    }
}

trait Arith {
    type Acc: Copy;
    fn zero(&self) -> Self::Acc;
    fn mul_acc(&self, acc: Self::Acc, a: u32, b: u32) -> Self::Acc;
    fn finish(&self, acc: Self::Acc) -> u32;
}

/// Lazy reduction: products stay below 2^32 for p < 2^16, so a u64
/// accumulator absorbs billions of them before the single final `%`.
struct PrimeArith {
    p: u64,
}

impl Arith for PrimeArith {
    type Acc = u64;
    #[inline(always)]
    fn zero(&self) -> u64 {
        0
    }
    #[inline(always)]
    fn mul_acc(&self, acc: u64, a: u32, b: u32) -> u64 {
        acc + a as u64 * b as u64
    }
    #[inline(always)]
    fn finish(&self, acc: u64) -> u32 {
        (acc % self.p) as u32
    }
}

struct TableArith<'a> {
    field: &'a FieldTable,
}

impl Arith for TableArith<'_> {
    type Acc = u32;
    #[inline(always)]
    fn zero(&self) -> u32 {
        0
    }
    #[inline(always)]
    fn mul_acc(&self, acc: u32, a: u32, b: u32) -> u32 {
        self.field.add(acc, self.field.mul(a, b))
    }
    #[inline(always)]
    fn finish(&self, acc: u32) -> u32 {
        acc
    }
}
