//! Naming a c₂ residue sequence: constant, quasi-constant, modular, or one
//! of the known unidentified sequences.

mod eta;

pub use eta::{bundled_eta_products, eta_coefficients, EtaError, EtaProduct, MAX_ETA_BOUND};

use crate::counting::C2Record;
use crate::ffield::{count_unity_roots, is_prime, quadratic_root_count, FieldTable};
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

pub const MIN_PRIMES: usize = 6;

/// Coefficients a_p of a normalized eigenform, keyed by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformTable {
    pub weight: u32,
    pub level: u32,
    pub label: String,
    pub coefficients: BTreeMap<u32, BigInt>,
}

impl NewformTable {
    /// a_p mod p.
    pub fn residue(&self, p: u32) -> Option<u32> {
        self.coefficients.get(&p).map(|a| mod_u32(a, p))
    }
}

fn mod_u32(a: &BigInt, m: u32) -> u32 {
    u32::try_from(a.mod_floor(&BigInt::from(m))).unwrap()
}

fn residue_of(c: i64, q: u32) -> u32 {
    c.rem_euclid(q as i64) as u32
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tag {
    Constant(i64),
    QuasiZ(u32),
    QuasiY5,
    Modular { weight: u32, level: u32, label: String },
    Unidentified { label: Option<String> },
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Constant(c) => write!(f, "{c}"),
            Tag::QuasiZ(k) => write!(f, "-z{k}"),
            Tag::QuasiY5 => f.write_str("-y5"),
            Tag::Modular { weight, level, .. } => write!(f, "({weight}, {level})"),
            Tag::Unidentified { label: Some(l) } => f.write_str(l),
            Tag::Unidentified { label: None } => f.write_str("?"),
        }
    }
}

/// Residues of c₂ (not −c₂) at q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub q: u32,
    pub expected: u32,
    pub observed: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub tag: Tag,
    pub evidence: Vec<Evidence>,
    /// Every tag consistent with the data, the chosen one first.
    pub matches: Vec<Tag>,
    /// For a modular tag, the product of the matched primes: a random
    /// sequence would agree with probability about its inverse.
    pub confidence_denominator: Option<BigUint>,
    /// Forms skipped because their table lacked a needed prime.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    InsufficientData { primes: usize },
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::InsufficientData { primes } => {
                write!(f, "need residues at {MIN_PRIMES} primes, have {primes}")
            }
        }
    }
}

impl core::error::Error for ClassifyError {}

/// z_k(q) ∈ {1, 0, −1}.
pub fn z_value(k: u32, field: &FieldTable) -> i64 {
    if (k as u64).gcd(&(field.q() as u64)) > 1 {
        0
    } else if count_unity_roots(field, k as u64) == k {
        1
    } else {
        -1
    }
}

/// z_k(q) mod q for each field.
pub fn z_sequence(k: u32, fields: &[FieldTable]) -> Vec<u32> {
    assert!((2..=4).contains(&k), "z_k is only used for k = 2, 3, 4");
    fields.iter().map(|f| residue_of(z_value(k, f), f.q())).collect()
}

/// #{x : x² + x − 1 = 0} − 1.
pub fn y5_value(field: &FieldTable) -> i64 {
    let minus_one = field.from_int(-1);
    quadratic_root_count(field, 1, 1, minus_one) as i64 - 1
}

pub fn y5_sequence(fields: &[FieldTable]) -> Vec<u32> {
    fields.iter().map(|f| residue_of(y5_value(f), f.q())).collect()
}

/// A known unidentified sequence: label and −c₂ at p = 2, 3, 5, 7, 11, 13.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownSequence {
    pub label: String,
    pub minus_c2: BTreeMap<u32, u32>,
}

const UNIDENTIFIED: &str = include_str!("unidentified.txt");

pub fn known_unidentified() -> Vec<KnownSequence> {
    let primes = [2u32, 3, 5, 7, 11, 13];
    UNIDENTIFIED
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            let label = it.next().unwrap().to_string();
            let minus_c2 = primes.iter().zip(it).map(|(&p, v)| (p, v.parse().unwrap())).collect();
            KnownSequence { label, minus_c2 }
        })
        .collect()
}

/// Residue tables for the quasi-constant candidates need field tables; the
/// record only carries q, so they are rebuilt here.
fn fields_of(record: &C2Record) -> Vec<FieldTable> {
    record
        .fields()
        .into_iter()
        .filter_map(|q| crate::ffield::field_of_size(q as u64).ok())
        .collect()
}

fn check(record: &C2Record, expected: impl Fn(u32) -> Option<u32>, primes_only: bool) -> Option<Vec<Evidence>> {
    let mut rows = Vec::new();
    for (&q, entry) in &record.residues {
        if primes_only && !is_prime(q as u64) {
            continue;
        }
        let e = expected(q)?;
        if e != entry.residue {
            return None;
        }
        rows.push(Evidence { q, expected: e, observed: entry.residue });
    }
    Some(rows)
}

/// Tests the candidate tags in order and returns the first that fits.
/// `forms` are tried in the given order; pass η-products first.
pub fn classify_sequence(record: &C2Record, forms: &[NewformTable]) -> Result<Classification, ClassifyError> {
    let primes = record.primes();
    if primes.len() < MIN_PRIMES {
        return Err(ClassifyError::InsufficientData { primes: primes.len() });
    }
    let fields = fields_of(record);
    let field_of = |q: u32| fields.iter().find(|f| f.q() == q);
    let mut found: Vec<(Tag, Vec<Evidence>, Option<BigUint>)> = Vec::new();
    let mut skipped = Vec::new();

    for c in [0i64, -1, 1, -2, 2, -3, 3] {
        if let Some(ev) = check(record, |q| Some(residue_of(c, q)), false) {
            found.push((Tag::Constant(c), ev, None));
        }
    }
    for k in [2u32, 3, 4] {
        if let Some(ev) = check(record, |q| field_of(q).map(|f| residue_of(-z_value(k, f), q)), false) {
            found.push((Tag::QuasiZ(k), ev, None));
        }
    }
    if let Some(ev) = check(record, |q| field_of(q).map(|f| residue_of(-y5_value(f), q)), false) {
        found.push((Tag::QuasiY5, ev, None));
    }

    let mut modular: Vec<(Tag, Vec<Evidence>, Option<BigUint>)> = Vec::new();
    for form in forms {
        if let Some(&p) = primes.iter().find(|p| !form.coefficients.contains_key(p)) {
            skipped.push(format!("{} (no a_{p})", form.label));
            continue;
        }
        // c₂ ≡ −a_p mod p
        if let Some(ev) = check(record, |p| form.residue(p).map(|a| (p - a) % p), true) {
            let conf = primes.iter().fold(BigUint::from(1u32), |acc, &p| acc * p);
            let tag = Tag::Modular { weight: form.weight, level: form.level, label: form.label.clone() };
            modular.push((tag, ev, Some(conf)));
        }
    }
    // smallest (weight, level) wins; the sort is stable so supplied order
    // breaks remaining ties
    modular.sort_by_key(|(t, _, _)| match t {
        Tag::Modular { weight, level, .. } => (*weight, *level),
        _ => unreachable!(),
    });
    found.extend(modular);

    if found.is_empty() {
        let known = known_unidentified().into_iter().find(|s| {
            s.minus_c2.iter().all(|(&p, &m)| record.get(p).map_or(true, |r| (p - r) % p == m))
                && s.minus_c2.keys().any(|p| record.get(*p).is_some())
        });
        let evidence = match &known {
            Some(s) => s
                .minus_c2
                .iter()
                .filter_map(|(&p, &m)| {
                    record.get(p).map(|r| Evidence { q: p, expected: (p - m) % p, observed: r })
                })
                .collect(),
            None => Vec::new(),
        };
        let tag = Tag::Unidentified { label: known.map(|s| s.label) };
        return Ok(Classification {
            matches: vec![tag.clone()],
            tag,
            evidence,
            confidence_denominator: None,
            skipped,
        });
    }
    let matches = found.iter().map(|(t, _, _)| t.clone()).collect();
    let (tag, evidence, confidence_denominator) = found.swap_remove(0);
    Ok(Classification { tag, evidence, matches, confidence_denominator, skipped })
}

/// The bundled η-products as coefficient tables up to `bound`.
pub fn bundled_newforms(bound: usize) -> Vec<NewformTable> {
    bundled_eta_products().iter().map(|f| f.to_newform(bound).expect("bundled products are valid")).collect()
}
