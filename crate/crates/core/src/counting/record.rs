use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum C2Method {
    Direct,
    Reduced { step: usize, ordering: Vec<usize> },
    Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct C2Entry {
    pub residue: u32,
    pub methods: Vec<C2Method>,
    /// Wall-clock seconds across all methods, when measured.
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordError {
    OutOfRange { q: u32, residue: u32 },
    /// Two methods disagree: a bug in one of them.
    Conflict { q: u32, existing: u32, new: u32 },
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordError::OutOfRange { q, residue } => write!(f, "residue {residue} not below q = {q}"),
            RecordError::Conflict { q, existing, new } => {
                write!(f, "methods disagree at q = {q}: {existing} vs {new}")
            }
        }
    }
}

impl core::error::Error for RecordError {}

/// c₂ residues of one graph, keyed by q.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct C2Record {
    pub graph: String,
    pub residues: BTreeMap<u32, C2Entry>,
}

impl C2Record {
    pub fn new(graph: impl Into<String>) -> Self {
        C2Record { graph: graph.into(), residues: BTreeMap::new() }
    }

    pub fn insert(&mut self, q: u32, residue: u32, method: C2Method, seconds: Option<f64>) -> Result<(), RecordError> {
        if residue >= q {
            return Err(RecordError::OutOfRange { q, residue });
        }
        match self.residues.get_mut(&q) {
            Some(entry) => {
                if entry.residue != residue {
                    return Err(RecordError::Conflict { q, existing: entry.residue, new: residue });
                }
                if !entry.methods.contains(&method) {
                    entry.methods.push(method);
                }
                entry.seconds = match (entry.seconds, seconds) {
                    (Some(a), Some(b)) => Some(a + b),
                    (a, b) => a.or(b),
                };
            }
            None => {
                self.residues.insert(q, C2Entry { residue, methods: alloc::vec![method], seconds });
            }
        }
        Ok(())
    }

    pub fn get(&self, q: u32) -> Option<u32> {
        self.residues.get(&q).map(|e| e.residue)
    }

    /// `−c₂ mod q`, as printed in residue tables.
    pub fn minus(&self, q: u32) -> Option<u32> {
        self.get(q).map(|r| (q - r) % q)
    }

    pub fn fields(&self) -> Vec<u32> {
        self.residues.keys().copied().collect()
    }

    pub fn primes(&self) -> Vec<u32> {
        self.fields().into_iter().filter(|&q| crate::ffield::is_prime(q as u64)).collect()
    }

    /// True when every residue at a prime is zero.
    pub fn vanishes(&self) -> bool {
        self.residues.values().all(|e| e.residue == 0)
    }
}
