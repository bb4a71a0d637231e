//! Serde mirrors of the core types. The core crate stays serde-free.

use c2lab_core::classify::{Classification, Tag};
use c2lab_core::counting::{C2Entry, C2Method, C2Record};
use c2lab_core::graph::Graph;
use c2lab_core::sympoly::ReductionState;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson { name: g.name().map(str::to_string), vertices: g.vertex_count(), edges: g.edges().to_vec() }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph, c2lab_core::graph::GraphError> {
        let mut g = Graph::new(self.vertices, self.edges.clone())?;
        g.set_name(self.name.clone());
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MethodJson {
    Direct,
    Reduced { step: usize, ordering: Vec<usize> },
    Formula,
}

impl From<&C2Method> for MethodJson {
    fn from(m: &C2Method) -> Self {
        match m {
            C2Method::Direct => MethodJson::Direct,
            C2Method::Reduced { step, ordering } => MethodJson::Reduced { step: *step, ordering: ordering.clone() },
            C2Method::Formula => MethodJson::Formula,
        }
    }
}

impl From<&MethodJson> for C2Method {
    fn from(m: &MethodJson) -> Self {
        match m {
            MethodJson::Direct => C2Method::Direct,
            MethodJson::Reduced { step, ordering } => C2Method::Reduced { step: *step, ordering: ordering.clone() },
            MethodJson::Formula => C2Method::Formula,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    /// c₂ mod q, in 0..q.
    pub c2: u32,
    pub methods: Vec<MethodJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordJson {
    pub graph: String,
    pub residues: BTreeMap<u32, EntryJson>,
}

impl From<&C2Record> for RecordJson {
    fn from(r: &C2Record) -> Self {
        let residues = r
            .residues
            .iter()
            .map(|(&q, e)| {
                let entry = EntryJson {
                    c2: e.residue,
                    methods: e.methods.iter().map(MethodJson::from).collect(),
                    seconds: e.seconds,
                };
                (q, entry)
            })
            .collect();
        RecordJson { graph: r.graph.clone(), residues }
    }
}

impl RecordJson {
    pub fn to_record(&self) -> C2Record {
        let mut r = C2Record::new(self.graph.clone());
        for (&q, e) in &self.residues {
            r.residues.insert(
                q,
                C2Entry { residue: e.c2, methods: e.methods.iter().map(C2Method::from).collect(), seconds: e.seconds },
            );
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagJson {
    pub kind: String,
    /// What the TSV `label` column shows.
    pub display: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Tag> for TagJson {
    fn from(t: &Tag) -> Self {
        let base = |kind: &str| TagJson {
            kind: kind.into(),
            display: t.to_string(),
            value: None,
            weight: None,
            level: None,
            label: None,
        };
        match t {
            Tag::Constant(c) => TagJson { value: Some(*c), ..base("constant") },
            Tag::QuasiZ(k) => TagJson { value: Some(*k as i64), ..base("quasi-z") },
            Tag::QuasiY5 => base("quasi-y5"),
            Tag::Modular { weight, level, label } => TagJson {
                weight: Some(*weight),
                level: Some(*level),
                label: Some(label.clone()),
                ..base("modular")
            },
            Tag::Unidentified { label } => TagJson { label: label.clone(), ..base("unidentified") },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceJson {
    pub q: u32,
    pub expected_c2: u32,
    pub observed_c2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub tag: TagJson,
    pub evidence: Vec<EvidenceJson>,
    pub matches: Vec<TagJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_denominator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl From<&Classification> for ClassificationJson {
    fn from(c: &Classification) -> Self {
        ClassificationJson {
            tag: TagJson::from(&c.tag),
            evidence: c
                .evidence
                .iter()
                .map(|e| EvidenceJson { q: e.q, expected_c2: e.expected, observed_c2: e.observed })
                .collect(),
            matches: c.matches.iter().map(TagJson::from).collect(),
            confidence_denominator: c.confidence_denominator.as_ref().map(|d| d.to_string()),
            skipped: c.skipped.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorsJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub variable: usize,
    /// Absent when the factorization hit the gcd work cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<FactorsJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub edge_count: usize,
    pub loop_number: usize,
    pub step: usize,
    pub ordering: Vec<usize>,
    pub stuck: bool,
    pub nodes_explored: usize,
    pub terms: usize,
    pub steps: Vec<StepJson>,
    /// `D^step` in canonical text, omitted when very large.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
}

/// Polynomials with more terms than this are left out of JSON output.
pub const MAX_PRINTED_TERMS: usize = 2_000;

impl From<&ReductionState> for ReductionJson {
    fn from(s: &ReductionState) -> Self {
        ReductionJson {
            edge_count: s.edge_count,
            loop_number: s.loop_number,
            step: s.step,
            ordering: s.eliminated.clone(),
            stuck: s.stuck,
            nodes_explored: s.nodes_explored,
            terms: s.current.len(),
            steps: s
                .factor_log
                .iter()
                .map(|l| StepJson {
                    variable: l.variable,
                    factors: l.factors.as_ref().map(|f| FactorsJson {
                        a: f.a.to_canonical_text(),
                        b: f.b.to_canonical_text(),
                        c: f.c.to_canonical_text(),
                        d: f.d.to_canonical_text(),
                    }),
                })
                .collect(),
            polynomial: (s.current.len() <= MAX_PRINTED_TERMS).then(|| s.current.to_canonical_text()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let mut r = C2Record::new("K5");
        r.insert(5, 4, C2Method::Direct, Some(0.5)).unwrap();
        r.insert(5, 4, C2Method::Reduced { step: 6, ordering: vec![0, 1, 2, 3, 4, 5] }, None).unwrap();
        r.insert(2, 1, C2Method::Formula, None).unwrap();
        let text = serde_json::to_string(&RecordJson::from(&r)).unwrap();
        let back: RecordJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_record(), r);
    }

    #[test]
    fn tag_display_is_kept() {
        let t = TagJson::from(&Tag::Modular { weight: 3, level: 7, label: "x".into() });
        assert_eq!((t.kind.as_str(), t.display.as_str()), ("modular", "(3, 7)"));
        assert_eq!(TagJson::from(&Tag::QuasiZ(3)).display, "-z3");
    }
}
