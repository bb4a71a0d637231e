//! Corpus pipeline: ingest, complete, reduce to ancestors, count, classify,
//! persist one JSON per ancestor under `results/`, and write the reports.

use crate::format::{builtin, read_graph_file};
use crate::json::{ClassificationJson, GraphJson, RecordJson, ReductionJson};
use crate::parallel;
use c2lab_core::classify::{bundled_newforms, classify_sequence, Classification, NewformTable, Tag, MIN_PRIMES};
use c2lab_core::counting::{C2Method, C2Record, DEFAULT_BUDGET};
use c2lab_core::ffield::{field_of_size, is_prime, prime_power};
use c2lab_core::graph::{
    ancestor, canonical_form, complete, decomplete, generate_completed_primitive, is_completed_primitive,
    is_primitive_divergent, Graph,
};
use c2lab_core::sympoly::{denominator_reduce_with, ReduceOptions, DEFAULT_NODE_BUDGET};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

pub const DEFAULT_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("prime list is empty")]
    NoPrimes,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime list must be strictly increasing (saw {0} after {1})")]
    Unsorted(u32, u32),
    #[error("{0} is not a prime power above a prime")]
    NotPrimePower(u32),
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("no input graphs: give --builtin, --file or --generate")]
    NoInputs,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub builtins: Vec<String>,
    pub files: Vec<PathBuf>,
    pub generate: Option<usize>,
    pub primes: Vec<u32>,
    pub prime_powers: Vec<u32>,
    pub budget: u64,
    pub threads: Option<usize>,
    pub newform_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub verify_completion: bool,
    pub classify: bool,
    /// Also count Ψ of the decompletion directly and require agreement.
    pub direct_check: bool,
    pub node_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            builtins: Vec::new(),
            files: Vec::new(),
            generate: None,
            primes: DEFAULT_PRIMES.to_vec(),
            prime_powers: Vec::new(),
            budget: DEFAULT_BUDGET,
            threads: None,
            newform_dir: None,
            out_dir: PathBuf::from("."),
            verify_completion: false,
            classify: true,
            direct_check: false,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        validate_primes(&self.primes)?;
        for &q in &self.prime_powers {
            match prime_power(q as u64) {
                Some((_, n)) if n >= 2 => {}
                _ => return Err(ConfigError::NotPrimePower(q)),
            }
        }
        if self.budget == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        if self.builtins.is_empty() && self.files.is_empty() && self.generate.is_none() {
            return Err(ConfigError::NoInputs);
        }
        Ok(())
    }

    /// Primes then prime powers, each in the given order.
    pub fn fields(&self) -> Vec<u32> {
        let mut qs = self.primes.clone();
        for &q in &self.prime_powers {
            if !qs.contains(&q) {
                qs.push(q);
            }
        }
        qs
    }
}

pub fn validate_primes(primes: &[u32]) -> Result<(), ConfigError> {
    if primes.is_empty() {
        return Err(ConfigError::NoPrimes);
    }
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p as u64) {
            return Err(ConfigError::NotPrime(p));
        }
        if i > 0 && primes[i - 1] >= p {
            return Err(ConfigError::Unsorted(p, primes[i - 1]));
        }
    }
    Ok(())
}

pub fn sha_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// First 12 hex digits, enough to tell corpus entries apart in a table.
pub fn short_id(id: &str) -> &str {
    &id[..id.len().min(12)]
}

/// Name of the −c₂ sequence, the way residue tables label their rows:
/// `1` for c₂ = −1, `z3` for c₂ = −z₃, `(3, 7)` for a newform.
pub fn minus_label(tag: &Tag) -> String {
    match tag {
        Tag::Constant(c) => (-c).to_string(),
        Tag::QuasiZ(k) => format!("z{k}"),
        Tag::QuasiY5 => "y5".into(),
        Tag::Unidentified { label: None } => "unidentified".into(),
        t => t.to_string(),
    }
}

/// One ancestor's on-disk record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AncestorFile {
    pub id: String,
    pub graph: GraphJson,
    pub decompleted_vertex: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionJson>,
    pub record: RecordJson,
    /// Vertices whose decompletion reproduced every residue.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verified_vertices: Vec<usize>,
    /// Per-q failures, e.g. a count over budget.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub errors: BTreeMap<u32, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub name: String,
    /// Other inputs isomorphic to this one.
    pub aliases: Vec<String>,
    pub canonical_id: Option<String>,
    pub ancestor_ids: Vec<String>,
    pub depth: Option<usize>,
    pub stuck: bool,
    pub record: C2Record,
    pub classification: Option<Classification>,
    pub error: Option<String>,
}

impl ReportEntry {
    pub fn label(&self) -> String {
        match (&self.error, &self.classification) {
            (Some(_), _) => "error".into(),
            (None, Some(c)) => minus_label(&c.tag),
            (None, None) => "-".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub fields: Vec<u32>,
    pub entries: Vec<ReportEntry>,
    pub summary: BTreeMap<String, usize>,
}

impl RunReport {
    pub fn failed(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.error.is_some() || self.fields.iter().any(|&q| e.record.get(q).is_none()))
            .count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() == 0 {
            0
        } else {
            2
        }
    }

    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name || e.aliases.iter().any(|a| a == name))
    }

    /// `graph ancestor label -c2@q...`, tab separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("graph\tancestor\tlabel");
        for q in &self.fields {
            out.push_str(&format!("\t-c2@{q}"));
        }
        out.push('\n');
        for e in &self.entries {
            let anc: Vec<&str> = e.ancestor_ids.iter().map(|s| short_id(s)).collect();
            let anc = if anc.is_empty() { "-".to_string() } else { anc.join("+") };
            out.push_str(&format!("{}\t{}\t{}", e.name, anc, e.label()));
            for &q in &self.fields {
                match e.record.minus(q) {
                    Some(m) => out.push_str(&format!("\t{m}")),
                    None => out.push_str("\t-"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "graph": e.name,
                    "label": e.label(),
                    "aliases": e.aliases,
                    "canonical_id": e.canonical_id,
                    "ancestor_ids": e.ancestor_ids,
                    "reduction_depth": e.depth,
                    "stuck": e.stuck,
                    "record": RecordJson::from(&e.record),
                    "classification": e.classification.as_ref().map(ClassificationJson::from),
                    "error": e.error,
                })
            })
            .collect();
        serde_json::json!({ "fields": self.fields, "entries": entries, "summary": self.summary })
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Setup(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.display().to_string(), source }
}

/// An input graph, or the reason it could not be loaded.
pub struct Input {
    pub name: String,
    pub graph: Result<Graph, String>,
}

pub fn collect_inputs(config: &PipelineConfig) -> Result<Vec<Input>, PipelineError> {
    let mut inputs = Vec::new();
    for name in &config.builtins {
        // an unknown builtin is a typo in the command line, not a graph failure
        let g = builtin(name).map_err(|e| PipelineError::Setup(e.to_string()))?;
        inputs.push(Input { name: name.clone(), graph: Ok(g) });
    }
    for path in &config.files {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        let graph = read_graph_file(path).map_err(|e| e.to_string());
        let name = graph.as_ref().ok().and_then(|g| g.name().map(str::to_string)).unwrap_or(name);
        inputs.push(Input { name, graph });
    }
    if let Some(l) = config.generate {
        let graphs = generate_completed_primitive(l).map_err(|e| PipelineError::Setup(e.to_string()))?;
        for (i, g) in graphs.into_iter().enumerate() {
            let name = format!("L{l}-{}", i + 1);
            inputs.push(Input { graph: Ok(g.with_name(name.clone())), name });
        }
    }
    Ok(inputs)
}

/// Result of the cheap graph-theoretic stages for one input.
struct Prepared {
    canonical_id: String,
    ancestors: Vec<(String, Graph)>,
    /// Apex of the completion in the ancestor's labelling, when the input
    /// was already its own ancestor.
    apex: Option<usize>,
}

fn prepare(g: &Graph) -> Result<Prepared, String> {
    let (completed, apex) = if is_completed_primitive(g) {
        (g.clone(), None)
    } else {
        match is_primitive_divergent(g) {
            Ok(true) => {}
            Ok(false) => return Err("not primitive divergent and not a completed primitive graph".into()),
            Err(e) => return Err(e.to_string()),
        }
        let c = complete(g).map_err(|e| e.to_string())?;
        if !is_completed_primitive(&c.completed) {
            return Err("completion is not primitive".into());
        }
        (c.completed, Some(c.apex))
    };
    let cf = canonical_form(&completed).map_err(|e| e.to_string())?;
    let anc = ancestor(&completed).map_err(|e| e.to_string())?;
    let ancestors: Vec<(String, Graph)> =
        anc.certificates().iter().zip(anc.components.iter()).map(|(c, g)| (sha_hex(c), g.clone())).collect();
    // components come back canonical, so the apex maps through `relabel`
    let apex = if anc.trace.is_empty() { apex.map(|a| cf.relabel[a]) } else { None };
    Ok(Prepared { canonical_id: sha_hex(&cf.certificate), ancestors, apex })
}

/// Lexicographically least vertex of maximum degree.
pub fn default_decompletion_vertex(g: &Graph) -> usize {
    let deg = g.degrees();
    let max = deg.iter().copied().max().unwrap_or(0);
    deg.iter().position(|&d| d == max).unwrap_or(0)
}

pub fn result_path(out_dir: &Path, id: &str) -> PathBuf {
    out_dir.join("results").join(format!("{id}.json"))
}

pub fn load_ancestor_file(path: &Path) -> Option<AncestorFile> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// Counts whatever the on-disk record is missing for one ancestor.
fn process_ancestor(
    id: &str,
    g: &Graph,
    apex: Option<usize>,
    config: &PipelineConfig,
) -> Result<AncestorFile, PipelineError> {
    let path = result_path(&config.out_dir, id);
    let fields = config.fields();
    let vertex = apex.unwrap_or_else(|| default_decompletion_vertex(g));
    let mut file = load_ancestor_file(&path).unwrap_or_else(|| AncestorFile {
        id: id.to_string(),
        graph: GraphJson::from(g),
        decompleted_vertex: vertex,
        reduction: None,
        record: RecordJson::from(&C2Record::new(id)),
        verified_vertices: Vec::new(),
        errors: BTreeMap::new(),
    });
    let mut record = file.record.to_record();
    let missing: Vec<u32> = fields.iter().copied().filter(|&q| record.get(q).is_none()).collect();
    let want_verify = config.verify_completion && file.verified_vertices.len() < g.vertex_count();
    if missing.is_empty() && !want_verify && !(config.direct_check && !has_direct(&record, &fields)) {
        return Ok(file);
    }
    let vertex = file.decompleted_vertex;
    file.errors.retain(|q, _| !fields.contains(q));

    let opts = ReduceOptions { node_budget: config.node_budget, ..ReduceOptions::default() };
    let dg = decomplete(g, vertex).map_err(|e| PipelineError::Setup(e.to_string()))?;
    let state = denominator_reduce_with(&dg, &opts).map_err(|e| PipelineError::Setup(e.to_string()))?;
    file.reduction = Some(ReductionJson::from(&state));
    for &q in &missing {
        let field = field_of_size(q as u64).map_err(|e| PipelineError::Setup(e.to_string()))?;
        let t = Instant::now();
        match parallel::c2_from_reduction(&state, &field, config.budget) {
            Ok(r) => {
                let method = C2Method::Reduced { step: state.step, ordering: state.eliminated.clone() };
                record.insert(q, r, method, Some(t.elapsed().as_secs_f64())).expect("first insert");
            }
            Err(e) => {
                file.errors.insert(q, e.to_string());
            }
        }
    }
    if config.direct_check {
        for &q in &fields {
            if record.get(q).is_none() || record.residues[&q].methods.contains(&C2Method::Direct) {
                continue;
            }
            let field = field_of_size(q as u64).map_err(|e| PipelineError::Setup(e.to_string()))?;
            let t = Instant::now();
            match parallel::c2_direct(&dg, &field, config.budget) {
                Ok(r) => {
                    if let Err(e) = record.insert(q, r, C2Method::Direct, Some(t.elapsed().as_secs_f64())) {
                        file.errors.insert(q, format!("direct count disagrees: {e}"));
                    }
                }
                Err(e) => {
                    file.errors.insert(q, format!("direct: {e}"));
                }
            }
        }
    }
    if config.verify_completion {
        for w in 0..g.vertex_count() {
            if w == vertex || file.verified_vertices.contains(&w) {
                continue;
            }
            match verify_vertex(g, w, &record, &fields, config, &opts) {
                Ok(()) => file.verified_vertices.push(w),
                Err(msg) => {
                    let q = fields[0];
                    file.errors.insert(q, format!("completion check at vertex {w}: {msg}"));
                }
            }
        }
        if !file.verified_vertices.contains(&vertex) {
            file.verified_vertices.push(vertex);
        }
        file.verified_vertices.sort_unstable();
    }
    file.record = RecordJson::from(&record);
    write_json(&path, &file)?;
    Ok(file)
}

fn has_direct(record: &C2Record, fields: &[u32]) -> bool {
    fields.iter().all(|q| record.residues.get(q).map_or(true, |e| e.methods.contains(&C2Method::Direct)))
}

fn verify_vertex(
    g: &Graph,
    w: usize,
    record: &C2Record,
    fields: &[u32],
    config: &PipelineConfig,
    opts: &ReduceOptions,
) -> Result<(), String> {
    let dg = decomplete(g, w).map_err(|e| e.to_string())?;
    let st = denominator_reduce_with(&dg, opts).map_err(|e| e.to_string())?;
    for &q in fields {
        let Some(want) = record.get(q) else { continue };
        let field = field_of_size(q as u64).map_err(|e| e.to_string())?;
        let got = parallel::c2_from_reduction(&st, &field, config.budget).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("c2 = {got} at q = {q}, expected {want}"));
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // write then rename, so an interrupted run never leaves half a record
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text + "\n").map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn newforms_for(config: &PipelineConfig) -> Result<Vec<NewformTable>, PipelineError> {
    let bound = config.primes.iter().copied().max().unwrap_or(13).max(13) as usize;
    let mut forms = bundled_newforms(bound);
    if let Some(dir) = &config.newform_dir {
        forms.extend(crate::format::load_newform_dir(dir).map_err(|e| PipelineError::Setup(e.to_string()))?);
    }
    Ok(forms)
}

fn classify_record(record: &C2Record, forms: &[NewformTable]) -> Option<Classification> {
    (record.primes().len() >= MIN_PRIMES).then(|| classify_sequence(record, forms).expect("enough primes"))
}

/// Restricts a record to the configured fields.
fn restrict(record: &C2Record, fields: &[u32], name: &str) -> C2Record {
    let mut r = C2Record::new(name);
    for (&q, e) in &record.residues {
        if fields.contains(&q) {
            r.residues.insert(q, e.clone());
        }
    }
    r
}

pub fn run(config: &PipelineConfig) -> Result<RunReport, PipelineError> {
    config.validate()?;
    let inputs = collect_inputs(config)?;
    let forms = if config.classify { newforms_for(config)? } else { Vec::new() };
    let fields = config.fields();

    let prepared: Vec<Result<Prepared, String>> =
        inputs.iter().map(|i| i.graph.clone().and_then(|g| prepare(&g))).collect();

    // distinct ancestors, first occurrence wins the apex
    let mut work: BTreeMap<String, (Graph, Option<usize>)> = BTreeMap::new();
    for p in prepared.iter().flatten() {
        for (id, g) in &p.ancestors {
            let apex = if p.ancestors.len() == 1 { p.apex } else { None };
            work.entry(id.clone()).or_insert_with(|| (g.clone(), apex));
        }
    }
    let work: Vec<(String, Graph, Option<usize>)> = work.into_iter().map(|(k, (g, a))| (k, g, a)).collect();
    let done: Vec<Result<AncestorFile, String>> = parallel::with_threads(config.threads, || {
        work.par_iter()
            .map(|(id, g, apex)| process_ancestor(id, g, *apex, config).map_err(|e| e.to_string()))
            .collect()
    });
    let done: BTreeMap<&str, &Result<AncestorFile, String>> =
        work.iter().map(|(id, _, _)| id.as_str()).zip(done.iter()).collect();

    let mut entries: Vec<ReportEntry> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (input, prep) in inputs.iter().zip(&prepared) {
        let prep = match prep {
            Ok(p) => p,
            Err(e) => {
                entries.push(ReportEntry {
                    name: input.name.clone(),
                    aliases: Vec::new(),
                    canonical_id: None,
                    ancestor_ids: Vec::new(),
                    depth: None,
                    stuck: false,
                    record: C2Record::new(input.name.clone()),
                    classification: None,
                    error: Some(e.clone()),
                });
                continue;
            }
        };
        if let Some(&i) = seen.get(&prep.canonical_id) {
            entries[i].aliases.push(input.name.clone());
            continue;
        }
        seen.insert(prep.canonical_id.clone(), entries.len());
        entries.push(entry_for(&input.name, prep, &done, &fields, &forms));
    }

    let mut summary: BTreeMap<String, usize> = BTreeMap::new();
    for e in &entries {
        let key = match (&e.error, &e.classification) {
            (Some(_), _) => "error".to_string(),
            (None, Some(c)) => minus_label(&c.tag),
            (None, None) => "unclassified".to_string(),
        };
        *summary.entry(key).or_default() += 1;
    }
    let report = RunReport { fields, entries, summary };
    write_reports(&config.out_dir, &report)?;
    Ok(report)
}

fn entry_for(
    name: &str,
    prep: &Prepared,
    done: &BTreeMap<&str, &Result<AncestorFile, String>>,
    fields: &[u32],
    forms: &[NewformTable],
) -> ReportEntry {
    let ancestor_ids: Vec<String> = prep.ancestors.iter().map(|(id, _)| id.clone()).collect();
    let mut entry = ReportEntry {
        name: name.to_string(),
        aliases: Vec::new(),
        canonical_id: Some(prep.canonical_id.clone()),
        ancestor_ids: ancestor_ids.clone(),
        depth: None,
        stuck: false,
        record: C2Record::new(name),
        classification: None,
        error: None,
    };
    let mut errors = Vec::new();
    for id in &ancestor_ids {
        match done[id.as_str()] {
            Ok(f) => {
                for (q, e) in &f.errors {
                    if fields.contains(q) {
                        errors.push(format!("{}: q = {q}: {e}", short_id(id)));
                    }
                }
            }
            Err(e) => errors.push(format!("{}: {e}", short_id(id))),
        }
    }
    if ancestor_ids.len() == 1 {
        if let Ok(f) = done[ancestor_ids[0].as_str()] {
            entry.record = restrict(&f.record.to_record(), fields, name);
            entry.depth = f.reduction.as_ref().map(|r| r.step);
            entry.stuck = f.reduction.as_ref().is_some_and(|r| r.stuck);
        }
    } else {
        // products of completed primitive graphs have vanishing c₂
        for &q in fields {
            entry.record.insert(q, 0, C2Method::Formula, None).expect("fresh record");
        }
        errors.clear();
    }
    if !errors.is_empty() {
        entry.error = Some(errors.join("; "));
    }
    entry.classification = classify_record(&entry.record, forms);
    entry
}

pub fn write_reports(out_dir: &Path, report: &RunReport) -> Result<(), PipelineError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let tsv = out_dir.join("report.tsv");
    std::fs::write(&tsv, report.to_tsv()).map_err(io_err(&tsv))?;
    let json = out_dir.join("report.json");
    let text = serde_json::to_string_pretty(&report.to_json()).expect("serializable");
    std::fs::write(&json, text + "\n").map_err(io_err(&json))
}

/// Ids of every ancestor file already on disk.
pub fn finished_ids(out_dir: &Path) -> BTreeSet<String> {
    std::fs::read_dir(out_dir.join("results"))
        .map(|rd| {
            rd.filter_map(|e| e.ok())
                .filter_map(|e| e.path().file_stem().map(|s| s.to_string_lossy().into_owned()))
                .filter(|s| !s.ends_with(".json"))
                .collect()
        })
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = PipelineConfig { builtins: vec!["K5".into()], ..PipelineConfig::default() };
        assert_eq!(ok.validate(), Ok(()));
        let bad = |f: fn(&mut PipelineConfig)| {
            let mut c = ok.clone();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.primes = vec![2, 4]), ConfigError::NotPrime(4));
        assert_eq!(bad(|c| c.primes = vec![3, 2]), ConfigError::Unsorted(2, 3));
        assert_eq!(bad(|c| c.primes = vec![3, 3]), ConfigError::Unsorted(3, 3));
        assert_eq!(bad(|c| c.primes.clear()), ConfigError::NoPrimes);
        assert_eq!(bad(|c| c.budget = 0), ConfigError::ZeroBudget);
        assert_eq!(bad(|c| c.prime_powers = vec![6]), ConfigError::NotPrimePower(6));
        assert_eq!(bad(|c| c.prime_powers = vec![5]), ConfigError::NotPrimePower(5));
        assert_eq!(bad(|c| c.builtins.clear()), ConfigError::NoInputs);
    }

    #[test]
    fn decompletion_vertex_is_least_of_max_degree() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(default_decompletion_vertex(&g), 1);
        assert_eq!(default_decompletion_vertex(&Graph::k5()), 0);
    }

    #[test]
    fn labels_describe_minus_c2() {
        assert_eq!(minus_label(&Tag::Constant(-1)), "1");
        assert_eq!(minus_label(&Tag::Constant(0)), "0");
        assert_eq!(minus_label(&Tag::QuasiZ(2)), "z2");
        let m = Tag::Modular { weight: 3, level: 7, label: String::new() };
        assert_eq!(minus_label(&m), "(3, 7)");
        assert_eq!(minus_label(&Tag::Unidentified { label: Some("i53".into()) }), "i53");
    }

    #[test]
    fn ids_are_sha256() {
        assert_eq!(sha_hex(b"").len(), 64);
        assert!(sha_hex(b"abc").starts_with("ba7816bf"));
    }
}
