//! `c2lab` subcommands. Every command returns its exit code.

use crate::format::{builtin, load_newform_dir, read_graph_file, write_graph};
use crate::json::{ClassificationJson, RecordJson, ReductionJson};
use crate::parallel;
use crate::pipeline::{self, validate_primes, AncestorFile, ConfigError, PipelineConfig, DEFAULT_PRIMES};
use anyhow::{anyhow, bail, Context, Result};
use c2lab_core::classify::{bundled_newforms, classify_sequence};
use c2lab_core::counting::{
    count_i101_fourfold, negate_residue, C2Method, C2Record, CountJob, DEFAULT_BUDGET,
};
use c2lab_core::ffield::{field_of_size, is_prime, prime_power, FieldTable};
use c2lab_core::graph::{
    ancestor, canonical_form, complete, decomplete, generate_completed_primitive, is_completed_primitive,
    is_prime_ancestor, Graph,
};
use c2lab_core::sympoly::{
    denominator_reduce_with, five_invariant, graph_polynomial, spanning_tree_count, spanning_tree_polynomial,
    ReduceOptions, SparsePoly, DEFAULT_NODE_BUDGET,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "c2lab", version, about = "c2-invariants of Feynman graphs by point counting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the graph polynomial, or a 5-invariant.
    Poly(PolyArgs),
    /// Run denominator reduction and print the trace as JSON.
    Reduce(ReduceArgs),
    /// Count affine zeros of the graph polynomial, or of a polynomial file.
    Count(CountArgs),
    /// c2 residues of one graph.
    C2(C2Args),
    /// Complete if needed and reduce to prime ancestor components.
    Ancestor(AncestorArgs),
    /// Enumerate completed primitive graphs at a loop order.
    Generate(GenerateArgs),
    /// Name a residue sequence.
    Classify(ClassifyArgs),
    /// End-to-end corpus run with on-disk results and TSV/JSON reports.
    Pipeline(PipelineArgs),
    /// The i101 fourfold residues.
    I101(I101Args),
}

#[derive(Debug, Args)]
pub struct GraphSource {
    /// Builtin graph: K4, K5, O3, C3, DC3, K5K5, or a circulant like C9(1,3).
    #[arg(long, conflicts_with = "file")]
    pub builtin: Option<String>,
    /// Graph file: `vertices N` then `u v` lines.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl GraphSource {
    fn load(&self) -> Result<Graph> {
        match (&self.builtin, &self.file) {
            (Some(b), _) => Ok(builtin(b)?),
            (None, Some(f)) => Ok(read_graph_file(f)?),
            (None, None) => Err(anyhow!(ConfigError::NoInputs)),
        }
    }
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES)]
    pub primes: Vec<u32>,
    /// Extra non-prime field sizes, e.g. 4,8,9.
    #[arg(long = "prime-powers", value_delimiter = ',')]
    pub prime_powers: Vec<u32>,
    /// Maximum evaluation steps per count.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl FieldArgs {
    fn fields(&self) -> std::result::Result<Vec<FieldTable>, ConfigError> {
        validate_primes(&self.primes)?;
        if self.budget == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        let mut qs = self.primes.clone();
        for &q in &self.prime_powers {
            match prime_power(q as u64) {
                Some((_, n)) if n >= 2 => qs.push(q),
                _ => return Err(ConfigError::NotPrimePower(q)),
            }
        }
        Ok(qs.iter().map(|&q| field_of_size(q as u64).expect("checked prime power")).collect())
    }
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub graph: GraphSource,
    /// Compare against the spanning-tree enumeration.
    #[arg(long = "spanning-tree-check")]
    pub spanning_tree_check: bool,
    /// Five 1-based edge indices; prints the 5-invariant instead.
    #[arg(long = "five-invariant", value_delimiter = ',', num_args = 1)]
    pub five_invariant: Option<Vec<usize>>,
    /// One line, `x1 + x2 + x3` style.
    #[arg(long)]
    pub infix: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub graph: GraphSource,
    /// Delete this vertex first (0-based). Completed graphs are decompleted
    /// at the least vertex of maximum degree when this is omitted.
    #[arg(long)]
    pub decomplete: Option<usize>,
    /// Preferred elimination order, 1-based edge indices.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    #[arg(long = "node-budget", default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub graph: GraphSource,
    /// Polynomial in canonical text form (one `coeff x1^a ...` term per line).
    #[arg(long, conflicts_with_all = ["builtin", "file"])]
    pub poly: Option<PathBuf>,
    #[command(flatten)]
    pub fields: FieldArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Reduced,
    Direct,
    Both,
}

#[derive(Debug, Args)]
pub struct C2Args {
    #[command(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum, default_value_t = Method::Reduced)]
    pub method: Method,
    #[arg(long)]
    pub decomplete: Option<usize>,
    #[command(flatten)]
    pub fields: FieldArgs,
    /// Print the record as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AncestorArgs {
    #[command(flatten)]
    pub graph: GraphSource,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Loop order of the decompletions (vertex count of the completion minus 2).
    pub loops: usize,
    /// Write one graph file per graph into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep only prime ancestors.
    #[arg(long = "prime-only")]
    pub prime_only: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// A record JSON, or an ancestor file from `results/`.
    #[arg(long, conflicts_with = "minus_c2")]
    pub record: Option<PathBuf>,
    /// -c2 residues in the order of --primes.
    #[arg(long = "minus-c2", value_delimiter = ',')]
    pub minus_c2: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES)]
    pub primes: Vec<u32>,
    /// Directory of newform coefficient files.
    #[arg(long)]
    pub newforms: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub builtin: Vec<String>,
    #[arg(long)]
    pub file: Vec<PathBuf>,
    /// Add every completed primitive graph of this loop order.
    #[arg(long)]
    pub generate: Option<usize>,
    #[command(flatten)]
    pub fields: FieldArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub newforms: Option<PathBuf>,
    /// Recompute c2 from every vertex deletion of each ancestor.
    #[arg(long = "verify-completion")]
    pub verify_completion: bool,
    /// Also count the graph polynomial directly.
    #[arg(long = "direct-check")]
    pub direct_check: bool,
    #[arg(long = "no-classify")]
    pub no_classify: bool,
    #[arg(long = "node-budget", default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
}

#[derive(Debug, Args)]
pub struct I101Args {
    #[arg(long, value_delimiter = ',', conflicts_with = "max_prime")]
    pub primes: Option<Vec<u32>>,
    /// Every prime up to this bound.
    #[arg(long = "max-prime", default_value_t = 97)]
    pub max_prime: u32,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

pub fn main() -> i32 {
    // `c2lab ... | head` closes stdout early; print! then panics, so leave quietly
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        if info.payload_as_str().is_some_and(|m| m.contains("Broken pipe")) {
            std::process::exit(0);
        }
        default_hook(info);
    }));
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                EXIT_CONFIG
            } else {
                1
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Poly(a) => cmd_poly(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Count(a) => cmd_count(&a),
        Command::C2(a) => cmd_c2(&a),
        Command::Ancestor(a) => cmd_ancestor(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Classify(a) => cmd_classify(&a),
        Command::Pipeline(a) => cmd_pipeline(&a),
        Command::I101(a) => cmd_i101(&a),
    }
}

/// `x1 + 2 x2^2 - x3` style.
pub fn infix(p: &SparsePoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, line) in p.to_canonical_text().lines().enumerate() {
        let (c, mono) = line.split_once(' ').map_or((line, ""), |(c, m)| (c, m));
        let (neg, mag) = c.strip_prefix('-').map_or((false, c), |m| (true, m));
        if i == 0 {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (mag, mono.is_empty()) {
            ("1", false) => out.push_str(mono),
            (m, true) => out.push_str(m),
            (m, false) => out.push_str(&format!("{m} {mono}")),
        }
    }
    out
}

fn cmd_poly(a: &PolyArgs) -> Result<i32> {
    let g = a.graph.load()?;
    let p = match &a.five_invariant {
        Some(idx) => {
            if idx.len() != 5 || idx.iter().any(|&i| i == 0) {
                bail!("--five-invariant takes five 1-based edge indices");
            }
            let e = [idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1, idx[4] - 1];
            five_invariant(&g, e)?
        }
        None => graph_polynomial(&g)?,
    };
    if a.infix {
        println!("{}", infix(&p));
    } else {
        print!("{}", p.to_canonical_text());
    }
    if a.spanning_tree_check {
        let trees = spanning_tree_polynomial(&g)?;
        let psi = graph_polynomial(&g)?;
        let ok = trees == psi;
        eprintln!(
            "spanning-tree check: {} ({} spanning trees, {} monomials)",
            if ok { "ok" } else { "MISMATCH" },
            spanning_tree_count(&g)?,
            psi.len()
        );
        if !ok {
            return Ok(1);
        }
    }
    Ok(EXIT_OK)
}

/// The graph to reduce or count: completed primitive graphs are decompleted.
fn working_graph(g: Graph, vertex: Option<usize>) -> Result<Graph> {
    match vertex {
        Some(v) => Ok(decomplete(&g, v)?),
        None if is_completed_primitive(&g) => {
            let v = pipeline::default_decompletion_vertex(&g);
            eprintln!("note: completed graph, deleting vertex {v}");
            Ok(decomplete(&g, v)?)
        }
        None => Ok(g),
    }
}

fn cmd_reduce(a: &ReduceArgs) -> Result<i32> {
    let g = working_graph(a.graph.load()?, a.decomplete)?;
    if a.order.iter().any(|&e| e == 0) {
        bail!("--order takes 1-based edge indices");
    }
    let opts = ReduceOptions {
        order_hint: (!a.order.is_empty()).then(|| a.order.iter().map(|e| e - 1).collect()),
        node_budget: a.node_budget,
        ..ReduceOptions::default()
    };
    let st = denominator_reduce_with(&g, &opts)?;
    println!("{}", serde_json::to_string_pretty(&ReductionJson::from(&st))?);
    Ok(if st.stuck { EXIT_PARTIAL } else { EXIT_OK })
}

/// Variable count implied by the largest `xN` in canonical text.
fn implied_nvars(text: &str) -> usize {
    text.split_whitespace()
        .filter_map(|t| t.strip_prefix('x'))
        .filter_map(|t| t.split('^').next().and_then(|n| n.parse::<usize>().ok()))
        .max()
        .unwrap_or(0)
}

fn cmd_count(a: &CountArgs) -> Result<i32> {
    let fields = a.fields.fields()?;
    let job = match &a.poly {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            CountJob::all_vars(SparsePoly::parse_canonical_text(implied_nvars(&text), &text)?)
        }
        None => {
            let g = a.graph.load()?;
            let psi = graph_polynomial(&g)?;
            let psi = psi.with_nvars(g.edge_count().max(1));
            CountJob::new(psi, (0..g.edge_count()).collect())
        }
    }
    .with_budget(a.fields.budget);
    let mut code = EXIT_OK;
    println!("q\tcount");
    parallel::with_threads(a.fields.threads, || {
        for f in &fields {
            match parallel::count_job(&job, f) {
                Ok(n) => println!("{}\t{n}", f.q()),
                Err(e) => {
                    println!("{}\t-", f.q());
                    eprintln!("q = {}: {e}", f.q());
                    code = EXIT_PARTIAL;
                }
            }
        }
    });
    Ok(code)
}

fn cmd_c2(a: &C2Args) -> Result<i32> {
    let fields = a.fields.fields()?;
    let loaded = a.graph.load()?;
    let name = loaded.name().unwrap_or("graph").to_string();
    let g = working_graph(loaded, a.decomplete)?;
    let state = match a.method {
        Method::Direct => None,
        _ => Some(denominator_reduce_with(&g, &ReduceOptions::default())?),
    };
    let mut record = C2Record::new(name);
    let mut code = EXIT_OK;
    parallel::with_threads(a.fields.threads, || -> Result<()> {
        for f in &fields {
            let q = f.q();
            if let Some(st) = &state {
                let t = Instant::now();
                match parallel::c2_from_reduction(st, f, a.fields.budget) {
                    Ok(r) => {
                        let m = C2Method::Reduced { step: st.step, ordering: st.eliminated.clone() };
                        record.insert(q, r, m, Some(t.elapsed().as_secs_f64())).map_err(|e| anyhow!("{e}"))?;
                    }
                    Err(e) => {
                        eprintln!("q = {q} (reduced): {e}");
                        code = EXIT_PARTIAL;
                    }
                }
            }
            if a.method != Method::Reduced {
                let t = Instant::now();
                match parallel::c2_direct(&g, f, a.fields.budget) {
                    Ok(r) => record
                        .insert(q, r, C2Method::Direct, Some(t.elapsed().as_secs_f64()))
                        .map_err(|e| anyhow!("{e}"))?,
                    Err(e) => {
                        eprintln!("q = {q} (direct): {e}");
                        code = EXIT_PARTIAL;
                    }
                }
            }
        }
        Ok(())
    })?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&RecordJson::from(&record))?);
    } else {
        println!("q\tc2\t-c2");
        for (&q, e) in &record.residues {
            println!("{q}\t{}\t{}", e.residue, negate_residue(e.residue, q));
        }
    }
    Ok(code)
}

fn cmd_ancestor(a: &AncestorArgs) -> Result<i32> {
    let g = a.graph.load()?;
    let completed = if is_completed_primitive(&g) { g } else { complete(&g)?.completed };
    let anc = ancestor(&completed)?;
    println!("completed: {}", pipeline::sha_hex(&canonical_form(&completed)?.certificate));
    println!("reduction steps: {}", anc.trace.len());
    println!("prime: {}", anc.is_prime());
    for (cert, comp) in anc.certificates().iter().zip(&anc.components) {
        println!("component {} ({} vertices)", pipeline::sha_hex(cert), comp.vertex_count());
        print!("{}", write_graph(comp));
    }
    Ok(EXIT_OK)
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32> {
    let all = generate_completed_primitive(a.loops)?;
    let primes = all.iter().filter(|g| is_prime_ancestor(g)).count();
    println!("loops {}: {} completed primitive graphs, {} prime ancestors", a.loops, all.len(), primes);
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
        let mut k = 0;
        for (i, g) in all.iter().enumerate() {
            if a.prime_only && !is_prime_ancestor(g) {
                continue;
            }
            let name = format!("L{}-{}", a.loops, i + 1);
            let path = dir.join(format!("{name}.txt"));
            std::fs::write(&path, write_graph(&g.clone().with_name(name))).with_context(|| path.display().to_string())?;
            k += 1;
        }
        eprintln!("wrote {k} files to {}", dir.display());
    }
    Ok(EXIT_OK)
}

fn cmd_classify(a: &ClassifyArgs) -> Result<i32> {
    let record = match (&a.record, &a.minus_c2) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
            match serde_json::from_str::<AncestorFile>(&text) {
                Ok(f) => f.record.to_record(),
                Err(_) => serde_json::from_str::<RecordJson>(&text)?.to_record(),
            }
        }
        (None, Some(minus)) => {
            validate_primes(&a.primes)?;
            if minus.len() != a.primes.len() {
                bail!("{} residues for {} primes", minus.len(), a.primes.len());
            }
            let mut r = C2Record::new("input");
            for (&p, &m) in a.primes.iter().zip(minus) {
                if m >= p {
                    bail!("residue {m} not below {p}");
                }
                r.insert(p, negate_residue(m, p), C2Method::Formula, None).map_err(|e| anyhow!("{e}"))?;
            }
            r
        }
        (None, None) => bail!(ConfigError::NoInputs),
    };
    let bound = record.primes().last().copied().unwrap_or(13).max(13) as usize;
    let mut forms = bundled_newforms(bound);
    if let Some(dir) = &a.newforms {
        forms.extend(load_newform_dir(dir)?);
    }
    let c = classify_sequence(&record, &forms).map_err(|e| anyhow!("{e}"))?;
    println!("{}", c.tag);
    println!("{}", serde_json::to_string_pretty(&ClassificationJson::from(&c))?);
    Ok(EXIT_OK)
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<i32> {
    let config = PipelineConfig {
        builtins: a.builtin.clone(),
        files: a.file.clone(),
        generate: a.generate,
        primes: a.fields.primes.clone(),
        prime_powers: a.fields.prime_powers.clone(),
        budget: a.fields.budget,
        threads: a.fields.threads,
        newform_dir: a.newforms.clone(),
        out_dir: a.out.clone(),
        verify_completion: a.verify_completion,
        classify: !a.no_classify,
        direct_check: a.direct_check,
        node_budget: a.node_budget,
    };
    config.validate()?;
    let report = match pipeline::run(&config) {
        Ok(r) => r,
        Err(pipeline::PipelineError::Config(e)) => return Err(e.into()),
        Err(e) => return Err(anyhow!(e)),
    };
    print!("{}", report.to_tsv());
    for (tag, n) in &report.summary {
        eprintln!("{tag}: {n}");
    }
    if report.failed() > 0 {
        eprintln!("{} graph(s) incomplete; see {}", report.failed(), a.out.join("report.json").display());
    }
    Ok(report.exit_code())
}

/// Whether `a` is a square mod p (zero counts as a square).
pub fn is_square_mod(a: u32, p: u32) -> bool {
    (0..p).any(|x| (x as u64 * x as u64 % p as u64) as u32 == a % p)
}

fn cmd_i101(a: &I101Args) -> Result<i32> {
    let primes: Vec<u32> = match &a.primes {
        Some(ps) => {
            validate_primes(ps)?;
            ps.clone()
        }
        None => (2..=a.max_prime).filter(|&p| is_prime(p as u64)).collect(),
    };
    if a.budget == 0 {
        bail!(ConfigError::ZeroBudget);
    }
    let mut code = EXIT_OK;
    // the table column is -c2, like the residue tables of the report
    println!("p\t-c2\tsquare");
    parallel::with_threads(a.threads, || {
        for &p in &primes {
            let f = field_of_size(p as u64).expect("prime");
            match count_i101_fourfold(&f, a.budget) {
                Ok(c2) => {
                    let v = negate_residue(c2, p);
                    println!("{p}\t{v}\t{}", if is_square_mod(v, p) { "yes" } else { "no" })
                }
                Err(e) => {
                    println!("{p}\t-\t-");
                    eprintln!("p = {p}: {e}");
                    code = EXIT_PARTIAL;
                }
            }
        }
    });
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn infix_form() {
        let c3 = graph_polynomial(&Graph::cycle(3)).unwrap();
        assert_eq!(infix(&c3), "x1 + x2 + x3");
        let p = SparsePoly::parse_canonical_text(2, "-2 x1^2\n1 x2\n-1\n").unwrap();
        assert_eq!(infix(&p), "-2 x1^2 + x2 - 1");
    }

    #[test]
    fn squares() {
        assert!(is_square_mod(4, 7) && is_square_mod(2, 7) && !is_square_mod(3, 7));
        assert!(is_square_mod(0, 3));
    }

    #[test]
    fn nvars_from_text() {
        assert_eq!(implied_nvars("1 x1 x12^2\n-3 x4\n"), 12);
        assert_eq!(implied_nvars("5\n"), 0);
    }
}
