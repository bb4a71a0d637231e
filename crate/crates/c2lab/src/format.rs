//! Text formats: graphs, builtin names, newform coefficient tables.

use c2lab_core::classify::NewformTable;
use c2lab_core::graph::{glue_on_triangles, Graph, GraphError};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `vertices N` header")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown builtin `{0}` (try K4, K5, O3, C3, DC3, K5K5 or C9(1,3))")]
    UnknownBuiltin(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// `vertices N`, then one `u v` per edge (0-based), `#` comments and an
/// optional `name ...` line.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut vertices: Option<usize> = None;
    let mut name = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("vertices") {
            if vertices.is_some() {
                return Err(syntax(lineno, "second `vertices` line"));
            }
            let n = rest.trim().parse().map_err(|_| syntax(lineno, "bad vertex count"))?;
            vertices = Some(n);
        } else if let Some(rest) = line.strip_prefix("name") {
            name = Some(rest.trim().to_string());
        } else {
            if vertices.is_none() {
                return Err(FormatError::MissingHeader);
            }
            let mut it = line.split_whitespace();
            let mut endpoint = || -> Result<usize, FormatError> {
                it.next()
                    .ok_or_else(|| syntax(lineno, "expected `u v`"))?
                    .parse()
                    .map_err(|_| syntax(lineno, "endpoint is not a number"))
            };
            let u = endpoint()?;
            let v = endpoint()?;
            if it.next().is_some() {
                return Err(syntax(lineno, "trailing tokens after `u v`"));
            }
            edges.push((u, v));
        }
    }
    let n = vertices.ok_or(FormatError::MissingHeader)?;
    let mut g = Graph::new(n, edges)?;
    g.set_name(name);
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(name) = g.name() {
        out.push_str(&format!("name {name}\n"));
    }
    out.push_str(&format!("vertices {}\n", g.vertex_count()));
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_graph_file(path: &Path) -> Result<Graph, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    let mut g = parse_graph(&text)?;
    if g.name().is_none() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        g.set_name(stem);
    }
    Ok(g)
}

pub const BUILTINS: &[&str] = &["K4", "K5", "O3", "C3", "DC3", "K5K5"];

/// Builtin graphs by name. `Cn(a,b,...)` is the circulant on n vertices.
pub fn builtin(name: &str) -> Result<Graph, FormatError> {
    let g = match name {
        "K4" => Graph::k4(),
        "K5" => Graph::k5(),
        "O3" => Graph::octahedron(),
        "C3" => Graph::cycle(3),
        "DC3" => Graph::double_edge_triangle(),
        // two K5 glued on a triangle: the smallest completed product
        "K5K5" => glue_on_triangles(&Graph::k5(), [0, 1, 2], &Graph::k5(), [0, 1, 2]),
        _ => return parse_circulant(name).ok_or_else(|| FormatError::UnknownBuiltin(name.into()))?,
    };
    Ok(g.with_name(name))
}

fn parse_circulant(name: &str) -> Option<Result<Graph, FormatError>> {
    let rest = name.strip_prefix('C')?;
    let (n, chords) = rest.split_once('(')?;
    let chords = chords.strip_suffix(')')?;
    let n: usize = n.parse().ok()?;
    let chords: Vec<usize> = chords.split(',').map(|c| c.trim().parse().ok()).collect::<Option<_>>()?;
    Some(Graph::circulant(n, &chords).map(|g| g.with_name(name)).map_err(FormatError::from))
}

/// Header `weight W level N label S`, then `p a_p` lines.
pub fn parse_newform(text: &str) -> Result<NewformTable, FormatError> {
    let mut header: Option<(u32, u32, String)> = None;
    let mut coefficients = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        if line.starts_with("weight") {
            let toks: Vec<&str> = line.splitn(6, char::is_whitespace).collect();
            if toks.len() < 6 || toks[2] != "level" || toks[4] != "label" {
                return Err(syntax(lineno, "expected `weight W level N label S`"));
            }
            let w = toks[1].parse().map_err(|_| syntax(lineno, "bad weight"))?;
            let l = toks[3].parse().map_err(|_| syntax(lineno, "bad level"))?;
            header = Some((w, l, toks[5].trim().to_string()));
            continue;
        }
        if header.is_none() {
            return Err(syntax(lineno, "coefficient before header"));
        }
        let (p, a) = line.split_once(char::is_whitespace).ok_or_else(|| syntax(lineno, "expected `p a_p`"))?;
        let p: u32 = p.parse().map_err(|_| syntax(lineno, "bad prime"))?;
        let a: BigInt = a.trim().parse().map_err(|_| syntax(lineno, "bad coefficient"))?;
        coefficients.insert(p, a);
    }
    let (weight, level, label) = header.ok_or_else(|| syntax(0, "missing header"))?;
    Ok(NewformTable { weight, level, label, coefficients })
}

pub fn write_newform(f: &NewformTable) -> String {
    let mut out = format!("weight {} level {} label {}\n", f.weight, f.level, f.label);
    for (p, a) in &f.coefficients {
        out.push_str(&format!("{p} {a}\n"));
    }
    out
}

/// Every `*.txt` / `*.nf` file in `dir`, sorted by file name.
pub fn load_newform_dir(dir: &Path) -> Result<Vec<NewformTable>, FormatError> {
    let io = |source| FormatError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt" || x == "nf"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)
                .map_err(|source| FormatError::Io { path: p.display().to_string(), source })?;
            parse_newform(&text)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "# a comment\nname tri\nvertices 3\n0 1\n1 2 # inline\n\n2 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.name(), Some("tri"));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph("0 1\n"), Err(FormatError::MissingHeader)));
        assert!(matches!(parse_graph("vertices 2\n0 x\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("vertices 2\n0 5\n"), Err(FormatError::Graph(_))));
        assert!(matches!(parse_graph("vertices 2\n0 1 1\n"), Err(FormatError::Syntax { .. })));
    }

    #[test]
    fn builtins_resolve() {
        for name in BUILTINS {
            builtin(name).unwrap();
        }
        let c = builtin("C9(1,3)").unwrap();
        assert!(c.is_regular(4));
        assert_eq!(c.vertex_count(), 9);
        assert!(builtin("K7").is_err());
        assert_eq!(builtin("K5K5").unwrap().vertex_count(), 7);
    }

    #[test]
    fn newform_round_trip() {
        let text = "weight 4 level 13 label 13.4.a.a\n2 -5\n3 -7\n5 -7\n";
        let f = parse_newform(text).unwrap();
        assert_eq!((f.weight, f.level, f.label.as_str()), (4, 13, "13.4.a.a"));
        assert_eq!(f.coefficients[&3], BigInt::from(-7));
        assert_eq!(parse_newform(&write_newform(&f)).unwrap(), f);
        assert!(parse_newform("2 3\n").is_err());
    }
}
