//! Undirected multigraphs and the completion / product / double-triangle
//! calculus on completed primitive graphs.

mod ancestor;
mod canon;
mod completion;
mod divergence;
mod double_triangle;
mod generate;
mod product;

pub use ancestor::{ancestor, ancestor_with, is_prime_ancestor, AncestorResult, ReductionStep};
pub use canon::{canonical_form, certificate, is_isomorphic, CanonicalForm, MAX_CANON_VERTICES};
pub use completion::{complete, decomplete, is_completed_primitive, Completion};
pub use divergence::{is_primitive_divergent, MAX_DIVERGENCE_EDGES};
pub use double_triangle::{double_triangles, dt_expand_at, dt_reduce, dt_reduce_at, DoubleTriangle};
pub use generate::{
    generate_completed_primitive, generate_regular, generation_roots, generate_from_root,
    GenerationRoot,
};
pub use product::{glue_on_triangles, split_product, three_vertex_separators};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by graph construction and the graph calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    EndpointOutOfRange { edge: usize, vertex: usize, vertex_count: usize },
    NotConnected,
    TooManyEdges { edges: usize, limit: usize },
    TooManyVertices { vertices: usize, limit: usize },
    DegreeTooLarge { vertex: usize, degree: usize },
    DegreeDeficit { deficit: usize },
    InvalidCirculant(String),
    LoopOrderOutOfRange(usize),
    /// A double-triangle rewiring produced a graph that is not completed primitive.
    DtBroken,
    VertexOutOfRange(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EndpointOutOfRange { edge, vertex, vertex_count } => write!(
                f,
                "edge {edge} has endpoint {vertex} but the graph has {vertex_count} vertices"
            ),
            GraphError::NotConnected => write!(f, "graph is not connected"),
            GraphError::TooManyEdges { edges, limit } => {
                write!(f, "graph has {edges} edges, limit is {limit}")
            }
            GraphError::TooManyVertices { vertices, limit } => {
                write!(f, "graph has {vertices} vertices, limit is {limit}")
            }
            GraphError::DegreeTooLarge { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree} > 4")
            }
            GraphError::DegreeDeficit { deficit } => {
                write!(f, "total degree deficit is {deficit}, completion needs exactly 4")
            }
            GraphError::InvalidCirculant(msg) => write!(f, "invalid circulant: {msg}"),
            GraphError::LoopOrderOutOfRange(l) => {
                write!(f, "loop order {l} outside the supported range 3..=8")
            }
            GraphError::DtBroken => {
                write!(f, "double-triangle reduction left the completed primitive class")
            }
            GraphError::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An undirected multigraph. Edge `i` carries the variable `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    name: Option<String>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: i,
                        vertex: w,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Graph { vertex_count, edges, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of `v`; a self-loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Multiplicity matrix: `m[u][v]` counts edges between `u` and `v`.
    pub fn adjacency_counts(&self) -> Vec<Vec<u8>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0u8; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    /// Neighbors of `v` with multiplicity, in edge order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a == u && b == v) || (a == v && b == u))
    }

    /// No multi-edges and no self-loops.
    pub fn is_simple(&self) -> bool {
        let m = self.adjacency_counts();
        (0..self.vertex_count).all(|u| m[u][u] == 0 && m[u].iter().all(|&c| c <= 1))
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.degrees().iter().all(|&d| d == degree)
    }

    /// Connected components as a vertex labelling; isolated vertices count.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        component_labels_masked(self.vertex_count, &self.edges, |_| true)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().0
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.component_count() == 1
    }

    /// First Betti number `E - V + C`.
    pub fn loop_number(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertex_count
    }

    /// Removes vertex `v` and its edges; higher vertices shift down by one.
    /// The surviving edges keep their relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange(v));
        }
        let shift = |w: usize| if w > v { w - 1 } else { w };
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (shift(a), shift(b)))
            .collect();
        Ok(Graph { vertex_count: self.vertex_count - 1, edges, name: None })
    }

    /// Removes the listed edges, keeping the order of the rest.
    pub fn delete_edges(&self, drop: &[usize]) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, &e)| e)
            .collect();
        Graph { vertex_count: self.vertex_count, edges, name: None }
    }

    /// Contracts edge `e` (its endpoints merge into the smaller index).
    pub fn contract_edge(&self, e: usize) -> Graph {
        let (a, b) = self.edges[e];
        let (keep, gone) = if a <= b { (a, b) } else { (b, a) };
        let map = |w: usize| {
            let w = if w == gone { keep } else { w };
            if w > gone {
                w - 1
            } else {
                w
            }
        };
        let n = if keep == gone { self.vertex_count } else { self.vertex_count - 1 };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(u, v))| if keep == gone { (u, v) } else { (map(u), map(v)) })
            .collect();
        Graph { vertex_count: n, edges, name: None }
    }

    /// Applies `perm[old] = new` to every endpoint, keeping edge order.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Graph { vertex_count: self.vertex_count, edges, name: self.name.clone() }
    }

    /// Returns a copy whose edges are sorted with `u <= v` per edge.
    pub fn normalized(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        Graph { vertex_count: self.vertex_count, edges, name: self.name.clone() }
    }

    pub fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Graph { vertex_count: n, edges, name: None }
    }

    pub fn cycle(n: usize) -> Graph {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph { vertex_count: n, edges, name: None }
    }

    pub fn k4() -> Graph {
        Graph::complete_graph(4).with_name("K4")
    }

    pub fn k5() -> Graph {
        Graph::complete_graph(5).with_name("K5")
    }

    /// Octahedron: vertex `i` is antipodal to `i + 3`.
    pub fn octahedron() -> Graph {
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if b != a + 3 {
                    edges.push((a, b));
                }
            }
        }
        Graph { vertex_count: 6, edges, name: Some("O3".into()) }
    }

    /// Triangle whose sides are all doubled.
    pub fn double_edge_triangle() -> Graph {
        Graph {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)],
            name: Some("DC3".into()),
        }
    }

    /// Circulant graph on `n` vertices with edges `{i, i + c mod n}`.
    /// A chord `c` with `2c = n` contributes a single edge per antipodal pair.
    pub fn circulant(n: usize, chords: &[usize]) -> Result<Graph, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidCirculant(alloc::format!("n = {n} too small")));
        }
        let mut seen: Vec<usize> = Vec::new();
        for &c in chords {
            let r = c % n;
            let canon = r.min(n - r);
            if r == 0 {
                return Err(GraphError::InvalidCirculant(alloc::format!(
                    "chord {c} is 0 mod {n}"
                )));
            }
            if seen.contains(&canon) {
                return Err(GraphError::InvalidCirculant(alloc::format!(
                    "chord {c} duplicates an earlier chord mod {n}"
                )));
            }
            seen.push(canon);
        }
        let mut edges = Vec::new();
        for &c in &seen {
            let count = if 2 * c == n { n / 2 } else { n };
            for i in 0..count {
                edges.push((i, (i + c) % n));
            }
        }
        let name = {
            let mut s = alloc::format!("C{n}");
            for (i, c) in seen.iter().enumerate() {
                s.push(if i == 0 { '_' } else { ',' });
                s.push_str(&alloc::format!("{c}"));
            }
            s
        };
        Ok(Graph { vertex_count: n, edges, name: Some(name) })
    }
}

/// Union-find component labelling of the edges accepted by `keep`.
pub(crate) fn component_labels_masked(
    n: usize,
    edges: &[(usize, usize)],
    mut keep: impl FnMut(usize) -> bool,
) -> (usize, Vec<usize>) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if keep(i) {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[v] = label[r];
    }
    (next, out)
}

/// Components of the graph induced on the vertices with `alive[v]`.
pub(crate) fn components_without(g: &Graph, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let (_, labels) = component_labels_masked(n, g.edges(), |i| {
        let (a, b) = g.edges()[i];
        alive[a] && alive[b]
    });
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in (0..n).filter(|&v| alive[v]) {
        match groups.iter_mut().find(|(l, _)| *l == labels[v]) {
            Some((_, vs)) => vs.push(v),
            None => groups.push((labels[v], vec![v])),
        }
    }
    groups.into_iter().map(|(_, vs)| vs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_numbers() {
        assert_eq!(Graph::cycle(3).loop_number(), 1);
        assert_eq!(Graph::k4().loop_number(), 3);
        assert_eq!(Graph::k5().loop_number(), 6);
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.loop_number(), 0);
        assert_eq!(two.component_count(), 2);
    }

    #[test]
    fn rejects_bad_endpoint() {
        assert!(matches!(
            Graph::new(2, vec![(0, 2)]),
            Err(GraphError::EndpointOutOfRange { edge: 0, vertex: 2, .. })
        ));
    }

    #[test]
    fn circulants() {
        let k5 = Graph::circulant(5, &[1, 2]).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.is_simple() && k5.is_regular(4));
        let c9 = Graph::circulant(9, &[1, 3]).unwrap();
        assert_eq!(c9.vertex_count(), 9);
        assert!(c9.is_regular(4) && c9.is_simple());
        assert!(Graph::circulant(6, &[1, 7]).is_err());
        assert!(Graph::circulant(6, &[6]).is_err());
        // 8 and 2 coincide mod 10 up to sign
        assert!(Graph::circulant(10, &[2, 8]).is_err());
    }

    #[test]
    fn deletion_and_contraction() {
        let k4 = Graph::k4();
        let d = k4.delete_edges(&[0]);
        assert_eq!(d.edge_count(), 5);
        let c = k4.contract_edge(0);
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edge_count(), 5);
        let w = Graph::octahedron().delete_vertex(0).unwrap();
        assert_eq!((w.vertex_count(), w.edge_count()), (5, 8));
    }
}
