//! Canonical labeling by colour refinement plus individualization search.
//!
//! Leaves of the search tree are compared by their multiplicity-matrix
//! certificate; the smallest one wins. Automorphisms discovered as equal
//! leaves prune sibling branches that lie in the same orbit of the
//! pointwise stabilizer of the current individualized prefix.

use super::{Graph, GraphError};
use alloc::vec;
use alloc::vec::Vec;

pub const MAX_CANON_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Relabelled graph with edges sorted; name is carried over.
    pub graph: Graph,
    /// `relabel[old] = new`.
    pub relabel: Vec<usize>,
    /// Vertex count followed by the upper triangle of the multiplicity matrix.
    pub certificate: Vec<u8>,
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    let n = g.vertex_count();
    if n > MAX_CANON_VERTICES {
        return Err(GraphError::TooManyVertices { vertices: n, limit: MAX_CANON_VERTICES });
    }
    let adj = g.adjacency_counts();
    let mut search = Search { adj: &adj, best: None, automorphisms: Vec::new() };
    let initial: Vec<u32> = vec![0; n];
    search.run(initial, &mut Vec::new());
    let (certificate, relabel) = search.best.unwrap_or_else(|| (vec![0], Vec::new()));
    let mut edges = Vec::with_capacity(g.edge_count());
    let mut inv = vec![0; n];
    for (old, &new) in relabel.iter().enumerate() {
        inv[new] = old;
    }
    for u in 0..n {
        for v in u..n {
            for _ in 0..adj[inv[u]][inv[v]] {
                edges.push((u, v));
            }
        }
    }
    let mut graph = Graph::new(n, edges).expect("relabelled endpoints in range");
    graph.set_name(g.name().map(Into::into));
    Ok(CanonicalForm { graph, relabel, certificate })
}

pub fn certificate(g: &Graph) -> Result<Vec<u8>, GraphError> {
    canonical_form(g).map(|c| c.certificate)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    Ok(certificate(a)? == certificate(b)?)
}

struct Search<'a> {
    adj: &'a [Vec<u8>],
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let colors = refine(self.adj, colors);
        let n = colors.len();
        let cell_color = first_nonsingleton_cell(&colors);
        let Some(cell_color) = cell_color else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == cell_color).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() {
                let orbit = self.stabilizer_orbits(prefix);
                if tried.iter().any(|&t| orbit[t] == orbit[v]) {
                    continue;
                }
            }
            tried.push(v);
            prefix.push(v);
            self.run(individualize(&colors, v), prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let labeling: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let cert = certificate_for(self.adj, &labeling);
        match &self.best {
            None => self.best = Some((cert, labeling)),
            Some((best_cert, best_lab)) => {
                if cert < *best_cert {
                    self.best = Some((cert, labeling));
                } else if cert == *best_cert {
                    let n = labeling.len();
                    let mut inv_best = vec![0; n];
                    for (v, &l) in best_lab.iter().enumerate() {
                        inv_best[l] = v;
                    }
                    let sigma: Vec<usize> = (0..n).map(|v| inv_best[labeling[v]]).collect();
                    if sigma.iter().enumerate().any(|(i, &s)| i != s) {
                        self.automorphisms.push(sigma);
                    }
                }
            }
        }
    }

    /// Orbit representative per vertex under the automorphisms found so far
    /// that fix every vertex of `prefix`.
    fn stabilizer_orbits(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for sigma in &self.automorphisms {
            if prefix.iter().any(|&p| sigma[p] != p) {
                continue;
            }
            for (v, &w) in sigma.iter().enumerate() {
                let a = find(&mut parent, v);
                let b = find(&mut parent, w);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }
}

fn certificate_for(adj: &[Vec<u8>], labeling: &[usize]) -> Vec<u8> {
    let n = adj.len();
    let mut inv = vec![0; n];
    for (v, &l) in labeling.iter().enumerate() {
        inv[l] = v;
    }
    let mut cert = Vec::with_capacity(1 + n * (n + 1) / 2);
    cert.push(n as u8);
    for u in 0..n {
        for v in u..n {
            cert.push(adj[inv[u]][inv[v]]);
        }
    }
    cert
}

fn first_nonsingleton_cell(colors: &[u32]) -> Option<u32> {
    let n = colors.len() as u32;
    let mut count = vec![0u32; colors.len()];
    for &c in colors {
        count[c as usize] += 1;
    }
    (0..n).find(|&c| count[c as usize] > 1)
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let cv = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(w, &c)| {
            if c < cv || w == v {
                2 * c
            } else {
                2 * c + 1
            }
        })
        .collect()
}

/// Equitable refinement. Returned colours are dense ranks `0..k`, ordered
/// compatibly with the input colours.
fn refine(adj: &[Vec<u8>], colors: Vec<u32>) -> Vec<u32> {
    let n = adj.len();
    let mut colors = rank(&colors.iter().map(|&c| (c, Vec::new())).collect::<Vec<_>>());
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8)> = (0..n)
                    .filter(|&w| adj[v][w] > 0)
                    .map(|w| (colors[w], adj[v][w]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn rank(sigs: &[(u32, Vec<(u32, u8)>)]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut out = vec![0u32; sigs.len()];
    let mut r = 0u32;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && sigs[order[i - 1]] != sigs[v] {
            r += 1;
        }
        out[v] = r;
    }
    out
}

fn count_classes(colors: &[u32]) -> u32 {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force certificate: minimum over all vertex permutations.
    fn brute_certificate(g: &Graph) -> Vec<u8> {
        let n = g.vertex_count();
        let adj = g.adjacency_counts();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = certificate_for(&adj, &perm);
        // Heap's algorithm
        let mut c = vec![0usize; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let cert = certificate_for(&adj, &perm);
                if cert < best {
                    best = cert;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    #[test]
    fn k5_edge_orders_agree() {
        let a = Graph::k5();
        let mut e = a.edges().to_vec();
        e.reverse();
        let b = Graph::new(5, e).unwrap().relabel(&[3, 1, 4, 0, 2]);
        assert_eq!(certificate(&a).unwrap(), certificate(&b).unwrap());
    }

    #[test]
    fn k5_and_octahedron_differ() {
        assert!(!is_isomorphic(&Graph::k5(), &Graph::octahedron()).unwrap());
    }

    #[test]
    fn octahedron_is_circulant_six() {
        let c6 = Graph::circulant(6, &[1, 2]).unwrap();
        assert!(is_isomorphic(&c6, &Graph::octahedron()).unwrap());
    }

    #[test]
    fn canonical_form_is_a_relabelling() {
        let g = Graph::circulant(7, &[1, 3]).unwrap();
        let cf = canonical_form(&g).unwrap();
        assert_eq!(g.relabel(&cf.relabel).normalized().edges(), cf.graph.edges());
    }

    #[test]
    fn multigraph_certificates() {
        let t = Graph::double_edge_triangle();
        let single = Graph::cycle(3);
        assert!(!is_isomorphic(&t, &single).unwrap());
        let t2 = Graph::new(3, alloc::vec![(2, 1), (0, 2), (1, 2), (0, 1), (2, 0), (1, 0)]).unwrap();
        assert!(is_isomorphic(&t, &t2).unwrap());
    }

    #[test]
    fn matches_permutation_brute_force() {
        let graphs = [
            Graph::k4(),
            Graph::k5(),
            Graph::octahedron(),
            Graph::circulant(7, &[1, 2]).unwrap(),
            Graph::circulant(7, &[1, 3]).unwrap(),
            Graph::new(6, alloc::vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
                .unwrap(),
        ];
        let mut all = Vec::new();
        for (k, g) in graphs.iter().enumerate() {
            let n = g.vertex_count();
            all.push(g.clone());
            let mut perm: Vec<usize> = (0..n).collect();
            perm.rotate_left(k % n + 1);
            perm.swap(0, n - 1);
            all.push(g.relabel(&perm));
        }
        let fast: Vec<Vec<u8>> = all.iter().map(|g| certificate(g).unwrap()).collect();
        let slow: Vec<Vec<u8>> = all.iter().map(brute_certificate).collect();
        for i in 0..all.len() {
            for j in 0..all.len() {
                assert_eq!(fast[i] == fast[j], slow[i] == slow[j], "pair {i},{j}");
            }
        }
    }

    #[test]
    fn size_guard() {
        let g = Graph::cycle(17);
        assert!(matches!(canonical_form(&g), Err(GraphError::TooManyVertices { .. })));
    }
}
