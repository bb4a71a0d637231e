//! Orderly-ish generation of simple 4-regular graphs.
//!
//! Vertices are filled row by row: when vertex `v` is processed it receives
//! all its remaining neighbors among the later vertices. Later vertices
//! whose adjacency to the processed prefix is identical are interchangeable,
//! so neighbors are only ever chosen as a prefix of each such class. The
//! remaining isomorphic duplicates are removed by canonical certificate.

use super::{canonical_form, is_completed_primitive, Graph, GraphError, MAX_CANON_VERTICES};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// A partial adjacency with the first `processed` rows complete. Roots are
/// independent units of work for parallel generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationRoot {
    pub vertex_count: usize,
    pub processed: usize,
    pub edges: Vec<(usize, usize)>,
}

const DEGREE: usize = 4;

struct Filler {
    n: usize,
    adj: Vec<Vec<bool>>,
    deg: Vec<usize>,
}

impl Filler {
    fn from_root(root: &GenerationRoot) -> Self {
        let n = root.vertex_count;
        let mut f = Filler { n, adj: vec![vec![false; n]; n], deg: vec![0; n] };
        for &(u, v) in &root.edges {
            f.set(u, v, true);
        }
        f
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.adj[u][v] = on;
        self.adj[v][u] = on;
        if on {
            self.deg[u] += 1;
            self.deg[v] += 1;
        } else {
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n * DEGREE / 2);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Classes of unprocessed candidates for row `v`, each listed in index
    /// order. Two candidates share a class when their adjacency to `0..v`
    /// agrees.
    fn classes(&self, v: usize) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for w in v + 1..self.n {
            if self.deg[w] >= DEGREE {
                continue;
            }
            match classes
                .iter_mut()
                .find(|c| (0..v).all(|u| self.adj[u][c[0]] == self.adj[u][w]))
            {
                Some(c) => c.push(w),
                None => classes.push(vec![w]),
            }
        }
        classes
    }

    /// Calls `emit` for every completion of rows `v..`.
    fn fill(&mut self, v: usize, emit: &mut dyn FnMut(&Filler)) {
        if v == self.n {
            emit(self);
            return;
        }
        let need = DEGREE - self.deg[v];
        if need == 0 {
            self.fill(v + 1, emit);
            return;
        }
        let classes = self.classes(v);
        let available: usize = classes.iter().map(Vec::len).sum();
        if available < need {
            return;
        }
        let mut take = vec![0usize; classes.len()];
        self.distribute(v, &classes, &mut take, 0, need, emit);
    }

    fn distribute(
        &mut self,
        v: usize,
        classes: &[Vec<usize>],
        take: &mut [usize],
        k: usize,
        left: usize,
        emit: &mut dyn FnMut(&Filler),
    ) {
        if k == classes.len() {
            if left > 0 {
                return;
            }
            let chosen: Vec<usize> = classes
                .iter()
                .zip(take.iter())
                .flat_map(|(c, &t)| c[..t].iter().copied())
                .collect();
            for &w in &chosen {
                self.set(v, w, true);
            }
            if self.feasible(v + 1) {
                self.fill(v + 1, emit);
            }
            for &w in &chosen {
                self.set(v, w, false);
            }
            return;
        }
        let rest: usize = classes[k + 1..].iter().map(Vec::len).sum();
        let lo = left.saturating_sub(rest);
        for t in lo..=left.min(classes[k].len()) {
            take[k] = t;
            self.distribute(v, classes, take, k + 1, left - t, emit);
        }
        take[k] = 0;
    }

    /// Every unprocessed vertex needs enough unprocessed partners.
    fn feasible(&self, from: usize) -> bool {
        let open: Vec<usize> = (from..self.n).filter(|&w| self.deg[w] < DEGREE).collect();
        let total: usize = open.iter().map(|&w| DEGREE - self.deg[w]).sum();
        total % 2 == 0
            && open.iter().all(|&w| {
                let partners = open.iter().filter(|&&x| x != w && !self.adj[w][x]).count();
                DEGREE - self.deg[w] <= partners
            })
    }
}

fn check_size(n: usize) -> Result<(), GraphError> {
    if n > MAX_CANON_VERTICES {
        return Err(GraphError::TooManyVertices { vertices: n, limit: MAX_CANON_VERTICES });
    }
    Ok(())
}

/// Roots after the first two rows are filled. Their union covers every
/// labelled graph reached by the sequential search.
pub fn generation_roots(n: usize) -> Result<Vec<GenerationRoot>, GraphError> {
    check_size(n)?;
    if n <= DEGREE {
        return Ok(Vec::new());
    }
    let depth = 2;
    let start = GenerationRoot { vertex_count: n, processed: 0, edges: Vec::new() };
    let mut partials = Vec::new();
    rows_upto(&mut Filler::from_root(&start), 0, depth, &mut partials);
    Ok(partials
        .into_iter()
        .map(|edges| GenerationRoot { vertex_count: n, processed: depth, edges })
        .collect())
}

fn rows_upto(f: &mut Filler, v: usize, depth: usize, out: &mut Vec<Vec<(usize, usize)>>) {
    if v == depth {
        out.push(f.edges());
        return;
    }
    let need = DEGREE - f.deg[v];
    let classes = f.classes(v);
    let mut choices: Vec<Vec<usize>> = Vec::new();
    enumerate_takes(&classes, 0, need, &mut Vec::new(), &mut choices);
    for chosen in choices {
        for &w in &chosen {
            f.set(v, w, true);
        }
        if f.feasible(v + 1) {
            rows_upto(f, v + 1, depth, out);
        }
        for &w in &chosen {
            f.set(v, w, false);
        }
    }
}

fn enumerate_takes(
    classes: &[Vec<usize>],
    k: usize,
    left: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == classes.len() {
        if left == 0 {
            out.push(acc.clone());
        }
        return;
    }
    for t in 0..=left.min(classes[k].len()) {
        acc.extend_from_slice(&classes[k][..t]);
        enumerate_takes(classes, k + 1, left - t, acc, out);
        acc.truncate(acc.len() - t);
    }
}

/// Canonical forms of every connected simple 4-regular graph reachable from
/// `root`, keyed by certificate.
pub fn generate_from_root(root: &GenerationRoot) -> BTreeMap<Vec<u8>, Graph> {
    let mut f = Filler::from_root(root);
    let mut found = BTreeMap::new();
    let n = root.vertex_count;
    f.fill(root.processed, &mut |f: &Filler| {
        let g = Graph::new(n, f.edges()).expect("indices in range");
        if !g.is_connected() {
            return;
        }
        let cf = canonical_form(&g).expect("size checked");
        found.entry(cf.certificate).or_insert(cf.graph);
    });
    found
}

/// All connected simple 4-regular graphs on `n` vertices up to isomorphism,
/// in canonical form, sorted by certificate.
pub fn generate_regular(n: usize) -> Result<Vec<Graph>, GraphError> {
    let mut all = BTreeMap::new();
    for root in generation_roots(n)? {
        all.append(&mut generate_from_root(&root));
    }
    Ok(all.into_values().collect())
}

/// Completed primitive graphs of loop order `loop_order` (on `loop_order + 2`
/// vertices), sorted by certificate.
pub fn generate_completed_primitive(loop_order: usize) -> Result<Vec<Graph>, GraphError> {
    if !(3..=8).contains(&loop_order) {
        return Err(GraphError::LoopOrderOutOfRange(loop_order));
    }
    Ok(generate_regular(loop_order + 2)?
        .into_iter()
        .filter(is_completed_primitive)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_prime_ancestor;
    use std::collections::BTreeSet;

    /// Every labelled 4-regular graph on `n` vertices, deduplicated by the
    /// minimum adjacency string over all vertex permutations.
    fn brute_force_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        let target = n * 2;
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != target {
                continue;
            }
            let mut deg = vec![0; n];
            let edges: Vec<(usize, usize)> =
                (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            for &(u, v) in &edges {
                deg[u] += 1;
                deg[v] += 1;
            }
            if deg.iter().any(|&d| d != 4) {
                continue;
            }
            let g = Graph::new(n, edges.clone()).unwrap();
            if !g.is_connected() {
                continue;
            }
            let best = perms
                .iter()
                .map(|p| {
                    let mut bits = vec![false; m];
                    for &(u, v) in &edges {
                        let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                        bits[pairs.iter().position(|&e| e == (a, b)).unwrap()] = true;
                    }
                    bits
                })
                .min()
                .unwrap();
            seen.insert(best);
        }
        seen.len()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn small_orders_match_brute_force() {
        for n in 5..=7 {
            assert_eq!(generate_regular(n).unwrap().len(), brute_force_count(n), "n = {n}");
        }
    }

    #[test]
    fn connected_quartic_counts() {
        let counts: Vec<usize> = (5..=10).map(|n| generate_regular(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 16, 59]);
    }

    #[test]
    fn outputs_are_regular_and_distinct() {
        let gs = generate_regular(9).unwrap();
        let certs: BTreeSet<Vec<u8>> =
            gs.iter().map(|g| crate::graph::certificate(g).unwrap()).collect();
        assert_eq!(certs.len(), gs.len());
        assert!(gs.iter().all(|g| g.is_regular(4) && g.is_simple()));
    }

    #[test]
    fn table_two_counts() {
        let mut totals = Vec::new();
        let mut primes = Vec::new();
        for l in 3..=8 {
            let gs = generate_completed_primitive(l).unwrap();
            totals.push(gs.len());
            primes.push(gs.iter().filter(|g| is_prime_ancestor(g)).count());
        }
        assert_eq!(totals, [1, 1, 2, 5, 14, 49]);
        assert_eq!(primes, [1, 0, 0, 1, 4, 10]);
    }

    #[test]
    fn loop_order_guard() {
        assert_eq!(generate_completed_primitive(2), Err(GraphError::LoopOrderOutOfRange(2)));
        assert_eq!(generate_completed_primitive(9), Err(GraphError::LoopOrderOutOfRange(9)));
    }
}
