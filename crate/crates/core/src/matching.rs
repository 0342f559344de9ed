//! Bipartite matchings: maximum cardinality (augmenting paths) and minimum
//! weight perfect (Hungarian method).

use crate::error::{Error, Result};

/// A bipartite multigraph with real edge weights.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedBipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedBipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        WeightedBipartiteGraph {
            n_left,
            n_right,
            edges: Vec::new(),
        }
    }

    /// Adds an edge and returns its index.
    pub fn add_edge(&mut self, left: usize, right: usize, weight: f64) -> Result<usize> {
        if left >= self.n_left {
            return Err(Error::VertexOutOfRange {
                vertex: left,
                n: self.n_left,
            });
        }
        if right >= self.n_right {
            return Err(Error::VertexOutOfRange {
                vertex: right,
                n: self.n_right,
            });
        }
        if !weight.is_finite() {
            return Err(Error::InvalidArgument(format!("edge weight {weight}")));
        }
        self.edges.push((left, right, weight));
        Ok(self.edges.len() - 1)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> (usize, usize, f64) {
        self.edges[idx]
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_left];
        for (idx, &(l, _, _)) in self.edges.iter().enumerate() {
            adj[l].push(idx);
        }
        adj
    }
}

/// Maximum cardinality matching, ignoring weights. Returns edge indices
/// ordered by left endpoint.
pub fn max_bipartite_matching(b: &WeightedBipartiteGraph) -> Vec<usize> {
    let adj = b.adjacency();
    let mut match_right: Vec<Option<usize>> = vec![None; b.n_right];
    let mut visited = vec![false; b.n_right];
    for l in 0..b.n_left {
        visited.iter_mut().for_each(|v| *v = false);
        augment(b, &adj, l, &mut match_right, &mut visited);
    }
    let mut out: Vec<usize> = match_right.into_iter().flatten().collect();
    out.sort_by_key(|&e| (b.edges[e].0, e));
    out
}

fn augment(
    b: &WeightedBipartiteGraph,
    adj: &[Vec<usize>],
    l: usize,
    match_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &e in &adj[l] {
        let r = b.edges[e].1;
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match match_right[r] {
            None => true,
            Some(prev) => augment(b, adj, b.edges[prev].0, match_right, visited),
        };
        if free {
            match_right[r] = Some(e);
            return true;
        }
    }
    false
}

/// Minimum weight perfect matching. Among optimal matchings the one whose
/// sorted `(left, right)` pair list is lexicographically smallest is
/// returned; parallel edges resolve to the cheapest, then lowest index.
/// Returns edge indices ordered by left endpoint.
pub fn min_weight_perfect_matching(b: &WeightedBipartiteGraph) -> Result<Vec<usize>> {
    let n = b.n_left;
    if n != b.n_right {
        return Err(Error::NoPerfectMatching);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if max_bipartite_matching(b).len() < n {
        return Err(Error::NoPerfectMatching);
    }

    let mut best: Vec<Option<usize>> = vec![None; n * n];
    for (idx, &(l, r, w)) in b.edges.iter().enumerate() {
        let slot = &mut best[l * n + r];
        match *slot {
            Some(prev) if b.edges[prev].2 <= w => {}
            _ => *slot = Some(idx),
        }
    }

    // Absent cells get a cost no perfect matching over real edges can reach.
    // The uniform offset makes all real costs non-negative.
    let min_w = b.edges.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let max_w = b
        .edges
        .iter()
        .map(|e| e.2)
        .fold(f64::NEG_INFINITY, f64::max);
    let span = max_w - min_w;
    let absent = (span + 1.0) * (n as f64 + 1.0) * 2.0;
    let mut cost = vec![absent; n * n];
    for (cell, e) in best.iter().enumerate() {
        if let Some(e) = *e {
            cost[cell] = b.edges[e].2 - min_w;
        }
    }

    let (opt, _) = hungarian(&cost, n);
    let tol = 1e-9 * (1.0 + opt.abs());

    // Lexicographic refinement: pin each row to the smallest column that
    // still admits an optimum.
    let forbidden = absent * n as f64;
    let mut pinned = cost.clone();
    for row in 0..n {
        let mut fixed = false;
        for col in 0..n {
            if best[row * n + col].is_none() || pinned[row * n + col] >= forbidden {
                continue;
            }
            let mut trial = pinned.clone();
            for c in 0..n {
                if c != col {
                    trial[row * n + c] = forbidden;
                }
            }
            for r in 0..n {
                if r != row {
                    trial[r * n + col] = forbidden;
                }
            }
            let (value, _) = hungarian(&trial, n);
            if value <= opt + tol {
                pinned = trial;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::Internal(
                "Hungarian refinement lost the optimum".into(),
            ));
        }
    }
    let (_, assignment) = hungarian(&pinned, n);
    let mut out = Vec::with_capacity(n);
    for (row, &col) in assignment.iter().enumerate() {
        let e = best[row * n + col].ok_or(Error::NoPerfectMatching)?;
        out.push(e);
    }
    Ok(out)
}

/// Square Hungarian method with potentials. Returns the optimal value and
/// the column assigned to each row.
fn hungarian(cost: &[f64], n: usize) -> (f64, Vec<usize>) {
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    let value = (0..n).map(|i| cost[i * n + assignment[i]]).sum();
    (value, assignment)
}
