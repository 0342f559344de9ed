//! Architecture graphs.
//!
//! Vertices are dense indices `0..n`. Hierarchical products
//! `Π_v(G1, G2)` flatten vertex `(i, j)` to `i * n2 + j`: index `i` picks the
//! copy of `G2` (a *column*), index `j` the position inside it (a *row*).

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Structural tag of an architecture graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArchKind {
    Path,
    Complete,
    /// `P_rows × P_cols`, built as `Π_1(P_rows, P_cols)`.
    Grid {
        rows: usize,
        cols: usize,
    },
    /// `Mod(modules, size) = Π_{e1}(K_modules, K_size)`.
    Modular {
        modules: usize,
        size: usize,
    },
    Hierarchical(Arc<HierarchicalSpec>),
    Generic,
}

/// Factors of a generalized hierarchical product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchicalSpec {
    pub outer: ArchitectureGraph,
    pub inner: ArchitectureGraph,
    /// Which positions of the inner graph carry a copy of the outer graph.
    pub mask: Vec<bool>,
}

impl HierarchicalSpec {
    pub fn hamming_weight(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_cartesian(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }
}

/// A simple undirected graph with a lazily computed distance matrix.
#[derive(Clone)]
pub struct ArchitectureGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    kind: ArchKind,
    distances: OnceLock<Result<Arc<DistanceMatrix>>>,
}

impl PartialEq for ArchitectureGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.kind == other.kind
    }
}

impl Eq for ArchitectureGraph {}

impl fmt::Debug for ArchitectureGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArchitectureGraph")
            .field("n", &self.n)
            .field("kind", &self.kind_name())
            .field("edges", &self.edges)
            .finish()
    }
}

impl ArchitectureGraph {
    fn build(n: usize, mut edges: Vec<(usize, usize)>, kind: ArchKind) -> Result<Self> {
        for e in edges.iter_mut() {
            if e.0 >= n || e.1 >= n {
                return Err(Error::InvalidArchitecture(format!(
                    "edge ({}, {}) out of range for {n} vertices",
                    e.0, e.1
                )));
            }
            if e.0 == e.1 {
                return Err(Error::InvalidArchitecture(format!("self-loop at {}", e.0)));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in adjacency.iter_mut() {
            nb.sort_unstable();
        }
        Ok(ArchitectureGraph {
            n,
            edges,
            adjacency,
            kind,
            distances: OnceLock::new(),
        })
    }

    fn build_connected(n: usize, edges: Vec<(usize, usize)>, kind: ArchKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArchitecture("empty graph".into()));
        }
        let g = Self::build(n, edges, kind)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// A connected generic graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build_connected(n, edges.to_vec(), ArchKind::Generic)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::build_connected(n, edges, ArchKind::Path)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::build_connected(n, edges, ArchKind::Complete)
    }

    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let edges = product_edges(&Self::path(rows)?, &Self::path(cols)?, &vec![true; cols]);
        Self::build_connected(rows * cols, edges, ArchKind::Grid { rows, cols })
    }

    pub fn modular(modules: usize, size: usize) -> Result<Self> {
        let mut mask = vec![false; size];
        if let Some(first) = mask.first_mut() {
            *first = true;
        }
        let edges = product_edges(&Self::complete(modules)?, &Self::complete(size)?, &mask);
        Self::build_connected(modules * size, edges, ArchKind::Modular { modules, size })
    }

    /// The generalized hierarchical product `Π_mask(outer, inner)`.
    pub fn hierarchical(
        outer: ArchitectureGraph,
        inner: ArchitectureGraph,
        mask: Vec<bool>,
    ) -> Result<Self> {
        if mask.len() != inner.n() {
            return Err(Error::InvalidArchitecture(format!(
                "mask has length {} but inner graph has {} vertices",
                mask.len(),
                inner.n()
            )));
        }
        if !mask.iter().any(|&b| b) {
            return Err(Error::InvalidArchitecture("mask must be nonzero".into()));
        }
        let n = outer.n() * inner.n();
        let edges = product_edges(&outer, &inner, &mask);
        let spec = HierarchicalSpec { outer, inner, mask };
        Self::build_connected(n, edges, ArchKind::Hierarchical(Arc::new(spec)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn kind(&self) -> &ArchKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ArchKind::Path => "path",
            ArchKind::Complete => "complete",
            ArchKind::Grid { .. } => "grid",
            ArchKind::Modular { .. } => "modular",
            ArchKind::Hierarchical(_) => "hierarchical",
            ArchKind::Generic => "generic",
        }
    }

    /// Factor view of grid, modular and hierarchical graphs.
    pub fn hierarchy(&self) -> Option<HierarchicalSpec> {
        match &self.kind {
            ArchKind::Grid { rows, cols } => Some(HierarchicalSpec {
                outer: Self::path(*rows).ok()?,
                inner: Self::path(*cols).ok()?,
                mask: vec![true; *cols],
            }),
            ArchKind::Modular { modules, size } => {
                let mut mask = vec![false; *size];
                mask[0] = true;
                Some(HierarchicalSpec {
                    outer: Self::complete(*modules).ok()?,
                    inner: Self::complete(*size).ok()?,
                    mask,
                })
            }
            ArchKind::Hierarchical(spec) => Some(spec.as_ref().clone()),
            _ => None,
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// All-pairs hop distances, computed once and cached.
    pub fn distances(&self) -> Result<Arc<DistanceMatrix>> {
        self.distances
            .get_or_init(|| DistanceMatrix::compute(self).map(Arc::new))
            .clone()
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.distances().expect("connected graph").get(u, v)
    }

    pub fn diameter(&self) -> Result<usize> {
        let d = self.distances()?;
        Ok((0..self.n)
            .flat_map(|u| (0..self.n).map(move |v| (u, v)))
            .map(|(u, v)| d.get(u, v))
            .max()
            .unwrap_or(0))
    }

    /// `G[U]`: the vertex-induced subgraph, re-indexed in ascending order of
    /// `vertices`. Returns the subgraph and the map from new to old indices.
    /// The result may be disconnected.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (ArchitectureGraph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.iter().copied().filter(|&v| v < self.n).collect();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        let g = Self::build(keep.len(), edges, ArchKind::Generic).expect("induced edges are valid");
        (g, keep)
    }

    /// Greedy maximal matching over the lexicographically sorted edge list,
    /// ignoring every vertex flagged in `excluded`.
    pub fn maximal_matching(&self, excluded: &[bool]) -> Vec<(usize, usize)> {
        let mut used = vec![false; self.n];
        for (v, &ex) in excluded.iter().enumerate().take(self.n) {
            used[v] = ex;
        }
        let mut matching = Vec::new();
        for &(u, v) in &self.edges {
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                matching.push((u, v));
            }
        }
        matching
    }

    /// Shortest path from `from` to `to` (inclusive), breaking ties toward
    /// the lowest-index predecessor.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut pred = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        pred[to] = to;
        queue.push_back(to);
        // BFS from the target; neighbor lists are sorted, so each vertex's
        // successor toward `to` is its lowest-index neighbor one step closer.
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if pred[w] == usize::MAX {
                    pred[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if pred[from] == usize::MAX {
            return None;
        }
        let dist = self.distances().ok()?;
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let next = self.adjacency[cur]
                .iter()
                .copied()
                .find(|&w| dist.get(w, to) + 1 == dist.get(cur, to))?;
            path.push(next);
            cur = next;
        }
        Some(path)
    }
}

fn product_edges(
    outer: &ArchitectureGraph,
    inner: &ArchitectureGraph,
    mask: &[bool],
) -> Vec<(usize, usize)> {
    let n2 = inner.n();
    let mut edges = Vec::new();
    for &(a, b) in outer.edges() {
        for (j, &on) in mask.iter().enumerate() {
            if on {
                edges.push((a * n2 + j, b * n2 + j));
            }
        }
    }
    for i in 0..outer.n() {
        for &(a, b) in inner.edges() {
            edges.push((i * n2 + a, i * n2 + b));
        }
    }
    edges
}

/// Exact all-pairs hop distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    /// One BFS per source vertex.
    pub fn compute(g: &ArchitectureGraph) -> Result<Self> {
        let n = g.n();
        let mut data = vec![u32::MAX; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut data[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in g.neighbors(u) {
                    if row[w] == u32::MAX {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
            if row.contains(&u32::MAX) {
                return Err(Error::Disconnected);
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.data[u * self.n + v] as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Parses an architecture spec string: `path:N`, `complete:N`, `grid:RxC`,
/// `modular:MxK` or `hier:<file>`.
pub fn parse_arch_spec(spec: &str) -> Result<ArchitectureGraph> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("bad architecture spec {spec:?}")))?;
    let num = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::InvalidArgument(format!("bad size {s:?} in {spec:?}")))
    };
    let pair = |s: &str| -> Result<(usize, usize)> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::InvalidArgument(format!("expected AxB in {spec:?}")))?;
        Ok((num(a)?, num(b)?))
    };
    match kind.trim() {
        "path" => ArchitectureGraph::path(num(arg)?),
        "complete" => ArchitectureGraph::complete(num(arg)?),
        "grid" => {
            let (r, c) = pair(arg)?;
            ArchitectureGraph::grid(r, c)
        }
        "modular" => {
            let (m, k) = pair(arg)?;
            ArchitectureGraph::modular(m, k)
        }
        "hier" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::InvalidArgument(format!("reading {arg}: {e}")))?;
            parse_hierarchical(&text)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown architecture kind {other:?}"
        ))),
    }
}

/// Parses the line-oriented hierarchical product format:
///
/// ```text
/// # comment
/// outer 2          # vertex count of G1
/// outer-edges 0-1
/// inner 3          # vertex count of G2
/// inner-edges 0-1 1-2
/// mask 1 0 1
/// ```
///
/// `outer-edges`/`inner-edges` may repeat; edges are `a-b` tokens.
pub fn parse_hierarchical(text: &str) -> Result<ArchitectureGraph> {
    let mut outer_n = None;
    let mut inner_n = None;
    let mut outer_edges = Vec::new();
    let mut inner_edges = Vec::new();
    let mut mask = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::InvalidArgument(format!("line {}: {msg}", idx + 1));
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        let parse_edges = |out: &mut Vec<(usize, usize)>| -> Result<()> {
            for tok in &rest {
                let (a, b) = tok.split_once('-').ok_or_else(|| bad("edge must be a-b"))?;
                let a = a.parse().map_err(|_| bad("bad vertex"))?;
                let b = b.parse().map_err(|_| bad("bad vertex"))?;
                out.push((a, b));
            }
            Ok(())
        };
        match key {
            "outer" | "inner" => {
                let n: usize = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected a vertex count"))?;
                if key == "outer" {
                    outer_n = Some(n);
                } else {
                    inner_n = Some(n);
                }
            }
            "outer-edges" => parse_edges(&mut outer_edges)?,
            "inner-edges" => parse_edges(&mut inner_edges)?,
            "mask" => {
                let bits: Result<Vec<bool>> = rest
                    .iter()
                    .flat_map(|s| s.chars())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad("mask entries must be 0 or 1")),
                    })
                    .collect();
                mask = Some(bits?);
            }
            _ => return Err(bad(&format!("unknown key {key:?}"))),
        }
    }
    let missing =
        |what: &str| Error::InvalidArgument(format!("hierarchical spec is missing {what}"));
    let outer =
        ArchitectureGraph::from_edges(outer_n.ok_or_else(|| missing("outer"))?, &outer_edges)?;
    let inner =
        ArchitectureGraph::from_edges(inner_n.ok_or_else(|| missing("inner"))?, &inner_edges)?;
    let outer = retag(outer);
    let inner = retag(inner);
    ArchitectureGraph::hierarchical(outer, inner, mask.ok_or_else(|| missing("mask"))?)
}

/// Recognizes generic graphs that are really paths or complete graphs, so
/// the specialized permuters apply to them.
pub fn retag(g: ArchitectureGraph) -> ArchitectureGraph {
    let n = g.n();
    let is_index_path = g.edges().len() + 1 == n && g.edges().iter().all(|&(u, v)| v == u + 1);
    if is_index_path {
        return ArchitectureGraph::path(n).unwrap_or(g);
    }
    if g.edges().len() == n * (n - 1) / 2 {
        return ArchitectureGraph::complete(n).unwrap_or(g);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_edges() {
        let g = ArchitectureGraph::path(3).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn hierarchical_101_of_p2_p3() {
        let g = ArchitectureGraph::hierarchical(
            ArchitectureGraph::path(2).unwrap(),
            ArchitectureGraph::path(3).unwrap(),
            vec![true, false, true],
        )
        .unwrap();
        // Two copies of P3 plus links at inner positions 0 and 2.
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 5), (3, 4), (4, 5)]);
    }

    #[test]
    fn modular_2x2() {
        let g = ArchitectureGraph::modular(2, 2).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (2, 3)]);
        assert_eq!(g.distance(1, 3), 3);
    }

    #[test]
    fn grid_matches_hierarchy() {
        let g = ArchitectureGraph::grid(3, 4).unwrap();
        assert_eq!(g.edges().len(), 3 * 3 + 2 * 4);
        let h = g.hierarchy().unwrap();
        assert_eq!(h.hamming_weight(), 4);
        let again = ArchitectureGraph::hierarchical(h.outer, h.inner, h.mask).unwrap();
        assert_eq!(again.edges(), g.edges());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ArchitectureGraph::path(0).is_err());
        assert_eq!(
            ArchitectureGraph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected)
        );
        assert!(ArchitectureGraph::hierarchical(
            ArchitectureGraph::path(2).unwrap(),
            ArchitectureGraph::path(2).unwrap(),
            vec![false, false]
        )
        .is_err());
        assert!(ArchitectureGraph::from_edges(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn induced_subgraphs() {
        let p3 = ArchitectureGraph::path(3).unwrap();
        let (whole, map) = p3.induced_subgraph(&[0, 1, 2]);
        assert_eq!(whole.edges(), p3.edges());
        assert_eq!(map, vec![0, 1, 2]);
        let (ends, map) = p3.induced_subgraph(&[0, 2]);
        assert!(ends.edges().is_empty());
        assert_eq!(map, vec![0, 2]);
        assert!(!ends.is_connected());
        let grid = ArchitectureGraph::grid(2, 2).unwrap();
        let (sub, _) = grid.induced_subgraph(&[0, 1, 2]);
        assert_eq!(sub.edges(), &[(0, 1), (0, 2)]);
        assert_eq!(sub.diameter().unwrap(), 2);
    }

    #[test]
    fn distances() {
        assert_eq!(ArchitectureGraph::path(4).unwrap().distance(0, 3), 3);
        let k5 = ArchitectureGraph::complete(5).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(k5.distance(u, v), usize::from(u != v));
            }
        }
        let (two, _) = ArchitectureGraph::path(3)
            .unwrap()
            .induced_subgraph(&[0, 2]);
        assert_eq!(two.distances(), Err(Error::Disconnected));
    }

    #[test]
    fn triangle_inequality_on_products() {
        for g in [
            ArchitectureGraph::grid(3, 4).unwrap(),
            ArchitectureGraph::modular(3, 3).unwrap(),
        ] {
            let d = g.distances().unwrap();
            let n = g.n();
            for u in 0..n {
                assert_eq!(d.get(u, u), 0);
                for v in 0..n {
                    assert_eq!(d.get(u, v), d.get(v, u));
                    if u != v {
                        assert!(d.get(u, v) >= 1);
                    }
                    for w in 0..n {
                        assert!(d.get(u, w) <= d.get(u, v) + d.get(v, w));
                    }
                }
            }
        }
    }

    #[test]
    fn maximal_matchings() {
        let p3 = ArchitectureGraph::path(3).unwrap();
        assert_eq!(p3.maximal_matching(&[]), vec![(0, 1)]);
        assert!(p3.maximal_matching(&[false, true, false]).is_empty());
        let k4 = ArchitectureGraph::complete(4).unwrap();
        assert_eq!(k4.maximal_matching(&[]), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn shortest_path_prefers_low_indices() {
        let g = ArchitectureGraph::grid(2, 2).unwrap();
        assert_eq!(g.shortest_path(0, 3).unwrap(), vec![0, 1, 3]);
        assert_eq!(g.shortest_path(2, 2).unwrap(), vec![2]);
    }

    #[test]
    fn arch_spec_strings() {
        assert_eq!(parse_arch_spec("path:4").unwrap().n(), 4);
        assert_eq!(parse_arch_spec("grid:2x3").unwrap().kind_name(), "grid");
        assert_eq!(parse_arch_spec("modular:3x3").unwrap().n(), 9);
        assert!(parse_arch_spec("torus:3").is_err());
        assert!(parse_arch_spec("grid:0x3").is_err());
    }

    #[test]
    fn hierarchical_file_format() {
        let text =
            "# P2 over P3\nouter 2\nouter-edges 0-1\ninner 3\ninner-edges 0-1 1-2\nmask 1 0 1\n";
        let g = parse_hierarchical(text).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edges().len(), 6);
        let h = g.hierarchy().unwrap();
        assert_eq!(h.outer.kind(), &ArchKind::Path);
        assert!(parse_hierarchical("outer 2\n").is_err());
    }
}
