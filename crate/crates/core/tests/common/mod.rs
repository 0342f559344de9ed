//! Independent oracles: exhaustive searches that share no code with the
//! library's algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use qroute::{ArchitectureGraph, PartialPermutation, WeightedBipartiteGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Token layout: `layout[v]` is the label of the token on `v`, `u8::MAX`
/// for none. Tokens carry their destination as label.
type Layout = Vec<u8>;

const EMPTY: u8 = u8::MAX;

fn start_layout(pi: &PartialPermutation) -> Layout {
    pi.as_slice()
        .iter()
        .map(|t| t.map_or(EMPTY, |t| t as u8))
        .collect()
}

fn solved(layout: &Layout) -> bool {
    layout
        .iter()
        .enumerate()
        .all(|(v, &t)| t == EMPTY || t as usize == v)
}

/// Every matching of `g` with at least one edge.
pub fn all_matchings(g: &ArchitectureGraph) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        edges: &[(usize, usize)],
        i: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == edges.len() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        rec(edges, i + 1, used, cur, out);
        let (u, v) = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push((u, v));
            rec(edges, i + 1, used, cur, out);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(
        g.edges(),
        0,
        &mut vec![false; g.n()],
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn bfs(pi: &PartialPermutation, moves: &[Vec<(usize, usize)>]) -> usize {
    let start = start_layout(pi);
    if solved(&start) {
        return 0;
    }
    let mut seen: HashMap<Layout, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        let d = seen[&cur];
        for m in moves {
            let mut next = cur.clone();
            for &(u, v) in m {
                next.swap(u, v);
            }
            if seen.contains_key(&next) {
                continue;
            }
            if solved(&next) {
                return d + 1;
            }
            seen.insert(next.clone(), d + 1);
            queue.push_back(next);
        }
    }
    unreachable!("connected graphs route every permutation")
}

/// Exact routing number `rt(G, π)`: fewest matchings.
pub fn exact_rt(g: &ArchitectureGraph, pi: &PartialPermutation) -> usize {
    bfs(pi, &all_matchings(g))
}

/// Exact routing size `rs(G, π)`: fewest transpositions.
pub fn exact_rs(g: &ArchitectureGraph, pi: &PartialPermutation) -> usize {
    let moves: Vec<Vec<(usize, usize)>> = g.edges().iter().map(|&e| vec![e]).collect();
    bfs(pi, &moves)
}

fn bfs_all(g: &ArchitectureGraph, moves: &[Vec<(usize, usize)>]) -> HashMap<Vec<u8>, usize> {
    let id: Vec<u8> = (0..g.n() as u8).collect();
    let mut dist = HashMap::from([(id.clone(), 0usize)]);
    let mut queue = VecDeque::from([id]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        for m in moves {
            let mut next = cur.clone();
            for &(u, v) in m {
                next.swap(u, v);
            }
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

/// `rs` of every total permutation at once, by one BFS from the identity.
/// Keys are the destination arrays `t[v] = π(v)`.
pub fn all_total_rs(g: &ArchitectureGraph) -> HashMap<Vec<u8>, usize> {
    let moves: Vec<Vec<(usize, usize)>> = g.edges().iter().map(|&e| vec![e]).collect();
    bfs_all(g, &moves)
}

/// `rt` of every total permutation, keyed like [`all_total_rs`].
pub fn all_total_rt(g: &ArchitectureGraph) -> HashMap<Vec<u8>, usize> {
    bfs_all(g, &all_matchings(g))
}

pub fn key(pi: &PartialPermutation) -> Vec<u8> {
    pi.as_slice().iter().map(|t| t.unwrap() as u8).collect()
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices.
pub fn connected_graphs(n: usize) -> Vec<ArchitectureGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut classes = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let canon = perms
            .iter()
            .map(|p: &Vec<usize>| {
                edges.iter().fold(0u32, |acc, &(u, v)| {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    acc | 1 << index[&(a, b)]
                })
            })
            .min()
            .unwrap();
        if !classes.insert(canon) {
            continue;
        }
        if let Ok(g) = ArchitectureGraph::from_edges(n, &edges) {
            out.push(g);
        }
    }
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

/// Minimum total weight of a perfect matching (left side fully matched),
/// by trying every injection. `None` if there is none.
pub fn brute_min_perfect(b: &WeightedBipartiteGraph) -> Option<f64> {
    let mut w = vec![vec![None::<f64>; b.n_right()]; b.n_left()];
    for &(l, r, x) in b.edges() {
        let cell = &mut w[l][r];
        *cell = Some(cell.map_or(x, |c: f64| c.min(x)));
    }
    fn rec(w: &[Vec<Option<f64>>], l: usize, used: &mut Vec<bool>) -> Option<f64> {
        if l == w.len() {
            return Some(0.0);
        }
        let mut best: Option<f64> = None;
        for r in 0..used.len() {
            let Some(x) = w[l][r] else { continue };
            if used[r] {
                continue;
            }
            used[r] = true;
            if let Some(rest) = rec(w, l + 1, used) {
                let total = x + rest;
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                }
            }
            used[r] = false;
        }
        best
    }
    if b.n_left() != b.n_right() {
        return None;
    }
    rec(&w, 0, &mut vec![false; b.n_right()])
}

/// Size of a maximum matching, by trying every subset of left vertices'
/// choices.
pub fn brute_max_matching(b: &WeightedBipartiteGraph) -> usize {
    let mut adj = vec![Vec::new(); b.n_left()];
    for &(l, r, _) in b.edges() {
        adj[l].push(r);
    }
    fn rec(adj: &[Vec<usize>], l: usize, used: &mut Vec<bool>) -> usize {
        if l == adj.len() {
            return 0;
        }
        let mut best = rec(adj, l + 1, used);
        for &r in &adj[l] {
            if !used[r] {
                used[r] = true;
                best = best.max(1 + rec(adj, l + 1, used));
                used[r] = false;
            }
        }
        best
    }
    rec(&adj, 0, &mut vec![false; b.n_right()])
}

/// A random partial permutation on `n` vertices with about `density` of
/// them mapped.
pub fn random_partial<R: Rng>(n: usize, density: f64, rng: &mut R) -> PartialPermutation {
    let mut src: Vec<usize> = (0..n).collect();
    let mut dst = src.clone();
    src.shuffle(rng);
    dst.shuffle(rng);
    let k = ((n as f64 * density).round() as usize).min(n);
    let pairs: Vec<_> = src.into_iter().zip(dst).take(k).collect();
    PartialPermutation::from_pairs(n, &pairs).unwrap()
}

pub fn random_total<R: Rng>(n: usize, rng: &mut R) -> PartialPermutation {
    random_partial(n, 1.0, rng)
}
