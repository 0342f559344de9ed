use std::collections::VecDeque;
use std::sync::Arc;

use rand::RngCore;

use super::{check_size, Permuter, SwapSchedule};
use crate::error::{Error, Result};
use crate::graph::{ArchitectureGraph, DistanceMatrix};
use crate::perm::PartialPermutation;

/// Counts of the three move kinds performed by one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenSwapStats {
    /// Swaps spent in happy chains.
    pub happy: usize,
    pub no_token: usize,
    pub unhappy: usize,
    /// Total distance of all tokens to their targets before routing.
    pub initial_distance: usize,
}

impl TokenSwapStats {
    pub fn total(&self) -> usize {
        self.happy + self.no_token + self.unhappy
    }
}

/// Partial token swapping, one swap per step.
#[derive(Clone, Debug)]
pub struct TokenSwapper {
    graph: ArchitectureGraph,
}

impl TokenSwapper {
    pub fn new(graph: ArchitectureGraph) -> Self {
        TokenSwapper { graph }
    }

    pub fn route_with_stats(
        &self,
        pi: &PartialPermutation,
    ) -> Result<(SwapSchedule, TokenSwapStats)> {
        check_size(&self.graph, pi)?;
        let dist = self.graph.distances()?;
        let mut state = State {
            g: &self.graph,
            dist,
            target: pi.as_slice().to_vec(),
            swaps: Vec::new(),
            stats: TokenSwapStats::default(),
            parent: vec![usize::MAX; pi.n()],
            depth: vec![0; pi.n()],
            queue: VecDeque::new(),
        };
        state.stats.initial_distance = state.total_distance();
        let budget = 2 * state.stats.initial_distance + 1;
        while !state.resolved() {
            if state.swaps.len() > budget {
                return Err(Error::Internal("token swapping exceeded 2S swaps".into()));
            }
            if let Some(chain) = state.find_happy_chain() {
                for w in chain.windows(2) {
                    state.swap(w[0], w[1]);
                    state.stats.happy += 1;
                }
            } else if let Some((v, u)) = state.find_no_token_swap() {
                state.swap(v, u);
                state.stats.no_token += 1;
            } else if let Some((u, v)) = state.find_unhappy_swap() {
                state.swap(u, v);
                state.stats.unhappy += 1;
            } else {
                return Err(Error::Internal(
                    "no swap available on an unresolved permutation".into(),
                ));
            }
        }
        let steps = state.swaps.iter().map(|&s| vec![s]).collect();
        Ok((SwapSchedule::from_steps(steps), state.stats))
    }
}

impl Permuter for TokenSwapper {
    fn graph(&self) -> &ArchitectureGraph {
        &self.graph
    }

    fn name(&self) -> &'static str {
        "token-swap"
    }

    fn route(&self, pi: &PartialPermutation, _rng: &mut dyn RngCore) -> Result<SwapSchedule> {
        self.route_with_stats(pi).map(|(s, _)| s)
    }
}

struct State<'g> {
    g: &'g ArchitectureGraph,
    dist: Arc<DistanceMatrix>,
    target: Vec<Option<usize>>,
    swaps: Vec<(usize, usize)>,
    stats: TokenSwapStats,
    parent: Vec<usize>,
    depth: Vec<usize>,
    queue: VecDeque<usize>,
}

impl State<'_> {
    fn total_distance(&self) -> usize {
        self.target
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| self.dist.get(v, t)))
            .sum()
    }

    fn resolved(&self) -> bool {
        self.target
            .iter()
            .enumerate()
            .all(|(v, t)| t.is_none_or(|t| t == v))
    }

    fn swap(&mut self, u: usize, v: usize) {
        self.target.swap(u, v);
        self.swaps.push((u, v));
    }

    /// Whether the token on `from` gets closer by stepping to `to`.
    fn wants(&self, from: usize, to: usize) -> bool {
        self.target[from].is_some_and(|t| self.dist.get(to, t) < self.dist.get(from, t))
    }

    /// A chain `v1 v2 ... vl` of token-bearing vertices where the token on
    /// each `v(m+1)` wants to step to `vm` and the token on `v1`, carried to
    /// `vl` by the swaps `(v1 v2) ... (v(l-1) vl)`, ends closer to its
    /// target. Chains that close a cycle (`vl` one step closer for the
    /// token on `v1` and adjacent to it) win, then longer chains.
    fn find_happy_chain(&mut self) -> Option<Vec<usize>> {
        let n = self.g.n();
        for v1 in 0..n {
            let Some(t1) = self.target[v1] else { continue };
            let d1 = self.dist.get(v1, t1);
            if d1 == 0 {
                continue;
            }
            // BFS backwards along "wants to step onto" arcs.
            self.parent.iter_mut().for_each(|p| *p = usize::MAX);
            self.parent[v1] = v1;
            self.depth[v1] = 0;
            self.queue.clear();
            self.queue.push_back(v1);
            let mut best: Option<(bool, usize, usize)> = None;
            while let Some(cur) = self.queue.pop_front() {
                for &w in self.g.neighbors(cur) {
                    if self.parent[w] != usize::MAX || !self.wants(w, cur) {
                        continue;
                    }
                    self.parent[w] = cur;
                    self.depth[w] = self.depth[cur] + 1;
                    self.queue.push_back(w);
                    if self.dist.get(w, t1) < d1 {
                        let closes = self.g.has_edge(v1, w);
                        let key = (closes, self.depth[w], w);
                        let better = match best {
                            None => true,
                            Some((c, d, x)) => {
                                (closes, self.depth[w]) > (c, d)
                                    || ((closes, self.depth[w]) == (c, d) && w < x)
                            }
                        };
                        if better {
                            best = Some(key);
                        }
                    }
                }
            }
            if let Some((_, _, end)) = best {
                let mut chain = vec![end];
                let mut cur = end;
                while cur != v1 {
                    cur = self.parent[cur];
                    chain.push(cur);
                }
                chain.reverse();
                return Some(chain);
            }
        }
        None
    }

    fn find_no_token_swap(&self) -> Option<(usize, usize)> {
        (0..self.g.n()).find_map(|v| {
            self.target[v]?;
            self.g
                .neighbors(v)
                .iter()
                .find(|&&u| self.target[u].is_none() && self.wants(v, u))
                .map(|&u| (v, u))
        })
    }

    fn find_unhappy_swap(&self) -> Option<(usize, usize)> {
        self.g.edges().iter().copied().find(|&(a, b)| {
            let settled = |x: usize| self.target[x] == Some(x);
            (settled(a) && self.wants(b, a)) || (settled(b) && self.wants(a, b))
        })
    }
}
