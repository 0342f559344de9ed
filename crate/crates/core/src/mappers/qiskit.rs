use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{simple_size_map, CostEvaluator, MapContext, Placement};
use crate::error::Result;
use crate::graph::{ArchitectureGraph, DistanceMatrix};

pub const QISKIT_MAPPER_TRIALS: usize = 40;

/// Randomly perturbed squared distances, `(1 + N(0, 1/|V|)) · d(u, v)²`.
pub(crate) struct NoisyDistances {
    n: usize,
    w: Vec<f64>,
}

impl NoisyDistances {
    pub(crate) fn sample<R: Rng + ?Sized>(dist: &DistanceMatrix, rng: &mut R) -> Self {
        let n = dist.n();
        let noise = Normal::new(0.0, 1.0 / n as f64).expect("positive deviation");
        let mut w = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let d = dist.get(u, v) as f64;
                let x = (1.0 + noise.sample(rng)) * d * d;
                w[u * n + v] = x;
                w[v * n + u] = x;
            }
        }
        NoisyDistances { n, w }
    }

    #[inline]
    pub(crate) fn get(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum SwapRule {
    /// The one swap that lowers `S` the most.
    BestSingle,
    /// Disjoint swaps that each lower `S`, collected in edge order.
    GreedySet,
}

/// Outcome of one successful trial.
pub(crate) struct Trial {
    /// Swap rounds in execution order; each round is a matching.
    pub rounds: Vec<Vec<(usize, usize)>>,
    /// Qubit positions afterwards.
    pub pos: Vec<usize>,
}

impl Trial {
    pub(crate) fn swap_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

/// Moves qubits until every pair of `layer` sits on an edge, or gives up
/// after `cap` rounds or when no swap lowers `S`.
pub(crate) fn run_trial(
    g: &ArchitectureGraph,
    layer: &[(usize, usize)],
    current: &[usize],
    w: &NoisyDistances,
    rule: SwapRule,
    cap: usize,
) -> Option<Trial> {
    let n = g.n();
    let mut pos = current.to_vec();
    let mut at: Vec<Option<usize>> = vec![None; n];
    for (q, &v) in pos.iter().enumerate() {
        at[v] = Some(q);
    }
    let mut partner = vec![None; pos.len()];
    for &(a, b) in layer {
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    let done = |pos: &[usize]| layer.iter().all(|&(a, b)| g.has_edge(pos[a], pos[b]));
    let delta = |pos: &[usize], at: &[Option<usize>], u: usize, v: usize| -> f64 {
        let mut d = 0.0;
        for (x, from, to) in [(at[u], u, v), (at[v], v, u)] {
            let Some(q) = x else { continue };
            let Some(p) = partner[q] else { continue };
            if Some(p) == at[u] || Some(p) == at[v] {
                continue;
            }
            d += w.get(to, pos[p]) - w.get(from, pos[p]);
        }
        d
    };
    let mut rounds = Vec::new();
    for _ in 0..cap {
        if done(&pos) {
            return Some(Trial { rounds, pos });
        }
        let mut round = Vec::new();
        match rule {
            SwapRule::BestSingle => {
                let mut best: Option<(f64, (usize, usize))> = None;
                for &(u, v) in g.edges() {
                    let d = delta(&pos, &at, u, v);
                    if d < -1e-9 && best.is_none_or(|(b, _)| d < b) {
                        best = Some((d, (u, v)));
                    }
                }
                if let Some((_, (u, v))) = best {
                    apply(&mut pos, &mut at, u, v);
                    round.push((u, v));
                }
            }
            SwapRule::GreedySet => {
                let mut busy = vec![false; n];
                for &(u, v) in g.edges() {
                    if busy[u] || busy[v] {
                        continue;
                    }
                    if delta(&pos, &at, u, v) < -1e-9 {
                        apply(&mut pos, &mut at, u, v);
                        busy[u] = true;
                        busy[v] = true;
                        round.push((u, v));
                    }
                }
            }
        }
        if round.is_empty() {
            return None;
        }
        rounds.push(round);
    }
    done(&pos).then_some(Trial { rounds, pos })
}

fn apply(pos: &mut [usize], at: &mut [Option<usize>], u: usize, v: usize) {
    at.swap(u, v);
    for x in [u, v] {
        if let Some(q) = at[x] {
            pos[q] = x;
        }
    }
}

/// Runs `k` randomized single-swap descents and returns the placement
/// reached by the shortest successful one. Falls back to
/// [`simple_size_map`] if none succeeds.
pub fn qiskit_map(ctx: &MapContext, eval: &mut CostEvaluator, k: usize) -> Result<Placement> {
    let g = ctx.graph;
    let n = g.n();
    let dist = g.distances()?;
    let mut best: Option<Trial> = None;
    for _ in 0..k.max(1) {
        let w = NoisyDistances::sample(&dist, eval.rng());
        if let Some(t) = run_trial(g, ctx.layer, ctx.current, &w, SwapRule::BestSingle, n * n) {
            if best
                .as_ref()
                .is_none_or(|b| t.swap_count() < b.swap_count())
            {
                best = Some(t);
            }
        }
    }
    match best {
        Some(t) => Placement::from_total(&t.pos, n),
        None => simple_size_map(ctx, eval),
    }
}
