use super::{check_fits, initial_placement, Builder, TransformResult};
use crate::circuit::{Circuit, Frontier};
use crate::error::{Error, Result};
use crate::graph::{ArchitectureGraph, DistanceMatrix};

/// What one iteration of the greedy transformation did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyIteration {
    /// Total front-layer distance after executing gates, before any SWAP.
    pub r_before: usize,
    pub r_after: usize,
    pub executed: usize,
    pub swaps: usize,
    pub fallback: bool,
}

/// Per-iteration record of a greedy run.
#[derive(Clone, Debug, Default)]
pub struct GreedyTrace {
    pub iterations: Vec<GreedyIteration>,
    /// `(iteration, gate, iteration it ran in)` for every fallback move.
    pub fallbacks: Vec<(usize, usize, usize)>,
    pub diameter: usize,
}

impl GreedyTrace {
    /// Iterations where `R` went up, stayed put without a fallback while
    /// SWAPs ran, or changed across a fallback; and fallback targets that
    /// took more than `diam + 1` iterations to run.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, it) in self.iterations.iter().enumerate() {
            let ok = if it.fallback {
                it.r_after == it.r_before
            } else if it.swaps > 0 {
                it.r_after < it.r_before
            } else {
                it.r_after == it.r_before
            };
            if !ok {
                out.push(format!(
                    "iteration {i}: R {} -> {} ({it:?})",
                    it.r_before, it.r_after
                ));
            }
        }
        for &(start, gate, done) in &self.fallbacks {
            if done - start > self.diameter + 1 {
                out.push(format!(
                    "gate {gate} targeted at iteration {start} ran at iteration {done}"
                ));
            }
        }
        out
    }
}

/// Greedy SWAP insertion driven by the total front-layer distance.
pub fn greedy_swap_transform(input: &Circuit, g: &ArchitectureGraph) -> Result<TransformResult> {
    greedy_swap_traced(input, g).map(|(r, _)| r)
}

pub fn greedy_swap_traced(
    input: &Circuit,
    g: &ArchitectureGraph,
) -> Result<(TransformResult, GreedyTrace)> {
    greedy_swap_from(input, g, initial_placement(input, g)?)
}

/// [`greedy_swap_traced`] from a given starting placement.
pub fn greedy_swap_from(
    input: &Circuit,
    g: &ArchitectureGraph,
    initial: Vec<usize>,
) -> Result<(TransformResult, GreedyTrace)> {
    check_fits(input, g)?;
    if initial.len() != input.n_qubits() {
        return Err(Error::InvalidArgument(
            "placement does not cover every qubit".into(),
        ));
    }
    let dist = g.distances()?;
    let diameter = g.diameter()?;
    let mut b = Builder::new(g, initial)?;
    let mut front = Frontier::new(input);
    let mut trace = GreedyTrace {
        diameter,
        ..GreedyTrace::default()
    };
    let limit = (input.len() + 1) * (diameter + 2) * 4 + 16;
    let mut target: Option<usize> = None;
    let mut pending: Vec<(usize, usize)> = Vec::new();

    while !front.is_done() {
        let iter = trace.iterations.len();
        if iter > limit {
            return Err(Error::Internal(
                "greedy transformation does not terminate".into(),
            ));
        }
        let touched = b.execute_ready(input, &mut front)?;
        pending.retain(|&(start, gate)| {
            if front.executed()[gate] {
                trace.fallbacks.push((start, gate, iter));
                false
            } else {
                true
            }
        });
        if target.is_some_and(|t| front.executed()[t]) {
            target = None;
        }
        if front.is_done() {
            break;
        }
        let layer = front.front();
        let mut partner = vec![None; input.n_qubits()];
        for &(a, c) in &layer.two_qubit {
            partner[a] = Some(c);
            partner[c] = Some(a);
        }
        let r_before = total_distance(&dist, &layer.two_qubit, b.pos());
        let mut busy = vec![false; g.n()];
        for v in touched.iter().copied() {
            busy[v] = true;
        }
        let mut swaps = 0;
        loop {
            let mut pick: Option<(i64, (usize, usize))> = None;
            for &(u, v) in g.edges() {
                if busy[u] || busy[v] {
                    continue;
                }
                let d = delta(&dist, &b, &partner, u, v);
                if d < 0 && pick.is_none_or(|(best, _)| d < best) {
                    pick = Some((d, (u, v)));
                }
            }
            let Some((_, (u, v))) = pick else { break };
            b.swap(u, v)?;
            busy[u] = true;
            busy[v] = true;
            swaps += 1;
        }
        let mut fallback = false;
        if touched.is_empty() && swaps == 0 {
            let gate = match target {
                Some(t) => t,
                None => {
                    let (q1, q2) = *layer.two_qubit.iter().min().ok_or_else(|| {
                        Error::Internal("stuck on a layer without two-qubit gates".into())
                    })?;
                    let t = layer
                        .gates
                        .iter()
                        .copied()
                        .find(|&i| input.gates()[i].pair() == Some((q1, q2)))
                        .expect("pair comes from the layer");
                    target = Some(t);
                    t
                }
            };
            let (q1, q2) = input.gates()[gate].pair().expect("two-qubit target");
            let path = g
                .shortest_path(b.pos()[q1], b.pos()[q2])
                .ok_or(Error::Disconnected)?;
            b.swap(path[0], path[1])?;
            b.stats.fallbacks += 1;
            pending.push((iter, gate));
            fallback = true;
        }
        let r_after = total_distance(&dist, &layer.two_qubit, b.pos());
        trace.iterations.push(GreedyIteration {
            r_before,
            r_after,
            executed: touched.len(),
            swaps,
            fallback,
        });
        b.stats.iterations += 1;
    }
    let end = trace.iterations.len();
    for (start, gate) in pending {
        trace.fallbacks.push((start, gate, end));
    }
    Ok((b.finish(), trace))
}

fn total_distance(dist: &DistanceMatrix, pairs: &[(usize, usize)], pos: &[usize]) -> usize {
    pairs.iter().map(|&(a, b)| dist.get(pos[a], pos[b])).sum()
}

/// Change of the total distance if the contents of `u` and `v` swap.
fn delta(dist: &DistanceMatrix, b: &Builder, partner: &[Option<usize>], u: usize, v: usize) -> i64 {
    let (x, y) = (b.at(u), b.at(v));
    let mut d = 0i64;
    for (q, from, to) in [(x, u, v), (y, v, u)] {
        let Some(q) = q else { continue };
        let Some(p) = partner[q] else { continue };
        if Some(p) == x || Some(p) == y {
            continue;
        }
        let w = b.pos()[p];
        d += dist.get(to, w) as i64 - dist.get(from, w) as i64;
    }
    d
}
