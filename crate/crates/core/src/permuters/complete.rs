use rand::RngCore;

use super::{check_size, Permuter, SwapSchedule};
use crate::error::{Error, Result};
use crate::graph::{ArchKind, ArchitectureGraph};
use crate::perm::PartialPermutation;

/// Routing on `K_n` in at most two matchings.
#[derive(Clone, Debug)]
pub struct CompletePermuter {
    graph: ArchitectureGraph,
}

impl CompletePermuter {
    pub fn new(graph: ArchitectureGraph) -> Result<Self> {
        if graph.kind() != &ArchKind::Complete {
            return Err(Error::UnsupportedGraph(format!(
                "complete permuter on a {} graph",
                graph.kind_name()
            )));
        }
        Ok(CompletePermuter { graph })
    }
}

impl Permuter for CompletePermuter {
    fn graph(&self) -> &ArchitectureGraph {
        &self.graph
    }

    fn name(&self) -> &'static str {
        "complete"
    }

    fn worst_case_depth(&self) -> Option<usize> {
        Some(2)
    }

    fn route(&self, pi: &PartialPermutation, _rng: &mut dyn RngCore) -> Result<SwapSchedule> {
        check_size(&self.graph, pi)?;
        Ok(route_complete(pi))
    }
}

fn route_complete(pi: &PartialPermutation) -> SwapSchedule {
    let moving = pi.without_fixed_points();
    if moving.is_empty() {
        return SwapSchedule::new();
    }
    let mut touched = vec![false; pi.n()];
    let mut disjoint = true;
    for (v, t) in moving.pairs() {
        for w in [v, t] {
            if touched[w] {
                disjoint = false;
            }
            touched[w] = true;
        }
    }
    if disjoint {
        return SwapSchedule::from_steps(vec![moving.pairs().collect()]);
    }

    // Each cycle v_0 -> v_1 -> ... is the product of two involutions:
    // v_i <-> v_{k-1-i}, then v_i <-> v_{k-i mod k}.
    let total = pi.complete_arbitrary();
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut seen = vec![false; pi.n()];
    for start in 0..pi.n() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = total.get(start).expect("total");
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = total.get(cur).expect("total");
        }
        let k = cycle.len();
        if k == 1 {
            continue;
        }
        for i in 0..k {
            let a = k - 1 - i;
            if i < a {
                first.push((cycle[i], cycle[a]));
            }
            let b = (k - i) % k;
            if i < b {
                second.push((cycle[i], cycle[b]));
            }
        }
    }
    SwapSchedule::from_steps(vec![first, second])
}
