use rand::RngCore;

use super::{check_size, Permuter, SwapSchedule};
use crate::error::{Error, Result};
use crate::graph::{ArchKind, ArchitectureGraph};
use crate::perm::PartialPermutation;

/// Odd-even transposition routing on `P_n`.
#[derive(Clone, Debug)]
pub struct PathPermuter {
    graph: ArchitectureGraph,
}

impl PathPermuter {
    pub fn new(graph: ArchitectureGraph) -> Result<Self> {
        if graph.kind() != &ArchKind::Path {
            return Err(Error::UnsupportedGraph(format!(
                "path permuter on a {} graph",
                graph.kind_name()
            )));
        }
        Ok(PathPermuter { graph })
    }
}

/// Completes `π` walking the path from vertex 0: mapped vertices keep their
/// target, unmapped ones take the smallest target still free.
pub fn path_completion(pi: &PartialPermutation) -> PartialPermutation {
    let n = pi.n();
    let mut used = pi.image_mask();
    let mut next_free = 0;
    let mut targets = Vec::with_capacity(n);
    for i in 0..n {
        match pi.get(i) {
            Some(t) => targets.push(t),
            None => {
                while used[next_free] {
                    next_free += 1;
                }
                used[next_free] = true;
                targets.push(next_free);
            }
        }
    }
    PartialPermutation::from_total(&targets).expect("completion is a bijection")
}

impl Permuter for PathPermuter {
    fn graph(&self) -> &ArchitectureGraph {
        &self.graph
    }

    fn name(&self) -> &'static str {
        "path"
    }

    fn worst_case_depth(&self) -> Option<usize> {
        Some(self.graph.n())
    }

    fn route(&self, pi: &PartialPermutation, _rng: &mut dyn RngCore) -> Result<SwapSchedule> {
        check_size(&self.graph, pi)?;
        let n = pi.n();
        let mut dest: Vec<usize> = path_completion(pi)
            .as_slice()
            .iter()
            .map(|t| t.expect("total"))
            .collect();
        let mut schedule = SwapSchedule::new();
        let mut parity = 0;
        let mut idle_rounds = 0;
        while idle_rounds < 2 {
            let mut step = Vec::new();
            let mut i = parity;
            while i + 1 < n {
                if dest[i] > dest[i + 1] {
                    dest.swap(i, i + 1);
                    step.push((i, i + 1));
                }
                i += 2;
            }
            if step.is_empty() {
                idle_rounds += 1;
            } else {
                idle_rounds = 0;
                schedule.push_step(step);
            }
            parity ^= 1;
        }
        Ok(schedule)
    }
}
