//! Permuters: algorithms that realize a partial permutation of vertices as a
//! sequence of matchings of swaps.
//!
//! Token semantics throughout: `π(v)` is the destination of the token that
//! currently sits on `v`; vertices outside `dom(π)` hold no token.

mod cartesian;
mod complete;
mod hierarchical;
mod path;
mod token_swap;

pub use cartesian::CartesianPermuter;
pub use complete::CompletePermuter;
pub use hierarchical::{
    hier_deg, hier_lower_bound, hier_upper_bound, representative_sets, HierarchicalPermuter,
    Representative, RepresentativeSets,
};
pub use path::{path_completion, PathPermuter};
pub use token_swap::{TokenSwapStats, TokenSwapper};

use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::{retag, ArchKind, ArchitectureGraph};
use crate::perm::PartialPermutation;

/// An ordered list of matchings. Pairs are stored as `(u, v)` with `u < v`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SwapSchedule {
    steps: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for SwapSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.steps).finish()
    }
}

impl SwapSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<Vec<(usize, usize)>>) -> Self {
        let mut s = Self::new();
        for step in steps {
            s.push_step(step);
        }
        s
    }

    /// Appends a step; empty steps are dropped.
    pub fn push_step(&mut self, step: Vec<(usize, usize)>) {
        if step.is_empty() {
            return;
        }
        let mut step: Vec<(usize, usize)> = step
            .into_iter()
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        step.sort_unstable();
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[Vec<(usize, usize)>] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn size(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All swaps in execution order.
    pub fn swaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().flatten().copied()
    }

    /// Runs `other` after `self`.
    pub fn append(&mut self, other: SwapSchedule) {
        self.steps.extend(other.steps);
    }

    /// Runs `other` in parallel with `self`, step by step. The caller
    /// guarantees that the two act on disjoint vertex sets.
    pub fn merge_parallel(&mut self, other: SwapSchedule) {
        for (i, step) in other.steps.into_iter().enumerate() {
            if i < self.steps.len() {
                self.steps[i].extend(step);
                self.steps[i].sort_unstable();
            } else {
                self.steps.push(step);
            }
        }
    }

    /// Relabels vertices, e.g. to embed a schedule computed on a subgraph.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> SwapSchedule {
        SwapSchedule::from_steps(
            self.steps
                .iter()
                .map(|s| s.iter().map(|&(u, v)| (f(u), f(v))).collect())
                .collect(),
        )
    }

    /// Checks that every step is a matching of edges of `g`.
    pub fn validate(&self, g: &ArchitectureGraph) -> Result<()> {
        let mut seen = vec![usize::MAX; g.n()];
        for (i, step) in self.steps.iter().enumerate() {
            for &(u, v) in step {
                if !g.has_edge(u, v) {
                    return Err(Error::Internal(format!(
                        "step {i}: ({u}, {v}) is not an edge"
                    )));
                }
                for w in [u, v] {
                    if seen[w] == i {
                        return Err(Error::Internal(format!("step {i}: vertex {w} used twice")));
                    }
                    seen[w] = i;
                }
            }
        }
        Ok(())
    }

    /// Moves the tokens of `pi` along the schedule.
    pub fn apply(&self, pi: &PartialPermutation) -> Result<PartialPermutation> {
        let mut cur = pi.clone();
        for (u, v) in self.swaps() {
            cur.swap_tokens(u, v)?;
        }
        Ok(cur)
    }

    /// Whether replaying the schedule delivers every token of `pi`.
    pub fn realizes(&self, pi: &PartialPermutation) -> bool {
        self.apply(pi).is_ok_and(|p| p.is_resolved())
    }
}

/// Realizes partial permutations on a fixed graph.
pub trait Permuter: Send + Sync {
    fn graph(&self) -> &ArchitectureGraph;

    fn route(&self, pi: &PartialPermutation, rng: &mut dyn RngCore) -> Result<SwapSchedule>;

    fn name(&self) -> &'static str;

    /// Whether `route` consumes randomness (repeated trials may help).
    fn is_randomized(&self) -> bool {
        false
    }

    /// Largest depth `route` can return on any input, when known.
    fn worst_case_depth(&self) -> Option<usize> {
        None
    }
}

pub(crate) fn check_size(g: &ArchitectureGraph, pi: &PartialPermutation) -> Result<()> {
    if pi.n() != g.n() {
        return Err(Error::SizeMismatch {
            left: pi.n(),
            right: g.n(),
        });
    }
    Ok(())
}

/// The depth-oriented permuter for a graph: complete and path graphs get
/// their dedicated routers, products get the hierarchical or Cartesian
/// router, anything else falls back to token swapping.
pub fn depth_permuter(g: &ArchitectureGraph) -> Box<dyn Permuter> {
    match g.kind() {
        ArchKind::Complete => Box::new(CompletePermuter::new(g.clone()).expect("complete")),
        ArchKind::Path => Box::new(PathPermuter::new(g.clone()).expect("path")),
        ArchKind::Grid { .. } | ArchKind::Modular { .. } | ArchKind::Hierarchical(_) => {
            let spec = g.hierarchy().expect("product graph");
            let sub1 = depth_permuter(&retag(spec.outer.clone()));
            let sub2 = depth_permuter(&retag(spec.inner.clone()));
            if spec.is_cartesian() {
                Box::new(CartesianPermuter::new(g.clone(), sub1, sub2).expect("cartesian"))
            } else {
                Box::new(HierarchicalPermuter::new(g.clone(), sub1, sub2).expect("hierarchical"))
            }
        }
        ArchKind::Generic => Box::new(TokenSwapper::new(g.clone())),
    }
}

/// The size-oriented permuter: partial token swapping.
pub fn size_permuter(g: &ArchitectureGraph) -> Box<dyn Permuter> {
    Box::new(TokenSwapper::new(g.clone()))
}

/// Best of `trials` runs by `(depth, size)`; a deterministic permuter runs
/// once.
pub fn route_best_of(
    permuter: &dyn Permuter,
    pi: &PartialPermutation,
    trials: usize,
    by_size: bool,
    rng: &mut dyn RngCore,
) -> Result<SwapSchedule> {
    let runs = if permuter.is_randomized() {
        trials.max(1)
    } else {
        1
    };
    let mut best: Option<SwapSchedule> = None;
    for _ in 0..runs {
        let s = permuter.route(pi, rng)?;
        let key = |s: &SwapSchedule| {
            if by_size {
                (s.size(), s.depth())
            } else {
                (s.depth(), s.size())
            }
        };
        if best.as_ref().is_none_or(|b| key(&s) < key(b)) {
            best = Some(s);
        }
    }
    Ok(best.unwrap_or_default())
}
