//! Mappers: heuristics that choose where the qubits of the front layer
//! should sit next.
//!
//! A mapper sees the current placement `p̂` (total, qubit to vertex), the
//! two-qubit gates of the front layer and a [`CostEvaluator`] backed by a
//! permuter. It returns a partial placement `p`; the transformation then
//! routes `p ∘ p̂⁻¹`.

mod depth;
pub(crate) mod qiskit;
mod size;

pub use depth::{greedy_map, incremental_depth_map};
pub use qiskit::{qiskit_map, QISKIT_MAPPER_TRIALS};
pub use size::{extension_size_map, simple_size_map};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ArchitectureGraph;
use crate::perm::PartialPermutation;
use crate::permuters::{route_best_of, Permuter, SwapSchedule};

/// Permuter trials per cost evaluation for randomized permuters.
pub const MAPPER_TRIALS: usize = 4;

const CACHE_LIMIT: usize = 1 << 16;

/// Injective partial map from qubits to vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct Placement {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Placement {
    pub fn empty(n_qubits: usize, n_vertices: usize) -> Self {
        Placement {
            map: vec![None; n_qubits],
            used: vec![false; n_vertices],
        }
    }

    /// Total placement from `vertices[q]`.
    pub fn from_total(vertices: &[usize], n_vertices: usize) -> Result<Self> {
        let mut p = Self::empty(vertices.len(), n_vertices);
        for (q, &v) in vertices.iter().enumerate() {
            p.insert(q, v)?;
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.map.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.used.len()
    }

    pub fn get(&self, q: usize) -> Option<usize> {
        self.map.get(q).copied().flatten()
    }

    pub fn is_used(&self, v: usize) -> bool {
        self.used[v]
    }

    pub fn len(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    /// `(qubit, vertex)` pairs in qubit order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(q, v)| v.map(|v| (q, v)))
    }

    pub fn insert(&mut self, q: usize, v: usize) -> Result<()> {
        if v >= self.used.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.used.len(),
            });
        }
        if q >= self.map.len() {
            return Err(Error::InvalidArgument(format!("qubit {q} out of range")));
        }
        if self.map[q].is_some() {
            return Err(Error::OverlappingDomains(q));
        }
        if self.used[v] {
            return Err(Error::NotInjective(v));
        }
        self.map[q] = Some(v);
        self.used[v] = true;
        Ok(())
    }

    /// The vertex permutation `p ∘ p̂⁻¹` moving every placed qubit from its
    /// current vertex to its new one.
    pub fn relative_to(&self, current: &[usize]) -> Result<PartialPermutation> {
        let pairs: Vec<(usize, usize)> = self.pairs().map(|(q, v)| (current[q], v)).collect();
        PartialPermutation::from_pairs(self.n_vertices(), &pairs)
    }
}

impl fmt::Debug for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Depth,
    Size,
}

/// Permuter-backed estimates of `rt(G, π)` or `rs(G, π)`.
pub struct CostEvaluator<'p> {
    permuter: &'p dyn Permuter,
    objective: Objective,
    trials: usize,
    rng: ChaCha8Rng,
    cache: HashMap<PartialPermutation, usize>,
}

impl<'p> CostEvaluator<'p> {
    pub fn new(permuter: &'p dyn Permuter, objective: Objective, seed: u64) -> Self {
        CostEvaluator {
            permuter,
            objective,
            trials: MAPPER_TRIALS,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cache: HashMap::new(),
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }

    pub fn graph(&self) -> &ArchitectureGraph {
        self.permuter.graph()
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Best schedule over the configured trials.
    pub fn schedule(&mut self, pi: &PartialPermutation) -> Result<SwapSchedule> {
        route_best_of(
            self.permuter,
            pi,
            self.trials,
            self.objective == Objective::Size,
            &mut self.rng,
        )
    }

    pub fn measure(&self, s: &SwapSchedule) -> usize {
        match self.objective {
            Objective::Depth => s.depth(),
            Objective::Size => s.size(),
        }
    }

    pub fn cost(&mut self, pi: &PartialPermutation) -> Result<usize> {
        if pi.is_resolved() {
            return Ok(0);
        }
        if let Some(&c) = self.cache.get(pi) {
            return Ok(c);
        }
        let s = self.schedule(pi)?;
        let c = self.measure(&s);
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(pi.clone(), c);
        Ok(c)
    }

    /// Cost of `base` extended by the vertex moves `extra`.
    pub(crate) fn cost_with(
        &mut self,
        base: &PartialPermutation,
        extra: &[(usize, usize)],
    ) -> Result<usize> {
        let mut pi = base.clone();
        for &(s, t) in extra {
            pi.insert(s, t)?;
        }
        self.cost(&pi)
    }
}

/// What a mapper looks at.
#[derive(Clone, Copy)]
pub struct MapContext<'a> {
    pub graph: &'a ArchitectureGraph,
    /// Qubit pairs of the two-qubit gates in the front layer.
    pub layer: &'a [(usize, usize)],
    /// Current placement, `current[q]` is the vertex of qubit `q`.
    pub current: &'a [usize],
}

impl MapContext<'_> {
    pub(crate) fn n_vertices(&self) -> usize {
        self.graph.n()
    }

    pub(crate) fn empty(&self) -> Placement {
        Placement::empty(self.current.len(), self.graph.n())
    }

    /// Whether some gate of the layer already acts on an edge.
    pub fn any_executable(&self) -> bool {
        self.layer
            .iter()
            .any(|&(a, b)| self.graph.has_edge(self.current[a], self.current[b]))
    }

    /// Gates sorted by qubit pair.
    pub(crate) fn sorted_gates(&self) -> Vec<(usize, usize)> {
        let mut g = self.layer.to_vec();
        g.sort_unstable();
        g
    }
}

/// Both orientations of every listed edge, `(a, b)` before `(b, a)`.
pub(crate) fn directed(edges: &[(usize, usize)]) -> impl Iterator<Item = (usize, usize)> + '_ {
    edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapperKind {
    GreedyDepth,
    Incremental,
    GreedySize,
    Simple,
    Extend,
    Qiskit,
}

impl MapperKind {
    pub const ALL: [MapperKind; 6] = [
        MapperKind::GreedyDepth,
        MapperKind::Incremental,
        MapperKind::GreedySize,
        MapperKind::Simple,
        MapperKind::Extend,
        MapperKind::Qiskit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MapperKind::GreedyDepth => "greedy-depth",
            MapperKind::Incremental => "incremental",
            MapperKind::GreedySize => "greedy-size",
            MapperKind::Simple => "simple",
            MapperKind::Extend => "extend",
            MapperKind::Qiskit => "qiskit",
        }
    }

    /// The quantity its cost evaluator should measure.
    pub fn objective(&self) -> Objective {
        match self {
            MapperKind::GreedyDepth | MapperKind::Incremental => Objective::Depth,
            _ => Objective::Size,
        }
    }

    pub fn place(&self, ctx: &MapContext, eval: &mut CostEvaluator) -> Result<Placement> {
        match self {
            MapperKind::GreedyDepth => greedy_map(ctx, eval),
            MapperKind::Incremental => incremental_depth_map(ctx, eval),
            MapperKind::GreedySize => {
                if ctx.any_executable() {
                    Ok(ctx.empty())
                } else {
                    greedy_map(ctx, eval)
                }
            }
            MapperKind::Simple => simple_size_map(ctx, eval),
            MapperKind::Extend => extension_size_map(ctx, eval),
            MapperKind::Qiskit => qiskit_map(ctx, eval, QISKIT_MAPPER_TRIALS),
        }
    }
}

impl fmt::Display for MapperKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapperKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapperKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mapper `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permuters::{depth_permuter, size_permuter};

    #[test]
    fn placement_rejects_collisions() {
        let mut p = Placement::empty(3, 4);
        p.insert(0, 2).unwrap();
        assert!(p.insert(1, 2).is_err());
        assert!(p.insert(0, 1).is_err());
        assert!(p.insert(1, 4).is_err());
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn relative_permutation() {
        let mut p = Placement::empty(2, 3);
        p.insert(0, 1).unwrap();
        let pi = p.relative_to(&[2, 0]).unwrap();
        assert_eq!(pi, PartialPermutation::from_pairs(3, &[(2, 1)]).unwrap());
    }

    #[test]
    fn empty_costs_nothing() {
        let g = ArchitectureGraph::grid(3, 3).unwrap();
        let perm = depth_permuter(&g);
        let mut eval = CostEvaluator::new(perm.as_ref(), Objective::Depth, 0);
        assert_eq!(eval.cost(&PartialPermutation::empty(9)).unwrap(), 0);
        let swap = PartialPermutation::from_pairs(9, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(eval.cost(&swap).unwrap(), 1);
    }

    #[test]
    fn size_costs_on_a_path() {
        let g = ArchitectureGraph::path(5).unwrap();
        let perm = size_permuter(&g);
        let mut eval = CostEvaluator::new(perm.as_ref(), Objective::Size, 0);
        let pi = PartialPermutation::from_pairs(5, &[(0, 4)]).unwrap();
        assert_eq!(eval.cost(&pi).unwrap(), 4);
    }

    #[test]
    fn names_round_trip() {
        for m in MapperKind::ALL {
            assert_eq!(m.name().parse::<MapperKind>().unwrap(), m);
        }
        assert!("nope".parse::<MapperKind>().is_err());
    }
}
