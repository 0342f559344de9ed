//! Circuit transformations: turn an arbitrary circuit into one whose
//! two-qubit gates all act on architecture edges by inserting SWAPs.
//!
//! Every transformation returns a [`TransformResult`] whose output circuit
//! has one line per architecture vertex, together with the initial and final
//! qubit-to-vertex mappings.

mod general;
mod greedy;
mod qiskit;

pub use general::{general_transform, GeneralOptions, TRANSFORM_TRIALS};
pub use greedy::{
    greedy_swap_from, greedy_swap_traced, greedy_swap_transform, GreedyIteration, GreedyTrace,
};
pub use qiskit::{qiskit_transform, QISKIT_TRIALS};

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Frontier, Gate, QubitMapping};
use crate::error::{Error, Result};
use crate::graph::ArchitectureGraph;
use crate::mappers::MapperKind;

/// Bookkeeping collected while transforming.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransformStats {
    pub swaps: usize,
    pub iterations: usize,
    /// Fallback routines (greedy, qiskit) or progress-guard activations.
    pub fallbacks: usize,
}

#[derive(Clone, Debug)]
pub struct TransformResult {
    /// Circuit over the architecture vertices, line `v` named `q[v]`.
    pub output: Circuit,
    /// Marks the SWAPs that were inserted for routing.
    pub inserted: Vec<bool>,
    pub initial_map: Vec<usize>,
    pub final_map: Vec<usize>,
    pub stats: TransformStats,
}

impl TransformResult {
    /// Mapping comments for the QASM writer, named after the input qubits.
    pub fn mappings(&self, input: &Circuit) -> (QubitMapping, QubitMapping) {
        let named = |m: &[usize]| {
            m.iter()
                .enumerate()
                .map(|(q, &v)| (input.name(q).to_string(), v))
                .collect()
        };
        (named(&self.initial_map), named(&self.final_map))
    }

    /// Checks every structural promise against `input` on `g`: two-qubit
    /// gates on edges, input gates once each in dependency order, and the
    /// final mapping reachable from the initial one through the SWAPs.
    pub fn validate(&self, input: &Circuit, g: &ArchitectureGraph) -> Result<()> {
        let n = g.n();
        let bad = |msg: String| Err(Error::Internal(msg));
        if self.output.n_qubits() != n {
            return bad(format!(
                "output has {} lines for {n} vertices",
                self.output.n_qubits()
            ));
        }
        if self.inserted.len() != self.output.len() {
            return bad("inserted flags do not match the output".into());
        }
        for m in [&self.initial_map, &self.final_map] {
            if m.len() != input.n_qubits() {
                return bad("mapping does not cover every qubit".into());
            }
            let mut seen = vec![false; n];
            for &v in m {
                if v >= n || seen[v] {
                    return bad(format!("mapping is not injective at vertex {v}"));
                }
                seen[v] = true;
            }
        }
        let mut at: Vec<Option<usize>> = vec![None; n];
        for (q, &v) in self.initial_map.iter().enumerate() {
            at[v] = Some(q);
        }
        let mut front = Frontier::new(input);
        for (i, (gate, &routing)) in self.output.gates().iter().zip(&self.inserted).enumerate() {
            if let Some((a, b)) = gate.pair() {
                if !g.has_edge(a, b) {
                    return bad(format!("gate {i} acts on ({a}, {b}), not an edge"));
                }
            }
            if routing {
                let Gate::Swap { a, b } = *gate else {
                    return bad(format!("gate {i} is flagged inserted but is not a SWAP"));
                };
                at.swap(a, b);
                continue;
            }
            let mut missing = false;
            let logical = gate.map_qubits(|v| {
                at[v].unwrap_or_else(|| {
                    missing = true;
                    0
                })
            });
            if missing {
                return bad(format!("gate {i} touches a vertex without a qubit"));
            }
            let (q, _) = logical.qubits();
            let Some(idx) = front
                .layer()
                .into_iter()
                .find(|&idx| input.gates()[idx] == logical && input.gates()[idx].qubits().0 == q)
            else {
                return bad(format!("gate {i} does not match a ready input gate"));
            };
            front.execute(idx);
        }
        if !front.is_done() {
            return bad(format!("{} input gates never executed", front.remaining()));
        }
        for (q, &v) in self.final_map.iter().enumerate() {
            if at[v] != Some(q) {
                return bad(format!("final mapping disagrees at qubit {q}"));
            }
        }
        Ok(())
    }
}

/// Accumulates the output circuit while tracking where every qubit is.
pub(crate) struct Builder<'g> {
    g: &'g ArchitectureGraph,
    out: Circuit,
    inserted: Vec<bool>,
    initial: Vec<usize>,
    pos: Vec<usize>,
    at: Vec<Option<usize>>,
    pub stats: TransformStats,
}

impl<'g> Builder<'g> {
    pub fn new(g: &'g ArchitectureGraph, initial: Vec<usize>) -> Result<Self> {
        let mut at = vec![None; g.n()];
        for (q, &v) in initial.iter().enumerate() {
            if v >= g.n() || at[v].is_some() {
                return Err(Error::Internal(format!(
                    "bad initial placement at qubit {q}"
                )));
            }
            at[v] = Some(q);
        }
        Ok(Builder {
            g,
            out: Circuit::new(g.n()),
            inserted: Vec::new(),
            pos: initial.clone(),
            initial,
            at,
            stats: TransformStats::default(),
        })
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn at(&self, v: usize) -> Option<usize> {
        self.at[v]
    }

    /// Inserts a routing SWAP. Swaps between two empty vertices are dropped.
    pub fn swap(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.g.has_edge(u, v) {
            return Err(Error::Internal(format!(
                "routing SWAP on non-edge ({u}, {v})"
            )));
        }
        if self.at[u].is_none() && self.at[v].is_none() {
            return Ok(());
        }
        self.at.swap(u, v);
        for x in [u, v] {
            if let Some(q) = self.at[x] {
                self.pos[q] = x;
            }
        }
        self.out.push(Gate::swap(u, v))?;
        self.inserted.push(true);
        self.stats.swaps += 1;
        Ok(())
    }

    pub fn can_execute(&self, gate: &Gate) -> bool {
        gate.pair()
            .is_none_or(|(a, b)| self.g.has_edge(self.pos[a], self.pos[b]))
    }

    pub fn execute(&mut self, gate: &Gate) -> Result<()> {
        if !self.can_execute(gate) {
            return Err(Error::Internal("gate executed off the architecture".into()));
        }
        self.out.push(gate.map_qubits(|q| self.pos[q]))?;
        self.inserted.push(false);
        Ok(())
    }

    /// Executes ready gates that act on edges until none is left. Returns
    /// the vertices touched.
    pub fn execute_ready(&mut self, input: &Circuit, front: &mut Frontier) -> Result<Vec<usize>> {
        let mut touched = Vec::new();
        loop {
            let mut progress = false;
            for idx in front.layer() {
                let gate = &input.gates()[idx];
                if self.can_execute(gate) {
                    self.execute(gate)?;
                    front.execute(idx);
                    let (a, b) = gate.qubits();
                    touched.push(self.pos[a]);
                    if let Some(b) = b {
                        touched.push(self.pos[b]);
                    }
                    progress = true;
                }
            }
            if !progress {
                return Ok(touched);
            }
        }
    }

    pub fn finish(self) -> TransformResult {
        TransformResult {
            output: self.out,
            inserted: self.inserted,
            initial_map: self.initial,
            final_map: self.pos,
            stats: self.stats,
        }
    }
}

pub(crate) fn check_fits(input: &Circuit, g: &ArchitectureGraph) -> Result<()> {
    if input.n_qubits() > g.n() {
        return Err(Error::TooManyQubits {
            qubits: input.n_qubits(),
            vertices: g.n(),
        });
    }
    Ok(())
}

/// Starting placement: the gates of the first two-qubit layer go onto the
/// edges of a greedy maximal matching, one gate per matching edge; every
/// other qubit takes the lowest free vertex.
pub fn initial_placement(input: &Circuit, g: &ArchitectureGraph) -> Result<Vec<usize>> {
    check_fits(input, g)?;
    let n = g.n();
    let mut blocked = vec![false; input.n_qubits()];
    let mut first = Vec::new();
    for (a, b) in input.gates().iter().filter_map(Gate::pair) {
        if !blocked[a] && !blocked[b] {
            first.push((a, b));
        }
        blocked[a] = true;
        blocked[b] = true;
    }
    let mut place: Vec<Option<usize>> = vec![None; input.n_qubits()];
    let mut used = vec![false; n];
    for (a, b) in first {
        let Some(&(u, v)) = g.maximal_matching(&used).first() else {
            break;
        };
        place[a] = Some(u);
        place[b] = Some(v);
        used[u] = true;
        used[v] = true;
    }
    let mut free = (0..n).filter(|&v| !used[v]);
    Ok(place
        .into_iter()
        .map(|p| p.unwrap_or_else(|| free.next().expect("enough vertices")))
        .collect())
}

/// The transformations selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    GreedySwap,
    Qiskit,
    /// Mapper plus the depth (`d`) or size (`s`) permuter.
    General {
        depth: bool,
        mapper: MapperKind,
    },
}

impl Strategy {
    /// Greedy, qiskit, then every `tf:d,*` and `tf:s,*`.
    pub fn all() -> Vec<Strategy> {
        let mut out = vec![Strategy::GreedySwap, Strategy::Qiskit];
        for depth in [true, false] {
            for mapper in MapperKind::ALL {
                out.push(Strategy::General { depth, mapper });
            }
        }
        out
    }

    /// Runs the transformation.
    pub fn run(
        &self,
        input: &Circuit,
        g: &ArchitectureGraph,
        opts: &GeneralOptions,
    ) -> Result<TransformResult> {
        match *self {
            Strategy::GreedySwap => greedy_swap_transform(input, g),
            Strategy::Qiskit => qiskit_transform(input, g, QISKIT_TRIALS, opts.seed),
            Strategy::General { depth, mapper } => {
                let permuter = if depth {
                    crate::permuters::depth_permuter(g)
                } else {
                    crate::permuters::size_permuter(g)
                };
                general_transform(input, permuter.as_ref(), mapper, opts)
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::GreedySwap => f.write_str("greedy-swap"),
            Strategy::Qiskit => f.write_str("qiskit"),
            Strategy::General { depth, mapper } => {
                write!(f, "tf:{},{}", if *depth { 'd' } else { 's' }, mapper)
            }
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy-swap" => return Ok(Strategy::GreedySwap),
            "qiskit" => return Ok(Strategy::Qiskit),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unknown strategy `{s}`"));
        let rest = s.strip_prefix("tf:").ok_or_else(bad)?;
        let (kind, mapper) = rest.split_once(',').ok_or_else(bad)?;
        let depth = match kind {
            "d" => true,
            "s" => false,
            _ => return Err(bad()),
        };
        Ok(Strategy::General {
            depth,
            mapper: mapper.parse()?,
        })
    }
}
