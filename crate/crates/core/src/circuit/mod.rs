//! Circuits as ordered gate lists with implied DAG semantics.

mod qasm;
mod random;

pub use qasm::{emit_qasm, parse_qasm, parse_qasm_file, QasmFile, QubitMapping};
pub use random::random_circuit;

use crate::error::{Error, Result};

/// A single-qubit operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnaryOp {
    U(f64, f64, f64),
    H,
    X,
    Rz(f64),
}

impl UnaryOp {
    pub fn name(&self) -> &'static str {
        match self {
            UnaryOp::U(..) => "u",
            UnaryOp::H => "h",
            UnaryOp::X => "x",
            UnaryOp::Rz(_) => "rz",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Unary { op: UnaryOp, q: usize },
    Cx { control: usize, target: usize },
    Swap { a: usize, b: usize },
}

impl Gate {
    pub fn u(q: usize, theta: f64, phi: f64, lambda: f64) -> Gate {
        Gate::Unary {
            op: UnaryOp::U(theta, phi, lambda),
            q,
        }
    }

    pub fn h(q: usize) -> Gate {
        Gate::Unary { op: UnaryOp::H, q }
    }

    pub fn x(q: usize) -> Gate {
        Gate::Unary { op: UnaryOp::X, q }
    }

    pub fn rz(q: usize, lambda: f64) -> Gate {
        Gate::Unary {
            op: UnaryOp::Rz(lambda),
            q,
        }
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::Cx { control, target }
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::Swap { a, b }
    }

    /// First qubit, and the second one for two-qubit gates.
    #[inline]
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Unary { q, .. } => (q, None),
            Gate::Cx { control, target } => (control, Some(target)),
            Gate::Swap { a, b } => (a, Some(b)),
        }
    }

    /// The qubit pair of a two-qubit gate.
    #[inline]
    pub fn pair(&self) -> Option<(usize, usize)> {
        match self.qubits() {
            (a, Some(b)) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.pair().is_some()
    }

    pub fn map_qubits(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::Unary { op, q } => Gate::Unary { op, q: f(q) },
            Gate::Cx { control, target } => Gate::Cx {
                control: f(control),
                target: f(target),
            },
            Gate::Swap { a, b } => Gate::Swap { a: f(a), b: f(b) },
        }
    }

    pub fn weight(&self, w: &GateWeights) -> u64 {
        match self {
            Gate::Unary { .. } => w.unary,
            Gate::Cx { .. } => w.cnot,
            Gate::Swap { .. } => w.swap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateWeights {
    pub unary: u64,
    pub cnot: u64,
    pub swap: u64,
}

impl Default for GateWeights {
    fn default() -> Self {
        GateWeights {
            unary: 1,
            cnot: 10,
            swap: 30,
        }
    }
}

/// Gate counts and weighted costs of a circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    pub size: usize,
    pub depth: usize,
    pub weighted_size: u64,
    pub weighted_depth: u64,
    pub unary_count: usize,
    pub cnot_count: usize,
    pub swap_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    names: Vec<String>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// A circuit over qubits `q[0] .. q[n-1]`.
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            names: (0..n_qubits).map(|i| format!("q[{i}]")).collect(),
            gates: Vec::new(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        Circuit {
            names,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let n = self.n_qubits();
        let (a, b) = gate.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::VertexOutOfRange { vertex: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::InvalidArgument(format!(
                "two-qubit gate on a single qubit {}",
                self.names[a]
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// First layer of the gates not flagged in `executed`.
    pub fn front_layer(&self, executed: &[bool]) -> FrontLayer {
        let mut blocked = vec![false; self.n_qubits()];
        let mut layer = FrontLayer::default();
        for (idx, gate) in self.gates.iter().enumerate() {
            let (a, b) = gate.qubits();
            if executed.get(idx).copied().unwrap_or(false) {
                continue;
            }
            let free = !blocked[a] && b.is_none_or(|b| !blocked[b]);
            blocked[a] = true;
            if let Some(b) = b {
                blocked[b] = true;
            }
            if free {
                layer.gates.push(idx);
                if let Some(pair) = gate.pair() {
                    layer.two_qubit.push(pair);
                }
            }
        }
        layer
    }

    /// The layer decomposition, as gate indices.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut level = vec![0usize; self.n_qubits()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (idx, gate) in self.gates.iter().enumerate() {
            let (a, b) = gate.qubits();
            let l = b.map_or(level[a], |b| level[a].max(level[b]));
            if l == out.len() {
                out.push(Vec::new());
            }
            out[l].push(idx);
            level[a] = l + 1;
            if let Some(b) = b {
                level[b] = l + 1;
            }
        }
        out
    }

    pub fn metrics(&self, w: &GateWeights) -> Metrics {
        let mut m = Metrics {
            size: self.gates.len(),
            depth: self.layers().len(),
            ..Metrics::default()
        };
        let mut depth = vec![0u64; self.n_qubits()];
        for gate in &self.gates {
            let weight = gate.weight(w);
            m.weighted_size += weight;
            match gate {
                Gate::Unary { .. } => m.unary_count += 1,
                Gate::Cx { .. } => m.cnot_count += 1,
                Gate::Swap { .. } => m.swap_count += 1,
            }
            let (a, b) = gate.qubits();
            let d = b.map_or(depth[a], |b| depth[a].max(depth[b])) + weight;
            depth[a] = d;
            if let Some(b) = b {
                depth[b] = d;
            }
            m.weighted_depth = m.weighted_depth.max(d);
        }
        m
    }
}

/// The first layer `L` of a circuit DAG.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrontLayer {
    pub gates: Vec<usize>,
    /// `tg(L)`: qubit pairs of the two-qubit gates in `gates`, same order.
    pub two_qubit: Vec<(usize, usize)>,
}

impl FrontLayer {
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Incremental front-layer tracking for algorithms that execute gates one
/// at a time.
#[derive(Clone, Debug)]
pub struct Frontier<'c> {
    circuit: &'c Circuit,
    per_qubit: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    executed: Vec<bool>,
    remaining: usize,
}

impl<'c> Frontier<'c> {
    pub fn new(circuit: &'c Circuit) -> Self {
        let mut per_qubit = vec![Vec::new(); circuit.n_qubits()];
        for (idx, gate) in circuit.gates().iter().enumerate() {
            let (a, b) = gate.qubits();
            per_qubit[a].push(idx);
            if let Some(b) = b {
                per_qubit[b].push(idx);
            }
        }
        Frontier {
            circuit,
            cursor: vec![0; per_qubit.len()],
            per_qubit,
            executed: vec![false; circuit.len()],
            remaining: circuit.len(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.remaining == 0
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn executed(&self) -> &[bool] {
        &self.executed
    }

    fn head(&self, q: usize) -> Option<usize> {
        self.per_qubit[q].get(self.cursor[q]).copied()
    }

    pub fn is_ready(&self, idx: usize) -> bool {
        if self.executed[idx] {
            return false;
        }
        let (a, b) = self.circuit.gates()[idx].qubits();
        self.head(a) == Some(idx) && b.is_none_or(|b| self.head(b) == Some(idx))
    }

    /// Indices of the current front layer, ascending.
    pub fn layer(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.per_qubit.len())
            .filter_map(|q| self.head(q))
            .filter(|&g| self.is_ready(g))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn front(&self) -> FrontLayer {
        let gates = self.layer();
        let two_qubit = gates
            .iter()
            .filter_map(|&g| self.circuit.gates()[g].pair())
            .collect();
        FrontLayer { gates, two_qubit }
    }

    /// Marks a front-layer gate executed.
    pub fn execute(&mut self, idx: usize) {
        debug_assert!(self.is_ready(idx), "gate {idx} is not in the front layer");
        let (a, b) = self.circuit.gates()[idx].qubits();
        self.cursor[a] += 1;
        if let Some(b) = b {
            self.cursor[b] += 1;
        }
        self.executed[idx] = true;
        self.remaining -= 1;
    }
}
