use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sim::StateVector;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::transforms::TransformResult;

/// Largest number of architecture vertices the verifier simulates.
pub const MAX_SIM_VERTICES: usize = 20;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationReport {
    /// Smallest overlap `|⟨a|b⟩|` over the sampled states.
    pub fidelity: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Compares `output` (on vertex lines) with `input` (on qubit lines) on
/// random states. Qubits start on `initial[q]` and must end on `final_[q]`;
/// unused vertices carry idle dummy lines.
///
/// All but the last state are random on the circuit qubits and `|0⟩` on the
/// dummies; the last is random on every line.
pub fn verify_equivalence(
    input: &Circuit,
    output: &Circuit,
    initial: &[usize],
    final_: &[usize],
    n_states: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let n = output.n_qubits();
    let nq = input.n_qubits();
    if n > MAX_SIM_VERTICES {
        return Err(Error::NotSimulable(format!(
            "{n} lines exceed the simulator limit of {MAX_SIM_VERTICES}"
        )));
    }
    if nq > n {
        return Err(Error::TooManyQubits {
            qubits: nq,
            vertices: n,
        });
    }
    if initial.len() != nq || final_.len() != nq {
        return Err(Error::InvalidArgument(
            "mappings must cover every qubit".into(),
        ));
    }
    let start = pad(initial, n)?;
    let end = pad_final(output, &start, final_, n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fidelity: f64 = 1.0;
    for k in 0..n_states {
        let active = if k + 1 == n_states { n } else { nq };
        let psi = StateVector::random(n, active, &mut rng);
        let mut a = psi.relabel(&start);
        for g in output.gates() {
            a.apply(g);
        }
        let mut b = psi;
        for g in input.gates() {
            b.apply(g);
        }
        let b = b.relabel(&end);
        fidelity = fidelity.min(a.inner(&b).norm());
    }
    Ok(VerificationReport {
        fidelity,
        pass: fidelity >= 1.0 - tol,
        tolerance: tol,
    })
}

/// [`verify_equivalence`] on a transformation result.
pub fn verify_result(
    input: &Circuit,
    result: &TransformResult,
    n_states: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    verify_equivalence(
        input,
        &result.output,
        &result.initial_map,
        &result.final_map,
        n_states,
        tol,
        seed,
    )
}

/// Extends a qubit mapping by dummies on the unused vertices, ascending.
fn pad(map: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut used = vec![false; n];
    for &v in map {
        if v >= n || used[v] {
            return Err(Error::InvalidArgument(format!(
                "mapping is not injective at {v}"
            )));
        }
        used[v] = true;
    }
    let mut full = map.to_vec();
    full.extend((0..n).filter(|&v| !used[v]));
    Ok(full)
}

/// Final positions of the dummy lines: follow them through the SWAP gates
/// of `output`. Gates only meet dummies through routing SWAPs, so this is
/// exact for a well-formed output; an inconsistent one falls back to
/// [`pad`] and fails the comparison instead.
fn pad_final(output: &Circuit, start: &[usize], final_: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut pos = start.to_vec();
    let mut at = vec![0; n];
    for (line, &v) in pos.iter().enumerate() {
        at[v] = line;
    }
    for g in output.gates() {
        if let Gate::Swap { a, b } = *g {
            at.swap(a, b);
            pos[at[a]] = a;
            pos[at[b]] = b;
        }
    }
    let mut full = final_.to_vec();
    full.extend_from_slice(&pos[final_.len()..]);
    let mut seen = vec![false; n];
    if full
        .iter()
        .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    {
        Ok(full)
    } else {
        pad(final_, n)
    }
}
