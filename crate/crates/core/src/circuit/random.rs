use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Benchmark circuit: each layer pairs the qubits uniformly at random and
/// gives every pair a generic two-qubit block (three CNOTs interleaved with
/// random `u` gates). With an odd qubit count one qubit idles per layer.
pub fn random_circuit(n_qubits: usize, n_layers: usize, seed: u64) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(format!(
            "random circuits need at least 2 qubits, got {n_qubits}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n_qubits);
    let mut order: Vec<usize> = (0..n_qubits).collect();
    for _ in 0..n_layers {
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            push_block(&mut c, pair[0], pair[1], &mut rng)?;
        }
    }
    Ok(c)
}

fn push_block(c: &mut Circuit, a: usize, b: usize, rng: &mut impl Rng) -> Result<()> {
    let u = |q: usize, rng: &mut dyn rand::RngCore| {
        Gate::u(
            q,
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..TAU),
        )
    };
    c.push(u(a, rng))?;
    c.push(u(b, rng))?;
    for _ in 0..3 {
        c.push(Gate::cx(a, b))?;
        c.push(u(a, rng))?;
        c.push(u(b, rng))?;
    }
    Ok(())
}
