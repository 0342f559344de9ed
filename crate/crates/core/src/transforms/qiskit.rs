use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_fits, Builder, TransformResult};
use crate::circuit::{Circuit, Frontier};
use crate::error::{Error, Result};
use crate::graph::ArchitectureGraph;
use crate::mappers::qiskit::{run_trial, NoisyDistances, SwapRule, Trial};

pub const QISKIT_TRIALS: usize = 40;

/// Layer-by-layer routing with randomized distance descents, in the style
/// of the stochastic swap pass.
pub fn qiskit_transform(
    input: &Circuit,
    g: &ArchitectureGraph,
    trials: usize,
    seed: u64,
) -> Result<TransformResult> {
    check_fits(input, g)?;
    let n = g.n();
    let dist = g.distances()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(g, (0..input.n_qubits()).collect())?;
    let mut front = Frontier::new(input);

    while !front.is_done() {
        b.stats.iterations += 1;
        let layer = front.front();
        let ready = layer
            .two_qubit
            .iter()
            .all(|&(x, y)| g.has_edge(b.pos()[x], b.pos()[y]));
        if !ready {
            let mut best: Option<Trial> = None;
            for _ in 0..trials.max(1) {
                let w = NoisyDistances::sample(&dist, &mut rng);
                if let Some(t) =
                    run_trial(g, &layer.two_qubit, b.pos(), &w, SwapRule::GreedySet, 2 * n)
                {
                    if best
                        .as_ref()
                        .is_none_or(|c| t.swap_count() < c.swap_count())
                    {
                        best = Some(t);
                    }
                }
            }
            match best {
                Some(t) => {
                    for (u, v) in t.rounds.into_iter().flatten() {
                        b.swap(u, v)?;
                    }
                }
                None => {
                    b.stats.fallbacks += 1;
                    for &idx in layer.gates.iter() {
                        let gate = input.gates()[idx];
                        let Some((x, y)) = gate.pair() else { continue };
                        let path = g
                            .shortest_path(b.pos()[x], b.pos()[y])
                            .ok_or(Error::Disconnected)?;
                        for w in path.windows(2).take(path.len().saturating_sub(2)) {
                            b.swap(w[0], w[1])?;
                        }
                        b.execute(&gate)?;
                        front.execute(idx);
                    }
                }
            }
        }
        for idx in layer.gates {
            if !front.executed()[idx] {
                b.execute(&input.gates()[idx])?;
                front.execute(idx);
            }
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Gate};

    #[test]
    fn respecting_input_is_unchanged() {
        let g = ArchitectureGraph::grid(2, 2).unwrap();
        let mut c = Circuit::new(4);
        for (a, b) in [(0, 1), (2, 3), (0, 2), (1, 3)] {
            c.push(Gate::cx(a, b)).unwrap();
        }
        let r = qiskit_transform(&c, &g, 5, 1).unwrap();
        r.validate(&c, &g).unwrap();
        assert_eq!(r.output.gates(), c.gates());
    }

    #[test]
    fn same_seed_same_output() {
        let g = ArchitectureGraph::grid(3, 3).unwrap();
        let c = random_circuit(9, 5, 4).unwrap();
        let a = qiskit_transform(&c, &g, 10, 7).unwrap();
        let b = qiskit_transform(&c, &g, 10, 7).unwrap();
        a.validate(&c, &g).unwrap();
        assert_eq!(a.output, b.output);
    }

    #[test]
    fn crossing_gates_on_a_path() {
        let g = ArchitectureGraph::path(6).unwrap();
        let mut c = Circuit::new(6);
        c.push(Gate::cx(0, 5)).unwrap();
        c.push(Gate::cx(1, 4)).unwrap();
        let r = qiskit_transform(&c, &g, 0, 1).unwrap();
        r.validate(&c, &g).unwrap();
    }
}
