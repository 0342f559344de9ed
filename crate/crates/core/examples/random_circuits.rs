//! Generates benchmark circuits and prints their shape.

use qroute::circuit::{random_circuit, GateWeights};

fn main() -> qroute::Result<()> {
    for (n, layers) in [(4, 1), (9, 20), (16, 20)] {
        let c = random_circuit(n, layers, 0)?;
        let m = c.metrics(&GateWeights::default());
        println!(
            "{n:>2} qubits, {layers:>2} rounds: {} gates, {} cx, depth {}, weighted depth {}",
            m.size, m.cnot_count, m.depth, m.weighted_depth
        );
    }
    Ok(())
}
