//! Checks a transformed circuit against its input on random states, then
//! shows the check catching a dropped SWAP.

use qroute::circuit::{random_circuit, Circuit};
use qroute::harness::{verify_equivalence, verify_result, DEFAULT_TOLERANCE};
use qroute::transforms::Strategy;
use qroute::ArchitectureGraph;

fn main() -> qroute::Result<()> {
    let g = ArchitectureGraph::grid(2, 3)?;
    let c = random_circuit(6, 4, 9)?;
    let r = Strategy::GreedySwap.run(&c, &g, &Default::default())?;
    let ok = verify_result(&c, &r, 20, DEFAULT_TOLERANCE, 0)?;
    println!("as routed: {ok:?}");

    let Some(cut) = r.inserted.iter().position(|&f| f) else {
        println!("no swaps were needed");
        return Ok(());
    };
    let mut broken = Circuit::new(r.output.n_qubits());
    for (i, gate) in r.output.gates().iter().enumerate() {
        if i != cut {
            broken.push(*gate)?;
        }
    }
    let bad = verify_equivalence(
        &c,
        &broken,
        &r.initial_map,
        &r.final_map,
        20,
        DEFAULT_TOLERANCE,
        0,
    )?;
    println!("one swap dropped: {bad:?}");
    Ok(())
}
