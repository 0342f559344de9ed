//! Transforms one random circuit with every strategy and tabulates the
//! resulting metrics.

use qroute::circuit::{random_circuit, GateWeights};
use qroute::transforms::{GeneralOptions, Strategy};
use qroute::ArchitectureGraph;

fn main() -> qroute::Result<()> {
    let g = ArchitectureGraph::modular(3, 3)?;
    let c = random_circuit(8, 10, 42)?;
    let w = GateWeights::default();
    let opts = GeneralOptions {
        transform_trials: 20,
        ..GeneralOptions::with_seed(1)
    };
    println!(
        "{:<20} {:>6} {:>6} {:>6} {:>9}",
        "strategy", "swaps", "depth", "size", "w_depth"
    );
    for s in Strategy::all() {
        let r = s.run(&c, &g, &opts)?;
        r.validate(&c, &g)?;
        let m = r.output.metrics(&w);
        println!(
            "{:<20} {:>6} {:>6} {:>6} {:>9}",
            s.to_string(),
            m.swap_count,
            m.depth,
            m.size,
            m.weighted_depth
        );
    }
    Ok(())
}
