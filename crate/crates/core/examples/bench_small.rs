//! A reduced benchmark sweep, printed as TSV.

use qroute::harness::{run_bench, write_tsv, ArchFamily, BenchConfig};
use qroute::transforms::Strategy;

fn main() -> qroute::Result<()> {
    let cfg = BenchConfig {
        archs: vec![ArchFamily::Grid, ArchFamily::Modular],
        sizes: vec![4, 9],
        strategies: vec![
            Strategy::GreedySwap,
            Strategy::Qiskit,
            "tf:d,incremental".parse()?,
            "tf:s,extend".parse()?,
        ],
        reps: 2,
        layers: 5,
        transform_trials: 10,
        ..BenchConfig::default()
    };
    print!("{}", write_tsv(&run_bench(&cfg)?));
    Ok(())
}
