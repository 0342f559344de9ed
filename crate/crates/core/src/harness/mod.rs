//! Benchmarking and verification.
//!
//! [`verify_equivalence`] checks a transformed circuit against its input on
//! random states with a dense simulator. [`run_bench`] sweeps strategies
//! over random circuits and produces [`BenchRecord`]s that serialize to
//! TSV.

mod bench;
mod sim;
mod verify;

pub use bench::{
    bench_circuits, format_sig, mix_seed, parse_tsv, round_sig, run_bench, write_tsv, ArchFamily,
    BenchConfig, BenchRecord, TSV_HEADER,
};
pub use sim::StateVector;
pub use verify::{
    verify_equivalence, verify_result, VerificationReport, DEFAULT_TOLERANCE, MAX_SIM_VERTICES,
};
