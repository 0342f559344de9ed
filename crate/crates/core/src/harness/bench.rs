use std::fmt;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::circuit::{random_circuit, Circuit, GateWeights};
use crate::error::{Error, Result};
use crate::graph::ArchitectureGraph;
use crate::mappers::MAPPER_TRIALS;
use crate::transforms::{GeneralOptions, Strategy, TRANSFORM_TRIALS};

/// Column names, in order.
pub const TSV_HEADER: [&str; 13] = [
    "arch",
    "n_qubits",
    "strategy",
    "seed",
    "circuit_id",
    "depth",
    "size",
    "weighted_depth",
    "weighted_size",
    "cnot_count",
    "swap_count",
    "runtime_ms",
    "error",
];

/// Architecture families swept by the benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArchFamily {
    Grid,
    Modular,
}

impl ArchFamily {
    /// The member for `n` qubits: both factors of size `⌈√n⌉`.
    pub fn build(&self, n: usize) -> Result<ArchitectureGraph> {
        let k = (1..=n).find(|k| k * k >= n).unwrap_or(1).max(1);
        match self {
            ArchFamily::Grid => ArchitectureGraph::grid(k, k),
            ArchFamily::Modular => ArchitectureGraph::modular(k, k),
        }
    }

    pub fn label(&self, n: usize) -> String {
        let k = (1..=n).find(|k| k * k >= n).unwrap_or(1).max(1);
        format!("{self}:{k}x{k}")
    }
}

impl fmt::Display for ArchFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchFamily::Grid => "grid",
            ArchFamily::Modular => "modular",
        })
    }
}

impl FromStr for ArchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(ArchFamily::Grid),
            "modular" => Ok(ArchFamily::Modular),
            _ => Err(Error::InvalidArgument(format!(
                "unknown architecture family `{s}`"
            ))),
        }
    }
}

/// One benchmark row.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub arch: String,
    pub n_qubits: usize,
    pub strategy: String,
    pub seed: u64,
    pub circuit_id: usize,
    pub depth: usize,
    pub size: usize,
    pub weighted_depth: u64,
    pub weighted_size: u64,
    pub cnot_count: usize,
    pub swap_count: usize,
    pub runtime_ms: f64,
    /// Empty on success.
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub archs: Vec<ArchFamily>,
    pub sizes: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub reps: usize,
    pub seed: u64,
    pub layers: usize,
    pub weights: GateWeights,
    pub transform_trials: usize,
    pub mapper_trials: usize,
    /// Record wall time; otherwise `runtime_ms` is 0 and output is
    /// reproducible byte for byte.
    pub timing: bool,
    pub timeout: Option<Duration>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            archs: vec![ArchFamily::Grid, ArchFamily::Modular],
            sizes: vec![9],
            strategies: Strategy::all(),
            reps: 10,
            seed: 1,
            layers: 20,
            weights: GateWeights::default(),
            transform_trials: TRANSFORM_TRIALS,
            mapper_trials: MAPPER_TRIALS,
            timing: false,
            timeout: None,
        }
    }
}

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The `reps` random circuits used for size `n`.
pub fn bench_circuits(n: usize, reps: usize, layers: usize, seed: u64) -> Result<Vec<Circuit>> {
    (0..reps)
        .map(|r| random_circuit(n, layers, mix_seed(mix_seed(seed, n as u64), r as u64)))
        .collect()
}

struct Job {
    family: ArchFamily,
    n: usize,
    circuit_id: usize,
    strategy: Strategy,
    seed: u64,
}

/// Runs every strategy on every circuit of every size and architecture.
/// Records come back in a fixed order (architecture, size, circuit,
/// strategy); failures are recorded, not raised.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut circuits = Vec::new();
    for &n in &cfg.sizes {
        circuits.push(bench_circuits(n, cfg.reps, cfg.layers, cfg.seed)?);
    }
    let mut graphs = Vec::new();
    for &family in &cfg.archs {
        let row: Result<Vec<_>> = cfg.sizes.iter().map(|&n| family.build(n)).collect();
        graphs.push(row?);
    }
    let mut jobs = Vec::new();
    for (ai, &family) in cfg.archs.iter().enumerate() {
        for (si, &n) in cfg.sizes.iter().enumerate() {
            for circuit_id in 0..cfg.reps {
                for &strategy in &cfg.strategies {
                    let idx = jobs.len() as u64;
                    jobs.push((
                        (ai, si),
                        Job {
                            family,
                            n,
                            circuit_id,
                            strategy,
                            seed: mix_seed(cfg.seed, idx),
                        },
                    ));
                }
            }
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|((ai, si), job)| {
            let circuit = &circuits[si][job.circuit_id];
            run_job(cfg, &graphs[ai][si], circuit, &job)
        })
        .collect())
}

fn run_job(cfg: &BenchConfig, g: &ArchitectureGraph, circuit: &Circuit, job: &Job) -> BenchRecord {
    let mut rec = BenchRecord {
        arch: job.family.label(job.n),
        n_qubits: job.n,
        strategy: job.strategy.to_string(),
        seed: job.seed,
        circuit_id: job.circuit_id,
        depth: 0,
        size: 0,
        weighted_depth: 0,
        weighted_size: 0,
        cnot_count: 0,
        swap_count: 0,
        runtime_ms: 0.0,
        error: String::new(),
    };
    let opts = GeneralOptions {
        transform_trials: cfg.transform_trials,
        mapper_trials: cfg.mapper_trials,
        seed: job.seed,
    };
    let started = Instant::now();
    let outcome = match cfg.timeout {
        None => job.strategy.run(circuit, g, &opts),
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            let (strategy, c, g2) = (job.strategy, circuit.clone(), g.clone());
            std::thread::spawn(move || {
                let _ = tx.send(strategy.run(&c, &g2, &opts));
            });
            rx.recv_timeout(limit)
                .unwrap_or_else(|_| Err(Error::Internal("timeout".into())))
        }
    };
    if cfg.timing {
        rec.runtime_ms = round_sig(started.elapsed().as_secs_f64() * 1e3);
    }
    match outcome.and_then(|r| r.validate(circuit, g).map(|_| r)) {
        Ok(r) => {
            let m = r.output.metrics(&cfg.weights);
            rec.depth = m.depth;
            rec.size = m.size;
            rec.weighted_depth = m.weighted_depth;
            rec.weighted_size = m.weighted_size;
            rec.cnot_count = m.cnot_count;
            rec.swap_count = m.swap_count;
        }
        Err(e) => {
            rec.error = e.to_string().replace(['\t', '\n', '\r'], " ");
        }
    }
    rec
}

/// Formats with 6 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let scale = 10f64.powi(mag - 5);
    let rounded = (x / scale).round() * scale;
    let s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// The value [`format_sig`] writes, read back.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

pub fn write_tsv(records: &[BenchRecord]) -> String {
    let mut out = TSV_HEADER.join("\t");
    out.push('\n');
    for r in records {
        let row = [
            r.arch.clone(),
            r.n_qubits.to_string(),
            r.strategy.clone(),
            r.seed.to_string(),
            r.circuit_id.to_string(),
            r.depth.to_string(),
            r.size.to_string(),
            r.weighted_depth.to_string(),
            r.weighted_size.to_string(),
            r.cnot_count.to_string(),
            r.swap_count.to_string(),
            format_sig(r.runtime_ms),
            r.error.clone(),
        ];
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn parse_tsv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty TSV".into()))?;
    if header.split('\t').collect::<Vec<_>>() != TSV_HEADER {
        return Err(Error::InvalidArgument("unexpected TSV header".into()));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != TSV_HEADER.len() {
            return Err(Error::InvalidArgument(format!(
                "row {}: expected {} columns, found {}",
                i + 1,
                TSV_HEADER.len(),
                f.len()
            )));
        }
        fn num<T: FromStr>(s: &str, row: usize) -> Result<T> {
            s.parse()
                .map_err(|_| Error::InvalidArgument(format!("row {row}: bad number `{s}`")))
        }
        let row = i + 1;
        out.push(BenchRecord {
            arch: f[0].to_string(),
            n_qubits: num(f[1], row)?,
            strategy: f[2].to_string(),
            seed: num(f[3], row)?,
            circuit_id: num(f[4], row)?,
            depth: num(f[5], row)?,
            size: num(f[6], row)?,
            weighted_depth: num(f[7], row)?,
            weighted_size: num(f[8], row)?,
            cnot_count: num(f[9], row)?,
            swap_count: num(f[10], row)?,
            runtime_ms: num(f[11], row)?,
            error: f[12].to_string(),
        });
    }
    Ok(out)
}
