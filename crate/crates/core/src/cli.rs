//! The `qroute` command line.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{emit_qasm, parse_qasm_file, Circuit, GateWeights, QubitMapping};
use crate::error::{Error, Result};
use crate::graph::parse_arch_spec;
use crate::harness::{
    parse_tsv, run_bench, verify_equivalence, write_tsv, ArchFamily, BenchConfig,
};
use crate::mappers::MAPPER_TRIALS;
use crate::perm::PartialPermutation;
use crate::permuters::{depth_permuter, route_best_of, size_permuter};
use crate::transforms::{GeneralOptions, Strategy, TRANSFORM_TRIALS};

#[derive(Parser, Debug)]
#[command(
    name = "qroute",
    version,
    about = "Route quantum circuits onto qubit architectures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Transform a QASM circuit for an architecture.
    Transform {
        /// Architecture: path:N, complete:N, grid:RxC, modular:MxK or hier:FILE.
        #[arg(long)]
        arch: String,
        /// greedy-swap, qiskit, tf:d,MAPPER or tf:s,MAPPER.
        #[arg(long)]
        strategy: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long = "out")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Permuter trials per routed placement.
        #[arg(long, default_value_t = TRANSFORM_TRIALS)]
        trials: usize,
        /// Permuter trials per mapper cost evaluation.
        #[arg(long, default_value_t = MAPPER_TRIALS)]
        mapper_trials: usize,
        /// Gate weights as UNARY,CNOT,SWAP.
        #[arg(long, default_value = "1,10,30")]
        weights: String,
    },
    /// Route a vertex permutation and print the swap steps.
    Route {
        #[arg(long)]
        arch: String,
        /// Moves as `source:target` pairs separated by commas.
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = Objective::Depth)]
        objective: Objective,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Benchmark strategies on random circuits and write TSV.
    Bench {
        /// Comma-separated families: grid, modular.
        #[arg(long, default_value = "grid,modular")]
        archs: String,
        /// Comma-separated qubit counts.
        #[arg(long, default_value = "9")]
        sizes: String,
        /// `all` or a comma-separated list of strategy names.
        #[arg(long, default_value = "all")]
        strategies: String,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Output file; standard output if omitted.
        #[arg(long)]
        tsv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Layers per random circuit.
        #[arg(long, default_value_t = 20)]
        layers: usize,
        #[arg(long, default_value_t = TRANSFORM_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = MAPPER_TRIALS)]
        mapper_trials: usize,
        #[arg(long, default_value = "1,10,30")]
        weights: String,
        /// Record wall time per run (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        /// Give up on a single run after this many seconds.
        #[arg(long)]
        timeout_secs: Option<u64>,
        /// Worker threads; all cores if omitted.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a transformed circuit against the original on random states.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Transformed circuit with initial and final mapping comments.
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, default_value_t = 20)]
        states: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Depth,
    Size,
}

/// Parses arguments, runs, and maps the outcome to an exit code: 0 on
/// success, 1 when verification fails, 2 on bad usage or input.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs a parsed command. `Ok(false)` means a failed verification.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Transform {
            arch,
            strategy,
            input,
            output,
            seed,
            trials,
            mapper_trials,
            weights,
        } => {
            let g = parse_arch_spec(&arch)?;
            let strategy: Strategy = strategy.parse()?;
            let weights = parse_weights(&weights)?;
            let circuit = parse_qasm_file(&read(&input)?)?.circuit;
            let opts = GeneralOptions {
                transform_trials: trials,
                mapper_trials,
                seed,
            };
            let result = strategy.run(&circuit, &g, &opts)?;
            result.validate(&circuit, &g)?;
            let (initial, final_map) = result.mappings(&circuit);
            let text = emit_qasm(&result.output, Some((&initial, &final_map)));
            let m = result.output.metrics(&weights);
            let summary = format!(
                "swaps={} depth={} size={} weighted_depth={} weighted_size={}",
                m.swap_count, m.depth, m.size, m.weighted_depth, m.weighted_size
            );
            match output {
                Some(path) => {
                    write(&path, &text)?;
                    println!("{summary}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{summary}");
                }
            }
            Ok(true)
        }
        Command::Route {
            arch,
            perm,
            objective,
            seed,
            trials,
        } => {
            let g = parse_arch_spec(&arch)?;
            let pi = parse_perm(&perm, g.n())?;
            let by_size = objective == Objective::Size;
            let permuter = if by_size {
                size_permuter(&g)
            } else {
                depth_permuter(&g)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let schedule = route_best_of(permuter.as_ref(), &pi, trials, by_size, &mut rng)?;
            let mut out = std::io::stdout().lock();
            for step in schedule.steps() {
                let line: Vec<String> = step.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            let _ = writeln!(out, "depth={} size={}", schedule.depth(), schedule.size());
            Ok(true)
        }
        Command::Bench {
            archs,
            sizes,
            strategies,
            reps,
            tsv,
            seed,
            layers,
            trials,
            mapper_trials,
            weights,
            timing,
            timeout_secs,
            threads,
        } => {
            let cfg = BenchConfig {
                archs: split_list(&archs)
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<ArchFamily>>>()?,
                sizes: split_list(&sizes)
                    .iter()
                    .map(|s| {
                        s.parse()
                            .map_err(|_| Error::InvalidArgument(format!("bad size `{s}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?,
                strategies: parse_strategies(&strategies)?,
                reps,
                seed,
                layers,
                weights: parse_weights(&weights)?,
                transform_trials: trials,
                mapper_trials,
                timing,
                timeout: timeout_secs.map(Duration::from_secs),
            };
            let records = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?
                    .install(|| run_bench(&cfg))?,
                None => run_bench(&cfg)?,
            };
            let text = write_tsv(&records);
            debug_assert_eq!(parse_tsv(&text).ok().as_deref(), Some(&records[..]));
            match tsv {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            let failed = records.iter().filter(|r| !r.error.is_empty()).count();
            if failed > 0 {
                eprintln!("{failed} of {} runs failed", records.len());
            }
            Ok(true)
        }
        Command::Verify {
            input,
            output,
            states,
            tol,
            seed,
        } => {
            let original = parse_qasm_file(&read(&input)?)?.circuit;
            let routed = parse_qasm_file(&read(&output)?)?;
            let missing = || Error::InvalidArgument("output lacks mapping comments".into());
            let initial = resolve(&original, routed.initial.as_ref().ok_or_else(missing)?)?;
            let final_map = resolve(&original, routed.final_map.as_ref().ok_or_else(missing)?)?;
            let report = verify_equivalence(
                &original,
                &routed.circuit,
                &initial,
                &final_map,
                states,
                tol,
                seed,
            )?;
            println!(
                "fidelity={} pass={} tolerance={}",
                report.fidelity, report.pass, report.tolerance
            );
            Ok(report.pass)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect()
}

/// Comma-separated strategies; `tf:d,MAPPER` keeps its own comma.
pub fn parse_strategies(s: &str) -> Result<Vec<Strategy>> {
    if s.trim() == "all" {
        return Ok(Strategy::all());
    }
    let tokens = split_list(s);
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        if t.starts_with("tf:") && !t.contains(',') && i + 1 < tokens.len() {
            out.push(format!("{t},{}", tokens[i + 1]).parse()?);
            i += 2;
        } else {
            out.push(t.parse()?);
            i += 1;
        }
    }
    Ok(out)
}

pub fn parse_weights(s: &str) -> Result<GateWeights> {
    let parts: Vec<u64> = split_list(s)
        .iter()
        .map(|p| p.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad weights `{s}`")))?;
    match parts[..] {
        [unary, cnot, swap] => Ok(GateWeights { unary, cnot, swap }),
        _ => Err(Error::InvalidArgument("weights take three values".into())),
    }
}

/// `s:d,s:d,...` on `n` vertices.
pub fn parse_perm(s: &str, n: usize) -> Result<PartialPermutation> {
    let mut pairs = Vec::new();
    for item in split_list(s) {
        let (a, b) = item
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("bad move `{item}`")))?;
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad vertex `{x}`")))
        };
        pairs.push((num(a)?, num(b)?));
    }
    PartialPermutation::from_pairs(n, &pairs)
}

/// Mapping comments to a vertex per input qubit.
fn resolve(c: &Circuit, m: &QubitMapping) -> Result<Vec<usize>> {
    let mut out = vec![None; c.n_qubits()];
    for (name, v) in m {
        let q = c
            .names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown qubit `{name}`")))?;
        out[q] = Some(*v);
    }
    out.into_iter()
        .enumerate()
        .map(|(q, v)| {
            v.ok_or_else(|| Error::InvalidArgument(format!("qubit `{}` is not mapped", c.name(q))))
        })
        .collect()
}
