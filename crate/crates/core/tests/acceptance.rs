//! Acceptance suite. Each test checks one criterion and writes a single
//! `PASS`/`FAIL` line to stderr (uncaptured), then asserts.

mod common;

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qroute::circuit::{emit_qasm, random_circuit};
use qroute::harness::verify_result;
use qroute::permuters::{
    depth_permuter, hier_deg, hier_upper_bound, representative_sets, size_permuter, TokenSwapper,
};
use qroute::transforms::{greedy_swap_traced, GeneralOptions, Strategy};
use qroute::{
    max_bipartite_matching, min_weight_perfect_matching, ArchitectureGraph, PartialPermutation,
    WeightedBipartiteGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;

const INSTANCES_PER_FAMILY: usize = 500;
const FIDELITY_TOL: f64 = 1e-10;
const VERIFY_STATES: usize = 20;
const DELIVERY_BUDGET: Duration = Duration::from_secs(60);
const TOKEN_SWAP_BUDGET: Duration = Duration::from_secs(300);
const TRANSFORM_BUDGET: Duration = Duration::from_secs(600);

fn report(id: u32, name: &str, failures: &[String], detail: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance {id:>2} {status} {name}: {detail}");
    for f in failures.iter().take(5) {
        let _ = writeln!(err, "    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

#[derive(Clone, Copy, Debug)]
enum Family {
    Path,
    Complete,
    Grid,
    Modular,
    Hierarchical,
}

const FAMILIES: [Family; 5] = [
    Family::Path,
    Family::Complete,
    Family::Grid,
    Family::Modular,
    Family::Hierarchical,
];

fn h101() -> ArchitectureGraph {
    ArchitectureGraph::hierarchical(
        ArchitectureGraph::path(2).unwrap(),
        ArchitectureGraph::path(3).unwrap(),
        vec![true, false, true],
    )
    .unwrap()
}

/// `(graph, π, total?)` for the `i`-th instance of a family.
fn instance(family: Family, rng: &mut ChaCha8Rng) -> (ArchitectureGraph, PartialPermutation) {
    let g = match family {
        Family::Path => ArchitectureGraph::path(rng.random_range(2..=32)).unwrap(),
        Family::Complete => ArchitectureGraph::complete(rng.random_range(2..=32)).unwrap(),
        Family::Grid => {
            ArchitectureGraph::grid(rng.random_range(2..=6), rng.random_range(2..=6)).unwrap()
        }
        Family::Modular => {
            ArchitectureGraph::modular(rng.random_range(2..=5), rng.random_range(2..=5)).unwrap()
        }
        Family::Hierarchical => h101(),
    };
    let density = [0.25, 0.5, 0.8, 1.0][rng.random_range(0..4)];
    let pi = random_partial(g.n(), density, rng);
    (g, pi)
}

/// Largest realized depth the suite tolerates for `π` on `g`.
fn depth_bound(family: Family, g: &ArchitectureGraph, pi: &PartialPermutation) -> Option<usize> {
    match family {
        Family::Complete => Some(2),
        Family::Path => Some(g.n()),
        Family::Grid => {
            let spec = g.hierarchy().unwrap();
            pi.is_total().then(|| spec.outer.n() + 2 * spec.inner.n())
        }
        Family::Modular => Some(3 * hier_deg(pi, &g.hierarchy().unwrap()) + 2),
        Family::Hierarchical => {
            let spec = g.hierarchy().unwrap();
            let rt1 = max_rt(&spec.outer);
            let rt2 = max_rt(&spec.inner);
            Some(hier_upper_bound(
                hier_deg(pi, &spec),
                spec.hamming_weight(),
                rt1,
                rt2,
            ))
        }
    }
}

/// `rt(G)` by exhaustive search over total permutations.
fn max_rt(g: &ArchitectureGraph) -> usize {
    let mut best = 0;
    let mut p: Vec<usize> = (0..g.n()).collect();
    loop {
        best = best.max(exact_rt(g, &PartialPermutation::from_total(&p).unwrap()));
        if !next_permutation(&mut p) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Realized depth of every depth permuter, and size-permuter delivery,
/// over the random suite; `check` sees each instance.
fn permuter_suite(
    mut check: impl FnMut(Family, &ArchitectureGraph, &PartialPermutation, &str, usize),
) -> Vec<String> {
    let mut failures = Vec::new();
    for family in FAMILIES {
        let mut rng = ChaCha8Rng::seed_from_u64(family as u64 + 100);
        for _ in 0..INSTANCES_PER_FAMILY {
            let (g, pi) = instance(family, &mut rng);
            for perm in [depth_permuter(&g), size_permuter(&g)] {
                match perm.route(&pi, &mut rng) {
                    Ok(s) => {
                        if let Err(e) = s.validate(&g) {
                            failures.push(format!("{family:?} {}: {e}", perm.name()));
                        } else if !s.realizes(&pi) {
                            failures
                                .push(format!("{family:?} {}: {pi:?} not delivered", perm.name()));
                        } else {
                            check(family, &g, &pi, perm.name(), s.depth());
                        }
                    }
                    Err(e) => failures.push(format!("{family:?} {}: {e}", perm.name())),
                }
            }
        }
    }
    failures
}

#[test]
fn criterion_01_delivery() {
    let started = Instant::now();
    let mut count = 0;
    let mut failures = permuter_suite(|_, _, _, _, _| count += 1);
    let elapsed = started.elapsed();
    if elapsed > DELIVERY_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        1,
        "delivery",
        &failures,
        format!("{count} schedules replayed and matched in {:.1?}", elapsed),
    );
}

#[test]
fn criterion_02_depth_bounds() {
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut failures = permuter_suite(|family, g, pi, name, depth| {
        if name == "token-swap" {
            return;
        }
        if let Some(bound) = depth_bound(family, g, pi) {
            checked += 1;
            if depth > bound {
                violations.push(format!(
                    "{family:?} n={} depth {depth} > {bound}: {pi:?}",
                    g.n()
                ));
            }
        }
    });
    failures.extend(violations);
    report(
        2,
        "depth bounds",
        &failures,
        format!("{checked} bounded schedules"),
    );
}

#[test]
fn criterion_03_interleaved_path_fixture() {
    // rt(P_2n, π') from exhaustive search, 2n <= 8.
    const EXACT: [(usize, usize); 3] = [(2, 3), (3, 5), (4, 7)];
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut depths = Vec::new();
    for n in 2..=6 {
        let g = ArchitectureGraph::path(2 * n).unwrap();
        let pairs: Vec<_> = (0..n).flat_map(|i| [(i, n + i), (n + i, i)]).collect();
        let pi = PartialPermutation::from_pairs(2 * n, &pairs).unwrap();
        let s = depth_permuter(&g).route(&pi, &mut rng).unwrap();
        depths.push(s.depth());
        if !s.realizes(&pi) || !(2 * n - 1..=2 * n).contains(&s.depth()) {
            failures.push(format!("n={n}: depth {}", s.depth()));
        }
        if let Some(&(_, exact)) = EXACT.iter().find(|(m, _)| *m == n) {
            let oracle = exact_rt(&g, &pi);
            if oracle != exact || oracle < 2 * n - 1 || s.depth() < oracle {
                failures.push(format!("n={n}: oracle {oracle}, frozen {exact}"));
            }
        }
    }
    report(
        3,
        "interleaved path fixture",
        &failures,
        format!("depths {depths:?}"),
    );
}

#[test]
fn criterion_04_token_swapping() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let check = |g: &ArchitectureGraph,
                 pi: &PartialPermutation,
                 failures: &mut Vec<String>|
     -> Option<usize> {
        let (s, st) = TokenSwapper::new(g.clone()).route_with_stats(pi).ok()?;
        let ok = s.validate(g).is_ok()
            && s.realizes(pi)
            && st.total() <= 2 * st.initial_distance
            && st.happy + st.no_token <= st.initial_distance
            && st.unhappy <= st.happy + st.no_token;
        if !ok {
            failures.push(format!("{pi:?} on {g:?}: {st:?}"));
        }
        Some(st.total())
    };
    for n in 2..=6 {
        for g in connected_graphs(n) {
            let rs = all_total_rs(&g);
            for _ in 0..200 {
                let pi = random_total(n, &mut rng);
                runs += 1;
                let Some(total) = check(&g, &pi, &mut failures) else {
                    failures.push(format!("{pi:?} on {g:?}: error"));
                    continue;
                };
                let key: Vec<u8> = pi.as_slice().iter().map(|t| t.unwrap() as u8).collect();
                let exact = rs[&key];
                if total > 4 * exact {
                    failures.push(format!("{pi:?} on {g:?}: {total} > 4 * {exact}"));
                }
                if exact > 0 {
                    worst = worst.max(total as f64 / exact as f64);
                }
            }
        }
    }
    for family in FAMILIES {
        for _ in 0..100 {
            let (g, pi) = instance(family, &mut rng);
            runs += 1;
            if check(&g, &pi, &mut failures).is_none() {
                failures.push(format!("{family:?}: error"));
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > TOKEN_SWAP_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        4,
        "token swapping",
        &failures,
        format!("{runs} runs, worst ratio to exact {worst:.2}, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_05_partial_rotation_fixture() {
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for n in 4..=8 {
        let g = ArchitectureGraph::path(n).unwrap();
        let mut pairs: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
        pairs.push((n - 1, 0));
        let pi = PartialPermutation::from_pairs(n, &pairs).unwrap();
        let exact = exact_rs(&g, &pi);
        let (s, _) = TokenSwapper::new(g.clone()).route_with_stats(&pi).unwrap();
        sizes.push((n, exact, s.size()));
        if exact != n - 1 {
            failures.push(format!("n={n}: exact {exact}"));
        }
        if !s.realizes(&pi) || s.size() > 3 * n - 5 {
            failures.push(format!("n={n}: {} swaps", s.size()));
        }
    }
    report(
        5,
        "partial rotation fixture",
        &failures,
        format!("(n, exact, ours) {sizes:?}"),
    );
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> ArchitectureGraph {
    match rng.random_range(0..3) {
        0 => ArchitectureGraph::path(n).unwrap(),
        1 => ArchitectureGraph::complete(n).unwrap(),
        _ => {
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|v| (rng.random_range(0..v), v)).collect();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            edges.sort_unstable();
            edges.dedup();
            ArchitectureGraph::from_edges(n, &edges).unwrap()
        }
    }
}

#[test]
fn criterion_06_representative_sets() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sets_seen = 0;
    for _ in 0..INSTANCES_PER_FAMILY {
        let n1 = rng.random_range(2..=5);
        let n2 = rng.random_range(1..=5);
        let outer = random_connected(&mut rng, n1);
        let inner = if n2 == 1 {
            ArchitectureGraph::from_edges(1, &[]).unwrap()
        } else {
            random_connected(&mut rng, n2)
        };
        let mut mask: Vec<bool> = (0..n2).map(|_| rng.random_bool(0.5)).collect();
        mask[rng.random_range(0..n2)] = true;
        let g = ArchitectureGraph::hierarchical(outer, inner, mask).unwrap();
        let spec = g.hierarchy().unwrap();
        let density = rng.random_range(0.1..=1.0);
        let pi = random_partial(g.n(), density, &mut rng);
        let reps = match representative_sets(&pi, &spec) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{pi:?}: {e}"));
                continue;
            }
        };
        let col = |v: usize| v / n2;
        let deg = hier_deg(&pi, &spec);
        if reps.degree != deg || reps.sets.len() != deg {
            failures.push(format!("{pi:?}: {} sets for degree {deg}", reps.sets.len()));
        }
        let mut covered = vec![false; g.n()];
        for set in &reps.sets {
            sets_seen += 1;
            let mut src = vec![false; n1];
            let mut dst = vec![false; n1];
            for r in set {
                if src[r.column] || dst[r.target_column] || col(r.vertex) != r.column {
                    failures.push(format!("{pi:?}: set {set:?} is not distinct"));
                }
                src[r.column] = true;
                dst[r.target_column] = true;
                if !r.helper {
                    if pi.get(r.vertex).map(col) != Some(r.target_column) {
                        failures.push(format!("{pi:?}: wrong target in {r:?}"));
                    }
                    covered[r.vertex] = true;
                }
            }
        }
        for (v, t) in pi.pairs() {
            if col(v) != col(t) && !covered[v] {
                failures.push(format!("{pi:?}: crossing vertex {v} not covered"));
            }
        }
    }
    report(
        6,
        "representative sets",
        &failures,
        format!("{INSTANCES_PER_FAMILY} instances, {sets_seen} sets"),
    );
}

#[test]
fn criterion_07_matching_oracles() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    for nl in 1..=6 {
        for nr in 1..=6 {
            for _ in 0..200 {
                cases += 1;
                let density = rng.random_range(0.2..=1.0);
                let mut b = WeightedBipartiteGraph::new(nl, nr);
                for l in 0..nl {
                    for r in 0..nr {
                        if rng.random_bool(density) {
                            b.add_edge(l, r, rng.random_range(-10..=40) as f64).unwrap();
                        }
                    }
                }
                let m = max_bipartite_matching(&b);
                let expect = brute_max_matching(&b);
                if m.len() != expect || !is_matching(&b, &m) {
                    failures.push(format!("max matching {} vs {expect} on {b:?}", m.len()));
                }
                if nl != nr {
                    continue;
                }
                let oracle = brute_min_perfect(&b);
                match (min_weight_perfect_matching(&b), oracle) {
                    (Ok(m), Some(w)) => {
                        let total: f64 = m.iter().map(|&e| b.edge(e).2).sum();
                        if m.len() != nl || !is_matching(&b, &m) || total != w {
                            failures.push(format!("assignment {total} vs {w} on {b:?}"));
                        }
                    }
                    (Err(_), None) => {}
                    (got, want) => failures.push(format!("{got:?} vs {want:?} on {b:?}")),
                }
            }
        }
    }
    report(
        7,
        "matching oracles",
        &failures,
        format!("{cases} bipartite graphs"),
    );
}

fn is_matching(b: &WeightedBipartiteGraph, edges: &[usize]) -> bool {
    let mut l = vec![false; b.n_left()];
    let mut r = vec![false; b.n_right()];
    edges.iter().all(|&e| {
        let (x, y, _) = b.edge(e);
        !std::mem::replace(&mut l[x], true) && !std::mem::replace(&mut r[y], true)
    })
}

#[test]
fn criterion_08_transformations() {
    let started = Instant::now();
    let archs = [
        ("grid:3x3", ArchitectureGraph::grid(3, 3).unwrap()),
        ("modular:3x3", ArchitectureGraph::modular(3, 3).unwrap()),
    ];
    let circuits: Vec<_> = (0..10)
        .map(|i| random_circuit(8, 20, 800 + i).unwrap())
        .collect();
    let mut jobs = Vec::new();
    for (ai, _) in archs.iter().enumerate() {
        for s in Strategy::all() {
            for ci in 0..circuits.len() {
                jobs.push((ai, s, ci));
            }
        }
    }
    let outcomes: Vec<(f64, Option<String>)> = jobs
        .par_iter()
        .map(|&(ai, s, ci)| {
            let (name, g) = &archs[ai];
            let c = &circuits[ci];
            let seed = (ai * 1000 + ci) as u64;
            let fail = |e: String| (0.0, Some(format!("{name} {s} circuit {ci}: {e}")));
            let r = match s.run(c, g, &GeneralOptions::with_seed(seed)) {
                Ok(r) => r,
                Err(e) => return fail(e.to_string()),
            };
            if let Err(e) = r.validate(c, g) {
                return fail(e.to_string());
            }
            match verify_result(c, &r, VERIFY_STATES, FIDELITY_TOL, seed) {
                Ok(rep) if rep.pass => (rep.fidelity, None),
                Ok(rep) => fail(format!("fidelity {}", rep.fidelity)),
                Err(e) => fail(e.to_string()),
            }
        })
        .collect();
    let mut failures: Vec<String> = outcomes.iter().filter_map(|(_, e)| e.clone()).collect();
    let min_fid = outcomes.iter().map(|(f, _)| *f).fold(1.0, f64::min);
    let elapsed = started.elapsed();
    if elapsed > TRANSFORM_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        8,
        "transformation validity and equivalence",
        &failures,
        format!(
            "{} runs, min fidelity {min_fid:.12}, {elapsed:.1?}",
            jobs.len()
        ),
    );
}

#[test]
fn criterion_09_greedy_monotonicity() {
    let mut failures = Vec::new();
    let mut fallbacks = 0;
    let mut iterations = 0;
    let archs = [
        ArchitectureGraph::grid(3, 3).unwrap(),
        ArchitectureGraph::modular(3, 3).unwrap(),
        ArchitectureGraph::grid(4, 4).unwrap(),
        ArchitectureGraph::path(9).unwrap(),
        ArchitectureGraph::modular(4, 4).unwrap(),
        h101(),
        ArchitectureGraph::path(12).unwrap(),
        ArchitectureGraph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (5, 6)])
            .unwrap(),
    ];
    for (ai, g) in archs.iter().enumerate() {
        for seed in 0..50u64 {
            let n = if seed % 2 == 0 { g.n() } else { g.n() - 1 };
            let c = random_circuit(n.max(2), 20, 900 + seed + 100 * ai as u64).unwrap();
            match greedy_swap_traced(&c, g) {
                Ok((r, trace)) => {
                    if let Err(e) = r.validate(&c, g) {
                        failures.push(format!("{g:?} seed {seed}: {e}"));
                    }
                    fallbacks += trace.fallbacks.len();
                    iterations += trace.iterations.len();
                    failures.extend(
                        trace
                            .violations()
                            .into_iter()
                            .map(|v| format!("arch {ai} seed {seed}: {v}")),
                    );
                }
                Err(e) => failures.push(format!("arch {ai} seed {seed}: {e}")),
            }
        }
    }
    report(
        9,
        "greedy monotonicity",
        &failures,
        format!("{iterations} iterations, {fallbacks} fallback moves"),
    );
}

fn qroute(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qroute"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let input = p("in.qasm");
    std::fs::write(&input, emit_qasm(&random_circuit(8, 10, 10).unwrap(), None)).unwrap();
    let mut failures = Vec::new();
    let mut compared = 0;

    let mut twice = |label: &str, args: Vec<String>, files: &[String]| {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, stdout) = qroute(&argv);
            let contents: Vec<Vec<u8>> = files
                .iter()
                .map(|f| std::fs::read(f).unwrap_or_default())
                .collect();
            runs.push((code, stdout, contents));
        }
        compared += 1;
        if runs[0].0 != 0 {
            failures.push(format!("{label}: exit code {}", runs[0].0));
        }
        if runs[0] != runs[1] {
            failures.push(format!("{label}: outputs differ"));
        }
    };
    for (i, strategy) in [
        "greedy-swap",
        "qiskit",
        "tf:d,greedy-depth",
        "tf:s,extend",
        "tf:d,qiskit",
    ]
    .iter()
    .enumerate()
    {
        for arch in ["grid:3x3", "modular:3x3"] {
            let out = p(&format!("out{i}-{arch}.qasm").replace(':', "_"));
            let args = [
                "transform",
                "--arch",
                arch,
                "--strategy",
                strategy,
                "--in",
                &input,
                "--out",
                &out,
                "--seed",
                "42",
            ];
            twice(
                &format!("transform {strategy} {arch}"),
                args.iter().map(|s| s.to_string()).collect(),
                std::slice::from_ref(&out),
            );
            let v = [
                "verify", "--in", &input, "--out", &out, "--states", "20", "--tol", "1e-10",
            ];
            twice(
                &format!("verify {strategy} {arch}"),
                v.iter().map(|s| s.to_string()).collect(),
                &[],
            );
        }
    }
    for (arch, objective) in [
        ("grid:4x4", "depth"),
        ("modular:3x3", "depth"),
        ("path:6", "size"),
    ] {
        let args = [
            "route",
            "--arch",
            arch,
            "--perm",
            "0:5,5:0,1:3,4:1",
            "--objective",
            objective,
            "--seed",
            "9",
            "--trials",
            "5",
        ];
        twice(
            &format!("route {arch}"),
            args.iter().map(|s| s.to_string()).collect(),
            &[],
        );
    }
    let tsv = p("bench.tsv");
    let args = [
        "bench",
        "--archs",
        "grid,modular",
        "--sizes",
        "4,9",
        "--strategies",
        "greedy-swap,qiskit,tf:d,incremental,tf:s,simple",
        "--reps",
        "2",
        "--layers",
        "5",
        "--trials",
        "10",
        "--tsv",
        &tsv,
        "--seed",
        "1",
    ];
    twice(
        "bench",
        args.iter().map(|s| s.to_string()).collect(),
        std::slice::from_ref(&tsv),
    );
    let bench_rows = std::fs::read_to_string(Path::new(&tsv))
        .map(|t| t.lines().count())
        .unwrap_or(0);
    if bench_rows != 1 + 2 * 2 * 2 * 4 {
        failures.push(format!("bench wrote {bench_rows} lines"));
    }
    report(
        10,
        "CLI determinism",
        &failures,
        format!("{compared} commands run twice"),
    );
}
