//! Parses a small OpenQASM file, routes it and writes it back with the
//! qubit mapping comments.

use qroute::circuit::{emit_qasm, parse_qasm, parse_qasm_file};
use qroute::transforms::greedy_swap_transform;
use qroute::ArchitectureGraph;

const INPUT: &str = "\
OPENQASM 2.0;
include \"qelib1.inc\";
qreg q[4];
h q[0];
cx q[0], q[3];
rz(pi/8) q[3];
cx q[1], q[2];
cx q[2], q[0];
";

fn main() -> qroute::Result<()> {
    let c = parse_qasm(INPUT)?;
    let g = ArchitectureGraph::path(4)?;
    let r = greedy_swap_transform(&c, &g)?;
    let (initial, final_map) = r.mappings(&c);
    let text = emit_qasm(&r.output, Some((&initial, &final_map)));
    print!("{text}");
    let back = parse_qasm_file(&text)?;
    assert_eq!(back.circuit, r.output);
    assert_eq!(back.final_map, Some(final_map));
    Ok(())
}
