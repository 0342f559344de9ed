//! A small OpenQASM 2 subset.
//!
//! Accepted statements: `OPENQASM`, `include`, `qreg`, `creg`, `barrier`
//! (ignored), `u(a,b,c)`, `h`, `x`, `rz(a)`, `cx` and `swap`. Angle
//! arguments are arithmetic expressions over numbers and `pi`.
//!
//! Transformed circuits carry their qubit mappings as comments:
//!
//! ```text
//! // initial: q[0] -> v[3]
//! // final: q[0] -> v[4]
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Circuit, Gate, UnaryOp};
use crate::error::{Error, Result};

/// Circuit qubit name to architecture vertex.
pub type QubitMapping = Vec<(String, usize)>;

/// A parsed file together with any mapping comments it carried.
#[derive(Clone, Debug, PartialEq)]
pub struct QasmFile {
    pub circuit: Circuit,
    pub initial: Option<QubitMapping>,
    pub final_map: Option<QubitMapping>,
}

pub fn parse_qasm(text: &str) -> Result<Circuit> {
    parse_qasm_file(text).map(|f| f.circuit)
}

pub fn parse_qasm_file(text: &str) -> Result<QasmFile> {
    let mut initial: Option<QubitMapping> = None;
    let mut final_map: Option<QubitMapping> = None;
    let mut code = String::with_capacity(text.len());
    for (idx, line) in text.lines().enumerate() {
        let (body, comment) = match line.find("//") {
            Some(pos) => (&line[..pos], Some(&line[pos + 2..])),
            None => (line, None),
        };
        code.push_str(body);
        code.push('\n');
        let Some(comment) = comment else { continue };
        let comment = comment.trim();
        let (slot, rest) = if let Some(rest) = comment.strip_prefix("initial:") {
            (&mut initial, rest)
        } else if let Some(rest) = comment.strip_prefix("final:") {
            (&mut final_map, rest)
        } else {
            continue;
        };
        let entry = parse_mapping_entry(rest).ok_or_else(|| Error::Qasm {
            line: idx + 1,
            msg: format!("malformed mapping comment {comment:?}"),
        })?;
        slot.get_or_insert_with(Vec::new).push(entry);
    }

    let mut names = Vec::new();
    let mut registers: HashMap<String, (usize, usize)> = HashMap::new();
    let mut gates = Vec::new();
    let mut line = 1;
    for stmt in code.split(';') {
        let lead = stmt.len() - stmt.trim_start().len();
        let start_line = line + stmt[..lead].matches('\n').count();
        line += stmt.matches('\n').count();
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Qasm {
            line: start_line,
            msg,
        };
        let (head, rest) = split_head(stmt);
        match head {
            "OPENQASM" | "include" | "creg" | "barrier" => {}
            "qreg" => {
                let (reg, size) =
                    parse_operand(rest).ok_or_else(|| err(format!("bad qreg {rest:?}")))?;
                if registers.contains_key(reg) {
                    return Err(err(format!("register {reg} declared twice")));
                }
                registers.insert(reg.to_string(), (names.len(), size));
                names.extend((0..size).map(|i| format!("{reg}[{i}]")));
            }
            _ => {
                let (name, params, operands) =
                    split_call(head, rest).ok_or_else(|| err(format!("cannot parse {stmt:?}")))?;
                let params: Vec<f64> = params
                    .iter()
                    .map(|p| eval_expr(p).ok_or_else(|| err(format!("bad angle expression {p:?}"))))
                    .collect::<Result<_>>()?;
                let qubits: Vec<usize> = operands
                    .iter()
                    .map(|op| {
                        let (reg, idx) =
                            parse_operand(op).ok_or_else(|| err(format!("bad operand {op:?}")))?;
                        let &(offset, size) = registers
                            .get(reg)
                            .ok_or_else(|| err(format!("undeclared register {reg}")))?;
                        if idx >= size {
                            return Err(err(format!("index {idx} out of range for {reg}[{size}]")));
                        }
                        Ok(offset + idx)
                    })
                    .collect::<Result<_>>()?;
                let arity = |p: usize, q: usize| -> Result<()> {
                    if params.len() != p || qubits.len() != q {
                        return Err(err(format!("{name} takes {p} parameters and {q} qubits")));
                    }
                    Ok(())
                };
                let gate = match name {
                    "u" | "u3" | "U" => {
                        arity(3, 1)?;
                        Gate::Unary {
                            op: UnaryOp::U(params[0], params[1], params[2]),
                            q: qubits[0],
                        }
                    }
                    "h" => {
                        arity(0, 1)?;
                        Gate::Unary {
                            op: UnaryOp::H,
                            q: qubits[0],
                        }
                    }
                    "x" => {
                        arity(0, 1)?;
                        Gate::Unary {
                            op: UnaryOp::X,
                            q: qubits[0],
                        }
                    }
                    "rz" => {
                        arity(1, 1)?;
                        Gate::Unary {
                            op: UnaryOp::Rz(params[0]),
                            q: qubits[0],
                        }
                    }
                    "cx" | "CX" => {
                        arity(0, 2)?;
                        Gate::cx(qubits[0], qubits[1])
                    }
                    "swap" => {
                        arity(0, 2)?;
                        Gate::swap(qubits[0], qubits[1])
                    }
                    other => return Err(err(format!("unknown gate {other:?}"))),
                };
                if let (a, Some(b)) = gate.qubits() {
                    if a == b {
                        return Err(err(format!("{name} has a duplicate operand")));
                    }
                }
                gates.push(gate);
            }
        }
    }
    Ok(QasmFile {
        circuit: Circuit { names, gates },
        initial,
        final_map,
    })
}

fn parse_mapping_entry(text: &str) -> Option<(String, usize)> {
    let (name, vertex) = text.split_once("->")?;
    let vertex = vertex.trim().strip_prefix("v[")?.strip_suffix(']')?;
    Some((name.trim().to_string(), vertex.trim().parse().ok()?))
}

fn split_head(stmt: &str) -> (&str, &str) {
    let end = stmt
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(stmt.len());
    (&stmt[..end], stmt[end..].trim())
}

fn split_call<'a>(head: &'a str, rest: &'a str) -> Option<(&'a str, Vec<&'a str>, Vec<&'a str>)> {
    let (params, operands) = if let Some(inner) = rest.strip_prefix('(') {
        let close = matching_paren(inner)?;
        let params = split_top_level(&inner[..close]);
        (params, inner[close + 1..].trim())
    } else {
        (Vec::new(), rest)
    };
    let operands: Vec<&str> = operands.split(',').map(str::trim).collect();
    if operands.iter().any(|s| s.is_empty()) {
        return None;
    }
    Some((head, params, operands))
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

fn split_top_level(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_operand(s: &str) -> Option<(&str, usize)> {
    let s = s.trim();
    let open = s.find('[')?;
    let idx = s[open + 1..].strip_suffix(']')?;
    let reg = s[..open].trim();
    if reg.is_empty() {
        return None;
    }
    Some((reg, idx.trim().parse().ok()?))
}

/// Evaluates `+ - * /`, parentheses, decimal literals and `pi`.
fn eval_expr(s: &str) -> Option<f64> {
    let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let v = expr(&tokens, &mut pos)?;
    (pos == tokens.len() && v.is_finite()).then_some(v)
}

fn expr(t: &[char], pos: &mut usize) -> Option<f64> {
    let mut v = term(t, pos)?;
    while let Some(&c) = t.get(*pos) {
        match c {
            '+' => {
                *pos += 1;
                v += term(t, pos)?;
            }
            '-' => {
                *pos += 1;
                v -= term(t, pos)?;
            }
            _ => break,
        }
    }
    Some(v)
}

fn term(t: &[char], pos: &mut usize) -> Option<f64> {
    let mut v = factor(t, pos)?;
    while let Some(&c) = t.get(*pos) {
        match c {
            '*' => {
                *pos += 1;
                v *= factor(t, pos)?;
            }
            '/' => {
                *pos += 1;
                v /= factor(t, pos)?;
            }
            _ => break,
        }
    }
    Some(v)
}

fn factor(t: &[char], pos: &mut usize) -> Option<f64> {
    match t.get(*pos)? {
        '-' => {
            *pos += 1;
            factor(t, pos).map(|v| -v)
        }
        '+' => {
            *pos += 1;
            factor(t, pos)
        }
        '(' => {
            *pos += 1;
            let v = expr(t, pos)?;
            (t.get(*pos) == Some(&')')).then(|| *pos += 1)?;
            Some(v)
        }
        'p' => {
            (t.get(*pos + 1) == Some(&'i')).then(|| *pos += 2)?;
            Some(std::f64::consts::PI)
        }
        _ => {
            let start = *pos;
            while let Some(&c) = t.get(*pos) {
                let exp_sign =
                    (c == '-' || c == '+') && *pos > start && matches!(t[*pos - 1], 'e' | 'E');
                if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                    *pos += 1;
                } else {
                    break;
                }
            }
            t[start..*pos].iter().collect::<String>().parse().ok()
        }
    }
}

/// Writes a circuit in the accepted subset. With `mappings`, the initial and
/// final qubit mappings are written as comments before and after the gates.
pub fn emit_qasm(c: &Circuit, mappings: Option<(&QubitMapping, &QubitMapping)>) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if let Some((initial, _)) = mappings {
        for (name, v) in initial {
            let _ = writeln!(out, "// initial: {name} -> v[{v}]");
        }
    }
    let mut registers: Vec<(String, usize)> = Vec::new();
    for name in c.names() {
        let reg = name.split('[').next().unwrap_or(name).to_string();
        match registers.last_mut() {
            Some((r, size)) if *r == reg => *size += 1,
            _ => registers.push((reg, 1)),
        }
    }
    for (reg, size) in &registers {
        let _ = writeln!(out, "qreg {reg}[{size}];");
    }
    for gate in c.gates() {
        let _ = match *gate {
            Gate::Unary { op, q } => match op {
                UnaryOp::U(a, b, l) => writeln!(out, "u({a:?},{b:?},{l:?}) {};", c.name(q)),
                UnaryOp::H => writeln!(out, "h {};", c.name(q)),
                UnaryOp::X => writeln!(out, "x {};", c.name(q)),
                UnaryOp::Rz(a) => writeln!(out, "rz({a:?}) {};", c.name(q)),
            },
            Gate::Cx { control, target } => {
                writeln!(out, "cx {},{};", c.name(control), c.name(target))
            }
            Gate::Swap { a, b } => writeln!(out, "swap {},{};", c.name(a), c.name(b)),
        };
    }
    if let Some((_, final_map)) = mappings {
        for (name, v) in final_map {
            let _ = writeln!(out, "// final: {name} -> v[{v}]");
        }
    }
    out
}
