use super::{directed, CostEvaluator, MapContext, Placement};
use crate::error::Result;
use crate::perm::PartialPermutation;

/// Places the most expensive gate at its cheapest edge of a matching of the
/// unused vertices, then repeats on what is left. The evaluator's objective
/// decides whether this is the depth or the size variant.
pub fn greedy_map(ctx: &MapContext, eval: &mut CostEvaluator) -> Result<Placement> {
    let n = ctx.n_vertices();
    let cur = ctx.current;
    let mut p = ctx.empty();
    let mut base = PartialPermutation::empty(n);
    let mut used = vec![false; n];
    let mut gates = ctx.sorted_gates();
    while !gates.is_empty() {
        let m = ctx.graph.maximal_matching(&used);
        if m.is_empty() {
            break;
        }
        let mut pick: Option<(usize, usize, (usize, usize))> = None;
        for (gi, &(q1, q2)) in gates.iter().enumerate() {
            let mut best: Option<(usize, (usize, usize))> = None;
            for (v1, v2) in directed(&m) {
                let c = eval.cost_with(&base, &[(cur[q1], v1), (cur[q2], v2)])?;
                if best.is_none_or(|(b, _)| c < b) {
                    best = Some((c, (v1, v2)));
                }
            }
            let (c, e) = best.expect("matching is nonempty");
            if pick.is_none_or(|(_, pc, _)| c > pc) {
                pick = Some((gi, c, e));
            }
        }
        let (gi, _, (v1, v2)) = pick.expect("gates is nonempty");
        let (q1, q2) = gates.remove(gi);
        p.insert(q1, v1)?;
        p.insert(q2, v2)?;
        base.insert(cur[q1], v1)?;
        base.insert(cur[q2], v2)?;
        used[v1] = true;
        used[v2] = true;
    }
    Ok(p)
}

/// Places the cheapest gate, then adds every further gate whose qubits can
/// each be moved within that cost, as close together as possible.
pub fn incremental_depth_map(ctx: &MapContext, eval: &mut CostEvaluator) -> Result<Placement> {
    let n = ctx.n_vertices();
    let cur = ctx.current;
    let dist = ctx.graph.distances()?;
    let mut p = ctx.empty();
    let gates = ctx.sorted_gates();
    let empty = PartialPermutation::empty(n);

    let mut first: Option<(usize, usize, (usize, usize))> = None;
    for (gi, &(q1, q2)) in gates.iter().enumerate() {
        for (v1, v2) in directed(ctx.graph.edges()) {
            let c = eval.cost_with(&empty, &[(cur[q1], v1), (cur[q2], v2)])?;
            if first.is_none_or(|(_, b, _)| c < b) {
                first = Some((gi, c, (v1, v2)));
            }
        }
    }
    let Some((g0, c0, (v1, v2))) = first else {
        return Ok(p);
    };
    let c_min = c0.max(1);
    let mut base = PartialPermutation::empty(n);
    let mut used = vec![false; n];
    let (q1, q2) = gates[g0];
    for (q, v) in [(q1, v1), (q2, v2)] {
        p.insert(q, v)?;
        base.insert(cur[q], v)?;
        used[v] = true;
    }

    for (gi, &(q1, q2)) in gates.iter().enumerate() {
        if gi == g0 {
            continue;
        }
        let mut eligible = [Vec::new(), Vec::new()];
        for (k, q) in [q1, q2].into_iter().enumerate() {
            for v in (0..n).filter(|&v| !used[v]) {
                if eval.cost_with(&base, &[(cur[q], v)])? <= c_min {
                    eligible[k].push(v);
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for &a in &eligible[0] {
            for &b in eligible[1].iter().filter(|&&b| b != a) {
                let d = dist.get(a, b);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        if let Some((_, a, b)) = best {
            for (q, v) in [(q1, a), (q2, b)] {
                p.insert(q, v)?;
                base.insert(cur[q], v)?;
                used[v] = true;
            }
        }
    }
    Ok(p)
}
