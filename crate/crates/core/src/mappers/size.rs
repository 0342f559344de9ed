use super::{directed, CostEvaluator, MapContext, Placement};
use crate::error::Result;
use crate::perm::PartialPermutation;

type Edge = (usize, usize);

/// Moves the single cheapest gate onto its cheapest edge. Returns the empty
/// placement if some gate can already run.
pub fn simple_size_map(ctx: &MapContext, eval: &mut CostEvaluator) -> Result<Placement> {
    let mut p = ctx.empty();
    if ctx.any_executable() {
        return Ok(p);
    }
    let cur = ctx.current;
    let empty = PartialPermutation::empty(ctx.n_vertices());
    let mut best: Option<(usize, Edge, Edge)> = None;
    for (q1, q2) in ctx.sorted_gates() {
        for (v1, v2) in directed(ctx.graph.edges()) {
            let c = eval.cost_with(&empty, &[(cur[q1], v1), (cur[q2], v2)])?;
            if best.is_none_or(|(b, _, _)| c < b) {
                best = Some((c, (q1, q2), (v1, v2)));
            }
        }
    }
    if let Some((_, (q1, q2), (v1, v2))) = best {
        p.insert(q1, v1)?;
        p.insert(q2, v2)?;
    }
    Ok(p)
}

/// Starts from [`simple_size_map`] and keeps adding gates as long as moving
/// them now is estimated to save swaps compared with moving them after the
/// current plan has run.
pub fn extension_size_map(ctx: &MapContext, eval: &mut CostEvaluator) -> Result<Placement> {
    let mut p = simple_size_map(ctx, eval)?;
    if p.is_empty() {
        return Ok(p);
    }
    let n = ctx.n_vertices();
    let cur = ctx.current;
    let mut used: Vec<bool> = (0..n).map(|v| p.is_used(v)).collect();
    let mut gates: Vec<(usize, usize)> = ctx
        .sorted_gates()
        .into_iter()
        .filter(|&(a, _)| p.get(a).is_none())
        .collect();
    let empty = PartialPermutation::empty(n);

    while !gates.is_empty() {
        let free: Vec<(usize, usize)> = ctx
            .graph
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !used[a] && !used[b])
            .collect();
        if free.is_empty() {
            break;
        }
        let base = p.relative_to(cur)?;
        let plan = eval.schedule(&base)?;
        let planned = eval.measure(&plan) as i64;
        let after = replay(cur, n, &plan);

        let mut pick: Option<(i64, usize, (usize, usize))> = None;
        for (gi, &(q1, q2)) in gates.iter().enumerate() {
            let mut later = usize::MAX;
            for (v1, v2) in directed(ctx.graph.edges()) {
                later = later.min(eval.cost_with(&empty, &[(after[q1], v1), (after[q2], v2)])?);
            }
            let mut now: Option<(usize, (usize, usize))> = None;
            for (u1, u2) in directed(&free) {
                let c = eval.cost_with(&base, &[(cur[q1], u1), (cur[q2], u2)])?;
                if now.is_none_or(|(b, _)| c < b) {
                    now = Some((c, (u1, u2)));
                }
            }
            let (c, e) = now.expect("free edges exist");
            let saved = planned + later as i64 - c as i64;
            if pick.is_none_or(|(s, _, _)| saved > s) {
                pick = Some((saved, gi, e));
            }
        }
        let (saved, gi, (u1, u2)) = pick.expect("gates is nonempty");
        if saved < 0 {
            break;
        }
        let (q1, q2) = gates.remove(gi);
        p.insert(q1, u1)?;
        p.insert(q2, u2)?;
        used[u1] = true;
        used[u2] = true;
    }
    Ok(p)
}

/// Qubit positions after running `plan` from `current`.
fn replay(current: &[usize], n: usize, plan: &crate::permuters::SwapSchedule) -> Vec<usize> {
    let mut at: Vec<Option<usize>> = vec![None; n];
    for (q, &v) in current.iter().enumerate() {
        at[v] = Some(q);
    }
    for (u, v) in plan.swaps() {
        at.swap(u, v);
    }
    let mut pos = current.to_vec();
    for (v, q) in at.iter().enumerate() {
        if let Some(q) = *q {
            pos[q] = v;
        }
    }
    pos
}
