use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::RngCore;

use super::hierarchical::{finish_columns, route_columns, route_row, Columns, Tokens};
use super::{check_size, Permuter, SwapSchedule};
use crate::error::{Error, Result};
use crate::graph::ArchitectureGraph;
use crate::matching::{min_weight_perfect_matching, WeightedBipartiteGraph};
use crate::perm::PartialPermutation;

/// Weight of the padding edges that let columns without pending tokens take
/// part in a row's matching.
const PAD_WEIGHT: f64 = 0.5;

/// Column, row, column routing on `G1 × G2`, with rows assigned by
/// per-row minimum cost matchings.
pub struct CartesianPermuter {
    graph: ArchitectureGraph,
    cols: Columns,
    outer: Box<dyn Permuter>,
    inner: Box<dyn Permuter>,
}

impl CartesianPermuter {
    /// `outer` routes on `G1` (rows), `inner` on `G2` (columns).
    pub fn new(
        graph: ArchitectureGraph,
        outer: Box<dyn Permuter>,
        inner: Box<dyn Permuter>,
    ) -> Result<Self> {
        let spec = graph
            .hierarchy()
            .filter(|s| s.is_cartesian())
            .ok_or_else(|| {
                Error::UnsupportedGraph(format!(
                    "{} graph is not a Cartesian product",
                    graph.kind_name()
                ))
            })?;
        if outer.graph().n() != spec.outer.n() || inner.graph().n() != spec.inner.n() {
            return Err(Error::UnsupportedGraph(
                "factor permuters do not match".into(),
            ));
        }
        Ok(CartesianPermuter {
            graph,
            cols: Columns::new(&spec),
            outer,
            inner,
        })
    }

    /// Assigns every token a row to cross in. Returns the per-column plans.
    fn assign_rows(
        &self,
        pi: &PartialPermutation,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<PartialPermutation>> {
        let cols = &self.cols;
        let (n1, n2) = (cols.n1, cols.n2);
        let mut plans = vec![PartialPermutation::empty(n2); n1];
        let mut pending: Vec<usize> = pi.domain().collect();
        let mut single: HashMap<(usize, usize), usize> = HashMap::new();
        let mut rt_single = |a: usize, b: usize, rng: &mut dyn RngCore| -> Result<usize> {
            if let Some(&d) = single.get(&(a, b)) {
                return Ok(d);
            }
            let p = PartialPermutation::from_pairs(n2, &[(a, b)])?;
            let d = self.inner.route(&p, rng)?.depth();
            single.insert((a, b), d);
            Ok(d)
        };

        let mut rows: Vec<usize> = (0..n2).collect();
        rows.shuffle(rng);
        for (done, &row) in rows.iter().enumerate() {
            let remaining = n2 - done;
            let mut plan_depth = Vec::with_capacity(n1);
            for plan in &plans {
                plan_depth.push(self.inner.route(plan, rng)?.depth());
            }
            let mut b = WeightedBipartiteGraph::new(n1, n1);
            let mut source = Vec::new();
            let mut deg_left = vec![0; n1];
            let mut deg_right = vec![0; n1];
            for &v in &pending {
                let t = pi.get(v).expect("pending tokens are mapped");
                let (c, j) = (cols.col(v), cols.pos(v));
                let mut with = plans[c].clone();
                with.insert(j, row)?;
                let cost = self.inner.route(&with, rng)?.depth() as f64
                    + rt_single(row, cols.pos(t), rng)? as f64
                    - plan_depth[c] as f64
                    - rt_single(j, cols.pos(t), rng)? as f64;
                b.add_edge(c, cols.col(t), cost)?;
                source.push(Some(v));
                deg_left[c] += 1;
                deg_right[cols.col(t)] += 1;
            }
            for u in (0..n1).filter(|&u| deg_left[u] < remaining) {
                for w in (0..n1).filter(|&w| deg_right[w] < remaining) {
                    b.add_edge(u, w, PAD_WEIGHT)?;
                    source.push(None);
                }
            }
            let matching = min_weight_perfect_matching(&b)?;
            let mut taken = vec![false; pi.n()];
            for e in matching {
                if let Some(v) = source[e] {
                    plans[cols.col(v)].insert(cols.pos(v), row)?;
                    taken[v] = true;
                }
            }
            pending.retain(|&v| !taken[v]);
        }
        if !pending.is_empty() {
            return Err(Error::Internal("tokens left without a row".into()));
        }
        Ok(plans)
    }
}

impl Permuter for CartesianPermuter {
    fn graph(&self) -> &ArchitectureGraph {
        &self.graph
    }

    fn name(&self) -> &'static str {
        "cartesian"
    }

    fn is_randomized(&self) -> bool {
        self.cols.n2 > 1
    }

    fn worst_case_depth(&self) -> Option<usize> {
        Some(self.outer.worst_case_depth()? + 2 * self.inner.worst_case_depth()?)
    }

    fn route(&self, pi: &PartialPermutation, rng: &mut dyn RngCore) -> Result<SwapSchedule> {
        check_size(&self.graph, pi)?;
        let cols = &self.cols;
        if pi.is_resolved() {
            return Ok(SwapSchedule::new());
        }
        let plans = self.assign_rows(pi, rng)?;
        let mut tokens = Tokens::new(pi);
        let mut schedule = route_columns(cols, self.inner.as_ref(), &plans, rng)?;
        tokens.apply(&schedule);

        let mut phase = SwapSchedule::new();
        for row in 0..cols.n2 {
            let mut local = PartialPermutation::empty(cols.n1);
            for c in 0..cols.n1 {
                if let Some(t) = tokens.dest_at(cols.vertex(c, row)) {
                    local.insert(c, cols.col(t))?;
                }
            }
            phase.merge_parallel(route_row(cols, self.outer.as_ref(), row, &local, rng)?);
        }
        tokens.apply(&phase);
        schedule.append(phase);

        schedule.append(finish_columns(cols, self.inner.as_ref(), &tokens, rng)?);
        Ok(schedule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permuters::depth_permuter;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_empty() {
        let g = ArchitectureGraph::grid(3, 3).unwrap();
        let s = depth_permuter(&g)
            .route(
                &PartialPermutation::identity(9),
                &mut ChaCha8Rng::seed_from_u64(1),
            )
            .unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn grid_2x3_total_bound() {
        let g = ArchitectureGraph::grid(2, 3).unwrap();
        let p = depth_permuter(&g);
        assert_eq!(p.worst_case_depth(), Some(8));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let mut t: Vec<usize> = (0..6).collect();
            t.shuffle(&mut rng);
            let pi = PartialPermutation::from_total(&t).unwrap();
            let s = p.route(&pi, &mut rng).unwrap();
            s.validate(&g).unwrap();
            assert!(s.realizes(&pi));
            assert!(s.depth() <= 8);
        }
    }

    #[test]
    fn partial_on_grid_3x3() {
        let g = ArchitectureGraph::grid(3, 3).unwrap();
        let p = depth_permuter(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut src: Vec<usize> = (0..9).collect();
            let mut dst = src.clone();
            src.shuffle(&mut rng);
            dst.shuffle(&mut rng);
            let pairs: Vec<_> = src.iter().copied().zip(dst).take(4).collect();
            let pi = PartialPermutation::from_pairs(9, &pairs).unwrap();
            let s = p.route(&pi, &mut rng).unwrap();
            s.validate(&g).unwrap();
            assert!(s.realizes(&pi));
            assert!(s.depth() <= 9);
        }
    }
}
