use rand::RngCore;

use super::{check_size, Permuter, SwapSchedule};
use crate::error::{Error, Result};
use crate::graph::{ArchitectureGraph, HierarchicalSpec};
use crate::matching::{max_bipartite_matching, WeightedBipartiteGraph};
use crate::perm::PartialPermutation;

/// One member of a representative set: the vertex of `column` whose token
/// (or lack of one) is sent towards `target_column`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Representative {
    pub vertex: usize,
    pub column: usize,
    pub target_column: usize,
    /// Padding entry for an unmapped vertex; its target is artificial.
    pub helper: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepresentativeSets {
    pub degree: usize,
    /// `sets[l][i]` is the representative of column `i` in set `l`.
    pub sets: Vec<Vec<Representative>>,
}

/// Column structure shared by the hierarchical and Cartesian routers.
#[derive(Clone, Debug)]
pub(crate) struct Columns {
    pub n1: usize,
    pub n2: usize,
    pub communicators: Vec<usize>,
}

impl Columns {
    pub fn new(spec: &HierarchicalSpec) -> Self {
        Columns {
            n1: spec.outer.n(),
            n2: spec.inner.n(),
            communicators: (0..spec.mask.len()).filter(|&j| spec.mask[j]).collect(),
        }
    }

    #[inline]
    pub fn col(&self, v: usize) -> usize {
        v / self.n2
    }

    #[inline]
    pub fn pos(&self, v: usize) -> usize {
        v % self.n2
    }

    #[inline]
    pub fn vertex(&self, col: usize, pos: usize) -> usize {
        col * self.n2 + pos
    }
}

fn leave_enter(pi: &PartialPermutation, cols: &Columns) -> (Vec<usize>, Vec<usize>) {
    let mut leave = vec![0; cols.n1];
    let mut enter = vec![0; cols.n1];
    for (v, t) in pi.pairs() {
        let (a, b) = (cols.col(v), cols.col(t));
        if a != b {
            leave[a] += 1;
            enter[b] += 1;
        }
    }
    (leave, enter)
}

/// The largest number of tokens that must leave, or must enter, a single
/// column.
pub fn hier_deg(pi: &PartialPermutation, spec: &HierarchicalSpec) -> usize {
    let cols = Columns::new(spec);
    let (leave, enter) = leave_enter(pi, &cols);
    leave
        .iter()
        .zip(&enter)
        .map(|(&l, &e)| l.max(e))
        .max()
        .unwrap_or(0)
}

/// `2 * ceil(deg / ham) - 1`, clamped at zero.
pub fn hier_lower_bound(pi: &PartialPermutation, spec: &HierarchicalSpec) -> usize {
    let d = hier_deg(pi, spec);
    (2 * d.div_ceil(spec.hamming_weight())).saturating_sub(1)
}

/// `ceil(deg / ham) * (rt1 + rt2) + rt2`.
pub fn hier_upper_bound(deg: usize, ham: usize, rt1: usize, rt2: usize) -> usize {
    deg.div_ceil(ham) * (rt1 + rt2) + rt2
}

/// Splits the column-crossing tokens of `π` into `deg(π)` sets holding at
/// most one vertex per column, with pairwise distinct target columns.
pub fn representative_sets(
    pi: &PartialPermutation,
    spec: &HierarchicalSpec,
) -> Result<RepresentativeSets> {
    let cols = Columns::new(spec);
    if pi.n() != cols.n1 * cols.n2 {
        return Err(Error::SizeMismatch {
            left: pi.n(),
            right: cols.n1 * cols.n2,
        });
    }
    let d = hier_deg(pi, spec);
    if d == 0 {
        return Ok(RepresentativeSets::default());
    }
    let (leave, enter) = leave_enter(pi, &cols);
    let mut edges: Vec<Representative> = Vec::new();
    let mut local_kept = vec![0; cols.n1];
    for (v, t) in pi.pairs() {
        let (a, b) = (cols.col(v), cols.col(t));
        if a != b {
            edges.push(Representative {
                vertex: v,
                column: a,
                target_column: b,
                helper: false,
            });
        } else if local_kept[a] < d - leave[a].max(enter[a]) {
            local_kept[a] += 1;
            edges.push(Representative {
                vertex: v,
                column: a,
                target_column: a,
                helper: false,
            });
        }
    }

    let mut deg_left = vec![0; cols.n1];
    let mut deg_right = vec![0; cols.n1];
    for e in &edges {
        deg_left[e.column] += 1;
        deg_right[e.target_column] += 1;
    }
    let image = pi.image_mask();
    let mut free_sources: Vec<Vec<usize>> = (0..cols.n1)
        .map(|c| {
            (0..cols.n2)
                .map(|j| cols.vertex(c, j))
                .filter(|&v| pi.get(v).is_none())
                .rev()
                .collect()
        })
        .collect();
    let mut free_targets: Vec<usize> = (0..cols.n1)
        .map(|c| (0..cols.n2).filter(|&j| !image[cols.vertex(c, j)]).count())
        .collect();
    for k in 0..cols.n1 {
        while deg_left[k] < d {
            let k2 = (0..cols.n1)
                .find(|&c| deg_right[c] < d && free_targets[c] > 0)
                .ok_or_else(|| Error::Internal("no column can absorb a helper".into()))?;
            let u = free_sources[k]
                .pop()
                .ok_or_else(|| Error::Internal("no unmapped vertex for a helper".into()))?;
            free_targets[k2] -= 1;
            deg_left[k] += 1;
            deg_right[k2] += 1;
            edges.push(Representative {
                vertex: u,
                column: k,
                target_column: k2,
                helper: true,
            });
        }
    }

    let mut sets = Vec::with_capacity(d);
    let mut alive: Vec<usize> = (0..edges.len()).collect();
    for _ in 0..d {
        let mut b = WeightedBipartiteGraph::new(cols.n1, cols.n1);
        for &e in &alive {
            b.add_edge(edges[e].column, edges[e].target_column, 0.0)?;
        }
        let m = max_bipartite_matching(&b);
        if m.len() != cols.n1 {
            return Err(Error::Internal(format!(
                "regular multigraph without a perfect matching ({} of {})",
                m.len(),
                cols.n1
            )));
        }
        let chosen: Vec<usize> = m.iter().map(|&i| alive[i]).collect();
        let mut set: Vec<Representative> = chosen.iter().map(|&e| edges[e]).collect();
        set.sort_by_key(|r| r.column);
        sets.push(set);
        let mut drop = vec![false; edges.len()];
        for e in chosen {
            drop[e] = true;
        }
        alive.retain(|&e| !drop[e]);
    }
    Ok(RepresentativeSets { degree: d, sets })
}

/// Tracks which original vertex's token currently sits where.
#[derive(Clone, Debug)]
pub(crate) struct Tokens {
    pub item_at: Vec<usize>,
    pub loc: Vec<usize>,
    pub dest: Vec<Option<usize>>,
}

impl Tokens {
    pub fn new(pi: &PartialPermutation) -> Self {
        Tokens {
            item_at: (0..pi.n()).collect(),
            loc: (0..pi.n()).collect(),
            dest: pi.as_slice().to_vec(),
        }
    }

    pub fn apply(&mut self, s: &SwapSchedule) {
        for (u, v) in s.swaps() {
            self.item_at.swap(u, v);
            self.loc[self.item_at[u]] = u;
            self.loc[self.item_at[v]] = v;
        }
    }

    pub fn dest_at(&self, pos: usize) -> Option<usize> {
        self.dest[self.item_at[pos]]
    }
}

/// Routes a local permutation on every column at once.
pub(crate) fn route_columns(
    cols: &Columns,
    sub: &dyn Permuter,
    locals: &[PartialPermutation],
    rng: &mut dyn RngCore,
) -> Result<SwapSchedule> {
    let mut phase = SwapSchedule::new();
    for (c, local) in locals.iter().enumerate() {
        if local.is_resolved() {
            continue;
        }
        let s = sub.route(local, rng)?;
        phase.merge_parallel(s.map_vertices(|j| cols.vertex(c, j)));
    }
    Ok(phase)
}

/// Routes a local permutation on the row through position `pos` of every
/// column.
pub(crate) fn route_row(
    cols: &Columns,
    sub: &dyn Permuter,
    pos: usize,
    local: &PartialPermutation,
    rng: &mut dyn RngCore,
) -> Result<SwapSchedule> {
    if local.is_resolved() {
        return Ok(SwapSchedule::new());
    }
    let s = sub.route(local, rng)?;
    Ok(s.map_vertices(|i| cols.vertex(i, pos)))
}

/// Final phase: every token is in its target column; finish inside columns.
pub(crate) fn finish_columns(
    cols: &Columns,
    sub: &dyn Permuter,
    tokens: &Tokens,
    rng: &mut dyn RngCore,
) -> Result<SwapSchedule> {
    let mut locals = vec![PartialPermutation::empty(cols.n2); cols.n1];
    for pos in 0..cols.n1 * cols.n2 {
        if let Some(t) = tokens.dest_at(pos) {
            if cols.col(t) != cols.col(pos) {
                return Err(Error::Internal(format!(
                    "token for {t} left in column {}",
                    cols.col(pos)
                )));
            }
            locals[cols.col(pos)].insert(cols.pos(pos), cols.pos(t))?;
        }
    }
    route_columns(cols, sub, &locals, rng)
}

/// Routing on a hierarchical product through its communicator vertices.
pub struct HierarchicalPermuter {
    graph: ArchitectureGraph,
    spec: HierarchicalSpec,
    cols: Columns,
    outer: Box<dyn Permuter>,
    inner: Box<dyn Permuter>,
}

impl HierarchicalPermuter {
    /// `outer` routes on `G1` (rows), `inner` on `G2` (columns).
    pub fn new(
        graph: ArchitectureGraph,
        outer: Box<dyn Permuter>,
        inner: Box<dyn Permuter>,
    ) -> Result<Self> {
        let spec = graph.hierarchy().ok_or_else(|| {
            Error::UnsupportedGraph(format!("{} graph is not a product", graph.kind_name()))
        })?;
        if outer.graph().n() != spec.outer.n() || inner.graph().n() != spec.inner.n() {
            return Err(Error::UnsupportedGraph(
                "factor permuters do not match".into(),
            ));
        }
        let cols = Columns::new(&spec);
        Ok(HierarchicalPermuter {
            graph,
            spec,
            cols,
            outer,
            inner,
        })
    }

    pub fn spec(&self) -> &HierarchicalSpec {
        &self.spec
    }

    /// Which members of a set actually travel. A member whose token stays
    /// in its column is dropped; an unmapped member only travels when a
    /// token of the same set is coming into its column.
    fn keep(set: &[Representative], r: &Representative) -> bool {
        if r.helper {
            set.iter()
                .any(|x| !x.helper && x.column != x.target_column && x.target_column == r.column)
        } else {
            r.column != r.target_column
        }
    }
}

impl Permuter for HierarchicalPermuter {
    fn graph(&self) -> &ArchitectureGraph {
        &self.graph
    }

    fn name(&self) -> &'static str {
        "hierarchical"
    }

    fn is_randomized(&self) -> bool {
        self.outer.is_randomized() || self.inner.is_randomized()
    }

    fn route(&self, pi: &PartialPermutation, rng: &mut dyn RngCore) -> Result<SwapSchedule> {
        check_size(&self.graph, pi)?;
        let cols = &self.cols;
        let reps = representative_sets(pi, &self.spec)?;
        let ham = cols.communicators.len();
        let mut tokens = Tokens::new(pi);
        let mut schedule = SwapSchedule::new();
        let rounds = reps.degree.div_ceil(ham);
        for round in 0..rounds {
            let batch: Vec<(usize, &Vec<Representative>)> = (0..ham)
                .filter_map(|k| reps.sets.get(round * ham + k).map(|s| (k, s)))
                .collect();

            let mut locals = vec![PartialPermutation::empty(cols.n2); cols.n1];
            for &(k, set) in &batch {
                for r in set.iter().filter(|r| Self::keep(set, r)) {
                    let at = tokens.loc[r.vertex];
                    debug_assert_eq!(cols.col(at), r.column);
                    locals[r.column].insert(cols.pos(at), cols.communicators[k])?;
                }
            }
            let phase = route_columns(cols, self.inner.as_ref(), &locals, rng)?;
            tokens.apply(&phase);
            schedule.append(phase);

            let mut phase = SwapSchedule::new();
            for &(k, set) in &batch {
                let mut row = PartialPermutation::empty(cols.n1);
                for r in set {
                    if !Self::keep(set, r) {
                        row.insert(r.column, r.column)?;
                    } else if !r.helper {
                        row.insert(r.column, r.target_column)?;
                    }
                }
                let pos = cols.communicators[k];
                phase.merge_parallel(route_row(cols, self.outer.as_ref(), pos, &row, rng)?);
            }
            tokens.apply(&phase);
            schedule.append(phase);
        }
        let phase = finish_columns(cols, self.inner.as_ref(), &tokens, rng)?;
        schedule.append(phase);
        Ok(schedule)
    }
}
