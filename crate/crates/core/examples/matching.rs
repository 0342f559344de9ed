//! Maximum-cardinality and minimum-weight perfect bipartite matchings.

use qroute::{max_bipartite_matching, min_weight_perfect_matching, WeightedBipartiteGraph};

fn main() -> qroute::Result<()> {
    let weights = [[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]];
    let mut b = WeightedBipartiteGraph::new(3, 3);
    for (l, row) in weights.iter().enumerate() {
        for (r, &w) in row.iter().enumerate() {
            b.add_edge(l, r, w)?;
        }
    }
    let m = min_weight_perfect_matching(&b)?;
    let total: f64 = m.iter().map(|&e| b.edge(e).2).sum();
    for &e in &m {
        let (l, r, w) = b.edge(e);
        println!("{l} -> {r} ({w})");
    }
    println!("total {total}");

    let mut sparse = WeightedBipartiteGraph::new(3, 2);
    for (l, r) in [(0, 0), (1, 0), (2, 0), (2, 1)] {
        sparse.add_edge(l, r, 1.0)?;
    }
    println!(
        "maximum matching size {}",
        max_bipartite_matching(&sparse).len()
    );
    Ok(())
}
