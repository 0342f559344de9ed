//! Partial token swapping on an irregular graph, with the move counts.

use qroute::permuters::TokenSwapper;
use qroute::{ArchitectureGraph, PartialPermutation};

fn main() -> qroute::Result<()> {
    let g = ArchitectureGraph::from_edges(
        7,
        &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6), (6, 2)],
    )?;
    let pi = PartialPermutation::from_pairs(7, &[(0, 3), (3, 0), (6, 1)])?;
    let (schedule, stats) = TokenSwapper::new(g.clone()).route_with_stats(&pi)?;
    assert!(schedule.realizes(&pi));
    for (u, v) in schedule.swaps() {
        println!("swap {u} {v}");
    }
    println!("{stats:?}");
    println!(
        "{} swaps for total distance {}",
        stats.total(),
        stats.initial_distance
    );
    Ok(())
}
