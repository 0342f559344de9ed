//! Routes a partial permutation on a grid with the depth-oriented permuter
//! and prints the swap layers.

use qroute::permuters::depth_permuter;
use qroute::{parse_arch_spec, PartialPermutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qroute::Result<()> {
    let g = parse_arch_spec("grid:3x4")?;
    // Swap the corners, leave the rest unconstrained.
    let pi = PartialPermutation::from_pairs(g.n(), &[(0, 11), (11, 0), (3, 8), (8, 3)])?;
    let schedule = depth_permuter(&g).route(&pi, &mut ChaCha8Rng::seed_from_u64(0))?;
    schedule.validate(&g)?;
    assert!(schedule.realizes(&pi));
    for (i, step) in schedule.steps().iter().enumerate() {
        println!("step {i}: {step:?}");
    }
    println!("depth {} size {}", schedule.depth(), schedule.size());
    Ok(())
}
