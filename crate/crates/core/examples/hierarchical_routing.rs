//! Builds a hierarchical product from the text format and compares the
//! realized depth with the degree-based bounds.

use qroute::permuters::{depth_permuter, hier_deg, hier_lower_bound, hier_upper_bound};
use qroute::{parse_hierarchical, PartialPermutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ARCH: &str = "\
# two rows of three, linked at both ends
outer 2
outer-edges 0-1
inner 3
inner-edges 0-1 1-2
mask 1 0 1
";

fn main() -> qroute::Result<()> {
    let g = parse_hierarchical(ARCH)?;
    let spec = g.hierarchy().expect("product graph");
    println!("{} vertices, edges {:?}", g.n(), g.edges());
    let permuter = depth_permuter(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for targets in [[3, 4, 5, 0, 1, 2], [5, 1, 3, 2, 4, 0], [1, 0, 2, 4, 3, 5]] {
        let pi = PartialPermutation::from_total(&targets)?;
        let s = permuter.route(&pi, &mut rng)?;
        let deg = hier_deg(&pi, &spec);
        println!(
            "{targets:?}: deg {deg}, depth {} within [{}, {}]",
            s.depth(),
            hier_lower_bound(&pi, &spec),
            hier_upper_bound(deg, spec.hamming_weight(), 1, 3)
        );
    }
    Ok(())
}
