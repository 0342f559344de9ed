//! Runs every mapper on one front layer and prints the placements and the
//! cost of reaching them.

use qroute::mappers::{CostEvaluator, MapContext, MapperKind, Objective};
use qroute::permuters::{depth_permuter, size_permuter};
use qroute::ArchitectureGraph;

fn main() -> qroute::Result<()> {
    let g = ArchitectureGraph::grid(3, 3)?;
    let current = [0, 8, 2, 6, 4];
    let layer = [(0, 1), (2, 3)];
    let ctx = MapContext {
        graph: &g,
        layer: &layer,
        current: &current,
    };
    for kind in MapperKind::ALL {
        let permuter = match kind.objective() {
            Objective::Depth => depth_permuter(&g),
            Objective::Size => size_permuter(&g),
        };
        let mut eval = CostEvaluator::new(permuter.as_ref(), kind.objective(), 7);
        let p = kind.place(&ctx, &mut eval)?;
        let cost = eval.cost(&p.relative_to(&current)?)?;
        println!("{kind:>13}: {p:?} cost {cost} ({:?})", kind.objective());
    }
    Ok(())
}
