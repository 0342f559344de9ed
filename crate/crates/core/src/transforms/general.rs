use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_fits, initial_placement, Builder, TransformResult};
use crate::circuit::{Circuit, Frontier};
use crate::error::{Error, Result};
use crate::mappers::{
    simple_size_map, CostEvaluator, MapContext, MapperKind, Objective, MAPPER_TRIALS,
};
use crate::permuters::{route_best_of, Permuter};

/// Permuter trials per routed placement for randomized permuters.
pub const TRANSFORM_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneralOptions {
    pub transform_trials: usize,
    pub mapper_trials: usize,
    pub seed: u64,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        GeneralOptions {
            transform_trials: TRANSFORM_TRIALS,
            mapper_trials: MAPPER_TRIALS,
            seed: 0,
        }
    }
}

impl GeneralOptions {
    pub fn with_seed(seed: u64) -> Self {
        GeneralOptions {
            seed,
            ..Self::default()
        }
    }
}

/// Mapper plus permuter: ask the mapper where the front layer should go,
/// route there, run what became executable, repeat.
///
/// If an iteration runs no gate, the next one uses the simple size mapper,
/// which always makes one gate executable.
pub fn general_transform(
    input: &Circuit,
    permuter: &dyn Permuter,
    mapper: MapperKind,
    opts: &GeneralOptions,
) -> Result<TransformResult> {
    let g = permuter.graph();
    check_fits(input, g)?;
    let mut b = Builder::new(g, initial_placement(input, g)?)?;
    let mut front = Frontier::new(input);
    let mut eval =
        CostEvaluator::new(permuter, mapper.objective(), opts.seed).with_trials(opts.mapper_trials);
    let mut guard_eval = CostEvaluator::new(permuter, Objective::Size, opts.seed ^ 0x5eed)
        .with_trials(opts.mapper_trials);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let by_size = mapper.objective() == Objective::Size;
    let limit = 2 * input.len() + 2;
    let mut stalled = false;

    b.execute_ready(input, &mut front)?;
    while !front.is_done() {
        b.stats.iterations += 1;
        if b.stats.iterations > limit {
            return Err(Error::Internal("transformation makes no progress".into()));
        }
        let layer = front.front();
        let pos = b.pos().to_vec();
        let ctx = MapContext {
            graph: g,
            layer: &layer.two_qubit,
            current: &pos,
        };
        let p = if stalled {
            b.stats.fallbacks += 1;
            simple_size_map(&ctx, &mut guard_eval)?
        } else {
            mapper.place(&ctx, &mut eval)?
        };
        let pi = p.relative_to(&pos)?;
        let schedule = route_best_of(permuter, &pi, opts.transform_trials, by_size, &mut rng)?;
        for (u, v) in schedule.swaps() {
            b.swap(u, v)?;
        }
        stalled = b.execute_ready(input, &mut front)?.is_empty();
    }
    Ok(b.finish())
}
