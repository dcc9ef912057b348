use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ep_search::{build_system, EPConstraintSystem};
use crate::error::{Error, Result};
use crate::graph::{MatrixWeightedGraph, SignRequirement, WeightPattern};
use crate::linalg::AffineSpace;
use crate::partition::{EpOptions, Partition};
use crate::rational::{int, Rational};

/// Draws per coefficient range before the range is widened once.
pub const SAMPLE_ATTEMPTS: usize = 64;

const NARROW_RANGE: i64 = 9;
const WIDE_RANGE: i64 = 999;

/// Stable per-task seed from a base seed and task coordinates.
pub fn derive_seed(base: u64, system: usize, sample: usize) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(base ^ splitmix(((system as u64) << 32) | sample as u64))
}

/// Orientation to draw a free variable from, when its edge demands one.
fn preferred_sign(p: &WeightPattern, var: usize) -> Option<bool> {
    let e = var / (p.d() * p.d());
    let mut signs = p.sign_requirements(e).map(|s| {
        matches!(s, SignRequirement::Positive | SignRequirement::Nonnegative)
    });
    let first = signs.next()?;
    signs.all(|s| s == first).then_some(first)
}

/// Draws a point of `space` with nonzero integer free coordinates, rejecting
/// points that zero an edge block or break a sign requirement.
pub fn sample_weights(p: &WeightPattern, space: &AffineSpace, seed: u64) -> Result<MatrixWeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orientation: Vec<Option<bool>> = space.free_vars.iter().map(|&v| preferred_sign(p, v)).collect();
    let mut last_bad = 0;
    for range in [NARROW_RANGE, WIDE_RANGE] {
        for _ in 0..SAMPLE_ATTEMPTS {
            let coefficients: Vec<Rational> = orientation
                .iter()
                .map(|o| {
                    let magnitude = rng.random_range(1..=range);
                    let positive = o.unwrap_or_else(|| rng.random_bool(0.5));
                    int(if positive { magnitude } else { -magnitude })
                })
                .collect();
            let values = space.point(&coefficients);
            match p.first_violation(&values) {
                None => return p.assemble(&values),
                Some(e) => last_bad = e,
            }
        }
    }
    let (from, to) = p.edges().get(last_bad).copied().unwrap_or((0, 0));
    Err(Error::SamplingExhausted {
        from: from + 1,
        to: to + 1,
        attempts: 2 * SAMPLE_ATTEMPTS,
    })
}

/// Weight choice satisfying the system's equitability constraints.
pub fn sample_system(p: &WeightPattern, system: &EPConstraintSystem, seed: u64) -> Result<MatrixWeightedGraph> {
    match (&system.solution, system.feasible) {
        (Some(space), true) => sample_weights(p, space, seed),
        _ => Err(Error::Infeasible(format!(
            "partition {} admits no weight choice with every edge nonzero",
            system.partition
        ))),
    }
}

/// Weight choice subject only to the pattern's own constraints.
pub fn sample_pattern(p: &WeightPattern, seed: u64) -> Result<MatrixWeightedGraph> {
    let system = build_system(p, &Partition::singletons(p.n()), &EpOptions::default());
    sample_system(p, &system, seed)
}
