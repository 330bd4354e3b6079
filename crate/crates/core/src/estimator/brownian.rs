//! Seeded planar random walks.
//!
//! Increments are drawn in fixed chunks of [`CHUNK`]. Chunk `c` uses a
//! ChaCha20 generator seeded with `seed_from_u64(seed)` on stream `c`, and
//! draws `x` then `y` for each increment from the ziggurat standard normal.
//! The path is the prefix sum of the increments starting at the origin, so
//! it is identical however the chunks are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{PathMetadata, Point, Polyline};

pub const CHUNK: usize = 4096;

/// Recorded in the path metadata.
pub const PRNG_NAME: &str = "chacha20(seed_from_u64, stream=chunk, 4096/chunk); normal=ziggurat";

/// `n` vertices of a walk with independent `N(0, step_std^2)` increments
/// per axis.
pub fn brownian_path(n: usize, seed: u64, step_std: f64) -> Result<Polyline> {
    brownian_path_with(n, seed, step_std, Execution::default())
}

pub fn brownian_path_with(n: usize, seed: u64, step_std: f64, exec: Execution) -> Result<Polyline> {
    if n < 2 {
        return Err(Error::param(
            "n",
            format!("needs at least 2 vertices, got {n}"),
        ));
    }
    if !(step_std.is_finite() && step_std > 0.0) {
        return Err(Error::param(
            "step_std",
            format!("must be positive, got {step_std}"),
        ));
    }
    let steps = n - 1;
    let increments = exec
        .map_indices(steps.div_ceil(CHUNK), |c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(steps - c * CHUNK);
            (0..len)
                .map(|_| {
                    let x: f64 = StandardNormal.sample(&mut rng);
                    let y: f64 = StandardNormal.sample(&mut rng);
                    Point::new(x * step_std, y * step_std)
                })
                .collect::<Vec<_>>()
        })
        .concat();

    let mut vertices = Vec::with_capacity(n);
    let mut at = Point::default();
    vertices.push(at);
    for d in increments {
        at = at + d;
        vertices.push(at);
    }
    Ok(Polyline::new(vertices)?.with_metadata(PathMetadata {
        seed,
        n,
        step_std,
        prng: PRNG_NAME.to_string(),
    }))
}
