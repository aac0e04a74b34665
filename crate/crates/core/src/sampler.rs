//! Seeded random walks over a transition matrix.
//!
//! Draws come from ChaCha8 seeded with `seed_from_u64`, and each uniform
//! variate uses the top 53 bits of one `u64`, so a given seed yields the
//! same walk on every platform.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::matrix::TransitionMatrix;

pub const MAX_WALK_LENGTH: usize = 1024;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub start: usize,
    pub length: usize,
    pub seed: u64,
}

fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index drawn from one row of the matrix; `None` for an absorbing row.
fn draw(row: &[f64], u: f64) -> Option<usize> {
    let mut cumulative = 0.0;
    let mut last = None;
    for (j, &p) in row.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        cumulative += p;
        last = Some(j);
        if u < cumulative {
            return last;
        }
    }
    // Rounding can leave the cumulative sum just under 1.
    last
}

/// A walk of at most `cfg.length` chord indices starting at `cfg.start`.
/// Stops early when it reaches an absorbing chord.
pub fn sample_walk(matrix: &TransitionMatrix, cfg: WalkConfig) -> Result<Vec<usize>, Error> {
    if cfg.start >= matrix.len() {
        return Err(Error::UnknownIndex {
            index: cfg.start,
            len: matrix.len(),
        });
    }
    if cfg.length == 0 || cfg.length > MAX_WALK_LENGTH {
        return Err(Error::InvalidLength(cfg.length));
    }
    if cfg.length > 1 && matrix.is_absorbing(cfg.start) {
        return Err(Error::DeadStart(cfg.start));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut walk = Vec::with_capacity(cfg.length);
    let mut current = cfg.start;
    walk.push(current);
    while walk.len() < cfg.length {
        match draw(matrix.row(current), unit_interval(&mut rng)) {
            Some(next) => {
                walk.push(next);
                current = next;
            }
            None => break,
        }
    }
    Ok(walk)
}
