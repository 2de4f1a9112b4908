//! Monte Carlo simulation of the fixed-point process `X_1, X_2, ...`.
//!
//! At a maximal level each fixed vertex keeps its two children fixed or
//! swaps them with probability 1/2, so `X_n = 2 Bin(X_{n-1}, 1/2)` from
//! `X_0 = 1`. Non-maximal levels follow the chosen [`NonMaximalModel`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fpp::{fpp_f64, fpp_table, EXACT_FPP_MAX};
use crate::error::{Error, Result};

/// Deepest simulated level; `X_n <= 2^n` must fit in a `u64`.
pub const MAX_DEPTH: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NonMaximalModel {
    /// Trivial `H_n`: every fixed vertex has two fixed children.
    #[default]
    Double,
    /// `X_n = X_{n-1}`.
    Hold,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelStats {
    pub n: usize,
    /// Paths with `X_n > 0`.
    pub alive: u64,
    pub p_hat: f64,
    /// `sqrt(p(1-p)/trials)` at the exact `p` when known, else at `p_hat`.
    pub stderr: f64,
    /// `P(X_n > 0)` when levels `1..=n` are all maximal: exact up to
    /// [`EXACT_FPP_MAX`], then in floating point.
    pub fpp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProcessReport {
    pub seed: u64,
    pub depth: usize,
    pub trials: u64,
    pub model: NonMaximalModel,
    pub maximal_mask: Vec<bool>,
    pub levels: Vec<LevelStats>,
    pub constant_window: usize,
    /// Paths whose last `constant_window` values agree.
    pub constant_fraction: f64,
}

/// One trial's path `X_1 .. X_depth`; trial `i` draws from stream `i`.
pub fn simulate_path(seed: u64, trial: u64, mask: &[bool], model: NonMaximalModel) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut x = 1u64;
    mask.iter()
        .map(|&maximal| {
            x = if maximal {
                2 * Binomial::new(x, 0.5).expect("p = 1/2").sample(&mut rng)
            } else {
                match model {
                    NonMaximalModel::Double => 2 * x,
                    NonMaximalModel::Hold => x,
                }
            };
            x
        })
        .collect()
}

pub fn simulate_process(
    seed: u64,
    trials: u64,
    mask: &[bool],
    model: NonMaximalModel,
) -> Result<ProcessReport> {
    let depth = mask.len();
    if trials == 0 || depth == 0 || depth > MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "need trials >= 1 and 1 <= depth <= {MAX_DEPTH}"
        )));
    }
    let window = depth.min(3);
    let (alive, constant) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let path = simulate_path(seed, t, mask, model);
            let alive: Vec<u64> = path.iter().map(|&x| u64::from(x > 0)).collect();
            let tail = &path[depth - window..];
            (alive, u64::from(tail.iter().all(|&x| x == tail[0])))
        })
        .reduce(
            || (vec![0; depth], 0),
            |(mut a, c), (b, d)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, c + d)
            },
        );
    let exact = fpp_table(depth.min(EXACT_FPP_MAX)).values;
    let full_prefix = mask.iter().take_while(|&&m| m).count();
    let n_trials = trials as f64;
    let levels = alive
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let p_hat = a as f64 / n_trials;
            let full = i < full_prefix;
            let p = if full { fpp_f64(i + 1) } else { p_hat };
            let fpp = full.then(|| match exact.get(i) {
                Some(f) => f.to_string(),
                None => p.to_string(),
            });
            LevelStats {
                n: i + 1,
                alive: a,
                p_hat,
                stderr: (p * (1.0 - p) / n_trials).sqrt(),
                fpp,
            }
        })
        .collect();
    Ok(ProcessReport {
        seed,
        depth,
        trials,
        model,
        maximal_mask: mask.to_vec(),
        levels,
        constant_window: window,
        constant_fraction: constant as f64 / n_trials,
    })
}
