//! Sampling codings from the product measure with per-generator weights.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Rational;
use crate::certify::{certify_chain, ChainSummary};
use crate::dynamics::{GeneratorSet, SequenceCoding};
use crate::error::{Error, Result};

/// Exact weights as integers over a common `u64` denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    cumulative: Vec<u64>,
    denominator: u64,
    values: Vec<Rational>,
}

impl Weights {
    pub fn new(values: &[Rational]) -> Result<Self> {
        if values.is_empty() || values.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        if values.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidArgument("weights must sum to 1".into()));
        }
        let lcm = values.iter().fold(num_bigint::BigInt::one(), |l, w| l.lcm(w.denom()));
        let denominator = lcm
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("weight denominators are too large".into()))?;
        let mut acc = 0u64;
        let cumulative = values
            .iter()
            .map(|w| {
                acc += (w.numer() * (&lcm / w.denom())).to_u64().unwrap();
                acc
            })
            .collect();
        Ok(Weights {
            cumulative,
            denominator,
            values: values.to_vec(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let w = Rational::new(1.into(), n.into());
        Self::new(&vec![w; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let r = rng.random_range(0..self.denominator);
        self.cumulative.partition_point(|&c| c <= r)
    }
}

/// `theta_1 .. theta_length` (0-based) for sample `index`.
pub fn sample_word(w: &Weights, seed: u64, index: u64, length: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..length).map(|_| w.draw(&mut rng)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorStats {
    /// 1-based generator index.
    pub index: usize,
    pub weight: String,
    /// Samples with `theta_1` equal to this generator.
    pub theta1_count: u64,
    pub theta1_frequency: f64,
    /// `sqrt(w(1-w)/samples)`.
    pub theta1_stderr: f64,
    /// Mean number of positions `n <= length` with `theta_n` this generator.
    pub mean_positions: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub length: usize,
    pub samples: u64,
    pub generators: Vec<GeneratorStats>,
}

pub fn sample_coding(w: &Weights, seed: u64, length: usize, samples: u64) -> Result<SampleReport> {
    if length == 0 || samples == 0 {
        return Err(Error::InvalidArgument("length and samples must be positive".into()));
    }
    let k = w.len();
    let (first, positions) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let word = sample_word(w, seed, i, length);
            let mut first = vec![0u64; k];
            first[word[0]] = 1;
            let mut pos = vec![0u64; k];
            word.iter().for_each(|&j| pos[j] += 1);
            (first, pos)
        })
        .reduce(
            || (vec![0; k], vec![0; k]),
            |(mut a, mut b), (c, d)| {
                a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                (a, b)
            },
        );
    let n = samples as f64;
    let generators = (0..k)
        .map(|j| {
            let wj = w.values[j].to_f64().unwrap_or(f64::NAN);
            GeneratorStats {
                index: j + 1,
                weight: w.values[j].to_string(),
                theta1_count: first[j],
                theta1_frequency: first[j] as f64 / n,
                theta1_stderr: (wj * (1.0 - wj) / n).sqrt(),
                mean_positions: positions[j] as f64 / n,
            }
        })
        .collect();
    Ok(SampleReport {
        seed,
        length,
        samples,
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedSample {
    #[serde(serialize_with = "crate::serde_util::display")]
    pub coding: SequenceCoding,
    pub summary: ChainSummary,
}

/// Certifies the first `depth` levels of each sampled coding.
pub fn sample_and_certify(
    set: &GeneratorSet,
    w: &Weights,
    seed: u64,
    depth: usize,
    samples: u64,
) -> Result<Vec<CertifiedSample>> {
    if w.len() != set.len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} generators",
            w.len(),
            set.len()
        )));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let coding = SequenceCoding::from_word(&sample_word(w, seed, i, depth))?;
            let chain = certify_chain(set, &coding, depth)?;
            Ok(CertifiedSample {
                coding,
                summary: chain.summary,
            })
        })
        .collect()
}

impl Weights {
    /// Exact weight of generator `j` (0-based), or zero when out of range.
    pub fn weight(&self, j: usize) -> Rational {
        self.values.get(j).cloned().unwrap_or_else(Rational::zero)
    }
}
