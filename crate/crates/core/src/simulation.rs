// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded multi-segment series with known change points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sliding::Series;

/// Name recorded with every generated series.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9, seed_from_u64)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SegmentDist {
    Gaussian { mean: f64, stddev: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    Lognormal { mu: f64, sigma: f64 },
}

impl SegmentDist {
    /// Population mean and standard deviation.
    pub fn moments(&self) -> (f64, f64) {
        match *self {
            SegmentDist::Gaussian { mean, stddev } => (mean, stddev),
            SegmentDist::Uniform { lo, hi } => (0.5 * (lo + hi), (hi - lo) / 12f64.sqrt()),
            SegmentDist::Exponential { rate } => (1.0 / rate, 1.0 / rate),
            SegmentDist::Lognormal { mu, sigma } => {
                let s2 = sigma * sigma;
                let mean = (mu + 0.5 * s2).exp();
                (mean, mean * (s2.exp() - 1.0).sqrt())
            }
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            SegmentDist::Gaussian { mean, stddev } => {
                if !finite(&[mean, stddev]) || stddev <= 0.0 {
                    return Err(format!(
                        "gaussian needs finite mean and stddev > 0, got {mean}, {stddev}"
                    ));
                }
            }
            SegmentDist::Uniform { lo, hi } => {
                if !finite(&[lo, hi]) || lo >= hi {
                    return Err(format!("uniform needs finite lo < hi, got {lo}, {hi}"));
                }
            }
            SegmentDist::Exponential { rate } => {
                if !finite(&[rate]) || rate <= 0.0 {
                    return Err(format!("exponential needs rate > 0, got {rate}"));
                }
            }
            SegmentDist::Lognormal { mu, sigma } => {
                if !finite(&[mu, sigma]) || sigma <= 0.0 {
                    return Err(format!(
                        "lognormal needs finite mu and sigma > 0, got {mu}, {sigma}"
                    ));
                }
            }
        }
        Ok(())
    }

    fn draw_into(&self, rng: &mut ChaCha8Rng, n: usize, out: &mut Vec<f64>) {
        // parameters were validated, so the constructors cannot fail
        match *self {
            SegmentDist::Gaussian { mean, stddev } => {
                let d = Normal::new(mean, stddev).expect("validated");
                out.extend(d.sample_iter(rng).take(n));
            }
            SegmentDist::Uniform { lo, hi } => {
                let d = Uniform::new(lo, hi).expect("validated");
                out.extend(d.sample_iter(rng).take(n));
            }
            SegmentDist::Exponential { rate } => {
                let d = Exp::new(rate).expect("validated");
                out.extend(d.sample_iter(rng).take(n));
            }
            SegmentDist::Lognormal { mu, sigma } => {
                let d = LogNormal::new(mu, sigma).expect("validated");
                out.extend(d.sample_iter(rng).take(n));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub dist: SegmentDist,
    pub length: usize,
}

impl SegmentSpec {
    pub fn new(dist: SegmentDist, length: usize) -> Self {
        Self { dist, length }
    }
}

/// Known change points: the 1-based time of the first sample of every
/// segment after the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub change_points: Vec<usize>,
    pub total_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Draws each segment in order from one seeded stream and concatenates them.
pub fn generate_series(specs: &[SegmentSpec], seed: u64) -> Result<(Series, GroundTruth)> {
    if specs.is_empty() {
        return Err(Error::NoSegments);
    }
    for (index, spec) in specs.iter().enumerate() {
        if spec.length == 0 {
            return Err(Error::InvalidSpec {
                index,
                reason: "length must be at least 1".into(),
            });
        }
        spec.dist
            .check()
            .map_err(|reason| Error::InvalidSpec { index, reason })?;
    }

    let total_length = specs.iter().map(|s| s.length).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(total_length);
    let mut change_points = Vec::with_capacity(specs.len() - 1);
    for (i, spec) in specs.iter().enumerate() {
        if i > 0 {
            change_points.push(values.len() + 1);
        }
        spec.dist.draw_into(&mut rng, spec.length, &mut values);
    }

    let truth = GroundTruth {
        change_points,
        total_length,
        rng: Some(RNG_NAME.to_string()),
        seed: Some(seed),
    };
    Ok((Series::new(values)?, truth))
}

/// Segment lengths of the six-segment reference fixture. The resulting
/// change points are 358, 913, 1313, 1618 and 1842 in a 2000-sample series.
pub const FIXTURE_LENGTHS: [usize; 6] = [357, 555, 400, 305, 224, 159];

/// The six-segment reference fixture: large level shifts between segments
/// whose value ranges do not overlap, mixing Gaussian, Uniform and
/// Exponential regimes.
pub fn fixture_specs() -> Vec<SegmentSpec> {
    use SegmentDist::*;
    let dists = [
        Gaussian {
            mean: 0.0,
            stddev: 1.0,
        },
        Gaussian {
            mean: 30.0,
            stddev: 1.5,
        },
        Uniform { lo: 60.0, hi: 66.0 },
        Gaussian {
            mean: 10.0,
            stddev: 1.0,
        },
        Gaussian {
            mean: -20.0,
            stddev: 0.5,
        },
        Exponential { rate: 1.0 },
    ];
    dists
        .into_iter()
        .zip(FIXTURE_LENGTHS)
        .map(|(dist, length)| SegmentSpec { dist, length })
        .collect()
}

pub fn table1_fixture(seed: u64) -> (Series, GroundTruth) {
    generate_series(&fixture_specs(), seed).expect("fixture specs are valid")
}
