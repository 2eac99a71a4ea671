// SPDX-License-Identifier: MIT OR Apache-2.0

//! Equal-width histogram binning and normalized Shannon entropy.
//!
//! A window `x_1..x_n` with range `[min, max]` is split into `k` intervals of
//! width `(max - min) / k`. Every interval is half-open `[e_j, e_{j+1})`
//! except the last, which is closed so that the window maximum is counted.
//! The normalized entropy of the resulting distribution is
//!
//! ```text
//! H_norm = -sum_j p_j ln p_j / ln k        in [0, 1]
//! ```
//!
//! The logarithm base cancels in the ratio, so natural logs are used
//! throughout. A constant window has no spread to bin and is assigned
//! normalized entropy 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(p) == 1` accepted by [`ProbVector::new`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// How the bin count `k` is chosen for a window of `delta` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinRule {
    Explicit(usize),
    /// `k = max(2, round(ln delta))`, see [`default_bin_count`].
    LnRule,
}

/// Window length and bin rule, validated so that `2 <= k <= delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowParams {
    delta: usize,
    bin_rule: BinRule,
    bins: usize,
}

impl WindowParams {
    pub fn new(delta: usize, bin_rule: BinRule) -> Result<Self> {
        if delta < 2 {
            return Err(Error::InvalidWindow(delta));
        }
        let bins = match bin_rule {
            BinRule::Explicit(k) => k,
            BinRule::LnRule => default_bin_count(delta)?,
        };
        if bins < 2 || bins > delta {
            return Err(Error::InvalidBinCount { bins, delta });
        }
        Ok(Self {
            delta,
            bin_rule,
            bins,
        })
    }

    /// Window of `delta` samples with the logarithmic bin rule.
    pub fn with_ln_rule(delta: usize) -> Result<Self> {
        Self::new(delta, BinRule::LnRule)
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn bin_rule(&self) -> BinRule {
        self.bin_rule
    }

    /// Resolved bin count `k`.
    pub fn bins(&self) -> usize {
        self.bins
    }
}

/// Bin count for a window of `delta` samples: `max(2, round(ln delta))`,
/// rounding half away from zero.
///
/// ```
/// assert_eq!(entcpd::entropy::default_bin_count(100).unwrap(), 5);
/// ```
pub fn default_bin_count(delta: usize) -> Result<usize> {
    if delta < 2 {
        return Err(Error::InvalidWindow(delta));
    }
    // f64::round rounds half away from zero.
    let k = (delta as f64).ln().round() as usize;
    Ok(k.clamp(2, delta))
}

/// The `k + 1` boundaries of `k` equal-width intervals over `[x_min, x_max]`.
///
/// The final edge is `x_max` itself rather than `x_min + k * width`.
pub fn bin_edges(x_min: f64, x_max: f64, k: usize) -> Result<Vec<f64>> {
    check_bins(k)?;
    if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
        return Err(Error::DegenerateRange {
            min: x_min,
            max: x_max,
        });
    }
    let mut edges = Vec::with_capacity(k + 1);
    fill_edges(x_min, x_max, k, &mut edges);
    Ok(edges)
}

/// Equal-width histogram of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<usize>,
    n: usize,
}

impl Histogram {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of samples binned.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

/// Bins `window` into `k` equal-width intervals spanning its own min and max.
///
/// Fails with [`Error::DegenerateRange`] when every sample is equal.
pub fn histogram(window: &[f64], k: usize) -> Result<Histogram> {
    check_bins(k)?;
    if window.is_empty() {
        return Err(Error::WindowTooSmall {
            required: 1,
            actual: 0,
        });
    }
    check_finite(window)?;
    let (min, max) = min_max(window);
    let edges = bin_edges(min, max, k)?;
    let mut counts = vec![0usize; k];
    count_into(window, &edges, &mut counts);
    Ok(Histogram {
        edges,
        counts,
        n: window.len(),
    })
}

/// A discrete probability distribution over `k` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates that every entry lies in `[0, 1]` and that they sum to 1
    /// within [`PROB_SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        if let Some(index) = probs
            .iter()
            .position(|p| !p.is_finite() || *p < 0.0 || *p > 1.0)
        {
            return Err(Error::InvalidProbability { index });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self(probs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `p_j = f_j / n`.
pub fn probabilities(hist: &Histogram) -> ProbVector {
    let n = hist.n as f64;
    ProbVector(hist.counts.iter().map(|&f| f as f64 / n).collect())
}

/// Shannon entropy `-sum p_j log_b p_j` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &ProbVector, base: f64) -> Result<f64> {
    check_base(base)?;
    Ok(nat_entropy(p.as_slice().iter().copied()) / base.ln())
}

/// Entropy of the uniform distribution over `k` bins, `log_b k`.
pub fn max_entropy(k: usize, base: f64) -> Result<f64> {
    check_bins(k)?;
    check_base(base)?;
    Ok((k as f64).ln() / base.ln())
}

/// Normalized Shannon entropy of `window` under `k` equal-width bins.
///
/// Returns 0 for a constant window. Requires at least two samples.
pub fn normalized_entropy(window: &[f64], k: usize) -> Result<f64> {
    check_bins(k)?;
    if window.len() < 2 {
        return Err(Error::WindowTooSmall {
            required: 2,
            actual: window.len(),
        });
    }
    check_finite(window)?;
    let (min, max) = min_max(window);
    let mut scratch = Scratch::new(k);
    Ok(scratch.normalized_entropy(window, min, max))
}

/// Reusable buffers for evaluating many windows with the same `k`.
///
/// Callers must pass the true min and max of the window and guarantee the
/// samples are finite.
#[derive(Debug, Clone)]
pub(crate) struct Scratch {
    edges: Vec<f64>,
    counts: Vec<usize>,
    ln_k: f64,
}

impl Scratch {
    pub(crate) fn new(k: usize) -> Self {
        Self {
            edges: Vec::with_capacity(k + 1),
            counts: vec![0; k],
            ln_k: (k as f64).ln(),
        }
    }

    pub(crate) fn normalized_entropy(&mut self, window: &[f64], min: f64, max: f64) -> f64 {
        // Constant window: a point mass has zero uncertainty.
        if min >= max {
            return 0.0;
        }
        let k = self.counts.len();
        fill_edges(min, max, k, &mut self.edges);
        self.counts.iter_mut().for_each(|c| *c = 0);
        count_into(window, &self.edges, &mut self.counts);
        let n = window.len() as f64;
        let h = nat_entropy(self.counts.iter().map(|&f| f as f64 / n));
        if h <= 0.0 {
            0.0
        } else {
            (h / self.ln_k).min(1.0)
        }
    }
}

fn fill_edges(min: f64, max: f64, k: usize, edges: &mut Vec<f64>) {
    let width = (max - min) / k as f64;
    edges.clear();
    edges.extend((0..k).map(|j| min + j as f64 * width));
    edges.push(max);
}

/// Interval index of `x`: `floor((x - min) / width)` clamped to `[0, k-1]`,
/// then nudged so it agrees with the stored edges when rounding puts `x` on
/// the wrong side of a boundary.
#[inline]
fn bin_index(x: f64, edges: &[f64]) -> usize {
    let k = edges.len() - 1;
    let min = edges[0];
    let width = (edges[k] - min) / k as f64;
    let raw = ((x - min) / width).floor();
    let mut j = if raw <= 0.0 {
        0
    } else {
        (raw as usize).min(k - 1)
    };
    if j > 0 && x < edges[j] {
        j -= 1;
    } else if j + 1 < k && x >= edges[j + 1] {
        j += 1;
    }
    j
}

fn count_into(window: &[f64], edges: &[f64], counts: &mut [usize]) {
    for &x in window {
        counts[bin_index(x, edges)] += 1;
    }
}

fn nat_entropy(probs: impl Iterator<Item = f64>) -> f64 {
    -probs.filter(|&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

pub(crate) fn min_max(window: &[f64]) -> (f64, f64) {
    window
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_bins(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidBinCount { bins: k, delta: k });
    }
    Ok(())
}

fn check_base(base: f64) -> Result<()> {
    if !base.is_finite() || base <= 1.0 {
        return Err(Error::InvalidBase(base));
    }
    Ok(())
}
