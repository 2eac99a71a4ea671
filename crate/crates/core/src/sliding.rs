// SPDX-License-Identifier: MIT OR Apache-2.0

//! Normalized entropy over a sliding window with step 1.
//!
//! Times are 1-based sample indices. The window ending at time `t` holds
//! `x_{t-delta+1} ..= x_t`, so the first value of the sequence belongs to
//! `t = delta` and a series of `T` samples yields `T - delta + 1` values.
//! Bin edges come from each window's own min and max.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::entropy::{self, Scratch, WindowParams};
use crate::error::{Error, Result};

/// An ordered, finite, nonempty sequence of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { len: 0, delta: 1 });
        }
        entropy::check_finite(&values)?;
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Series {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Series> for Vec<f64> {
    fn from(series: Series) -> Self {
        series.0
    }
}

/// Normalized entropy values aligned to source time.
///
/// `values()[i]` belongs to the window ending at time `offset() + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySequence {
    offset: usize,
    values: Vec<f64>,
}

impl EntropySequence {
    /// Wraps precomputed values, e.g. read back from disk.
    pub fn new(offset: usize, values: Vec<f64>) -> Result<Self> {
        if offset < 1 {
            return Err(Error::InvalidWindow(offset));
        }
        if let Some(index) = values
            .iter()
            .position(|h| !h.is_finite() || *h < 0.0 || *h > 1.0)
        {
            return Err(Error::InvalidProbability { index });
        }
        Ok(Self { offset, values })
    }

    /// Time index of the first value (equal to the window size).
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Time index of the last value, or `None` for an empty sequence.
    pub fn last_time(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.offset + self.values.len() - 1)
    }

    pub fn time_of(&self, index: usize) -> usize {
        self.offset + index
    }

    /// Position of time `t` in `values()`, if covered.
    pub fn index_of(&self, t: usize) -> Option<usize> {
        t.checked_sub(self.offset)
            .filter(|&i| i < self.values.len())
    }

    /// Value at time `t`, if covered.
    pub fn at(&self, t: usize) -> Option<f64> {
        self.index_of(t).map(|i| self.values[i])
    }

    /// `(t, h)` pairs in time order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &h)| (self.offset + i, h))
    }
}

/// Normalized entropy of every length-`delta` window of `series`.
///
/// Window extremes are tracked with monotone deques so each step costs
/// `O(delta)` for binning only.
pub fn entropy_sequence(series: &Series, params: &WindowParams) -> Result<EntropySequence> {
    let delta = params.delta();
    let xs = series.values();
    if xs.len() < delta {
        return Err(Error::SeriesTooShort {
            len: xs.len(),
            delta,
        });
    }

    let mut scratch = Scratch::new(params.bins());
    let mut maxq: VecDeque<usize> = VecDeque::with_capacity(delta);
    let mut minq: VecDeque<usize> = VecDeque::with_capacity(delta);
    let mut values = Vec::with_capacity(xs.len() - delta + 1);

    for (i, &x) in xs.iter().enumerate() {
        while maxq.back().is_some_and(|&j| xs[j] <= x) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().is_some_and(|&j| xs[j] >= x) {
            minq.pop_back();
        }
        minq.push_back(i);

        if i + 1 < delta {
            continue;
        }
        let start = i + 1 - delta;
        while maxq.front().is_some_and(|&j| j < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&j| j < start) {
            minq.pop_front();
        }
        let (lo, hi) = (xs[minq[0]], xs[maxq[0]]);
        values.push(scratch.normalized_entropy(&xs[start..=i], lo, hi));
    }

    Ok(EntropySequence {
        offset: delta,
        values,
    })
}
