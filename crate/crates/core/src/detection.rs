// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point localization from fluctuations of the entropy sequence.
//!
//! A change point drags the sliding window through up to `delta - 1` mixture
//! windows holding samples of both regimes. Their entropy departs sharply from
//! the single-regime level, forming a peak or a valley. The detector works in
//! one forward pass:
//!
//! 1. The first `baseline_span` values seed a trailing baseline.
//! 2. Each later value is compared with the baseline median. It is flagged
//!    when `|h - median| > lambda * max(MAD, mad_floor)`. Unflagged values
//!    join the baseline (a FIFO of at most `baseline_span` values); flagged
//!    values never do.
//! 3. `min_run` consecutive flags open an event at the first of them. The
//!    next `delta` positions starting at the onset form the event horizon,
//!    the longest possible mixture. Inside it every value is scored against
//!    the baseline frozen at onset and kept out of the baseline. The event
//!    ends at the last flagged position in the horizon.
//! 4. After the horizon the old baseline no longer describes the series, so
//!    it is discarded and re-seeded from the next `delta` values.
//! 5. Events separated by less than `merge_gap` are merged.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sliding::EntropySequence;

pub const DEFAULT_LAMBDA: f64 = 3.0;
pub const DEFAULT_MIN_RUN: usize = 3;
/// Lower bound on the spread used for thresholding, in normalized-entropy
/// units.
pub const DEFAULT_MAD_FLOOR: f64 = 0.1;

/// Detector knobs. [`DetectorParams::new`] fills in the defaults for a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub delta: usize,
    pub lambda: f64,
    pub min_run: usize,
    pub baseline_span: usize,
    pub merge_gap: usize,
    pub mad_floor: f64,
}

impl DetectorParams {
    pub fn new(delta: usize) -> Self {
        Self {
            delta,
            lambda: DEFAULT_LAMBDA,
            min_run: DEFAULT_MIN_RUN,
            baseline_span: 2 * delta,
            merge_gap: delta,
            mad_floor: DEFAULT_MAD_FLOOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.delta < 2 {
            return bad(format!("delta {} < 2", self.delta));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda {} must be positive", self.lambda));
        }
        if self.min_run < 1 {
            return bad("min_run must be at least 1".into());
        }
        if self.baseline_span < self.delta {
            return bad(format!(
                "baseline_span {} < delta {}",
                self.baseline_span, self.delta
            ));
        }
        if self.merge_gap < 1 {
            return bad("merge_gap must be at least 1".into());
        }
        if !(self.mad_floor.is_finite() && self.mad_floor > 0.0) {
            return bad(format!("mad_floor {} must be positive", self.mad_floor));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Peak,
    Valley,
}

/// One entropy fluctuation. Times are 1-based series indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    /// First flagged time (the response point).
    pub onset: usize,
    /// Flagged extent from onset to the last flagged time.
    pub duration: usize,
    pub polarity: Polarity,
    /// Largest `|h - baseline median|` within the event.
    pub magnitude: f64,
    /// Local maximum (peaks) or minimum (valleys) of the sequence within
    /// `delta` of `peak_time`.
    pub extremum_value: f64,
    /// Time of the largest deviation.
    pub peak_time: usize,
}

/// Largest entropy value within `delta` of time `t`, clipped to the covered
/// range.
pub fn local_extremum(hseq: &EntropySequence, t: usize, delta: usize) -> Result<f64> {
    neighbourhood(hseq, t, delta).map(|w| w.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest entropy value within `delta` of time `t`; the valley counterpart
/// of [`local_extremum`].
pub fn local_valley(hseq: &EntropySequence, t: usize, delta: usize) -> Result<f64> {
    neighbourhood(hseq, t, delta).map(|w| w.iter().copied().fold(f64::INFINITY, f64::min))
}

fn neighbourhood(hseq: &EntropySequence, t: usize, delta: usize) -> Result<&[f64]> {
    let out = Error::OutOfRange { t, delta };
    let last = hseq.last_time().ok_or_else(|| out.clone())?;
    let lo = t.saturating_sub(delta).max(hseq.offset());
    let hi = t.saturating_add(delta).min(last);
    if lo > hi {
        return Err(out);
    }
    let (a, b) = (lo - hseq.offset(), hi - hseq.offset());
    Ok(&hseq.values()[a..=b])
}

/// Trailing baseline of unflagged values.
struct Baseline {
    values: VecDeque<f64>,
    capacity: usize,
    scratch: Vec<f64>,
}

impl Baseline {
    fn new(capacity: usize) -> Self {
        Self {
            values: VecDeque::with_capacity(capacity),
            capacity,
            scratch: Vec::with_capacity(capacity),
        }
    }

    fn push(&mut self, h: f64) {
        if self.values.len() == self.capacity {
            self.values.pop_front();
        }
        self.values.push_back(h);
    }

    fn reset(&mut self, seed: &[f64]) {
        self.values.clear();
        seed.iter().for_each(|&h| self.push(h));
    }

    /// Median and median absolute deviation.
    fn median_mad(&mut self) -> (f64, f64) {
        self.scratch.clear();
        self.scratch.extend(self.values.iter().copied());
        let med = median_in_place(&mut self.scratch);
        self.scratch.iter_mut().for_each(|v| *v = (*v - med).abs());
        let mad = median_in_place(&mut self.scratch);
        (med, mad)
    }
}

fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let (lower, upper, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (below + upper)
    }
}

/// Runs the detector over `hseq`. Events are returned in ascending onset
/// order.
pub fn detect_fluctuations(
    hseq: &EntropySequence,
    params: &DetectorParams,
) -> Result<Vec<DetectionEvent>> {
    params.validate()?;
    let required = params.baseline_span + params.min_run;
    if hseq.len() < required {
        return Err(Error::SequenceTooShort {
            len: hseq.len(),
            required,
        });
    }

    let h = hseq.values();
    let n = h.len();
    let mut baseline = Baseline::new(params.baseline_span);
    baseline.reset(&h[..params.baseline_span]);

    let mut events = Vec::new();
    let mut run_start: Option<usize> = None;
    let mut run_len = 0usize;
    let mut i = params.baseline_span;

    while i < n {
        let (med, mad) = baseline.median_mad();
        let threshold = params.lambda * mad.max(params.mad_floor);
        if (h[i] - med).abs() <= threshold {
            baseline.push(h[i]);
            run_start = None;
            run_len = 0;
            i += 1;
            continue;
        }

        let start = *run_start.get_or_insert(i);
        run_len += 1;
        if run_len < params.min_run {
            i += 1;
            continue;
        }

        let horizon_end = (start + params.delta).min(n);
        events.push(score_event(
            hseq,
            start,
            horizon_end,
            med,
            threshold,
            params.delta,
        )?);
        run_start = None;
        run_len = 0;

        let rewarm_end = (horizon_end + params.delta).min(n);
        baseline.reset(&h[horizon_end..rewarm_end]);
        i = rewarm_end;
    }

    Ok(merge_close(events, params.merge_gap))
}

/// Builds the event for horizon `[start, end)` against a frozen baseline.
fn score_event(
    hseq: &EntropySequence,
    start: usize,
    end: usize,
    median: f64,
    threshold: f64,
    delta: usize,
) -> Result<DetectionEvent> {
    let h = hseq.values();
    let mut last = start;
    let mut peak = start;
    for (j, &v) in h.iter().enumerate().take(end).skip(start) {
        let dev = v - median;
        if dev.abs() > threshold {
            last = j;
            if dev.abs() > (h[peak] - median).abs() {
                peak = j;
            }
        }
    }

    let peak_dev = h[peak] - median;
    let peak_time = hseq.time_of(peak);
    let polarity = if peak_dev >= 0.0 {
        Polarity::Peak
    } else {
        Polarity::Valley
    };
    let extremum_value = match polarity {
        Polarity::Peak => local_extremum(hseq, peak_time, delta)?,
        Polarity::Valley => local_valley(hseq, peak_time, delta)?,
    };
    Ok(DetectionEvent {
        onset: hseq.time_of(start),
        duration: last - start + 1,
        polarity,
        magnitude: peak_dev.abs(),
        extremum_value,
        peak_time,
    })
}

fn merge_close(events: Vec<DetectionEvent>, merge_gap: usize) -> Vec<DetectionEvent> {
    let mut merged: Vec<DetectionEvent> = Vec::with_capacity(events.len());
    for ev in events {
        match merged.last_mut() {
            Some(prev) if ev.onset - (prev.onset + prev.duration) < merge_gap => {
                prev.duration = ev.onset + ev.duration - prev.onset;
                if ev.magnitude > prev.magnitude {
                    prev.polarity = ev.polarity;
                    prev.magnitude = ev.magnitude;
                    prev.extremum_value = ev.extremum_value;
                    prev.peak_time = ev.peak_time;
                }
            }
            _ => merged.push(ev),
        }
    }
    merged
}

/// One change-point estimate per event: its onset.
pub fn change_points(events: &[DetectionEvent]) -> Vec<usize> {
    events.iter().map(|e| e.onset).collect()
}
