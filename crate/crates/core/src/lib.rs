// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point detection built on sliding-window normalized entropy.
//!
//! The pipeline is
//!
//! 1. [`sliding::entropy_sequence`]: normalized Shannon entropy of every
//!    length-`delta` window, binned into `k` equal-width intervals
//!    ([`entropy`]).
//! 2. [`detection::detect_fluctuations`]: peaks and valleys in that sequence,
//!    each reported with an onset that estimates the change point.
//! 3. [`evaluation::match_and_score`]: response points, durations and errors
//!    against known change points, e.g. from [`simulation::generate_series`].

#![forbid(unsafe_code)]

pub mod cli;
pub mod detection;
pub mod entropy;
pub mod error;
pub mod evaluation;
pub mod formats;
pub mod simulation;
pub mod sliding;

pub use detection::{change_points, detect_fluctuations, DetectionEvent, DetectorParams, Polarity};
pub use entropy::{normalized_entropy, BinRule, WindowParams};
pub use error::{Error, Result};
pub use evaluation::{match_and_score, EvaluationReport};
pub use simulation::{generate_series, table1_fixture, GroundTruth, SegmentDist, SegmentSpec};
pub use sliding::{entropy_sequence, EntropySequence, Series};
