// SPDX-License-Identifier: MIT OR Apache-2.0

//! Scoring detected events against known change points.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detection::DetectionEvent;
use crate::simulation::GroundTruth;

/// One true change point and the event matched to it, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub true_cp: usize,
    pub response_point: Option<usize>,
    pub duration: Option<usize>,
    pub error: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub delta: usize,
    pub rows: Vec<ReportRow>,
    pub matched: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// Mean `|response - truth|` over matched rows; 0 when nothing matched.
    pub mean_error: f64,
    /// `mean_error` as a percentage of `delta`.
    pub mean_deviation_pct: f64,
}

/// Greedy nearest matching within one window length.
///
/// Truths are visited in ascending order; each claims the closest unclaimed
/// event with `|onset - truth| <= delta`, preferring the earlier event on a
/// distance tie.
pub fn match_and_score(
    truth: &GroundTruth,
    events: &[DetectionEvent],
    delta: usize,
) -> EvaluationReport {
    let mut truths = truth.change_points.clone();
    truths.sort_unstable();

    let mut claimed = vec![false; events.len()];
    let mut rows = Vec::with_capacity(truths.len());
    let mut error_sum = 0usize;
    let mut matched = 0usize;

    for &cp in &truths {
        let best = events
            .iter()
            .enumerate()
            .filter(|(i, e)| !claimed[*i] && e.onset.abs_diff(cp) <= delta)
            .min_by_key(|(_, e)| (e.onset.abs_diff(cp), e.onset));
        let row = match best {
            Some((i, e)) => {
                claimed[i] = true;
                let err = e.onset.abs_diff(cp);
                error_sum += err;
                matched += 1;
                ReportRow {
                    true_cp: cp,
                    response_point: Some(e.onset),
                    duration: Some(e.duration),
                    error: Some(err),
                }
            }
            None => ReportRow {
                true_cp: cp,
                response_point: None,
                duration: None,
                error: None,
            },
        };
        rows.push(row);
    }

    // Integer numerators keep the reference figures exact (12 / 5 = 2.4).
    let (mean_error, mean_deviation_pct) = if matched == 0 || delta == 0 {
        (0.0, 0.0)
    } else {
        (
            error_sum as f64 / matched as f64,
            (error_sum * 100) as f64 / (matched * delta) as f64,
        )
    };

    EvaluationReport {
        delta,
        false_positives: events.len() - matched,
        false_negatives: truths.len() - matched,
        rows,
        matched,
        mean_error,
        mean_deviation_pct,
    }
}

/// `mean_error / delta * 100`, or 0 when nothing matched.
pub fn mean_deviation_percent(report: &EvaluationReport) -> f64 {
    if report.matched == 0 || report.delta == 0 {
        return 0.0;
    }
    report.mean_error * 100.0 / report.delta as f64
}

impl EvaluationReport {
    /// Fixed-width table with one line per true change point followed by the
    /// aggregate figures.
    pub fn render_table(&self) -> String {
        let headers = [
            "Change point (time)",
            "Response point (time)",
            "Response duration",
            "Error",
        ];
        let cell = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        let body: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.true_cp.to_string(),
                    cell(r.response_point),
                    cell(r.duration),
                    cell(r.error),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..4)
            .map(|c| {
                body.iter()
                    .map(|row| row[c].len())
                    .chain(std::iter::once(headers[c].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let mut out = String::new();
        let line = |out: &mut String, cols: [&str; 4]| {
            let cells: Vec<String> = cols
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        };
        line(&mut out, headers);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "{}", rule.join("  "));
        for row in &body {
            line(&mut out, [&row[0], &row[1], &row[2], &row[3]]);
        }
        let _ = writeln!(
            out,
            "\nmatched {} / {}, false positives {}, false negatives {}",
            self.matched,
            self.rows.len(),
            self.false_positives,
            self.false_negatives
        );
        let _ = writeln!(
            out,
            "mean error {:.3}, mean deviation {:.3}% of window {}",
            self.mean_error, self.mean_deviation_pct, self.delta
        );
        out
    }
}
