//! Box-counting dimension estimates for interval sets.
//!
//! This module never evaluates the similarity-dimension formula; it only
//! counts boxes on the geometry and fits a log-log slope. That makes it an
//! independent check of both the construction and the operator algebra.

use std::fmt;

use crate::arith::{apply, BinaryOp};
use crate::dimension::{ArityN, Dimension};
use crate::error::{Error, Result};
use crate::geometry::{construct_prefractal, CantorParams, IntervalSet};

/// How boxes are counted at a given size `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountMethod {
    /// Fewest closed boxes of length `δ` covering the set.
    #[default]
    MinimalCover,
    /// Cells `[kδ, (k+1)δ)` of the grid anchored at 0, see [`box_count`].
    Grid,
    /// Mean of the grid count over uniformly distributed grid origins.
    GridAveraged,
}

impl CountMethod {
    pub fn name(self) -> &'static str {
        match self {
            CountMethod::MinimalCover => "cover",
            CountMethod::Grid => "grid",
            CountMethod::GridAveraged => "grid-avg",
        }
    }
}

impl std::str::FromStr for CountMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cover" => Ok(CountMethod::MinimalCover),
            "grid" => Ok(CountMethod::Grid),
            "grid-avg" => Ok(CountMethod::GridAveraged),
            other => Err(Error::domain(format!(
                "unknown count method {other:?}, expected cover, grid or grid-avg"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCountSample {
    pub delta: f64,
    /// Integral for `Grid` and `MinimalCover`, a mean for `GridAveraged`.
    pub count: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub d_hat: f64,
    /// Standard error of the fitted slope.
    pub stderr: f64,
    pub samples: Vec<BoxCountSample>,
    pub method: CountMethod,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!(
            "box size must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// Positions are accurate to ~1e-15; endpoints closer than this to a grid
/// line are treated as lying on it.
fn snap_tolerance(delta: f64) -> f64 {
    (1e-6 * delta).min(1e-13)
}

fn snapped(x: f64, delta: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() * delta <= snap_tolerance(delta) {
        r
    } else {
        x
    }
}

/// Number of cells `[kδ, (k+1)δ)` of the grid anchored at 0 that meet the
/// set. Intervals are treated as half-open, so an interval ending exactly
/// on a grid line does not occupy the next cell.
pub fn box_count(set: &IntervalSet, delta: f64) -> Result<u64> {
    box_count_with_origin(set, delta, 0.0)
}

/// [`box_count`] on the grid shifted to start at `origin`.
pub fn box_count_with_origin(set: &IntervalSet, delta: f64, origin: f64) -> Result<u64> {
    check_delta(delta)?;
    let mut count = 0u64;
    let mut last: Option<i64> = None;
    for iv in set.intervals() {
        let lo = snapped((iv.start - origin) / delta, delta).floor() as i64;
        let hi = (snapped((iv.end - origin) / delta, delta).ceil() as i64 - 1).max(lo);
        let from = match last {
            Some(l) => lo.max(l + 1),
            None => lo,
        };
        if hi >= from {
            count += (hi - from + 1) as u64;
        }
        last = Some(last.map_or(hi, |l| l.max(hi)));
    }
    Ok(count)
}

/// Expected grid count when the grid origin is uniformly distributed:
/// `|∪ (start − δ, end)| / δ`.
pub fn mean_box_count(set: &IntervalSet, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let mut covered = 0.0;
    let mut reach = f64::NEG_INFINITY;
    for iv in set.intervals() {
        let lo = (iv.start - delta).max(reach);
        if iv.end > lo {
            covered += iv.end - lo;
        }
        reach = reach.max(iv.end);
    }
    Ok(covered / delta)
}

/// Fewest closed boxes of length `δ` whose union covers the set (greedy
/// left-to-right sweep, which is optimal on the line).
pub fn cover_count(set: &IntervalSet, delta: f64) -> Result<u64> {
    check_delta(delta)?;
    let tol = snap_tolerance(delta);
    let mut count = 0u64;
    let mut reach = f64::NEG_INFINITY;
    for iv in set.intervals() {
        if iv.end <= reach + tol {
            continue;
        }
        let from = if iv.start > reach + tol {
            iv.start
        } else {
            reach
        };
        let boxes = (snapped((iv.end - from) / delta, delta).ceil() as u64).max(1);
        count += boxes;
        reach = from + boxes as f64 * delta;
    }
    Ok(count)
}

pub fn count_boxes(set: &IntervalSet, delta: f64, method: CountMethod) -> Result<f64> {
    Ok(match method {
        CountMethod::MinimalCover => cover_count(set, delta)? as f64,
        CountMethod::Grid => box_count(set, delta)? as f64,
        CountMethod::GridAveraged => mean_box_count(set, delta)?,
    })
}

/// `γ^k` for `k = 1..=S`, the natural scales of a constructed set.
pub fn default_deltas(params: &CantorParams) -> Vec<f64> {
    (1..=params.stage())
        .map(|k| params.gamma().powi(k as i32))
        .collect()
}

/// Slope and its standard error of the least-squares line through `(x, y)`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let stderr = if x.len() > 2 {
        (ssr / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, stderr)
}

/// Estimates the dimension with [`CountMethod::MinimalCover`]. With
/// `deltas = None` the set must carry its construction parameters and the
/// scales `γ^1..γ^S` are used.
pub fn estimate_dimension(set: &IntervalSet, deltas: Option<&[f64]>) -> Result<DimensionEstimate> {
    estimate_dimension_with(set, deltas, CountMethod::default())
}

pub fn estimate_dimension_with(
    set: &IntervalSet,
    deltas: Option<&[f64]>,
    method: CountMethod,
) -> Result<DimensionEstimate> {
    let deltas: Vec<f64> = match deltas {
        Some(d) => d.to_vec(),
        None => match set.params() {
            Some(p) => default_deltas(p),
            None => {
                return Err(Error::domain(
                    "no box sizes given and the set carries no construction parameters",
                ))
            }
        },
    };
    for &d in &deltas {
        check_delta(d)?;
    }
    let mut distinct = deltas.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::domain(format!(
            "need at least 3 distinct box sizes, got {}",
            distinct.len()
        )));
    }

    let samples = deltas
        .iter()
        .map(|&delta| count_boxes(set, delta, method).map(|count| BoxCountSample { delta, count }))
        .collect::<Result<Vec<_>>>()?;
    if samples.iter().all(|s| s.count == samples[0].count) {
        return Err(Error::FitDegenerate);
    }
    let x: Vec<f64> = samples.iter().map(|s| -s.delta.ln()).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.count.ln()).collect();
    let (d_hat, stderr) = least_squares_slope(&x, &y);
    Ok(DimensionEstimate {
        d_hat,
        stderr,
        samples,
        method,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerificationOutcome {
    Checked {
        d_hat: f64,
        abs_error: f64,
        /// Relative tolerance: passes when `abs_error <= tolerance · D_C`.
        tolerance: f64,
        pass: bool,
    },
    Unverifiable {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub op: BinaryOp,
    pub d_a: f64,
    pub d_b: f64,
    pub n: u32,
    pub stage: u32,
    pub d_c: f64,
    pub gamma_c: f64,
    pub outcome: VerificationOutcome,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(
            self.outcome,
            VerificationOutcome::Checked { pass: true, .. }
        )
    }

    pub fn is_unverifiable(&self) -> bool {
        matches!(self.outcome, VerificationOutcome::Unverifiable { .. })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            VerificationOutcome::Checked {
                d_hat,
                abs_error,
                tolerance,
                pass,
            } => write!(
                f,
                "{} op={} da={} db={} n={} stage={} D_C={} gamma_C={} d_hat={} abs_error={:e} tol={}",
                if *pass { "PASS" } else { "FAIL" },
                self.op,
                self.d_a,
                self.d_b,
                self.n,
                self.stage,
                self.d_c,
                self.gamma_c,
                d_hat,
                abs_error,
                tolerance
            ),
            VerificationOutcome::Unverifiable { reason } => write!(
                f,
                "UNVERIFIABLE op={} da={} db={} n={} stage={} D_C={}: {reason}",
                self.op, self.d_a, self.d_b, self.n, self.stage, self.d_c
            ),
        }
    }
}

/// Builds the stage-`S` set for `γ_C = op(a, b)` and compares its
/// box-counting estimate to `D_C`.
pub fn verify_operator_geometrically(
    op: BinaryOp,
    a: Dimension,
    b: Dimension,
    n: ArityN,
    stage: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    verify_operator_geometrically_with(op, a, b, n, stage, tolerance, CountMethod::default())
}

pub fn verify_operator_geometrically_with(
    op: BinaryOp,
    a: Dimension,
    b: Dimension,
    n: ArityN,
    stage: u32,
    tolerance: f64,
    method: CountMethod,
) -> Result<VerificationReport> {
    let result = apply(op, a, b, n)?;
    let mut report = VerificationReport {
        op,
        d_a: a.get(),
        d_b: b.get(),
        n: n.get(),
        stage,
        d_c: result.d.get(),
        gamma_c: result.gamma,
        outcome: VerificationOutcome::Unverifiable {
            reason: String::new(),
        },
    };
    let unverifiable = |reason: String| VerificationOutcome::Unverifiable { reason };

    if result.underflow {
        report.outcome = unverifiable("gamma_C underflows binary64".into());
        return Ok(report);
    }
    if result.d.is_void() || result.d.is_unit() {
        report.outcome = unverifiable(format!(
            "D_C = {} is a degenerate member (void set or unit segment)",
            result.d
        ));
        return Ok(report);
    }
    let params = match CantorParams::regular(n, result.gamma, stage) {
        Ok(p) => p,
        Err(e) => {
            report.outcome = unverifiable(e.to_string());
            return Ok(report);
        }
    };
    let set = match construct_prefractal(&params) {
        Ok(s) => s,
        Err(e @ Error::BelowResolution { .. }) => {
            report.outcome = unverifiable(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let estimate = estimate_dimension_with(&set, None, method)?;
    let abs_error = (estimate.d_hat - result.d.get()).abs();
    report.outcome = VerificationOutcome::Checked {
        d_hat: estimate.d_hat,
        abs_error,
        tolerance,
        pass: abs_error <= tolerance * result.d.get(),
    };
    Ok(report)
}
