//! Proportion bounds implied by a pair-count constant `C`, and the box-region
//! hypothesis check for zeros near the critical line.

use crate::store::{ZeroRecord, ZeroSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("box half-width parameter b = {0} must be > 0")]
    BadWidth(f64),
    #[error("box height T = {0} must be ≥ 10")]
    BadHeight(f64),
}

/// Lower bounds on the proportions of simple zeros, zeros on the critical
/// line, and zeros that are both. Asymptotic statements conditional on the
/// pair-count hypothesis with constant `c`; no finite-height error term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionBounds {
    pub c: f64,
    pub simple: f64,
    pub critical: f64,
    pub simple_and_critical: Option<f64>,
    pub valid: bool,
    /// Set when a linear form fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
}

fn clamp_unit(x: f64, flag: &mut bool) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        *flag = true;
        x.clamp(0.0, 1.0)
    } else {
        x
    }
}

pub fn theorem2_bounds(c: f64) -> ProportionBounds {
    let valid = (1.0..2.0).contains(&c);
    let mut clamped = false;
    let simple = clamp_unit(2.0 - c, &mut clamped);
    let both = if valid && c < 1.5 { Some(clamp_unit(3.0 - 2.0 * c, &mut clamped)) } else { None };
    ProportionBounds {
        c,
        simple,
        critical: simple,
        simple_and_critical: both,
        valid,
        clamped,
    }
}

/// `|σ − 1/2| < b / (2 log T)` and `T < t ≤ 2T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub b: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

impl BoxRegion {
    pub fn new(b: f64, t: f64) -> Result<Self, BoundsError> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(BoundsError::BadWidth(b));
        }
        if !(t >= 10.0 && t.is_finite()) {
            return Err(BoundsError::BadHeight(t));
        }
        Ok(Self { b, t })
    }

    pub fn half_width(&self) -> f64 {
        self.b / (2.0 * self.t.ln())
    }
}

pub fn in_box_region(record: &ZeroRecord, region: &BoxRegion) -> bool {
    let hw = region.half_width();
    record.beta > 0.5 - hw
        && record.beta < 0.5 + hw
        && record.gamma > region.t
        && record.gamma <= 2.0 * region.t
}

/// Largest `b` for which the quoted conclusions apply.
pub const MAX_BOX_WIDTH: f64 = 0.3185;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotedConclusions {
    pub simple: f64,
    pub critical: f64,
    pub simple_and_critical: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxReport {
    pub region: BoxRegion,
    pub records_in_window: usize,
    pub records_in_box: usize,
    pub violations: Vec<ZeroRecord>,
    pub hypothesis_holds: bool,
    pub conclusions: Option<QuotedConclusions>,
}

/// Checks every record with `T < γ ≤ 2T` against the box and, when all lie
/// inside with `b ≤ 0.3185`, attaches the quoted proportions.
pub fn theorem3_report(zeros: &ZeroSet, b: f64, t: f64) -> Result<BoxReport, BoundsError> {
    let region = BoxRegion::new(b, t)?;
    let window: Vec<&ZeroRecord> = zeros.records().iter().filter(|r| r.gamma > t && r.gamma <= 2.0 * t).collect();
    let violations: Vec<ZeroRecord> = window.iter().filter(|r| !in_box_region(r, &region)).map(|r| **r).collect();
    let hypothesis_holds = violations.is_empty();
    let conclusions = (hypothesis_holds && b <= MAX_BOX_WIDTH).then_some(QuotedConclusions {
        simple: 2.0 / 3.0,
        critical: 2.0 / 3.0,
        simple_and_critical: 1.0 / 3.0,
        note: "asymptotic lower bounds conditional on the box hypothesis holding for all large T",
    });
    Ok(BoxReport {
        region,
        records_in_window: window.len(),
        records_in_box: window.len() - violations.len(),
        violations,
        hypothesis_holds,
        conclusions,
    })
}
