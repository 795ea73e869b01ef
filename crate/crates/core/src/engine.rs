//! Locating zeros of `Z(t)` by sign-change scanning on a Gram-point grid,
//! bisection refinement, and a Gram-point count check of completeness.
//!
//! The scan runs over a window widened to the nearest *good* Gram points
//! (`(−1)^n Z(g_n) > 0`). Between two good Gram points `g_a < g_b` the
//! expected number of zeros is `b − a`. The widened window is cut into
//! chunks at good Gram points which are scanned independently; a chunk that
//! comes up short is rescanned with a halved step before the scan fails.

use crate::store::{Completeness, CountCertificate, Source, StoreError, ZeroRecord, ZeroSet};
use crate::zeta::{riemann_siegel_z_with, rs_theta, rs_theta_derivative, ZetaConfig, ZetaError};
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

/// Lowest height accepted by the public Gram-point and scan entry points.
pub const MIN_HEIGHT: f64 = 10.0;
/// Internal lower limit for Gram points; θ is increasing above 2π.
const GRAM_FLOOR: f64 = 7.0;
/// Finest step tried before a deficit is reported, as a fraction of the
/// local average spacing.
pub const MIN_STEP_FRACTION: f64 = 1.0 / 64.0;
const DEFAULT_STEP_FRACTION: f64 = 0.25;
/// Gram intervals per independently scanned chunk.
const CHUNK_GRAM_INTERVALS: usize = 256;
/// How far past the window to search for a good Gram point.
const MAX_GOOD_GRAM_SEARCH: usize = 64;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("height {0} is below the supported minimum {MIN_HEIGHT}")]
    DomainError(f64),
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
    #[error("certification failed on ({lo}, {hi}]: found {found}, expected {expected}")]
    CertificationFailed { lo: f64, hi: f64, found: u64, expected: u64 },
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Parameters of a zero scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub t_min: f64,
    pub t_max: f64,
    /// Initial sampling step as a fraction of the local average spacing
    /// `2π / log t`; the default samples four points per spacing.
    pub initial_step: f64,
    pub refine_tol: f64,
    pub max_bisections: u32,
    pub zeta: ZetaConfig,
}

impl ScanConfig {
    pub fn new(t_min: f64, t_max: f64) -> Self {
        Self {
            t_min,
            t_max,
            initial_step: DEFAULT_STEP_FRACTION,
            refine_tol: 1e-9,
            max_bisections: 200,
            zeta: ZetaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if !self.t_min.is_finite() || !self.t_max.is_finite() {
            return Err(EngineError::InvalidConfig("non-finite window".into()));
        }
        if self.t_min < MIN_HEIGHT {
            return Err(EngineError::DomainError(self.t_min));
        }
        if self.t_min >= self.t_max {
            return Err(EngineError::InvalidConfig(format!(
                "t_min {} must be below t_max {}",
                self.t_min, self.t_max
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step <= 1.0) {
            return Err(EngineError::InvalidConfig("initial_step must be in (0, 1]".into()));
        }
        if !(self.refine_tol > 0.0) {
            return Err(EngineError::InvalidConfig("refine_tol must be positive".into()));
        }
        if self.max_bisections == 0 {
            return Err(EngineError::InvalidConfig("max_bisections must be positive".into()));
        }
        Ok(())
    }
}

/// Average spacing `2π / log t` between consecutive ordinates at height `t`.
pub fn local_spacing(t: f64) -> f64 {
    2.0 * PI / t.ln()
}

/// Smooth counting function `θ(T)/π + 1`, taken as 0 below height 10.
pub fn smooth_count(t: f64) -> f64 {
    if t < MIN_HEIGHT {
        0.0
    } else {
        rs_theta(t) / PI + 1.0
    }
}

/// The Gram point `g_n`, solving `θ(g_n) = nπ` for `n ≥ −1`.
fn gram_point(n: i64) -> f64 {
    let target = n as f64 * PI;
    // bracket in [GRAM_FLOOR, hi] where θ is increasing
    let mut lo = GRAM_FLOOR;
    let mut hi = 20.0f64;
    while rs_theta(hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    // start near the asymptotic inverse, then safeguarded Newton
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = rs_theta(t) - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = rs_theta_derivative(t);
        let mut next = t - f / d;
        if !(next > lo && next < hi) || d <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-14 * t {
            return next;
        }
        t = next;
    }
    t
}

/// Index of the first Gram point strictly above `t`.
fn gram_index_above(t: f64) -> i64 {
    let t = t.max(GRAM_FLOOR);
    let mut n = (rs_theta(t) / PI).floor() as i64 + 1;
    // θ(t)/π rounding can be off by one at an exact Gram point
    while n > -1 && gram_point(n - 1) > t {
        n -= 1;
    }
    while gram_point(n) <= t {
        n += 1;
    }
    n
}

/// All Gram points in `[t_min, t_max]`, strictly increasing.
pub fn gram_points(t_min: f64, t_max: f64) -> Result<Vec<f64>, EngineError> {
    if !(t_min >= MIN_HEIGHT) {
        return Err(EngineError::DomainError(t_min));
    }
    if !(t_max >= t_min) {
        return Ok(Vec::new());
    }
    let first = gram_index_above(t_min - 1e-9 * t_min);
    let mut out = Vec::new();
    let mut n = first;
    loop {
        let g = gram_point(n);
        if g > t_max {
            break;
        }
        if g >= t_min {
            out.push(g);
        }
        n += 1;
    }
    Ok(out)
}

/// Indexed Gram points with `g_n ≥ t_min` (or `≤`), used for snapping.
fn gram_points_indexed(n_lo: i64, n_hi: i64) -> Vec<(i64, f64)> {
    (n_lo..=n_hi).into_par_iter().map(|n| (n, gram_point(n))).collect()
}

fn z_value(t: f64, cfg: &ZetaConfig) -> Result<f64, EngineError> {
    Ok(riemann_siegel_z_with(t, cfg)?.value)
}

fn is_good_gram(n: i64, g: f64, cfg: &ZetaConfig) -> Result<bool, EngineError> {
    let z = z_value(g, cfg)?;
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * z > 0.0)
}

/// Nearest good Gram point at or below `t` (searching downwards, never below
/// `g_{−1}`), as `(n, g_n)`.
fn good_gram_at_or_below(t: f64, cfg: &ZetaConfig) -> Result<(i64, f64), EngineError> {
    let mut n = gram_index_above(t) - 1;
    for _ in 0..MAX_GOOD_GRAM_SEARCH {
        if n < -1 {
            break;
        }
        let g = gram_point(n);
        if is_good_gram(n, g, cfg)? {
            return Ok((n, g));
        }
        n -= 1;
    }
    Err(EngineError::InvalidConfig(format!("no good Gram point found below {t}")))
}

fn good_gram_at_or_above(t: f64, cfg: &ZetaConfig) -> Result<(i64, f64), EngineError> {
    let mut n = gram_index_above(t);
    if n > -1 && gram_point(n - 1) == t {
        n -= 1;
    }
    for _ in 0..MAX_GOOD_GRAM_SEARCH {
        let g = gram_point(n);
        if is_good_gram(n, g, cfg)? {
            return Ok((n, g));
        }
        n += 1;
    }
    Err(EngineError::InvalidConfig(format!("no good Gram point found above {t}")))
}

/// A chunk `(g_lo, g_hi]` between two good Gram points, `hi − lo` zeros expected.
#[derive(Debug, Clone, Copy)]
struct Chunk {
    n_lo: i64,
    n_hi: i64,
}

/// Zeros found in one chunk plus the sampling fraction that found them.
struct ChunkResult {
    ordinates: Vec<(f64, f64)>, // (ordinate, bracket width)
    expected: u64,
    lo: f64,
    hi: f64,
}

/// Bisect a sign-change bracket down to `tol`.
fn bisect(
    mut a: f64,
    mut za: f64,
    mut b: f64,
    cfg: &ScanConfig,
) -> Result<(f64, f64), EngineError> {
    for _ in 0..cfg.max_bisections {
        if b - a <= cfg.refine_tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let zm = z_value(m, &cfg.zeta)?;
        if zm == 0.0 {
            return Ok((m, 0.0));
        }
        if (zm > 0.0) == (za > 0.0) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b), b - a))
}

/// Sample `Z` on `(lo, hi]` with `per_interval` points per Gram interval and
/// refine each sign change.
fn scan_chunk(
    grams: &[(i64, f64)],
    per_interval: usize,
    cfg: &ScanConfig,
) -> Result<Vec<(f64, f64)>, EngineError> {
    let mut found = Vec::new();
    let mut prev_t = grams[0].1;
    let mut prev_z = z_value(prev_t, &cfg.zeta)?;
    for w in grams.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        let h = (b - a) / per_interval as f64;
        for k in 1..=per_interval {
            let t = if k == per_interval { b } else { a + h * k as f64 };
            let z = z_value(t, &cfg.zeta)?;
            if z == 0.0 {
                found.push((t, 0.0));
                // step past an exact zero; the sign is taken from the next sample
                prev_t = t;
                prev_z = 0.0;
                continue;
            }
            if prev_z != 0.0 && (z > 0.0) != (prev_z > 0.0) {
                found.push(bisect(prev_t, prev_z, t, cfg)?);
            }
            prev_t = t;
            prev_z = z;
        }
    }
    Ok(found)
}

fn run_chunk(chunk: Chunk, cfg: &ScanConfig) -> Result<ChunkResult, EngineError> {
    let grams: Vec<(i64, f64)> = (chunk.n_lo..=chunk.n_hi).map(|n| (n, gram_point(n))).collect();
    let expected = (chunk.n_hi - chunk.n_lo) as u64;
    let lo = grams[0].1;
    let hi = grams[grams.len() - 1].1;
    let mut fraction = cfg.initial_step;
    loop {
        // Gram intervals are close to the average spacing, so a fraction f of
        // the spacing is ~1/f samples per interval
        let per_interval = (1.0 / fraction).ceil().max(1.0) as usize;
        let ordinates = scan_chunk(&grams, per_interval, cfg)?;
        let found = ordinates.len() as u64;
        if found == expected {
            return Ok(ChunkResult { ordinates, expected, lo, hi });
        }
        if found > expected || fraction / 2.0 < MIN_STEP_FRACTION * (1.0 - 1e-12) {
            return Err(EngineError::CertificationFailed { lo, hi, found, expected });
        }
        fraction /= 2.0;
    }
}

/// Scan `(t_min, t_max]` for zeros of `Z(t)`.
///
/// Every sign change yields one record with `β = 1/2`, `m = 1`; ordinates are
/// refined to `refine_tol`. Fails with `CertificationFailed` when a chunk
/// keeps coming up short at the finest step.
pub fn scan_zeros(config: &ScanConfig) -> Result<ZeroSet, EngineError> {
    config.validate()?;
    let (n_lo, _) = good_gram_at_or_below(config.t_min, &config.zeta)?;
    let (n_hi, _) = good_gram_at_or_above(config.t_max, &config.zeta)?;

    // cut (g_lo, g_hi] at good Gram points every ~CHUNK_GRAM_INTERVALS
    let mut cuts = vec![n_lo];
    let mut n = n_lo + CHUNK_GRAM_INTERVALS as i64;
    while n < n_hi {
        let mut m = n;
        let mut chosen = None;
        while m < n_hi && m < n + MAX_GOOD_GRAM_SEARCH as i64 {
            if is_good_gram(m, gram_point(m), &config.zeta)? {
                chosen = Some(m);
                break;
            }
            m += 1;
        }
        match chosen {
            Some(m) => {
                cuts.push(m);
                n = m + CHUNK_GRAM_INTERVALS as i64;
            }
            None => n = m,
        }
    }
    cuts.push(n_hi);
    cuts.dedup();
    let chunks: Vec<Chunk> = cuts.windows(2).map(|w| Chunk { n_lo: w[0], n_hi: w[1] }).collect();

    let results: Vec<Result<ChunkResult, EngineError>> =
        chunks.par_iter().map(|c| run_chunk(*c, config)).collect();
    let mut all = Vec::new();
    let mut expected_total = 0;
    for r in results {
        let r = r?;
        expected_total += r.expected;
        debug_assert!(r.lo < r.hi);
        all.extend(r.ordinates);
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    if all.len() as u64 != expected_total {
        return Err(EngineError::CertificationFailed {
            lo: config.t_min,
            hi: config.t_max,
            found: all.len() as u64,
            expected: expected_total,
        });
    }

    let records: Vec<ZeroRecord> = all
        .into_iter()
        .filter(|(g, _)| *g > config.t_min && *g <= config.t_max)
        .map(|(g, width)| ZeroRecord::on_line(g, width.max(config.refine_tol), Source::Computed))
        .collect();
    let provisional = ZeroSet::new(
        records,
        config.t_min,
        config.t_max,
        format!("computed scan ({}, {}]", config.t_min, config.t_max),
        Completeness::Unknown,
    )?;
    let certificate = certify_count_with(&provisional, (config.t_min, config.t_max), &config.zeta)?;
    let records = provisional.records().to_vec();
    Ok(ZeroSet::new(
        records,
        config.t_min,
        config.t_max,
        provisional.metadata().to_string(),
        Completeness::Certified { certificate },
    )?)
}

/// Check a zero list against the theta-based count on `(lo, hi]`.
pub fn certify_count(zeros: &ZeroSet, window: (f64, f64)) -> Result<CountCertificate, EngineError> {
    certify_count_with(zeros, window, &ZetaConfig::default())
}

/// Certificate rules:
///
/// * `formula_count = smooth_count(hi) − smooth_count(lo)` and
///   `residual = found − formula_count`;
/// * if good Gram points `g_a < g_b` exist inside the window, the zeros in
///   `(g_a, g_b]` must number exactly `b − a`, and each edge piece must match
///   its smooth count within 1; the reported residual is then the inner
///   residual (an integer), i.e. the residual after snapping the endpoints;
/// * otherwise `|residual| < 1` is required.
pub fn certify_count_with(
    zeros: &ZeroSet,
    window: (f64, f64),
    cfg: &ZetaConfig,
) -> Result<CountCertificate, EngineError> {
    let (lo, hi) = window;
    let count_in = |a: f64, b: f64| -> u64 {
        zeros
            .records()
            .iter()
            .filter(|r| r.gamma > a && r.gamma <= b)
            .map(|r| r.multiplicity as u64)
            .sum()
    };
    let found = count_in(lo, hi);
    let formula_count = smooth_count(hi) - smooth_count(lo);
    let smooth_residual = found as f64 - formula_count;

    let inner = if hi > GRAM_FLOOR { inner_good_grams(lo, hi, cfg)? } else { None };
    let (certified, residual) = match inner {
        Some(((a, ga), (b, gb))) => {
            let inner_found = count_in(ga, gb);
            let inner_residual = inner_found as f64 - (b - a) as f64;
            let lo_edge = count_in(lo, ga) as f64 - (smooth_count(ga) - smooth_count(lo));
            let hi_edge = count_in(gb, hi) as f64 - (smooth_count(hi) - smooth_count(gb));
            let ok = inner_residual == 0.0 && lo_edge.abs() < 1.0 && hi_edge.abs() < 1.0;
            let residual = if inner_residual != 0.0 {
                inner_residual
            } else if lo_edge.abs() >= 1.0 || hi_edge.abs() >= 1.0 {
                lo_edge + hi_edge
            } else {
                0.0
            };
            (ok, residual)
        }
        None => (smooth_residual.abs() < 1.0, smooth_residual),
    };
    Ok(CountCertificate { window, found, formula_count, certified, residual })
}

type GramPoint = (i64, f64);

/// First and last good Gram points inside `(lo, hi]`, if there are two.
fn inner_good_grams(
    lo: f64,
    hi: f64,
    cfg: &ZetaConfig,
) -> Result<Option<(GramPoint, GramPoint)>, EngineError> {
    let n_first = gram_index_above(lo);
    let n_last = gram_index_above(hi) - 1;
    if n_last <= n_first {
        return Ok(None);
    }
    let mut a = None;
    for (n, g) in gram_points_indexed(n_first, n_first.saturating_add(MAX_GOOD_GRAM_SEARCH as i64).min(n_last)) {
        if g > lo && is_good_gram(n, g, cfg)? {
            a = Some((n, g));
            break;
        }
    }
    let mut b = None;
    for (n, g) in gram_points_indexed(n_last.saturating_sub(MAX_GOOD_GRAM_SEARCH as i64).max(n_first), n_last)
        .into_iter()
        .rev()
    {
        if g <= hi && is_good_gram(n, g, cfg)? {
            b = Some((n, g));
            break;
        }
    }
    match (a, b) {
        (Some(a), Some(b)) if a.0 < b.0 => Ok(Some((a, b))),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_points_satisfy_definition() {
        let g = gram_points(100.0, 200.0).unwrap();
        assert!(!g.is_empty());
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            let want = 2.0 * PI / (mid / (2.0 * PI)).ln();
            assert!(((w[1] - w[0]) - want).abs() < 0.01 * want);
        }
        for &t in &g {
            let r = rs_theta(t) / PI;
            assert!((r - r.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn gram_domain_error() {
        assert!(matches!(gram_points(5.0, 20.0), Err(EngineError::DomainError(_))));
    }

    #[test]
    fn first_gram_point() {
        // g_0 solves θ(t) = 0
        let g0 = gram_point(0);
        assert!(rs_theta(g0).abs() < 1e-12);
        assert!(g0 > 17.0 && g0 < 18.0);
        assert_eq!(gram_index_above(g0), 1);
    }

    #[test]
    fn config_validation() {
        assert!(ScanConfig::new(10.0, 5.0).validate().is_err());
        assert!(matches!(ScanConfig::new(9.0, 20.0).validate(), Err(EngineError::DomainError(_))));
        let mut c = ScanConfig::new(10.0, 20.0);
        c.refine_tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn scan_first_zero() {
        let set = scan_zeros(&ScanConfig::new(10.0, 15.0)).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.records()[0].gamma - 14.134_725_141_734_69).abs() < 1e-9);
        assert!(set.is_complete());
    }

    #[test]
    fn scan_empty_window() {
        let set = scan_zeros(&ScanConfig::new(10.0, 10.5)).unwrap();
        assert!(set.is_empty());
        let cert = set.certificate().unwrap();
        assert!(cert.certified);
    }

    #[test]
    fn empty_set_below_ten_certifies() {
        let empty = ZeroSet::empty(0.0, 10.0, Completeness::Unknown).unwrap();
        let c = certify_count(&empty, (0.0, 10.0)).unwrap();
        assert!(c.certified);
        assert!(c.formula_count < 1.0);
    }
}
