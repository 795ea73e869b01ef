//! Evaluation of `ζ(s)`, `χ(s)`, the Riemann–Siegel theta function and `Z(t)`.
//!
//! Every value carries an absolute error bound built from the truncation
//! bound of the method that produced it plus a floating-point rounding floor.
//! Routing between methods is controlled by [`ZetaConfig`]:
//!
//! * `σ < 0`: functional equation `ζ(s) = χ(s) ζ(1 − s)`;
//! * `σ ≥ 1/2`, `|t| < eta_max_abs_t`: Borwein-accelerated alternating
//!   (eta) series for `(1 − 2^{1−s}) ζ(s)`;
//! * on the critical line with `|t| ≥ rs_min_t`: Riemann–Siegel;
//! * everything else: Euler–Maclaurin summation.

mod gamma;
mod riemann_siegel;


pub use gamma::{bernoulli_even, bernoulli_over_factorial, ln_gamma, log_sin};
pub use riemann_siegel::{correction as rs_correction, psi_direct, GABCKE_D, GABCKE_MIN_T};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Heights above which double precision no longer tracks the phase of `θ(t)`.
pub const MAX_HEIGHT: f64 = 1.0e7;

const EPS: f64 = f64::EPSILON;
const EM_MAX_TERMS: usize = 60;
const EM_MAX_N: usize = 20_000_000;
const ETA_MAX_N: usize = 120;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("ζ(s) has a pole at s = 1")]
    PoleAtOne,
    #[error("χ(s) has a pole at s = {0}")]
    ChiPole(f64),
    #[error("requested error {requested:e} is below the attainable bound {attainable:e}")]
    PrecisionUnreachable { requested: f64, attainable: f64 },
    #[error("|t| = {0} is outside the supported range (|t| ≤ {MAX_HEIGHT:e})")]
    OverflowDomain(f64),
    #[error("non-finite argument")]
    NonFinite,
    #[error("target error must be positive, got {0}")]
    BadTolerance(f64),
}

/// A point `s = σ + it`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self, ZetaError> {
        if sigma.is_finite() && t.is_finite() {
            Ok(Self { sigma, t })
        } else {
            Err(ZetaError::NonFinite)
        }
    }

    pub fn real(sigma: f64) -> Result<Self, ZetaError> {
        Self::new(sigma, 0.0)
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    /// The reflected point `1 − s`.
    pub fn reflect(self) -> Self {
        Self { sigma: 1.0 - self.sigma, t: -self.t }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.as_complex()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    EtaSeries,
    EulerMaclaurin,
    RiemannSiegel,
    FunctionalEquation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_bound: f64,
    pub method: Method,
}

/// A real value with its error bound (used for `Z(t)` and `θ(t)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEval {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: Method,
}

/// Method routing thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaConfig {
    /// Eta series is used for `σ ≥ 1/2` and `|t|` below this.
    pub eta_max_abs_t: f64,
    /// Riemann–Siegel is used on the critical line at and above this height.
    /// Clamped to at least [`GABCKE_MIN_T`], where its remainder bound holds.
    pub rs_min_t: f64,
    /// Riemann–Siegel correction terms kept (1..=5).
    pub rs_terms: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self { eta_max_abs_t: 10.0, rs_min_t: GABCKE_MIN_T, rs_terms: 5 }
    }
}

/// `ζ(s)` with default routing.
pub fn zeta_eval(s: ComplexPoint, target_abs_error: f64) -> Result<EvalResult, ZetaError> {
    zeta_eval_with(s, target_abs_error, &ZetaConfig::default())
}

pub fn zeta_eval_with(
    s: ComplexPoint,
    target_abs_error: f64,
    cfg: &ZetaConfig,
) -> Result<EvalResult, ZetaError> {
    if !(target_abs_error > 0.0) || !target_abs_error.is_finite() {
        return Err(ZetaError::BadTolerance(target_abs_error));
    }
    if !s.sigma.is_finite() || !s.t.is_finite() {
        return Err(ZetaError::NonFinite);
    }
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    if s.t.abs() > MAX_HEIGHT {
        return Err(ZetaError::OverflowDomain(s.t));
    }
    // conjugate symmetry
    if s.t < 0.0 {
        let r = zeta_eval_with(ComplexPoint { sigma: s.sigma, t: -s.t }, target_abs_error, cfg)?;
        return Ok(EvalResult { value: r.value.conj(), ..r });
    }
    if s.sigma < 0.0 {
        return zeta_functional_equation(s, target_abs_error, cfg);
    }
    let rs_min = cfg.rs_min_t.max(GABCKE_MIN_T);
    if s.sigma == 0.5 && s.t >= rs_min {
        let z = riemann_siegel_z_with(s.t, cfg)?;
        let th = rs_theta_with_bound(s.t);
        let value = Complex64::from_polar(z.value, -th.value);
        let bound = z.abs_error_bound + z.value.abs() * th.abs_error_bound;
        if let Ok(r) = finish(value, bound, Method::RiemannSiegel, target_abs_error) {
            return Ok(r);
        }
    }
    if s.sigma >= 0.5 && s.t < cfg.eta_max_abs_t {
        if let Ok(r) = zeta_eta(s, target_abs_error) {
            return Ok(r);
        }
    }
    zeta_euler_maclaurin(s, target_abs_error)
}

fn finish(value: Complex64, bound: f64, method: Method, target: f64) -> Result<EvalResult, ZetaError> {
    if !value.re.is_finite() || !value.im.is_finite() || !bound.is_finite() {
        return Err(ZetaError::PrecisionUnreachable { requested: target, attainable: f64::INFINITY });
    }
    if bound > target {
        return Err(ZetaError::PrecisionUnreachable { requested: target, attainable: bound });
    }
    Ok(EvalResult { value, abs_error_bound: bound, method })
}

fn zeta_functional_equation(
    s: ComplexPoint,
    target: f64,
    cfg: &ZetaConfig,
) -> Result<EvalResult, ZetaError> {
    // trivial zeros are exact
    if s.t == 0.0 && s.sigma.fract() == 0.0 && (s.sigma as i64) % 2 == 0 {
        return Ok(EvalResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_bound: 0.0,
            method: Method::FunctionalEquation,
        });
    }
    let chi = chi_factor(s)?;
    let chi_abs = chi.norm();
    let inner_target = if chi_abs > 0.0 { 0.5 * target / chi_abs } else { target };
    let inner = zeta_eval_with(s.reflect(), inner_target.max(f64::MIN_POSITIVE), cfg)?;
    let value = chi * inner.value;
    // χ is assembled in log space; its relative error is dominated by the
    // rounding of the exponent
    let chi_rel = chi_relative_error(s);
    let bound = chi_abs * inner.abs_error_bound + value.norm() * chi_rel + EPS * value.norm();
    finish(value, bound, Method::FunctionalEquation, target)
}

fn chi_log(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    s * std::f64::consts::LN_2 + (s - 1.0) * PI.ln() + log_sin(s * (PI / 2.0)) + ln_gamma(one - s)
}

/// Relative error bound on `chi_factor(s)`, from rounding in its logarithm.
pub fn chi_relative_error(s: ComplexPoint) -> f64 {
    8.0 * EPS * (1.0 + chi_log(s.as_complex()).norm())
}

/// `χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1 − s)`, assembled in log space.
pub fn chi_factor(s: ComplexPoint) -> Result<Complex64, ZetaError> {
    if !s.sigma.is_finite() || !s.t.is_finite() {
        return Err(ZetaError::NonFinite);
    }
    if s.t.abs() > MAX_HEIGHT {
        return Err(ZetaError::OverflowDomain(s.t));
    }
    if s.t == 0.0 && s.sigma >= 1.0 && s.sigma.fract() == 0.0 {
        let k = s.sigma as i64;
        if k % 2 == 1 {
            return Err(ZetaError::ChiPole(s.sigma));
        }
        // sin zero cancels the Γ pole: use χ(s) = 1/χ(1 − s)
        return Ok(chi_factor(s.reflect())?.inv());
    }
    let l = chi_log(s.as_complex());
    if l.re > 700.0 {
        return Err(ZetaError::OverflowDomain(s.t));
    }
    Ok(l.exp())
}

/// Borwein-accelerated eta series. Valid for `σ ≥ 1/2`; fails with
/// `PrecisionUnreachable` when its bound cannot reach `target`.
pub fn zeta_eta(s: ComplexPoint, target: f64) -> Result<EvalResult, ZetaError> {
    if s.sigma < 0.5 {
        return Err(ZetaError::PrecisionUnreachable { requested: target, attainable: f64::INFINITY });
    }
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    let z = s.as_complex();
    let one = Complex64::new(1.0, 0.0);
    let factor = one - (Complex64::new(std::f64::consts::LN_2, 0.0) * (one - z)).exp();
    let fnorm = factor.norm();
    if fnorm < 1e-8 {
        return Err(ZetaError::PrecisionUnreachable { requested: target, attainable: f64::INFINITY });
    }
    let t = s.t.abs();
    // |γ_n| ≤ 3 (1 + 2|t|) e^{π|t|/2} / ((3 + √8)^n |1 − 2^{1−s}|)
    let pre = 3.0 * (1.0 + 2.0 * t) * (PI * t / 2.0).exp() / fnorm;
    let base = 3.0 + 8f64.sqrt();
    let need = ((pre / (0.25 * target)).ln() / base.ln()).ceil().max(8.0);
    let n = if need.is_finite() { need as usize } else { ETA_MAX_N + 1 };
    let n = n.min(ETA_MAX_N);
    let trunc = pre / base.powi(n as i32);

    // d_k = n Σ_{i=0}^{k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let nf = n as f64;
    let mut term = 1.0 / nf; // i = 0: (n−1)!/n! = 1/n
    let mut acc = term;
    d.push(nf * acc);
    for i in 1..=n {
        let i_f = i as f64;
        term *= (nf + i_f - 1.0) * (nf - i_f + 1.0) * 4.0 / ((2.0 * i_f - 1.0) * (2.0 * i_f));
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in (0..n).rev() {
        let kf = (k + 1) as f64;
        let w = (d[k] - dn) / dn;
        let term = (-z * kf.ln()).exp() * w;
        let signed = if k % 2 == 0 { term } else { -term };
        sum += signed;
        abs_sum += term.norm() * (1.0 + t * kf.ln());
    }
    let value = -sum / factor;
    let rounding = 8.0 * EPS * (abs_sum + nf) / fnorm;
    let bound = trunc + rounding;
    finish(value, bound, Method::EtaSeries, target)
}

/// Euler–Maclaurin summation with the standard remainder bound
/// `|R_K| ≤ |s + 2K + 1| / (σ + 2K + 1) · |T_{K+1}|`. Requires `σ ≥ 0`.
pub fn zeta_euler_maclaurin(s: ComplexPoint, target: f64) -> Result<EvalResult, ZetaError> {
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(ZetaError::PoleAtOne);
    }
    if s.sigma < 0.0 {
        return Err(ZetaError::PrecisionUnreachable { requested: target, attainable: f64::INFINITY });
    }
    let z = s.as_complex();
    let mut n = 10 + ((z.norm() + 1.0) / PI).ceil() as usize;
    let mut last_bound = f64::INFINITY;
    while n <= EM_MAX_N {
        match em_at(z, s.sigma, n, target) {
            Ok(r) => return Ok(r),
            Err((b, rounding)) => {
                last_bound = last_bound.min(b);
                // rounding only grows with N
                if rounding > target {
                    break;
                }
            }
        }
        n *= 2;
    }
    Err(ZetaError::PrecisionUnreachable { requested: target, attainable: last_bound })
}

fn em_at(z: Complex64, sigma: f64, n: usize, target: f64) -> Result<EvalResult, (f64, f64)> {
    let nf = n as f64;
    let ln_n = nf.ln();
    let t = z.im.abs();
    let mut head = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in (1..n).rev() {
        let lk = (k as f64).ln();
        let term = (-z * lk).exp();
        head += term;
        abs_sum += term.norm() * (1.0 + t * lk);
    }
    let n_pow = (-z * ln_n).exp(); // N^{-s}
    let tail = n_pow * nf / (z - 1.0) + n_pow * 0.5;
    let mut corr = Complex64::new(0.0, 0.0);
    // rising = s(s+1)…(s+2k−2), npow_k = N^{−s−2k+1}
    let mut rising = z;
    let mut npow_k = n_pow / nf;
    let inv_n2 = 1.0 / (nf * nf);
    let mut remainder = f64::INFINITY;
    for k in 1..=EM_MAX_TERMS {
        let tk = rising * npow_k * bernoulli_over_factorial(k);
        corr += tk;
        // T_{k+1}
        let kf = k as f64;
        let next_rising = rising * (z + (2.0 * kf - 1.0)) * (z + 2.0 * kf);
        let next = next_rising * npow_k * inv_n2 * bernoulli_over_factorial(k + 1);
        let big_k = kf;
        remainder = (z + (2.0 * big_k + 1.0)).norm() / (sigma + 2.0 * big_k + 1.0) * next.norm();
        if remainder < 0.25 * target {
            break;
        }
        rising = next_rising;
        npow_k *= inv_n2;
    }
    let value = head + tail + corr;
    let rounding = 8.0 * EPS * (abs_sum + tail.norm() * (1.0 + t * ln_n) + corr.norm() + value.norm());
    let bound = remainder + rounding;
    if bound <= target && value.re.is_finite() && value.im.is_finite() {
        Ok(EvalResult { value, abs_error_bound: bound, method: Method::EulerMaclaurin })
    } else {
        Err((bound, rounding))
    }
}

const THETA_TERMS: usize = 7;

/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`.
pub fn rs_theta(t: f64) -> f64 {
    rs_theta_with_bound(t).value
}

/// `θ(t)` with an error bound. Uses the asymptotic expansion for `|t| ≥ 10`
/// and direct complex log-Gamma below.
pub fn rs_theta_with_bound(t: f64) -> RealEval {
    if t < 0.0 {
        let r = rs_theta_with_bound(-t);
        return RealEval { value: -r.value, ..r };
    }
    if t < 10.0 {
        let value = rs_theta_direct(t);
        return RealEval {
            value,
            abs_error_bound: 64.0 * EPS * (1.0 + t * t),
            method: Method::FunctionalEquation,
        };
    }
    let mut value = 0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0;
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=THETA_TERMS {
        value += theta_coefficient(k) * pow;
        pow *= inv2;
    }
    let next = theta_coefficient(THETA_TERMS + 1) * pow;
    let remainder = 2f64.powi(THETA_TERMS as i32 + 2) * next;
    RealEval {
        value,
        abs_error_bound: remainder + 4.0 * EPS * (value.abs() + 0.5 * t * t.ln()),
        method: Method::FunctionalEquation,
    }
}

/// `(1 − 2^{1−2k}) |B_{2k}| / (4k(2k−1))`.
fn theta_coefficient(k: usize) -> f64 {
    let kf = k as f64;
    (1.0 - 2f64.powi(1 - 2 * k as i32)) * bernoulli_even(k).abs() / (4.0 * kf * (2.0 * kf - 1.0))
}

/// `θ(t)` straight from `ln Γ`.
pub fn rs_theta_direct(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `θ'(t)`, to leading orders; used as a Newton slope.
pub fn rs_theta_derivative(t: f64) -> f64 {
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)` with default routing.
pub fn riemann_siegel_z(t: f64) -> Result<RealEval, ZetaError> {
    riemann_siegel_z_with(t, &ZetaConfig::default())
}

pub fn riemann_siegel_z_with(t: f64, cfg: &ZetaConfig) -> Result<RealEval, ZetaError> {
    if !t.is_finite() {
        return Err(ZetaError::NonFinite);
    }
    let t = t.abs(); // Z is even
    if t > MAX_HEIGHT {
        return Err(ZetaError::PrecisionUnreachable { requested: 0.0, attainable: f64::INFINITY });
    }
    let rs_min = cfg.rs_min_t.max(GABCKE_MIN_T);
    let th = rs_theta_with_bound(t);
    if t >= rs_min {
        let terms = cfg.rs_terms.clamp(1, 5);
        let (value, trunc) = riemann_siegel::z_value(t, th.value, terms);
        let n = riemann_siegel::main_sum_len(t) as f64;
        // each cosine argument θ − t ln n carries rounding ~ ε (|θ| + t ln n)
        let phase_err = th.abs_error_bound + 4.0 * EPS * (th.value.abs() + t * n.ln().max(1.0));
        let rounding = 2.0 * n.sqrt() * 2.0 * phase_err + 16.0 * EPS * n.sqrt();
        return Ok(RealEval {
            value,
            abs_error_bound: trunc + rounding,
            method: Method::RiemannSiegel,
        });
    }
    let s = ComplexPoint { sigma: 0.5, t };
    let z = zeta_eval_with(s, 1e-11, cfg)
        .or_else(|_| zeta_eval_with(s, 1e-10, cfg))
        .or_else(|_| zeta_eval_with(s, 1e-8, cfg))?;
    let rotated = Complex64::from_polar(1.0, th.value) * z.value;
    let bound = z.abs_error_bound + z.value.norm() * th.abs_error_bound + 4.0 * EPS * z.value.norm();
    Ok(RealEval { value: rotated.re, abs_error_bound: bound, method: z.method })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: f64, t: f64) -> ComplexPoint {
        ComplexPoint::new(s, t).unwrap()
    }

    #[test]
    fn zeta_at_zero_is_minus_half() {
        let r = zeta_eval(pt(0.0, 0.0), 1e-12).unwrap();
        assert!((r.value.re + 0.5).abs() <= r.abs_error_bound.max(1e-15));
        assert!(r.value.im.abs() < 1e-15);
        assert!(r.abs_error_bound > 0.0);
    }

    #[test]
    fn trivial_zeros_are_exact() {
        for k in 1..=5 {
            let r = zeta_eval(pt(-2.0 * k as f64, 0.0), 1e-12).unwrap();
            assert_eq!(r.value, Complex64::new(0.0, 0.0));
            assert_eq!(r.method, Method::FunctionalEquation);
        }
    }

    #[test]
    fn pole_and_bad_tolerance() {
        assert_eq!(zeta_eval(pt(1.0, 0.0), 1e-10), Err(ZetaError::PoleAtOne));
        assert!(matches!(zeta_eval(pt(0.5, 3.0), 0.0), Err(ZetaError::BadTolerance(_))));
        assert!(matches!(
            zeta_eval(pt(0.5, 3.0), 1e-40),
            Err(ZetaError::PrecisionUnreachable { .. })
        ));
        assert!(ComplexPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn negative_odd_point_matches_bernoulli() {
        // ζ(−1) = −1/12, ζ(−3) = 1/120
        let r = zeta_eval(pt(-1.0, 0.0), 1e-12).unwrap();
        assert!((r.value.re + 1.0 / 12.0).abs() < 1e-13, "{:?}", r);
        let r = zeta_eval(pt(-3.0, 0.0), 1e-12).unwrap();
        assert!((r.value.re - 1.0 / 120.0).abs() < 1e-13);
    }

    #[test]
    fn chi_at_half_is_one() {
        let c = chi_factor(pt(0.5, 0.0)).unwrap();
        assert!((c - 1.0).norm() < 1e-14);
    }

    #[test]
    fn chi_even_and_odd_integers() {
        // χ(2) = 1/χ(−1); χ(−1) = ζ(−1)/ζ(2)
        let c = chi_factor(pt(2.0, 0.0)).unwrap();
        let want = (PI * PI / 6.0) / (-1.0 / 12.0);
        assert!((c.re - want).abs() < 1e-11 * want.abs(), "{c}");
        assert_eq!(chi_factor(pt(3.0, 0.0)), Err(ZetaError::ChiPole(3.0)));
        assert!(matches!(chi_factor(pt(0.5, 2e7)), Err(ZetaError::OverflowDomain(_))));
    }

    #[test]
    fn conjugate_symmetry() {
        let a = zeta_eval(pt(0.3, 7.5), 1e-11).unwrap();
        let b = zeta_eval(pt(0.3, -7.5), 1e-11).unwrap();
        assert!((a.value - b.value.conj()).norm() < 1e-15);
    }

    #[test]
    fn eta_near_its_singular_line_falls_back() {
        // 1 − 2^{1−s} vanishes at s = 1 + 2πi/ln 2
        let t = 2.0 * PI / std::f64::consts::LN_2;
        let r = zeta_eval(pt(1.0, t), 1e-10).unwrap();
        assert_eq!(r.method, Method::EulerMaclaurin);
    }

    #[test]
    fn theta_expansion_matches_log_gamma() {
        for &t in &[10.0, 17.3, 50.0, 200.0, 5000.0] {
            let asym = rs_theta_with_bound(t);
            let direct = rs_theta_direct(t);
            assert!(
                (asym.value - direct).abs() < 1e-11 * (1.0 + direct.abs()),
                "t={t}: {} vs {direct}",
                asym.value
            );
        }
        assert_eq!(rs_theta(-30.0), -rs_theta(30.0));
    }

    #[test]
    fn z_method_switch_is_continuous() {
        let cfg_rs = ZetaConfig::default();
        let cfg_em = ZetaConfig { rs_min_t: 1e9, ..ZetaConfig::default() };
        for &t in &[200.0, 211.7, 333.3, 640.0] {
            let a = riemann_siegel_z_with(t, &cfg_rs).unwrap();
            let b = riemann_siegel_z_with(t, &cfg_em).unwrap();
            assert_eq!(a.method, Method::RiemannSiegel);
            assert_eq!(b.method, Method::EulerMaclaurin);
            assert!(
                (a.value - b.value).abs() <= a.abs_error_bound + b.abs_error_bound,
                "t={t}: {} ± {} vs {} ± {}",
                a.value,
                a.abs_error_bound,
                b.value,
                b.abs_error_bound
            );
        }
    }
}
