//! Riemann–Siegel main sum and correction terms `C_0..C_4`.
//!
//! The correction functions are built from derivatives of
//! `Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp)`. `Ψ` is entire, so its Taylor
//! series about `p = 1/2` is obtained once from a Cauchy integral (trapezoid
//! rule on a circle) and every derivative becomes a polynomial in `p − 1/2`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const TAYLOR_ORDER: usize = 72;
const CAUCHY_NODES: usize = 256;
const CAUCHY_RADIUS: f64 = 1.0;

/// Gabcke's remainder constants: `|R_k(t)| ≤ d_k t^{-(2k+3)/4}` for `t ≥ 200`.
pub const GABCKE_D: [f64; 5] = [0.127, 0.053, 0.011, 0.031, 0.017];
/// Lowest height at which [`GABCKE_D`] applies.
pub const GABCKE_MIN_T: f64 = 200.0;

/// `Ψ` written in `w = p − 1/2`: `−cos(2πw² − 5π/8) / cos(2πw)`.
fn psi_complex(w: Complex64) -> Complex64 {
    let num = (w * w * (2.0 * PI) - 5.0 * PI / 8.0).cos();
    let den = (w * (2.0 * PI)).cos();
    -num / den
}

/// Polynomials in `w` (ascending powers) for `C_0..C_4`.
struct Corrections {
    polys: [Vec<f64>; 5],
}

fn psi_taylor() -> Vec<f64> {
    let mut coef = vec![0.0; TAYLOR_ORDER];
    let m = CAUCHY_NODES as f64;
    let samples: Vec<(Complex64, Complex64)> = (0..CAUCHY_NODES)
        .map(|j| {
            let phase = 2.0 * PI * j as f64 / m;
            let w = Complex64::from_polar(CAUCHY_RADIUS, phase);
            (w, psi_complex(w))
        })
        .collect();
    for (k, slot) in coef.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (_, f)) in samples.iter().enumerate() {
            let phase = -2.0 * PI * (j * k % CAUCHY_NODES) as f64 / m;
            acc += f * Complex64::from_polar(1.0, phase);
        }
        // Ψ is real on the real axis, so the coefficients are real
        *slot = acc.re / m / CAUCHY_RADIUS.powi(k as i32);
    }
    coef
}

fn derivative(poly: &[f64], order: usize) -> Vec<f64> {
    let mut p = poly.to_vec();
    for _ in 0..order {
        if p.len() <= 1 {
            return vec![0.0];
        }
        p = p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    }
    p
}

fn combine(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let len = terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
    let mut out = vec![0.0; len];
    for (scale, p) in terms {
        for (o, c) in out.iter_mut().zip(p.iter()) {
            *o += scale * c;
        }
    }
    out
}

fn corrections() -> &'static Corrections {
    static C: OnceLock<Corrections> = OnceLock::new();
    C.get_or_init(|| {
        let psi = psi_taylor();
        let d: Vec<Vec<f64>> = (0..=12).map(|k| derivative(&psi, k)).collect();
        let p2 = PI * PI;
        let p4 = p2 * p2;
        let p6 = p4 * p2;
        let p8 = p4 * p4;
        let c0 = psi.clone();
        let c1 = combine(&[(-1.0 / (96.0 * p2), &d[3])]);
        let c2 = combine(&[(1.0 / (64.0 * p2), &d[2]), (1.0 / (18432.0 * p4), &d[6])]);
        let c3 = combine(&[
            (-1.0 / (64.0 * p2), &d[1]),
            (-1.0 / (3840.0 * p4), &d[5]),
            (-1.0 / (5_308_416.0 * p6), &d[9]),
        ]);
        let c4 = combine(&[
            (1.0 / (128.0 * p2), &d[0]),
            (19.0 / (24576.0 * p4), &d[4]),
            (11.0 / (5_898_240.0 * p6), &d[8]),
            (1.0 / (2_038_431_744.0 * p8), &d[12]),
        ]);
        Corrections { polys: [c0, c1, c2, c3, c4] }
    })
}

fn horner(poly: &[f64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Correction function `C_k(p)` for `k ≤ 4`, `0 ≤ p < 1`.
pub fn correction(k: usize, p: f64) -> f64 {
    horner(&corrections().polys[k], p - 0.5)
}

/// Direct evaluation of `Ψ(p)` on the real line (test and diagnostics use).
pub fn psi_direct(p: f64) -> f64 {
    psi_complex(Complex64::new(p - 0.5, 0.0)).re
}

// (ln n, n^{-1/2}) for the main sum; covers t up to ~1e7
const LOG_TABLE_LEN: usize = 1300;

fn log_table() -> &'static [(f64, f64)] {
    static T: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    T.get_or_init(|| {
        (0..LOG_TABLE_LEN)
            .map(|n| {
                if n == 0 {
                    (0.0, 0.0)
                } else {
                    let nf = n as f64;
                    (nf.ln(), 1.0 / nf.sqrt())
                }
            })
            .collect()
    })
}

/// Riemann–Siegel evaluation of `Z(t)` given `θ(t)`.
///
/// `terms` is the number of correction terms kept (1..=5). Returns the value
/// and the truncation bound from [`GABCKE_D`] (without rounding).
pub(crate) fn z_value(t: f64, theta: f64, terms: usize) -> (f64, f64) {
    debug_assert!((1..=5).contains(&terms));
    let tau = (t / (2.0 * PI)).sqrt();
    let n = tau.floor() as usize;
    let p = tau - n as f64;
    let table = log_table();
    let mut sum = 0.0;
    for k in (1..=n).rev() {
        let (ln_k, inv_sqrt) = if k < table.len() {
            table[k]
        } else {
            let kf = k as f64;
            (kf.ln(), 1.0 / kf.sqrt())
        };
        sum += inv_sqrt * (theta - t * ln_k).cos();
    }
    let a = 1.0 / tau; // (t/2π)^{-1/2}
    let mut corr = 0.0;
    let mut pow = 1.0;
    for k in 0..terms {
        corr += correction(k, p) * pow;
        pow *= a;
    }
    let sign = if n & 1 == 1 { 1.0 } else { -1.0 };
    let value = 2.0 * sum + sign * a.sqrt() * corr;
    let k = terms - 1;
    let bound = GABCKE_D[k] * t.powf(-((2 * k + 3) as f64) / 4.0);
    (value, bound)
}

/// Number of main-sum terms, `⌊√(t/2π)⌋`.
pub(crate) fn main_sum_len(t: f64) -> usize {
    (t / (2.0 * PI)).sqrt().floor() as usize
}
