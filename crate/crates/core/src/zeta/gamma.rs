//! Complex log-Gamma and the Bernoulli-number tables shared by the
//! Stirling, theta and Euler–Maclaurin expansions.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Number of `B_{2k}/(2k)!` ratios kept in the table (k = 1..=MAX_BERNOULLI).
pub const MAX_BERNOULLI: usize = 64;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `ζ(2k)` for k ≥ 1, summed smallest-first with an integral tail.
fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        _ => {
            let s = (2 * k) as f64;
            const N: usize = 1000;
            let nf = N as f64;
            // tail: ∫_N^∞ x^{-s} dx + N^{-s}/2, next EM term is below 1e-30
            let mut acc = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
            for n in (1..N).rev() {
                acc += (n as f64).powf(-s);
            }
            acc
        }
    }
}

fn bernoulli_table() -> &'static [f64; MAX_BERNOULLI + 1] {
    static TABLE: OnceLock<[f64; MAX_BERNOULLI + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; MAX_BERNOULLI + 1];
        let two_pi = 2.0 * PI;
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            // B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}
            *slot = sign * 2.0 * zeta_even(k) / two_pi.powi(2 * k as i32);
        }
        t
    })
}

/// `B_{2k} / (2k)!` for `1 ≤ k ≤ MAX_BERNOULLI`.
pub fn bernoulli_over_factorial(k: usize) -> f64 {
    assert!((1..=MAX_BERNOULLI).contains(&k), "bernoulli index {k} out of table");
    bernoulli_table()[k]
}

/// `B_{2k}` itself; grows factorially, only sensible for modest k.
pub fn bernoulli_even(k: usize) -> f64 {
    let mut f = bernoulli_over_factorial(k);
    for j in 2..=(2 * k) {
        f *= j as f64;
    }
    f
}

const STIRLING_TERMS: usize = 12;
const STIRLING_MIN_ABS: f64 = 12.0;

/// Stirling series for `ln Γ(z)`, valid for `|z| ≥ STIRLING_MIN_ABS`, `Re z > 0`.
fn stirling(z: Complex64) -> Complex64 {
    let ln_z = z.ln();
    let mut acc = (z - 0.5) * ln_z - z + 0.5 * LN_2PI;
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=STIRLING_TERMS {
        let kf = k as f64;
        let coef = bernoulli_even(k) / (2.0 * kf * (2.0 * kf - 1.0));
        acc += pow * coef;
        pow *= inv2;
    }
    acc
}

/// Principal-continuation `ln Γ(z)`.
///
/// For `Re z ≥ 0` the imaginary part is the continuous branch obtained from
/// Stirling's series through the upward recurrence, which is the one the
/// Riemann–Siegel theta function needs. For `Re z < 0` the reflection formula
/// is used and only `exp(ln_gamma(z))` is meaningful.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - log_sin(z * PI) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN_ABS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// `ln sin(z)`, stable for large `|Im z|` where `sin` itself overflows.
pub fn log_sin(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 20.0 {
        // sin z = -e^{-iz}/(2i) · (1 - e^{2iz})
        let e = (2.0 * i * z).exp();
        -i * z - (2.0 * i).ln() + Complex64::new(0.0, PI) + (1.0 - e).ln()
    } else if z.im < -20.0 {
        // sin z = e^{iz}/(2i) · (1 - e^{-2iz})
        let e = (-2.0 * i * z).exp();
        i * z - (2.0 * i).ln() + (1.0 - e).ln()
    } else {
        z.sin().ln()
    }
}
