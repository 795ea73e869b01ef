//! Independent reference computations shared by the integration tests. None
//! of these call into the library's zeta or pair-sum code.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::PathBuf;
use zpc_core::engine::{scan_zeros, ScanConfig};
use zpc_core::store::{ingest_odlyzko, parse_odlyzko, write_odlyzko, IngestOptions, ZeroSet};

/// Dirichlet eta by the Cohen–Villegas–Zagier alternating-series iteration
/// with `n` terms.
pub fn eta(s: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(nf);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        c = b - c;
        sum += c * (-s * (kf + 1.0).ln()).exp();
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

pub fn zeta_via_eta(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let two_pow = ((one - s) * 2f64.ln()).exp();
    eta(s, 80) / (one - two_pow)
}

/// First nontrivial zero by bisection on the projection of `ζ(1/2 + it)`
/// onto its direction at the left end of a bracket known to hold one zero.
pub fn first_zero_by_eta_bisection() -> f64 {
    let z = |t: f64| zeta_via_eta(Complex64::new(0.5, t));
    let (mut a, mut b) = (14.0, 14.3);
    let u = z(a);
    let u = u / u.norm();
    let f = |t: f64| (z(t) * u.conj()).re;
    let fa = f(a);
    assert!(fa > 0.0 && f(b) < 0.0, "bracket does not straddle a sign change");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Composite Gauss–Legendre on `[a, b]`, 20-point panels, nodes by Newton.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const N: usize = 20;
    let mut nodes = [0.0; N];
    let mut weights = [0.0; N];
    for i in 0..N {
        let mut x = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..60 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=N {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        let mut s = 0.0;
        for i in 0..N {
            s += weights[i] * f(c + 0.5 * h * nodes[i]);
        }
        total += 0.5 * h * s;
    }
    total
}

/// `ln Γ(z)` for `Re z > 0` from Malmstén's integral
/// `∫_0^∞ [(z − 1)e^{−x} − (e^{−x} − e^{−zx})/(1 − e^{−x})] dx/x`.
pub fn ln_gamma_malmsten(z: Complex64) -> Complex64 {
    let zm1 = z - Complex64::new(1.0, 0.0);
    let integrand = |x: f64| -> Complex64 {
        // e^{−x} − e^{−zx} = −e^{−x} expm1(−(z − 1)x), written without cancellation
        let w = -zm1 * x;
        let (sb, cb) = w.im.sin_cos();
        let half = (0.5 * w.im).sin();
        let expm1_w = Complex64::new(w.re.exp_m1() * cb - 2.0 * half * half, w.re.exp() * sb);
        let ex = (-x).exp();
        let frac = ex * expm1_w / (-x).exp_m1();
        (zm1 * ex - frac) / x
    };
    let upper = 60.0 / z.re.min(1.0);
    let panels = ((upper * (1.0 + z.im.abs())) as usize).max(200);
    let re = gl_integrate(|x| integrand(x).re, 0.0, 1.0, 400) + gl_integrate(|x| integrand(x).re, 1.0, upper, panels);
    let im = gl_integrate(|x| integrand(x).im, 0.0, 1.0, 400) + gl_integrate(|x| integrand(x).im, 1.0, upper, panels);
    Complex64::new(re, im)
}

/// `θ(t)` from the Malmstén log-Gamma.
pub fn theta_oracle(t: f64) -> f64 {
    ln_gamma_malmsten(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// `(sin(w/2)/(w/2))²` written out directly.
pub fn kernel_direct(w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        let x = (0.5 * w).sin() / (0.5 * w);
        x * x
    }
}

/// `Σ_{i,j} m_i m_j K((γ_i − γ_j) log T)` over all ordered record pairs.
pub fn fejer_brute_force(gammas: &[f64], mult: &[u32], t: f64) -> f64 {
    let l = t.ln();
    let mut total = 0.0;
    for (gi, mi) in gammas.iter().zip(mult) {
        for (gj, mj) in gammas.iter().zip(mult) {
            total += (*mi as f64) * (*mj as f64) * kernel_direct((gi - gj) * l);
        }
    }
    total
}

/// Ordered multiplicity-weighted pairs with `|γ − γ'| ≤ 2πλ/log T`.
pub fn es_brute_force(gammas: &[f64], mult: &[u32], t: f64, lambda: f64) -> u128 {
    let delta = 2.0 * PI * lambda / t.ln();
    let mut count = 0u128;
    for (gi, mi) in gammas.iter().zip(mult) {
        for (gj, mj) in gammas.iter().zip(mult) {
            if (gi - gj).abs() <= delta {
                count += *mi as u128 * *mj as u128;
            }
        }
    }
    count
}

/// Height just above the 100,000th zero.
pub const HEIGHT_100K: f64 = 74_921.0;

/// The first 100,000 zeros in ingested form. Uses the table named by
/// `ZPC_ODLYZKO_ZEROS` when set; otherwise scans once and caches an
/// Odlyzko-layout table under the cargo temporary directory.
pub fn first_100k_ingested() -> ZeroSet {
    if let Ok(path) = std::env::var("ZPC_ODLYZKO_ZEROS") {
        return ingest_odlyzko(&path, IngestOptions::default()).expect("reading ZPC_ODLYZKO_ZEROS").first_n(100_000);
    }
    let cache: PathBuf = [env!("CARGO_TARGET_TMPDIR"), "zeros_100k.txt"].iter().collect();
    if let Ok(text) = std::fs::read_to_string(&cache) {
        if let Ok(set) = parse_odlyzko(text.as_bytes(), IngestOptions::default()) {
            if set.len() >= 100_000 {
                return set.first_n(100_000);
            }
        }
    }
    let computed = scan_zeros(&ScanConfig::new(10.0, HEIGHT_100K)).expect("scanning the first 100k zeros");
    assert!(computed.is_complete());
    let text = write_odlyzko(&computed);
    let tmp = cache.with_extension("tmp");
    std::fs::write(&tmp, &text).expect("writing zero cache");
    std::fs::rename(&tmp, &cache).expect("moving zero cache into place");
    parse_odlyzko(text.as_bytes(), IngestOptions::default()).unwrap().first_n(100_000)
}
