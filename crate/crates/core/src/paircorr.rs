//! Pair statistics over zero sets: the Fejér-kernel double sum and its
//! integral form, same-ordinate pair counts and their decomposition, the
//! short-range pair count, and the pair-correlation histogram.
//!
//! All pair sums are over ordered, multiplicity-expanded pairs: records `i`
//! and `j` contribute with weight `m_i m_j`.

use crate::quadrature::{composite_rule, integrate_adaptive};
use crate::reduce::{block_sum, block_sum_u128};
use crate::store::{first_symmetry_violation, ZeroRecord, ZeroSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PairError {
    #[error("zero set does not cover ({lo}, {hi}] completely")]
    IncompleteWindow { lo: f64, hi: f64 },
    #[error("off-line zero at beta {beta}, gamma {gamma} has no reflected partner")]
    SymmetryViolation { beta: f64, gamma: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// `(T/2π) log T`.
pub fn normalizer(t: f64) -> f64 {
    t / (2.0 * PI) * t.ln()
}

/// Main terms of the zero-counting formula, `(T/2π) log(T/2π) − T/2π`.
pub fn nt_formula(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * x.ln() - x
}

/// `2π / log T`.
pub fn average_spacing(t: f64) -> f64 {
    2.0 * PI / t.ln()
}

/// `(sin(w/2) / (w/2))²`, equal to 1 at `w = 0`.
pub fn fejer_kernel(w: f64) -> f64 {
    let x = 0.5 * w;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0
    } else {
        let s = x.sin() / x;
        s * s
    }
}

/// Which ordinates enter a windowed double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// `0 < γ ≤ T`
    ZeroToT,
    /// `T < γ ≤ 2T`
    TTo2T,
}

impl Window {
    pub fn bounds(self, t: f64) -> (f64, f64) {
        match self {
            Window::ZeroToT => (0.0, t),
            Window::TTo2T => (t, 2.0 * t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FejerSumResult {
    pub total: f64,
    /// `Σ m²`: pairs of a zero with itself, kernel value 1.
    pub diagonal: f64,
    pub off_diagonal: f64,
    pub normalizer: f64,
    pub ratio: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub window: Window,
}

fn window_records(zeros: &ZeroSet, t: f64, window: Window) -> Result<Vec<ZeroRecord>, PairError> {
    let (lo, hi) = window.bounds(t);
    if !zeros.is_complete() || !zeros.covers(lo, hi) {
        return Err(PairError::IncompleteWindow { lo, hi });
    }
    Ok(zeros.records().iter().filter(|r| r.gamma > lo && r.gamma <= hi).copied().collect())
}

/// `Σ_{γ,γ'} m m' K((γ − γ') log T)` over the chosen window.
pub fn fejer_double_sum(zeros: &ZeroSet, t: f64, window: Window) -> Result<FejerSumResult, PairError> {
    if !(t >= 10.0) {
        return Err(PairError::InvalidArgument(format!("T = {t} must be ≥ 10")));
    }
    let recs = window_records(zeros, t, window)?;
    let log_t = t.ln();
    let gammas: Vec<f64> = recs.iter().map(|r| r.gamma).collect();
    let mult: Vec<f64> = recs.iter().map(|r| r.multiplicity as f64).collect();
    let diagonal: f64 = mult.iter().map(|m| m * m).sum();
    let n = gammas.len();
    // strictly upper triangle, doubled
    let upper = block_sum(n, |i| {
        let gi = gammas[i];
        let mi = mult[i];
        let mut row = 0.0;
        for j in (i + 1)..n {
            row += mult[j] * fejer_kernel((gi - gammas[j]) * log_t);
        }
        mi * row
    });
    let off_diagonal = 2.0 * upper;
    let total = diagonal + off_diagonal;
    let norm = normalizer(t);
    Ok(FejerSumResult {
        total,
        diagonal,
        off_diagonal,
        normalizer: norm,
        ratio: total / norm,
        t,
        window,
    })
}

/// Quadrature of `2 ∫_0^1 |Σ m T^{iαγ}|² (1 − α) dα`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralFormResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes: usize,
}

const GL_ORDER: usize = 16;
const MAX_INTEGRAL_NODES: usize = 1 << 24;

/// Integral form of the Fejér double sum, by composite Gauss–Legendre with
/// panel doubling until two successive rules agree to `rel_tol`.
pub fn fejer_integral_form(
    zeros: &ZeroSet,
    t: f64,
    window: Window,
    quad_points: usize,
    rel_tol: f64,
) -> Result<IntegralFormResult, PairError> {
    if quad_points < 64 {
        return Err(PairError::InvalidArgument("quad_points must be ≥ 64".into()));
    }
    let recs = window_records(zeros, t, window)?;
    let log_t = t.ln();
    let freqs: Vec<f64> = recs.iter().map(|r| r.gamma * log_t).collect();
    let mult: Vec<f64> = recs.iter().map(|r| r.multiplicity as f64).collect();
    if freqs.is_empty() {
        return Ok(IntegralFormResult { value: 0.0, error_estimate: 0.0, nodes: 0 });
    }
    let integrand = |alpha: f64| -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (f, m) in freqs.iter().zip(&mult) {
            let (s, c) = (alpha * f).sin_cos();
            re += m * c;
            im += m * s;
        }
        2.0 * (re * re + im * im) * (1.0 - alpha)
    };
    let evaluate = |panels: usize| -> f64 {
        let rule = composite_rule(0.0, 1.0, panels, GL_ORDER);
        let vals: Vec<f64> = rule.par_iter().map(|&(x, w)| w * integrand(x)).collect();
        crate::reduce::pairwise_sum(&vals)
    };
    // the integrand's highest frequency is the ordinate spread times log T
    let spread = freqs.last().unwrap() - freqs.first().unwrap();
    let cycles = spread / (2.0 * PI);
    let mut panels = (quad_points.div_ceil(GL_ORDER)).max((cycles / 2.0).ceil() as usize).max(4);
    let mut prev = evaluate(panels);
    loop {
        panels *= 2;
        let cur = evaluate(panels);
        let err = (cur - prev).abs();
        if err <= rel_tol * cur.abs() || panels * GL_ORDER >= MAX_INTEGRAL_NODES {
            return Ok(IntegralFormResult { value: cur, error_estimate: err, nodes: panels * GL_ORDER });
        }
        prev = cur;
    }
}

/// Ordered multiplicity-expanded pairs with equal ordinates.
pub fn same_ordinate_pair_count(zeros: &ZeroSet) -> u128 {
    ordinate_groups(zeros.records())
        .map(|g| {
            let m: u128 = g.iter().map(|r| r.multiplicity as u128).sum();
            m * m
        })
        .sum()
}

fn ordinate_groups(recs: &[ZeroRecord]) -> impl Iterator<Item = &[ZeroRecord]> {
    let mut start = 0;
    std::iter::from_fn(move || {
        if start >= recs.len() {
            return None;
        }
        let mut end = start + 1;
        while end < recs.len() && recs[end].gamma == recs[start].gamma {
            end += 1;
        }
        let g = &recs[start..end];
        start = end;
        Some(g)
    })
}

/// Same-ordinate pairs split into diagonal, symmetric-diagonal and
/// non-symmetric horizontal terms, next to the brute-force count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDecomposition {
    pub lhs_bruteforce: u128,
    /// `Σ_ρ m_ρ` over multiplicity-expanded zeros (`Σ m²` over records).
    pub diag: u128,
    /// The same sum restricted to `β ≠ 1/2`.
    pub sym_diag: u128,
    pub nonsym_horiz: u128,
    #[serde(rename = "T")]
    pub t: f64,
}

impl PairDecomposition {
    pub fn identity_holds(&self) -> bool {
        self.lhs_bruteforce == self.diag + self.sym_diag + self.nonsym_horiz
    }
}

pub fn decompose_horizontal_pairs(zeros: &ZeroSet) -> Result<PairDecomposition, PairError> {
    if let Some(r) = first_symmetry_violation(zeros) {
        return Err(PairError::SymmetryViolation { beta: r.beta, gamma: r.gamma });
    }
    let recs = zeros.records();
    // brute force over all ordered record pairs
    let n = recs.len();
    let lhs_bruteforce = block_sum_u128(n, |i| {
        recs.iter()
            .filter(|r| r.gamma == recs[i].gamma)
            .map(|r| recs[i].multiplicity as u128 * r.multiplicity as u128)
            .sum()
    });
    let mut diag = 0u128;
    let mut sym_diag = 0u128;
    let mut nonsym_horiz = 0u128;
    for group in ordinate_groups(recs) {
        for (i, a) in group.iter().enumerate() {
            let ma = a.multiplicity as u128;
            diag += ma * ma;
            if !a.is_on_critical_line() {
                sym_diag += ma * ma;
            }
            for (j, b) in group.iter().enumerate() {
                if i != j && !a.is_reflection_of(b) {
                    nonsym_horiz += ma * b.multiplicity as u128;
                }
            }
        }
    }
    Ok(PairDecomposition {
        lhs_bruteforce,
        diag,
        sym_diag,
        nonsym_horiz,
        t: zeros.t_max(),
    })
}

/// The counts in `same ≥ Σ m² ≥ Σ m ≥ #records`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundChain {
    pub same_ordinate_pairs: u128,
    pub sum_m_rho: u128,
    pub count_with_multiplicity: u128,
    pub record_count: u128,
}

impl LowerBoundChain {
    pub fn holds(&self) -> bool {
        self.same_ordinate_pairs >= self.sum_m_rho
            && self.sum_m_rho >= self.count_with_multiplicity
            && self.count_with_multiplicity >= self.record_count
    }
}

pub fn lower_bound_chain(zeros: &ZeroSet) -> LowerBoundChain {
    let recs = zeros.records();
    LowerBoundChain {
        same_ordinate_pairs: same_ordinate_pair_count(zeros),
        sum_m_rho: recs.iter().map(|r| (r.multiplicity as u128).pow(2)).sum(),
        count_with_multiplicity: recs.iter().map(|r| r.multiplicity as u128).sum(),
        record_count: recs.len() as u128,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsCount {
    pub count: u128,
    pub ratio: f64,
    pub lambda: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// `Σ m` over the set, the N the count is compared against.
    pub n: u128,
}

/// Ordered pairs (including `γ = γ'`) with `|γ − γ'| ≤ 2πλ / log T`.
pub fn es_pair_count(zeros: &ZeroSet, t: f64, lambda: f64) -> Result<EsCount, PairError> {
    if !(lambda > 0.0) {
        return Err(PairError::InvalidArgument(format!("lambda {lambda} must be > 0")));
    }
    if !zeros.is_complete() {
        return Err(PairError::IncompleteWindow { lo: zeros.t_min(), hi: zeros.t_max() });
    }
    let recs = zeros.records();
    let delta = 2.0 * PI * lambda / t.ln();
    // prefix[k] = Σ_{j<k} m_j
    let mut prefix = Vec::with_capacity(recs.len() + 1);
    prefix.push(0u128);
    for r in recs {
        prefix.push(prefix.last().unwrap() + r.multiplicity as u128);
    }
    let mut count = 0u128;
    let mut hi = 0usize;
    for (i, r) in recs.iter().enumerate() {
        if hi < i + 1 {
            hi = i + 1;
        }
        while hi < recs.len() && recs[hi].gamma - r.gamma <= delta {
            hi += 1;
        }
        let m = r.multiplicity as u128;
        count += m * m + 2 * m * (prefix[hi] - prefix[i + 1]);
    }
    let n = *prefix.last().unwrap();
    Ok(EsCount { count, ratio: count as f64 / normalizer(t), lambda, t, n })
}

const PCC_TOL: f64 = 1e-10;

fn pcc_integrand(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        x2 / 3.0 - 2.0 * x2 * x2 / 45.0
    } else {
        let s = x.sin() / x;
        1.0 - s * s
    }
}

/// `∫_0^λ (1 − (sin πu / πu)²) du`.
pub fn pcc_density_integral(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let panels = lambda.ceil().max(1.0) as usize;
    integrate_adaptive(pcc_integrand, 0.0, lambda, PCC_TOL, panels, 100_000).value
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PccHistogram {
    pub bin_edges: Vec<f64>,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Raw weighted pair counts per bin, before normalization.
    pub counts: Vec<u128>,
    pub lambda_max: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

impl PccHistogram {
    /// Mean absolute deviation between empirical and predicted bin masses.
    pub fn mean_abs_deviation(&self) -> f64 {
        let n = self.empirical.len().max(1) as f64;
        self.empirical.iter().zip(&self.predicted).map(|(e, p)| (e - p).abs()).sum::<f64>() / n
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,empirical,predicted\n");
        for k in 0..self.empirical.len() {
            out.push_str(&format!(
                "{:?},{:?},{},{:?},{:?}\n",
                self.bin_edges[k],
                self.bin_edges[k + 1],
                self.counts[k],
                self.empirical[k],
                self.predicted[k]
            ));
        }
        out
    }
}

/// Histogram of ordered pairs with `0 < (γ − γ') log T / 2π ≤ λ_max`.
pub fn pcc_histogram(zeros: &ZeroSet, t: f64, lambda_max: f64, bins: usize) -> Result<PccHistogram, PairError> {
    if bins < 4 {
        return Err(PairError::InvalidArgument("bins must be ≥ 4".into()));
    }
    if !(lambda_max > 0.0) {
        return Err(PairError::InvalidArgument("lambda_max must be > 0".into()));
    }
    if !zeros.is_complete() {
        return Err(PairError::IncompleteWindow { lo: zeros.t_min(), hi: zeros.t_max() });
    }
    let recs = zeros.records();
    let delta_max = 2.0 * PI * lambda_max / t.ln();
    let mut counts = vec![0u128; bins];
    for (i, r) in recs.iter().enumerate() {
        for s in &recs[i + 1..] {
            let d = s.gamma - r.gamma;
            if d > delta_max {
                break;
            }
            if d > 0.0 {
                let k = ((d / delta_max) * bins as f64).floor() as usize;
                counts[k.min(bins - 1)] += r.multiplicity as u128 * s.multiplicity as u128;
            }
        }
    }
    let norm = normalizer(t);
    let bin_edges: Vec<f64> = (0..=bins).map(|k| lambda_max * k as f64 / bins as f64).collect();
    let cumulative: Vec<f64> = bin_edges.iter().map(|&e| pcc_density_integral(e)).collect();
    let predicted = cumulative.windows(2).map(|w| w[1] - w[0]).collect();
    let empirical = counts.iter().map(|&c| c as f64 / norm).collect();
    Ok(PccHistogram { bin_edges, empirical, predicted, counts, lambda_max, t })
}
