//! Topological energy bounds for the DBI Skyrme model.
//!
//! The energy density `β²(1 − √(1 − x/β²))` with `x = λ₁² + λ₂² + λ₃²` is
//! truncated to `Σ_{k≤N} c_k x^k / β^{2k−2}`. Each power is bounded below by
//! `x^k ≥ 3^k m^{2k/3}` with `m = λ₁λ₂λ₃`, and the sum by weighted AM-GM,
//! `Σ a_k ≥ Π (a_k/w_k)^{w_k}`. The weights must satisfy `Σ w_k = 1` and
//! `Σ w_k·2k/3 = 1` so that the product is linear in `m`, which leaves
//! `Σ_k c_k x^k/β^{2k−2} ≥ (C/β)·λ₁λ₂λ₃` with `C = Π (3^k c_k / w_k)^{w_k}`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::golden;

/// Square roots of the strain-tensor eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueTriple {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl EigenvalueTriple {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if !(l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0) {
            return Err(Error::InvalidParameter(format!("eigenvalues must be non-negative, got ({l1}, {l2}, {l3})")));
        }
        Ok(Self { l1, l2, l3 })
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.l1 * self.l1 + self.l2 * self.l2 + self.l3 * self.l3
    }

    pub fn product(&self) -> f64 {
        self.l1 * self.l2 * self.l3
    }

    /// `m = λ₁λ₂λ₃/(2π²)`, which integrates to the baryon number.
    pub fn baryon_density(&self) -> f64 {
        self.product() / (2.0 * PI * PI)
    }

    /// `Σ_{k≤N} c_k x^k / β^{2k−2}`.
    pub fn truncated_energy(&self, order: usize, beta: f64) -> f64 {
        truncated_series(&taylor_coefficients(order), self.sum_of_squares(), beta)
    }
}

fn truncated_series(coeffs: &[f64], x: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let mut term = beta * beta;
    let mut sum = 0.0;
    for &c in coeffs {
        term *= x / b2;
        sum += c * term;
    }
    sum
}

/// Coefficients of `1 − √(1 − x) = Σ_{k≥1} c_k x^k`, `c₁ = 1/2`,
/// `c_{k+1} = c_k (2k − 1)/(2k + 2)`.
pub fn taylor_coefficients(order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order);
    let mut c = 0.5;
    for k in 1..=order {
        out.push(c);
        c *= (2 * k - 1) as f64 / (2 * k + 2) as f64;
    }
    out
}

/// `a_k = 3^k c_k`, the coefficient of `m^{2k/3}` after the per-term AM-GM.
fn amgm_coefficients(order: usize) -> Vec<f64> {
    taylor_coefficients(order).iter().zip(1..).map(|(c, k)| 3f64.powi(k) * c).collect()
}

/// `ln C = Σ w_k ln(a_k / w_k)`; zero weights drop out.
fn log_constant(a: &[f64], weights: &[f64]) -> f64 {
    a.iter().zip(weights).filter(|(_, &w)| w > 0.0).map(|(a, &w)| w * (a / w).ln()).sum()
}

/// Weights for `N = 3` as a function of `α = w₁`.
fn alpha_weights(alpha: f64) -> [f64; 3] {
    [alpha, 1.5 - 2.0 * alpha, alpha - 0.5]
}

/// Completes free weights `w₃..w_N` with the `w₁, w₂` fixed by the two
/// linear constraints.
fn complete_weights(free: &[f64]) -> Vec<f64> {
    let s1: f64 = free.iter().zip(3..).map(|(w, k)| f64::from(k - 1) * w).sum();
    let s2: f64 = free.iter().zip(3..).map(|(w, k)| f64::from(k - 2) * w).sum();
    let mut out = vec![0.5 + s2, 0.5 - s1];
    out.extend_from_slice(free);
    out
}

/// Weights of a bound: the `N = 3` parameter `α` or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundWeights {
    Alpha(f64),
    Weights(Vec<f64>),
}

fn check_weights(weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    let exponent: f64 = weights.iter().zip(1..).map(|(w, k)| w * 2.0 * f64::from(k) / 3.0).sum();
    if weights.iter().any(|&w| !(w >= -1e-10)) {
        return Err(Error::InvalidParameter(format!("weights must be non-negative: {weights:?}")));
    }
    if (sum - 1.0).abs() > 1e-10 || (exponent - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "weights must satisfy sum w = 1 and sum w 2k/3 = 1, got {sum} and {exponent}"
        )));
    }
    Ok(())
}

/// Bound constant `C_N` for the given weights; independent of `β`.
pub fn bound_constant(order: usize, weights: &BoundWeights) -> Result<f64> {
    if order < 2 {
        return Err(Error::InvalidParameter(format!("the bound needs order >= 2, got {order}")));
    }
    let w: Vec<f64> = match weights {
        BoundWeights::Alpha(alpha) => {
            if order != 3 {
                return Err(Error::InvalidParameter("alpha parametrizes only the order-3 weights".into()));
            }
            if !(0.5..=0.75).contains(alpha) {
                return Err(Error::InvalidParameter(format!("alpha must lie in [1/2, 3/4], got {alpha}")));
            }
            alpha_weights(*alpha).to_vec()
        }
        BoundWeights::Weights(w) => {
            if w.len() != order {
                return Err(Error::InvalidParameter(format!("expected {order} weights, got {}", w.len())));
            }
            w.clone()
        }
    };
    check_weights(&w)?;
    let w: Vec<f64> = w.iter().map(|x| x.max(0.0)).collect();
    Ok(log_constant(&amgm_coefficients(order), &w).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub order: usize,
    pub weights: Vec<f64>,
    /// `w₁` for order 3, where it is the single free parameter.
    pub alpha: Option<f64>,
    pub constant: f64,
    pub beta: f64,
    pub energy_scale: f64,
    /// Triples checked by [`BoundCertificate::verified`]; zero until then.
    pub samples: usize,
    pub min_slack: Option<f64>,
}

impl BoundCertificate {
    /// Weights that the optimizer varied: `α` for order 3, `w₃..w_N` above.
    pub fn free_parameters(&self) -> Vec<f64> {
        match self.order {
            2 => Vec::new(),
            3 => vec![self.weights[0]],
            _ => self.weights[2..].to_vec(),
        }
    }

    pub fn with_energy_scale(mut self, energy_scale: f64) -> Self {
        self.energy_scale = energy_scale;
        self
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    /// Records the outcome of [`verify_pointwise`].
    pub fn verified(mut self, samples: usize, seed: u64) -> Self {
        let v = verify_pointwise(&self, samples, seed);
        self.samples = v.samples;
        self.min_slack = Some(v.min_slack);
        self
    }

    /// `Σ c_k x^k/β^{2k−2} − (C/β) λ₁λ₂λ₃`.
    pub fn slack(&self, t: &EigenvalueTriple) -> f64 {
        slack(&taylor_coefficients(self.order), self.constant, self.beta, t)
    }
}

fn slack(coeffs: &[f64], constant: f64, beta: f64, t: &EigenvalueTriple) -> f64 {
    truncated_series(coeffs, t.sum_of_squares(), beta) - constant / beta * t.product()
}

const ALPHA_EDGE: f64 = 1e-9;
const STARTS: usize = 10;
const OPTIMIZER_SEED: u64 = 0x5eed;
const MAX_SWEEPS: usize = 20_000;

/// Maximizes `C_N` over the feasible weights.
///
/// Order 2 has a single feasible point. Order 3 is a golden-section search
/// in `α`, polished by bisection on `d ln C/dα`. Higher orders use
/// coordinate ascent over `w₃..w_N` with golden-section line searches from
/// ten random feasible starts; `ln C` is concave, so the starts agree.
pub fn optimize_bound(order: usize, beta: f64) -> Result<BoundCertificate> {
    if !(2..=8).contains(&order) {
        return Err(Error::InvalidParameter(format!("bound order must be in 2..=8, got {order}")));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let a = amgm_coefficients(order);
    let (weights, alpha) = match order {
        2 => (vec![0.5, 0.5], None),
        3 => {
            let alpha = optimize_alpha(&a);
            (alpha_weights(alpha).to_vec(), Some(alpha))
        }
        _ => (coordinate_ascent(&a)?, None),
    };
    let constant = log_constant(&a, &weights).exp();
    Ok(BoundCertificate { order, weights, alpha, constant, beta, energy_scale: 1.0, samples: 0, min_slack: None })
}

fn optimize_alpha(a: &[f64]) -> f64 {
    let f = |alpha: f64| log_constant(a, &alpha_weights(alpha));
    let g = golden::maximize(f, 0.5 + ALPHA_EDGE, 0.75 - ALPHA_EDGE, 1e-12);
    // d ln C/dα = Σ w'_k ln(a_k/w_k) with w' = (1, −2, 1)
    let slope = |alpha: f64| {
        let w = alpha_weights(alpha);
        [1.0, -2.0, 1.0].iter().zip(a).zip(&w).map(|((d, a), w)| d * (a / w).ln()).sum::<f64>()
    };
    let (lo, hi) = ((g.location - 1e-6).max(0.5 + ALPHA_EDGE), (g.location + 1e-6).min(0.75 - ALPHA_EDGE));
    if slope(lo) > 0.0 && slope(hi) < 0.0 {
        crate::numerics::roots::bisect(slope, lo, hi, 0.0).unwrap_or(g.location)
    } else {
        g.location
    }
}

/// Upper end of the feasible interval of `free[j]` with the others fixed.
fn coordinate_cap(free: &[f64], j: usize) -> f64 {
    let others: f64 = free.iter().enumerate().filter(|&(i, _)| i != j).map(|(i, w)| (i + 2) as f64 * w).sum();
    ((0.5 - others) / (j + 2) as f64).max(0.0)
}

fn coordinate_ascent(a: &[f64]) -> Result<Vec<f64>> {
    let dim = a.len() - 2;
    let objective = |free: &[f64]| {
        let w = complete_weights(free);
        if w.iter().any(|&x| x < 0.0) {
            f64::NEG_INFINITY
        } else {
            log_constant(a, &w)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(OPTIMIZER_SEED);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut converged_any = false;
    for _ in 0..STARTS {
        // uniform on the simplex Σ (k−1) w_k ≤ 1/2, via normalized exponentials
        let e: Vec<f64> = (0..=dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        let mut free: Vec<f64> = (0..dim).map(|j| 0.5 * e[j] / total / (j + 2) as f64).collect();
        let mut value = objective(&free);
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let before = value;
            for j in 0..dim {
                let cap = coordinate_cap(&free, j);
                let line = |x: f64| {
                    let mut trial = free.clone();
                    trial[j] = x;
                    objective(&trial)
                };
                let g = golden::maximize(line, 0.0, cap, 1e-13 * cap.max(1e-300));
                if g.value >= value {
                    free[j] = g.location;
                    value = g.value;
                }
            }
            if value - before <= 1e-15 {
                converged = true;
                break;
            }
        }
        converged_any |= converged;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, free));
        }
    }
    let (value, free) = best.expect("at least one start");
    if !converged_any {
        return Err(Error::Optimizer { best: value.exp(), location: free });
    }
    Ok(complete_weights(&free))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub samples: usize,
    pub min_slack: f64,
    pub worst: EigenvalueTriple,
}

const SHARD: usize = 1 << 16;
const LOG_RANGE: (f64, f64) = (-3.0, 3.0);

/// Triples that are always checked: the equal-eigenvalue ray, where every
/// AM-GM step is tight, and triples with zero components.
fn deterministic_triples() -> Vec<EigenvalueTriple> {
    let ray = 1201;
    let grid = 13;
    let level =
        |i: usize, count: usize| 10f64.powf(LOG_RANGE.0 + (LOG_RANGE.1 - LOG_RANGE.0) * i as f64 / (count - 1) as f64);
    let mut out: Vec<EigenvalueTriple> = (0..ray)
        .map(|i| {
            let l = level(i, ray);
            EigenvalueTriple { l1: l, l2: l, l3: l }
        })
        .collect();
    for i in 0..grid {
        let a = level(i, grid);
        out.push(EigenvalueTriple { l1: 0.0, l2: 0.0, l3: a });
        for j in 0..grid {
            let b = level(j, grid);
            out.push(EigenvalueTriple { l1: 0.0, l2: a, l3: b });
            out.push(EigenvalueTriple { l1: a, l2: 0.0, l3: b });
            out.push(EigenvalueTriple { l1: a, l2: b, l3: 0.0 });
        }
    }
    out
}

/// Minimum slack over `samples` log-uniform triples in `[1e-3, 1e3]³` plus
/// the deterministic triples. Shards use independent ChaCha streams of one
/// seed, so the result does not depend on the thread count.
pub fn verify_pointwise(certificate: &BoundCertificate, samples: usize, seed: u64) -> Verification {
    let coeffs = taylor_coefficients(certificate.order);
    let (c, beta) = (certificate.constant, certificate.beta);
    let eval = |t: EigenvalueTriple| (slack(&coeffs, c, beta, &t), t);
    let pick = |x: (f64, EigenvalueTriple), y: (f64, EigenvalueTriple)| if y.0 < x.0 { y } else { x };
    let extra = deterministic_triples();
    let start = extra.iter().map(|&t| eval(t)).fold((f64::INFINITY, extra[0]), pick);
    let shards = samples.div_ceil(SHARD);
    let random = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let count = SHARD.min(samples - s * SHARD);
            let mut best = (f64::INFINITY, extra[0]);
            for _ in 0..count {
                let mut draw = || 10f64.powf(rng.gen_range(LOG_RANGE.0..LOG_RANGE.1));
                let t = EigenvalueTriple { l1: draw(), l2: draw(), l3: draw() };
                best = pick(best, eval(t));
            }
            best
        })
        .collect::<Vec<_>>();
    let (min_slack, worst) = random.into_iter().fold(start, pick);
    Verification { samples: samples + extra.len(), min_slack, worst }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sharpness {
    /// Minimum of the truncated energy over `(s/3)^{3/2}` along the ray.
    pub minimum: f64,
    /// `s = Σλ²` at the minimum.
    pub location: f64,
}

/// Minimizes `Σ c_k s^k/β^{2k−2} / (s/3)^{3/2}` over `s > 0`. On the
/// equal-eigenvalue ray every AM-GM step can be tight, so the minimum equals
/// `C_N/β` for optimal weights.
pub fn sharpness(certificate: &BoundCertificate) -> Sharpness {
    let coeffs = taylor_coefficients(certificate.order);
    let beta = certificate.beta;
    // convex in ln s: a sum of exponentials
    let ratio = |u: f64| {
        let s = u.exp();
        truncated_series(&coeffs, s, beta) / (s / 3.0).powf(1.5)
    };
    let b2 = (beta * beta).ln();
    let e = golden::minimize(ratio, b2 - 20.0, b2 + 20.0, 1e-12);
    Sharpness { minimum: e.value, location: e.location.exp() }
}

/// `f_π² (C/β) 2π² |B|`.
pub fn bound_energy(certificate: &BoundCertificate, baryon_number: i64) -> f64 {
    certificate.energy_scale * certificate.constant / certificate.beta
        * 2.0
        * PI
        * PI
        * baryon_number.unsigned_abs() as f64
}

/// Literature energy of the `B = 1` DBI Skyrmion at `β = 1`, `8π·3.487`.
pub const REFERENCE_ENERGY: f64 = 8.0 * PI * 3.487;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub reference: f64,
    pub bound: f64,
    /// `(reference − bound)/reference`.
    pub relative_error: f64,
}

/// Compares the `B = 1` bound with [`REFERENCE_ENERGY`]; needs `β = 1`.
pub fn compare_reference(certificate: &BoundCertificate) -> Result<ReferenceComparison> {
    if certificate.beta != 1.0 {
        return Err(Error::InvalidParameter(format!("the reference energy is for beta = 1, got {}", certificate.beta)));
    }
    let bound = bound_energy(certificate, 1);
    Ok(ReferenceComparison {
        reference: REFERENCE_ENERGY,
        bound,
        relative_error: (REFERENCE_ENERGY - bound) / REFERENCE_ENERGY,
    })
}
