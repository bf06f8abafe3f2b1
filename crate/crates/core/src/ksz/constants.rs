//! Closed-form constants of the Kahane–Salem–Zygmund estimate.
//!
//! `log` is the natural logarithm throughout.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::PExponents;
use crate::tensor::Shape;

fn ln_factorial(d: usize) -> f64 {
    (2..=d).map(|k| (k as f64).ln()).sum()
}

fn check_order(d: usize, p: &PExponents) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if p.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{} exponents given for d = {d}",
            p.len()
        )));
    }
    Ok(())
}

fn check_shape(shape: &Shape, p: &PExponents) -> Result<()> {
    check_order(shape.order(), p)
}

/// `C_d = 8 (d!)^{1 − max(1/2, 1/p)} √(log(1 + 4d))` with `p = max_k p_k`.
pub fn ksz_constant(d: usize, p: &PExponents) -> Result<f64> {
    check_order(d, p)?;
    let exponent = 1.0 - p.max().recip().max(0.5);
    Ok(8.0 * (exponent * ln_factorial(d)).exp() * (1.0 + 4.0 * d as f64).ln().sqrt())
}

/// `γ = min{2, max{p_k : p_k ≤ 2}}`, and `γ = 2` when no `p_k` is at most 2.
pub fn gamma(p: &PExponents) -> f64 {
    p.iter()
        .map(|pk| pk.as_f64())
        .filter(|&pk| pk <= 2.0)
        .fold(None, |acc: Option<f64>, pk| Some(acc.map_or(pk, |a| a.max(pk))))
        .unwrap_or(2.0)
        .min(2.0)
}

/// `C_d^{2(1−1/γ)} · (Σ n_k)^{1−1/γ} · Π n_k^{max(1/γ − 1/p_k, 0)}`.
pub fn ksz_bound(shape: &Shape, p: &PExponents) -> Result<f64> {
    check_shape(shape, p)?;
    let g = gamma(p);
    let outer = 1.0 - 1.0 / g;
    let c_d = ksz_constant(shape.order(), p)?;
    let log_prod: f64 = shape
        .dims()
        .iter()
        .zip(p.iter())
        .map(|(&n, pk)| (n as f64).ln() * (1.0 / g - pk.recip()).max(0.0))
        .sum();
    let log = 2.0 * outer * c_d.ln() + outer * (shape.dim_sum() as f64).ln() + log_prod;
    Ok(log.exp())
}

/// The `γ = 2` form `C_d · Π n_k^{max(1/2 − 1/p_k, 0)} · (Σ n_k)^{1/2}`,
/// evaluated directly (no logarithms).
pub fn proposition_bound(shape: &Shape, p: &PExponents) -> Result<f64> {
    check_shape(shape, p)?;
    let c_d = ksz_constant(shape.order(), p)?;
    let prod: f64 = shape
        .dims()
        .iter()
        .zip(p.iter())
        .map(|(&n, pk)| (n as f64).powf((0.5 - pk.recip()).max(0.0)))
        .product();
    Ok(c_d * prod * (shape.dim_sum() as f64).sqrt())
}

/// Level `R` and tilt `λ` of the exponential Chebyshev argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub r: f64,
    pub lambda: f64,
    /// `(d!)^{2(1−1/m(p))} Π n_k^{2(1/2 − 1/M(p_k))}`, so that `λ · denominator = R`.
    pub denominator: f64,
}

/// `R = (2 (d!)^{2(1−1/m(p))} Π n_k^{2(1/2−1/M(p_k))} log(8 (1+4d)^{2Σn_k}))^{1/2}`
/// and `λ = R / ((d!)^{2(1−1/m(p))} Π n_k^{2(1/2−1/M(p_k))})`,
/// with `p = max p_k`, `m(t) = min(t, 2)`, `M(t) = max(t, 2)`.
///
/// `log(8 (1+4d)^{2Σn})` is expanded as `log 8 + 2 Σn log(1+4d)`.
pub fn threshold_r_lambda(shape: &Shape, p: &PExponents) -> Result<Thresholds> {
    check_shape(shape, p)?;
    let d = shape.order();
    let m = p.max().as_f64().min(2.0);
    let log_denominator = 2.0 * (1.0 - 1.0 / m) * ln_factorial(d)
        + shape
            .dims()
            .iter()
            .zip(p.iter())
            .map(|(&n, pk)| {
                let big_m = pk.as_f64().max(2.0);
                2.0 * (0.5 - 1.0 / big_m) * (n as f64).ln()
            })
            .sum::<f64>();
    let log_term = 8f64.ln() + 2.0 * shape.dim_sum() as f64 * (1.0 + 4.0 * d as f64).ln();
    let denominator = log_denominator.exp();
    let r = (2.0 * denominator * log_term).sqrt();
    Ok(Thresholds {
        r,
        lambda: r / denominator,
        denominator,
    })
}

/// Natural log of the covering bound `(1 + 2/r)^{2n}`.
pub fn covering_count(r: f64, n: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(2.0 * n as f64 * (2.0 / r).ln_1p())
}

/// `C(ξ, d, n) = √2 · max(log 4ξ, 2 (Σ n_k) log(1+4d))^{1/2}`.
pub fn xi_constant(xi: f64, d: usize, shape: &Shape) -> Result<f64> {
    if !(xi > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "xi = {xi} must exceed 1 (failure probability 1/xi)"
        )));
    }
    if d != shape.order() {
        return Err(Error::InvalidArgument(format!(
            "d = {d} but shape has order {}",
            shape.order()
        )));
    }
    let first = (4.0 * xi).ln();
    let second = 2.0 * shape.dim_sum() as f64 * (1.0 + 4.0 * d as f64).ln();
    Ok(SQRT_2 * first.max(second).sqrt())
}

/// Every constant of the construction for one `(shape, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KszParameters {
    pub d: usize,
    pub shape: Shape,
    pub p: PExponents,
    pub pmax: crate::exponent::Exponent,
    pub gamma: f64,
    pub c_d: f64,
    pub r: f64,
    pub lambda: f64,
    pub bound: f64,
}

impl KszParameters {
    pub fn new(shape: &Shape, p: &PExponents) -> Result<Self> {
        let thresholds = threshold_r_lambda(shape, p)?;
        Ok(Self {
            d: shape.order(),
            shape: shape.clone(),
            p: p.clone(),
            pmax: p.max(),
            gamma: gamma(p),
            c_d: ksz_constant(shape.order(), p)?,
            r: thresholds.r,
            lambda: thresholds.lambda,
            bound: ksz_bound(shape, p)?,
        })
    }

    /// `2√2 · R`.
    pub fn level(&self) -> f64 {
        2.0 * SQRT_2 * self.r
    }
}
