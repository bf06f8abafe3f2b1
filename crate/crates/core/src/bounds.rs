//! Growth rates of the smallest norm of a unimodular form, and the
//! experiment that samples the ratio window.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::PExponents;
use crate::ksz::{ascent_seed, draw_seed, gamma, ksz_bound, sample_signs};
use crate::norm::{norm_bracket, NormConfig};
use crate::tensor::{Shape, SignTensor};

fn check_order(shape: &Shape, p: &PExponents) -> Result<()> {
    if shape.order() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "{} exponents for a shape of order {}",
            p.len(),
            shape.order()
        )));
    }
    Ok(())
}

/// `f(n) = (Σ n_k^{1/2}) · Π n_k^{1/2 − 1/p_k}`; requires every `p_k ≥ 2`.
pub fn f_growth(shape: &Shape, p: &PExponents) -> Result<f64> {
    check_order(shape, p)?;
    if let Some(k) = p.iter().position(|pk| pk.as_f64() < 2.0) {
        return Err(Error::InvalidExponent(format!(
            "growth function needs p_k >= 2, p_{} = {}",
            k + 1,
            p.get(k)
        )));
    }
    let sum: f64 = shape.dims().iter().map(|&n| (n as f64).sqrt()).sum();
    let prod: f64 = shape
        .dims()
        .iter()
        .zip(p.iter())
        .map(|(&n, pk)| (n as f64).powf(0.5 - pk.recip()))
        .product();
    Ok(sum * prod)
}

/// `1 / (d · 2^{(d−1)/2})`.
pub fn lower_const(d: usize) -> f64 {
    1.0 / (d as f64 * 2f64.powf((d as f64 - 1.0) / 2.0))
}

/// Universal lower bound `lower_const(d) · f(n)` on the norm of any
/// unimodular form of this shape.
pub fn lower_bound_value(shape: &Shape, p: &PExponents) -> Result<f64> {
    Ok(lower_const(shape.order()) * f_growth(shape, p)?)
}

/// `(Σ n_k^{1−1/γ}) · Π n_k^{max(1/γ − 1/p_k, 0)}`.
pub fn conjecture_growth(shape: &Shape, p: &PExponents) -> Result<f64> {
    check_order(shape, p)?;
    let g = gamma(p);
    let sum: f64 = shape.dims().iter().map(|&n| (n as f64).powf(1.0 - 1.0 / g)).sum();
    let prod: f64 = shape
        .dims()
        .iter()
        .zip(p.iter())
        .map(|(&n, pk)| (n as f64).powf((1.0 / g - pk.recip()).max(0.0)))
        .product();
    Ok(sum * prod)
}

/// The window `lower_const ≤ inf ‖A‖ / f ≤ upper_const` for one `(shape, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSpec {
    pub shape: Shape,
    pub p: PExponents,
    pub f_value: f64,
    pub lower_const: f64,
    /// `ksz_bound / f`.
    pub upper_const: f64,
}

impl GrowthSpec {
    pub fn new(shape: &Shape, p: &PExponents) -> Result<Self> {
        let f_value = f_growth(shape, p)?;
        Ok(Self {
            shape: shape.clone(),
            p: p.clone(),
            f_value,
            lower_const: lower_const(shape.order()),
            upper_const: ksz_bound(shape, p)? / f_value,
        })
    }
}

/// Where the `ℓ₁` sum sits in a Littlewood mixed sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `Σ_{i_pivot} (Σ_{others} |T|²)^{1/2}`
    OuterL1,
    /// `(Σ_{others} (Σ_{i_pivot} |T|)²)^{1/2}`
    InnerL1,
}

/// Littlewood mixed `(ℓ₁, ℓ₂)` sum of the coefficients with respect to the
/// zero-based coordinate `pivot`.
pub fn littlewood_mixed_sum(a: &SignTensor, pivot: usize, placement: Placement) -> Result<f64> {
    let dims = a.dims();
    if pivot >= dims.len() {
        return Err(Error::CoordinateOutOfRange {
            index: pivot,
            order: dims.len(),
        });
    }
    let n = dims[pivot];
    let stride: usize = dims[pivot + 1..].iter().product();
    let others = a.shape().len() / n;
    let split = |flat: usize| {
        let hi = flat / (stride * n);
        let lo = flat % stride;
        ((flat / stride) % n, hi * stride + lo)
    };
    match placement {
        Placement::OuterL1 => {
            let mut squares = vec![0.0f64; n];
            for (flat, &s) in a.signs().iter().enumerate() {
                let (i, _) = split(flat);
                squares[i] += f64::from(s).powi(2);
            }
            Ok(squares.iter().map(|s| s.sqrt()).sum())
        }
        Placement::InnerL1 => {
            let mut sums = vec![0.0f64; others];
            for (flat, &s) in a.signs().iter().enumerate() {
                let (_, j) = split(flat);
                sums[j] += f64::from(s).abs();
            }
            Ok(sums.iter().map(|s| s * s).sum::<f64>().sqrt())
        }
    }
}

/// How the tensors of a window experiment were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowMode {
    /// Every sign tensor of the shape, trial `t` being the bit pattern of `t`.
    Exhaustive,
    /// Seeded draws, trial `t` using the key `draw_seed(seed, t)`.
    Sampled,
}

/// Sign tensor number `index` in the exhaustive order: entry `i` is `−1`
/// exactly when bit `i` of `index` is set.
pub fn enumerated_sign_tensor(shape: &Shape, index: u64) -> Result<SignTensor> {
    if shape.len() < 64 && index >> shape.len() != 0 {
        return Err(Error::InvalidArgument(format!(
            "index {index} exceeds 2^{} sign patterns",
            shape.len()
        )));
    }
    let signs = (0..shape.len())
        .map(|i| if i < 64 && (index >> i) & 1 == 1 { -1 } else { 1 })
        .collect();
    SignTensor::new(shape.clone(), signs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub seed: u64,
    pub trial: u64,
    pub norm_lower: f64,
    pub norm_upper: f64,
    pub ratio: f64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub spec: GrowthSpec,
    pub mode: WindowMode,
    pub rows: Vec<WindowRow>,
    pub min_ratio: f64,
    /// Some exact ratio fell below `lower_const`.
    pub violated: bool,
    /// `min_ratio > upper_const`: no form reached the upper window.
    pub undersampled: bool,
}

/// Headline numbers of a [`WindowReport`].
#[derive(Debug, Serialize)]
pub struct WindowSummary<'a> {
    pub min_ratio: f64,
    pub lower_const: f64,
    pub upper_const: f64,
    pub f_value: f64,
    pub violated: bool,
    pub undersampled: bool,
    pub mode: WindowMode,
    pub trials: usize,
    pub shape: &'a Shape,
    pub p: &'a PExponents,
}

impl WindowReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,trial,norm_lower,norm_upper,ratio,method\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.seed, r.trial, r.norm_lower, r.norm_upper, r.ratio, r.method
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn summary(&self) -> WindowSummary<'_> {
        WindowSummary {
            min_ratio: self.min_ratio,
            lower_const: self.spec.lower_const,
            upper_const: self.spec.upper_const,
            f_value: self.spec.f_value,
            violated: self.violated,
            undersampled: self.undersampled,
            mode: self.mode,
            trials: self.rows.len(),
            shape: &self.spec.shape,
            p: &self.spec.p,
        }
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string(&self.summary()).expect("summary serializes")
    }
}

/// Exact norms of `trials` unimodular forms against `f(n)`.
///
/// When all `2^{Π n_k}` sign tensors fit in `trials` they are all visited
/// (and `trials` is ignored beyond that); otherwise `trials` seeded draws
/// are taken. Every bracket must be exact, else [`Error::NotExact`].
pub fn window_experiment(
    shape: &Shape,
    p: &PExponents,
    trials: u64,
    seed: u64,
    config: &NormConfig,
) -> Result<WindowReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let spec = GrowthSpec::new(shape, p)?;
    let exhaustive = shape.len() < 64 && (1u64 << shape.len()) <= trials;
    let (mode, count) = if exhaustive {
        (WindowMode::Exhaustive, 1u64 << shape.len())
    } else {
        (WindowMode::Sampled, trials)
    };

    let rows = (0..count)
        .into_par_iter()
        .map(|trial| {
            let (tensor, cfg) = match mode {
                WindowMode::Exhaustive => (enumerated_sign_tensor(shape, trial)?, *config),
                WindowMode::Sampled => {
                    let key = draw_seed(seed, trial);
                    (sample_signs(shape, key), config.with_seed(ascent_seed(key)))
                }
            };
            let report = norm_bracket(&tensor, p, &cfg)?;
            if !report.is_exact() {
                return Err(Error::NotExact(format!(
                    "trial {trial} bracketed in [{}, {}] by {}",
                    report.lower,
                    report.upper,
                    report.method_label()
                )));
            }
            Ok(WindowRow {
                seed,
                trial,
                norm_lower: report.lower,
                norm_upper: report.upper,
                ratio: report.upper / spec.f_value,
                method: report.method_label(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(WindowReport {
        violated: min_ratio < spec.lower_const - 1e-9,
        undersampled: min_ratio > spec.upper_const,
        spec,
        mode,
        rows,
        min_ratio,
    })
}
