use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::KszParameters;
use crate::error::{Error, Result};
use crate::exponent::PExponents;
use crate::norm::{norm_bracket, BoundReport, NormConfig};
use crate::rng;
use crate::tensor::{Shape, SignTensor};

/// iid uniform signs; entry with flat row-major index `i` is `rng::sign(seed, i)`.
///
/// Any entry, and so any slice, can be regenerated on its own.
pub fn sample_signs(shape: &Shape, seed: u64) -> SignTensor {
    let signs: Vec<i8> = (0..shape.len() as u64)
        .into_par_iter()
        .map(|i| rng::sign(seed, i))
        .collect();
    SignTensor::new(shape.clone(), signs).expect("length matches shape")
}

/// Key of draw `draw` under `seed`.
pub fn draw_seed(seed: u64, draw: u64) -> u64 {
    rng::mix(seed, draw)
}

/// Seed handed to the ascent when bracketing the tensor drawn with `tensor_seed`
/// (kept apart from the sign stream of the same key).
pub(crate) fn ascent_seed(tensor_seed: u64) -> u64 {
    !tensor_seed
}

/// Which threshold was the smaller and hence used for certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// `2√2 · R`
    TwoSqrt2R,
    /// the closed-form bound
    KszBound,
}

/// A sign tensor together with a certified upper bound on its norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCertificate {
    pub tensor: SignTensor,
    pub draws: u64,
    pub threshold_used: ThresholdKind,
    pub threshold: f64,
    pub norm_report: BoundReport,
    pub seed: u64,
}

/// `min(2√2·R, bound)` and which one it was.
pub fn certification_threshold(params: &KszParameters) -> (f64, ThresholdKind) {
    let level = params.level();
    if level <= params.bound {
        (level, ThresholdKind::TwoSqrt2R)
    } else {
        (params.bound, ThresholdKind::KszBound)
    }
}

/// Draw sign tensors until one has a certified norm bracket with
/// `upper ≤ min(2√2·R, bound)`.
///
/// Draw `i` uses the tensor key `draw_seed(seed, i)`. Fails up front with
/// [`Error::Uncertifiable`] when no available upper bound can reach the
/// threshold for this shape, and with [`Error::NotCertified`] when
/// `max_draws` draws all fail.
pub fn sample_small_norm_form(
    shape: &Shape,
    p: &PExponents,
    seed: u64,
    max_draws: u64,
    config: &NormConfig,
) -> Result<SampleCertificate> {
    let params = KszParameters::new(shape, p)?;
    let (threshold, kind) = certification_threshold(&params);
    if let Some(best_upper) = crate::norm::a_priori_upper(shape.dims(), p, config) {
        if best_upper > threshold {
            return Err(Error::Uncertifiable {
                threshold,
                best_upper,
            });
        }
    }
    sample_below(shape, p, seed, max_draws, config, threshold, kind)
}

pub(crate) fn sample_below(
    shape: &Shape,
    p: &PExponents,
    seed: u64,
    max_draws: u64,
    config: &NormConfig,
    threshold: f64,
    kind: ThresholdKind,
) -> Result<SampleCertificate> {
    if max_draws == 0 {
        return Err(Error::InvalidArgument("max_draws must be at least 1".into()));
    }
    let mut best: Option<(SignTensor, BoundReport)> = None;
    for draw in 0..max_draws {
        let key = draw_seed(seed, draw);
        let tensor = sample_signs(shape, key);
        let report = norm_bracket(&tensor, p, &config.with_seed(ascent_seed(key)))?;
        if report.upper <= threshold {
            return Ok(SampleCertificate {
                tensor,
                draws: draw + 1,
                threshold_used: kind,
                threshold,
                norm_report: report,
                seed,
            });
        }
        if best.as_ref().is_none_or(|(_, b)| report.upper < b.upper) {
            best = Some((tensor, report));
        }
    }
    Err(Error::NotCertified {
        draws: max_draws,
        threshold,
        best: Box::new(best.expect("at least one draw")),
    })
}

/// Fraction of `draws` seeded draws whose exact norm exceeds `2√2·R`.
///
/// Needs an exact norm method for `(shape, p)`.
pub fn exceedance_fraction(
    shape: &Shape,
    p: &PExponents,
    draws: u64,
    seed: u64,
    config: &NormConfig,
) -> Result<f64> {
    if draws == 0 {
        return Err(Error::InvalidArgument("draws must be at least 1".into()));
    }
    let level = KszParameters::new(shape, p)?.level();
    let exceed = (0..draws)
        .into_par_iter()
        .map(|draw| {
            let key = draw_seed(seed, draw);
            let tensor = sample_signs(shape, key);
            let report = norm_bracket(&tensor, p, &config.with_seed(ascent_seed(key)))?;
            if !report.is_exact() {
                return Err(Error::NotExact(format!(
                    "draw {draw} bracketed in [{}, {}]",
                    report.lower, report.upper
                )));
            }
            Ok(u64::from(report.upper > level))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    Ok(exceed as f64 / draws as f64)
}
