use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::{BoundReport, Method};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, PExponents};
use crate::rng;
use crate::tensor::{dual_maximizer, lp_norm, PointTuple, SignTensor};

const MAX_SWEEPS: usize = 10_000;
const MAX_FRESH_STARTS: usize = 16;

/// One restart of the block-coordinate ascent.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun {
    pub value: f64,
    pub witness: PointTuple,
    pub sweeps: usize,
    /// Objective at the start point and after every block update (last start only).
    pub trace: Vec<f64>,
}

/// Best run over all restarts, plus every run for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct AltMaxReport {
    pub value: f64,
    pub witness: PointTuple,
    pub best_restart: usize,
    pub runs: Vec<AscentRun>,
}

impl AltMaxReport {
    /// Lower side only: `upper` is left at `+∞` for the caller to fill in.
    pub fn into_lower_report(self) -> BoundReport {
        BoundReport {
            lower: self.value,
            upper: f64::INFINITY,
            lower_method: Method::AlternatingAscent,
            upper_method: Method::AlternatingAscent,
            witness: self.witness,
        }
    }
}

/// A random point on the unit sphere of `ℓ_p^n`, distributed by cone measure.
///
/// Coordinates are drawn with density `∝ exp(−|t|^p)` (uniform on `[−1, 1]`
/// for `p = ∞`) and rescaled to unit `ℓ_p` norm.
pub fn sample_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize, p: Exponent) -> Vec<f64> {
    let mut v: Vec<f64> = match p {
        Exponent::Infinity => (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        Exponent::Finite(p) => {
            let gamma = Gamma::new(1.0 / p, 1.0).expect("valid gamma parameters");
            (0..n)
                .map(|_| {
                    let magnitude = gamma.sample(rng).powf(1.0 / p);
                    if rng.random::<bool>() {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect()
        }
    };
    let norm = lp_norm(&v, p);
    if norm == 0.0 {
        v[0] = 1.0;
    } else {
        v.iter_mut().for_each(|t| *t /= norm);
    }
    v
}

/// Block-coordinate ascent for `sup |A(x¹,…,x^d)|` over the product of
/// `ℓ_{p_k}` unit balls.
///
/// Each restart draws its start point from the stream `(seed, restart)`, then
/// cycles `k = 1..d`, replacing `x^k` by the dual maximizer of the partial
/// coefficients. The objective never decreases. A restart stops after two
/// consecutive sweeps with relative gain below `tol`.
pub fn alt_max_norm(
    a: &SignTensor,
    p: &PExponents,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<AltMaxReport> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if p.len() != a.order() {
        return Err(Error::InvalidArgument(format!(
            "{} exponents for a form of order {}",
            p.len(),
            a.order()
        )));
    }

    let runs = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(a, p, tol, seed, r as u64))
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    Ok(AltMaxReport {
        value: runs[best].value,
        witness: runs[best].witness.clone(),
        best_restart: best,
        runs,
    })
}

fn run_restart(a: &SignTensor, p: &PExponents, tol: f64, seed: u64, restart: u64) -> Result<AscentRun> {
    let mut stream = rng::stream(seed, restart);
    let dims = a.dims();
    let mut trace = Vec::new();
    let mut sweeps = 0;

    for _ in 0..MAX_FRESH_STARTS {
        let mut x = PointTuple::new(
            dims.iter()
                .zip(p.iter())
                .map(|(&n, pk)| sample_sphere(&mut stream, n, pk))
                .collect(),
        );
        let mut objective = a.evaluate(&x)?;
        trace.clear();
        trace.push(objective);
        let mut quiet = 0;
        while sweeps < MAX_SWEEPS {
            let before = objective;
            for k in 0..dims.len() {
                let c = a.partial_coefficients(&x, k)?;
                let best = dual_maximizer(&c, p.get(k));
                x.vectors_mut()[k] = best.point;
                objective = best.value;
                trace.push(objective);
            }
            sweeps += 1;
            if objective == 0.0 {
                break;
            }
            let gain = (objective - before) / objective;
            quiet = if gain < tol { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
        }
        if objective > 0.0 || sweeps >= MAX_SWEEPS {
            let value = a.evaluate(&x)?;
            return Ok(AscentRun {
                value,
                witness: x,
                sweeps,
                trace,
            });
        }
    }
    // every start collapsed onto a zero of the form
    let witness = PointTuple::new(dims.iter().map(|&n| vec![0.0; n]).collect());
    Ok(AscentRun {
        value: 0.0,
        witness,
        sweeps,
        trace,
    })
}
