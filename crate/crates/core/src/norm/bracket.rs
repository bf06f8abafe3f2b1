use serde::{Deserialize, Serialize};

use super::{alt_max_norm, exact_norm_l2_bilinear, exact_norm_linf, BoundReport, Method, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, PExponents};
use crate::tensor::SignTensor;

/// Knobs shared by every norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConfig {
    /// Maximum number of `±1` vertices for exhaustive enumeration.
    pub budget: u64,
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            restarts: 8,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl NormConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Whether exhaustive ℓ_∞ enumeration fits the budget for `dims`.
    pub fn enumeration_fits(&self, dims: &[usize]) -> bool {
        let bits: usize = dims[..dims.len() - 1].iter().sum();
        bits < 64 && (1u64 << bits) <= self.budget
    }
}

fn check_exponents(a: &SignTensor, p: &PExponents) -> Result<()> {
    if p.len() != a.order() {
        return Err(Error::InvalidArgument(format!(
            "{} exponents for a form of order {}",
            p.len(),
            a.order()
        )));
    }
    Ok(())
}

/// `(Π n_k)^{1/2} · Π n_k^{1/2 − 1/p_k}`, valid when every `p_k ≥ 2`.
///
/// The `ℓ_p` unit ball sits inside `n^{1/2−1/p}` times the `ℓ₂` ball, and the
/// `ℓ₂` multilinear norm is at most the Frobenius norm `(Π n_k)^{1/2}`.
pub fn upper_bound_frobenius(a: &SignTensor, p: &PExponents) -> Result<f64> {
    check_exponents(a, p)?;
    frobenius_chain(a.dims(), p)
}

pub(crate) fn frobenius_chain(dims: &[usize], p: &PExponents) -> Result<f64> {
    if let Some(k) = p.iter().position(|pk| pk.as_f64() < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "Frobenius chain needs p_k >= 2, p_{} = {}",
            k + 1,
            p.get(k)
        )));
    }
    Ok(dims
        .iter()
        .zip(p.iter())
        .map(|(&n, pk)| (n as f64).powf(1.0 - pk.recip()))
        .product())
}

/// `Σ_j |ε_j| = Π n_k`: every ball point has coordinates of modulus at most 1.
pub fn coefficient_sum_bound(a: &SignTensor) -> f64 {
    a.shape().len() as f64
}

/// Certified bracket on `‖A‖`.
///
/// * all `p_k = ∞` and enumeration within budget: exact.
/// * `d = 2`, `p = (2, 2)`: exact largest singular value.
/// * otherwise the lower side is the better of alternating ascent and the
///   rescaled best `±1` vertex; the upper side is the least of the `ℓ_∞`
///   norm (when enumerable; `ℓ_p` balls sit inside `ℓ_∞` balls), the
///   Frobenius chain (all `p_k ≥ 2`) and the coefficient sum.
pub fn norm_bracket(a: &SignTensor, p: &PExponents, config: &NormConfig) -> Result<BoundReport> {
    check_exponents(a, p)?;
    let fits = config.enumeration_fits(a.dims());

    if p.all_infinite() && fits {
        return exact_norm_linf(a, config.budget);
    }
    if a.order() == 2 && p.iter().all(|pk| pk == Exponent::TWO) {
        match exact_norm_l2_bilinear(a, config.tol) {
            Ok(report) => return Ok(report),
            Err(Error::NoConvergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let mut report = alt_max_norm(a, p, config.restarts, config.tol, config.seed)?.into_lower_report();
    let mut upper = (coefficient_sum_bound(a), Method::CoefficientSum);

    if let Ok(frob) = frobenius_chain(a.dims(), p) {
        if frob < upper.0 {
            upper = (frob, Method::FrobeniusChain);
        }
    }
    if fits {
        let vertex = exact_norm_linf(a, config.budget)?;
        if vertex.upper < upper.0 {
            upper = (vertex.upper, Method::ExhaustiveLinf);
        }
        let factors: Vec<f64> = a
            .dims()
            .iter()
            .zip(p.iter())
            .map(|(&n, pk)| (n as f64).powf(-pk.recip()))
            .collect();
        let scaled = vertex.witness.scaled(&factors);
        let value = a.evaluate(&scaled)?;
        if value > report.lower {
            report.lower = value;
            report.lower_method = Method::ScaledVertex;
            report.witness = scaled;
        }
    }

    report.upper = upper.0;
    report.upper_method = upper.1;
    debug_assert!(report.lower <= report.upper * (1.0 + 1e-9));
    Ok(report)
}

/// Smallest upper bound [`norm_bracket`] could ever report for forms of this
/// shape without looking at the signs, or `None` when the bound depends on the
/// tensor (an exact method applies).
pub(crate) fn a_priori_upper(dims: &[usize], p: &PExponents, config: &NormConfig) -> Option<f64> {
    let exact_l2 = dims.len() == 2 && p.iter().all(|pk| pk == Exponent::TWO);
    if exact_l2 || config.enumeration_fits(dims) {
        return None;
    }
    let total: f64 = dims.iter().map(|&n| n as f64).product();
    Some(frobenius_chain(dims, p).map_or(total, |f| f.min(total)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Shape;

    #[test]
    fn frobenius_examples() {
        let a = SignTensor::constant(Shape::new(vec![3, 3]).unwrap(), 1).unwrap();
        let f = upper_bound_frobenius(&a, &PExponents::uniform(Exponent::TWO, 2)).unwrap();
        assert!((f - 3.0).abs() < 1e-14);

        let h = SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap();
        let f = upper_bound_frobenius(&h, &PExponents::uniform(Exponent::Infinity, 2)).unwrap();
        assert!((f - 4.0).abs() < 1e-14);

        let v = SignTensor::constant(Shape::new(vec![7]).unwrap(), -1).unwrap();
        let f = upper_bound_frobenius(&v, &PExponents::uniform(Exponent::TWO, 1)).unwrap();
        assert!((f - 7f64.sqrt()).abs() < 1e-14);

        assert!(upper_bound_frobenius(&h, &PExponents::parse_list("2,1.5").unwrap()).is_err());
    }

    #[test]
    fn exact_paths() {
        let h = SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap();
        let cfg = NormConfig::default();
        let r = norm_bracket(&h, &PExponents::uniform(Exponent::Infinity, 2), &cfg).unwrap();
        assert_eq!((r.lower, r.upper), (2.0, 2.0));
        assert_eq!(r.lower_method, Method::ExhaustiveLinf);

        let r = norm_bracket(&h, &PExponents::uniform(Exponent::TWO, 2), &cfg).unwrap();
        assert!((r.lower - 2f64.sqrt()).abs() < 1e-9);
        assert!(r.is_exact());
        assert_eq!(r.upper_method, Method::PowerGram);
    }

    #[test]
    fn general_bracket_has_a_gap_and_a_valid_witness() {
        let shape = Shape::new(vec![4, 4, 4]).unwrap();
        let a = crate::ksz::sample_signs(&shape, 11);
        let p = PExponents::uniform(Exponent::Finite(4.0), 3);
        let r = norm_bracket(&a, &p, &NormConfig::default()).unwrap();
        assert!(r.lower <= r.upper);
        assert!(r.witness.in_ball(&p, 1e-9));
        let at_witness = a.evaluate(&r.witness).unwrap();
        assert!((at_witness - r.lower).abs() <= 1e-9 * r.lower);
        assert!(r.gap() >= 0.0);
    }

    #[test]
    fn a_priori_bounds() {
        let cfg = NormConfig::default();
        let inf2 = PExponents::uniform(Exponent::Infinity, 2);
        assert_eq!(a_priori_upper(&[4, 4], &inf2, &cfg), None);
        assert_eq!(a_priori_upper(&[64, 64], &inf2, &cfg), Some(4096.0));
        let two3 = PExponents::uniform(Exponent::TWO, 3);
        assert_eq!(a_priori_upper(&[6, 6, 6], &two3, &cfg), None);
        let small = NormConfig { budget: 1, ..cfg };
        let f = a_priori_upper(&[6, 6, 6], &two3, &small).unwrap();
        assert!((f - 216f64.sqrt()).abs() < 1e-12);
    }
}
