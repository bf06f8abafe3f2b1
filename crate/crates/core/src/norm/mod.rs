//! Norms of d-linear forms on `ℓ_{p₁}^{n₁} × ⋯ × ℓ_{p_d}^{n_d}`.
//!
//! Exact values are available for all-`∞` exponents (vertex enumeration) and
//! for bilinear forms on `ℓ₂ × ℓ₂` (largest singular value). Everything else is
//! bracketed: alternating ascent supplies an evaluated lower bound and a few
//! closed-form estimates supply upper bounds. A [`BoundReport`] always says
//! which method produced each side.

mod ascent;
mod bracket;
mod exhaustive;
mod spectral;

use serde::{Deserialize, Serialize};

use crate::tensor::PointTuple;

pub use ascent::{alt_max_norm, sample_sphere, AltMaxReport, AscentRun};
pub use bracket::{coefficient_sum_bound, norm_bracket, upper_bound_frobenius, NormConfig};
pub(crate) use bracket::a_priori_upper;
pub use exhaustive::{exact_norm_linf, DEFAULT_BUDGET};
pub use spectral::exact_norm_l2_bilinear;

/// Provenance of one side of a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Enumeration of `±1` vertices (exact for all-`∞` exponents).
    ExhaustiveLinf,
    /// Power iteration on the Gram matrix (exact `ℓ₂ × ℓ₂` bilinear norm to tolerance).
    PowerGram,
    /// Block-coordinate ascent; a witness, not a certificate.
    AlternatingAscent,
    /// Best `±1` vertex rescaled into the `ℓ_p` balls.
    ScaledVertex,
    /// `ℓ_p ⊆ n^{1/2−1/p} ℓ₂` followed by the Frobenius norm.
    FrobeniusChain,
    /// `Σ |ε_j| = Π n_k`.
    CoefficientSum,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExhaustiveLinf | Method::PowerGram)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExhaustiveLinf => "exhaustive_linf",
            Method::PowerGram => "power_gram",
            Method::AlternatingAscent => "alternating_ascent",
            Method::ScaledVertex => "scaled_vertex",
            Method::FrobeniusChain => "frobenius_chain",
            Method::CoefficientSum => "coefficient_sum",
        }
    }
}

/// Certified bracket `lower ≤ ‖A‖ ≤ upper`.
///
/// `lower` is the value of `A` at `witness`; `upper` comes from an exact
/// method or a closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: Method,
    pub upper_method: Method,
    pub witness: PointTuple,
}

impl BoundReport {
    /// Lower and upper agree to `1e−9` relative.
    pub fn is_exact(&self) -> bool {
        self.upper - self.lower <= 1e-9 * self.upper.abs().max(1.0)
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    /// The method label used in CSV reports: a single name when both sides
    /// agree, otherwise `lower/upper`.
    pub fn method_label(&self) -> String {
        if self.lower_method == self.upper_method {
            self.lower_method.as_str().to_owned()
        } else {
            format!("{}/{}", self.lower_method.as_str(), self.upper_method.as_str())
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
