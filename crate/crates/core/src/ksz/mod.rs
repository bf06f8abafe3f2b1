//! Random sign tensors with certified small norm.

mod constants;
mod sampler;

pub use constants::{
    covering_count, gamma, ksz_bound, ksz_constant, proposition_bound, threshold_r_lambda,
    xi_constant, KszParameters, Thresholds,
};
pub use sampler::{
    certification_threshold, draw_seed, exceedance_fraction, sample_signs, sample_small_norm_form,
    SampleCertificate, ThresholdKind,
};

pub(crate) use sampler::ascent_seed;
