//! Random unimodular multilinear forms with small norm.
//!
//! * [`tensor`]: sign tensors, evaluation, mixed norms and codecs.
//! * [`norm`]: exact and bracketed multilinear norms.
//! * [`ksz`]: KSZ constants and the certified sampler.
//! * [`bounds`]: closed-form growth rates and the window experiment.
//! * [`hl`]: Hardy–Littlewood exponent admissibility and sweeps.

pub mod bounds;
pub mod error;
pub mod exponent;
pub mod hl;
pub mod ksz;
pub mod norm;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use exponent::{Exponent, PExponents};
pub use norm::{BoundReport, Method, NormConfig};
pub use tensor::{PointTuple, Shape, SignTensor};
