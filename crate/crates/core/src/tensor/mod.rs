//! Sign tensors, multilinear evaluation, dual-norm maximizers and iterated
//! mixed norms.

mod codec;
mod dense;
mod dual;
mod shape;
mod sign;
mod sum;

pub use codec::{pack_signs, unpack_signs};
pub use dense::{diagonal_block_tensor, mixed_norm, DenseTensor, MixedNormSpec};
pub use dual::{dual_maximizer, lp_norm, DualMax};
pub use shape::Shape;
pub use sign::{PointTuple, SignTensor};

pub(crate) use sign::contract_prefix;
