use serde::{Deserialize, Serialize};

use super::sum::pairwise_sum;
use super::SignTensor;
use crate::error::{Error, Result};

/// Dense real tensor in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidShape(format!("bad dimensions {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if len != data.len() {
            return Err(Error::InvalidShape(format!(
                "{} entries supplied for dimensions {dims:?}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub(crate) fn from_parts(dims: Vec<usize>, data: Vec<f64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), data.len());
        Self { dims, data }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Iterated-norm exponents `(ρ₁,…,ρ_k)` and an optional block partition
/// `(m₁,…,m_k)` of the `d` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    rhos: Vec<f64>,
    blocks: Option<Vec<usize>>,
}

impl MixedNormSpec {
    pub fn new(rhos: Vec<f64>) -> Result<Self> {
        if rhos.is_empty() {
            return Err(Error::InvalidArgument("empty exponent list".into()));
        }
        if let Some(r) = rhos.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "mixed-norm exponent {r} must be positive and finite"
            )));
        }
        Ok(Self { rhos, blocks: None })
    }

    pub fn with_blocks(rhos: Vec<f64>, blocks: Vec<usize>, d: usize) -> Result<Self> {
        let spec = Self::new(rhos)?;
        validate_blocks(&blocks, d)?;
        if blocks.len() != spec.rhos.len() {
            return Err(Error::InvalidArgument(format!(
                "{} blocks but {} exponents",
                blocks.len(),
                spec.rhos.len()
            )));
        }
        Ok(Self {
            blocks: Some(blocks),
            ..spec
        })
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }
}

pub(crate) fn validate_blocks(blocks: &[usize], d: usize) -> Result<()> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "block sizes {blocks:?} must be positive"
        )));
    }
    let total: usize = blocks.iter().sum();
    if total != d {
        return Err(Error::InvalidArgument(format!(
            "block sizes {blocks:?} sum to {total}, expected {d}"
        )));
    }
    Ok(())
}

fn l_rho(values: &[f64], rho: f64) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let s = pairwise_sum(values.len(), |i| (values[i].abs() / peak).powf(rho));
    peak * s.powf(1.0 / rho)
}

/// `(Σ_{j₁}(⋯(Σ_{j_k}|T_j|^{ρ_k})^{ρ_{k−1}/ρ_k}⋯)^{ρ₁/ρ₂})^{1/ρ₁}`.
///
/// The innermost index `j_k` carries `ρ_k`, the outermost `j₁` carries `ρ₁`.
/// Block structure in `spec` is ignored here; see [`diagonal_block_tensor`].
pub fn mixed_norm(t: &DenseTensor, spec: &MixedNormSpec) -> Result<f64> {
    if t.order() != spec.rhos.len() {
        return Err(Error::InvalidArgument(format!(
            "tensor has order {}, {} exponents given",
            t.order(),
            spec.rhos.len()
        )));
    }
    if let Some(i) = t.data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut acc = t.data.clone();
    for (k, &rho) in spec.rhos.iter().enumerate().rev() {
        acc = acc
            .chunks_exact(t.dims[k])
            .map(|row| l_rho(row, rho))
            .collect();
    }
    Ok(acc[0])
}

/// Restrict a d-linear form to block diagonals.
///
/// Entry `(j₁,…,j_k)` of the result is `ε` at the multi-index that repeats
/// `j₁` `m₁` times, …, `j_k` `m_k` times. All dimensions inside a block must agree.
pub fn diagonal_block_tensor(a: &SignTensor, blocks: &[usize]) -> Result<DenseTensor> {
    let dims = a.dims();
    validate_blocks(blocks, dims.len())?;
    let strides = a.shape().strides();
    let mut out_dims = Vec::with_capacity(blocks.len());
    let mut out_strides = Vec::with_capacity(blocks.len());
    let mut axis = 0;
    for (b, &m) in blocks.iter().enumerate() {
        let n = dims[axis];
        if let Some(off) = dims[axis..axis + m].iter().position(|&x| x != n) {
            return Err(Error::InvalidShape(format!(
                "block {} mixes dimensions {} and {} (coordinate {})",
                b + 1,
                n,
                dims[axis + off],
                axis + off + 1
            )));
        }
        out_dims.push(n);
        out_strides.push(strides[axis..axis + m].iter().sum::<usize>());
        axis += m;
    }

    let len: usize = out_dims.iter().product();
    let signs = a.signs();
    let mut data = Vec::with_capacity(len);
    let mut index = vec![0usize; out_dims.len()];
    for _ in 0..len {
        let flat: usize = index.iter().zip(&out_strides).map(|(j, s)| j * s).sum();
        data.push(f64::from(signs[flat]));
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < out_dims[k] {
                break;
            }
            index[k] = 0;
        }
    }
    Ok(DenseTensor::from_parts(out_dims, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Shape;

    fn spec(rhos: &[f64]) -> MixedNormSpec {
        MixedNormSpec::new(rhos.to_vec()).unwrap()
    }

    #[test]
    fn unimodular_mixed_norm_is_product_of_powers() {
        let shape = Shape::new(vec![3, 4, 5]).unwrap();
        let a = SignTensor::from_fn(shape, |j| if (j[0] * j[1] + j[2]) % 2 == 0 { 1 } else { -1 })
            .unwrap();
        let rhos = [1.0, 4.0 / 3.0, 2.5];
        let expected = 3f64.powf(1.0 / rhos[0]) * 4f64.powf(1.0 / rhos[1]) * 5f64.powf(1.0 / rhos[2]);
        let got = mixed_norm(&a.to_dense(), &spec(&rhos)).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn row_norms_then_sum() {
        let t = DenseTensor::new(vec![2, 2], vec![1.0, 1.0, 1.0, -1.0]).unwrap();
        let got = mixed_norm(&t, &spec(&[1.0, 2.0])).unwrap();
        assert!((got - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite_and_wrong_order() {
        let t = DenseTensor::new(vec![2], vec![1.0, f64::NAN]).unwrap();
        assert!(matches!(mixed_norm(&t, &spec(&[2.0])), Err(Error::NonFinite(1))));
        let t = DenseTensor::new(vec![2], vec![1.0, 1.0]).unwrap();
        assert!(mixed_norm(&t, &spec(&[2.0, 2.0])).is_err());
        assert!(MixedNormSpec::new(vec![0.0]).is_err());
        assert!(MixedNormSpec::with_blocks(vec![1.0, 1.0], vec![2, 2], 3).is_err());
    }

    #[test]
    fn diagonal_blocks() {
        let h = SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap();
        assert_eq!(diagonal_block_tensor(&h, &[1, 1]).unwrap(), h.to_dense());
        assert_eq!(diagonal_block_tensor(&h, &[2]).unwrap().data(), &[1.0, -1.0]);

        let shape = Shape::new(vec![2, 2, 2]).unwrap();
        let a = SignTensor::from_fn(shape, |j| if j[0] + 2 * j[1] + 3 * j[2] == 3 { -1 } else { 1 }).unwrap();
        let t = diagonal_block_tensor(&a, &[2, 1]).unwrap();
        assert_eq!(t.dims(), &[2, 2]);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.data()[i * 2 + j], f64::from(a.get(&[i, i, j])));
            }
        }
    }

    #[test]
    fn diagonal_block_rejects_mixed_dimensions() {
        let a = SignTensor::constant(Shape::new(vec![2, 3]).unwrap(), 1).unwrap();
        assert!(diagonal_block_tensor(&a, &[2]).is_err());
        assert!(diagonal_block_tensor(&a, &[1]).is_err());
    }
}
