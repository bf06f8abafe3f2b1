use serde::{Deserialize, Serialize};

use super::dual::lp_norm;
use super::sum::{contract_first, contract_last};
use super::{DenseTensor, Shape};
use crate::error::{Error, Result};
use crate::exponent::PExponents;

/// Coefficient tensor `ε_j ∈ {−1, +1}` of a unimodular d-linear form
/// `A(x¹,…,x^d) = Σ_j ε_j x¹_{j₁}⋯x^d_{j_d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTensor {
    shape: Shape,
    signs: Vec<i8>,
}

impl SignTensor {
    pub fn new(shape: Shape, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "{} signs supplied for shape {:?} of size {}",
                signs.len(),
                shape.dims(),
                shape.len()
            )));
        }
        if let Some(i) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "entry {i} is {}, expected +1 or -1",
                signs[i]
            )));
        }
        Ok(Self { shape, signs })
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> i8) -> Result<Self> {
        let signs = (0..shape.len())
            .map(|flat| f(&shape.multi_index(flat)))
            .collect();
        Self::new(shape, signs)
    }

    pub fn constant(shape: Shape, sign: i8) -> Result<Self> {
        let n = shape.len();
        Self::new(shape, vec![sign; n])
    }

    /// Build from nested rows of a matrix (`d = 2`).
    pub fn from_rows(rows: &[&[i8]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        Self::new(Shape::new(vec![m, n])?, rows.concat())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn get(&self, index: &[usize]) -> i8 {
        self.signs[self.shape.flat_index(index)]
    }

    pub fn to_dense(&self) -> DenseTensor {
        DenseTensor::from_parts(
            self.dims().to_vec(),
            self.signs.iter().map(|&s| f64::from(s)).collect(),
        )
    }

    fn check_vector(&self, k: usize, v: &[f64]) -> Result<()> {
        let expected = self.dims()[k];
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                coordinate: k + 1,
                expected,
                actual: v.len(),
            });
        }
        Ok(())
    }

    fn check_point(&self, x: &PointTuple, skip: Option<usize>) -> Result<()> {
        if x.order() != self.order() {
            return Err(Error::InvalidArgument(format!(
                "point has {} vectors, form has order {}",
                x.order(),
                self.order()
            )));
        }
        for (k, v) in x.vectors().iter().enumerate() {
            if Some(k) != skip {
                self.check_vector(k, v)?;
            }
        }
        Ok(())
    }

    /// `A(x¹,…,x^d)`, contracting the last axis `d` times.
    pub fn evaluate(&self, x: &PointTuple) -> Result<f64> {
        self.check_point(x, None)?;
        Ok(self.contract_suffix(x.vectors(), 0)[0])
    }

    /// Coefficients `c` with `A(x¹,…,x^k,…,x^d) = ⟨c, x^k⟩` for every `x^k`.
    ///
    /// `k` is zero-based; `x.vectors()[k]` is ignored and may have any length.
    pub fn partial_coefficients(&self, x: &PointTuple, k: usize) -> Result<Vec<f64>> {
        if k >= self.order() {
            return Err(Error::CoordinateOutOfRange {
                index: k,
                order: self.order(),
            });
        }
        self.check_point(x, Some(k))?;
        let head = self.contract_suffix(x.vectors(), k + 1);
        Ok(contract_prefix(&head, self.dims(), &x.vectors()[..k]))
    }

    /// Contract axes `from..d` (last first), leaving a row-major block over
    /// axes `0..from`.
    pub(crate) fn contract_suffix(&self, xs: &[Vec<f64>], from: usize) -> Vec<f64> {
        let dims = self.dims();
        let d = dims.len();
        if from == d {
            return self.signs.iter().map(|&s| f64::from(s)).collect();
        }
        let mut acc = contract_last(&self.signs, dims[d - 1], &xs[d - 1]);
        for k in (from..d - 1).rev() {
            acc = contract_last(&acc, dims[k], &xs[k]);
        }
        acc
    }
}

/// Contract the leading axes of a row-major block whose axes are
/// `dims[..xs.len() + r]` with the vectors `xs`.
pub(crate) fn contract_prefix(block: &[f64], dims: &[usize], xs: &[Vec<f64>]) -> Vec<f64> {
    let mut acc: Vec<f64> = block.to_vec();
    for (k, x) in xs.iter().enumerate() {
        acc = contract_first(&acc, dims[k], x);
    }
    acc
}

/// Arguments `(x¹,…,x^d)` of a d-linear form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointTuple(Vec<Vec<f64>>);

impl PointTuple {
    pub fn new(vectors: Vec<Vec<f64>>) -> Self {
        Self(vectors)
    }

    /// All-ones vectors for `shape`.
    pub fn ones(shape: &Shape) -> Self {
        Self(shape.dims().iter().map(|&n| vec![1.0; n]).collect())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn vectors_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.0
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.0
    }

    /// Whether `‖x^k‖_{p_k} ≤ 1 + tol` for every `k`.
    pub fn in_ball(&self, p: &PExponents, tol: f64) -> bool {
        self.0.len() == p.len()
            && self
                .0
                .iter()
                .zip(p.iter())
                .all(|(v, pk)| lp_norm(v, pk) <= 1.0 + tol)
    }

    /// `(c₁x¹, …, c_dx^d)`.
    pub fn scaled(&self, factors: &[f64]) -> Self {
        Self(
            self.0
                .iter()
                .zip(factors)
                .map(|(v, &c)| v.iter().map(|&t| c * t).collect())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> SignTensor {
        SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap()
    }

    fn pt(v: Vec<Vec<f64>>) -> PointTuple {
        PointTuple::new(v)
    }

    #[test]
    fn rejects_non_unimodular_entries() {
        let shape = Shape::new(vec![2]).unwrap();
        assert!(SignTensor::new(shape.clone(), vec![1, 0]).is_err());
        assert!(SignTensor::new(shape, vec![1]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let a = SignTensor::new(Shape::new(vec![2]).unwrap(), vec![1, -1]).unwrap();
        assert_eq!(a.evaluate(&pt(vec![vec![1.0, 1.0]])).unwrap(), 0.0);

        let shape = Shape::new(vec![2, 3, 4]).unwrap();
        let ones = SignTensor::constant(shape.clone(), 1).unwrap();
        assert_eq!(ones.evaluate(&PointTuple::ones(&shape)).unwrap(), 24.0);

        let h = hadamard();
        // by hand: (1 - 1) + (1 + 1) = 2 and (1 + 1) + (1 - 1) = 2
        assert_eq!(h.evaluate(&pt(vec![vec![1.0, 1.0], vec![1.0, -1.0]])).unwrap(), 2.0);
        assert_eq!(h.evaluate(&pt(vec![vec![1.0, 1.0], vec![1.0, 1.0]])).unwrap(), 2.0);
        assert_eq!(h.evaluate(&pt(vec![vec![1.0, 0.0], vec![1.0, -1.0]])).unwrap(), 0.0);
        assert_eq!(h.evaluate(&pt(vec![vec![1.0, -1.0], vec![1.0, 1.0]])).unwrap(), 2.0);
    }

    #[test]
    fn evaluate_reports_offending_coordinate() {
        let h = hadamard();
        let err = h.evaluate(&pt(vec![vec![1.0, 1.0], vec![1.0]])).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch { coordinate: 2, expected: 2, actual: 1 }
        ));
    }

    #[test]
    fn partial_coefficient_examples() {
        let a = SignTensor::new(Shape::new(vec![3]).unwrap(), vec![1, -1, 1]).unwrap();
        assert_eq!(a.partial_coefficients(&pt(vec![vec![]]), 0).unwrap(), vec![1.0, -1.0, 1.0]);

        let h = hadamard();
        assert_eq!(
            h.partial_coefficients(&pt(vec![vec![1.0, 0.0], vec![]]), 1).unwrap(),
            vec![1.0, 1.0]
        );
        assert_eq!(
            h.partial_coefficients(&pt(vec![vec![], vec![1.0, 1.0]]), 0).unwrap(),
            vec![2.0, 0.0]
        );
        assert!(matches!(
            h.partial_coefficients(&pt(vec![vec![], vec![]]), 2),
            Err(Error::CoordinateOutOfRange { index: 2, order: 2 })
        ));
    }

    #[test]
    fn middle_coordinate_partials_agree_with_direct_sum() {
        let shape = Shape::new(vec![2, 3, 2]).unwrap();
        let a = SignTensor::from_fn(shape, |j| if (j[0] + 2 * j[1] + j[2]) % 3 == 0 { 1 } else { -1 })
            .unwrap();
        let x = pt(vec![vec![0.5, -2.0], vec![], vec![1.5, 0.25]]);
        let c = a.partial_coefficients(&x, 1).unwrap();
        for (j1, cj) in c.iter().enumerate() {
            let mut direct = 0.0;
            for j0 in 0..2 {
                for j2 in 0..2 {
                    direct += f64::from(a.get(&[j0, j1, j2])) * x.vectors()[0][j0] * x.vectors()[2][j2];
                }
            }
            assert!((cj - direct).abs() < 1e-14);
        }
    }
}
