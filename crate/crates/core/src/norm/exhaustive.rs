use rayon::prelude::*;

use super::{BoundReport, Method};
use crate::error::{Error, Result};
use crate::tensor::{contract_prefix, PointTuple, SignTensor};

/// Default cap on enumerated vertices.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Low bits of the vertex index walked in Gray-code order inside one work item.
const MAX_GRAY_BITS: usize = 20;

/// Exact norm on `ℓ_∞^{n₁} × ⋯ × ℓ_∞^{n_d}`.
///
/// By multilinearity the supremum is attained at `±1` vertices. Coordinates
/// `1..d−1` are enumerated and the last one is eliminated in closed form: the
/// best `x^d` against coefficients `c` gives `‖c‖₁`.
///
/// Vertices are numbered by the bit string of their signs (`0 ↦ +1`,
/// `1 ↦ −1`), first entry of the first coordinate most significant. Ties go to
/// the smallest number, so the witness does not depend on the thread count.
pub fn exact_norm_linf(a: &SignTensor, budget: u64) -> Result<BoundReport> {
    let dims = a.dims();
    let d = dims.len();
    let bits: usize = dims[..d - 1].iter().sum();
    if bits >= 64 || (1u64 << bits) > budget {
        return Err(Error::BudgetExceeded {
            required_log2: bits as u32,
            budget,
        });
    }

    let vertex = if d == 1 { 0 } else { best_vertex(a, bits) };
    let mut xs: Vec<Vec<f64>> = decode_vertex(vertex, &dims[..d - 1], bits);
    xs.push(Vec::new());
    let c = a.partial_coefficients(&PointTuple::new(xs.clone()), d - 1)?;
    xs[d - 1] = c.iter().map(|&t| if t < 0.0 { -1.0 } else { 1.0 }).collect();
    let witness = PointTuple::new(xs);
    let value = a.evaluate(&witness)?;
    Ok(BoundReport {
        lower: value,
        upper: value,
        lower_method: Method::ExhaustiveLinf,
        upper_method: Method::ExhaustiveLinf,
        witness,
    })
}

fn decode_vertex(vertex: u64, dims: &[usize], bits: usize) -> Vec<Vec<f64>> {
    let mut pos = bits;
    dims.iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    pos -= 1;
                    if vertex >> pos & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Index of the best vertex among those with a `+1` first entry (flipping
/// the whole first vector only negates `c`).
fn best_vertex(a: &SignTensor, bits: usize) -> u64 {
    let dims = a.dims();
    let d = dims.len();
    let last_enum = d - 2;
    let n_last = dims[last_enum];
    let n_out = dims[d - 1];
    let gray_bits = n_last.min(bits - 1).min(MAX_GRAY_BITS);
    let high_count = 1u64 << (bits - 1 - gray_bits);
    let dense: Vec<f64> = a.signs().iter().map(|&s| f64::from(s)).collect();

    let (_, best) = (0..high_count)
        .into_par_iter()
        .map(|high| {
            let base = high << gray_bits;
            let xs = decode_vertex(base, &dims[..d - 1], bits);
            // rows of the (n_last × n_out) block left after contracting 1..d−2
            let block = contract_prefix(&dense, dims, &xs[..last_enum]);
            let rows: Vec<&[f64]> = block.chunks_exact(n_out).collect();

            let mut c = vec![0.0; n_out];
            for (row, &s) in rows.iter().zip(&xs[last_enum]) {
                for (ci, &m) in c.iter_mut().zip(row.iter()) {
                    *ci += s * m;
                }
            }

            let l1 = |c: &[f64]| c.iter().map(|t| t.abs()).sum::<f64>();
            let mut best = (l1(&c), base);
            for t in 1u64..(1u64 << gray_bits) {
                let bit = t.trailing_zeros() as usize;
                let gray = t ^ (t >> 1);
                let row = rows[n_last - 1 - bit];
                let delta = if gray >> bit & 1 == 1 { -2.0 } else { 2.0 };
                for (ci, &m) in c.iter_mut().zip(row.iter()) {
                    *ci += delta * m;
                }
                let candidate = (l1(&c), base | gray);
                if better(candidate, best) {
                    best = candidate;
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), |x, y| if better(y, x) { y } else { x });
    best
}

#[inline]
fn better(candidate: (f64, u64), incumbent: (f64, u64)) -> bool {
    candidate.0 > incumbent.0 || (candidate.0 == incumbent.0 && candidate.1 < incumbent.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Shape;

    #[test]
    fn examples() {
        let shape = Shape::new(vec![3, 2, 2]).unwrap();
        let ones = SignTensor::constant(shape, 1).unwrap();
        assert_eq!(exact_norm_linf(&ones, DEFAULT_BUDGET).unwrap().upper, 12.0);

        let h = SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap();
        let r = exact_norm_linf(&h, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.lower, 2.0);
        assert_eq!(r.upper, 2.0);
        assert_eq!(r.witness.vectors()[0], vec![1.0, 1.0]);

        let v = SignTensor::new(Shape::new(vec![5]).unwrap(), vec![1, -1, -1, 1, -1]).unwrap();
        let r = exact_norm_linf(&v, 1).unwrap();
        assert_eq!(r.upper, 5.0);
    }

    #[test]
    fn budget_error_names_the_enumeration_size() {
        let a = SignTensor::constant(Shape::new(vec![30, 2]).unwrap(), 1).unwrap();
        let err = exact_norm_linf(&a, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { required_log2: 30, .. }));
        let big = SignTensor::constant(Shape::new(vec![70, 1]).unwrap(), 1).unwrap();
        assert!(exact_norm_linf(&big, u64::MAX).is_err());
    }

    #[test]
    fn gray_walk_spanning_several_work_items() {
        // 24 enumerated bits, 20 of them walked in Gray order: 8 work items
        let shape = Shape::new(vec![1, 23, 3]).unwrap();
        let a = SignTensor::from_fn(shape, |j| if (j[1] * 7 + j[2] * 3) % 5 < 2 { -1 } else { 1 })
            .unwrap();
        let r = exact_norm_linf(&a, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.lower, r.upper);

        // eliminate the middle coordinate instead: max over x³ of Σ_i |⟨row_i, x³⟩|
        let mut other_route = 0.0f64;
        for mask in 0..8u32 {
            let x3: Vec<f64> = (0..3).map(|b| if mask >> b & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let total: f64 = (0..23)
                .map(|i| (0..3).map(|j| f64::from(a.get(&[0, i, j])) * x3[j]).sum::<f64>().abs())
                .sum();
            other_route = other_route.max(total);
        }
        assert_eq!(r.upper, other_route);
    }
}
