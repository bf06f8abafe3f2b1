use super::{BoundReport, Method};
use crate::error::{Error, Result};
use crate::rng;
use crate::tensor::{PointTuple, SignTensor};

const MAX_ITERATIONS: usize = 1_000_000;

/// Key of the fixed perturbed start vector.
const PERTURBED_START_KEY: u64 = 0x5eed_0f_9a_e5_7a_27;

/// `‖A‖` on `ℓ₂ × ℓ₂`, i.e. the largest singular value of the sign matrix.
///
/// Power iteration on the Gram matrix `AᵀA`, started from the all-ones vector
/// and again from a fixed perturbed vector; the larger Rayleigh quotient wins.
/// The stopping rule extrapolates the geometric tail of the Rayleigh
/// increments and stops once the predicted remaining change is below
/// `tol · λ`.
pub fn exact_norm_l2_bilinear(a: &SignTensor, tol: f64) -> Result<BoundReport> {
    if a.order() != 2 {
        return Err(Error::InvalidArgument(format!(
            "bilinear norm needs order 2, got {}",
            a.order()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let (m, n) = (a.dims()[0], a.dims()[1]);
    let gram = gram_matrix(a.signs(), n);

    let ones = vec![1.0; n];
    let perturbed: Vec<f64> = (0..n as u64)
        .map(|i| 1.0 + 0.5 * to_unit(rng::word(PERTURBED_START_KEY, i)))
        .collect();

    let first = power_iterate(&gram, n, ones, tol)?;
    let second = power_iterate(&gram, n, perturbed, tol)?;
    let (_, v) = if second.0 > first.0 { second } else { first };

    let av: Vec<f64> = a
        .signs()
        .chunks_exact(n)
        .map(|row| row.iter().zip(&v).map(|(&s, &t)| f64::from(s) * t).sum())
        .collect();
    let norm_av = av.iter().map(|t| t * t).sum::<f64>().sqrt();
    let u = if norm_av > 0.0 {
        av.iter().map(|t| t / norm_av).collect()
    } else {
        let mut e = vec![0.0; m];
        e[0] = 1.0;
        e
    };
    let witness = PointTuple::new(vec![u, v]);
    let value = a.evaluate(&witness)?;
    Ok(BoundReport {
        lower: value,
        upper: value,
        lower_method: Method::PowerGram,
        upper_method: Method::PowerGram,
        witness,
    })
}

fn to_unit(w: u64) -> f64 {
    // top 53 bits to [-1, 1)
    (w >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

fn gram_matrix(signs: &[i8], n: usize) -> Vec<f64> {
    let mut g = vec![0i64; n * n];
    for row in signs.chunks_exact(n) {
        for i in 0..n {
            let si = i64::from(row[i]);
            for j in 0..n {
                g[i * n + j] += si * i64::from(row[j]);
            }
        }
    }
    g.into_iter().map(|x| x as f64).collect()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|t| *t /= norm);
    }
    norm
}

fn apply(g: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    g.chunks_exact(n)
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Returns the Rayleigh quotient and the unit iterate.
fn power_iterate(g: &[f64], n: usize, mut v: Vec<f64>, tol: f64) -> Result<(f64, Vec<f64>)> {
    normalize(&mut v);
    let mut lambda = 0.0;
    let mut prev_delta = f64::INFINITY;
    for iteration in 0..MAX_ITERATIONS {
        let mut w = apply(g, n, &v);
        let next = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        if normalize(&mut w) == 0.0 {
            // v lies in the kernel; every Rayleigh quotient from here is zero
            return Ok((0.0, v));
        }
        let delta = next - lambda;
        lambda = next;
        v = w;
        if iteration > 0 {
            let floor = 4.0 * f64::EPSILON * lambda;
            if delta.abs() <= floor {
                return Ok((lambda, v));
            }
            let ratio = (delta / prev_delta).clamp(0.0, 1.0 - 1e-12);
            let remaining = delta.abs() * ratio / (1.0 - ratio);
            if delta.abs() <= tol * lambda && remaining <= tol * lambda {
                return Ok((lambda, v));
            }
        }
        prev_delta = delta;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        best: lambda.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Shape;

    #[test]
    fn hadamard_and_all_ones() {
        let h = SignTensor::from_rows(&[&[1, 1], &[1, -1]]).unwrap();
        let r = exact_norm_l2_bilinear(&h, 1e-12).unwrap();
        assert!((r.upper - 2f64.sqrt()).abs() < 1e-9);

        let ones = SignTensor::constant(Shape::new(vec![5, 5]).unwrap(), 1).unwrap();
        let r = exact_norm_l2_bilinear(&ones, 1e-12).unwrap();
        assert!((r.upper - 5.0).abs() < 1e-9);
    }

    #[test]
    fn start_in_the_kernel() {
        // rows sum to zero, so AᵀA·1 = 0; only the perturbed start sees anything
        let a = SignTensor::from_rows(&[&[1, -1], &[1, -1]]).unwrap();
        let r = exact_norm_l2_bilinear(&a, 1e-12).unwrap();
        assert!((r.upper - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_wrong_order() {
        let a = SignTensor::constant(Shape::new(vec![2, 2, 2]).unwrap(), 1).unwrap();
        assert!(exact_norm_l2_bilinear(&a, 1e-9).is_err());
    }
}
