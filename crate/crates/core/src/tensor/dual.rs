use super::sum::pairwise_sum;
use crate::exponent::Exponent;

/// `‖v‖_p`, scaled by `max |v_i|` so large exponents neither overflow nor underflow.
pub fn lp_norm(v: &[f64], p: Exponent) -> f64 {
    let peak = v.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if peak == 0.0 || v.is_empty() {
        return 0.0;
    }
    match p {
        Exponent::Infinity => peak,
        Exponent::Finite(p) if p == 1.0 => pairwise_sum(v.len(), |i| v[i].abs()),
        Exponent::Finite(p) if p == 2.0 => {
            peak * pairwise_sum(v.len(), |i| (v[i] / peak).powi(2)).sqrt()
        }
        Exponent::Finite(p) => {
            peak * pairwise_sum(v.len(), |i| (v[i].abs() / peak).powf(p)).powf(1.0 / p)
        }
    }
}

/// A maximizer of `⟨c, x⟩` over the unit ball of `ℓ_p` and the maximum `‖c‖_{p'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMax {
    pub point: Vec<f64>,
    pub value: f64,
}

#[inline]
fn sign(t: f64) -> f64 {
    if t < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Maximize `⟨c, x⟩` subject to `‖x‖_p ≤ 1`.
///
/// * `p = ∞`: `x_i = sign(c_i)` with `sign(0) = +1`.
/// * `p = 1`: the signed basis vector at the first index of largest `|c_i|`.
/// * otherwise `x_i = sign(c_i) |c_i|^{p'−1} / ‖c‖_{p'}^{p'−1}`.
///
/// `c = 0` gives `x = 0` and value `0`.
pub fn dual_maximizer(c: &[f64], p: Exponent) -> DualMax {
    let q = p.conjugate();
    let value = lp_norm(c, q);
    if value == 0.0 {
        return DualMax {
            point: vec![0.0; c.len()],
            value: 0.0,
        };
    }
    let point = match p {
        Exponent::Infinity => c.iter().map(|&t| sign(t)).collect(),
        Exponent::Finite(p) if p == 1.0 => {
            let mut best = 0;
            for (i, t) in c.iter().enumerate() {
                if t.abs() > c[best].abs() {
                    best = i;
                }
            }
            let mut x = vec![0.0; c.len()];
            x[best] = sign(c[best]);
            x
        }
        Exponent::Finite(p) if p == 2.0 => c.iter().map(|&t| t / value).collect(),
        Exponent::Finite(p) => {
            // (|c_i| / ‖c‖_q)^{q-1} with q - 1 = 1/(p - 1)
            let power = 1.0 / (p - 1.0);
            c.iter()
                .map(|&t| sign(t) * (t.abs() / value).powf(power))
                .collect()
        }
    };
    DualMax { point, value }
}
