//! Hardy–Littlewood exponents for forms restricted to diagonal blocks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, PExponents};
use crate::ksz::{ksz_bound, sample_small_norm_form};
use crate::norm::NormConfig;
use crate::rng;
use crate::tensor::{diagonal_block_tensor, mixed_norm, MixedNormSpec, Shape, SignTensor};

/// Largest number of blocks (or coordinates) for subset enumeration.
pub const MAX_SUBSET_BITS: usize = 24;

/// Slack within this distance of zero counts as equality.
const TIE: f64 = 1e-12;

/// Blocks `(m₁,…,m_k)`, their exponent tuples `𝐩^j ∈ (1,∞]^{m_j}` and the
/// summation exponents `ρ_j > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockExponents {
    blocks: Vec<usize>,
    block_p: Vec<PExponents>,
    rhos: Vec<f64>,
}

impl BlockExponents {
    pub fn new(blocks: Vec<usize>, block_p: Vec<PExponents>, rhos: Vec<f64>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("at least one block is required".into()));
        }
        if block_p.len() != blocks.len() || rhos.len() != blocks.len() {
            return Err(Error::InvalidArgument(format!(
                "{} blocks, {} exponent tuples, {} rhos",
                blocks.len(),
                block_p.len(),
                rhos.len()
            )));
        }
        for (j, (&m, pj)) in blocks.iter().zip(&block_p).enumerate() {
            if m == 0 || pj.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "block {} has size {m} but {} exponents",
                    j + 1,
                    pj.len()
                )));
            }
            if let Some(pk) = pj.iter().find(|pk| pk.as_f64() <= 1.0) {
                return Err(Error::InvalidExponent(format!(
                    "block {} exponent {pk} must lie in (1, inf]",
                    j + 1
                )));
            }
        }
        if let Some(j) = rhos.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "rho_{} = {} must be positive and finite",
                j + 1,
                rhos[j]
            )));
        }
        Ok(Self {
            blocks,
            block_p,
            rhos,
        })
    }

    /// Split the flat exponent list `p` into consecutive blocks.
    pub fn from_flat(blocks: Vec<usize>, p: &PExponents, rhos: Vec<f64>) -> Result<Self> {
        if blocks.iter().sum::<usize>() != p.len() {
            return Err(Error::InvalidArgument(format!(
                "blocks sum to {} but {} exponents given",
                blocks.iter().sum::<usize>(),
                p.len()
            )));
        }
        let mut start = 0;
        let mut block_p = Vec::with_capacity(blocks.len());
        for &m in &blocks {
            block_p.push(PExponents::new(p.as_slice()[start..start + m].to_vec())?);
            start += m;
        }
        Self::new(blocks, block_p, rhos)
    }

    /// Every block of size one.
    pub fn trivial(p: &PExponents, rhos: Vec<f64>) -> Result<Self> {
        Self::from_flat(vec![1; p.len()], p, rhos)
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn d(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_p(&self) -> &[PExponents] {
        &self.block_p
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    /// One-based, sorted.
    pub worst_subset: Vec<usize>,
    /// Right side minus left side at `worst_subset`.
    pub slack: f64,
}

fn subset_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect()
}

fn check_subset_bits(k: usize) -> Result<()> {
    if k > MAX_SUBSET_BITS {
        return Err(Error::InvalidArgument(format!(
            "{k} indices exceed the subset enumeration limit of {MAX_SUBSET_BITS}"
        )));
    }
    Ok(())
}

/// Checks `Σ_{j∈I} 1/ρ_j ≤ (|I|+1)/2 − Σ_{j∈I} |1/𝐩^j|` for every nonempty
/// `I ⊆ {1,…,k}`.
///
/// Reports the subset of least slack (ties: fewer elements first, then
/// lexicographic). Equality is admissible.
pub fn admissible(spec: &BlockExponents) -> Result<AdmissibilityVerdict> {
    let k = spec.k();
    check_subset_bits(k)?;
    let weight: Vec<f64> = spec
        .rhos
        .iter()
        .zip(&spec.block_p)
        .map(|(rho, pj)| 1.0 / rho + pj.recip_sum())
        .collect();

    let mut worst: Option<(f64, Vec<usize>)> = None;
    for mask in 1u64..(1u64 << k) {
        let size = mask.count_ones() as usize;
        let lhs: f64 = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| weight[j]).sum();
        let slack = (size as f64 + 1.0) / 2.0 - lhs;
        let replace = match &worst {
            None => true,
            Some((s, subset)) => {
                if slack < s - TIE {
                    true
                } else if slack <= s + TIE {
                    let candidate = subset_indices(mask);
                    (candidate.len(), &candidate) < (subset.len(), subset)
                } else {
                    false
                }
            }
        };
        if replace {
            worst = Some((slack, subset_indices(mask)));
        }
    }
    let (mut slack, worst_subset) = worst.expect("k >= 1");
    if slack.abs() <= TIE {
        slack = 0.0;
    }
    Ok(AdmissibilityVerdict {
        admissible: slack >= 0.0,
        worst_subset,
        slack,
    })
}

fn check_p_half(p: &PExponents) -> Result<()> {
    let s = p.recip_sum();
    if s > 0.5 + TIE {
        return Err(Error::Hypothesis(format!("|1/p| = {s} exceeds 1/2")));
    }
    Ok(())
}

/// `max{Σ 1/r_k − (d+1)/2 + Σ 1/p_k, 0}` for `r ∈ [1,2]^d`, `|1/p| ≤ 1/2`.
pub fn blow_up_exponent(r: &[f64], p: &PExponents) -> Result<f64> {
    let d = r.len();
    if d == 0 || p.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{d} summation exponents for {} exponents",
            p.len()
        )));
    }
    check_p_half(p)?;
    if let Some(k) = r.iter().position(|rk| !(1.0..=2.0).contains(rk)) {
        return Err(Error::Hypothesis(format!("r_{} = {} is outside [1, 2]", k + 1, r[k])));
    }
    let sum_r: f64 = r.iter().map(|rk| 1.0 / rk).sum();
    Ok((sum_r - (d as f64 + 1.0) / 2.0 + p.recip_sum()).max(0.0))
}

/// For every nonempty `I ⊆ {1,…,d}` (one-based, sorted):
/// `max{0, Σ_{j∈I} 1/ρ_j − (|I|+1)/2 + Σ_{j∈I} 1/p_j}`.
pub fn s_exponent_lower_bounds(
    rhos: &[f64],
    p: &PExponents,
    d: usize,
) -> Result<BTreeMap<Vec<usize>, f64>> {
    if rhos.len() != d || p.len() != d {
        return Err(Error::InvalidArgument(format!(
            "d = {d} with {} rhos and {} exponents",
            rhos.len(),
            p.len()
        )));
    }
    check_subset_bits(d)?;
    check_p_half(p)?;
    if let Some(j) = rhos.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument(format!("rho_{} = {} must be positive", j + 1, rhos[j])));
    }
    let mut out = BTreeMap::new();
    for mask in 1u64..(1u64 << d) {
        let subset = subset_indices(mask);
        let value: f64 = subset
            .iter()
            .map(|&j| 1.0 / rhos[j - 1] + p.get(j - 1).recip())
            .sum::<f64>()
            - (subset.len() as f64 + 1.0) / 2.0;
        out.insert(subset, value.max(0.0));
    }
    Ok(out)
}

/// Mixed `ℓ_ρ` norm of the coefficients `A(e_{j₁}^{m₁}, …, e_{j_k}^{m_k})`.
pub fn hl_lhs(a: &SignTensor, spec: &BlockExponents) -> Result<f64> {
    if spec.d() != a.order() {
        return Err(Error::InvalidArgument(format!(
            "blocks cover {} coordinates, form has order {}",
            spec.d(),
            a.order()
        )));
    }
    let restricted = diagonal_block_tensor(a, &spec.blocks)?;
    mixed_norm(&restricted, &MixedNormSpec::new(spec.rhos.clone())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub n: usize,
    pub trial: u64,
    pub rhos: Vec<f64>,
    pub p: PExponents,
    pub hl_lhs: f64,
    pub ksz_bound: f64,
    pub ratio: f64,
    /// Certified upper bound on the sampled form's norm.
    pub norm_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

impl SweepReport {
    /// Columns `d,n,rho_list,p_list,hl_lhs,ksz_bound,ratio`; lists are `;`-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,n,rho_list,p_list,hl_lhs,ksz_bound,ratio\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.d,
                r.n,
                join(&r.rhos),
                join(r.p.iter()),
                r.hl_lhs,
                r.ksz_bound,
                r.ratio
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Least-squares slope of `log ratio` against `log n` over all rows.
    pub fn slope(&self) -> Result<f64> {
        let n: Vec<f64> = self.rows.iter().map(|r| r.n as f64).collect();
        let ratio: Vec<f64> = self.rows.iter().map(|r| r.ratio).collect();
        loglog_slope(&n, &ratio)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("x and y differ in length".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("log-log fit needs at least two distinct x".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Draws allowed per certified form in a sweep.
pub const SWEEP_MAX_DRAWS: u64 = 64;

/// For each `n`, certify `trials` forms of shape `(n,…,n)` and record
/// `hl_lhs / ksz_bound` with trivial blocks.
///
/// Form `(n, t)` is sampled with the seed `mix(mix(seed, n), t)`.
pub fn growth_witness_sweep(
    d: usize,
    p: &PExponents,
    rhos: &[f64],
    n_list: &[usize],
    trials: u64,
    seed: u64,
    config: &NormConfig,
) -> Result<SweepReport> {
    if trials == 0 || n_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one n and one trial".into()));
    }
    if p.len() != d {
        return Err(Error::InvalidArgument(format!("{} exponents for d = {d}", p.len())));
    }
    let spec = BlockExponents::trivial(p, rhos.to_vec())?;
    let jobs: Vec<(usize, u64)> = n_list
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(n, trial)| {
            let shape = Shape::cube(n, d)?;
            let key = rng::mix(rng::mix(seed, n as u64), trial);
            let cert = sample_small_norm_form(&shape, p, key, SWEEP_MAX_DRAWS, config)?;
            let lhs = hl_lhs(&cert.tensor, &spec)?;
            let bound = ksz_bound(&shape, p)?;
            Ok(SweepRow {
                d,
                n,
                trial,
                rhos: rhos.to_vec(),
                p: p.clone(),
                hl_lhs: lhs,
                ksz_bound: bound,
                ratio: lhs / bound,
                norm_upper: cert.norm_report.upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { rows })
}

/// Convenience: `p = (∞,…,∞)` of length `d`.
pub fn all_infinite(d: usize) -> PExponents {
    PExponents::uniform(Exponent::Infinity, d)
}
