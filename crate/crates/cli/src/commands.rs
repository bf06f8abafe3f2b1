use std::fmt::Write as _;
use std::fs;

use anyhow::{Context, Result};
use kszforms::bounds::window_experiment;
use kszforms::hl::{
    admissible, blow_up_exponent, growth_witness_sweep, hl_lhs, s_exponent_lower_bounds,
    AdmissibilityVerdict, BlockExponents,
};
use kszforms::ksz::{covering_count, sample_signs, sample_small_norm_form, xi_constant, KszParameters};
use kszforms::norm::{norm_bracket, NormConfig};
use kszforms::{Exponent, PExponents, Shape, SignTensor};
use serde::Serialize;

use crate::args::{
    ConstantsArgs, Format, HlArgs, NormArgs, NormOptions, SampleArgs, SweepArgs, WindowArgs,
};

/// Bad input detected before any computation.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub struct Outcome {
    pub text: String,
    /// A proved lower bound failed on some input.
    pub violated: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            violated: false,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn parse_p(s: &str) -> Result<PExponents> {
    PExponents::parse_list(s).map_err(|e| usage(e.to_string()))
}

/// Repeat a one-element list `d` times; otherwise require length `d`.
fn broadcast<T: Clone>(what: &str, list: Vec<T>, d: usize) -> Result<Vec<T>> {
    match list.len() {
        1 => Ok(vec![list[0].clone(); d]),
        len if len == d => Ok(list),
        len => Err(usage(format!("{what} has {len} entries, expected {d}"))),
    }
}

fn shape_and_p(d: Option<usize>, n: Vec<usize>, p: &str) -> Result<(Shape, PExponents)> {
    let p = parse_p(p)?;
    let d = d.unwrap_or_else(|| n.len().max(p.len()));
    if d == 0 {
        return Err(usage("d must be at least 1"));
    }
    let n = broadcast("-n", n, d)?;
    let p = PExponents::new(broadcast("-p", p.as_slice().to_vec(), d)?).map_err(|e| usage(e.to_string()))?;
    let shape = Shape::new(n).map_err(|e| usage(e.to_string()))?;
    Ok((shape, p))
}

fn norm_config(opts: &NormOptions, seed: u64) -> Result<NormConfig> {
    if opts.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    if !(opts.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    Ok(NormConfig {
        budget: opts.budget,
        restarts: opts.restarts,
        tol: opts.tol,
        seed,
    })
}

fn csv_pairs(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        writeln!(out, "{k},{v}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct ConstantsReport {
    d: usize,
    shape: Shape,
    p: PExponents,
    c_d: f64,
    gamma: f64,
    r: f64,
    lambda: f64,
    level: f64,
    bound: f64,
    xi: f64,
    xi_constant: f64,
    /// log of the covering count at radius 1/2 for n = Σ n_k
    log_covering_half: f64,
}

pub fn constants(args: ConstantsArgs) -> Result<Outcome> {
    let (shape, p) = shape_and_p(args.d, args.n, &args.p)?;
    let params = KszParameters::new(&shape, &p)?;
    let report = ConstantsReport {
        d: params.d,
        c_d: params.c_d,
        gamma: params.gamma,
        r: params.r,
        lambda: params.lambda,
        level: params.level(),
        bound: params.bound,
        xi: args.xi,
        xi_constant: xi_constant(args.xi, shape.order(), &shape).map_err(|e| usage(e.to_string()))?,
        log_covering_half: covering_count(0.5, shape.dim_sum())?,
        shape,
        p,
    };
    let text = match args.common.format {
        Format::Json => json(&report),
        Format::Csv => csv_pairs(&[
            ("d", report.d.to_string()),
            ("shape", join(report.shape.dims())),
            ("p", join(report.p.iter())),
            ("c_d", report.c_d.to_string()),
            ("gamma", report.gamma.to_string()),
            ("r", report.r.to_string()),
            ("lambda", report.lambda.to_string()),
            ("level", report.level.to_string()),
            ("bound", report.bound.to_string()),
            ("xi", report.xi.to_string()),
            ("xi_constant", report.xi_constant.to_string()),
            ("log_covering_half", report.log_covering_half.to_string()),
        ]),
    };
    Ok(Outcome::ok(text))
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

pub fn sample(args: SampleArgs) -> Result<Outcome> {
    let (shape, p) = shape_and_p(args.d, args.n, &args.p)?;
    let cfg = norm_config(&args.norm, args.common.seed)?;
    let cert = sample_small_norm_form(&shape, &p, args.common.seed, args.max_draws, &cfg)?;
    let text = match args.common.format {
        Format::Json => json(&cert),
        Format::Csv => csv_pairs(&[
            ("seed", cert.seed.to_string()),
            ("draws", cert.draws.to_string()),
            ("threshold", cert.threshold.to_string()),
            ("threshold_used", format!("{:?}", cert.threshold_used)),
            ("norm_lower", cert.norm_report.lower.to_string()),
            ("norm_upper", cert.norm_report.upper.to_string()),
            ("method", cert.norm_report.method_label()),
            ("tensor", cert.tensor.to_json().replace(',', ";")),
        ]),
    };
    Ok(Outcome::ok(text))
}

pub fn norm(args: NormArgs) -> Result<Outcome> {
    let raw = fs::read_to_string(&args.tensor)
        .with_context(|| format!("reading {}", args.tensor.display()))?;
    let a = SignTensor::from_json(&raw).map_err(|e| usage(e.to_string()))?;
    let p = parse_p(&args.p)?;
    let p = PExponents::new(broadcast("-p", p.as_slice().to_vec(), a.order())?)?;
    let cfg = norm_config(&args.norm, args.common.seed)?;
    let report = norm_bracket(&a, &p, &cfg)?;
    let text = match args.common.format {
        Format::Json => json(&report),
        Format::Csv => format!(
            "norm_lower,norm_upper,lower_method,upper_method,exact\n{},{},{},{},{}\n",
            report.lower,
            report.upper,
            report.lower_method.as_str(),
            report.upper_method.as_str(),
            report.is_exact()
        ),
    };
    Ok(Outcome::ok(text))
}

pub fn window(args: WindowArgs) -> Result<Outcome> {
    let (shape, p) = shape_and_p(args.d, args.n, &args.p)?;
    if let Some(k) = p.iter().position(|pk| pk.as_f64() < 2.0) {
        return Err(usage(format!("window needs every p_k >= 2, p_{} = {}", k + 1, p.get(k))));
    }
    let cfg = norm_config(&args.norm, args.common.seed)?;
    let report = window_experiment(&shape, &p, args.trials, args.common.seed, &cfg)?;
    let text = match args.common.format {
        Format::Csv => report.to_csv(),
        Format::Json => json(&report.summary()),
    };
    Ok(Outcome {
        text,
        violated: report.violated,
    })
}

#[derive(Serialize)]
struct HlReport {
    blocks: Vec<usize>,
    rho: Vec<f64>,
    p: PExponents,
    verdict: AdmissibilityVerdict,
    blow_up_exponent: Option<f64>,
    blow_up_note: Option<String>,
    s_bounds: Option<Vec<SubsetBound>>,
    shape: Option<Shape>,
    hl_lhs: Option<f64>,
}

#[derive(Serialize)]
struct SubsetBound {
    subset: Vec<usize>,
    bound: f64,
}

pub fn hl(args: HlArgs) -> Result<Outcome> {
    let p = parse_p(&args.p)?;
    let d = args.d.unwrap_or(p.len());
    let p = PExponents::new(broadcast("-p", p.as_slice().to_vec(), d)?)?;
    let blocks = args.blocks.unwrap_or_else(|| vec![1; d]);
    let rho = broadcast("--rho", args.rho, blocks.len())?;
    let spec = BlockExponents::from_flat(blocks.clone(), &p, rho.clone()).map_err(|e| usage(e.to_string()))?;
    let verdict = admissible(&spec).map_err(|e| usage(e.to_string()))?;

    let trivial = blocks.iter().all(|&m| m == 1);
    let (blow_up, note, s_bounds) = if !trivial {
        (None, Some("blow-up exponent needs trivial blocks".to_owned()), None)
    } else {
        match blow_up_exponent(&rho, &p) {
            Ok(v) => {
                let bounds = s_exponent_lower_bounds(&rho, &p, d)?
                    .into_iter()
                    .map(|(subset, bound)| SubsetBound { subset, bound })
                    .collect();
                (Some(v), None, Some(bounds))
            }
            Err(kszforms::Error::Hypothesis(msg)) => (None, Some(msg), None),
            Err(e) => return Err(e.into()),
        }
    };

    let (shape, lhs) = match args.n {
        Some(n) => {
            let shape = Shape::new(broadcast("-n", n, d)?).map_err(|e| usage(e.to_string()))?;
            let a = sample_signs(&shape, args.common.seed);
            let lhs = hl_lhs(&a, &spec).map_err(|e| usage(e.to_string()))?;
            (Some(shape), Some(lhs))
        }
        None => (None, None),
    };

    let report = HlReport {
        blocks,
        rho,
        p,
        verdict,
        blow_up_exponent: blow_up,
        blow_up_note: note,
        s_bounds,
        shape,
        hl_lhs: lhs,
    };
    let text = match args.common.format {
        Format::Json => json(&report),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(|t| t.to_string()).unwrap_or_default();
            format!(
                "admissible,worst_subset,slack,blow_up_exponent,hl_lhs\n{},{},{},{},{}\n",
                report.verdict.admissible,
                join(&report.verdict.worst_subset),
                report.verdict.slack,
                opt(report.blow_up_exponent),
                opt(report.hl_lhs)
            )
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct SweepJson<'a> {
    slope: Option<f64>,
    rows: &'a [kszforms::hl::SweepRow],
}

pub fn sweep(args: SweepArgs) -> Result<Outcome> {
    let p = parse_p(&args.p)?;
    let p = PExponents::new(broadcast("-p", p.as_slice().to_vec(), args.d)?)?;
    let rho = broadcast("--rho", args.rho, args.d)?;
    if p.iter().any(|pk| pk == Exponent::ONE) {
        return Err(usage("every p_k must exceed 1"));
    }
    let cfg = norm_config(&args.norm, args.common.seed)?;
    let report = growth_witness_sweep(args.d, &p, &rho, &args.n, args.trials, args.common.seed, &cfg)?;
    let text = match args.common.format {
        Format::Csv => report.to_csv(),
        Format::Json => json(&SweepJson {
            slope: report.slope().ok(),
            rows: &report.rows,
        }),
    };
    Ok(Outcome::ok(text))
}
