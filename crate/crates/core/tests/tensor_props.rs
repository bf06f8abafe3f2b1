use kszforms::exponent::{Exponent, PExponents};
use kszforms::ksz::sample_signs;
use kszforms::norm::sample_sphere;
use kszforms::rng;
use kszforms::tensor::{
    diagonal_block_tensor, dual_maximizer, lp_norm, mixed_norm, DenseTensor, MixedNormSpec,
    PointTuple, Shape, SignTensor,
};
use proptest::prelude::*;
use rand::Rng;

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=5, 1..=4)
}

fn exponent_strategy() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::Infinity),
        (1.05f64..12.0).prop_map(Exponent::Finite),
    ]
}

fn random_point(dims: &[usize], seed: u64) -> PointTuple {
    let mut r = rng::stream(seed, 0);
    PointTuple::new(
        dims.iter()
            .map(|&n| (0..n).map(|_| r.random_range(-1.0..1.0)).collect())
            .collect(),
    )
}

/// Σ_j ε_j Π_k x^k_{j_k} over every multi-index.
fn direct_sum(a: &SignTensor, x: &PointTuple) -> f64 {
    let shape = a.shape();
    (0..shape.len())
        .map(|flat| {
            let idx = shape.multi_index(flat);
            let mono: f64 = idx.iter().enumerate().map(|(k, &i)| x.vectors()[k][i]).product();
            f64::from(a.signs()[flat]) * mono
        })
        .sum()
}

fn scale(a: &SignTensor, x: &PointTuple) -> f64 {
    let mags: f64 = x
        .vectors()
        .iter()
        .map(|v| v.iter().map(|t| t.abs()).sum::<f64>())
        .product();
    mags.max(1.0) * a.shape().len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_matches_direct_monomial_sum(dims in dims_strategy(), seed: u64) {
        let shape = Shape::new(dims.clone()).unwrap();
        let a = sample_signs(&shape, seed);
        let x = random_point(&dims, seed ^ 1);
        let v = a.evaluate(&x).unwrap();
        prop_assert!((v - direct_sum(&a, &x)).abs() <= 1e-12 * scale(&a, &x));
    }

    #[test]
    fn multilinearity(dims in dims_strategy(), seed: u64, k_pick: usize, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let shape = Shape::new(dims.clone()).unwrap();
        let a = sample_signs(&shape, seed);
        let k = k_pick % dims.len();
        let base = random_point(&dims, seed.wrapping_add(1));
        let u = random_point(&dims, seed.wrapping_add(2)).vectors()[k].clone();
        let v = random_point(&dims, seed.wrapping_add(3)).vectors()[k].clone();
        let with = |w: Vec<f64>| {
            let mut x = base.clone();
            x.vectors_mut()[k] = w;
            a.evaluate(&x).unwrap()
        };
        let combo: Vec<f64> = u.iter().zip(&v).map(|(p, q)| alpha * p + beta * q).collect();
        let lhs = with(combo);
        let rhs = alpha * with(u) + beta * with(v);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale(&a, &base) * (alpha.abs() + beta.abs() + 1.0));
    }

    #[test]
    fn partial_coefficients_are_consistent(dims in dims_strategy(), seed: u64) {
        let shape = Shape::new(dims.clone()).unwrap();
        let a = sample_signs(&shape, seed);
        let x = random_point(&dims, !seed);
        let full = a.evaluate(&x).unwrap();
        for k in 0..dims.len() {
            let c = a.partial_coefficients(&x, k).unwrap();
            let dot: f64 = c.iter().zip(&x.vectors()[k]).map(|(p, q)| p * q).sum();
            prop_assert!((dot - full).abs() <= 1e-9 * full.abs().max(1.0));
        }
    }

    #[test]
    fn homogeneity(dims in dims_strategy(), seed: u64, factors in prop::collection::vec(0.01f64..5.0, 4)) {
        let shape = Shape::new(dims.clone()).unwrap();
        let a = sample_signs(&shape, seed);
        let x = random_point(&dims, seed ^ 7);
        let c = &factors[..dims.len()];
        let scaled = a.evaluate(&x.scaled(c)).unwrap();
        let expected = c.iter().product::<f64>() * a.evaluate(&x).unwrap();
        let size = c.iter().product::<f64>() * scale(&a, &x);
        prop_assert!((scaled - expected).abs() <= 1e-12 * size);
    }

    #[test]
    fn holder_attainment(n in 1usize..12, p in exponent_strategy(), seed: u64) {
        let mut r = rng::stream(seed, 1);
        let c: Vec<f64> = (0..n).map(|_| r.random_range(-4.0..4.0)).collect();
        let best = dual_maximizer(&c, p);
        let dual = lp_norm(&c, p.conjugate());
        let attained: f64 = c.iter().zip(&best.point).map(|(a, b)| a * b).sum();
        prop_assert!((best.value - dual).abs() <= 1e-12 * dual.max(1e-300));
        prop_assert!((attained - dual).abs() <= 1e-12 * dual.max(1e-300));
        prop_assert!(lp_norm(&best.point, p) <= 1.0 + 1e-12);
        for _ in 0..1000 {
            let radius: f64 = r.random_range(0.0..=1.0);
            let x: Vec<f64> = sample_sphere(&mut r, n, p).into_iter().map(|t| t * radius).collect();
            let v: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
            prop_assert!(v <= dual * (1.0 + 1e-12));
        }
    }

    #[test]
    fn mixed_norm_is_monotone_in_rho(
        dims in prop::collection::vec(1usize..=4, 1..=3),
        seed: u64,
        rhos in prop::collection::vec(0.5f64..6.0, 3),
        j_pick: usize,
        shrink in 0.1f64..1.0,
    ) {
        let len: usize = dims.iter().product();
        let mut r = rng::stream(seed, 2);
        let data: Vec<f64> = (0..len).map(|_| r.random_range(0.0..3.0)).collect();
        let t = DenseTensor::new(dims.clone(), data).unwrap();
        let rhos = rhos[..dims.len()].to_vec();
        let before = mixed_norm(&t, &MixedNormSpec::new(rhos.clone()).unwrap()).unwrap();
        let mut smaller = rhos;
        let j = j_pick % dims.len();
        smaller[j] *= shrink;
        let after = mixed_norm(&t, &MixedNormSpec::new(smaller).unwrap()).unwrap();
        prop_assert!(after >= before * (1.0 - 1e-12));
    }

    #[test]
    fn mixed_norm_with_equal_rhos_is_flat(dims in prop::collection::vec(1usize..=4, 1..=4), seed: u64, rho in 0.5f64..8.0) {
        let len: usize = dims.iter().product();
        let mut r = rng::stream(seed, 3);
        let data: Vec<f64> = (0..len).map(|_| r.random_range(-3.0..3.0)).collect();
        let flat = data.iter().map(|t| t.abs().powf(rho)).sum::<f64>().powf(1.0 / rho);
        let t = DenseTensor::new(dims.clone(), data).unwrap();
        let mixed = mixed_norm(&t, &MixedNormSpec::new(vec![rho; dims.len()]).unwrap()).unwrap();
        prop_assert!((mixed - flat).abs() <= 1e-12 * flat.max(1e-300));
    }

    #[test]
    fn codec_round_trip(dims in dims_strategy(), seed: u64) {
        let a = sample_signs(&Shape::new(dims).unwrap(), seed);
        let back = SignTensor::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn trivial_blocks_leave_the_tensor_unchanged(dims in dims_strategy(), seed: u64) {
        let a = sample_signs(&Shape::new(dims.clone()).unwrap(), seed);
        let t = diagonal_block_tensor(&a, &vec![1; dims.len()]).unwrap();
        prop_assert_eq!(t.dims(), &dims[..]);
        let dense = a.to_dense();
        prop_assert_eq!(t.data(), dense.data());
    }
}

#[test]
fn block_restriction_reads_the_diagonal() {
    let a = sample_signs(&Shape::cube(3, 3).unwrap(), 17);
    let t = diagonal_block_tensor(&a, &[2, 1]).unwrap();
    assert_eq!(t.dims(), &[3, 3]);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(t.data()[i * 3 + j], f64::from(a.get(&[i, i, j])));
        }
    }
}

#[test]
fn infinity_is_never_a_large_float() {
    let p = PExponents::parse_list("inf,2").unwrap();
    assert!(p.get(0).is_infinite());
    assert_eq!(p.get(0).recip(), 0.0);
    assert_eq!(p.get(0).conjugate(), Exponent::ONE);
}
