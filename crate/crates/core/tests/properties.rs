//! Property tests: every fast path is checked against an independent route.

use std::collections::BTreeSet;

use mvpoisson::eval::{
    gf_eval, gf_eval_series, log_term, pmf, pmf_enumerate, pmf_invertible, pmf_single_index,
    PoissonModel,
};
use mvpoisson::intlinalg::{det_exact, inverse_rational, minor_gcd, rank, snf, IntMatrix};
use mvpoisson::lattice::{
    classify, enumerate_solutions, parametrize_single_index, MethodTag, SolutionFamily,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max_rows: usize, max_cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(lo..=hi, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn random_natural(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max: i64) -> IntMatrix {
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.random_range(0..=max))).collect();
    IntMatrix::new(rows, cols, entries).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn points(f: &SolutionFamily) -> BTreeSet<Vec<u64>> {
    f.points().unwrap().into_iter().collect()
}

fn times(a: &IntMatrix, k: &[u64]) -> Vec<BigInt> {
    let k: Vec<BigInt> = k.iter().map(|&x| x.into()).collect();
    a.mul_vec(&k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn snf_invariants_and_minor_gcd(a in matrix_strategy(4, 5, -9, 9)) {
        let s = snf(&a);
        prop_assert!(s.verify(&a).is_ok());
        prop_assert_eq!(s.rank, rank(&a));
        let mut prev = BigInt::one();
        for (i, d) in s.divisors.iter().enumerate() {
            let delta = minor_gcd(&a, i + 1).unwrap();
            prop_assert!(!delta.is_zero());
            prop_assert_eq!(d, &(&delta / &prev));
            prev = delta;
        }
        if s.rank < a.rows().min(a.cols()) {
            prop_assert!(minor_gcd(&a, s.rank + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn snf_is_deterministic(a in matrix_strategy(4, 5, -9, 9)) {
        prop_assert_eq!(snf(&a), snf(&a.clone()));
    }

    #[test]
    fn rank_matches_nonzero_divisors(a in matrix_strategy(5, 5, -3, 3)) {
        let s = snf(&a);
        let nonzero = (0..a.rows().min(a.cols())).filter(|&i| !s.d.get(i, i).is_zero()).count();
        prop_assert_eq!(rank(&a), nonzero);
    }

    #[test]
    fn determinant_matches_snf(a in matrix_strategy(4, 4, -9, 9).prop_filter("square", |a| a.is_square())) {
        let s = snf(&a);
        let det = det_exact(&a).unwrap();
        let prod: BigInt = if s.rank == a.rows() { s.divisors.iter().product() } else { BigInt::zero() };
        prop_assert_eq!(det.abs(), prod);
    }

    #[test]
    fn text_format_round_trips(a in matrix_strategy(4, 4, -1000, 1000)) {
        prop_assert_eq!(a.to_string().parse::<IntMatrix>().unwrap(), a);
    }

    #[test]
    fn log_term_matches_exact_rationals(
        ks in prop::collection::vec(0u64..=20, 1..4),
        nums in prop::collection::vec(1i64..=40, 4),
        dens in prop::collection::vec(1i64..=8, 4),
    ) {
        let n = ks.len();
        let rates: Vec<BigRational> = (0..n)
            .map(|i| BigRational::new(nums[i].into(), dens[i].into()))
            .collect();
        let lambda: Vec<f64> = rates.iter().map(|r| r.to_f64().unwrap()).collect();
        // exact Π λ^k / k!, then ln in log space together with −Σλ
        let mut exact = BigRational::one();
        for (r, &k) in rates.iter().zip(&ks) {
            let fact: BigInt = (1..=k).map(BigInt::from).product();
            exact *= num_traits::pow(r.clone(), k as usize) / BigRational::from_integer(fact);
        }
        let ln_big = |x: &BigInt| {
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        };
        let oracle = ln_big(exact.numer()) - ln_big(exact.denom()) - lambda.iter().sum::<f64>();
        let got = log_term(&ks, &lambda).unwrap();
        prop_assert!((got - oracle).abs() <= 1e-13 * oracle.abs().max(1.0), "{} vs {}", got, oracle);
    }
}

#[test]
fn inverse_round_trip_on_random_unimodular() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let mut u = IntMatrix::identity(4);
        for _ in 0..12 {
            let i = rng.random_range(0..4);
            let j = (i + rng.random_range(1..4)) % 4;
            let c: i64 = rng.random_range(-3..=3);
            // row_i += c · row_j keeps |det| = 1
            let mut e = IntMatrix::identity(4);
            e.set(i, j, c.into());
            u = e.mul(&u).unwrap();
        }
        assert!(det_exact(&u).unwrap().abs().is_one());
        let inv = inverse_rational(&u).unwrap();
        assert!(inv.mul_int(&u).unwrap().is_identity());
        let int_inv = inv.to_integer_matrix().expect("unimodular inverse is integral");
        assert_eq!(int_inv.mul(&u).unwrap(), IntMatrix::identity(4));
    }
}

/// Random natural-number matrices satisfying the single-index hypothesis.
fn single_index_models(seed: u64, want: usize) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < want {
        let m = rng.random_range(1..=3);
        let a = random_natural(&mut rng, m, m + 1, 3);
        if (0..a.cols()).any(|j| a.is_zero_column(j)) {
            continue;
        }
        if classify(&a).ok() == Some(MethodTag::SingleIndex) {
            out.push(a);
        }
    }
    out
}

#[test]
fn line_equals_enumeration() {
    for a in single_index_models(1, 60) {
        let s = snf(&a);
        let m = a.rows();
        let mut b = vec![0i64; m];
        loop {
            let line = parametrize_single_index(&s, &b).unwrap();
            let brute = enumerate_solutions(&a, &b).unwrap();
            assert_eq!(points(&line), points(&brute), "A = {a:?}, b = {b:?}");
            if let SolutionFamily::Line { base, direction, j_min, j_max } = &line {
                let bb: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
                assert!(a.mul_vec(direction).unwrap().iter().all(Zero::is_zero));
                assert!(direction.iter().any(Signed::is_positive));
                assert!(direction.iter().any(Signed::is_negative));
                for j in [j_min.clone(), j_max.clone()] {
                    let k: Vec<BigInt> = base.iter().zip(direction).map(|(u, v)| u + &j * v).collect();
                    assert_eq!(a.mul_vec(&k).unwrap(), bb);
                }
                for j in [j_min - 1, j_max + 1] {
                    let k: Vec<BigInt> = base.iter().zip(direction).map(|(u, v)| u + &j * v).collect();
                    assert!(k.iter().any(Signed::is_negative));
                }
            }
            // odometer over [0, 6]^m
            let mut i = 0;
            while i < m && b[i] == 6 {
                b[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            b[i] += 1;
        }
    }
}

#[test]
fn enumeration_respects_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let rows = rng.random_range(1..=3);
        let cols = rng.random_range(1..=4);
        let a = random_natural(&mut rng, rows, cols, 3);
        if (0..cols).any(|j| a.is_zero_column(j)) {
            continue;
        }
        let b: Vec<i64> = (0..rows).map(|_| rng.random_range(0..=8)).collect();
        let max_b = *b.iter().max().unwrap() as u64;
        let bb: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
        let fam = enumerate_solutions(&a, &b).unwrap();
        let pts = fam.points().unwrap();
        assert_eq!(pts.iter().collect::<BTreeSet<_>>().len(), pts.len(), "duplicates");
        for k in &pts {
            assert!(k.iter().all(|&x| x <= max_b));
            assert_eq!(times(&a, k), bb);
        }
        // exhaustive box check
        let mut count = 0;
        let mut k = vec![0u64; cols];
        loop {
            if times(&a, &k) == bb {
                count += 1;
            }
            let mut i = 0;
            while i < cols && k[i] == max_b {
                k[i] = 0;
                i += 1;
            }
            if i == cols {
                break;
            }
            k[i] += 1;
        }
        assert_eq!(count, pts.len(), "A = {a:?}, b = {b:?}");
    }
}

#[test]
fn methods_agree_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rates = [0.5, 1.0, 2.0];
    let mut seen = [0usize; 3];
    let mut models = 0;
    while models < 120 {
        let rows = rng.random_range(1..=3);
        let cols = rng.random_range(rows..=4);
        let a = random_natural(&mut rng, rows, cols, 3);
        let lambda: Vec<f64> = (0..cols).map(|_| rates[rng.random_range(0..3)]).collect();
        let model = PoissonModel::new(a, lambda).unwrap();
        models += 1;
        let tag = model.method();
        seen[tag as usize] += 1;
        let mut b = vec![0i64; rows];
        loop {
            let reference = pmf_enumerate(&model, &b).unwrap();
            let fast = match tag {
                MethodTag::SingleIndex => Some(pmf_single_index(&model, &b).unwrap()),
                MethodTag::Invertible => Some(pmf_invertible(&model, &b).unwrap()),
                MethodTag::EnumerateOnly => None,
            };
            if let Some(fast) = fast {
                assert_eq!(fast.terms, reference.terms);
                assert!(
                    rel_err(fast.prob, reference.prob) <= 1e-12,
                    "{} vs {} at b = {b:?}",
                    fast.prob,
                    reference.prob
                );
            }
            let mut i = 0;
            while i < rows && b[i] == 8 {
                b[i] = 0;
                i += 1;
            }
            if i == rows {
                break;
            }
            b[i] += 1;
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "every path exercised: {seen:?}");
}

#[test]
fn preprocessing_preserves_probabilities() {
    // reduced: the 2x3 single-index matrix; original adds a zero column and
    // a dependent row (row0 + row1)
    let reduced = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 2, 1]]).unwrap();
    let original =
        IntMatrix::from_rows(&[vec![1, 0, 0, 1], vec![0, 0, 2, 1], vec![1, 0, 2, 2]]).unwrap();
    let small = PoissonModel::new(reduced, vec![0.7, 1.1, 1.9]).unwrap();
    let big = PoissonModel::new(original, vec![0.7, 5.0, 1.1, 1.9]).unwrap();
    assert_eq!(big.method(), MethodTag::SingleIndex);
    assert_eq!(big.report().removed_columns, vec![1]);
    assert_eq!(big.report().relations.len(), 1);
    for b0 in 0..8 {
        for b1 in 0..8 {
            let p = pmf(&small, &[b0, b1]).unwrap().prob;
            let q = pmf(&big, &[b0, b1, b0 + b1]).unwrap().prob;
            assert!(rel_err(q, p) <= 1e-14, "{q} vs {p}");
            assert_eq!(pmf(&big, &[b0, b1, b0 + b1 + 1]).unwrap().prob, 0.0);
        }
    }
    // the closed-form GF sees the zero column as a unit factor
    let z = [0.4, 0.6];
    let z3 = [0.4, 0.6, 0.9];
    let g_small = gf_eval(&small, &z).unwrap();
    let g_big_series = gf_eval_series(&big, &z3, 30).unwrap();
    let g_big = gf_eval(&big, &z3).unwrap();
    assert!((g_big - g_big_series).abs() <= 1e-9);
    assert!(g_small > 0.0);
}

#[test]
fn gf_identity_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let rows = rng.random_range(1..=2);
        let cols = rng.random_range(1..=3);
        let a = random_natural(&mut rng, rows, cols, 3);
        let lambda: Vec<f64> = (0..cols).map(|_| rng.random_range(0.0..2.0)).collect();
        let model = PoissonModel::new(a, lambda).unwrap();
        let z: Vec<f64> = (0..rows).map(|_| rng.random_range(0.05..=0.6)).collect();
        let direct = gf_eval(&model, &z).unwrap();
        let series = gf_eval_series(&model, &z, 40).unwrap();
        // tail: every omitted b has some b_i > 40, weight ≤ 0.6^41
        assert!((direct - series).abs() <= rows as f64 * 0.6f64.powi(41), "{direct} vs {series}");
    }
}
