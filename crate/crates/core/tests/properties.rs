use std::collections::BTreeSet;

use bcinv_core::equivalence::{compare, fingerprint, CompareMode};
use bcinv_core::numberfield::{split_prime, NumberField};
use bcinv_core::poly::{discriminant, factor_mod_p, resultant, IntPoly, ModPoly, Modulus};
use bcinv_core::spectrum::{classify, contains, Classification, PrimeUniverse};
use bcinv_core::zeta::{euler_product, ideal_count_coefficients, ideal_counts_skipping, Exponent};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn monic(lower: Vec<i64>) -> IntPoly {
    let mut c = lower;
    c.push(1);
    IntPoly::from_i64s(&c)
}

fn eval_mod(c: &[i64], x: i64, p: i64) -> i64 {
    c.iter()
        .rev()
        .fold(0, |acc, &a| (acc * x + a).rem_euclid(p))
}

/// All monic polynomials of degree `d` over F_p, as coefficient vectors.
fn all_monic(p: u64, d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| (0..p as i64).map(move |a| [v.clone(), vec![a]].concat()))
            .collect();
    }
    out.into_iter()
        .map(|mut v| {
            v.push(1);
            v
        })
        .collect()
}

fn irreducible_by_search(g: &ModPoly) -> bool {
    let d = g.degree().unwrap();
    let p: u64 = g.modulus().value().try_into().unwrap();
    (1..=d / 2).all(|k| {
        all_monic(p, k).iter().all(|h| {
            !g.rem(&ModPoly::from_i64s(h, g.modulus()))
                .unwrap()
                .is_zero()
        })
    })
}

fn sylvester_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    let size = m + n;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        let mut r = vec![BigRational::zero(); size];
        for j in 0..=m {
            r[i + j] = BigRational::from(a.coeff(m - j));
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigRational::zero(); size];
        for j in 0..=n {
            r[i + j] = BigRational::from(b.coeff(n - j));
        }
        rows.push(r);
    }
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            rows.swap(piv, col);
            det = -det;
        }
        det *= rows[col][col].clone();
        for r in col + 1..size {
            let factor = &rows[r][col] / &rows[col][col];
            for c in col..size {
                let sub = &factor * &rows[col][c];
                rows[r][c] -= sub;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn chi4(n: u64) -> i64 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

fn chi3(n: u64) -> i64 {
    match n % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

fn divisor_sum(n: u64, chi: fn(u64) -> i64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(chi).sum::<i64>() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_multiplies_back(lower in prop::collection::vec(-20i64..20, 1..6), pi in 0usize..6) {
        let f = monic(lower);
        let p = SMALL_PRIMES[pi];
        let fac = factor_mod_p(&f, &BigInt::from(p)).unwrap();
        let m = Modulus::prime(p).unwrap();
        prop_assert_eq!(fac.product(&m), ModPoly::from_int_poly(&f, &m));
        for (g, _) in &fac.factors {
            prop_assert!(irreducible_by_search(g), "{:?} reducible", g);
        }
        let distinct: BTreeSet<_> = fac.factors.iter().map(|(g, _)| g.coeffs().to_vec()).collect();
        prop_assert_eq!(distinct.len(), fac.factors.len());
    }

    #[test]
    fn discriminant_detects_repeated_factors(lower in prop::collection::vec(-15i64..15, 1..5), pi in 0usize..6) {
        let f = monic(lower);
        let p = SMALL_PRIMES[pi];
        let disc = discriminant(&f).unwrap();
        let fac = factor_mod_p(&f, &BigInt::from(p)).unwrap();
        prop_assert_eq!((disc % BigInt::from(p)).is_zero(), !fac.is_squarefree());
    }

    #[test]
    fn resultant_matches_sylvester(
        a in prop::collection::vec(-9i64..9, 2..5),
        b in prop::collection::vec(-9i64..9, 2..5),
    ) {
        let a = IntPoly::from_i64s(&a);
        let b = IntPoly::from_i64s(&b);
        prop_assume!(a.degree().unwrap_or(0) >= 1 && b.degree().unwrap_or(0) >= 1);
        prop_assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
    }

    #[test]
    fn split_matches_brute_force(lower in prop::collection::vec(-12i64..12, 1..4), pi in 0usize..6) {
        let f = monic(lower.clone());
        let Ok(field) = NumberField::new("K", f.clone()) else { return Ok(()) };
        let p = SMALL_PRIMES[pi];
        prop_assume!(!(discriminant(&f).unwrap() % BigInt::from(p)).is_zero());
        let s = split_prime(&field, p).unwrap();
        prop_assert_eq!(s.sum_ef(), field.degree() as u64);
        prop_assert!(s.pairs.iter().all(|&(e, _)| e == 1));
        let mut c = lower;
        c.push(1);
        let roots = (0..p as i64).filter(|&x| eval_mod(&c, x, p as i64) == 0).count();
        prop_assert_eq!(s.pairs.iter().filter(|&&(_, f)| f == 1).count(), roots);
        // norm p^f prime ideals above p contribute the coefficient of p^k
        let a = ideal_counts_skipping(&field, p).unwrap();
        prop_assert_eq!(a.get(p), Some(roots as u64));
    }

    #[test]
    fn compare_symmetric_and_monotone(b1 in -6i64..6, c1 in 1i64..12, b2 in -6i64..6, c2 in 1i64..12) {
        let (Ok(k), Ok(l)) = (
            NumberField::new("K", IntPoly::from_i64s(&[c1, b1, 1])),
            NumberField::new("L", IntPoly::from_i64s(&[c2, b2, 1])),
        ) else { return Ok(()) };
        let fk = fingerprint(&k, 60).unwrap();
        let fl = fingerprint(&l, 60).unwrap();
        let g = compare(&fk, &fl, CompareMode::SplittingNumbersOnly).unwrap();
        let full = compare(&fk, &fl, CompareMode::FullSplittingTypes).unwrap();
        prop_assert_eq!(g.witness(), compare(&fl, &fk, CompareMode::SplittingNumbersOnly).unwrap().witness());
        prop_assert_eq!(full.witness(), compare(&fl, &fk, CompareMode::FullSplittingTypes).unwrap().witness());
        if let Some(p) = g.witness() {
            prop_assert!(full.witness().unwrap() <= p);
        }
    }

    #[test]
    fn contains_is_subset(n in 1usize..7, s in prop::collection::btree_set(0usize..7, 0..7), t in prop::collection::btree_set(0usize..7, 0..7)) {
        let u = universe_of_size(n);
        let s: BTreeSet<usize> = s.into_iter().filter(|&i| i < u.len()).collect();
        let t: BTreeSet<usize> = t.into_iter().filter(|&i| i < u.len()).collect();
        let ps = u.point(s.clone(), "gamma").unwrap();
        let pt = u.point(t.clone(), "gamma").unwrap();
        prop_assert_eq!(contains(&ps, &pt).unwrap(), s.is_subset(&t));
        prop_assert_eq!(contains(&ps, &pt).unwrap() && contains(&pt, &ps).unwrap(), ps == pt);
        prop_assert_eq!(ps.members(), s);
    }
}

fn universe_of_size(n: usize) -> PrimeUniverse {
    // Q over the first n primes
    let bound = [2u64, 3, 5, 7, 11, 13, 17][n.min(7) - 1];
    PrimeUniverse::by_norm(&NumberField::rationals(), bound).unwrap()
}

#[test]
fn second_maximal_points_are_incomparable() {
    let qi = NumberField::new("Q(i)", IntPoly::from_i64s(&[1, 0, 1])).unwrap();
    let u = PrimeUniverse::by_norm(&qi, 50).unwrap();
    let pts: Vec<_> = (0..u.len())
        .map(|i| u.complement_of(i, "gamma").unwrap())
        .collect();
    for (i, a) in pts.iter().enumerate() {
        assert_eq!(classify(a), Classification::SecondMaximal(i));
        for (j, b) in pts.iter().enumerate() {
            assert_eq!(contains(a, b).unwrap(), i == j);
        }
    }
}

#[test]
fn coefficients_are_multiplicative() {
    for poly in [
        [-2i64, 0, 0, 1].as_slice(),
        &[5, 0, 1],
        &[1, 0, 1],
        &[-1, -1, 1],
    ] {
        let k = NumberField::new("K", IntPoly::from_i64s(poly)).unwrap();
        let a = ideal_count_coefficients(&k, 600).unwrap();
        assert_eq!(a[0], 1);
        for m in 1..=600u64 {
            for n in 1..=600 / m {
                if m.gcd(&n) == 1 {
                    assert_eq!(
                        a[(m * n - 1) as usize],
                        a[(m - 1) as usize] * a[(n - 1) as usize]
                    );
                }
            }
        }
    }
}

#[test]
fn quadratic_coefficients_are_character_sums() {
    let qi = NumberField::new("Q(i)", IntPoly::from_i64s(&[1, 0, 1])).unwrap();
    let qw = NumberField::new("Q(w)", IntPoly::from_i64s(&[1, 1, 1])).unwrap();
    let ai = ideal_count_coefficients(&qi, 2000).unwrap();
    let aw = ideal_count_coefficients(&qw, 2000).unwrap();
    for n in 1..=2000u64 {
        assert_eq!(ai[n as usize - 1], divisor_sum(n, chi4), "Q(i), n = {n}");
        assert_eq!(aw[n as usize - 1], divisor_sum(n, chi3), "Q(w), n = {n}");
    }
}

#[test]
fn fractional_exponent_matches_series() {
    let s = Exponent::parse("2.5").unwrap();
    let e = euler_product(&NumberField::rationals(), &s, 2000, 30).unwrap();
    let series: f64 = (1..=1_000_000u64).map(|n| (n as f64).powf(-2.5)).sum();
    assert!(
        (e.to_f64() - series).abs() < 1e-4,
        "{} vs {series}",
        e.value_string()
    );
    let three = euler_product(
        &NumberField::rationals(),
        &Exponent::parse("3").unwrap(),
        2000,
        30,
    )
    .unwrap();
    let series3: f64 = (1..=1_000_000u64).map(|n| (n as f64).powi(-3)).sum();
    assert!((three.to_f64() - series3).abs() < 1e-6);
    assert!(e.value.clone() > three.value.clone());
}

#[test]
fn euler_product_grows_with_bound() {
    let qi = NumberField::new("Q(i)", IntPoly::from_i64s(&[1, 0, 1])).unwrap();
    let s = Exponent::parse("2").unwrap();
    let mut prev = None;
    for b in [10, 100, 1000] {
        let v = euler_product(&qi, &s, b, 25).unwrap().value;
        if let Some(p) = prev {
            assert!(v > p);
        }
        prev = Some(v);
    }
    assert!(prev.unwrap().to_f64().value().is_positive());
}
