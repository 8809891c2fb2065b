//! Ray class counts against closed forms computed independently here.

use bcinv_core::numberfield::{split_prime, NumberField};
use bcinv_core::poly::IntPoly;
use bcinv_core::rayclass::{chain, ChainMode, OracleOptions, RayClassChain};

fn phi_prime_power(q: u64, m: u32) -> u64 {
    // |(O/p^m)^*| for a prime of norm q
    if m == 0 {
        1
    } else {
        (q - 1) * q.pow(m - 1)
    }
}

fn oracle_chain(field: &NumberField, p: u64, which: usize, levels: u32) -> RayClassChain {
    let s = split_prime(field, p).unwrap();
    chain(
        field,
        &s.primes[which],
        levels,
        ChainMode::Oracle,
        &OracleOptions::default(),
    )
    .unwrap()
}

fn h_values(field: &NumberField, p: u64, which: usize, levels: u32) -> Vec<u64> {
    let c = oracle_chain(field, p, which, levels);
    assert!(c.discrepancies.is_empty(), "{:?}", c.discrepancies);
    c.levels.iter().map(|l| l.h.unwrap()).collect()
}

#[test]
fn rationals_are_euler_phi() {
    let q = NumberField::rationals();
    for p in [2u64, 3, 5, 7] {
        let expected: Vec<u64> = (0..=3).map(|m| phi_prime_power(p, m)).collect();
        assert_eq!(h_values(&q, p, 0, 3), expected, "p = {p}");
    }
}

#[test]
fn imaginary_quadratic_minus_five() {
    // class number 2, units +-1 with -1 != 1 mod any odd prime power:
    // h_m = 2 * phi(p^m) / 2 for m >= 1, and h_0 = 2
    let k = NumberField::new("Q(sqrt-5)", IntPoly::from_i64s(&[5, 0, 1])).unwrap();
    for (p, norm) in [(3u64, 3u64), (7, 7)] {
        let got = h_values(&k, p, 0, 2);
        assert_eq!(
            got,
            vec![2, phi_prime_power(norm, 1), phi_prime_power(norm, 2)],
            "p = {p}"
        );
    }
    let got = h_values(&k, 11, 0, 2);
    assert_eq!(got, vec![2, 120, 14520]);
}

/// Size of the subgroup of `(Z[w]/(q_mod))^* x {+-1}^2` generated by `-1` and
/// the golden unit `w`, `w^2 = w + 1`, brute force over residues `x + y w`.
/// For a split prime the residue ring is `Z/q` with `w -> r`.
fn golden_unit_image(q_mod: u64, split_root: Option<u64>) -> usize {
    use std::collections::HashSet;
    type E = (u64, u64, u8);
    let mul = |a: E, b: E| -> E {
        match split_root {
            Some(_) => ((a.0 * b.0) % q_mod, 0, a.2 ^ b.2),
            None => {
                // (a0 + a1 w)(b0 + b1 w) = a0b0 + a1b1 + (a0b1 + a1b0 + a1b1) w
                let x = (a.0 * b.0 + a.1 * b.1) % q_mod;
                let y = (a.0 * b.1 + a.1 * b.0 + a.1 * b.1) % q_mod;
                (x, y, a.2 ^ b.2)
            }
        }
    };
    let minus_one: E = (q_mod - 1, 0, 0b11);
    // w = 1.618.., conj = -0.618..: signs (+, -)
    let w: E = match split_root {
        Some(r) => (r % q_mod, 0, 0b10),
        None => (0, 1, 0b10),
    };
    let mut seen: HashSet<E> = HashSet::new();
    let mut stack = vec![(1 % q_mod, 0, 0)];
    seen.insert(stack[0]);
    while let Some(e) = stack.pop() {
        for g in [minus_one, w] {
            let n = mul(e, g);
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len()
}

#[test]
fn real_quadratic_golden_field() {
    // Q(sqrt5) has class number 1; h_m = 4 * |(O/p^m)^*| / |unit image|
    let k = NumberField::new("Q(sqrt5)", IntPoly::from_i64s(&[-1, -1, 1])).unwrap();
    for p in [11u64, 19, 7] {
        let s = split_prime(&k, p).unwrap();
        let prime = &s.primes[0];
        let f = prime.residue_degree;
        let norm = p.pow(f);
        // theta = w here, so the root of the generator is the image of w
        let root = (f == 1).then(|| {
            let c = prime.generator.coeffs()[0].clone();
            (p - u64::try_from(c).unwrap()) % p
        });
        let mut expected = vec![1u64];
        for m in 1..=2u32 {
            let q_mod = p.pow(m);
            let root_m = root.map(|r| {
                // lift r to a root of x^2 - x - 1 mod p^m by Newton steps
                let mut x = r as i128;
                let qm = q_mod as i128;
                for _ in 0..6 {
                    let g = (x * x - x - 1).rem_euclid(qm);
                    let dg = (2 * x - 1).rem_euclid(qm);
                    let inv = (1..qm).find(|v| (dg * v).rem_euclid(qm) == 1).unwrap();
                    x = (x - g * inv).rem_euclid(qm);
                }
                x as u64
            });
            let image = golden_unit_image(q_mod, root_m) as u64;
            expected.push(4 * phi_prime_power(norm, m) / image);
        }
        let c = oracle_chain(&k, p, 0, 2);
        let got: Vec<u64> = c.levels.iter().map(|l| l.h.unwrap()).collect();
        assert_eq!(got, expected, "p = {p}");
        // a totally positive power of the fundamental unit is 1 mod p but not
        // mod p^2, so it eats one factor of p in the step from level 1 to 2
        let ratio = c.ratios[0].value.unwrap();
        assert_eq!(ratio * p as u128, norm as u128, "p = {p}");
        assert!(!c.growth_certified);
        assert_eq!(c.discrepancies.len(), 1);
    }
}
