//! Tri-state irreducibility certification over Q for monic integer polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::factor::factor_mod_p_seeded;
use super::modp::{ModPoly, Modulus};
use super::resultant::discriminant;
use super::IntPoly;
use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper monic factor over Z.
    Reducible(IntPoly),
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityEffort {
    /// Good primes (not dividing the discriminant) used by the degree sieve.
    pub sieve_primes: usize,
    /// Largest degree for which Hensel lifting and recombination is attempted.
    pub max_recombination_degree: usize,
    /// Cap on candidate factor subsets tried during recombination.
    pub max_subsets: u64,
    /// Trial-division limit when factoring the constant term for the root test.
    pub root_trial_limit: u64,
    pub seed: u64,
}

impl Default for IrreducibilityEffort {
    fn default() -> Self {
        IrreducibilityEffort {
            sieve_primes: 12,
            max_recombination_degree: 10,
            max_subsets: 1 << 16,
            root_trial_limit: 1_000_000,
            seed: 0,
        }
    }
}

pub fn is_irreducible_over_q(f: &IntPoly, effort: &IrreducibilityEffort) -> Result<Irreducibility> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let n = f.degree().expect("monic polynomials are nonzero");
    if n == 0 {
        return Err(Error::InvalidArgument(
            "irreducibility needs degree >= 1".into(),
        ));
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if let Some(root) = rational_root(f, effort.root_trial_limit) {
        return Ok(Irreducibility::Reducible(IntPoly::new(vec![
            -root,
            BigInt::one(),
        ])));
    }

    let disc = discriminant(f)?;
    if disc.is_zero() {
        // repeated factor: gcd(f, f') over Q is a witness
        return Ok(match repeated_factor(f) {
            Some(g) => Irreducibility::Reducible(g),
            None => Irreducibility::Inconclusive,
        });
    }

    // possible[d]: a factor of degree d is compatible with every pattern seen
    let mut possible = vec![true; n + 1];
    let mut best: Option<(BigInt, Vec<ModPoly>)> = None;
    let mut used = 0;
    let mut p = 2u64;
    while used < effort.sieve_primes {
        if !(&disc % BigInt::from(p)).is_zero() {
            let fac = factor_mod_p_seeded(f, &BigInt::from(p), effort.seed)?;
            let mut sums = vec![false; n + 1];
            sums[0] = true;
            for (g, e) in &fac.factors {
                debug_assert_eq!(*e, 1);
                let d = g.degree().unwrap();
                for s in (d..=n).rev() {
                    if sums[s - d] {
                        sums[s] = true;
                    }
                }
            }
            for d in 1..n {
                possible[d] &= sums[d];
            }
            let r = fac.factors.len();
            if best.as_ref().is_none_or(|(_, b)| r < b.len()) {
                best = Some((
                    BigInt::from(p),
                    fac.factors.into_iter().map(|(g, _)| g).collect(),
                ));
            }
            used += 1;
            if !possible[1..n].iter().any(|&b| b) {
                return Ok(Irreducibility::Irreducible);
            }
        }
        p += 1;
        while !arith::is_prime_u64(p) {
            p += 1;
        }
    }

    if n > effort.max_recombination_degree {
        return Ok(Irreducibility::Inconclusive);
    }
    let (p, factors) = best.expect("at least one sieve prime");
    recombine(f, &p, &factors, &possible, effort.max_subsets)
}

fn rational_root(f: &IntPoly, limit: u64) -> Option<BigInt> {
    let a0 = f.coeff(0);
    if a0.is_zero() {
        return Some(BigInt::zero());
    }
    let (primes, rest) = arith::trial_factor(&a0, limit);
    if !rest.is_one() {
        return None;
    }
    let mut divisors = vec![BigInt::one()];
    for (q, e) in primes {
        let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
        for d in &divisors {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &q;
            }
        }
        divisors = next;
        if divisors.len() > 100_000 {
            return None;
        }
    }
    divisors.sort();
    divisors
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .find(|d| f.eval(d).is_zero())
}

/// Monic gcd of `f` and `f'` over Q (primitive, made monic when possible).
fn repeated_factor(f: &IntPoly) -> Option<IntPoly> {
    let mut a = f.clone();
    let mut b = f.derivative().primitive_part();
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).ok()?.primitive_part();
        a = b;
        b = r;
    }
    let g = a.primitive_part();
    (g.degree()? > 0 && g.is_monic()).then_some(g)
}

fn recombine(
    f: &IntPoly,
    p: &BigInt,
    factors: &[ModPoly],
    possible: &[bool],
    max_subsets: u64,
) -> Result<Irreducibility> {
    let n = f.degree().unwrap();
    let r = factors.len();
    if r <= 1 {
        return Ok(Irreducibility::Irreducible);
    }
    // Coefficients of a monic factor are bounded by 2^(n-1) * ||f||_2.
    let norm = arith::isqrt_u128(
        f.norm2_squared()
            .try_into()
            .map_err(|_| Error::InvalidArgument("coefficients too large".into()))?,
    ) + 1;
    let bound = (BigInt::from(norm) << n) * 2;
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_lift(f, factors, p, k)?;

    let mut tried = 0u64;
    for size in 1..=r / 2 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| lifted[i].degree().unwrap()).sum();
            if possible[deg] {
                tried += 1;
                if tried > max_subsets {
                    return Ok(Irreducibility::Inconclusive);
                }
                let cand = idx
                    .iter()
                    .fold(IntPoly::one(), |acc, &i| {
                        (&acc * &lifted[i]).reduce_mod(&pk)
                    })
                    .reduce_symmetric(&pk);
                if f.div_exact(&cand).is_some() {
                    return Ok(Irreducibility::Reducible(cand));
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
    }
    debug_assert!(n >= 2);
    Ok(Irreducibility::Irreducible)
}

fn next_combination(idx: &mut [usize], r: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < r - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lifts a factorization of monic `f` into coprime monic factors mod `p`
/// to a factorization mod `p^k`.
/// Complete factorization over Q into monic irreducibles, sorted by degree
/// then coefficients. `None` if some piece could not be certified.
pub fn factor_over_q(f: &IntPoly, effort: &IrreducibilityEffort) -> Result<Option<Vec<IntPoly>>> {
    let mut out = Vec::new();
    let mut todo = vec![f.clone()];
    while let Some(g) = todo.pop() {
        match is_irreducible_over_q(&g, effort)? {
            Irreducibility::Irreducible => out.push(g),
            Irreducibility::Reducible(w) => {
                let rest = g.div_exact(&w).expect("witness divides");
                todo.push(w);
                todo.push(rest);
            }
            Irreducibility::Inconclusive => return Ok(None),
        }
    }
    out.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(Some(out))
}

pub fn hensel_lift(f: &IntPoly, factors: &[ModPoly], p: &BigInt, k: u32) -> Result<Vec<IntPoly>> {
    let pk = p.pow(k);
    if factors.len() == 1 {
        return Ok(vec![f.reduce_mod(&pk)]);
    }
    let m = factors[0].modulus().clone();
    let g0 = factors[0].clone();
    let h0 = factors[1..]
        .iter()
        .fold(ModPoly::one(&m), |acc, g| acc.mul(g));
    let (g, h) = lift_pair(f, &g0, &h0, p, k)?;
    let mut out = vec![g];
    out.extend(hensel_lift(&h, &factors[1..], p, k)?);
    Ok(out)
}

fn lift_pair(
    f: &IntPoly,
    g0: &ModPoly,
    h0: &ModPoly,
    p: &BigInt,
    k: u32,
) -> Result<(IntPoly, IntPoly)> {
    let m: std::sync::Arc<Modulus> = g0.modulus().clone();
    let (one, _, t) = g0.extended_gcd(h0)?;
    if !one.is_one() {
        return Err(Error::Internal(
            "Hensel lifting of non-coprime factors".into(),
        ));
    }
    let mut g = g0.lift();
    let mut h = h0.lift();
    let mut pj = p.clone();
    for _ in 1..k {
        let diff = f - &(&g * &h);
        let e = ModPoly::from_int_poly(&diff.div_scalar_exact(&pj), &m);
        let (_, r) = t.mul(&e).divmod(g0)?;
        g = &g + &r.lift().scale(&pj);
        let next = &pj * p;
        let (q, rem) = f.divmod_monic_unchecked(&g, Some(&next));
        if !rem.is_zero() {
            return Err(Error::Internal("Hensel step left a remainder".into()));
        }
        h = q;
        g = g.reduce_mod(&next);
        pj = next;
    }
    Ok((g, h))
}
