//! Factorization of univariate polynomials over prime fields.
//!
//! Squarefree decomposition via `gcd(f, f')` (with p-th roots when the
//! derivative vanishes), distinct-degree splitting via `x^(p^i) - x`, then
//! Cantor–Zassenhaus equal-degree splitting. The random elements used by the
//! equal-degree step come from a ChaCha stream seeded by a hash of
//! `(seed, p, f)`, so output never depends on scheduling.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::modp::{ModPoly, Modulus};
use super::IntPoly;
use crate::error::{Error, Result};

/// Complete factorization of a polynomial over F_p into monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationFp {
    pub p: BigInt,
    /// `(monic irreducible, multiplicity)` in canonical order.
    pub factors: Vec<(ModPoly, u32)>,
}

impl FactorizationFp {
    /// Product of all factors with multiplicity (the monic input).
    pub fn product(&self, modulus: &Arc<Modulus>) -> ModPoly {
        self.factors
            .iter()
            .fold(ModPoly::one(modulus), |acc, (g, e)| {
                (0..*e).fold(acc, |a, _| a.mul(g))
            })
    }

    /// `(degree, multiplicity)` of every factor, in canonical order.
    pub fn degree_pattern(&self) -> Vec<(usize, u32)> {
        self.factors
            .iter()
            .map(|(g, e)| (g.degree().unwrap_or(0), *e))
            .collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Factors `f mod p` with the default seed.
pub fn factor_mod_p(f: &IntPoly, p: &BigInt) -> Result<FactorizationFp> {
    factor_mod_p_seeded(f, p, 0)
}

pub fn factor_mod_p_seeded(f: &IntPoly, p: &BigInt, seed: u64) -> Result<FactorizationFp> {
    let modulus = Modulus::new(p)?;
    if !modulus.is_prime() {
        return Err(Error::CompositeModulus(p.clone()));
    }
    let fp = ModPoly::from_int_poly(f, &modulus);
    if fp.is_zero() {
        return Err(Error::VanishesModP(p.clone()));
    }
    let mut rng = seeded_rng(f, p, seed);
    let mut factors = Vec::new();
    let monic = fp.monic()?;
    for (part, mult) in squarefree_decomposition(&monic)? {
        for (block, d) in distinct_degree(&part)? {
            for g in equal_degree(&block, d, &mut rng)? {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|(a, ea), (b, eb)| a.canonical_cmp(b).then(ea.cmp(eb)));
    Ok(FactorizationFp {
        p: p.clone(),
        factors,
    })
}

fn seeded_rng(f: &IntPoly, p: &BigInt, seed: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(p.to_signed_bytes_le());
    for c in f.coeffs() {
        let b = c.to_signed_bytes_le();
        h.update((b.len() as u64).to_le_bytes());
        h.update(&b);
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Squarefree decomposition of a monic polynomial over F_p:
/// `f = prod g_i^i` with each `g_i` squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.divmod(&c)?.0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.divmod(&y)?.0;
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.divmod(&y)?.0;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let p: u32 = f
            .modulus()
            .value()
            .try_into()
            .expect("repeated p-th powers only occur for word-sized p");
        for (g, j) in squarefree_decomposition(&c.pth_root())? {
            out.push((g, j * p));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic polynomial into blocks whose irreducible factors
/// all share the stated degree.
pub fn distinct_degree(f: &ModPoly) -> Result<Vec<(ModPoly, usize)>> {
    let m = f.modulus().clone();
    let p = m.value().clone();
    let x = ModPoly::x(&m);
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&p, &rest)?;
        let g = h.sub(&x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.divmod(&g)?.0;
            h = h.rem(&rest)?;
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    Ok(out)
}

/// Cantor–Zassenhaus splitting of a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<ModPoly>> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let m = f.modulus().clone();
    let p = m.value().clone();
    let two = BigUint::from(2u32);
    let odd_exp = (p.pow(d as u32) - BigUint::one()) / &two;
    loop {
        let a = random_poly(n, &m, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == two {
            // absolute trace F_{2^d} -> F_2
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f)?;
                s = s.add(&t);
            }
            s
        } else {
            a.pow_mod(&odd_exp, f)?.sub(&ModPoly::one(&m))
        };
        let g = b.gcd(f)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.divmod(&g)?.0;
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&h, d, rng)?);
            return Ok(out);
        }
    }
}

fn random_poly(n: usize, m: &Arc<Modulus>, rng: &mut ChaCha8Rng) -> ModPoly {
    let q = BigInt::from_biguint(num_bigint::Sign::Plus, m.value().clone());
    let v: Vec<BigInt> = (0..n)
        .map(|_| rng.gen_bigint_range(&BigInt::zero(), &q))
        .collect();
    ModPoly::new(&v, m)
}
