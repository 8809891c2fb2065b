//! Number fields `Q[x]/(f)` and the splitting of rational primes.
//!
//! Splitting is read off the factorization of `f mod p` (Dedekind's theorem),
//! which is only valid where `Z[theta]` is p-maximal. Every split is guarded
//! by the Dedekind criterion; primes failing it are reported as
//! [`Error::NotPMaximal`] rather than completed to the maximal order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::{
    discriminant, factor_mod_p_seeded, is_irreducible_over_q, FactorizationFp, IntPoly,
    Irreducibility, IrreducibilityEffort, ModPoly, Modulus,
};

/// How irreducibility of the defining polynomial was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityFlag {
    Certified,
    /// Taken on the user's word after certification was inconclusive.
    Asserted,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    label: String,
    poly: IntPoly,
    degree: usize,
    disc_poly: BigInt,
    irreducibility: IrreducibilityFlag,
    seed: u64,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.poly == other.poly
    }
}

impl NumberField {
    /// Builds a field from a monic polynomial, certifying irreducibility.
    pub fn new(label: impl Into<String>, poly: IntPoly) -> Result<Self> {
        Self::with_assertion(label, poly, false)
    }

    /// Like [`NumberField::new`], but an inconclusive certification is
    /// accepted (and flagged) when `assert_irreducible` is set. A proven
    /// factorization is always an error.
    pub fn with_assertion(
        label: impl Into<String>,
        poly: IntPoly,
        assert_irreducible: bool,
    ) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::NotMonic(poly.to_string()));
        }
        let degree = poly.degree().expect("monic");
        if degree == 0 {
            return Err(Error::InvalidArgument(
                "defining polynomial must have degree >= 1".into(),
            ));
        }
        let irreducibility = match is_irreducible_over_q(&poly, &IrreducibilityEffort::default())? {
            Irreducibility::Irreducible => IrreducibilityFlag::Certified,
            Irreducibility::Reducible(w) => {
                return Err(Error::Reducible {
                    poly: poly.to_string(),
                    witness: w.to_string(),
                })
            }
            Irreducibility::Inconclusive if assert_irreducible => IrreducibilityFlag::Asserted,
            Irreducibility::Inconclusive => {
                return Err(Error::IrreducibilityInconclusive(poly.to_string()))
            }
        };
        let disc_poly = discriminant(&poly)?;
        Ok(NumberField {
            label: label.into(),
            poly,
            degree,
            disc_poly,
            irreducibility,
            seed: 0,
        })
    }

    /// Parses the defining polynomial from text.
    pub fn parse(label: impl Into<String>, poly: &str) -> Result<Self> {
        Self::new(label, poly.parse()?)
    }

    /// The rationals, presented by `x - 1`.
    pub fn rationals() -> Self {
        Self::new("Q", IntPoly::from_i64s(&[-1, 1])).expect("x - 1 is irreducible")
    }

    /// Seed for the equal-degree splitting PRNG. Results do not depend on it.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn disc_poly(&self) -> &BigInt {
        &self.disc_poly
    }

    pub fn irreducibility(&self) -> IrreducibilityFlag {
        self.irreducibility
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn factor(&self, p: u64) -> Result<FactorizationFp> {
        if !arith::is_prime_u64(p) {
            return Err(Error::CompositeModulus(BigInt::from(p)));
        }
        factor_mod_p_seeded(&self.poly, &BigInt::from(p), self.seed)
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = Q[x]/({})", self.label, self.poly)
    }
}

/// A prime ideal `(p, h(theta))` of a p-maximal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub residue_degree: u32,
    pub ramification: u32,
    /// Monic irreducible factor of `f mod p`.
    pub generator: ModPoly,
    pub norm: BigUint,
}

impl PrimeIdeal {
    /// Residue field size `p^f` as a machine word, when it fits.
    pub fn norm_u64(&self) -> Option<u64> {
        u64::try_from(&self.norm).ok()
    }

    pub fn generator_string(&self) -> String {
        self.generator.lift().to_string()
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm
            .cmp(&other.norm)
            .then(self.p.cmp(&other.p))
            .then_with(|| self.generator.canonical_cmp(&other.generator))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.generator_string())
    }
}

/// Decomposition of a rational prime in a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub p: u64,
    /// `(e_i, f_i)` sorted by `(f, e)`.
    pub pairs: Vec<(u32, u32)>,
    pub g: usize,
    pub p_maximal: bool,
    /// Prime ideals above `p`, in the same order as `pairs`.
    pub primes: Vec<PrimeIdeal>,
}

impl SplittingType {
    pub fn sum_ef(&self) -> u64 {
        self.pairs.iter().map(|&(e, f)| e as u64 * f as u64).sum()
    }

    pub fn residue_degrees(&self) -> Vec<u32> {
        self.pairs.iter().map(|&(_, f)| f).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PMaximality {
    PMaximal,
    NotPMaximal,
}

/// Dedekind criterion with the factorization it was computed from.
fn dedekind_from_factorization(field: &NumberField, p: u64, fac: &FactorizationFp) -> PMaximality {
    let m = Modulus::prime(p).expect("prime checked by caller");
    // g = prod g_i, h = prod g_i^(e_i - 1), T = (g h - f) / p
    let mut g_int = IntPoly::one();
    let mut h_int = IntPoly::one();
    let mut g_bar = ModPoly::one(&m);
    let mut h_bar = ModPoly::one(&m);
    for (gi, e) in &fac.factors {
        let lifted = gi.lift();
        g_int = &g_int * &lifted;
        g_bar = g_bar.mul(gi);
        for _ in 1..*e {
            h_int = &h_int * &lifted;
            h_bar = h_bar.mul(gi);
        }
    }
    if h_bar.is_one() {
        // squarefree mod p: always p-maximal
        return PMaximality::PMaximal;
    }
    let pb = BigInt::from(p);
    let diff = &(&g_int * &h_int) - &field.poly;
    debug_assert!(diff.coeffs().iter().all(|c| (c % &pb).is_zero()));
    let t_bar = ModPoly::from_int_poly(&diff.div_scalar_exact(&pb), &m);
    let d = g_bar
        .gcd(&h_bar)
        .and_then(|d| d.gcd(&t_bar))
        .expect("prime modulus");
    if d.is_one() {
        PMaximality::PMaximal
    } else {
        PMaximality::NotPMaximal
    }
}

/// Decides whether `Z[theta]` is maximal at `p`.
pub fn dedekind_criterion(field: &NumberField, p: u64) -> Result<PMaximality> {
    let fac = field.factor(p)?;
    Ok(dedekind_from_factorization(field, p, &fac))
}

fn splitting_from_factorization(p: u64, fac: &FactorizationFp, p_maximal: bool) -> SplittingType {
    let mut primes: Vec<PrimeIdeal> = fac
        .factors
        .iter()
        .map(|(g, e)| {
            let f = g.degree().expect("nonconstant factor") as u32;
            PrimeIdeal {
                p,
                residue_degree: f,
                ramification: *e,
                generator: g.clone(),
                norm: BigUint::from(p).pow(f),
            }
        })
        .collect();
    primes.sort_by(|a, b| {
        (a.residue_degree, a.ramification)
            .cmp(&(b.residue_degree, b.ramification))
            .then_with(|| a.generator.canonical_cmp(&b.generator))
    });
    SplittingType {
        p,
        pairs: primes
            .iter()
            .map(|q| (q.ramification, q.residue_degree))
            .collect(),
        g: primes.len(),
        p_maximal,
        primes,
    }
}

/// Splits `p` in `field`. Fails with [`Error::NotPMaximal`] when Dedekind's
/// theorem does not apply.
pub fn split_prime(field: &NumberField, p: u64) -> Result<SplittingType> {
    let fac = field.factor(p)?;
    match dedekind_from_factorization(field, p, &fac) {
        PMaximality::PMaximal => Ok(splitting_from_factorization(p, &fac, true)),
        PMaximality::NotPMaximal => Err(Error::NotPMaximal { p }),
    }
}

/// The factorization pattern of `f mod p` regardless of p-maximality, with
/// `p_maximal` recording the Dedekind verdict. When it is `false` the pairs
/// describe `Z[theta]`, not the maximal order.
pub fn dedekind_pattern(field: &NumberField, p: u64) -> Result<SplittingType> {
    let fac = field.factor(p)?;
    let ok = dedekind_from_factorization(field, p, &fac) == PMaximality::PMaximal;
    Ok(splitting_from_factorization(p, &fac, ok))
}

/// Splits every prime in `primes` concurrently; output order follows input order.
pub fn split_primes(field: &NumberField, primes: &[u64]) -> Vec<Result<SplittingType>> {
    primes.par_iter().map(|&p| split_prime(field, p)).collect()
}

/// All prime ideals of norm `<= bound`, sorted by `(norm, p, generator)`.
pub fn prime_ideals_up_to(field: &NumberField, bound: u64) -> Result<Vec<PrimeIdeal>> {
    if bound < 2 {
        return Err(Error::InvalidArgument("norm bound must be >= 2".into()));
    }
    let primes = arith::primes_up_to(bound);
    let bound_big = BigUint::from(bound);
    let mut out = Vec::new();
    for split in split_primes(field, &primes) {
        let split = split?;
        out.extend(split.primes.into_iter().filter(|q| q.norm <= bound_big));
    }
    out.sort();
    Ok(out)
}
