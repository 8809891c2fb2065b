//! Comparing two fields prime by prime up to a bound.
//!
//! Equal splitting numbers `g_K(p) = g_L(p)` at every prime is equivalent to
//! `zeta_K = zeta_L`; a finite bound can only ever give evidence for that,
//! while a single disagreeing prime is a proof of the opposite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{split_prime, split_primes, NumberField};
use crate::poly::{factor_mod_p, factor_over_q, IntPoly, IrreducibilityEffort};
use crate::spectrum::{components_labelled, components_of_i2, PrimeUniverse};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FingerprintEntry {
    pub g: usize,
    /// `(e, f)` sorted by `(f, e)`.
    pub pairs: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingFingerprint {
    pub label: String,
    pub bound: u64,
    pub entries: BTreeMap<u64, FingerprintEntry>,
    /// Primes where `Z[theta]` is not p-maximal; never silently dropped.
    pub skipped: BTreeSet<u64>,
}

impl SplittingFingerprint {
    pub fn g(&self, p: u64) -> Option<usize> {
        self.entries.get(&p).map(|e| e.g)
    }
}

pub fn fingerprint(field: &NumberField, bound: u64) -> Result<SplittingFingerprint> {
    if bound < 2 {
        return Err(Error::InvalidArgument(
            "fingerprint bound must be >= 2".into(),
        ));
    }
    let primes = arith::primes_up_to(bound);
    let mut entries = BTreeMap::new();
    let mut skipped = BTreeSet::new();
    for (p, r) in primes.iter().zip(split_primes(field, &primes)) {
        match r {
            Ok(s) => {
                entries.insert(
                    *p,
                    FingerprintEntry {
                        g: s.g,
                        pairs: s.pairs,
                    },
                );
            }
            Err(Error::NotPMaximal { .. }) => {
                skipped.insert(*p);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SplittingFingerprint {
        label: field.label().to_string(),
        bound,
        entries,
        skipped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    SplittingNumbersOnly,
    FullSplittingTypes,
}

impl std::str::FromStr for CompareMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" | "splitting_numbers_only" => Ok(CompareMode::SplittingNumbersOnly),
            "full" | "full_splitting_types" => Ok(CompareMode::FullSplittingTypes),
            _ => Err(Error::InvalidArgument(format!(
                "unknown comparison mode {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum VerdictResult {
    AgreeToBound,
    Disagree {
        p: u64,
        a: FingerprintEntry,
        b: FingerprintEntry,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub mode: CompareMode,
    #[serde(flatten)]
    pub result: VerdictResult,
    pub bound: u64,
    /// Union of both skipped sets; these primes were not compared.
    pub skipped: BTreeSet<u64>,
    pub compared: usize,
    pub caveat: String,
}

impl EquivalenceVerdict {
    pub fn agrees(&self) -> bool {
        self.result == VerdictResult::AgreeToBound
    }

    pub fn witness(&self) -> Option<u64> {
        match self.result {
            VerdictResult::AgreeToBound => None,
            VerdictResult::Disagree { p, .. } => Some(p),
        }
    }
}

impl fmt::Display for EquivalenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            VerdictResult::AgreeToBound => write!(f, "agree to bound {}", self.bound)?,
            VerdictResult::Disagree { p, a, b } => write!(
                f,
                "disagree at p = {p}: g = {} vs {}, pairs {:?} vs {:?}",
                a.g, b.g, a.pairs, b.pairs
            )?,
        }
        if !self.skipped.is_empty() {
            write!(f, " (not compared: {:?})", self.skipped)?;
        }
        Ok(())
    }
}

fn caveat(result: &VerdictResult, bound: u64, skipped: &BTreeSet<u64>) -> String {
    let mut s = match result {
        VerdictResult::AgreeToBound => format!(
            "agreement holds only for primes p <= {bound}; it is evidence for equal zeta functions, not a proof"
        ),
        VerdictResult::Disagree { p, .. } => {
            format!("the disagreement at p = {p} is exact; the fields have different zeta functions")
        }
    };
    if !skipped.is_empty() {
        let list: Vec<String> = skipped.iter().map(u64::to_string).collect();
        s.push_str(&format!(
            "; primes {{{}}} were excluded because Z[theta] is not p-maximal there",
            list.join(", ")
        ));
    }
    s
}

pub fn compare(
    a: &SplittingFingerprint,
    b: &SplittingFingerprint,
    mode: CompareMode,
) -> Result<EquivalenceVerdict> {
    if a.bound != b.bound {
        return Err(Error::MismatchedBounds(a.bound, b.bound));
    }
    let skipped: BTreeSet<u64> = a.skipped.union(&b.skipped).copied().collect();
    let mut compared = 0;
    let mut result = VerdictResult::AgreeToBound;
    for (p, ea) in &a.entries {
        let Some(eb) = b.entries.get(p) else { continue };
        compared += 1;
        let differ = match mode {
            CompareMode::SplittingNumbersOnly => ea.g != eb.g,
            CompareMode::FullSplittingTypes => ea.pairs != eb.pairs,
        };
        if differ {
            result = VerdictResult::Disagree {
                p: *p,
                a: ea.clone(),
                b: eb.clone(),
            };
            break;
        }
    }
    Ok(EquivalenceVerdict {
        mode,
        caveat: caveat(&result, a.bound, &skipped),
        result,
        bound: a.bound,
        skipped,
        compared,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineRow {
    pub p: u64,
    /// Components of `I_2` labelled `Z[1/p]`; `None` if `p` was skipped.
    pub count_a: Option<usize>,
    pub count_b: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub bound: u64,
    pub rows: Vec<PipelineRow>,
    /// Verdict reached by counting labelled components.
    pub verdict: EquivalenceVerdict,
    /// The counts matched the fingerprints and the verdict matched `compare`.
    pub consistent: bool,
}

/// Test hook: perturbs one count so the internal cross-check fires.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub inject_fault: bool,
}

pub fn invariant_pipeline(a: &NumberField, b: &NumberField, bound: u64) -> Result<PipelineReport> {
    invariant_pipeline_with(a, b, bound, PipelineOptions::default())
}

/// Counts, for each rational `p <= bound`, the second-maximal components whose
/// trace-range label is `Z[1/p]`, and compares the counts. The counts must
/// equal the fingerprint's `g` and the verdict must equal [`compare`] in
/// `splitting_numbers_only` mode; otherwise this returns [`Error::Internal`].
#[doc(hidden)]
pub fn invariant_pipeline_with(
    a: &NumberField,
    b: &NumberField,
    bound: u64,
    opts: PipelineOptions,
) -> Result<PipelineReport> {
    let fa = fingerprint(a, bound)?;
    let fb = fingerprint(b, bound)?;
    let ua = PrimeUniverse::over_primes(a, bound, true)?;
    let ub = PrimeUniverse::over_primes(b, bound, true)?;
    let ca = components_of_i2(&ua);
    let cb = components_of_i2(&ub);

    let mut rows = Vec::new();
    for p in arith::primes_up_to(bound) {
        let count = |fp: &SplittingFingerprint, comps| {
            (!fp.skipped.contains(&p)).then(|| components_labelled(comps, p))
        };
        let mut row = PipelineRow {
            p,
            count_a: count(&fa, &ca),
            count_b: count(&fb, &cb),
        };
        if opts.inject_fault && rows.is_empty() {
            row.count_a = row.count_a.map(|c| c + 1);
        }
        for (fp, c, side) in [(&fa, row.count_a, "first"), (&fb, row.count_b, "second")] {
            if c != fp.g(p) {
                return Err(Error::Internal(format!(
                    "{side} field, p = {p}: {c:?} components labelled {} but g = {:?}",
                    crate::rayclass::label_for(p),
                    fp.g(p)
                )));
            }
        }
        rows.push(row);
    }

    let skipped: BTreeSet<u64> = fa.skipped.union(&fb.skipped).copied().collect();
    let mut compared = 0;
    let mut result = VerdictResult::AgreeToBound;
    for row in &rows {
        let (Some(x), Some(y)) = (row.count_a, row.count_b) else {
            continue;
        };
        compared += 1;
        if x != y {
            result = VerdictResult::Disagree {
                p: row.p,
                a: fa.entries[&row.p].clone(),
                b: fb.entries[&row.p].clone(),
            };
            break;
        }
    }
    let verdict = EquivalenceVerdict {
        mode: CompareMode::SplittingNumbersOnly,
        caveat: caveat(&result, bound, &skipped),
        result,
        bound,
        skipped,
        compared,
    };
    let reference = compare(&fa, &fb, CompareMode::SplittingNumbersOnly)?;
    if reference != verdict {
        return Err(Error::Internal(format!(
            "component counting says \"{verdict}\" but the fingerprint comparison says \"{reference}\""
        )));
    }
    Ok(PipelineReport {
        bound,
        rows,
        verdict,
        consistent: true,
    })
}

/// Why a polynomial has no root in a field: modulo a prime `P` of `K` with
/// residue field `F_(p^f)`, the factor has no root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueObstruction {
    pub factor: String,
    pub p: u64,
    pub f: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RootCertificate {
    /// Every listed factor (whose roots would give a root of the polynomial)
    /// is obstructed at some prime of `K`.
    NoRoot {
        reduction: Option<String>,
        obstructions: Vec<ResidueObstruction>,
    },
    /// An explicit root, checked by exact arithmetic.
    Root {
        root: String,
    },
    Inconclusive {
        reason: String,
    },
}

/// First prime `p <= bound` with a prime of `K` above it whose residue field
/// contains no root of `h`.
fn residue_obstruction(
    field: &NumberField,
    h: &IntPoly,
    bound: u64,
) -> Result<Option<ResidueObstruction>> {
    for p in arith::primes_up_to(bound) {
        let Ok(split) = split_prime(field, p) else {
            continue;
        };
        let fac = match factor_mod_p(h, &BigInt::from(p)) {
            Ok(f) => f,
            Err(Error::VanishesModP(_)) => continue,
            Err(e) => return Err(e),
        };
        let degrees: Vec<usize> = fac
            .factors
            .iter()
            .map(|(g, _)| g.degree().unwrap_or(0))
            .collect();
        let mut fs: Vec<u32> = split.residue_degrees();
        fs.sort_unstable();
        fs.dedup();
        for f in fs {
            if !degrees.iter().any(|&d| d > 0 && f as usize % d == 0) {
                return Ok(Some(ResidueObstruction {
                    factor: h.to_string(),
                    p,
                    f,
                }));
            }
        }
    }
    Ok(None)
}

/// `Some(a)` if `f = x^n - a`.
fn pure_constant(f: &IntPoly) -> Option<BigInt> {
    let n = f.degree()?;
    if n < 1 || !f.is_monic() || (1..n).any(|i| !f.coeff(i).is_zero()) {
        return None;
    }
    Some(-f.coeff(0))
}

/// Splits `c = a^(n-1) b` as `d^n * c'` using the trial-division factors of
/// `a` and `b`.
fn strip_nth_powers(a: &BigInt, b: &BigInt, n: u32) -> (BigInt, BigInt) {
    let mut exps: BTreeMap<BigInt, u32> = BTreeMap::new();
    for (x, k) in [(a, n - 1), (b, 1)] {
        for (p, e) in arith::trial_factor(x, 1 << 20).0 {
            *exps.entry(p).or_default() += e * k;
        }
    }
    let d: BigInt = exps.iter().map(|(p, e)| p.pow(e / n)).product();
    let c = a.pow(n - 1) * b / d.pow(n);
    (d, c)
}

/// Decides (or fails to decide) whether the monic `g` has a root in `K`.
///
/// Tries a direct residue-field obstruction first. For arithmetically
/// equivalent fields that never works at unramified primes, so for pure
/// polynomials `f = x^n - a`, `g = x^n - b` it uses that a root `alpha` of
/// `g` gives the root `a*alpha/theta` of `x^n - a^(n-1) b`, factors the
/// latter over Q and obstructs each factor separately.
pub fn root_certificate(
    field: &NumberField,
    g: &IntPoly,
    prime_bound: u64,
) -> Result<RootCertificate> {
    if !g.is_monic() {
        return Err(Error::NotMonic(g.to_string()));
    }
    if let Some(o) = residue_obstruction(field, g, prime_bound)? {
        return Ok(RootCertificate::NoRoot {
            reduction: None,
            obstructions: vec![o],
        });
    }
    let n = field.degree();
    let (Some(a), Some(b)) = (pure_constant(field.poly()), pure_constant(g)) else {
        return Ok(RootCertificate::Inconclusive {
            reason: format!("no residue obstruction for primes <= {prime_bound}"),
        });
    };
    if g.degree() != Some(n) || a.is_zero() {
        return Ok(RootCertificate::Inconclusive {
            reason: "pure reduction needs equal degrees and a nonzero constant".into(),
        });
    }
    let (d, c) = strip_nth_powers(&a, &b, n as u32);
    let h = &IntPoly::monomial(BigInt::one(), n) - &IntPoly::constant(c);
    let reduction = format!("a root alpha of {g} in K gives the root {a}*alpha/({d}*theta) of {h}");
    let Some(factors) = factor_over_q(&h, &IrreducibilityEffort::default())? else {
        return Ok(RootCertificate::Inconclusive {
            reason: format!("could not factor {h} over Q"),
        });
    };
    let mut obstructions = Vec::new();
    for q in &factors {
        if q.degree() == Some(1) {
            // alpha = r*d*theta/a, so alpha^n = (r d)^n a / a^n must equal b
            let rd = -q.coeff(0) * &d;
            if &rd.pow(n as u32) * &a == &b * a.pow(n as u32) {
                let g = rd.gcd(&a) * a.signum();
                let (num, den) = (&rd / &g, &a / &g);
                let root = if den.is_one() {
                    format!("{num}*theta")
                } else {
                    format!("({num}/{den})*theta")
                };
                return Ok(RootCertificate::Root { root });
            }
            return Err(Error::Internal(format!(
                "rational root {rd} of {h} does not lift"
            )));
        }
        match residue_obstruction(field, q, prime_bound)? {
            Some(o) => obstructions.push(o),
            None => {
                return Ok(RootCertificate::Inconclusive {
                    reason: format!("factor {q} of {h} not obstructed for primes <= {prime_bound}"),
                })
            }
        }
    }
    Ok(RootCertificate::NoRoot {
        reduction: Some(reduction),
        obstructions,
    })
}


#[cfg(test)]
mod octic_tests {
    use super::*;

    #[test]
    fn octic_pair_not_isomorphic() {
        let k = NumberField::new("K", IntPoly::from_i64s(&[-97, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        let l =
            NumberField::new("L", IntPoly::from_i64s(&[-1552, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        for (f, g) in [(&k, &l), (&l, &k)] {
            let c = root_certificate(f, g.poly(), 200).unwrap();
            assert!(matches!(c, RootCertificate::NoRoot { .. }), "{c:?}");
        }
    }
}
