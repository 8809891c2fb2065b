//! Truncated Dedekind zeta functions.
//!
//! Two views: the Euler product over prime ideals of norm up to a bound,
//! evaluated in decimal floating point, and the Dirichlet coefficients
//! `a_n = #{ideals of norm n}`, which are exact integers.

use std::collections::BTreeSet;
use std::fmt;

use dashu_float::DBig;
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{prime_ideals_up_to, split_prime, split_primes, NumberField};

pub const DEFAULT_DIGITS: usize = 30;

/// A parsed real exponent `s > 1`.
#[derive(Clone, Debug)]
pub struct Exponent {
    text: String,
    value: DBig,
    integer: Option<u64>,
}

impl Exponent {
    pub fn parse(text: &str) -> Result<Self> {
        let value: DBig = text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad real number {text:?}")))?;
        if value <= DBig::ONE {
            return Err(Error::InvalidArgument(format!(
                "s must exceed 1, got {text}"
            )));
        }
        let integer = if value.fract() == DBig::ZERO {
            u64::try_from(value.trunc().to_int().value()).ok()
        } else {
            None
        };
        Ok(Exponent {
            text: text.trim().to_string(),
            value,
            integer,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// `prod (1 - N(p)^-s)^-1` over prime ideals with `N(p) <= bound`.
#[derive(Clone, Debug)]
pub struct EulerProduct {
    pub s: String,
    pub bound: u64,
    pub digits: usize,
    pub factors: usize,
    pub value: DBig,
}

impl EulerProduct {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().value()
    }

    /// The value printed to `digits` significant digits.
    pub fn value_string(&self) -> String {
        self.value.to_string()
    }
}

fn with_prec(x: DBig, prec: usize) -> DBig {
    x.with_precision(prec).value()
}

/// `n^-s` at working precision `prec`.
fn inverse_power(n: u64, s: &Exponent, prec: usize) -> DBig {
    let base = with_prec(DBig::from(n), prec);
    match s.integer {
        Some(mut e) => {
            let mut acc = with_prec(DBig::ONE, prec);
            let mut b = base;
            while e > 0 {
                if e & 1 == 1 {
                    acc = &acc * &b;
                }
                b = &b * &b;
                e >>= 1;
            }
            with_prec(DBig::ONE, prec) / acc
        }
        None => {
            let s = with_prec(s.value.clone(), prec);
            (-(s * base.ln())).exp()
        }
    }
}

pub fn euler_product(
    field: &NumberField,
    s: &Exponent,
    bound: u64,
    digits: usize,
) -> Result<EulerProduct> {
    if digits == 0 {
        return Err(Error::InvalidArgument(
            "precision must be at least 1 digit".into(),
        ));
    }
    let norms: Vec<u64> = if bound < 2 {
        Vec::new()
    } else {
        prime_ideals_up_to(field, bound)?
            .iter()
            .map(|q| q.norm_u64().expect("norm <= bound"))
            .collect()
    };
    let guard = 10 + (norms.len().max(1) as f64).log10().ceil() as usize;
    let prec = digits + guard;
    let one = with_prec(DBig::ONE, prec);
    let local: Vec<DBig> = norms
        .par_iter()
        .map(|&n| &one / (&one - inverse_power(n, s, prec)))
        .collect();
    // fixed left-to-right order so the rounding is reproducible
    let value = local.iter().fold(one.clone(), |acc, x| &acc * x);
    Ok(EulerProduct {
        s: s.as_str().to_string(),
        bound,
        digits,
        factors: norms.len(),
        value: with_prec(value, digits),
    })
}

/// Dirichlet coefficients `a_1..a_N`, possibly with gaps at primes where the
/// local factor could not be computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCounts {
    n_max: u64,
    /// `values[n - 1] = a_n`, `None` when `n` has a prime factor in `skipped`.
    values: Vec<Option<u64>>,
    skipped: BTreeSet<u64>,
}

impl IdealCounts {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        if n == 0 || n > self.n_max {
            return None;
        }
        self.values[(n - 1) as usize]
    }

    pub fn skipped(&self) -> &BTreeSet<u64> {
        &self.skipped
    }

    pub fn is_complete(&self) -> bool {
        self.skipped.is_empty()
    }

    /// `a_1..a_N` if no prime was skipped.
    pub fn to_vec(&self) -> Option<Vec<u64>> {
        self.values.iter().copied().collect()
    }
}

/// Coefficients of `prod_i (1 - t^f_i)^-1` up to `t^k_max`.
pub fn local_series(residue_degrees: &[u32], k_max: usize) -> Vec<u64> {
    let mut c = vec![0u64; k_max + 1];
    c[0] = 1;
    for &f in residue_degrees {
        let f = f as usize;
        for k in f..=k_max {
            c[k] += c[k - f];
        }
    }
    c
}

fn max_exponent(p: u64, n: u64) -> usize {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    k
}

fn counts(field: &NumberField, n_max: u64, skip: bool) -> Result<IdealCounts> {
    if n_max == 0 {
        return Err(Error::InvalidArgument(
            "coefficient bound must be >= 1".into(),
        ));
    }
    if n_max > 50_000_000 {
        return Err(Error::InvalidArgument(format!(
            "coefficient bound {n_max} too large"
        )));
    }
    let len = n_max as usize;
    let primes = arith::primes_up_to(n_max);
    let mut local: Vec<Option<Vec<u64>>> = vec![None; len + 1];
    let mut skipped = BTreeSet::new();
    for (p, split) in primes.iter().zip(split_primes(field, &primes)) {
        match split {
            Ok(st) => {
                local[*p as usize] =
                    Some(local_series(&st.residue_degrees(), max_exponent(*p, n_max)));
            }
            Err(Error::NotPMaximal { p }) if skip => {
                skipped.insert(p);
            }
            Err(e) => return Err(e),
        }
    }
    let spf = arith::smallest_prime_factors(len);
    let mut values: Vec<Option<u64>> = vec![None; len + 1];
    values[1] = Some(1);
    for n in 2..=len {
        let p = spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        values[n] = match (&local[p], values[m]) {
            (Some(c), Some(rest)) => Some(c[k].checked_mul(rest).ok_or_else(|| {
                Error::InvalidArgument(format!("ideal count a_{n} overflows u64"))
            })?),
            _ => None,
        };
    }
    values.remove(0);
    Ok(IdealCounts {
        n_max,
        values,
        skipped,
    })
}

/// `a_1..a_N`; every prime up to `N` must be p-maximal.
pub fn ideal_count_coefficients(field: &NumberField, n_max: u64) -> Result<Vec<u64>> {
    Ok(counts(field, n_max, false)?
        .to_vec()
        .expect("strict mode never skips"))
}

/// Like [`ideal_count_coefficients`], but primes failing the Dedekind
/// criterion are recorded and every `a_n` they touch is left unknown.
pub fn ideal_counts_skipping(field: &NumberField, n_max: u64) -> Result<IdealCounts> {
    counts(field, n_max, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZetaOutcome {
    Agree,
    FirstDisagreement { n: u64, a: u64, b: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaComparison {
    pub bound: u64,
    pub outcome: ZetaOutcome,
    /// Primes excluded from the comparison (union over both fields).
    pub skipped: BTreeSet<u64>,
    /// Number of indices `n` actually compared.
    pub compared: u64,
}

impl ZetaComparison {
    pub fn agrees(&self) -> bool {
        self.outcome == ZetaOutcome::Agree
    }

    pub fn caveat(&self) -> String {
        let mut s = format!(
            "coefficient agreement is checked only for n <= {}; it is evidence, not a proof of equal zeta functions",
            self.bound
        );
        if !self.skipped.is_empty() {
            let list: Vec<String> = self.skipped.iter().map(u64::to_string).collect();
            s.push_str(&format!(
                "; indices divisible by {{{}}} were not compared (Z[theta] not p-maximal)",
                list.join(", ")
            ));
        }
        s
    }
}

fn compare_counts(a: &IdealCounts, b: &IdealCounts) -> ZetaComparison {
    let skipped: BTreeSet<u64> = a.skipped.union(&b.skipped).copied().collect();
    let mut compared = 0;
    for n in 1..=a.n_max {
        let (Some(x), Some(y)) = (a.get(n), b.get(n)) else {
            continue;
        };
        compared += 1;
        if x != y {
            return ZetaComparison {
                bound: a.n_max,
                outcome: ZetaOutcome::FirstDisagreement { n, a: x, b: y },
                skipped,
                compared,
            };
        }
    }
    ZetaComparison {
        bound: a.n_max,
        outcome: ZetaOutcome::Agree,
        skipped,
        compared,
    }
}

/// Exact comparison of `a_n` for `n <= N`. Errors if either field is not
/// p-maximal at some `p <= N`.
pub fn zeta_equal_up_to(a: &NumberField, b: &NumberField, n_max: u64) -> Result<ZetaComparison> {
    Ok(compare_counts(
        &counts(a, n_max, false)?,
        &counts(b, n_max, false)?,
    ))
}

/// Exact comparison of `a_n` over indices built from primes where both
/// fields are p-maximal; the excluded primes are reported.
pub fn zeta_equal_up_to_skipping(
    a: &NumberField,
    b: &NumberField,
    n_max: u64,
) -> Result<ZetaComparison> {
    Ok(compare_counts(
        &counts(a, n_max, true)?,
        &counts(b, n_max, true)?,
    ))
}

/// `a_p` for a single prime, used by callers that already have the split.
pub fn prime_coefficient(field: &NumberField, p: u64) -> Result<u64> {
    Ok(split_prime(field, p)?
        .pairs
        .iter()
        .filter(|&&(_, f)| f == 1)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn field(c: &[i64]) -> NumberField {
        NumberField::new("K", IntPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(Exponent::parse("2").unwrap().integer, Some(2));
        assert_eq!(Exponent::parse("2.0").unwrap().integer, Some(2));
        assert_eq!(Exponent::parse("2.5").unwrap().integer, None);
        assert!(Exponent::parse("1").is_err());
        assert!(Exponent::parse("0.5").is_err());
        assert!(Exponent::parse("abc").is_err());
    }

    #[test]
    fn empty_product_is_one() {
        let s = Exponent::parse("2").unwrap();
        let e = euler_product(&field(&[1, 0, 1]), &s, 1, 30).unwrap();
        assert_eq!(e.factors, 0);
        assert_eq!(e.to_f64(), 1.0);
    }

    #[test]
    fn single_factor_exact() {
        // primes of norm <= 2 in Q: just 2, factor 1/(1 - 1/4) = 4/3
        let s = Exponent::parse("2").unwrap();
        let e = euler_product(&NumberField::rationals(), &s, 2, 20).unwrap();
        assert!(e.value_string().starts_with("1.333333333333333333"));
    }

    #[test]
    fn integer_and_fractional_paths_agree() {
        let q = NumberField::rationals();
        let a = euler_product(&q, &Exponent::parse("3").unwrap(), 200, 25).unwrap();
        let b = euler_product(
            &q,
            &Exponent::parse("3.0000000000000000000000000000001").unwrap(),
            200,
            25,
        )
        .unwrap();
        assert!((a.to_f64() - b.to_f64()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_coefficients() {
        let a = ideal_count_coefficients(&field(&[1, 0, 1]), 30).unwrap();
        assert_eq!(a[0], 1);
        assert_eq!(a[4], 2); // a_5
        assert_eq!(a[2], 0); // a_3
        assert_eq!(a[8], 1); // a_9
        assert_eq!(a[24], 3); // a_25
        assert_eq!(a[1], 1); // a_2
    }

    #[test]
    fn rationals_all_ones() {
        assert!(ideal_count_coefficients(&NumberField::rationals(), 500)
            .unwrap()
            .iter()
            .all(|&a| a == 1));
    }

    #[test]
    fn local_series_examples() {
        assert_eq!(local_series(&[1, 1], 3), vec![1, 2, 3, 4]);
        assert_eq!(local_series(&[2], 4), vec![1, 0, 1, 0, 1]);
        assert_eq!(local_series(&[], 2), vec![1, 0, 0]);
    }

    #[test]
    fn comparisons() {
        let q = NumberField::rationals();
        assert!(zeta_equal_up_to(&q, &q, 100).unwrap().agrees());
        let c = zeta_equal_up_to(&field(&[1, 0, 1]), &field(&[1, 1, 1]), 10).unwrap();
        assert_eq!(
            c.outcome,
            ZetaOutcome::FirstDisagreement { n: 2, a: 1, b: 0 }
        );
    }

    #[test]
    fn skipping_mode_marks_gaps() {
        let k = field(&[-97, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(
            ideal_count_coefficients(&k, 10),
            Err(Error::NotPMaximal { p: 2 })
        ));
        let c = ideal_counts_skipping(&k, 10).unwrap();
        assert_eq!(c.skipped().iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(c.get(1), Some(1));
        assert_eq!(c.get(4), None);
        assert_eq!(c.get(6), None);
        assert!(c.get(3).is_some());
    }
}
