use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::arith;
use crate::error::{Error, Result};

/// A modulus `q >= 2` with its primality decided once.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    value: BigUint,
    prime: bool,
}

impl Modulus {
    pub fn new(q: &BigInt) -> Result<Arc<Self>> {
        let value = q
            .to_biguint()
            .filter(|v| *v >= BigUint::from(2u32))
            .ok_or_else(|| Error::InvalidArgument(format!("modulus {q} must be >= 2")))?;
        let prime = arith::is_prime(q);
        Ok(Arc::new(Modulus { value, prime }))
    }

    pub fn prime(p: u64) -> Result<Arc<Self>> {
        let m = Self::new(&BigInt::from(p))?;
        if !m.prime {
            return Err(Error::CompositeModulus(BigInt::from(p)));
        }
        Ok(m)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_prime(&self) -> bool {
        self.prime
    }

    fn reduce(&self, c: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, self.value.clone());
        c.mod_floor(&m).to_biguint().expect("non-negative residue")
    }

    /// Inverse of `a` modulo `q`, if it exists.
    pub fn inverse(&self, a: &BigUint) -> Option<BigUint> {
        let m = BigInt::from_biguint(Sign::Plus, self.value.clone());
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        let eg = a.extended_gcd(&m);
        eg.gcd.is_one().then(|| self.reduce(&eg.x))
    }
}

/// Dense polynomial over Z/qZ, lowest degree first, coefficients in `[0, q)`.
#[derive(Clone)]
pub struct ModPoly {
    coeffs: Vec<BigUint>,
    modulus: Arc<Modulus>,
}

impl PartialEq for ModPoly {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.value == other.modulus.value && self.coeffs == other.coeffs
    }
}

impl Eq for ModPoly {}

impl std::hash::Hash for ModPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.value.hash(state);
        self.coeffs.hash(state);
    }
}

impl ModPoly {
    fn from_raw(mut coeffs: Vec<BigUint>, modulus: Arc<Modulus>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ModPoly { coeffs, modulus }
    }

    pub fn new(coeffs: &[BigInt], modulus: &Arc<Modulus>) -> Self {
        Self::from_raw(
            coeffs.iter().map(|c| modulus.reduce(c)).collect(),
            modulus.clone(),
        )
    }

    pub fn from_i64s(coeffs: &[i64], modulus: &Arc<Modulus>) -> Self {
        let v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::new(&v, modulus)
    }

    pub fn from_int_poly(f: &IntPoly, modulus: &Arc<Modulus>) -> Self {
        Self::new(f.coeffs(), modulus)
    }

    pub fn zero(modulus: &Arc<Modulus>) -> Self {
        Self::from_raw(Vec::new(), modulus.clone())
    }

    pub fn one(modulus: &Arc<Modulus>) -> Self {
        Self::from_raw(vec![BigUint::one()], modulus.clone())
    }

    pub fn x(modulus: &Arc<Modulus>) -> Self {
        Self::from_raw(vec![BigUint::zero(), BigUint::one()], modulus.clone())
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigUint {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Lift to Z with coefficients in `[0, q)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigInt::from_biguint(Sign::Plus, c.clone()))
                .collect(),
        )
    }

    fn check_same(&self, other: &ModPoly) {
        assert_eq!(
            self.modulus.value, other.modulus.value,
            "mixed moduli in ModPoly arithmetic"
        );
    }

    fn q(&self) -> &BigUint {
        &self.modulus.value
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.check_same(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let q = self.q();
        let zero = BigUint::zero();
        let v = (0..n)
            .map(|i| {
                let s = self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero);
                if &s >= q {
                    s - q
                } else {
                    s
                }
            })
            .collect();
        ModPoly::from_raw(v, self.modulus.clone())
    }

    pub fn neg(&self) -> ModPoly {
        let q = self.q();
        let v = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { c.clone() } else { q - c })
            .collect();
        ModPoly::from_raw(v, self.modulus.clone())
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        self.check_same(other);
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(&self.modulus);
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let q = self.q();
        for c in out.iter_mut() {
            *c %= q;
        }
        ModPoly::from_raw(out, self.modulus.clone())
    }

    pub fn scale(&self, c: &BigUint) -> ModPoly {
        let q = self.q();
        let v = self.coeffs.iter().map(|a| (a * c) % q).collect();
        ModPoly::from_raw(v, self.modulus.clone())
    }

    /// Quotient and remainder; the divisor's leading coefficient must be a unit.
    pub fn divmod(&self, d: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.check_same(d);
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc = d.leading();
        let inv = self.modulus.inverse(&lc).ok_or_else(|| {
            Error::NonInvertibleLeading(
                BigInt::from_biguint(Sign::Plus, lc.clone()),
                BigInt::from_biguint(Sign::Plus, self.q().clone()),
            )
        })?;
        let q = self.q().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((ModPoly::zero(&self.modulus), self.clone()));
        }
        let mut quot = vec![BigUint::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            let t = (c * &inv) % &q;
            for j in 0..dd {
                let sub = (&t * &d.coeffs[j]) % &q;
                let r = &mut rem[i + j];
                if *r >= sub {
                    *r -= sub;
                } else {
                    *r += &q;
                    *r -= sub;
                }
            }
            quot[i] = t;
        }
        rem.truncate(dd);
        Ok((
            ModPoly::from_raw(quot, self.modulus.clone()),
            ModPoly::from_raw(rem, self.modulus.clone()),
        ))
    }

    pub fn rem(&self, d: &ModPoly) -> Result<ModPoly> {
        Ok(self.divmod(d)?.1)
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Result<ModPoly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lc = self.leading();
        if lc.is_one() {
            return Ok(self.clone());
        }
        let inv = self.modulus.inverse(&lc).ok_or_else(|| {
            Error::NonInvertibleLeading(
                BigInt::from_biguint(Sign::Plus, lc),
                BigInt::from_biguint(Sign::Plus, self.q().clone()),
            )
        })?;
        Ok(self.scale(&inv))
    }

    fn require_prime(&self) -> Result<()> {
        if self.modulus.prime {
            Ok(())
        } else {
            Err(Error::CompositeModulus(BigInt::from_biguint(
                Sign::Plus,
                self.q().clone(),
            )))
        }
    }

    /// Monic gcd over a prime field (zero if both inputs are zero).
    pub fn gcd(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check_same(other);
        self.require_prime()?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd over a prime field: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn extended_gcd(&self, other: &ModPoly) -> Result<(ModPoly, ModPoly, ModPoly)> {
        self.check_same(other);
        self.require_prime()?;
        let m = &self.modulus;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ModPoly::one(m), ModPoly::zero(m));
        let (mut t0, mut t1) = (ModPoly::zero(m), ModPoly::one(m));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = m.inverse(&r0.leading()).expect("prime field");
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &ModPoly) -> Result<ModPoly> {
        let mut base = self.rem(m)?;
        let mut acc = ModPoly::one(&self.modulus).rem(m)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> ModPoly {
        let q = self.q();
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (c * BigUint::from(i)) % q)
            .collect();
        ModPoly::from_raw(v, self.modulus.clone())
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        let q = self.q();
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| (acc * x + c) % q)
    }

    /// Canonical order: degree first, then coefficients from the constant term upward.
    pub fn canonical_cmp(&self, other: &ModPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// For `f(x) = g(x^p)` over F_p returns `g`, the p-th root of `f`.
    /// Only meaningful when the modulus is a prime `p` and `f' = 0`.
    pub(crate) fn pth_root(&self) -> ModPoly {
        // a^p = a on F_p, so only the exponents shrink
        let v = match usize::try_from(self.q()) {
            Ok(p) => self.coeffs.iter().step_by(p).cloned().collect(),
            Err(_) => self.coeffs.iter().take(1).cloned().collect(),
        };
        ModPoly::from_raw(v, self.modulus.clone())
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.lift(), self.q())
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u64) -> Arc<Modulus> {
        Modulus::new(&BigInt::from(q)).unwrap()
    }

    #[test]
    fn gcd_common_factor_f5() {
        let q = m(5);
        let a = ModPoly::from_i64s(&[-1, 0, 1], &q);
        let b = ModPoly::from_i64s(&[-1, 1], &q);
        assert_eq!(a.gcd(&b).unwrap(), ModPoly::from_i64s(&[4, 1], &q));
    }

    #[test]
    fn difference_of_squares_f7() {
        let q = m(7);
        let a = ModPoly::from_i64s(&[1, 1], &q);
        let b = ModPoly::from_i64s(&[-1, 1], &q);
        assert_eq!(a.mul(&b), ModPoly::from_i64s(&[6, 0, 1], &q));
    }

    #[test]
    fn exact_division_f3() {
        let q = m(3);
        let a = ModPoly::from_i64s(&[0, 0, 0, 1], &q);
        let b = ModPoly::from_i64s(&[0, 0, 1], &q);
        let (quot, rem) = a.divmod(&b).unwrap();
        assert_eq!(quot, ModPoly::x(&q));
        assert!(rem.is_zero());
    }

    #[test]
    fn division_errors() {
        let q = m(6);
        let a = ModPoly::from_i64s(&[1, 1, 1], &q);
        assert!(matches!(
            a.divmod(&ModPoly::zero(&q)),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(
            a.divmod(&ModPoly::from_i64s(&[1, 2], &q)),
            Err(Error::NonInvertibleLeading(..))
        ));
        // divmod is fine with a unit leading coefficient mod a composite
        assert!(a.divmod(&ModPoly::from_i64s(&[1, 5], &q)).is_ok());
        assert!(matches!(a.gcd(&a), Err(Error::CompositeModulus(_))));
    }

    #[test]
    fn extended_gcd_bezout() {
        let q = m(11);
        let a = ModPoly::from_i64s(&[3, 1, 4, 1], &q);
        let b = ModPoly::from_i64s(&[5, 9, 2], &q);
        let (g, s, t) = a.extended_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, a.gcd(&b).unwrap());
    }

    #[test]
    fn pow_mod_fermat() {
        let q = m(7);
        let f = ModPoly::from_i64s(&[3, 0, 1], &q);
        // x^7 == x (mod x^2+3 over F_7)? Only if f splits; x^49 == x for degree-2 factors.
        let x = ModPoly::x(&q);
        let x49 = x.pow_mod(&BigUint::from(49u32), &f).unwrap();
        assert_eq!(x49, x);
    }

    #[test]
    fn rejects_small_modulus() {
        assert!(Modulus::new(&BigInt::from(1)).is_err());
        assert!(Modulus::new(&BigInt::from(-7)).is_err());
    }
}
