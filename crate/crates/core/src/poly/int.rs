use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over Z, lowest degree first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let c = if self.leading().is_negative() { -c } else { c };
        self.div_scalar_exact(&c)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`; the caller guarantees exactness.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a / c).collect())
    }

    /// Symmetric reduction of every coefficient into `(-m/2, m/2]`.
    pub fn reduce_symmetric(&self, m: &BigInt) -> Self {
        let half = m / 2;
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    /// Reduction of every coefficient into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Division by a monic divisor; exact over Z.
    pub fn divmod_monic(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !d.is_monic() {
            return Err(Error::NotMonic(d.to_string()));
        }
        Ok(self.divmod_monic_unchecked(d, None))
    }

    /// Monic division with all arithmetic reduced modulo `m` when given.
    pub(crate) fn divmod_monic_unchecked(
        &self,
        d: &IntPoly,
        m: Option<&BigInt>,
    ) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let mut q = std::mem::take(&mut rem[i + dd]);
            if let Some(m) = m {
                q = q.mod_floor(m);
            }
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                rem[i + j] -= &q * dc;
                if let Some(m) = m {
                    rem[i + j] = rem[i + j].mod_floor(m);
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        let (mut q, mut r) = (IntPoly::new(quot), IntPoly::new(rem));
        if let Some(m) = m {
            q = q.reduce_mod(m);
            r = r.reduce_mod(m);
        }
        (q, r)
    }

    /// Pseudo-remainder: `lc(d)^(deg a - deg d + 1) * a = q * d + r`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> Result<IntPoly> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(da) = self.degree() else {
            return Ok(IntPoly::zero());
        };
        if da < dd {
            return Ok(self.clone());
        }
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let mut steps = da - dd + 1;
        for i in (dd..=da).rev() {
            let c = std::mem::take(&mut r[i]);
            for x in r[..i].iter_mut() {
                *x *= &lc;
            }
            if !c.is_zero() {
                for j in 0..dd {
                    r[i - dd + j] -= &c * &d.coeffs[j];
                }
            }
            steps -= 1;
        }
        debug_assert_eq!(steps, 0);
        r.truncate(dd);
        Ok(IntPoly::new(r))
    }

    /// Exact division by a nonzero polynomial over Z, or `None` if the
    /// quotient is not integral or the remainder is nonzero.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let Some(da) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if da < dd {
            return None;
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for j in 0..dd {
                rem[i + j] -= &q * &d.coeffs[j];
            }
            quot[i] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &BigInt) -> Self {
        let lin = IntPoly::new(vec![c.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, a| {
            &(&acc * &lin) + &IntPoly::constant(a.clone())
        })
    }

    /// Sum of squares of the coefficients.
    pub fn norm2_squared(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
