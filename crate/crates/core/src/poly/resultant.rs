//! Resultants over Z by the subresultant polynomial remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// `Res(a, b)`, exact. Zero if either input is zero.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    if da == 0 && db == 0 {
        return BigInt::one();
    }
    if da == 0 {
        return a.leading().pow(db as u32);
    }
    if db == 0 {
        return b.leading().pow(da as u32);
    }

    let ca = a.content();
    let cb = b.content();
    let mut a = a.div_scalar_exact(&ca);
    let mut b = b.div_scalar_exact(&cb);
    let t = ca.pow(db as u32) * cb.pow(da as u32);
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let deg_a = a.degree().unwrap();
        let deg_b = b.degree().unwrap();
        let delta = (deg_a - deg_b) as u32;
        if deg_a % 2 == 1 && deg_b % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b).expect("nonzero divisor");
        a = b;
        let divisor = &g * h.pow(delta);
        b = r.div_scalar_exact(&divisor);
        g = a.leading();
        // h <- g^delta / h^(delta - 1), exact
        h = if delta == 0 {
            h.clone()
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            debug_assert!((&num % &den).is_zero());
            num / den
        };
        match b.degree() {
            None => return BigInt::zero(),
            Some(0) => {
                let deg_a = a.degree().unwrap() as u32;
                let lb = b.leading();
                // h <- lb^deg_a / h^(deg_a - 1)
                let num = lb.pow(deg_a);
                let den = h.pow(deg_a - 1);
                debug_assert!((&num % &den).is_zero());
                return s * t * (num / den);
            }
            Some(_) => {}
        }
    }
}

/// `disc(f) = (-1)^(n(n-1)/2) * Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => {
            return Err(Error::InvalidArgument(
                "discriminant needs degree >= 1".into(),
            ))
        }
    };
    let r = resultant(f, &f.derivative());
    let lc = f.leading();
    let (q, rem) = r.div_rem(&lc);
    debug_assert!(rem.is_zero());
    let sign_flip = (n * (n - 1) / 2) % 2 == 1;
    Ok(if sign_flip { -q } else { q })
}

/// `true` iff `p` divides `disc(f)`.
pub fn prime_divides_discriminant(f: &IntPoly, p: u64) -> Result<bool> {
    let d = discriminant(f)?;
    Ok((d.abs() % BigInt::from(p)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn quadratic_closed_form() {
        assert_eq!(discriminant(&p(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(discriminant(&p(&[-1, -1, 1])).unwrap(), BigInt::from(5));
        for (b, c) in [(3i64, -7i64), (0, 5), (-4, 4), (11, 2)] {
            assert_eq!(
                discriminant(&p(&[c, b, 1])).unwrap(),
                BigInt::from(b * b - 4 * c)
            );
        }
    }

    #[test]
    fn cubic_x3_minus_x() {
        assert_eq!(discriminant(&p(&[0, -1, 0, 1])).unwrap(), BigInt::from(4));
        // x^3 - 2: -27 * 4 = -108
        assert_eq!(
            discriminant(&p(&[-2, 0, 0, 1])).unwrap(),
            BigInt::from(-108)
        );
    }

    #[test]
    fn linear_and_constant() {
        assert_eq!(discriminant(&p(&[-1, 1])).unwrap(), BigInt::from(1));
        assert!(discriminant(&p(&[3])).is_err());
        assert_eq!(resultant(&p(&[2]), &p(&[1, 1, 1])), BigInt::from(4));
        assert_eq!(resultant(&IntPoly::zero(), &p(&[1, 1])), BigInt::zero());
    }

    #[test]
    fn common_root_gives_zero() {
        let a = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[-1, 1]) * &p(&[5, 1]);
        assert!(resultant(&a, &b).is_zero());
    }

    #[test]
    fn x8_minus_97() {
        // disc(x^n + a) = (-1)^(n(n-1)/2) n^n a^(n-1); n = 8 -> +8^8 * (-97)^7
        let d = discriminant(&p(&[-97, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(d, BigInt::from(8).pow(8u32) * BigInt::from(-97).pow(7u32));
    }
}
