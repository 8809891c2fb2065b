//! Arithmetic in the maximal order `Z[omega]` of a quadratic field.
//!
//! `omega = sqrt(d)` when `d = 2, 3 mod 4` and `(1 + sqrt(d)) / 2` when
//! `d = 1 mod 4`, so `omega^2 = t*omega - n`. Elements are pairs `(x, y)`
//! meaning `x + y*omega`. Everything is `i128`; overflow is reported as an
//! unsupported input rather than wrapped.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith;
use crate::error::{Error, Result};

pub type Elt = (i128, i128);

fn overflow() -> Error {
    Error::UnsupportedField("quadratic arithmetic exceeded 128-bit range".into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalSplitting {
    Split(u64, u64),
    Ramified(u64),
    Inert,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadOrder {
    /// Squarefree radicand.
    pub d: i128,
    pub t: i128,
    pub n: i128,
    /// Field discriminant `t^2 - 4n`.
    pub disc: i128,
}

impl QuadOrder {
    pub fn new(d: i128) -> Result<Self> {
        if d == 0 || d == 1 || arith::squarefree_decomposition(d).0 != 1 {
            return Err(Error::InvalidArgument(format!(
                "{d} is not a squarefree integer other than 0, 1"
            )));
        }
        let (t, n) = if d.rem_euclid(4) == 1 {
            (1, (1 - d) / 4)
        } else {
            (0, -d)
        };
        Ok(QuadOrder {
            d,
            t,
            n,
            disc: t * t - 4 * n,
        })
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn norm(&self, (x, y): Elt) -> i128 {
        x * x + self.t * x * y + self.n * y * y
    }

    pub fn checked_norm(&self, (x, y): Elt) -> Option<i128> {
        x.checked_mul(x)?
            .checked_add(self.t.checked_mul(x)?.checked_mul(y)?)?
            .checked_add(self.n.checked_mul(y)?.checked_mul(y)?)
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.checked_mul(a, b).expect("quadratic product overflow")
    }

    pub fn checked_mul(&self, (x1, y1): Elt, (x2, y2): Elt) -> Option<Elt> {
        let yy = y1.checked_mul(y2)?;
        let x = x1.checked_mul(x2)?.checked_sub(self.n.checked_mul(yy)?)?;
        let y = x1
            .checked_mul(y2)?
            .checked_add(x2.checked_mul(y1)?)?
            .checked_add(self.t.checked_mul(yy)?)?;
        Some((x, y))
    }

    pub fn conj(&self, (x, y): Elt) -> Elt {
        (x + self.t * y, -y)
    }

    /// Signs of the two real embeddings, `omega -> (t +- sqrt(D)) / 2`.
    pub fn signs(&self, (x, y): Elt) -> (bool, bool) {
        debug_assert!(self.is_real());
        let u = 2 * x + self.t * y;
        (
            sign_surd(u, y, self.disc) > 0,
            sign_surd(u, -y, self.disc) > 0,
        )
    }

    /// Splitting of the rational prime `q` in this order.
    pub fn local_splitting(&self, q: u64) -> LocalSplitting {
        let qi = q as i128;
        let t = self.t.rem_euclid(qi) as u64;
        let n = self.n.rem_euclid(qi) as u64;
        if q == 2 {
            let roots: Vec<u64> = (0..2).filter(|&r| (r * r + t * r + n) % 2 == 0).collect();
            return match (self.disc.rem_euclid(2) == 0, roots.as_slice()) {
                (true, [r]) => LocalSplitting::Ramified(*r),
                (false, [r1, r2]) => LocalSplitting::Split(*r1, *r2),
                (false, []) => LocalSplitting::Inert,
                _ => unreachable!("inconsistent splitting at 2"),
            };
        }
        let disc = self.disc.rem_euclid(qi) as u64;
        let half = (q + 1) / 2;
        if disc == 0 {
            return LocalSplitting::Ramified(arith::mul_mod(t, half, q));
        }
        match arith::sqrt_mod_prime(disc, q) {
            Some(s) => {
                let r1 = arith::mul_mod((t + s) % q, half, q);
                let r2 = arith::mul_mod((t + q - s) % q, half, q);
                LocalSplitting::Split(r1.min(r2), r1.max(r2))
            }
            None => LocalSplitting::Inert,
        }
    }

    /// Fundamental unit `> 1` of a real quadratic order, from the continued
    /// fraction of `omega`. Gives up after `max_steps` partial quotients.
    pub fn fundamental_unit(&self, max_steps: usize) -> Result<Elt> {
        if !self.is_real() {
            return Err(Error::InvalidArgument("imaginary quadratic order".into()));
        }
        let dd = self.disc;
        let s = arith::isqrt_u128(dd as u128) as i128;
        let (mut p, mut q) = (self.t, 2i128);
        let (mut a_prev, mut a_cur) = (0i128, 1i128);
        let (mut b_prev, mut b_cur) = (1i128, 0i128);
        for _ in 0..max_steps {
            let a = if q > 0 {
                Integer::div_floor(&(p + s), &q)
            } else {
                Integer::div_floor(&(p + s + 1), &q)
            };
            let a_next = a.checked_mul(a_cur).and_then(|v| v.checked_add(a_prev));
            let b_next = a.checked_mul(b_cur).and_then(|v| v.checked_add(b_prev));
            let (Some(a_next), Some(b_next)) = (a_next, b_next) else {
                return Err(overflow());
            };
            (a_prev, a_cur) = (a_cur, a_next);
            (b_prev, b_cur) = (b_cur, b_next);
            let cand = (a_cur - self.t * b_cur, b_cur);
            if b_cur > 0 {
                if let Some(nm) = self.checked_norm(cand) {
                    if nm.abs() == 1 {
                        return Ok(cand);
                    }
                }
            }
            let p_next = a * q - p;
            let q_next = (dd - p_next * p_next) / q;
            p = p_next;
            q = q_next;
        }
        Err(Error::UnsupportedField(format!(
            "fundamental unit of Q(sqrt({})) not found within {max_steps} continued fraction steps",
            self.d
        )))
    }

    /// Generators of the unit group: `-1`, the extra roots of unity for
    /// `d = -1, -3`, and the fundamental unit for real fields.
    pub fn unit_generators(&self, max_steps: usize) -> Result<Vec<Elt>> {
        let mut gens = vec![(-1, 0)];
        match self.d {
            -1 | -3 => gens.push((0, 1)),
            d if d > 0 => gens.push(self.fundamental_unit(max_steps)?),
            _ => {}
        }
        Ok(gens)
    }

    pub fn ideal_mul(&self, i: &QuadIdeal, j: &QuadIdeal) -> Result<QuadIdeal> {
        let bi = i.basis();
        let bj = j.basis();
        let mut gens = Vec::with_capacity(4);
        for u in bi {
            for v in bj {
                gens.push(self.checked_mul(u, v).ok_or_else(overflow)?);
            }
        }
        let out = QuadIdeal::from_generators(&gens).ok_or_else(overflow)?;
        debug_assert!(self.is_valid(&out));
        Ok(out)
    }

    pub fn ideal_conj(&self, i: &QuadIdeal) -> QuadIdeal {
        QuadIdeal {
            c: i.c,
            a: i.a,
            b: (-i.b - self.t).rem_euclid(i.a),
        }
    }

    /// The Hermite form `(a, b + omega)` is an ideal iff `a | N(b + omega)`.
    pub fn is_valid(&self, i: &QuadIdeal) -> bool {
        i.c >= 1 && i.a >= 1 && (i.b * i.b + self.t * i.b + self.n).rem_euclid(i.a) == 0
    }

    /// `(q, omega - r)` for a root `r` of `x^2 - t x + n` mod `q`.
    pub fn prime_ideal(&self, q: u64, r: u64) -> QuadIdeal {
        let q = q as i128;
        let i = QuadIdeal {
            c: 1,
            a: q,
            b: (-(r as i128)).rem_euclid(q),
        };
        debug_assert!(self.is_valid(&i));
        i
    }

    /// An element generating `i`, if `i` is principal. For real fields
    /// `eps` is the fundamental unit; generators of norm `-N(i)` are accepted.
    pub fn find_generator(&self, i: &QuadIdeal, eps: Option<Elt>) -> Result<Option<Elt>> {
        let norm = i.norm().ok_or_else(overflow)?;
        let four_n = norm.checked_mul(4).ok_or_else(overflow)?;
        let abs_d = self.disc.abs();
        let y_max = if self.is_real() {
            let (ex, ey) = eps.expect("real fields need the fundamental unit");
            let eps_f = ex as f64 + ey as f64 * (self.t as f64 + (self.disc as f64).sqrt()) / 2.0;
            (2.0 * (norm as f64 * eps_f / self.disc as f64).sqrt()).ceil() as i128 + 1
        } else {
            arith::isqrt_u128((four_n / abs_d) as u128) as i128
        };
        let targets: &[i128] = if self.is_real() { &[1, -1] } else { &[1] };
        let mut y = 0i128;
        while y <= y_max {
            let dy2 = abs_d.checked_mul(y * y).ok_or_else(overflow)?;
            for &sg in targets {
                let sq = if self.is_real() {
                    dy2 + sg * four_n
                } else {
                    four_n - dy2
                };
                let Some(s) = arith::exact_sqrt_i128(sq) else {
                    continue;
                };
                for s in [s, -s] {
                    let two_x = s - self.t * y;
                    if two_x.rem_euclid(2) != 0 {
                        continue;
                    }
                    let g = (two_x / 2, y);
                    if i.contains(g) {
                        debug_assert_eq!(self.norm(g).abs(), norm);
                        return Ok(Some(g));
                    }
                }
            }
            y += i.c;
        }
        Ok(None)
    }
}

/// Sign of `u + v*sqrt(dd)` for a positive non-square `dd`.
fn sign_surd(u: i128, v: i128, dd: i128) -> i32 {
    let su = u.signum() as i32;
    let sv = v.signum() as i32;
    if sv == 0 || su == sv {
        return if su == 0 { sv } else { su };
    }
    if su == 0 {
        return sv;
    }
    let lhs = BigInt::from(u) * BigInt::from(u);
    let rhs = BigInt::from(v) * BigInt::from(v) * BigInt::from(dd);
    if lhs > rhs {
        su
    } else {
        sv
    }
}

/// Ideal `c * (a Z + (b + omega) Z)` in Hermite form, `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadIdeal {
    pub c: i128,
    pub a: i128,
    pub b: i128,
}

impl QuadIdeal {
    pub fn unit() -> Self {
        QuadIdeal { c: 1, a: 1, b: 0 }
    }

    /// The principal ideal `(q)` for a positive integer `q`.
    pub fn rational(q: i128) -> Self {
        QuadIdeal { c: q, a: 1, b: 0 }
    }

    pub fn norm(&self) -> Option<i128> {
        self.c.checked_mul(self.c)?.checked_mul(self.a)
    }

    pub fn basis(&self) -> [Elt; 2] {
        [(self.c * self.a, 0), (self.c * self.b, self.c)]
    }

    pub fn contains(&self, (x, y): Elt) -> bool {
        if x % self.c != 0 || y % self.c != 0 {
            return false;
        }
        let (x, y) = (x / self.c, y / self.c);
        (x - y * self.b).rem_euclid(self.a) == 0
    }

    /// Hermite form of the Z-module spanned by `gens`; `None` if the module
    /// is not of full rank or intermediate values overflow.
    pub fn from_generators(gens: &[Elt]) -> Option<Self> {
        let mut pivot = (0i128, 0i128);
        let mut acc = 0i128; // gcd of the x-coordinates of the y = 0 sublattice
        for &w in gens {
            let (g, s, u) = ext_gcd(pivot.1, w.1);
            if g == 0 {
                acc = acc.gcd(&w.0);
                continue;
            }
            let new_pivot = (s.checked_mul(pivot.0)?.checked_add(u.checked_mul(w.0)?)?, g);
            let killed = (w.1 / g)
                .checked_mul(pivot.0)?
                .checked_sub((pivot.1 / g).checked_mul(w.0)?)?;
            acc = acc.gcd(&killed);
            pivot = new_pivot;
            if acc != 0 {
                pivot.0 = pivot.0.rem_euclid(acc);
            }
        }
        if pivot.1 < 0 {
            pivot = (-pivot.0, -pivot.1);
        }
        let big_c = pivot.1;
        let big_a = acc.abs();
        if big_c == 0 || big_a == 0 || big_a % big_c != 0 || pivot.0 % big_c != 0 {
            return None;
        }
        let a = big_a / big_c;
        let b = (pivot.0 / big_c).rem_euclid(a);
        Some(QuadIdeal { c: big_c, a, b })
    }
}

/// `(g, s, u)` with `s*a + u*b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut u0, mut u1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (u0, u1) = (u1, u0 - q * u1);
    }
    if r0 < 0 {
        (-r0, -s0, -u0)
    } else {
        (r0, s0, u0)
    }
}

/// Order data for `Q[x]/(f)` with `f` a monic quadratic: the order `Z[omega]`
/// and the expression `theta = t0 + u*omega` of the root of `f`.
pub fn order_of_quadratic(c0: i128, c1: i128) -> Result<(QuadOrder, i128, i128)> {
    let df = c1 * c1 - 4 * c0;
    if df == 0 || arith::exact_sqrt_i128(df).is_some() {
        return Err(Error::InvalidArgument(
            "quadratic polynomial is reducible".into(),
        ));
    }
    let (s, d) = arith::squarefree_decomposition(df);
    let ord = QuadOrder::new(d)?;
    let (t0, u) = if ord.t == 1 {
        ((-c1 - s) / 2, s)
    } else {
        (-c1 / 2, s / 2)
    };
    debug_assert_eq!(
        ord.norm((t0, u)),
        c0,
        "theta must satisfy its own minimal polynomial"
    );
    Ok((ord, t0, u))
}
