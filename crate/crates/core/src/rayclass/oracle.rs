//! Brute-force orders of `J^p / P^(p^m)` for `Q` and quadratic fields.
//!
//! Every integral ideal `a` coprime to `p` with `N(a) <= X` is written as
//! `a = alpha * R_j` for a reference ideal `R_j` of its ordinary class (found
//! by solving the norm form for a generator of `a * conj(R_j)`). Two ideals
//! lie in the same ray class iff they share `j` and their `alpha` agree in
//! `((O/p^m)^* x signs) / image(units)`. The class count is the number of
//! distinct `(j, coset)` pairs; it is trusted only if it does not change
//! when `X` is doubled.

use std::collections::HashSet;

use rayon::prelude::*;

use super::quadratic::{order_of_quadratic, Elt, LocalSplitting, QuadIdeal, QuadOrder};
use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{NumberField, PrimeIdeal};

/// Continued fraction cap for fundamental units.
const UNIT_STEPS: usize = 20_000;
/// Largest `|(O/p^m) x signs|` the coset table will allocate.
const MAX_GROUP: u64 = 1 << 24;
const CHUNK: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum QuadPrime {
    Split { p: u64, r: u64 },
    Ramified { p: u64, r: u64 },
    Inert { p: u64 },
}

#[derive(Clone, Debug)]
enum Setting {
    Rational {
        p: u64,
    },
    Quadratic {
        ord: QuadOrder,
        eps: Option<Elt>,
        units: Vec<Elt>,
        prime: QuadPrime,
        ideal: QuadIdeal,
    },
}

/// Everything the oracle needs about `(K, p)`, computed once per chain.
#[derive(Clone, Debug)]
pub struct OracleSetup {
    setting: Setting,
    p: u64,
}

fn to_i128(c: &num_bigint::BigInt) -> Result<i128> {
    i128::try_from(c)
        .map_err(|_| Error::UnsupportedField("coefficient too large for the oracle".into()))
}

impl OracleSetup {
    pub fn new(field: &NumberField, prime: &PrimeIdeal) -> Result<Self> {
        let p = prime.p;
        match field.degree() {
            1 => Ok(OracleSetup {
                setting: Setting::Rational { p },
                p,
            }),
            2 => {
                let c0 = to_i128(&field.poly().coeff(0))?;
                let c1 = to_i128(&field.poly().coeff(1))?;
                let (ord, t0, u) = order_of_quadratic(c0, c1)?;
                let pi = p as i128;
                let u_inv = arith::inv_mod_i128(u, pi).ok_or(Error::NotPMaximal { p })?;
                let root_omega = |gen: &PrimeIdeal| -> u64 {
                    // generator is x - r_theta
                    let c = &gen.generator.coeffs()[0];
                    let c = i128::try_from(c).expect("coefficient below p");
                    let r_theta = (-c).rem_euclid(pi);
                    ((r_theta - t0).rem_euclid(pi) * u_inv).rem_euclid(pi) as u64
                };
                let local = ord.local_splitting(p);
                let qp = match (prime.ramification, prime.residue_degree, local) {
                    (1, 1, LocalSplitting::Split(..)) => QuadPrime::Split {
                        p,
                        r: root_omega(prime),
                    },
                    (2, 1, LocalSplitting::Ramified(_)) => QuadPrime::Ramified {
                        p,
                        r: root_omega(prime),
                    },
                    (1, 2, LocalSplitting::Inert) => QuadPrime::Inert { p },
                    _ => {
                        return Err(Error::Internal(format!(
                            "splitting of {p} from f mod p disagrees with the maximal order"
                        )))
                    }
                };
                let ideal = match qp {
                    QuadPrime::Split { r, .. } | QuadPrime::Ramified { r, .. } => {
                        ord.prime_ideal(p, r)
                    }
                    QuadPrime::Inert { .. } => QuadIdeal::rational(pi),
                };
                let eps = if ord.is_real() {
                    Some(ord.fundamental_unit(UNIT_STEPS)?)
                } else {
                    None
                };
                let units = ord.unit_generators(UNIT_STEPS)?;
                Ok(OracleSetup {
                    setting: Setting::Quadratic {
                        ord,
                        eps,
                        units,
                        prime: qp,
                        ideal,
                    },
                    p,
                })
            }
            n => Err(Error::UnsupportedField(format!(
                "ray class oracle handles degree 1 and 2 only (degree {n})"
            ))),
        }
    }

    fn sign_count(&self) -> u32 {
        match &self.setting {
            Setting::Rational { .. } => 1,
            Setting::Quadratic { ord, .. } if ord.is_real() => 2,
            Setting::Quadratic { .. } => 0,
        }
    }

    fn sign_bits(&self, g: Elt) -> u64 {
        match &self.setting {
            Setting::Rational { .. } => (g.0 < 0) as u64,
            Setting::Quadratic { ord, .. } if ord.is_real() => {
                let (a, b) = ord.signs(g);
                (!a as u64) | ((!b as u64) << 1)
            }
            Setting::Quadratic { .. } => 0,
        }
    }

    fn ring(&self, m: u32) -> Result<ResidueRing> {
        if m == 0 {
            return Ok(ResidueRing::Trivial);
        }
        let p = self.p;
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= 1 << 40)
            .ok_or_else(|| Error::UnsupportedField(format!("level {m} too large at p = {p}")))?;
        match &self.setting {
            Setting::Rational { .. } => Ok(ResidueRing::Linear { p, q, r: 0 }),
            Setting::Quadratic { ord, prime, .. } => match *prime {
                QuadPrime::Split { r, .. } => Ok(ResidueRing::Linear {
                    p,
                    q,
                    r: hensel_root(ord, r, p, q),
                }),
                QuadPrime::Ramified { r, .. } if m == 1 => Ok(ResidueRing::Linear { p, q, r }),
                QuadPrime::Ramified { .. } => Err(Error::UnsupportedField(format!(
                    "oracle supports ramified primes only up to level 1 (asked for {m})"
                ))),
                QuadPrime::Inert { .. } => Ok(ResidueRing::Inert {
                    p,
                    q,
                    t: ord.t.rem_euclid(q as i128) as u64,
                    n: ord.n.rem_euclid(q as i128) as u64,
                }),
            },
        }
    }

    fn unit_generators(&self) -> Vec<Elt> {
        match &self.setting {
            Setting::Rational { .. } => vec![(-1, 0)],
            Setting::Quadratic { units, .. } => units.clone(),
        }
    }
}

/// Root of `x^2 - t x + n` modulo `q = p^m` lifting the simple root `r` mod `p`.
fn hensel_root(ord: &QuadOrder, r: u64, p: u64, q: u64) -> u64 {
    let q = q as i128;
    let (t, n) = (ord.t, ord.n);
    let mut x = r as i128;
    let mut modulus = p as i128;
    while modulus < q {
        modulus = (modulus * modulus).min(q);
        let g = (x * x - t * x + n).rem_euclid(modulus);
        let dg = (2 * x - t).rem_euclid(modulus);
        let inv = arith::inv_mod_i128(dg, modulus).expect("simple root");
        x = (x - g * inv).rem_euclid(modulus);
    }
    debug_assert_eq!((x * x - t * x + n).rem_euclid(q), 0);
    x as u64
}

type Res = (u64, u64);

#[derive(Clone, Copy, Debug)]
enum ResidueRing {
    Trivial,
    /// `O/p^m = Z/q` with `omega -> r`.
    Linear {
        p: u64,
        q: u64,
        r: u64,
    },
    /// `O/p^m = (Z/q)[omega]/(omega^2 - t omega + n)`.
    Inert {
        p: u64,
        q: u64,
        t: u64,
        n: u64,
    },
}

fn mulq(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl ResidueRing {
    fn size(&self) -> u64 {
        match *self {
            ResidueRing::Trivial => 1,
            ResidueRing::Linear { q, .. } => q,
            ResidueRing::Inert { q, .. } => q * q,
        }
    }

    fn reduce(&self, (x, y): Elt) -> Res {
        match *self {
            ResidueRing::Trivial => (0, 0),
            ResidueRing::Linear { q, r, .. } => {
                let qi = q as i128;
                let xm = x.rem_euclid(qi) as u64;
                let ym = y.rem_euclid(qi) as u64;
                ((xm + mulq(ym, r, q)) % q, 0)
            }
            ResidueRing::Inert { q, .. } => {
                let qi = q as i128;
                (x.rem_euclid(qi) as u64, y.rem_euclid(qi) as u64)
            }
        }
    }

    fn one(&self) -> Res {
        match self {
            ResidueRing::Trivial => (0, 0),
            _ => (1, 0),
        }
    }

    fn mul(&self, a: Res, b: Res) -> Res {
        match *self {
            ResidueRing::Trivial => (0, 0),
            ResidueRing::Linear { q, .. } => (mulq(a.0, b.0, q), 0),
            ResidueRing::Inert { q, t, n, .. } => {
                let yy = mulq(a.1, b.1, q);
                let x = (mulq(a.0, b.0, q) + q - mulq(n, yy, q)) % q;
                let y = (mulq(a.0, b.1, q) + mulq(a.1, b.0, q) + mulq(t, yy, q)) % q;
                (x, y)
            }
        }
    }

    fn is_unit(&self, a: Res) -> bool {
        match *self {
            ResidueRing::Trivial => true,
            ResidueRing::Linear { p, .. } => a.0 % p != 0,
            ResidueRing::Inert { p, t, n, .. } => {
                let (x, y) = (a.0 % p, a.1 % p);
                (mulq(x, x, p) + mulq(mulq(t, x, p), y, p) + mulq(mulq(n, y, p), y, p)) % p != 0
            }
        }
    }

    /// Inverse of a rational integer coprime to `p`.
    fn inverse_rational(&self, k: i128) -> Res {
        match *self {
            ResidueRing::Trivial => (0, 0),
            ResidueRing::Linear { q, .. } | ResidueRing::Inert { q, .. } => {
                let inv = arith::inv_mod_i128(k, q as i128).expect("norm coprime to p");
                (inv as u64, 0)
            }
        }
    }

    fn index(&self, a: Res) -> u64 {
        match *self {
            ResidueRing::Trivial => 0,
            ResidueRing::Linear { .. } => a.0,
            ResidueRing::Inert { q, .. } => a.0 + q * a.1,
        }
    }

    fn element(&self, idx: u64) -> Res {
        match *self {
            ResidueRing::Trivial => (0, 0),
            ResidueRing::Linear { .. } => (idx, 0),
            ResidueRing::Inert { q, .. } => (idx % q, idx / q),
        }
    }
}

/// `G = (O/p^m)^* x {+-1}^r1` with a coset table for the unit image `H`.
struct Level {
    ring: ResidueRing,
    sign_bits: u32,
    coset: Vec<u32>,
    unit_image: usize,
}

impl Level {
    fn new(setup: &OracleSetup, m: u32) -> Result<Self> {
        let ring = setup.ring(m)?;
        let sign_bits = setup.sign_count();
        let signs = 1u64 << sign_bits;
        let total = ring
            .size()
            .checked_mul(signs)
            .filter(|&s| s <= MAX_GROUP)
            .ok_or_else(|| {
                Error::UnsupportedField(format!("level {m} residue group too large for the oracle"))
            })?;
        let gens: Vec<(Res, u64)> = setup
            .unit_generators()
            .into_iter()
            .map(|u| (ring.reduce(u), setup.sign_bits(u)))
            .collect();
        let encode = |(r, s): (Res, u64)| ring.index(r) * signs + s;
        let op = |(r1, s1): (Res, u64), (r2, s2): (Res, u64)| (ring.mul(r1, r2), s1 ^ s2);

        // closure of the unit image
        let id = (ring.one(), 0u64);
        let mut seen = HashSet::from([encode(id)]);
        let mut h = vec![id];
        let mut i = 0;
        while i < h.len() {
            for &g in &gens {
                let x = op(h[i], g);
                if seen.insert(encode(x)) {
                    h.push(x);
                }
            }
            i += 1;
        }

        let mut coset = vec![u32::MAX; total as usize];
        for idx in 0..total {
            if coset[idx as usize] != u32::MAX {
                continue;
            }
            let g = (ring.element(idx / signs), idx % signs);
            if !ring.is_unit(g.0) {
                continue;
            }
            for &x in &h {
                coset[encode(op(g, x)) as usize] = idx as u32;
            }
        }
        Ok(Level {
            ring,
            sign_bits,
            coset,
            unit_image: h.len(),
        })
    }

    fn coset_of(&self, alpha: Res, signs: u64) -> u32 {
        debug_assert!(self.ring.is_unit(alpha));
        let idx = self.ring.index(alpha) * (1u64 << self.sign_bits) + signs;
        self.coset[idx as usize]
    }
}

/// One enumerated ideal, resolved to `(reference index, generator of a * conj(R_j))`.
#[derive(Clone, Copy, Debug)]
struct Resolved {
    norm: u64,
    j: usize,
    gamma: Elt,
}

struct Reference {
    conj: QuadIdeal,
    norm: i128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelCount {
    pub m: u32,
    pub at_bound: u64,
    pub at_double: u64,
    /// Size of the unit image in `G`, for diagnostics.
    pub unit_image: usize,
}

impl LevelCount {
    pub fn saturated(&self) -> bool {
        self.at_bound == self.at_double
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub bound: u64,
    pub ideals: usize,
    /// Ideals whose class had no reference of norm prime to `p`.
    pub unresolved: usize,
    pub levels: Vec<LevelCount>,
}

impl OracleRun {
    pub fn saturated(&self) -> bool {
        self.unresolved == 0 && self.levels.iter().all(LevelCount::saturated)
    }
}

fn quad_ideals(ord: &QuadOrder, exclude: &QuadIdeal, bound: u64) -> Result<Vec<(u64, QuadIdeal)>> {
    let mut primes: Vec<(u64, QuadIdeal)> = Vec::new();
    for q in arith::primes_up_to(bound) {
        match ord.local_splitting(q) {
            LocalSplitting::Split(r1, r2) => {
                primes.push((q, ord.prime_ideal(q, r1)));
                primes.push((q, ord.prime_ideal(q, r2)));
            }
            LocalSplitting::Ramified(r) => primes.push((q, ord.prime_ideal(q, r))),
            LocalSplitting::Inert => {
                if q.checked_mul(q).is_some_and(|n| n <= bound) {
                    primes.push((q * q, QuadIdeal::rational(q as i128)));
                }
            }
        }
    }
    primes.retain(|(_, i)| i != exclude);
    primes.sort();
    let mut out = vec![(1u64, QuadIdeal::unit())];
    fn rec(
        ord: &QuadOrder,
        primes: &[(u64, QuadIdeal)],
        start: usize,
        cur: QuadIdeal,
        norm: u64,
        bound: u64,
        out: &mut Vec<(u64, QuadIdeal)>,
    ) -> Result<()> {
        for k in start..primes.len() {
            let (pn, pi) = primes[k];
            if norm.saturating_mul(pn) > bound {
                break;
            }
            let mut c = cur;
            let mut nn = norm;
            while nn.saturating_mul(pn) <= bound {
                c = ord.ideal_mul(&c, &pi)?;
                nn *= pn;
                out.push((nn, c));
                rec(ord, primes, k + 1, c, nn, bound, out)?;
            }
        }
        Ok(())
    }
    rec(ord, &primes, 0, QuadIdeal::unit(), 1, bound, &mut out)?;
    out.sort();
    Ok(out)
}

fn resolve_against(
    ord: &QuadOrder,
    eps: Option<Elt>,
    ideal: &QuadIdeal,
    refs: &[Reference],
    from: usize,
) -> Result<Option<(usize, Elt)>> {
    for (j, r) in refs.iter().enumerate().skip(from) {
        let b = ord.ideal_mul(ideal, &r.conj)?;
        if let Some(g) = ord.find_generator(&b, eps)? {
            return Ok(Some((j, g)));
        }
    }
    Ok(None)
}

/// Resolves every ideal of norm `<= bound` coprime to the prime; returns the
/// resolved list, the reference norms and the unresolved count.
fn resolve_quadratic(
    ord: &QuadOrder,
    eps: Option<Elt>,
    exclude: &QuadIdeal,
    p: u64,
    bound: u64,
) -> Result<(Vec<Resolved>, Vec<i128>, usize)> {
    let ideals = quad_ideals(ord, exclude, bound)?;
    let mut refs: Vec<Reference> = Vec::new();
    let mut resolved = Vec::with_capacity(ideals.len());
    let mut deferred = Vec::new();
    for chunk in ideals.chunks(CHUNK) {
        let known = refs.len();
        let first: Vec<Option<(usize, Elt)>> = chunk
            .par_iter()
            .map(|(_, i)| resolve_against(ord, eps, i, &refs, 0))
            .collect::<Result<_>>()?;
        for ((norm, ideal), hit) in chunk.iter().zip(first) {
            let hit = match hit {
                Some(h) => Some(h),
                None => resolve_against(ord, eps, ideal, &refs, known)?,
            };
            let hit = match hit {
                Some(h) => Some(h),
                None if norm % p != 0 => {
                    refs.push(Reference {
                        conj: ord.ideal_conj(ideal),
                        norm: *norm as i128,
                    });
                    resolve_against(ord, eps, ideal, &refs, refs.len() - 1)?
                }
                None => None,
            };
            match hit {
                Some((j, gamma)) => resolved.push(Resolved {
                    norm: *norm,
                    j,
                    gamma,
                }),
                None => deferred.push((*norm, *ideal)),
            }
        }
    }
    let mut unresolved = 0;
    for (norm, ideal) in deferred {
        match resolve_against(ord, eps, &ideal, &refs, 0)? {
            Some((j, gamma)) => resolved.push(Resolved { norm, j, gamma }),
            None => unresolved += 1,
        }
    }
    Ok((resolved, refs.iter().map(|r| r.norm).collect(), unresolved))
}

/// Counts ray classes at every requested level, at `bound` and `2 * bound`.
pub fn run(setup: &OracleSetup, levels: &[u32], bound: u64) -> Result<OracleRun> {
    if bound < 1 {
        return Err(Error::InvalidArgument(
            "enumeration bound must be positive".into(),
        ));
    }
    let double = bound
        .checked_mul(2)
        .ok_or_else(|| Error::InvalidArgument("enumeration bound too large".into()))?;
    let p = setup.p;
    let (resolved, ref_norms, unresolved) = match &setup.setting {
        Setting::Rational { p } => {
            let r: Vec<Resolved> = (1..=double)
                .filter(|n| n % p != 0)
                .map(|n| Resolved {
                    norm: n,
                    j: 0,
                    gamma: (n as i128, 0),
                })
                .collect();
            (r, vec![1i128], 0)
        }
        Setting::Quadratic {
            ord, eps, ideal, ..
        } => resolve_quadratic(ord, *eps, ideal, p, double)?,
    };

    let mut out = Vec::with_capacity(levels.len());
    for &m in levels {
        let level = Level::new(setup, m)?;
        let inv_norms: Vec<Res> = ref_norms
            .iter()
            .map(|&nr| level.ring.inverse_rational(nr))
            .collect();
        let keys: Vec<(u64, usize, u32)> = resolved
            .par_iter()
            .map(|r| {
                let alpha = level.ring.mul(level.ring.reduce(r.gamma), inv_norms[r.j]);
                (r.norm, r.j, level.coset_of(alpha, setup.sign_bits(r.gamma)))
            })
            .collect();
        let mut at_bound = HashSet::new();
        let mut at_double = HashSet::new();
        for (norm, j, c) in keys {
            if norm <= bound {
                at_bound.insert((j, c));
            }
            at_double.insert((j, c));
        }
        out.push(LevelCount {
            m,
            at_bound: at_bound.len() as u64,
            at_double: at_double.len() as u64,
            unit_image: level.unit_image,
        });
    }
    Ok(OracleRun {
        bound,
        ideals: resolved.len() + unresolved,
        unresolved,
        levels: out,
    })
}

/// Repeats [`run`] with doubling bounds until every level is saturated.
pub fn run_until_saturated(
    setup: &OracleSetup,
    levels: &[u32],
    start: u64,
    max_bound: u64,
) -> Result<OracleRun> {
    let mut bound = start.max(1);
    loop {
        let r = run(setup, levels, bound)?;
        if r.saturated() {
            return Ok(r);
        }
        if bound * 2 > max_bound {
            let worst = r
                .levels
                .iter()
                .find(|l| !l.saturated())
                .copied()
                .unwrap_or(LevelCount {
                    m: levels.first().copied().unwrap_or(0),
                    at_bound: r.levels.first().map_or(0, |l| l.at_bound),
                    at_double: r.levels.first().map_or(0, |l| l.at_double),
                    unit_image: 0,
                });
            return Err(Error::SaturationFailure {
                level: worst.m,
                bound,
                at_bound: worst.at_bound,
                at_double: worst.at_double,
            });
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::split_prime;
    use crate::poly::IntPoly;

    fn setup(c: &[i64], p: u64, which: usize) -> OracleSetup {
        let k = NumberField::new("K", IntPoly::from_i64s(c)).unwrap();
        let s = split_prime(&k, p).unwrap();
        OracleSetup::new(&k, &s.primes[which]).unwrap()
    }

    #[test]
    fn rationals_match_phi() {
        for p in [2u64, 3, 5, 7] {
            let s = setup(&[-1, 1], p, 0);
            let r = run_until_saturated(&s, &[0, 1, 2, 3], 16, 1 << 16).unwrap();
            let h: Vec<u64> = r.levels.iter().map(|l| l.at_bound).collect();
            let phi: Vec<u64> = (0..4).map(|m| arith::euler_phi_prime_power(p, m)).collect();
            assert_eq!(h, phi, "p = {p}");
        }
    }

    #[test]
    fn gaussian_split_prime() {
        // Q(i), prime over 5: units {1, i, -1, -i} inject into (Z/5)^*, so h_1 = 1
        let s = setup(&[1, 0, 1], 5, 0);
        let r = run_until_saturated(&s, &[0, 1, 2], 16, 1 << 16).unwrap();
        let h: Vec<u64> = r.levels.iter().map(|l| l.at_bound).collect();
        assert_eq!(h, vec![1, 1, 5]);
    }

    #[test]
    fn class_number_two_at_level_zero() {
        let s = setup(&[5, 0, 1], 3, 0);
        let r = run_until_saturated(&s, &[0], 16, 1 << 16).unwrap();
        assert_eq!(r.levels[0].at_bound, 2);
    }

    #[test]
    fn golden_field_narrow_classes() {
        // Q(sqrt5): N(omega) = -1, so narrow and wide class groups agree (h = 1)
        let s = setup(&[-1, -1, 1], 11, 0);
        let r = run_until_saturated(&s, &[0, 1], 16, 1 << 16).unwrap();
        assert_eq!(r.levels[0].at_bound, 1);
        // (Z/11)^* x signs / <-1, omega> : 10 * 4 / |image|
        let expected = 40 / r.levels[1].unit_image as u64;
        assert_eq!(r.levels[1].at_bound, expected);
    }
}
