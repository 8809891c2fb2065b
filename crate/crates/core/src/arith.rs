//! Machine-word integer helpers: primality, sieves, modular powers, square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=bound` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(bound: usize) -> Vec<u32> {
    let mut spf = vec![0u32; bound + 1];
    for i in 2..=bound {
        if spf[i] == 0 {
            let mut j = i;
            while j <= bound {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary integers. Values beyond `u64` go through a
/// big-integer Miller–Rabin with the first twenty prime bases.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigInt::from(1);
    let two = BigInt::from(2);
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    for &a in primes_up_to(71).iter() {
        let a = BigInt::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        let mut composite = true;
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                composite = false;
                break;
            }
        }
        if composite {
            return false;
        }
    }
    true
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_u128(n as u128) as i128;
    (r * r == n).then_some(r)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) == 1`.
pub fn inv_mod_i128(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// Factorization of `|n|` by trial division up to `limit`. The second
/// component is the unfactored cofactor (1 when fully factored).
pub fn trial_factor(n: &BigInt, limit: u64) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut rest = n.abs();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut d = 2u64;
    while d <= limit {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let one = BigInt::from(1);
    if rest > one && BigInt::from(d) * BigInt::from(d) > rest {
        out.push((rest.clone(), 1));
        rest = one;
    }
    (out, rest)
}

/// Writes a nonzero `n` as `s^2 * d` with `d` squarefree (sign carried by `d`).
pub fn squarefree_decomposition(n: i128) -> (i128, i128) {
    assert!(n != 0, "squarefree decomposition of zero");
    let mut d = n.signum();
    let mut s = 1i128;
    let mut rest = n.abs();
    let mut q = 2i128;
    while q * q <= rest {
        let mut e = 0;
        while rest % q == 0 {
            rest /= q;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= q;
        }
        if e % 2 == 1 {
            d *= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    (s, d * rest)
}

pub fn euler_phi_prime_power(p: u64, m: u32) -> u64 {
    if m == 0 {
        1
    } else {
        (p - 1) * p.pow(m - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_miller_rabin_agree() {
        let primes = primes_up_to(2000);
        for n in 0..2000u64 {
            assert_eq!(primes.binary_search(&n).is_ok(), is_prime_u64(n), "n = {n}");
        }
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
        assert!(!is_prime(&(BigInt::from(18446744073709551557u64) * 3)));
        // 2^89 - 1 is a Mersenne prime
        assert!(is_prime(&((BigInt::from(1) << 89) - 1)));
    }

    #[test]
    fn tonelli_shanks_brute_force() {
        for &p in &[3u64, 5, 13, 17, 41, 97, 257] {
            for a in 0..p {
                let brute = (0..p).find(|x| x * x % p == a);
                let r = sqrt_mod_prime(a, p);
                assert_eq!(brute.is_some(), r.is_some(), "a={a} p={p}");
                if let Some(r) = r {
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decomposition(-20), (2, -5));
        assert_eq!(squarefree_decomposition(12), (2, 3));
        assert_eq!(squarefree_decomposition(-3), (1, -3));
        assert_eq!(squarefree_decomposition(5), (1, 5));
    }

    #[test]
    fn trial_factor_cofactor() {
        let (f, rest) = trial_factor(&BigInt::from(1552), 100);
        assert_eq!(rest, BigInt::from(1));
        assert_eq!(f, vec![(BigInt::from(2), 4), (BigInt::from(97), 1)]);
    }
}
