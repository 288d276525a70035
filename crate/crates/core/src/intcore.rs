//! Exact integer services: primality, factorization, modular square roots.
//!
//! Everything that can grow is arbitrary precision; the `u64` entry points
//! are fast paths used by the symbol and local code where inputs are known
//! to be at desk scale.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[inline]
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

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn rem_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for every `u64`: the first twelve prime bases suffice below 3.3e24.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES[..12]
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality for arbitrary size. Exact for `n < 2^64`; beyond that a strong
/// probable-prime test over the 25 prime bases below 100, which is
/// deterministic (fixed bases) and far beyond the desk-scale inputs used here.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    SMALL_PRIMES
        .iter()
        .all(|&a| strong_probable_prime_big(n, &BigUint::from(a)))
}

/// `sign · ∏ p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    sign: i8,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Prime powers as machine integers; fails if some prime exceeds `u64`.
    pub fn prime_powers(&self) -> Result<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| {
                p.to_u64()
                    .map(|p| (p, *e))
                    .ok_or_else(|| Error::Overflow(p.to_string()))
            })
            .collect()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn value(&self) -> BigInt {
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, mag)
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's cycle variant of Pollard rho on a composite odd `n`.
fn rho_u64(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut g = BigUint::one();
        while g.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => BigUint::from(rho_u64(small)),
        None => rho_big(&n),
    };
    let rest = &n / &d;
    split_into(d, out);
    split_into(rest, out);
}

/// Trial division by small primes, then Pollard rho on what remains.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u64;
    while p < 1000 {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(m, &mut primes);
    primes.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

pub fn factor_i64(n: i64) -> Result<Factorization> {
    factor(&BigInt::from(n))
}

/// Exponent of `p` in `n`; `u32::MAX` for `n = 0`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_i64(n: i64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// `Some(r)` with `r ≥ 0, r² = n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square_u128(n: u128) -> Option<u128> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli–Shanks for a prime `p` (unchecked). Returns the root in `[0, (p-1)/2]`.
pub fn sqrt_mod_u64(a: i64, p: u64) -> Option<u64> {
    let a = rem_i64(a, p);
    if p == 2 {
        return Some(a);
    }
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Square root of `a` modulo an odd prime `p`, normalized to `0 ≤ r ≤ (p-1)/2`.
pub fn sqrt_mod(a: &BigInt, p: &BigUint) -> Result<Option<BigUint>> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::NotPrime(BigInt::from(p.clone())));
    }
    if let Some(ps) = p.to_u64() {
        let ar = a.mod_floor(&BigInt::from(ps)).to_i64().unwrap_or(0);
        return Ok(sqrt_mod_u64(ar, ps).map(BigUint::from));
    }
    let pi = BigInt::from(p.clone());
    let a = a.mod_floor(&pi).to_biguint().unwrap_or_default();
    if a.is_zero() {
        return Ok(Some(a));
    }
    let one = BigUint::one();
    let half = (p - &one) >> 1;
    if a.modpow(&half, p) != one {
        return Ok(None);
    }
    let pm1 = p - &one;
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    let mut z = BigUint::from(2u32);
    while z.modpow(&half, p) != pm1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while t != one {
        let mut i = 0u64;
        let mut tt = t.clone();
        while tt != one {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    let other = p - &r;
    Ok(Some(r.min(other)))
}

/// Lifts a root of `x² ≡ a (mod p)` (odd `p`, `a` a unit) to a root modulo `p^k`.
pub fn hensel_sqrt(a: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let a_mod_p = a.mod_floor(&BigInt::from(p)).to_i64()?;
    let r0 = sqrt_mod_u64(a_mod_p, p)?;
    if r0 == 0 {
        return None;
    }
    let mut r = BigInt::from(r0);
    let mut modulus = BigInt::from(p);
    let target = BigInt::from(p).pow(k);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        // Newton step r ← r - (r² - a)/(2r)
        let two_r = (&r * 2u32).mod_floor(&modulus);
        let inv = mod_inverse(&two_r, &modulus)?;
        let f = (&r * &r - a).mod_floor(&modulus);
        r = (&r - f * inv).mod_floor(&modulus);
    }
    Some(r)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Square root modulo 2^64 of a 2-adic unit `u ≡ 1 (mod 8)`; the root is `≡ 1 (mod 4)`.
pub fn sqrt_2adic_unit(u: u64) -> Option<u64> {
    if u & 7 != 1 {
        return None;
    }
    // inverse square root y with u·y² ≡ 1, fixed one bit at a time
    let mut y: u64 = 1;
    for k in 3..64 {
        if (u.wrapping_mul(y).wrapping_mul(y) >> k) & 1 == 1 {
            y = y.wrapping_add(1u64 << (k - 1));
        }
    }
    let mut r = u.wrapping_mul(y);
    if r & 3 != 1 {
        r = r.wrapping_neg();
    }
    Some(r)
}

/// Square root modulo `2^k` of an odd `u ≡ 1 (mod 8)`, normalized to `≡ 1 (mod 4)`.
pub fn sqrt_2adic(u: &BigInt, k: u32) -> Option<BigInt> {
    if u.mod_floor(&BigInt::from(8)) != BigInt::one() {
        return None;
    }
    let mut r = BigInt::one();
    for i in 3..k.max(3) {
        // r² ≡ u mod 2^i; fix bit i
        let m = BigInt::one() << (i + 1);
        if (&r * &r - u).mod_floor(&m) != BigInt::zero() {
            r += BigInt::one() << (i - 1);
        }
    }
    let m = BigInt::one() << k.max(3);
    let mut r = r.mod_floor(&m);
    if r.mod_floor(&BigInt::from(4)) != BigInt::one() {
        r = (&m - r).mod_floor(&m);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(221));
        assert!(!is_prime_u64(1394));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn primality_matches_trial_division_up_to_a_million() {
        for n in 1..=1_000_000u64 {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn big_primality() {
        // 2^127 - 1 is prime; 2^128 + 1 = 59649589127497217 · 5704689200685129054721
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m127));
        let f7 = (BigUint::one() << 128) + 1u32;
        assert!(!is_prime(&f7));
    }

    #[test]
    fn factor_examples() {
        let f = factor_i64(221).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(f.prime_powers().unwrap(), vec![(13, 1), (17, 1)]);
        let f = factor_i64(-56).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.prime_powers().unwrap(), vec![(2, 3), (7, 1)]);
        let f = factor_i64(1394).unwrap();
        assert_eq!(f.prime_powers().unwrap(), vec![(2, 1), (17, 1), (41, 1)]);
        assert_eq!(factor_i64(0), Err(Error::Zero));
    }

    #[test]
    fn factor_large_semiprime() {
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let f = factor(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.factors().len(), 2);
        let g = &n * BigInt::from(1_000_000_009u64);
        let f = factor(&g).unwrap();
        assert_eq!(f.value(), g);
        assert_eq!(f.factors().len(), 3);
    }

    #[test]
    fn sqrt_mod_examples() {
        let p = |v: u64| BigUint::from(v);
        assert_eq!(sqrt_mod(&BigInt::from(2), &p(17)).unwrap(), Some(p(6)));
        assert_eq!(sqrt_mod(&BigInt::from(-1), &p(13)).unwrap(), Some(p(5)));
        assert_eq!(sqrt_mod(&BigInt::from(3), &p(7)).unwrap(), None);
        assert!(sqrt_mod(&BigInt::from(3), &p(15)).is_err());
    }

    #[test]
    fn sqrt_mod_exhaustive_small_primes() {
        for p in (3..400u64).filter(|&p| is_prime_u64(p)) {
            for a in 0..p {
                let brute = (0..=(p - 1) / 2).find(|r| r * r % p == a);
                assert_eq!(sqrt_mod_u64(a as i64, p), brute, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn big_sqrt_mod() {
        let p = (BigUint::one() << 127) - 1u32;
        let a = BigInt::from(123456789u64).pow(2);
        let r = sqrt_mod(&a, &p).unwrap().unwrap();
        assert_eq!((&r * &r) % &p, BigUint::from(123456789u64).pow(2) % &p);
    }

    #[test]
    fn hensel_and_two_adic_roots() {
        let r = hensel_sqrt(&BigInt::from(2), 7, 10).unwrap();
        let m = BigInt::from(7).pow(10);
        assert_eq!((&r * &r - BigInt::from(2)).mod_floor(&m), BigInt::zero());
        for u in (1u64..2000).step_by(8) {
            let r = sqrt_2adic_unit(u).unwrap();
            assert_eq!(r.wrapping_mul(r), u, "u={u}");
        }
        assert_eq!(sqrt_2adic_unit(5), None);
        for u in (1i64..3000).step_by(8) {
            let r = sqrt_2adic(&BigInt::from(u), 90).unwrap();
            let m = BigInt::one() << 90;
            assert_eq!((&r * &r - u).mod_floor(&m), BigInt::zero(), "u={u}");
        }
    }
}
