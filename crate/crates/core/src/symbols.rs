//! Residue symbols over ℚ and the quadratic Hilbert symbol at rational places.

use std::fmt;
use std::ops::{Mul, MulAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intcore::{self, Factorization};
use crate::quadring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    One,
}

impl SymbolValue {
    pub fn from_sign(positive: bool) -> Self {
        if positive {
            SymbolValue::One
        } else {
            SymbolValue::MinusOne
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::One => 1,
        }
    }

    pub fn from_i8(v: i8) -> Self {
        match v.signum() {
            -1 => SymbolValue::MinusOne,
            0 => SymbolValue::Zero,
            _ => SymbolValue::One,
        }
    }

    pub fn is_one(self) -> bool {
        self == SymbolValue::One
    }

    pub fn pow(self, e: u32) -> Self {
        match self {
            SymbolValue::MinusOne if e % 2 == 0 => SymbolValue::One,
            SymbolValue::Zero if e == 0 => SymbolValue::One,
            other => other,
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_i8(self.to_i8() * rhs.to_i8())
    }
}

impl MulAssign for SymbolValue {
    fn mul_assign(&mut self, rhs: SymbolValue) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for SymbolValue {
    fn product<I: Iterator<Item = SymbolValue>>(iter: I) -> Self {
        iter.fold(SymbolValue::One, |a, b| a * b)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}

/// Binary Jacobi on machine words; `m` odd and positive (unchecked).
pub(crate) fn jacobi_u64(a: u64, m: u64) -> i8 {
    debug_assert!(m % 2 == 1);
    let mut a = a % m;
    let mut m = m;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

pub(crate) fn jacobi_i(a: i64, m: u64) -> i8 {
    jacobi_u64(intcore::rem_i64(a, m), m)
}

fn jacobi_big(a: &BigInt, m: &BigUint) -> i8 {
    let mut a = a.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
    let mut m = m.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let m8 = (&m % 8u32).to_u32().unwrap();
        if z % 2 == 1 && (m8 == 3 || m8 == 5) {
            t = -t;
        }
        if (&a % 4u32).to_u32() == Some(3) && m8 % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        a %= &m;
    }
    if m.is_one() {
        t
    } else {
        0
    }
}

/// The Jacobi symbol `(a/m)` for odd positive `m`; zero when `gcd(a, m) > 1`.
pub fn jacobi(a: &BigInt, m: &BigInt) -> Result<SymbolValue> {
    if !m.is_positive() || m.is_even() {
        return Err(Error::BadModulus(m.clone()));
    }
    let v = match (m.to_u64(), a.mod_floor(m).to_u64()) {
        (Some(ms), Some(ar)) => jacobi_u64(ar, ms),
        _ => jacobi_big(a, m.magnitude()),
    };
    Ok(SymbolValue::from_i8(v))
}

/// Machine-word form of [`jacobi`].
pub fn jacobi_i64(a: i64, m: i64) -> Result<SymbolValue> {
    if m <= 0 || m % 2 == 0 {
        return Err(Error::BadModulus(BigInt::from(m)));
    }
    Ok(SymbolValue::from_i8(jacobi_i(a, m as u64)))
}

fn check_quartic_prime(p: u64) -> Result<()> {
    if !intcore::is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("{p} is not 1 mod 4")));
    }
    Ok(())
}

/// Rational quartic residue symbol `(a/p)₄` by Euler's criterion.
pub fn quartic_residue(a: &BigInt, p: u64) -> Result<SymbolValue> {
    check_quartic_prime(p)?;
    let ar = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if jacobi_u64(ar, p) != 1 {
        return Err(Error::Undefined(format!("({a}/{p}) is not +1")));
    }
    let e = intcore::pow_mod(ar, (p - 1) / 4, p);
    match e {
        1 => Ok(SymbolValue::One),
        e if e == p - 1 => Ok(SymbolValue::MinusOne),
        _ => unreachable!("Euler criterion gave {e} mod {p}"),
    }
}

pub fn quartic_residue_i64(a: i64, p: u64) -> Result<SymbolValue> {
    quartic_residue(&BigInt::from(a), p)
}

/// `(2/d)₄` as the product of `(2/p)₄^e` over the primes of `d`, all `≡ 1 (mod 8)`.
pub fn quartic_2_of_d(d: &Factorization) -> Result<SymbolValue> {
    if d.sign() < 0 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    let mut acc = SymbolValue::One;
    for (p, e) in d.prime_powers()? {
        if p % 8 != 1 {
            return Err(Error::Precondition(format!("prime {p} is not 1 mod 8")));
        }
        acc *= quartic_residue_i64(2, p)?.pow(e);
    }
    Ok(acc)
}

/// `(p/q)₄(q/p)₄` through the rational formula
/// `(-1)^((p-1)/4) · ((ad - bc)/p)` with `p = a² + b²`, `q = c² + d²`,
/// `a, c` odd and `b, d` even, all positive.
pub fn burde_product(p: u64, q: u64) -> Result<SymbolValue> {
    check_quartic_prime(p)?;
    check_quartic_prime(q)?;
    if p == q {
        return Err(Error::Precondition("p and q must differ".into()));
    }
    if jacobi_u64(q % p, p) != 1 {
        return Err(Error::Undefined(format!("({q}/{p}) is not +1")));
    }
    let (a, b) = quadring::two_squares_prime(p)?;
    let (c, d) = quadring::two_squares_prime(q)?;
    let cross = a as i128 * d as i128 - b as i128 * c as i128;
    let r = cross.rem_euclid(p as i128) as u64;
    let sign = if ((p - 1) / 4) % 2 == 0 { 1 } else { -1 };
    Ok(SymbolValue::from_i8(sign * jacobi_u64(r, p)))
}

/// A place of ℚ: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPlace {
    Infinite,
    Finite(u64),
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPlace::Infinite => write!(f, "inf"),
            RationalPlace::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `(valuation, unit)` with `r = p^v · unit` up to squares of units:
/// the returned integer is `num·den` with all `p` removed, which lies in the
/// same square class as the true unit part.
fn split_at(r: &BigRational, p: u64) -> (i64, BigInt) {
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let vn = intcore::valuation(&num, p) as i64;
    let vd = intcore::valuation(&den, p) as i64;
    let pp = BigInt::from(p);
    num /= pp.pow(vn as u32);
    den /= pp.pow(vd as u32);
    (vn - vd, num * den)
}

fn eps2(u: u64) -> u64 {
    ((u - 1) / 2) & 1
}

fn omega2(u: u64) -> u64 {
    ((u * u - 1) / 8) & 1
}

/// Local Hilbert symbol from `(valuation, unit)` data; `u` and `w` are units at `p`.
pub(crate) fn hilbert_from_parts(alpha: i64, u: &BigInt, beta: i64, w: &BigInt, p: u64) -> i8 {
    if p == 2 {
        let u8_ = u.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        let w8 = w.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        let a = (alpha.rem_euclid(2)) as u64;
        let b = (beta.rem_euclid(2)) as u64;
        let e = eps2(u8_) * eps2(w8) + a * omega2(w8) + b * omega2(u8_);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1i8;
        if alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 && p % 4 == 3 {
            s = -s;
        }
        let pb = BigInt::from(p);
        if beta.rem_euclid(2) == 1 {
            s *= jacobi_u64(u.mod_floor(&pb).to_u64().unwrap(), p);
        }
        if alpha.rem_euclid(2) == 1 {
            s *= jacobi_u64(w.mod_floor(&pb).to_u64().unwrap(), p);
        }
        s
    }
}

/// The quadratic Hilbert symbol `(a, b)` over `ℚ_place`.
pub fn hilbert_q(a: &BigRational, b: &BigRational, place: RationalPlace) -> Result<SymbolValue> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero);
    }
    match place {
        RationalPlace::Infinite => Ok(SymbolValue::from_sign(
            !(a.is_negative() && b.is_negative()),
        )),
        RationalPlace::Finite(p) => {
            if !intcore::is_prime_u64(p) {
                return Err(Error::NotPrime(BigInt::from(p)));
            }
            let (alpha, u) = split_at(a, p);
            let (beta, w) = split_at(b, p);
            Ok(SymbolValue::from_i8(hilbert_from_parts(alpha, &u, beta, &w, p)))
        }
    }
}

pub fn hilbert_q_int(a: &BigInt, b: &BigInt, place: RationalPlace) -> Result<SymbolValue> {
    hilbert_q(
        &BigRational::from_integer(a.clone()),
        &BigRational::from_integer(b.clone()),
        place,
    )
}

pub fn hilbert_q_i64(a: i64, b: i64, place: RationalPlace) -> Result<SymbolValue> {
    hilbert_q_int(&BigInt::from(a), &BigInt::from(b), place)
}

/// The places where `(a, b)` can be nontrivial: the real place, 2, and primes of `ab`.
pub fn relevant_places(a: &BigInt, b: &BigInt) -> Result<Vec<RationalPlace>> {
    let mut places = vec![RationalPlace::Infinite, RationalPlace::Finite(2)];
    for x in [a, b] {
        for (p, _) in intcore::factor(x)?.prime_powers()? {
            if p != 2 {
                places.push(RationalPlace::Finite(p));
            }
        }
    }
    places.sort();
    places.dedup();
    Ok(places)
}
