//! Arithmetic of ℚ(√D) and the order ℤ[√D] at the level the criteria need:
//! splitting of rational primes, sums of two squares, `x² + 2y²`, and the
//! auxiliary solution of `x² − Dy² = ℓz²` that defines the quadratic twist θ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intcore::{self, Factorization};
use crate::pellsolver;
use crate::symbols::{self, jacobi_i};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// How the rational prime `l` behaves in ℚ(√D).
///
/// At `l = 2` the answer is read off `D mod 8` directly (ramified unless
/// `D ≡ 1, 5 mod 8`).
pub fn splitting_type(d: i64, l: u64) -> SplittingType {
    if l == 2 {
        return match d.rem_euclid(8) {
            1 => SplittingType::Split,
            5 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        };
    }
    match jacobi_i(d, l) {
        1 => SplittingType::Split,
        -1 => SplittingType::Inert,
        _ => SplittingType::Ramified,
    }
}

pub fn check_discriminant(d: i64) -> Result<()> {
    if d <= 1 || d.sqrt() * d.sqrt() == d {
        return Err(Error::BadDiscriminant(BigInt::from(d)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `D = pq` with distinct primes `p, q ≡ 1 (mod 4)`.
    Pq { p: u64, q: u64 },
    /// `D = 2d` with `d` a squarefree product of primes `≡ 1 (mod 8)`.
    TwoD { d: u64 },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadOrderInfo {
    pub d: i64,
    pub discriminant: i64,
    pub family: Family,
}

impl QuadOrderInfo {
    pub fn new(d: i64) -> Result<Self> {
        check_discriminant(d)?;
        let f = intcore::factor_i64(d)?.prime_powers()?;
        let family = match f.as_slice() {
            [(p, 1), (q, 1)] if *p != 2 && p % 4 == 1 && q % 4 == 1 => Family::Pq { p: *p, q: *q },
            [(2, 1), rest @ ..]
                if !rest.is_empty() && rest.iter().all(|&(p, e)| e == 1 && p % 8 == 1) =>
            {
                Family::TwoD { d: (d / 2) as u64 }
            }
            _ => Family::Other,
        };
        Ok(QuadOrderInfo {
            d,
            discriminant: 4 * d,
            family,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSquaresRep {
    pub r: u64,
    pub s: u64,
}

impl fmt::Display for TwoSquaresRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}²+{}²", self.r, self.s)
    }
}

/// `p = a² + b²` for a prime `p ≡ 1 (mod 4)`, with `a` odd and `b` even (Cornacchia).
pub fn two_squares_prime(p: u64) -> Result<(u64, u64)> {
    if p % 4 != 1 || !intcore::is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not a prime 1 mod 4")));
    }
    let mut r0 = p;
    let mut r1 = intcore::sqrt_mod_u64(-1, p).expect("-1 is a residue");
    let bound = p.sqrt();
    while r1 > bound {
        let t = r0 % r1;
        r0 = r1;
        r1 = t;
    }
    let a = r1;
    let b = (p - a * a).sqrt();
    debug_assert_eq!(a * a + b * b, p);
    Ok(if a % 2 == 1 { (a, b) } else { (b, a) })
}

type Gauss = (i128, i128);

fn gmul(x: Gauss, y: Gauss) -> Gauss {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

fn gpow(x: Gauss, e: u32) -> Gauss {
    (0..e).fold((1, 0), |acc, _| gmul(acc, x))
}

fn normalize_rep(m: u64, a: i128, b: i128) -> TwoSquaresRep {
    let (a, b) = (a.unsigned_abs() as u64, b.unsigned_abs() as u64);
    if m % 2 == 0 {
        TwoSquaresRep {
            r: a.max(b),
            s: a.min(b),
        }
    } else if a % 2 == 1 {
        TwoSquaresRep { r: a, s: b }
    } else {
        TwoSquaresRep { r: b, s: a }
    }
}

/// All primitive representations `m = r² + s²` with `r, s > 0`, up to order and sign.
///
/// Pairs are normalized as `r ≥ s` when `m` is even (both odd) and as
/// `(odd, even)` when `m` is odd.
pub fn two_squares_all(m: u64) -> Vec<TwoSquaresRep> {
    if m < 2 || m % 4 == 0 {
        return Vec::new();
    }
    let f = intcore::factor_i64(m as i64)
        .and_then(|f| f.prime_powers())
        .expect("positive input factors");
    let mut base: Gauss = (1, 0);
    let mut odd: Vec<(Gauss, u32)> = Vec::new();
    for (p, e) in f {
        match (p % 4, p) {
            (_, 2) => base = (1, 1),
            (1, _) => {
                let (a, b) = two_squares_prime(p).expect("prime 1 mod 4");
                odd.push(((a as i128, b as i128), e));
            }
            _ => return Vec::new(),
        }
    }
    let mut reps = Vec::new();
    // fixing the first prime's orientation only drops conjugates
    let choices = if odd.is_empty() { 1 } else { 1u64 << (odd.len() - 1) };
    for mask in 0..choices {
        let mut z = base;
        for (i, &((a, b), e)) in odd.iter().enumerate() {
            let flip = i > 0 && (mask >> (i - 1)) & 1 == 1;
            let pi = if flip { (a, -b) } else { (a, b) };
            z = gmul(z, gpow(pi, e));
        }
        if z.0 != 0 && z.1 != 0 {
            reps.push(normalize_rep(m, z.0, z.1));
        }
    }
    reps.sort();
    reps.dedup();
    reps
}

/// One primitive solution of `a² + 2b² = m` with `a, b ≥ 0`, choosing the smallest `b`.
pub fn repr_x2_plus_2y2(m: u64) -> Option<(u64, u64)> {
    if m == 0 {
        return None;
    }
    let mut b = 0u64;
    while 2 * b * b <= m {
        let rest = m - 2 * b * b;
        let a = rest.sqrt();
        if a * a == rest && a.gcd(&b) == 1 {
            return Some((a, b));
        }
        b += 1;
    }
    None
}

/// A primitive solution of `x₀² − Dy₀² = ℓz₀²`. The element `θ = x₀ − y₀√D`
/// has norm `ℓz₀²`, and `E(√θ)` is the twist used by the criteria.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaData {
    pub x0: BigInt,
    pub y0: BigInt,
    pub z0: BigInt,
    pub ell: u64,
    pub d: i64,
}

impl ThetaData {
    pub fn new(d: i64, ell: u64, x0: BigInt, y0: BigInt, z0: BigInt) -> Result<Self> {
        let t = ThetaData { x0, y0, z0, ell, d };
        if !t.is_valid() {
            return Err(Error::Precondition(format!(
                "({}, {}, {}) is not a primitive solution for D = {d}, ell = {ell}",
                t.x0, t.y0, t.z0
            )));
        }
        Ok(t)
    }

    pub fn is_valid(&self) -> bool {
        let lhs = &self.x0 * &self.x0 - BigInt::from(self.d) * &self.y0 * &self.y0;
        lhs == BigInt::from(self.ell) * &self.z0 * &self.z0
            && self.x0.is_positive()
            && self.x0.gcd(&self.y0).is_one()
    }
}

/// Smallest `z₀`, then smallest `y₀ > 0`, with a primitive solution of `x² − Dy² = ℓz₀²`.
pub fn find_theta_data(d: i64, ell: u64) -> Result<ThetaData> {
    check_discriminant(d)?;
    // the conic x² − Dy² = ℓz² has a rational point iff (D, ℓ)_v = 1 everywhere
    let (bd, bl) = (BigInt::from(d), BigInt::from(ell));
    for place in symbols::relevant_places(&bd, &bl)? {
        if !symbols::hilbert_q_int(&bd, &bl, place)?.is_one() {
            return Err(Error::NotFound(format!("x² − {d}y² = {ell}z² fails at {place}")));
        }
    }
    const Z_LIMIT: i64 = 2000;
    for z0 in 1..=Z_LIMIT {
        let rhs = (ell as i64)
            .checked_mul(z0 * z0)
            .ok_or_else(|| Error::Overflow(format!("{ell}·{z0}²")))?;
        if let Some((x, y)) = pellsolver::min_primitive_solution(d, rhs)? {
            if y.is_zero() {
                continue;
            }
            return ThetaData::new(d, ell, x.abs(), y.abs(), BigInt::from(z0));
        }
    }
    Err(Error::NotFound(format!(
        "no primitive x² − {d}y² = {ell}z² with z ≤ {Z_LIMIT}"
    )))
}

/// Factorization of `d` for the `2d` family, validating the family shape.
pub fn two_d_factors(d: u64) -> Result<Factorization> {
    let f = intcore::factor_i64(d as i64)?;
    let ok = f.is_squarefree() && f.prime_powers()?.iter().all(|&(p, _)| p % 8 == 1);
    if !ok || d == 1 {
        return Err(Error::OutsideFamily(2 * d as i64));
    }
    Ok(f)
}

/// Whether `2d` has a primitive representation `r² + s²` with `r, s ≡ ±3 (mod 8)`.
pub fn has_pm3_representation(two_d: u64) -> bool {
    two_squares_all(two_d)
        .iter()
        .any(|t| matches!(t.r % 8, 3 | 5) && matches!(t.s % 8, 3 | 5))
}
