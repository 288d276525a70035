//! Continued fractions of √D and a complete solver for `x² − Dy² = n`.
//!
//! Two exact strategies are used. When the orbit bound on `|y|` is small
//! every `y` up to it is tested. Otherwise every primitive class is located
//! through the continued fraction of `(z + √D)/|m|` for the square roots `z`
//! of `D` modulo `|m|` (Lagrange, Matthews, Mollin), with `n = f²m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intcore;
use crate::localanalysis;
use crate::quadring::check_discriminant;
use crate::symbols::RationalPlace;
use crate::verdict::{UnsolvableReason, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub a0: u64,
    pub period: Vec<u64>,
    /// `(P_k, Q_k)` with `α_k = (P_k + √D)/Q_k`, for `k = 0..=period.len()`.
    pub pq_states: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellFundamental {
    pub x1: BigInt,
    pub y1: BigInt,
    pub unit_norm: i8,
}

impl PellFundamental {
    /// The smallest unit of norm +1 greater than one.
    pub fn plus_unit(&self, d: i64) -> (BigInt, BigInt) {
        if self.unit_norm == 1 {
            (self.x1.clone(), self.y1.clone())
        } else {
            let d = BigInt::from(d);
            (
                &self.x1 * &self.x1 + &d * &self.y1 * &self.y1,
                BigInt::from(2) * &self.x1 * &self.y1,
            )
        }
    }
}

pub fn cf_expansion(d: i64) -> Result<CFExpansion> {
    check_discriminant(d)?;
    let a0 = d.sqrt();
    let (mut p, mut q, mut a) = (0i64, 1i64, a0);
    let mut states = vec![(p, q)];
    let mut period = Vec::new();
    loop {
        p = a * q - p;
        q = (d - p * p) / q;
        a = (a0 + p) / q;
        states.push((p, q));
        period.push(a as u64);
        if q == 1 {
            break;
        }
    }
    Ok(CFExpansion {
        a0: a0 as u64,
        period,
        pq_states: states,
    })
}

/// Continued fraction of √D and the fundamental solution of `x² − Dy² = ±1`.
pub fn cf_fundamental(d: i64) -> Result<(CFExpansion, PellFundamental)> {
    let cf = cf_expansion(d)?;
    let l = cf.period.len();
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(cf.a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &a in &cf.period[..l - 1] {
        let a = BigInt::from(a);
        let np = &a * &p + &p_prev;
        let nq = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
    let unit_norm = if l % 2 == 0 { 1 } else { -1 };
    debug_assert_eq!(&p * &p - BigInt::from(d) * &q * &q, BigInt::from(unit_norm));
    Ok((
        cf,
        PellFundamental {
            x1: p,
            y1: q,
            unit_norm,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveConfig {
    /// Multiplies the orbit bound on `|y|` for the direct scan.
    pub bound_mult: u64,
    /// Largest scaled bound handled by direct scan; above it the class search runs.
    pub naive_limit: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            bound_mult: 1,
            naive_limit: 200_000,
        }
    }
}

/// Largest `|y|` of an orbit representative (Nagell), from `ε⁺ = X + Y√D`:
/// `y² ≤ n(X − 1)/(2D)` for `n > 0` and `y² ≤ |n|(X + 1)/(2D)` for `n < 0`.
pub fn orbit_y_bound(d: i64, n: i64, ex: &BigInt) -> BigInt {
    let shifted = if n > 0 { ex - 1 } else { ex + 1 };
    let q: BigInt = BigInt::from(n.unsigned_abs()) * shifted / BigInt::from(2 * d);
    q.sqrt()
}

fn isqrt_exact(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = (v as u128).sqrt();
    (r * r == v as u128).then_some(r as i128)
}

fn scan(d: i64, n: i64, ymax: u64, primitive_only: bool, first_only: bool) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for y in 0..=ymax {
        let t = n as i128 + d as i128 * (y as i128) * (y as i128);
        if let Some(x) = isqrt_exact(t) {
            if primitive_only && (x as u128).gcd(&(y as u128)) != 1 {
                continue;
            }
            out.push((BigInt::from(x), BigInt::from(y)));
            if first_only {
                break;
            }
        }
    }
    out
}

/// Moves `x + y√D` along its orbit under `ε⁺` to the member of least `|y|`,
/// then fixes signs so that `y ≥ 0`.
fn minimize_y(d: i64, mut x: BigInt, mut y: BigInt, ex: &BigInt, ey: &BigInt) -> (BigInt, BigInt) {
    let d = BigInt::from(d);
    loop {
        let up_y = &x * ey + &y * ex;
        let down_y = &y * ex - &x * ey;
        if up_y.abs() < y.abs() {
            let nx = &x * ex + &d * &y * ey;
            x = nx;
            y = up_y;
        } else if down_y.abs() < y.abs() {
            let nx = &x * ex - &d * &y * ey;
            x = nx;
            y = down_y;
        } else {
            break;
        }
    }
    if y.is_negative() || (y.is_zero() && x.is_negative()) {
        (-x, -y)
    } else {
        (x, y)
    }
}

fn sqrt_roots_mod(d: i64, m: i64) -> Result<Vec<i64>> {
    if m > 50_000_000 {
        return Err(Error::Overflow(format!("modulus {m} for the class search")));
    }
    let dm = d.rem_euclid(m) as i128;
    let m128 = m as i128;
    Ok((-(m - 1) / 2..=m / 2)
        .filter(|&z| (z as i128 * z as i128).rem_euclid(m128) == dm)
        .collect())
}

fn floor_quotient(p: i64, q: i64, s: i64) -> i64 {
    if q > 0 {
        Integer::div_floor(&(p + s), &q)
    } else {
        -(Integer::div_floor(&(p + s), &(-q)) + 1)
    }
}

/// The primitive class attached to the root `z`, if any, as `x + y√D` of norm `m`.
fn class_from_root(
    d: i64,
    m: i64,
    z: i64,
    fund: &PellFundamental,
) -> Result<Option<(BigInt, BigInt)>> {
    let am = m.abs();
    let s = d.sqrt();
    let (mut p, mut q) = (z, am);
    let mut partials: Vec<i64> = Vec::new();
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut stop_at: Option<usize> = None;
    let big_d = BigInt::from(d);
    let mut i = 0usize;
    loop {
        if i >= 1 && q.abs() == 1 {
            // G_{i-1} + B_{i-1}√D has norm ±m
            let (mut g2, mut g1) = (BigInt::from(-z), BigInt::from(am));
            let (mut b2, mut b1) = (BigInt::one(), BigInt::zero());
            for &a in &partials {
                let a = BigInt::from(a);
                let g = &a * &g1 + &g2;
                let b = &a * &b1 + &b2;
                g2 = std::mem::replace(&mut g1, g);
                b2 = std::mem::replace(&mut b1, b);
            }
            let norm = &g1 * &g1 - &big_d * &b1 * &b1;
            if norm == BigInt::from(m) {
                return Ok(Some((g1, b1)));
            }
            if norm != BigInt::from(-m) {
                return Err(Error::Precondition(format!(
                    "continued fraction identity failed for D = {d}, m = {m}, z = {z}"
                )));
            }
            if fund.unit_norm == -1 {
                let x = &g1 * &fund.x1 + &big_d * &b1 * &fund.y1;
                let y = &g1 * &fund.y1 + &b1 * &fund.x1;
                return Ok(Some((x, y)));
            }
        }
        if let Some(&j) = seen.get(&(p, q)) {
            if stop_at.is_none() {
                stop_at = Some(i + (i - j));
            }
        } else {
            seen.insert((p, q), i);
        }
        if stop_at.is_some_and(|e| i >= e) {
            return Ok(None);
        }
        let a = floor_quotient(p, q, s);
        partials.push(a);
        let np = a * q - p;
        let nq = (d - np * np) / q;
        debug_assert_eq!((d - np * np) % q, 0);
        p = np;
        q = nq;
        i += 1;
    }
}

/// One representative of least `|y|` for each primitive class of `x² − Dy² = m`.
pub fn primitive_classes(d: i64, m: i64, fund: &PellFundamental) -> Result<Vec<(BigInt, BigInt)>> {
    let (ex, ey) = fund.plus_unit(d);
    let mut out = Vec::new();
    match m {
        0 => return Err(Error::Zero),
        1 => out.push((BigInt::one(), BigInt::zero())),
        -1 => {
            if fund.unit_norm == -1 {
                out.push((fund.x1.clone(), fund.y1.clone()));
            }
        }
        _ => {
            for z in sqrt_roots_mod(d, m.abs())? {
                if let Some((x, y)) = class_from_root(d, m, z, fund)? {
                    out.push(minimize_y(d, x, y, &ex, &ey));
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    out.dedup();
    Ok(out)
}

fn square_divisors(n: i64) -> Result<Vec<i64>> {
    let f = intcore::factor_i64(n)?.prime_powers()?;
    let mut divs = vec![1i64];
    for (p, e) in f {
        let mut next = Vec::new();
        for &base in &divs {
            let mut pk = 1i64;
            for _ in 0..=e / 2 {
                next.push(base * pk);
                pk *= p as i64;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Representatives of least `|y|` of every solution class of `x² − Dy² = n`, found
/// by the continued-fraction class search.
pub fn class_representatives(d: i64, n: i64) -> Result<Vec<(BigInt, BigInt)>> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let (_, fund) = cf_fundamental(d)?;
    let mut out = Vec::new();
    for f in square_divisors(n)? {
        let m = n / (f * f);
        for (x, y) in primitive_classes(d, m, &fund)? {
            out.push((x * f, y * f));
        }
    }
    out.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    Ok(out)
}

pub fn solve(d: i64, n: i64) -> Result<Verdict> {
    solve_with(d, n, &SolveConfig::default())
}

/// Decides `x² − Dy² = n`; the witness has least `|y|` and then `x > 0`.
pub fn solve_with(d: i64, n: i64, config: &SolveConfig) -> Result<Verdict> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let (_, fund) = cf_fundamental(d)?;
    let (ex, _) = fund.plus_unit(d);
    let ybound = orbit_y_bound(d, n, &ex) * BigInt::from(config.bound_mult.max(1));
    let found = match ybound.to_u64().filter(|&b| b <= config.naive_limit) {
        Some(b) => scan(d, n, b, false, true).into_iter().next(),
        None => class_representatives(d, n)?.into_iter().next(),
    };
    if let Some((x, y)) = found {
        return Ok(Verdict::solvable(x.abs(), y, "oracle"));
    }
    for place in candidate_bad_places(d, n)? {
        if let RationalPlace::Finite(l) = place {
            if !localanalysis::local_solvable(d, n, l)? {
                return Ok(Verdict::unsolvable(
                    UnsolvableReason::LocalObstruction(place),
                    "oracle",
                ));
            }
        }
    }
    let reason = if ybound.to_u64().is_some_and(|b| b <= config.naive_limit) {
        UnsolvableReason::OrbitBoundExhausted { y_bound: ybound }
    } else {
        UnsolvableReason::ClassSearchExhausted
    };
    Ok(Verdict::unsolvable(reason, "oracle"))
}

fn candidate_bad_places(d: i64, n: i64) -> Result<Vec<RationalPlace>> {
    let mut ls: Vec<u64> = vec![2];
    for v in [d, n] {
        ls.extend(intcore::factor_i64(v)?.prime_powers()?.into_iter().map(|(p, _)| p));
    }
    ls.sort();
    ls.dedup();
    Ok(ls.into_iter().map(RationalPlace::Finite).collect())
}

/// The primitive solution with least `y ≥ 0` (and `x > 0`), if one exists.
pub fn min_primitive_solution(d: i64, n: i64) -> Result<Option<(BigInt, BigInt)>> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let (_, fund) = cf_fundamental(d)?;
    let (ex, _) = fund.plus_unit(d);
    let bound = orbit_y_bound(d, n, &ex);
    let found = match bound.to_u64().filter(|&b| b <= SolveConfig::default().naive_limit) {
        Some(b) => scan(d, n, b, true, true).into_iter().next(),
        None => primitive_classes(d, n, &fund)?.into_iter().next(),
    };
    Ok(found.map(|(x, y)| (x.abs(), y)))
}
