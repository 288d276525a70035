//! Local computations for `E = ℚ(√D)`: solvability of `x² − Dy² = n` over
//! `ℤ_l`, 2-adic square classes, Hilbert symbols over the completions `E_v`,
//! the θ-character at the place over 2, and splitting of θ at other places.

pub(crate) mod two_adic;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intcore;
use crate::quadring::{check_discriminant, Family, QuadOrderInfo, ThetaData};
use crate::symbols::{hilbert_q, hilbert_q_int, jacobi_i, RationalPlace, SymbolValue};

/// `l`-adic digits carried by the square root of `D` at a split place.
pub const ROOT_PRECISION: u32 = 96;

/// `(D₀, f)` with `D = f²·D₀` and `D₀` squarefree.
pub fn squarefree_part(d: i64) -> Result<(i64, i64)> {
    let fac = intcore::factor_i64(d)?;
    let (mut d0, mut f) = (fac.sign() as i64, 1i64);
    for (p, e) in fac.prime_powers()? {
        let p = p as i64;
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            d0 *= p;
        }
    }
    Ok((d0, f))
}

fn bigr(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_valuation(r: &BigRational, l: u64) -> i64 {
    intcore::valuation(r.numer(), l) as i64 - intcore::valuation(r.denom(), l) as i64
}

/// Residue mod `l` of a rational with `v_l = 0`.
fn unit_residue(r: &BigRational, l: u64) -> u64 {
    let m = BigInt::from(l);
    let num = r.numer().mod_floor(&m);
    let den = r.denom().mod_floor(&m);
    let inv = intcore::mod_inverse(&den, &m).expect("unit denominator");
    (num * inv).mod_floor(&m).to_u64().unwrap()
}

/// Strips `l`: returns `r / l^v` for `v = v_l(r)`.
fn unit_part(r: &BigRational, l: u64) -> BigRational {
    let v = rat_valuation(r, l);
    let lp = BigRational::from_integer(BigInt::from(l).pow(v.unsigned_abs() as u32));
    if v >= 0 {
        r / lp
    } else {
        r * lp
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// `E_v = ℚ_l`, with `√D ↦ root` (an `l`-adic square root of `D` mod `l^ROOT_PRECISION`).
    Split { root: BigInt },
    Inert,
    Ramified,
}

/// A finite place of `E = ℚ(√D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place {
    pub l: u64,
    pub kind: PlaceKind,
    pub d: i64,
    d0: i64,
    f: i64,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PlaceKind::Split { root } => {
                let m = BigInt::from(self.l).pow(3);
                write!(f, "v|{} (√D ≡ {} mod {}^3)", self.l, root.mod_floor(&m), self.l)
            }
            PlaceKind::Inert => write!(f, "v|{} inert", self.l),
            PlaceKind::Ramified => write!(f, "v|{} ramified", self.l),
        }
    }
}

impl Place {
    /// The places of `E` over the rational prime `l` (two when `l` splits in `E`).
    pub fn over(d: i64, l: u64) -> Result<Vec<Place>> {
        check_discriminant(d)?;
        if !intcore::is_prime_u64(l) {
            return Err(Error::NotPrime(BigInt::from(l)));
        }
        let (d0, f) = squarefree_part(d)?;
        let mk = |kind| Place { l, kind, d, d0, f };
        let split = if l == 2 {
            d0.rem_euclid(8) == 1
        } else {
            jacobi_i(d0, l) == 1
        };
        if split {
            let r0 = if l == 2 {
                intcore::sqrt_2adic(&BigInt::from(d0), ROOT_PRECISION).unwrap()
            } else {
                intcore::hensel_sqrt(&BigInt::from(d0), l, ROOT_PRECISION).unwrap()
            };
            let m = BigInt::from(l).pow(ROOT_PRECISION);
            let root = (r0 * f).mod_floor(&m);
            let neg = (-&root).mod_floor(&m);
            return Ok(vec![mk(PlaceKind::Split { root }), mk(PlaceKind::Split { root: neg })]);
        }
        let inert = if l == 2 {
            d0.rem_euclid(8) == 5
        } else {
            jacobi_i(d0, l) == -1
        };
        Ok(vec![mk(if inert {
            PlaceKind::Inert
        } else {
            PlaceKind::Ramified
        })])
    }

    /// The unique place over `l`; fails when `l` splits.
    pub fn unique_over(d: i64, l: u64) -> Result<Place> {
        let mut v = Place::over(d, l)?;
        if v.len() != 1 {
            return Err(Error::Precondition(format!("{l} splits in ℚ(√{d})")));
        }
        Ok(v.remove(0))
    }

    pub fn squarefree_kernel(&self) -> i64 {
        self.d0
    }
}

/// An element `x + y√D` of `E`, used also as an approximation of an element of `E_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadElem {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        QuadElem { x, y }
    }

    pub fn from_ints(x: &BigInt, y: &BigInt) -> Self {
        QuadElem {
            x: BigRational::from_integer(x.clone()),
            y: BigRational::from_integer(y.clone()),
        }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        QuadElem {
            x: bigr(x),
            y: bigr(y),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn norm(&self, d: i64) -> BigRational {
        &self.x * &self.x - bigr(d) * &self.y * &self.y
    }

    pub fn mul(&self, other: &QuadElem, d: i64) -> QuadElem {
        QuadElem {
            x: &self.x * &other.x + bigr(d) * &self.y * &other.y,
            y: &self.x * &other.y + &self.y * &other.x,
        }
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem {
            x: self.x.clone(),
            y: -self.y.clone(),
        }
    }

    /// Integer coordinates `(X, Y)` of `c²·self` in the `√D` basis, for the least suitable `c`.
    fn integral(&self) -> (BigInt, BigInt) {
        let c = self.x.denom().lcm(self.y.denom());
        let c2 = BigRational::from_integer(&c * &c);
        let x = &self.x * &c2;
        let y = &self.y * &c2;
        (x.to_integer(), y.to_integer())
    }
}

/// Hilbert symbol over the completion `E_v` of `α` and `β`.
pub fn hilbert_ev(alpha: &QuadElem, beta: &QuadElem, place: &Place) -> Result<SymbolValue> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Zero);
    }
    let l = place.l;
    match &place.kind {
        PlaceKind::Split { root } => {
            let img = |e: &QuadElem| -> Result<BigInt> {
                let (x, y) = e.integral();
                let nv = intcore::valuation(&(&x * &x - BigInt::from(place.d) * &y * &y), l);
                if nv + 4 > ROOT_PRECISION {
                    return Err(Error::Precision(format!(
                        "valuation {nv} at {l} exceeds the embedding precision"
                    )));
                }
                let m = BigInt::from(l).pow(ROOT_PRECISION);
                Ok((x + y * root).mod_floor(&m))
            };
            hilbert_q_int(&img(alpha)?, &img(beta)?, RationalPlace::Finite(l))
        }
        _ if l == 2 => {
            let eng = two_adic::field(place.d0)?;
            let (ax, ay) = alpha.integral();
            let (bx, by) = beta.integral();
            let f = BigInt::from(place.f);
            let s = eng.hilbert((&ax, &(ay * &f)), (&bx, &(by * &f)))?;
            Ok(SymbolValue::from_i8(s))
        }
        PlaceKind::Inert => {
            let na = alpha.norm(place.d);
            let nb = beta.norm(place.d);
            let a = rat_valuation(&na, l) / 2;
            let b = rat_valuation(&nb, l) / 2;
            let la = jacobi_i(unit_residue(&unit_part(&na, l), l) as i64, l);
            let lb = jacobi_i(unit_residue(&unit_part(&nb, l), l) as i64, l);
            let s = (if b.rem_euclid(2) == 1 { la } else { 1 })
                * (if a.rem_euclid(2) == 1 { lb } else { 1 });
            Ok(SymbolValue::from_i8(s))
        }
        PlaceKind::Ramified => {
            let (va, ua) = ramified_parts(alpha, place);
            let (vb, ub) = ramified_parts(beta, place);
            // (−1)^{ab} u_α^b u_β^{−a} in the residue field
            let mut r: i64 = 1;
            let lm = l as i64;
            if (va * vb).rem_euclid(2) == 1 {
                r = lm - 1;
            }
            if vb.rem_euclid(2) == 1 {
                r = (r * ua as i64) % lm;
            }
            if va.rem_euclid(2) == 1 {
                r = (r * ub as i64) % lm;
            }
            Ok(SymbolValue::from_i8(jacobi_i(r, l)))
        }
    }
}

/// `(v_π(α), residue of α/π^v)` at an odd ramified place, with `π = √D₀`.
fn ramified_parts(alpha: &QuadElem, place: &Place) -> (i64, u64) {
    let l = place.l;
    let x = alpha.x.clone();
    let y = &alpha.y * bigr(place.f);
    let c = unit_residue(&unit_part(&bigr(place.d0), l), l);
    let c_inv = intcore::mod_inverse(&BigInt::from(c), &BigInt::from(l))
        .unwrap()
        .to_u64()
        .unwrap();
    let pow = |base: u64, e: i64| intcore::pow_mod(base, e.unsigned_abs(), l);
    let vx = (!x.is_zero()).then(|| rat_valuation(&x, l));
    let vy = (!y.is_zero()).then(|| rat_valuation(&y, l));
    match (vx, vy) {
        (Some(kx), Some(ky)) if kx <= ky => {
            let res = unit_residue(&unit_part(&x, l), l);
            (2 * kx, intcore::mul_mod(res, pow(c_inv, kx.rem_euclid(l as i64 - 1)), l))
        }
        (Some(kx), None) => {
            let res = unit_residue(&unit_part(&x, l), l);
            (2 * kx, intcore::mul_mod(res, pow(c_inv, kx.rem_euclid(l as i64 - 1)), l))
        }
        (_, Some(ky)) => {
            let res = unit_residue(&unit_part(&y, l), l);
            (2 * ky + 1, intcore::mul_mod(res, pow(c_inv, ky.rem_euclid(l as i64 - 1)), l))
        }
        (None, None) => unreachable!("nonzero element"),
    }
}

/// A point of `x² − Dy² = n` modulo `l^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalPoint {
    pub l: u64,
    pub precision: u32,
    pub x: BigInt,
    pub y: BigInt,
    /// The residues approximate a genuine `ℤ_l` point.
    pub liftable: bool,
}

impl LocalPoint {
    pub fn element(&self) -> QuadElem {
        QuadElem::from_ints(&self.x, &self.y)
    }

    pub fn satisfies(&self, d: i64, n: i64) -> bool {
        let m = BigInt::from(self.l).pow(self.precision);
        (&self.x * &self.x - BigInt::from(d) * &self.y * &self.y - n).mod_floor(&m) == BigInt::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sq {
    Yes,
    No,
    Unknown,
}

fn is_unit_square(unit: &BigInt, l: u64) -> bool {
    if l == 2 {
        unit.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        jacobi_i(unit.mod_floor(&BigInt::from(l)).to_i64().unwrap(), l) == 1
    }
}

/// Whether `t(w') = a + b·w'²` is a square in `ℤ_l` for every `w' ≡ w (mod l^j)`.
fn square_status(a: &BigInt, b: &BigInt, w: &BigInt, j: u32, l: u64) -> Sq {
    let t = a + b * w * w;
    let known = intcore::valuation(b, l) + j + u32::from(l == 2 && j >= 1);
    if t.is_zero() {
        return Sq::Unknown;
    }
    let v = intcore::valuation(&t, l);
    let need = v + if l == 2 { 3 } else { 1 };
    if v >= known || need > known {
        return Sq::Unknown;
    }
    if v % 2 == 1 {
        return Sq::No;
    }
    let unit = t / BigInt::from(l).pow(v);
    if is_unit_square(&unit, l) {
        Sq::Yes
    } else {
        Sq::No
    }
}

/// Exact `l`-adic square root of the integer `t`, modulo `l^k`.
fn sqrt_zl(t: &BigInt, l: u64, k: u32) -> Option<BigInt> {
    if t.is_zero() {
        return Some(BigInt::zero());
    }
    let v = intcore::valuation(t, l);
    if v % 2 == 1 {
        return None;
    }
    let unit = t / BigInt::from(l).pow(v);
    let r = if l == 2 {
        intcore::sqrt_2adic(&unit, k)?
    } else {
        intcore::hensel_sqrt(&unit, l, k)?
    };
    Some((r * BigInt::from(l).pow(v / 2)).mod_floor(&BigInt::from(l).pow(k)))
}

/// Whether the rational `r` is the square of an element of `ℤ_l`.
fn is_zl_square(r: &BigRational, l: u64) -> bool {
    let v = rat_valuation(r, l);
    if v < 0 || v % 2 == 1 {
        return false;
    }
    let u = unit_part(r, l);
    let prod = u.numer() * u.denom();
    is_unit_square(&prod, l)
}

struct TreeResult {
    leaves: Vec<(BigInt, u32)>,
    undetermined: bool,
}

/// Explores residues `w mod l^j` for which `a + b·w²` is a square in `ℤ_l`.
/// With `sample_depth = None` it stops at the first success.
fn square_tree(a: &BigInt, b: &BigInt, l: u64, cap: u32, sample_depth: Option<u32>) -> TreeResult {
    let mut stack = vec![(BigInt::zero(), 0u32, false)];
    let mut out = TreeResult {
        leaves: Vec::new(),
        undetermined: false,
    };
    while let Some((w, j, known_yes)) = stack.pop() {
        let status = if known_yes {
            Sq::Yes
        } else {
            square_status(a, b, &w, j, l)
        };
        let expand = match status {
            Sq::No => false,
            Sq::Yes => match sample_depth {
                None => {
                    out.leaves.push((w.clone(), j));
                    return out;
                }
                Some(depth) if j >= depth => {
                    out.leaves.push((w.clone(), j));
                    false
                }
                Some(_) => true,
            },
            Sq::Unknown => {
                if j >= cap {
                    out.undetermined = true;
                    false
                } else {
                    true
                }
            }
        };
        if expand {
            let step = BigInt::from(l).pow(j);
            for c in (0..l).rev() {
                stack.push((&w + &step * c, j + 1, status == Sq::Yes));
            }
        }
    }
    out
}

fn search_cap(d: i64, n: i64, l: u64) -> u32 {
    intcore::valuation_i64(4 * d, l) + intcore::valuation_i64(n, l) + 8
}

/// Whether `x² − Dy² = n` has a solution with `x, y ∈ ℤ_l`.
pub fn local_solvable(d: i64, n: i64, l: u64) -> Result<bool> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    if !intcore::is_prime_u64(l) {
        return Err(Error::NotPrime(BigInt::from(l)));
    }
    let vd = intcore::valuation_i64(d, l);
    if l != 2 && vd == 0 {
        return Ok(jacobi_i(d, l) == 1 || intcore::valuation_i64(n, l) % 2 == 0);
    }
    if l != 2 && vd == 1 {
        return Ok(hilbert_q_int(&BigInt::from(n), &BigInt::from(d), RationalPlace::Finite(l))?.is_one());
    }
    Ok(local_point(d, n, l)?.is_some())
}

/// One `ℤ_l` point of `x² − Dy² = n`, or `None` when there is none.
pub fn local_point(d: i64, n: i64, l: u64) -> Result<Option<LocalPoint>> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let cap = search_cap(d, n, l);
    let k = cap + 4;
    let neg_n_over_d = BigRational::new(BigInt::from(-n), BigInt::from(d));
    if is_zl_square(&neg_n_over_d, l) {
        // x = 0, y² = −n/D
        let m = BigInt::from(l).pow(k);
        let u = unit_part(&neg_n_over_d, l);
        let v = rat_valuation(&neg_n_over_d, l) as u32;
        let den_inv = intcore::mod_inverse(u.denom(), &m).unwrap();
        let unit = (u.numer() * den_inv).mod_floor(&m);
        let y = sqrt_zl(&(unit * BigInt::from(l).pow(v)), l, k).unwrap();
        return Ok(Some(LocalPoint {
            l,
            precision: k,
            x: BigInt::zero(),
            y,
            liftable: true,
        }));
    }
    let (a, b) = (BigInt::from(n), BigInt::from(d));
    let res = square_tree(&a, &b, l, cap, None);
    if let Some((w, _)) = res.leaves.first() {
        let t = &a + &b * w * w;
        let x = sqrt_zl(&t, l, k).expect("determined square");
        return Ok(Some(LocalPoint {
            l,
            precision: k,
            x,
            y: w.clone(),
            liftable: true,
        }));
    }
    if res.undetermined {
        return Err(Error::Precision(format!(
            "x² − {d}y² = {n} undecided at {l} with {cap} digits"
        )));
    }
    Ok(None)
}

/// A spread of `ℤ_l` points: every residue of `y` modulo `l^depth` over which
/// `n + Dy²` is a square, with both signs of `x`; when `l ∤ D` the same is done
/// with the roles of `x` and `y` exchanged.
pub fn local_points(d: i64, n: i64, l: u64, depth: u32) -> Result<Vec<LocalPoint>> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let cap = search_cap(d, n, l).max(depth);
    let k = cap + 4;
    let m = BigInt::from(l).pow(k);
    let mut pts = Vec::new();
    if let Some(p) = local_point(d, n, l)? {
        if p.x.is_zero() {
            pts.push(p);
        }
    } else {
        return Ok(pts);
    }
    let mut push = |x: BigInt, y: BigInt| {
        for sx in [x.clone(), (-x).mod_floor(&m)] {
            let p = LocalPoint {
                l,
                precision: k,
                x: sx,
                y: y.clone(),
                liftable: true,
            };
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    };
    let (a, b) = (BigInt::from(n), BigInt::from(d));
    for (w, _) in square_tree(&a, &b, l, cap, Some(depth)).leaves {
        let t = &a + &b * &w * &w;
        if let Some(x) = sqrt_zl(&t, l, k) {
            push(x, w);
        }
    }
    if d % l as i64 != 0 {
        // (Dy)² = Dx² − Dn
        let (a2, b2) = (BigInt::from(-d) * n, BigInt::from(d));
        let dinv = intcore::mod_inverse(&b2, &m).unwrap();
        for (w, _) in square_tree(&a2, &b2, l, cap, Some(depth)).leaves {
            let t = &a2 + &b2 * &w * &w;
            if let Some(u) = sqrt_zl(&t, l, k) {
                let y = (u * &dinv).mod_floor(&m);
                push(w, y);
            }
        }
    }
    Ok(pts)
}

/// Valuation parity of a nonzero 2-adic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A class of `ℚ₂*/(ℚ₂*)²`, named by its representative in `{±1, ±2, ±5, ±10}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SquareClass2(i64);

impl SquareClass2 {
    pub fn representative(self) -> i64 {
        self.0
    }
}

pub fn square_class_2(u: &BigRational) -> Result<(Parity, SquareClass2)> {
    if u.is_zero() {
        return Err(Error::Zero);
    }
    let v = rat_valuation(u, 2);
    let up = unit_part(u, 2);
    let r8 = (up.numer() * up.denom()).mod_floor(&BigInt::from(8)).to_i64().unwrap();
    let unit = match r8 {
        1 => 1,
        3 => -5,
        5 => 5,
        _ => -1,
    };
    let (parity, rep) = if v.rem_euclid(2) == 0 {
        (Parity::Even, unit)
    } else {
        (Parity::Odd, 2 * unit)
    };
    Ok((parity, SquareClass2(rep)))
}

/// Values of `ξ ↦ (ξ, θ)_v` at the place over 2, on elements of norm `1, −1, 2, −2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacterTable {
    pub chi_1: SymbolValue,
    pub chi_neg1: SymbolValue,
    pub chi_2: SymbolValue,
    pub chi_neg2: SymbolValue,
}

impl CharacterTable {
    pub fn value(&self, c: i64) -> Option<SymbolValue> {
        match c {
            1 => Some(self.chi_1),
            -1 => Some(self.chi_neg1),
            2 => Some(self.chi_2),
            -2 => Some(self.chi_neg2),
            _ => None,
        }
    }

    pub fn as_array(&self) -> [i8; 4] {
        [
            self.chi_1.to_i8(),
            self.chi_neg1.to_i8(),
            self.chi_2.to_i8(),
            self.chi_neg2.to_i8(),
        ]
    }
}

pub fn theta_element(theta: &ThetaData) -> QuadElem {
    QuadElem::from_ints(&theta.x0, &(-&theta.y0))
}

/// The common value of `(ξ, θ)_v` over sampled `ξ ∈ E_v` with `N(ξ) = c`.
/// Fails if two samples disagree or no element of norm `c` is found.
pub fn theta_symbol_on_norm(d: i64, theta: &ThetaData, c: i64) -> Result<SymbolValue> {
    let place = Place::unique_over(d, 2)?;
    let th = theta_element(theta);
    let mut value: Option<SymbolValue> = None;
    for k in 0..4u32 {
        let scale = 4i64.pow(k);
        let pts = local_points(d, c * scale, 2, 6)?;
        let den = BigRational::from_integer(BigInt::from(2).pow(k));
        for p in pts {
            let xi = QuadElem::new(
                BigRational::from_integer(p.x.clone()) / &den,
                BigRational::from_integer(p.y.clone()) / &den,
            );
            let s = hilbert_ev(&xi, &th, &place)?;
            match value {
                None => value = Some(s),
                Some(prev) if prev != s => {
                    return Err(Error::Precondition(format!(
                        "(ξ, θ) depends on ξ among elements of norm {c} for D = {d}"
                    )))
                }
                _ => {}
            }
        }
    }
    value.ok_or_else(|| Error::NotFound(format!("no 2-adic element of norm {c} in ℚ₂(√{d})")))
}

/// The θ-character at the place over 2 for `D = 2d`, computed with the 2-adic engine.
pub fn theta_character(d: i64, theta: &ThetaData) -> Result<CharacterTable> {
    match QuadOrderInfo::new(d)?.family {
        Family::TwoD { .. } => {}
        _ => return Err(Error::OutsideFamily(d)),
    }
    if theta.d != d || !theta.is_valid() {
        return Err(Error::Precondition("θ does not belong to D".into()));
    }
    Ok(CharacterTable {
        chi_1: theta_symbol_on_norm(d, theta, 1)?,
        chi_neg1: theta_symbol_on_norm(d, theta, -1)?,
        chi_2: theta_symbol_on_norm(d, theta, 2)?,
        chi_neg2: theta_symbol_on_norm(d, theta, -2)?,
    })
}

/// Whether the place `v` splits in `E(√θ)`, i.e. the unit part of θ is a square
/// in the residue field. Places over `2·ℓ` are rejected.
pub fn splits_in_theta(d: i64, theta: &ThetaData, place: &Place) -> Result<bool> {
    let l = place.l;
    if l == 2 || l == theta.ell || place.d != d {
        return Err(Error::Precondition(format!("place over {l} may ramify in θ")));
    }
    let th = theta_element(theta);
    match &place.kind {
        PlaceKind::Split { root } => {
            let m = BigInt::from(l).pow(ROOT_PRECISION);
            let img = (&theta.x0 - &theta.y0 * root).mod_floor(&m);
            let v = intcore::valuation(&img, l);
            if v % 2 == 1 {
                return Err(Error::Precondition(format!("θ has odd valuation at {place}")));
            }
            Ok(is_unit_square(&(img / BigInt::from(l).pow(v)), l))
        }
        PlaceKind::Inert => {
            let nt = th.norm(d);
            if (rat_valuation(&nt, l) / 2) % 2 == 1 {
                return Err(Error::Precondition(format!("θ has odd valuation at {place}")));
            }
            Ok(jacobi_i(unit_residue(&unit_part(&nt, l), l) as i64, l) == 1)
        }
        PlaceKind::Ramified => {
            let (v, u) = ramified_parts(&th, place);
            if v % 2 == 1 {
                return Err(Error::Precondition(format!("θ has odd valuation at {place}")));
            }
            Ok(jacobi_i(u as i64, l) == 1)
        }
    }
}

/// Hilbert symbol over `ℚ_l` of rationals; re-exported for callers working with places.
pub fn hilbert_rational(a: &BigRational, b: &BigRational, l: u64) -> Result<SymbolValue> {
    hilbert_q(a, b, RationalPlace::Finite(l))
}

#[cfg(test)]
mod tests;
