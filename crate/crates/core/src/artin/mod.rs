//! The joint Artin condition for `x² − Dy² = n`: an adelic point of the norm
//! equation must have principal ideal class in `Pic(ℤ[√D])` (wide form class
//! group of discriminant `4D`) and trivial Artin symbol in `E(√θ)/E`, where the
//! latter is the product of local Hilbert symbols `(α_v, θ)_v`.

pub mod forms;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use forms::{class_group, compose, reduce, ClassGroup, FormClass};

use crate::error::{Error, Result};
use crate::intcore;
use crate::localanalysis::{self, hilbert_ev, theta_element, LocalPoint, Place, PlaceKind};
use crate::pellsolver;
use crate::quadring::{check_discriminant, find_theta_data, has_pm3_representation, Family, QuadOrderInfo, ThetaData};
use crate::symbols::{jacobi_i, quartic_residue_i64, RationalPlace, SymbolValue};
use crate::verdict::{Status, UnsolvableReason, Verdict};

/// Provenance recorded by [`joint_artin_decide`].
pub const PROVENANCE: &str = "artin-h-theta";

/// Cap on the number of ideal choices enumerated by [`class_images_of_norm`].
pub const MAX_CHOICES: usize = 1 << 12;

/// One local component of an adelic point: a point over `ℤ_l`, the local
/// ideal `[a, b + √D]` it generates (with `a` a power of `l`), the wide class of
/// that ideal, and `∏_{v|l} (α_v, θ)_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOption {
    pub l: u64,
    pub point: LocalPoint,
    pub ideal_a: BigInt,
    pub ideal_b: BigInt,
    pub class: usize,
    pub symbol: SymbolValue,
}

/// A choice of local points at the primes that matter; all other components are units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicChoice {
    pub n: i64,
    pub components: Vec<LocalOption>,
}

impl AdelicChoice {
    /// The ideal `∏ [a_l, b_l + √D]` of norm `|n|` as a form `(a, 2b, c)`.
    pub fn ideal_form(&self, d: i64) -> Result<FormClass> {
        let mut a = BigInt::one();
        let mut b = BigInt::zero();
        for c in &self.components {
            if c.ideal_a.is_one() {
                continue;
            }
            // b ≡ b_l (mod a_l), b unchanged mod a
            let inv = intcore::mod_inverse(&a, &c.ideal_a).expect("coprime prime powers");
            let t = ((&c.ideal_b - &b) * inv).mod_floor(&c.ideal_a);
            b += &a * t;
            a *= &c.ideal_a;
        }
        let (a, b) = (
            a.to_i64().ok_or_else(|| Error::Overflow("ideal norm".into()))?,
            b.to_i64().ok_or_else(|| Error::Overflow("ideal".into()))?,
        );
        if a == 1 {
            return Ok(FormClass::principal(d));
        }
        FormClass::from_ideal(d, a, b)
    }

    /// Class of the ideal in the wide class group.
    pub fn class(&self, group: &ClassGroup) -> usize {
        self.components
            .iter()
            .fold(group.identity(), |acc, c| group.mul(acc, c.class))
    }
}

/// `ψ_Θ` of the idele attached to `choice`: the product of its local symbols.
/// Real places contribute `+1` because θ is totally positive.
pub fn psi_theta(choice: &AdelicChoice) -> SymbolValue {
    choice.components.iter().map(|c| c.symbol).product()
}

/// `ℓ` for the families: `max(p, q)` for `D = pq` with `(p/q) = 1` and
/// `(p/q)₄(q/p)₄ = −1`, and `2` for `D = 2d` with `2d = r² + s²`, `r, s ≡ ±3 (mod 8)`.
pub fn family_ell(d: i64) -> Result<u64> {
    match QuadOrderInfo::new(d)?.family {
        Family::Pq { p, q } if quartic_product(p, q)? == SymbolValue::MinusOne => Ok(p.max(q)),
        Family::TwoD { .. } if has_pm3_representation(d as u64) => Ok(2),
        _ => Err(Error::OutsideFamily(d)),
    }
}

fn quartic_product(p: u64, q: u64) -> Result<SymbolValue> {
    match (quartic_residue_i64(q as i64, p), quartic_residue_i64(p as i64, q)) {
        (Ok(a), Ok(b)) => Ok(a * b),
        (Err(Error::Undefined(_)), _) | (_, Err(Error::Undefined(_))) => Ok(SymbolValue::Zero),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

static THETAS: OnceLock<Mutex<HashMap<i64, ThetaData>>> = OnceLock::new();

/// θ for a family discriminant, cached.
pub fn family_theta(d: i64) -> Result<ThetaData> {
    let cache = THETAS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&d) {
        return Ok(t.clone());
    }
    let t = find_theta_data(d, family_ell(d)?)?;
    cache.lock().unwrap().insert(d, t.clone());
    Ok(t)
}

fn primes_of(v: &BigInt) -> Result<Vec<u64>> {
    if v.is_zero() {
        return Ok(Vec::new());
    }
    Ok(intcore::factor(v)?.prime_powers()?.into_iter().map(|(p, _)| p).collect())
}

/// Primes at which a component can carry a nontrivial class or symbol:
/// 2, ℓ, and the primes of `D`, `n` and `z₀`.
pub fn artin_primes(d: i64, n: i64, theta: &ThetaData) -> Result<Vec<u64>> {
    let mut ls = vec![2, theta.ell];
    for v in [BigInt::from(d), BigInt::from(n), theta.z0.clone()] {
        ls.extend(primes_of(&v)?);
    }
    ls.sort_unstable();
    ls.dedup();
    Ok(ls)
}

/// The ideal `α·ℤ_l[√D]` of `α = x + y√D` with `N(α) = n`, as `(a, b)` with
/// `a = l^k` and `[a, b + √D]` locally equal to it up to a power of `l`.
pub fn local_ideal(n: i64, point: &LocalPoint) -> (BigInt, BigInt) {
    let l = point.l;
    let vx = intcore::valuation(&point.x, l).min(point.precision);
    let vy = intcore::valuation(&point.y, l).min(point.precision);
    let c = vx.min(vy);
    let vn = intcore::valuation_i64(n, l);
    let k = vn.saturating_sub(2 * c);
    let lc = BigInt::from(l).pow(c);
    let yp = &point.y / &lc;
    if k == 0 || intcore::valuation(&yp, l) > 0 {
        return (BigInt::one(), BigInt::zero());
    }
    let a = BigInt::from(l).pow(k);
    let xp = &point.x / &lc;
    let inv = intcore::mod_inverse(&yp, &a).expect("unit");
    (a.clone(), (xp * inv).mod_floor(&a))
}

struct Ctx {
    d: i64,
    n: i64,
    theta: ThetaData,
    group: Arc<ClassGroup>,
}

impl Ctx {
    fn option(&self, point: LocalPoint, places: &[Place]) -> Result<LocalOption> {
        let (a, b) = local_ideal(self.n, &point);
        let class = if a.is_one() {
            self.group.identity()
        } else {
            let f = FormClass::from_ideal(
                self.d,
                a.to_i64().ok_or_else(|| Error::Overflow("ideal".into()))?,
                b.to_i64().unwrap(),
            )?;
            self.group.class_index(&f)?
        };
        let th = theta_element(&self.theta);
        let alpha = point.element();
        let mut symbol = SymbolValue::One;
        for pl in places {
            symbol *= hilbert_ev(&alpha, &th, pl)?;
        }
        Ok(LocalOption {
            l: point.l,
            point,
            ideal_a: a,
            ideal_b: b,
            class,
            symbol,
        })
    }

    /// Points at a split odd prime `l ∤ D` given through `x + y√D ↦ (u₁, u₂)`, `u₁u₂ = n`.
    fn split_points(&self, l: u64) -> Result<Vec<LocalPoint>> {
        let vn = intcore::valuation_i64(self.n, l);
        let k = vn + 8;
        let m = BigInt::from(l).pow(k);
        let s = intcore::hensel_sqrt(&BigInt::from(self.d), l, k).expect("split prime");
        let nonres = (2..l).find(|&g| jacobi_i(g as i64, l) == -1).expect("odd prime");
        let two_s_inv = intcore::mod_inverse(&(&s * 2), &m).unwrap();
        let half = intcore::mod_inverse(&BigInt::from(2), &m).unwrap();
        let mut pts = Vec::new();
        for k1 in 0..=vn {
            for unit in [1u64, nonres] {
                let lk = BigInt::from(l).pow(k1);
                let u1 = &lk * unit;
                let rest = BigInt::from(self.n) / &lk;
                let u2 = (rest * intcore::mod_inverse(&BigInt::from(unit), &m).unwrap()).mod_floor(&m);
                let x = ((&u1 + &u2) * &half).mod_floor(&m);
                let y = ((&u1 - &u2) * &two_s_inv).mod_floor(&m);
                pts.push(LocalPoint {
                    l,
                    precision: k,
                    x,
                    y,
                    liftable: true,
                });
            }
        }
        Ok(pts)
    }

    fn options(&self, l: u64) -> Result<Vec<LocalOption>> {
        let places = Place::over(self.d, l)?;
        let split = matches!(places[0].kind, PlaceKind::Split { .. });
        let pts = if l == 2 {
            let depth = intcore::valuation_i64(4 * self.d, 2) + intcore::valuation_i64(self.n, 2) + 3;
            localanalysis::local_points(self.d, self.n, 2, depth)?
        } else if split && self.d % l as i64 != 0 {
            self.split_points(l)?
        } else {
            // one local ideal; the unit part of α is fixed up to sign by N(α) = n
            match localanalysis::local_point(self.d, self.n, l)? {
                Some(p) => {
                    let m = BigInt::from(l).pow(p.precision);
                    let neg = LocalPoint {
                        x: (-&p.x).mod_floor(&m),
                        y: (-&p.y).mod_floor(&m),
                        ..p.clone()
                    };
                    vec![p, neg]
                }
                None => Vec::new(),
            }
        };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in pts {
            let o = self.option(p, &places)?;
            if seen.insert((o.ideal_a.clone(), o.ideal_b.clone(), o.symbol)) {
                out.push(o);
            }
        }
        Ok(out)
    }
}

fn context(d: i64, n: i64) -> Result<Ctx> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(Ctx {
        d,
        n,
        theta: family_theta(d)?,
        group: class_group(d)?,
    })
}

/// Distinct local options at `l` (up to local ideal and symbol).
pub fn local_options(d: i64, n: i64, l: u64) -> Result<Vec<LocalOption>> {
    context(d, n)?.options(l)
}

/// Ideals of `ℤ[√D]` of norm `|n|` that come from local points, with their classes.
#[derive(Debug, Clone)]
pub struct ClassImages {
    pub entries: Vec<(AdelicChoice, FormClass)>,
    /// A prime with no `ℤ_l` point. Entries are still listed when the failure
    /// is at a prime not dividing `n`, since the ideals only see primes of `n`.
    pub local_failure: Option<u64>,
}

pub fn class_images_of_norm(d: i64, n: i64) -> Result<ClassImages> {
    let ctx = context(d, n)?;
    let mut per_prime = Vec::new();
    let mut local_failure = None;
    for l in artin_primes(d, n, &ctx.theta)? {
        let opts = ctx.options(l)?;
        if opts.is_empty() {
            local_failure.get_or_insert(l);
        }
        if n % l as i64 != 0 {
            continue;
        }
        let mut by_ideal: Vec<LocalOption> = Vec::new();
        for o in opts {
            if !by_ideal.iter().any(|p| p.ideal_a == o.ideal_a && p.ideal_b == o.ideal_b) {
                by_ideal.push(o);
            }
        }
        per_prime.push(by_ideal);
    }
    let total: usize = per_prime.iter().map(Vec::len).product();
    if total > MAX_CHOICES {
        return Err(Error::Overflow(format!("{total} ideal choices for n = {n}")));
    }
    let mut choices = vec![Vec::new()];
    for opts in &per_prime {
        let mut next = Vec::new();
        for c in &choices {
            for o in opts {
                let mut c2: Vec<LocalOption> = c.clone();
                c2.push(o.clone());
                next.push(c2);
            }
        }
        choices = next;
    }
    let mut entries = Vec::new();
    if total > 0 {
        for components in choices {
            let choice = AdelicChoice { n, components };
            let form = ctx.group.representative(choice.class(&ctx.group));
            entries.push((choice, form));
        }
    }
    Ok(ClassImages {
        entries,
        local_failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArtinOutcome {
    /// No `ℤ_l` point at this prime.
    LocalFailure(u64),
    /// Some adelic point has principal class and trivial `ψ_Θ`.
    Satisfied,
    Violated,
}

/// Whether some adelic point of `x² − Dy² = n` satisfies the Artin conditions
/// of the ring class field and of `E(√θ)` at once.
pub fn artin_condition(d: i64, n: i64) -> Result<ArtinOutcome> {
    let ctx = context(d, n)?;
    let mut reach: HashSet<(usize, SymbolValue)> = HashSet::new();
    reach.insert((ctx.group.identity(), SymbolValue::One));
    for l in artin_primes(d, n, &ctx.theta)? {
        let opts = ctx.options(l)?;
        if opts.is_empty() {
            return Ok(ArtinOutcome::LocalFailure(l));
        }
        let local: HashSet<(usize, SymbolValue)> = opts.iter().map(|o| (o.class, o.symbol)).collect();
        let mut next = HashSet::new();
        for &(c, s) in &reach {
            for &(c2, s2) in &local {
                next.insert((ctx.group.mul(c, c2), s * s2));
            }
        }
        reach = next;
    }
    Ok(if reach.contains(&(ctx.group.identity(), SymbolValue::One)) {
        ArtinOutcome::Satisfied
    } else {
        ArtinOutcome::Violated
    })
}

/// Decides `x² − Dy² = n` for `D` in the two families through the joint Artin
/// condition; the witness comes from the oracle. Outside the families the oracle
/// verdict is returned with provenance `oracle:undetermined-by-criteria`.
pub fn joint_artin_decide(d: i64, n: i64) -> Result<Verdict> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    let in_family = match family_ell(d) {
        Ok(_) => family_theta(d).is_ok(),
        Err(Error::OutsideFamily(_)) => false,
        Err(e) => return Err(e),
    };
    if !in_family {
        return Ok(pellsolver::solve(d, n)?.with_provenance("oracle:undetermined-by-criteria"));
    }
    match artin_condition(d, n)? {
        ArtinOutcome::LocalFailure(l) => Ok(Verdict::unsolvable(
            UnsolvableReason::LocalObstruction(RationalPlace::Finite(l)),
            PROVENANCE,
        )),
        ArtinOutcome::Violated => Ok(Verdict::unsolvable(
            UnsolvableReason::Criterion(PROVENANCE.into()),
            PROVENANCE,
        )),
        ArtinOutcome::Satisfied => {
            let oracle = pellsolver::solve(d, n)?;
            Ok(match oracle.status {
                Status::Solvable { x, y } => Verdict::solvable(x, y, PROVENANCE),
                _ => Verdict {
                    status: Status::Undetermined,
                    provenance: format!("{PROVENANCE}:oracle-disagrees"),
                },
            })
        }
    }
}

#[cfg(test)]
mod tests;
