//! Closed-form decisions for `x² − pqy²` and `x² − 2dy²` targets and for
//! `D = 221`, each with a witness from the oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::artin;
use crate::error::{Error, Result};
use crate::intcore;
use crate::pellsolver;
use crate::quadring::{check_discriminant, has_pm3_representation, two_d_factors, Family, QuadOrderInfo};
use crate::symbols::{jacobi_i, quartic_2_of_d, quartic_residue_i64, SymbolValue};
use crate::verdict::{Status, UnsolvableReason, Verdict};

pub const PROV_DIRICHLET: &str = "classical-legendre";
pub const PROV_BOTH_QUARTIC: &str = "classical-quartic";
pub const PROV_SCHOLZ_BROWN: &str = "scholz-brown";
pub const PROV_MOD8: &str = "classical-mod8";
pub const PROV_PALL: &str = "pall";
pub const PROV_221: &str = "d221-closed-form";
pub const PROV_OBSTRUCTION_2: &str = "theta-obstruction-2";
pub const PROV_OBSTRUCTION_M1: &str = "theta-obstruction-minus1";
pub const PROV_OBSTRUCTION_M2: &str = "theta-obstruction-minus2";
pub const PROV_ORACLE: &str = "oracle";

/// Which equation of a trichotomy is solvable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub d: i64,
    /// `None` when no candidate is solvable (outside the trichotomy's hypotheses).
    pub target: Option<i64>,
    /// Verdict for `x² − Dy² = target`; its provenance names the deciding rule.
    pub verdict: Verdict,
}

/// A solvable verdict carrying the oracle's witness, or an undetermined one
/// flagged `…:oracle-disagrees` if the oracle finds nothing.
fn with_witness(d: i64, n: i64, provenance: &str) -> Result<Verdict> {
    let o = pellsolver::solve(d, n)?;
    Ok(match o.status {
        Status::Solvable { x, y } => Verdict::solvable(x, y, provenance),
        _ => Verdict {
            status: Status::Undetermined,
            provenance: format!("{provenance}:oracle-disagrees"),
        },
    })
}

fn by_oracle(d: i64, candidates: &[i64]) -> Result<Classification> {
    for &t in candidates {
        let v = pellsolver::solve(d, t)?;
        if v.is_solvable() {
            return Ok(Classification {
                d,
                target: Some(t),
                verdict: v.with_provenance(PROV_ORACLE),
            });
        }
    }
    Ok(Classification {
        d,
        target: None,
        verdict: Verdict {
            status: Status::Undetermined,
            provenance: PROV_ORACLE.into(),
        },
    })
}

fn classified(d: i64, target: i64, provenance: &str) -> Result<Classification> {
    Ok(Classification {
        d,
        target: Some(target),
        verdict: with_witness(d, target, provenance)?,
    })
}

fn quartic_pair_target(p: u64, q: u64) -> Option<u64> {
    let qp = quartic_residue_i64(q as i64, p).ok()?;
    let pq = quartic_residue_i64(p as i64, q).ok()?;
    (qp * pq == SymbolValue::MinusOne).then_some(if qp.is_one() { p } else { q })
}

/// Which of `x² − pqy² ∈ {−1, p, q}` is solvable.
pub fn classify_pq(p: u64, q: u64) -> Result<Classification> {
    for v in [p, q] {
        if !intcore::is_prime_u64(v) {
            return Err(Error::NotPrime(BigInt::from(v)));
        }
    }
    if p == q {
        return Err(Error::Precondition("p and q must differ".into()));
    }
    let d = i64::try_from(p as u128 * q as u128).map_err(|_| Error::Overflow(format!("{p}·{q}")))?;
    let (pi, qi) = (p as i64, q as i64);
    if p % 4 == 3 || q % 4 == 3 {
        // −1 fails at a prime ≡ 3 (mod 4)
        return by_oracle(d, &[pi, qi]);
    }
    if p == 2 || q == 2 {
        return by_oracle(d, &[-1, pi, qi]);
    }
    if jacobi_i(pi, q) == -1 {
        return classified(d, -1, PROV_DIRICHLET);
    }
    let qp = quartic_residue_i64(qi, p)?;
    let pq = quartic_residue_i64(pi, q)?;
    if qp == SymbolValue::MinusOne && pq == SymbolValue::MinusOne {
        return classified(d, -1, PROV_BOTH_QUARTIC);
    }
    let one = quartic_pair_target(p, q);
    let other = quartic_pair_target(q, p);
    match (one, other) {
        (Some(a), Some(b)) if a == b => classified(d, a as i64, PROV_SCHOLZ_BROWN),
        (Some(a), Some(b)) => Err(Error::Precondition(format!(
            "role assignments of {p}, {q} disagree ({a} vs {b})"
        ))),
        _ => by_oracle(d, &[-1, pi, qi]),
    }
}

/// Which of `x² − 2py² ∈ {−1, 2, −2}` is solvable.
pub fn classify_2p(p: u64) -> Result<Classification> {
    if p == 2 {
        return Err(Error::Precondition("p must be odd".into()));
    }
    if !intcore::is_prime_u64(p) {
        return Err(Error::NotPrime(BigInt::from(p)));
    }
    let d = 2 * p as i64;
    match p % 8 {
        3 => return classified(d, -2, PROV_MOD8),
        5 => return classified(d, -1, PROV_MOD8),
        7 => return classified(d, 2, PROV_MOD8),
        _ => {}
    }
    let q2 = quartic_residue_i64(2, p)?;
    match (p % 16, q2) {
        (9, SymbolValue::MinusOne) => classified(d, -1, PROV_PALL),
        (9, _) => classified(d, -2, PROV_PALL),
        (1, SymbolValue::MinusOne) => classified(d, 2, PROV_PALL),
        _ => by_oracle(d, &[-1, 2, -2]),
    }
}

/// The factorization data of `n` used by the criterion for `D = 221`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct N221Data {
    pub s0: u32,
    pub s1: u32,
    pub s2: u32,
    pub s3: u32,
    /// Primes other than 2, 13, 17 with exponents.
    pub primes: BTreeMap<u64, u32>,
    /// `(13/p) = (17/p) = −1`.
    pub p1: Vec<u64>,
    /// `(221/p) = −1`.
    pub p2: Vec<u64>,
    /// `(13/p) = (17/p) = 1` and `x⁴ − 238x² + 17` has no root mod `p`.
    pub p3: Vec<u64>,
    /// `∏ p^e` over the primes outside `p2`.
    pub n1: BigInt,
}

impl N221Data {
    pub fn new(n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let mut primes: BTreeMap<u64, u32> = intcore::factor_i64(n)?.prime_powers()?.into_iter().collect();
        let s1 = primes.remove(&2).unwrap_or(0);
        let s2 = primes.remove(&13).unwrap_or(0);
        let s3 = primes.remove(&17).unwrap_or(0);
        let leg = |a: i64, p: u64| jacobi_i(a, p);
        let p1 = primes.keys().copied().filter(|&p| leg(13, p) == -1 && leg(17, p) == -1).collect();
        let p2: Vec<u64> = primes.keys().copied().filter(|&p| leg(221, p) == -1).collect();
        let p3 = primes
            .keys()
            .copied()
            .filter(|&p| leg(13, p) == 1 && leg(17, p) == 1 && !quartic_has_root(p))
            .collect();
        let mut n1 = BigInt::from(1);
        for (&p, &e) in &primes {
            if !p2.contains(&p) {
                n1 *= BigInt::from(p).pow(e);
            }
        }
        Ok(N221Data {
            s0: u32::from(n < 0),
            s1,
            s2,
            s3,
            primes,
            p1,
            p2,
            p3,
            n1,
        })
    }

    /// `(−1)^{s0} 2^{s1} 13^{s2} 17^{s3} ∏ p^e`.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(2).pow(self.s1) * BigInt::from(13).pow(self.s2) * BigInt::from(17).pow(self.s3);
        for (&p, &e) in &self.primes {
            v *= BigInt::from(p).pow(e);
        }
        if self.s0 == 1 {
            -v
        } else {
            v
        }
    }

    fn n1_mod_17(&self) -> i64 {
        i64::try_from(&self.n1 % BigInt::from(17)).unwrap()
    }

    pub fn condition_1(&self) -> bool {
        self.s1 % 2 == 0
            && jacobi_i(self.n1_mod_17(), 17) == 1
            && self.primes.iter().all(|(&p, &e)| e % 2 == 0 || jacobi_i(221, p) == 1)
    }

    /// Assumes [`condition_1`](Self::condition_1), which makes `(n₁/17)₄` defined.
    pub fn condition_2(&self) -> Result<bool> {
        if !self.p1.is_empty() {
            return Ok(true);
        }
        let mut lhs = SymbolValue::One;
        for p in &self.p3 {
            lhs *= SymbolValue::MinusOne.pow(self.primes[p]);
        }
        for (&p, &e) in &self.primes {
            if !self.p2.contains(&p) {
                lhs *= SymbolValue::from_i8(jacobi_i(-1, p)).pow(e);
            }
        }
        let rhs = SymbolValue::MinusOne.pow(self.s0 + self.s2) * quartic_residue_i64(self.n1_mod_17(), 17)?;
        Ok(lhs == rhs)
    }
}

/// Whether `x⁴ − 238x² + 17 ≡ 0 (mod p)` has a root, for `p` with `(221/p) = 1`:
/// the roots of the quadratic in `x²` are `119 ± 8√221` with product 17, so
/// both have the character of `119 + 8√221`.
fn quartic_has_root(p: u64) -> bool {
    let s = intcore::sqrt_mod_u64(221, p).expect("221 is a residue");
    let t = (119 + 8 * s as u128) % p as u128;
    jacobi_i(t as i64, p) != -1
}

/// Decides `x² − 221y² = n` in closed form.
pub fn decide_221(n: i64) -> Result<Verdict> {
    let data = N221Data::new(n)?;
    if data.condition_1() && data.condition_2()? {
        with_witness(221, n, PROV_221)
    } else {
        Ok(Verdict::unsolvable(UnsolvableReason::Criterion(PROV_221.into()), PROV_221))
    }
}

/// Unsolvability statements for `x² − 2dy² = n` with `n ∈ {2, −1, −2}`; `None`
/// when none applies.
pub fn prop_checks(d: u64, n: i64) -> Result<Option<Verdict>> {
    let dd = 2 * d as i64;
    if d == 0 || check_discriminant(dd).is_err() {
        return Ok(None);
    }
    let unsolvable = |p: &str| Some(Verdict::unsolvable(UnsolvableReason::Criterion(p.into()), p));
    if n == 2 && d % 16 == 9 {
        return Ok(unsolvable(PROV_OBSTRUCTION_2));
    }
    let Ok(fac) = two_d_factors(d) else {
        return Ok(None);
    };
    if !has_pm3_representation(2 * d) {
        return Ok(None);
    }
    match n {
        -1 => Ok(unsolvable(PROV_OBSTRUCTION_M1)),
        -2 if quartic_2_of_d(&fac)? == SymbolValue::MinusOne => Ok(unsolvable(PROV_OBSTRUCTION_M2)),
        _ => Ok(None),
    }
}

/// The most specific closed-form decision for `x² − Dy² = n`: the `D = 221`
/// criterion, the `2d` obstructions, the trichotomies when `n` is one of their
/// targets, then the joint Artin condition for the families, else the oracle.
pub fn decide(d: i64, n: i64) -> Result<Verdict> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Zero);
    }
    if d == 221 {
        return decide_221(n);
    }
    if d % 2 == 0 {
        if let Some(v) = prop_checks((d / 2) as u64, n)? {
            return Ok(v);
        }
    }
    let family = QuadOrderInfo::new(d)?.family;
    let trichotomy = match family {
        Family::Pq { p, q } if [-1, p as i64, q as i64].contains(&n) => Some(classify_pq(p, q)?),
        Family::TwoD { d: half } if intcore::is_prime_u64(half) && [-1, 2, -2].contains(&n) => {
            Some(classify_2p(half)?)
        }
        _ => None,
    };
    if let Some(c) = trichotomy {
        if c.verdict.provenance != PROV_ORACLE {
            return Ok(match c.target {
                Some(t) if t == n => c.verdict,
                _ => Verdict::unsolvable(UnsolvableReason::Criterion(c.verdict.provenance.clone()), c.verdict.provenance),
            });
        }
    }
    artin::joint_artin_decide(d, n)
}
