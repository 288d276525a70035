//! Square classes and Hilbert symbols in the quadratic extensions `ℚ₂(√D₀)`
//! that are fields, i.e. `D₀ ≢ 1 (mod 8)`.
//!
//! Elements are handled exactly in the integral basis `(1, ω)`. A unit `u` is a
//! square iff `u ≡ w² (mod 4ϖ)`, and `8 ∈ 4ϖ·O`, so the unit square class of `u`
//! is read off `u mod 8` modulo the image of unit squares. The Hilbert symbol
//! `(a, b)` is `+1` iff `b` lies in the norm group of `E_v(√a)`, which is built
//! once per field by sampling `z² − a·x²`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `(valuation parity, unit residue (c0, c1) mod 8 in canonical form)`.
pub(crate) type ClassKey = (u8, u8, u8);

#[derive(Debug)]
pub(crate) struct TwoAdicField {
    d0: i64,
    /// `ω = (1 + √D₀)/2` when true, `ω = √D₀` otherwise.
    half_basis: bool,
    unramified: bool,
    /// Uniformizer in the `(1, ω)` basis.
    pi: (i64, i64),
    unit_squares: Vec<(u8, u8)>,
    index: HashMap<ClassKey, usize>,
    reps: Vec<(BigInt, BigInt)>,
    norm_groups: Vec<HashSet<usize>>,
}

static CACHE: OnceLock<Mutex<HashMap<i64, Arc<TwoAdicField>>>> = OnceLock::new();

/// The cached engine for `ℚ₂(√D₀)`; `D₀` squarefree with `D₀ ≢ 1 (mod 8)`.
pub(crate) fn field(d0: i64) -> Result<Arc<TwoAdicField>> {
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&d0) {
        return Ok(f.clone());
    }
    let built = Arc::new(TwoAdicField::build(d0)?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(d0).or_insert(built).clone())
}

fn v2(x: &BigInt) -> u64 {
    x.trailing_zeros().unwrap_or(u64::MAX)
}

impl TwoAdicField {
    fn build(d0: i64) -> Result<Self> {
        if d0.rem_euclid(8) == 1 || d0.rem_euclid(4) == 0 {
            return Err(Error::Precondition(format!("ℚ₂(√{d0}) is not a ramified or unramified field")));
        }
        let half_basis = d0.rem_euclid(4) == 1;
        let unramified = d0.rem_euclid(8) == 5;
        let pi = match d0.rem_euclid(4) {
            2 => (0, 1),
            3 => (1, 1),
            _ => (2, 0),
        };
        let mut f = TwoAdicField {
            d0,
            half_basis,
            unramified,
            pi,
            unit_squares: Vec::new(),
            index: HashMap::new(),
            reps: Vec::new(),
            norm_groups: Vec::new(),
        };
        let mut squares = HashSet::new();
        for c0 in 0..8 {
            for c1 in 0..8 {
                if f.norm_small(c0, c1) % 2 != 0 {
                    squares.insert(f.mul_mod8((c0, c1), (c0, c1)));
                }
            }
        }
        f.unit_squares = squares.into_iter().collect();
        f.unit_squares.sort();

        let grid: Vec<(BigInt, BigInt)> = (-3i64..=3)
            .flat_map(|a| (-3i64..=3).map(move |b| (BigInt::from(a), BigInt::from(b))))
            .collect();
        let pi_big = (BigInt::from(pi.0), BigInt::from(pi.1));
        for g in &grid {
            for cand in [g.clone(), f.mul(g, &pi_big)] {
                if cand.0.is_zero() && cand.1.is_zero() {
                    continue;
                }
                let key = f.key(&cand.0, &cand.1);
                if !f.index.contains_key(&key) {
                    f.index.insert(key, f.reps.len());
                    f.reps.push(cand);
                }
            }
        }
        if f.reps.len() != 16 {
            return Err(Error::Precision(format!(
                "found {} square classes for ℚ₂(√{d0})",
                f.reps.len()
            )));
        }
        for i in 0..16 {
            if f.is_square_index(i) {
                f.norm_groups.push((0..16).collect());
                continue;
            }
            let r = f.reps[i].clone();
            let mut reached = HashSet::new();
            for z in &grid {
                for x in &grid {
                    let z2 = f.mul(z, z);
                    let x2 = f.mul(x, x);
                    let rx2 = f.mul(&r, &x2);
                    let v = (&z2.0 - &rx2.0, &z2.1 - &rx2.1);
                    if v.0.is_zero() && v.1.is_zero() {
                        continue;
                    }
                    reached.insert(f.index[&f.key(&v.0, &v.1)]);
                }
            }
            if reached.len() != 8 {
                return Err(Error::Precision(format!(
                    "norm group of class {i} in ℚ₂(√{d0}) has {} classes",
                    reached.len()
                )));
            }
            f.norm_groups.push(reached);
        }
        Ok(f)
    }

    fn is_square_index(&self, i: usize) -> bool {
        self.index.get(&self.square_key()) == Some(&i)
    }

    fn square_key(&self) -> ClassKey {
        let canon = self.canonical_unit((1, 0));
        (0, canon.0, canon.1)
    }

    fn k(&self) -> i64 {
        (self.d0 - 1) / 4
    }

    fn norm_small(&self, c0: i64, c1: i64) -> i64 {
        if self.half_basis {
            c0 * c0 + c0 * c1 - self.k() * c1 * c1
        } else {
            c0 * c0 - self.d0 * c1 * c1
        }
    }

    fn mul_mod8(&self, a: (i64, i64), b: (i64, i64)) -> (u8, u8) {
        let (c0, c1) = if self.half_basis {
            (
                a.0 * b.0 + self.k() * a.1 * b.1,
                a.0 * b.1 + a.1 * b.0 + a.1 * b.1,
            )
        } else {
            (a.0 * b.0 + self.d0 * a.1 * b.1, a.0 * b.1 + a.1 * b.0)
        };
        (c0.rem_euclid(8) as u8, c1.rem_euclid(8) as u8)
    }

    pub(crate) fn mul(&self, a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        if self.half_basis {
            let k = BigInt::from(self.k());
            (
                &a.0 * &b.0 + k * &a.1 * &b.1,
                &a.0 * &b.1 + &a.1 * &b.0 + &a.1 * &b.1,
            )
        } else {
            (
                &a.0 * &b.0 + BigInt::from(self.d0) * &a.1 * &b.1,
                &a.0 * &b.1 + &a.1 * &b.0,
            )
        }
    }

    fn conj(&self, a: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        if self.half_basis {
            (&a.0 + &a.1, -&a.1)
        } else {
            (a.0.clone(), -&a.1)
        }
    }

    fn norm(&self, a: &(BigInt, BigInt)) -> BigInt {
        if self.half_basis {
            &a.0 * &a.0 + &a.0 * &a.1 - BigInt::from(self.k()) * &a.1 * &a.1
        } else {
            &a.0 * &a.0 - BigInt::from(self.d0) * &a.1 * &a.1
        }
    }

    fn canonical_unit(&self, u: (u8, u8)) -> (u8, u8) {
        self.unit_squares
            .iter()
            .map(|&s| self.mul_mod8((u.0 as i64, u.1 as i64), (s.0 as i64, s.1 as i64)))
            .min()
            .unwrap()
    }

    /// Normalized valuation of a nonzero integral element.
    fn valuation(&self, a: &(BigInt, BigInt)) -> u64 {
        let vn = v2(&self.norm(a));
        if self.unramified {
            vn / 2
        } else {
            vn
        }
    }

    fn key(&self, c0: &BigInt, c1: &BigInt) -> ClassKey {
        let a = (c0.clone(), c1.clone());
        let v = self.valuation(&a);
        let pi = (BigInt::from(self.pi.0), BigInt::from(self.pi.1));
        let pibar = self.conj(&pi);
        let npi = self.norm(&pi);
        let two_part = BigInt::from(1) << v2(&npi);
        let odd = &npi / &two_part;
        // a·ϖ̄^v·m^v / 2^v = u·m^{2v} with N(ϖ) = 2^e·m, m odd
        let mut num = a;
        for _ in 0..v {
            num = self.mul(&num, &pibar);
            num = (&num.0 * &odd, &num.1 * &odd);
        }
        let den = two_part.pow(v as u32);
        debug_assert!((&num.0 % &den).is_zero() && (&num.1 % &den).is_zero());
        let u0 = (&num.0 / &den).mod_floor(&BigInt::from(8)).to_u8().unwrap();
        let u1 = (&num.1 / &den).mod_floor(&BigInt::from(8)).to_u8().unwrap();
        let canon = self.canonical_unit((u0, u1));
        ((v % 2) as u8, canon.0, canon.1)
    }

    /// Converts `X + Y√D₀` (integers) into the `(1, ω)` basis, up to a square factor.
    fn from_sqrt_basis(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        if self.half_basis {
            // X + Y√D₀ = (X − Y) + 2Y·ω
            (x - y, y * 2)
        } else {
            (x.clone(), y.clone())
        }
    }

    /// Square class index of the nonzero element `X + Y√D₀` with integer coordinates.
    pub(crate) fn class_index(&self, x: &BigInt, y: &BigInt) -> Result<usize> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::Zero);
        }
        let a = self.from_sqrt_basis(x, y);
        let key = self.key(&a.0, &a.1);
        self.index
            .get(&key)
            .copied()
            .ok_or_else(|| Error::Precision(format!("unclassified element {x} + {y}√{}", self.d0)))
    }

    #[cfg(test)]
    pub(crate) fn is_square(&self, x: &BigInt, y: &BigInt) -> Result<bool> {
        Ok(self.is_square_index(self.class_index(x, y)?))
    }

    /// Hilbert symbol of `X₁ + Y₁√D₀` and `X₂ + Y₂√D₀` (integer coordinates).
    pub(crate) fn hilbert(&self, a: (&BigInt, &BigInt), b: (&BigInt, &BigInt)) -> Result<i8> {
        let i = self.class_index(a.0, a.1)?;
        let j = self.class_index(b.0, b.1)?;
        Ok(if self.norm_groups[i].contains(&j) { 1 } else { -1 })
    }

    #[cfg(test)]
    pub(crate) fn class_count(&self) -> usize {
        self.reps.len()
    }

    #[cfg(test)]
    /// Representatives of the 16 classes in `X + Y√D₀` coordinates, scaled to be integral.
    pub(crate) fn representatives(&self) -> Vec<(BigInt, BigInt)> {
        self.reps
            .iter()
            .map(|(c0, c1)| {
                if self.half_basis {
                    // 4·(c0 + c1(1 + √D₀)/2)
                    (BigInt::from(4) * c0 + c1 * 2, c1 * 2)
                } else {
                    (c0.clone(), c1.clone())
                }
            })
            .collect()
    }

    #[cfg(test)]
    fn norm_of_sqrt_basis(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * x - BigInt::from(self.d0) * y * y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{hilbert_q_int, RationalPlace};

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    const FIELDS: [i64; 12] = [2, 3, 5, 6, 7, 10, 13, 14, 221, 34, 146, -1];

    #[test]
    fn sixteen_classes_and_index_two_norm_groups() {
        for d0 in FIELDS {
            let f = field(d0).unwrap();
            assert_eq!(f.class_count(), 16);
            for (i, g) in f.norm_groups.iter().enumerate() {
                let want = if f.is_square_index(i) { 16 } else { 8 };
                assert_eq!(g.len(), want, "D0={d0} class {i}");
            }
        }
    }

    #[test]
    fn symbol_is_symmetric_and_nondegenerate() {
        for d0 in FIELDS {
            let f = field(d0).unwrap();
            let reps = f.representatives();
            for (i, a) in reps.iter().enumerate() {
                let mut all_one = true;
                for c in &reps {
                    let s1 = f.hilbert((&a.0, &a.1), (&c.0, &c.1)).unwrap();
                    let s2 = f.hilbert((&c.0, &c.1), (&a.0, &a.1)).unwrap();
                    assert_eq!(s1, s2);
                    all_one &= s1 == 1;
                }
                assert_eq!(all_one, f.is_square_index(i));
            }
        }
    }

    #[test]
    fn rational_first_argument_matches_norm_formula() {
        // (a, β)_{E_v} = (a, N β)_{ℚ₂} for a ∈ ℚ₂
        for d0 in FIELDS {
            let f = field(d0).unwrap();
            for a in [-10i64, -5, -3, -2, -1, 2, 3, 5, 6, 7, 12] {
                for x in -6i64..=6 {
                    for y in -6i64..=6 {
                        if x == 0 && y == 0 {
                            continue;
                        }
                        let s = f.hilbert((&b(a), &b(0)), (&b(x), &b(y))).unwrap();
                        let nb = f.norm_of_sqrt_basis(&b(x), &b(y));
                        let t = hilbert_q_int(&b(a), &nb, RationalPlace::Finite(2)).unwrap();
                        assert_eq!(s, t.to_i8(), "D0={d0} a={a} β={x}+{y}√D0");
                    }
                }
            }
        }
    }

    #[test]
    fn bimultiplicative_on_elements() {
        for d0 in [34i64, 221, 3, 146] {
            let f = field(d0).unwrap();
            let els: Vec<(BigInt, BigInt)> = (-4i64..=4)
                .flat_map(|x| (-3i64..=3).map(move |y| (b(x), b(y))))
                .filter(|(x, y)| !(x.is_zero() && y.is_zero()))
                .collect();
            let mul = |p: &(BigInt, BigInt), q: &(BigInt, BigInt)| {
                (&p.0 * &q.0 + b(d0) * &p.1 * &q.1, &p.0 * &q.1 + &p.1 * &q.0)
            };
            for (i, a1) in els.iter().enumerate().step_by(5) {
                for a2 in els.iter().skip(i % 7).step_by(9) {
                    for c in els.iter().step_by(11) {
                        let prod = mul(a1, a2);
                        let lhs = f.hilbert((&prod.0, &prod.1), (&c.0, &c.1)).unwrap();
                        let r1 = f.hilbert((&a1.0, &a1.1), (&c.0, &c.1)).unwrap();
                        let r2 = f.hilbert((&a2.0, &a2.1), (&c.0, &c.1)).unwrap();
                        assert_eq!(lhs, r1 * r2);
                    }
                }
            }
        }
    }

    #[test]
    fn squares_are_squares() {
        for d0 in FIELDS {
            let f = field(d0).unwrap();
            for x in -9i64..=9 {
                for y in -9i64..=9 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let sq = (b(x * x + d0 * y * y), b(2 * x * y));
                    assert!(f.is_square(&sq.0, &sq.1).unwrap());
                }
            }
            assert!(f.is_square(&b(d0), &b(0)).unwrap());
            assert!(!f.is_square(&b(0), &b(1)).unwrap());
        }
    }

    #[test]
    fn split_fields_are_rejected() {
        assert!(field(17).is_err());
        assert!(field(12).is_err());
    }

    #[test]
    fn large_elements_classify() {
        let f = field(221).unwrap();
        let x = BigInt::from(1665).pow(7);
        let y = BigInt::from(112).pow(7) * 3;
        assert!(f.class_index(&x, &y).is_ok());
        assert!(f.class_index(&b(0), &b(0)).is_err());
    }
}
