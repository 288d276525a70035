//! Indefinite binary quadratic forms `ax² + bxy + cy²` of discriminant `4D`:
//! reduction cycles, Dirichlet composition, and the wide class group.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};
use crate::quadring::check_discriminant;

/// A primitive form `ax² + bxy + cy²`; as a class it stands for everything equivalent to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl FormClass {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = FormClass { a, b, c };
        if a == 0 || c == 0 {
            return Err(Error::Precondition(format!("{f} represents zero")));
        }
        if !f.is_primitive() {
            return Err(Error::Precondition(format!("{f} is not primitive")));
        }
        Ok(f)
    }

    /// The form `(a, 2b, (b² − D)/a)` of the ideal `[a, b + √D]`.
    pub fn from_ideal(d: i64, a: i64, b: i64) -> Result<Self> {
        let num = b as i128 * b as i128 - d as i128;
        if a == 0 || num % a as i128 != 0 {
            return Err(Error::Precondition(format!("[{a}, {b} + √{d}] is not an ideal")));
        }
        let c = i64::try_from(num / a as i128).map_err(|_| Error::Overflow("form coefficient".into()))?;
        FormClass::new(a, 2 * b, c)
    }

    pub fn principal(d: i64) -> Self {
        FormClass { a: 1, b: 0, c: -d }
    }

    pub fn discriminant(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// `(−a, b, −c)`: the class multiplied by that of an element of negative norm.
    pub fn negated(&self) -> Self {
        FormClass {
            a: -self.a,
            b: self.b,
            c: -self.c,
        }
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

struct Disc {
    delta: i128,
    /// `⌊√Δ⌋`
    s: i128,
}

impl Disc {
    fn new(delta: i128) -> Self {
        Disc {
            delta,
            s: delta.sqrt(),
        }
    }

    fn is_reduced(&self, f: &FormClass) -> bool {
        let (a, b) = (f.a as i128, f.b as i128);
        // 0 < b < √Δ and √Δ − b < 2|a| < √Δ + b
        b > 0 && b <= self.s && 2 * a.abs() > self.s - b && 2 * a.abs() <= self.s + b
    }

    fn rho(&self, f: &FormClass) -> Result<FormClass> {
        let c = f.c as i128;
        let m = 2 * c.abs();
        let base = (-(f.b as i128)).mod_floor(&m);
        let r = if c * c < self.delta {
            // largest r ≡ −b (mod 2|c|) with r < √Δ
            let top = self.s;
            top - (top - base).mod_floor(&m)
        } else {
            // r ∈ (−|c|, |c|]
            let r = base;
            if r > c.abs() {
                r - m
            } else {
                r
            }
        };
        let num = r * r - self.delta;
        debug_assert_eq!(num % (4 * c), 0);
        let nc = num / (4 * c);
        let cvt = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("form coefficient".into()));
        Ok(FormClass {
            a: f.c,
            b: cvt(r)?,
            c: cvt(nc)?,
        })
    }

    fn reduce(&self, f: &FormClass) -> Result<FormClass> {
        let mut g = *f;
        let mut steps = 0usize;
        while !self.is_reduced(&g) {
            g = self.rho(&g)?;
            steps += 1;
            if steps > 10_000 {
                return Err(Error::Precondition(format!("reduction of {f} does not terminate")));
            }
        }
        Ok(g)
    }
}

/// Reduces a form of positive non-square discriminant.
pub fn reduce(f: &FormClass) -> Result<FormClass> {
    Disc::new(f.discriminant()).reduce(f)
}

/// Extended gcd `(g, u, v)` with `u·a + v·b = g ≥ 0`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Dirichlet composition of two forms with positive leading coefficients, reduced.
pub fn compose(f1: &FormClass, f2: &FormClass) -> Result<FormClass> {
    let delta = f1.discriminant();
    if delta != f2.discriminant() {
        return Err(Error::Precondition(format!("{f1} and {f2} have different discriminants")));
    }
    if f1.a <= 0 || f2.a <= 0 {
        return Err(Error::Precondition("composition needs a > 0".into()));
    }
    let (mut g1, mut g2) = (*f1, *f2);
    if g1.a > g2.a {
        std::mem::swap(&mut g1, &mut g2);
    }
    let (a1, b1) = (g1.a as i128, g1.b as i128);
    let (a2, b2, c2) = (g2.a as i128, g2.b as i128, g2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (g, u, _) = xgcd(a2, a1);
        (g, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (g, u, v) = xgcd(s, d);
        (g, u, -v)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).mod_floor(&v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let num = b3 * b3 - delta;
    if num % (4 * a3) != 0 {
        return Err(Error::Precondition(format!("composition of {f1} and {f2} failed")));
    }
    let cvt = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("form coefficient".into()));
    let f = FormClass {
        a: cvt(a3)?,
        b: cvt(b3)?,
        c: cvt(num / (4 * a3))?,
    };
    Disc::new(delta).reduce(&f)
}

/// Classes of primitive forms of discriminant `4D`, up to proper equivalence
/// (narrow) and up to multiplication by an element of norm `−1` (wide).
#[derive(Debug)]
pub struct ClassGroup {
    pub d: i64,
    cycles: Vec<Vec<FormClass>>,
    cycle_of: HashMap<FormClass, usize>,
    wide_of_cycle: Vec<usize>,
    /// Representative with `a > 0` of each wide class; index 0 is principal.
    wide_reps: Vec<FormClass>,
    table: Vec<Vec<usize>>,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self> {
        check_discriminant(d)?;
        let delta = 4 * d as i128;
        let disc = Disc::new(delta);
        let mut reduced = Vec::new();
        let mut b = 2i128;
        while b <= disc.s {
            let ac = (b * b - delta) / 4;
            let m = ac.abs();
            let mut a = 1i128;
            while a * a <= m {
                if m % a == 0 {
                    for aa in [a, m / a] {
                        for sa in [aa, -aa] {
                            let f = FormClass {
                                a: sa as i64,
                                b: b as i64,
                                c: (ac / sa) as i64,
                            };
                            if disc.is_reduced(&f) && f.is_primitive() && !reduced.contains(&f) {
                                reduced.push(f);
                            }
                        }
                    }
                }
                a += 1;
            }
            b += 2;
        }
        reduced.sort();
        let mut cycle_of = HashMap::new();
        let mut cycles: Vec<Vec<FormClass>> = Vec::new();
        let principal = disc.reduce(&FormClass::principal(d))?;
        let mut order = vec![principal];
        order.extend(reduced.iter().copied());
        for f in order {
            if cycle_of.contains_key(&f) {
                continue;
            }
            let id = cycles.len();
            let mut cyc = vec![f];
            cycle_of.insert(f, id);
            let mut g = disc.rho(&f)?;
            while g != f {
                if cycle_of.insert(g, id).is_some() {
                    return Err(Error::Precondition(format!("reduced forms of 4·{d} overlap cycles")));
                }
                cyc.push(g);
                g = disc.rho(&g)?;
            }
            cycles.push(cyc);
        }
        let mut wide_of_cycle = vec![usize::MAX; cycles.len()];
        let mut wide_reps = Vec::new();
        for id in 0..cycles.len() {
            if wide_of_cycle[id] != usize::MAX {
                continue;
            }
            let w = wide_reps.len();
            let rep = *cycles[id].iter().find(|f| f.a > 0).expect("cycles alternate signs");
            wide_reps.push(rep);
            wide_of_cycle[id] = w;
            let neg = disc.reduce(&cycles[id][0].negated())?;
            wide_of_cycle[cycle_of[&neg]] = w;
        }
        let mut group = ClassGroup {
            d,
            cycles,
            cycle_of,
            wide_of_cycle,
            wide_reps,
            table: Vec::new(),
        };
        let h = group.wide_reps.len();
        let mut table = vec![vec![0; h]; h];
        for i in 0..h {
            for j in 0..h {
                let f = compose(&group.wide_reps[i], &group.wide_reps[j])?;
                table[i][j] = group.class_of_reduced(&f)?;
            }
        }
        group.table = table;
        Ok(group)
    }

    fn class_of_reduced(&self, f: &FormClass) -> Result<usize> {
        self.cycle_of
            .get(f)
            .map(|&c| self.wide_of_cycle[c])
            .ok_or_else(|| Error::Precondition(format!("{f} is not a reduced form of 4·{}", self.d)))
    }

    /// Index of the wide class of `f`; `0` is the principal class.
    pub fn class_index(&self, f: &FormClass) -> Result<usize> {
        if f.discriminant() != 4 * self.d as i128 {
            return Err(Error::Precondition(format!("{f} does not have discriminant 4·{}", self.d)));
        }
        let r = Disc::new(4 * self.d as i128).reduce(f)?;
        self.class_of_reduced(&r)
    }

    /// Index of the narrow class (reduction cycle) of `f`.
    pub fn narrow_index(&self, f: &FormClass) -> Result<usize> {
        let r = Disc::new(4 * self.d as i128).reduce(f)?;
        self.cycle_of
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("{f} is not primitive")))
    }

    pub fn is_principal(&self, f: &FormClass) -> Result<bool> {
        Ok(self.class_index(f)? == 0)
    }

    /// Wide class number.
    pub fn order(&self) -> usize {
        self.wide_reps.len()
    }

    pub fn narrow_order(&self) -> usize {
        self.cycles.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == 0).expect("group")
    }

    pub fn representative(&self, i: usize) -> FormClass {
        self.wide_reps[i]
    }

    pub fn cycle(&self, f: &FormClass) -> Result<&[FormClass]> {
        Ok(&self.cycles[self.narrow_index(f)?])
    }
}

static GROUPS: OnceLock<Mutex<HashMap<i64, Arc<ClassGroup>>>> = OnceLock::new();

/// The (cached) class group of discriminant `4D`.
pub fn class_group(d: i64) -> Result<Arc<ClassGroup>> {
    let cache = GROUPS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&d) {
        return Ok(g.clone());
    }
    let g = Arc::new(ClassGroup::new(d)?);
    Ok(cache.lock().unwrap().entry(d).or_insert(g).clone())
}
