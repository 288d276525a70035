//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::time::Instant;

use num_bigint::BigInt;
use pellcrit::artin::{family_theta, joint_artin_decide};
use pellcrit::criteria::{decide_221, prop_checks};
use pellcrit::intcore::{factor_i64, is_prime_u64};
use pellcrit::localanalysis::{local_solvable, theta_character};
use pellcrit::pellsolver::solve;
use pellcrit::quadring::{has_pm3_representation, two_d_factors, Family, QuadOrderInfo};
use pellcrit::symbols::{
    burde_product, hilbert_q_int, jacobi_i64, quartic_2_of_d, quartic_residue_i64, relevant_places, SymbolValue,
};
use pellcrit::StatusKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn kind(d: i64, n: i64) -> Result<StatusKind, String> {
    solve(d, n).map(|v| v.kind()).map_err(|e| format!("solve({d},{n}): {e}"))
}

fn first_failure<T: Send>(items: Vec<T>, f: impl Fn(T) -> Result<(), String> + Sync) -> Result<(), String> {
    let mut errs: Vec<String> = items.into_par_iter().filter_map(|t| f(t).err()).collect();
    errs.sort();
    match errs.len() {
        0 => Ok(()),
        k => Err(format!("{k} failures, e.g. {}", errs[0])),
    }
}

fn primes_upto(m: u64) -> Vec<u64> {
    (2..=m).filter(|&p| is_prime_u64(p)).collect()
}

fn c1_decide_221() -> Outcome {
    let ns: Vec<i64> = (-20000..=20000).filter(|&n| n != 0).collect();
    let count = ns.len();
    first_failure(ns, |n| {
        let got = decide_221(n).map_err(|e| format!("n={n}: {e}"))?.kind();
        let want = kind(221, n)?;
        (got == want).then_some(()).ok_or(format!("n={n}: {got:?} vs {want:?}"))
    })?;
    Ok(format!("{count} values of n agree"))
}

fn c2_scholz_brown() -> Outcome {
    let ps: Vec<u64> = primes_upto(1000).into_iter().filter(|p| p % 4 == 1).collect();
    let mut pairs = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        for &q in &ps[i + 1..] {
            if !jacobi_i64(q as i64, p as i64).unwrap().is_one() {
                continue;
            }
            let qp = quartic_residue_i64(q as i64, p).unwrap();
            let pq = quartic_residue_i64(p as i64, q).unwrap();
            if qp * pq == SymbolValue::MinusOne {
                pairs.push((p, q, qp));
            }
        }
    }
    let count = pairs.len();
    first_failure(pairs, |(p, q, qp)| {
        let d = (p * q) as i64;
        if kind(d, -1)? != StatusKind::Unsolvable {
            return Err(format!("({p},{q}): −1 not unsolvable"));
        }
        let target = if qp.is_one() { p } else { q } as i64;
        if kind(d, target)? != StatusKind::Solvable {
            return Err(format!("({p},{q}): {target} not solvable"));
        }
        Ok(())
    })?;
    Ok(format!("{count} pairs"))
}

fn c3_pall() -> Outcome {
    let ps: Vec<u64> = primes_upto(10_000).into_iter().filter(|p| p % 16 == 9 || p % 16 == 1).collect();
    let checked = std::sync::atomic::AtomicUsize::new(0);
    first_failure(ps, |p| {
        let q2 = quartic_residue_i64(2, p).unwrap();
        let d = 2 * p as i64;
        let target = match (p % 16, q2) {
            (9, SymbolValue::MinusOne) => -1,
            (9, _) => -2,
            (1, SymbolValue::MinusOne) => 2,
            _ => return Ok(()),
        };
        checked.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        (kind(d, target)? == StatusKind::Solvable)
            .then_some(())
            .ok_or(format!("p={p}: {target} not solvable"))
    })?;
    Ok(format!("{} primes", checked.into_inner()))
}

fn c4_obstruction_2() -> Outcome {
    let ds: Vec<u64> = (1..=3000u64)
        .filter(|d| d % 16 == 9)
        .filter(|&d| {
            let f = factor_i64(d as i64).unwrap().prime_powers().unwrap();
            f.iter().all(|&(p, _)| p % 8 == 1 || p % 8 == 7)
        })
        .collect();
    let count = ds.len();
    first_failure(ds, |d| {
        let dd = 2 * d as i64;
        if kind(dd, 2)? != StatusKind::Unsolvable {
            return Err(format!("d={d}: solvable"));
        }
        match prop_checks(d, 2) {
            Ok(Some(v)) if v.kind() == StatusKind::Unsolvable => Ok(()),
            _ => Err(format!("d={d}: obstruction not reported")),
        }
    })?;
    for l in primes_upto(200) {
        if !local_solvable(82, 2, l).map_err(|e| e.to_string())? {
            return Err(format!("x² − 82y² = 2 not solvable at {l}"));
        }
    }
    Ok(format!("{count} values of d; D=82 locally solvable at all l ≤ 200 and at ∞"))
}

fn c5_obstructions_minus() -> Outcome {
    let ds: Vec<u64> = (2..=3000u64).filter(|&d| two_d_factors(d).is_ok()).collect();
    let with_rep = ds.iter().filter(|&&d| has_pm3_representation(2 * d)).count();
    first_failure(ds, |d| {
        let dd = 2 * d as i64;
        if !has_pm3_representation(2 * d) {
            return Ok(());
        }
        if kind(dd, -1)? != StatusKind::Unsolvable {
            return Err(format!("d={d}: −1 solvable"));
        }
        let q2 = quartic_2_of_d(&two_d_factors(d).unwrap()).unwrap();
        if kind(dd, -2)? == StatusKind::Solvable && q2 != SymbolValue::One {
            return Err(format!("d={d}: −2 solvable with (2/d)₄ = −1"));
        }
        Ok(())
    })?;
    Ok(format!("{with_rep} values of d with a ±3 representation"))
}

fn c6_theta_characters() -> Outcome {
    for (d, want) in [(34i64, [1i8, -1, 1, -1]), (146, [1, -1, -1, 1])] {
        let theta = family_theta(d).map_err(|e| e.to_string())?;
        let got = theta_character(d, &theta).map_err(|e| e.to_string())?.as_array();
        if got != want {
            return Err(format!("D={d}: {got:?} vs {want:?}"));
        }
    }
    Ok("D=34 [1,-1,1,-1], D=146 [1,-1,-1,1]".into())
}

fn c7_burde() -> Outcome {
    let ps: Vec<u64> = primes_upto(2000).into_iter().filter(|p| p % 4 == 1).collect();
    let mut pairs = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        for &q in &ps[i + 1..] {
            if jacobi_i64(q as i64, p as i64).unwrap().is_one() {
                pairs.push((p, q));
            }
        }
    }
    let count = pairs.len();
    first_failure(pairs, |(p, q)| {
        let lhs = burde_product(p, q).map_err(|e| e.to_string())?;
        let rhs = quartic_residue_i64(p as i64, q).unwrap() * quartic_residue_i64(q as i64, p).unwrap();
        (lhs == rhs).then_some(()).ok_or(format!("({p},{q})"))
    })?;
    Ok(format!("{count} pairs"))
}

fn c8_reciprocity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pairs = Vec::new();
    while pairs.len() < 10_000 {
        let a: i64 = rng.random_range(-10_000..=10_000);
        let b: i64 = rng.random_range(-10_000..=10_000);
        if a != 0 && b != 0 {
            pairs.push((BigInt::from(a), BigInt::from(b)));
        }
    }
    first_failure(pairs, |(a, b)| {
        let mut prod = SymbolValue::One;
        for place in relevant_places(&a, &b).unwrap() {
            prod *= hilbert_q_int(&a, &b, place).map_err(|e| e.to_string())?;
        }
        prod.is_one().then_some(()).ok_or(format!("({a},{b})"))
    })?;
    Ok("10000 random pairs".into())
}

fn c9_joint_artin() -> Outcome {
    let mut cases: Vec<(i64, i64)> = (-2000..=2000).filter(|&n| n != 0).map(|n| (221, n)).collect();
    let mut ds: Vec<i64> = (2..=1000)
        .filter(|&d| matches!(QuadOrderInfo::new(d).map(|q| q.family), Ok(Family::TwoD { .. })))
        .filter(|&d| has_pm3_representation(d as u64))
        .collect();
    ds.push(2 * 17 * 41);
    for &d in &ds {
        cases.extend((-500..=500).filter(|&n| n != 0).map(|n| (d, n)));
    }
    let count = cases.len();
    first_failure(cases, |(d, n)| {
        let got = joint_artin_decide(d, n).map_err(|e| format!("D={d} n={n}: {e}"))?;
        let want = kind(d, n)?;
        (got.kind() == want && got.provenance != "artin-h-theta:oracle-disagrees")
            .then_some(())
            .ok_or(format!("D={d} n={n}: {:?} vs {want:?}", got.kind()))
    })?;
    Ok(format!("{count} instances, D ∈ {{221}} ∪ {ds:?}"))
}

fn brute_min_y(d: i64, n: i64, y_max: i64) -> Option<i64> {
    (0..=y_max).find(|&y| {
        let t = n as i128 + d as i128 * (y as i128) * (y as i128);
        t >= 0 && {
            let r = (t as f64).sqrt() as i128;
            (r.saturating_sub(1)..=r + 1).any(|s| s >= 0 && s * s == t)
        }
    })
}

fn c10_oracle_self_check() -> Outcome {
    let mut cases = Vec::new();
    for d in 2..=300i64 {
        if (d as f64).sqrt().round().powi(2) as i64 == d {
            continue;
        }
        cases.extend((-50..=50).filter(|&n| n != 0).map(|n| (d, n)));
    }
    let count = cases.len();
    first_failure(cases, |(d, n)| {
        let v = solve(d, n).map_err(|e| format!("D={d} n={n}: {e}"))?;
        let brute = brute_min_y(d, n, 10_000);
        match (v.witness(), brute) {
            (Some((_, y)), Some(b)) if *y == BigInt::from(b) && v.witness_checks(d, n) => Ok(()),
            (Some((_, y)), None) if *y > BigInt::from(10_000) && v.witness_checks(d, n) => Ok(()),
            (None, None) if v.kind() == StatusKind::Unsolvable => Ok(()),
            (w, b) => Err(format!("D={d} n={n}: oracle {w:?}, brute {b:?}")),
        }
    })?;
    Ok(format!("{count} instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 decide_221 vs oracle, 0<|n|≤20000", c1_decide_221),
        ("2 quartic trichotomy for pq, p<q≤1000", c2_scholz_brown),
        ("3 2p targets for p≡1 mod 8, p≤10⁴", c3_pall),
        ("4 x²−2dy²=2 obstruction, d≡9 mod 16, d≤3000", c4_obstruction_2),
        ("5 x²−2dy²=−1,−2 obstructions, d≤3000", c5_obstructions_minus),
        ("6 theta characters via the 2-adic engine", c6_theta_characters),
        ("7 quartic product identity, p<q≤2000", c7_burde),
        ("8 Hilbert reciprocity on random pairs", c8_reciprocity),
        ("9 joint Artin condition vs oracle", c9_joint_artin),
        ("10 oracle vs brute force, D≤300, |n|≤50", c10_oracle_self_check),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
