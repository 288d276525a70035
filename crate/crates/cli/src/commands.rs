use std::time::Instant;

use pellcrit::criteria;
use pellcrit::intcore::is_prime_u64;
use pellcrit::localanalysis::theta_character;
use pellcrit::pellsolver::{solve_with, SolveConfig};
use pellcrit::quadring::{find_theta_data, has_pm3_representation, two_d_factors};
use pellcrit::symbols::quartic_2_of_d;
use pellcrit::{Error, Status, StatusKind, Verdict};
use rayon::prelude::*;
use serde_json::Number;

use crate::records::{status, witness, Classification, CharacterCheck, QueryResult, Timings};

pub const BOUND_MULT_VAR: &str = "PELLCRIT_BOUND_MULT";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments outside an operation's domain; exit 2.
    Usage(String),
    /// Criteria and oracle disagree, or an internal bound was hit; exit 3.
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Inconsistent(m) => write!(f, "inconsistency: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Zero
            | Error::NotPrime(_)
            | Error::BadModulus(_)
            | Error::BadDiscriminant(_)
            | Error::Precondition(_)
            | Error::OutsideFamily(_)
            | Error::Overflow(_) => CliError::Usage(e.to_string()),
            other => CliError::Inconsistent(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Oracle configuration, with the orbit bound multiplier taken from the environment.
pub fn oracle_config() -> CliResult<SolveConfig> {
    let mut config = SolveConfig::default();
    if let Ok(raw) = std::env::var(BOUND_MULT_VAR) {
        config.bound_mult = raw
            .trim()
            .parse()
            .ok()
            .filter(|&m: &u64| m > 0)
            .ok_or_else(|| CliError::Usage(format!("{BOUND_MULT_VAR}={raw:?} is not a positive integer")))?;
    }
    Ok(config)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn query_record(d: i64, n: i64, verdict: Verdict, oracle: &Verdict, timings: Option<Timings>) -> QueryResult {
    let reason = match &verdict.status {
        Status::Unsolvable(r) => Some(r.to_string()),
        _ => None,
    };
    QueryResult {
        d,
        n,
        status: status(verdict.kind()),
        witness: witness(&verdict),
        agree: verdict.kind() == oracle.kind(),
        provenance: verdict.provenance,
        reason,
        oracle_status: status(oracle.kind()),
        timings,
    }
}

pub fn decide(d: i64, n: i64, config: &SolveConfig) -> CliResult<QueryResult> {
    let start = Instant::now();
    let verdict = criteria::decide(d, n)?;
    let criteria_ms = ms(start);
    let start = Instant::now();
    let oracle = solve_with(d, n, config)?;
    let oracle_ms = ms(start);
    Ok(query_record(d, n, verdict, &oracle, Some(Timings { criteria_ms, oracle_ms })))
}

pub fn decide_221(n: i64, config: &SolveConfig) -> CliResult<QueryResult> {
    let verdict = criteria::decide_221(n)?;
    let oracle = solve_with(221, n, config)?;
    Ok(query_record(221, n, verdict, &oracle, None))
}

fn classification(
    p: u64,
    q: Option<u64>,
    c: criteria::Classification,
    candidates: &[i64],
    config: &SolveConfig,
) -> CliResult<Classification> {
    let mut oracle_targets = Vec::new();
    for &t in candidates {
        if solve_with(c.d, t, config)?.kind() == StatusKind::Solvable {
            oracle_targets.push(t);
        }
    }
    let agree = match c.target {
        Some(t) => oracle_targets == [t],
        None => oracle_targets.is_empty(),
    };
    Ok(Classification {
        p,
        q,
        d: c.d,
        target: c.target,
        witness: witness(&c.verdict),
        provenance: c.verdict.provenance,
        oracle_targets,
        agree,
    })
}

pub fn classify_pq(p: u64, q: u64, config: &SolveConfig) -> CliResult<Classification> {
    let c = criteria::classify_pq(p, q)?;
    classification(p, Some(q), c, &[-1, p as i64, q as i64], config)
}

pub fn classify_2p(p: u64, config: &SolveConfig) -> CliResult<Classification> {
    let c = criteria::classify_2p(p)?;
    classification(p, None, c, &[-1, 2, -2], config)
}

pub fn check_characters(d: u64) -> CliResult<CharacterCheck> {
    let fac = two_d_factors(d)?;
    let big_d = 2 * d as i64;
    let theta = find_theta_data(big_d, 2)?;
    let chi = theta_character(big_d, &theta)?.as_array();
    let pm3 = has_pm3_representation(2 * d);
    let norm_one = chi[0] == 1;
    let minus_one = !pm3 || chi[1] == -1;
    let mod16 = chi[2] == if d % 16 == 1 { 1 } else { -1 };
    let quartic_2 = chi[3] == quartic_2_of_d(&fac)?.to_i8();
    let multiplicative = chi[3] == chi[1] * chi[2];
    let num = |v: &num_bigint::BigInt| v.to_string().parse::<Number>().expect("integer");
    Ok(CharacterCheck {
        d,
        big_d,
        theta: [num(&theta.x0), num(&theta.y0), num(&theta.z0)],
        chi,
        pm3,
        norm_one,
        minus_one,
        mod16,
        quartic_2,
        multiplicative,
        ok: norm_one && minus_one && mod16 && quartic_2 && multiplicative,
    })
}

pub fn odd_primes(max: u64) -> Vec<u64> {
    (3..=max).filter(|&p| is_prime_u64(p)).collect()
}

pub fn pq_pairs(max: u64) -> Vec<(u64, u64)> {
    let ps = odd_primes(max);
    let mut out = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        for &q in &ps[i + 1..] {
            out.push((p, q));
        }
    }
    out
}

/// The odd `d ≤ max` for which `2d` lies in the 2d family.
pub fn two_d_values(max: u64) -> Vec<u64> {
    (2..=max).filter(|&d| two_d_factors(d).is_ok()).collect()
}

/// Maps `f` over `items` in order, on `jobs` threads when given.
pub fn run_all<T, R>(items: Vec<T>, jobs: Option<usize>, f: impl Fn(T) -> CliResult<R> + Sync + Send) -> CliResult<Vec<R>>
where
    T: Send,
    R: Send,
{
    match jobs {
        None => items.into_iter().map(f).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Usage(format!("--jobs {j}: {e}")))?;
            pool.install(|| items.into_par_iter().map(f).collect())
        }
    }
}
