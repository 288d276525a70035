use pellcrit::artin::{artin_condition, family_ell, joint_artin_decide, ArtinOutcome};
use pellcrit::pellsolver::solve;
use pellcrit::quadring::{Family, QuadOrderInfo};
use pellcrit::StatusKind;
use rayon::prelude::*;

fn hypothesis_pq(max: i64) -> Vec<i64> {
    (2..=max)
        .filter(|&d| matches!(QuadOrderInfo::new(d).map(|q| q.family), Ok(Family::Pq { .. })))
        .filter(|&d| family_ell(d).is_ok())
        .collect()
}

#[test]
fn pq_family_members() {
    assert_eq!(hypothesis_pq(400), vec![205, 221, 305, 377]);
}

#[test]
fn pq_joint_condition_matches_oracle() {
    let ds = hypothesis_pq(1000);
    ds.into_par_iter().for_each(|d| {
        for n in -60i64..=60 {
            if n == 0 {
                continue;
            }
            let v = joint_artin_decide(d, n).unwrap();
            assert_eq!(v.provenance.split(':').next(), Some("artin-h-theta"), "D={d} n={n}");
            assert_eq!(v.kind(), solve(d, n).unwrap().kind(), "D={d} n={n}");
        }
    });
}

#[test]
fn necessity_on_solvable_instances() {
    for d in [205i64, 221, 305, 34, 146, 1394] {
        for n in -300i64..=300 {
            if n != 0 && solve(d, n).unwrap().kind() == StatusKind::Solvable {
                assert_eq!(artin_condition(d, n).unwrap(), ArtinOutcome::Satisfied, "D={d} n={n}");
            }
        }
    }
}

#[test]
fn outside_the_hypotheses_defers_to_the_oracle() {
    // quartic product +1, (q/p) = −1, and 2d values without a ±3 representation
    for d in [505i64, 145, 514, 85, 82] {
        assert!(family_ell(d).is_err());
        for n in [-4i64, -1, 2, 5] {
            let v = joint_artin_decide(d, n).unwrap();
            assert_eq!(v.provenance, "oracle:undetermined-by-criteria");
            assert_eq!(v.kind(), solve(d, n).unwrap().kind());
        }
    }
}
