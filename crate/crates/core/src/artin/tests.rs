use super::*;
use crate::verdict::StatusKind;

fn opts_first(d: i64, n: i64) -> AdelicChoice {
    let theta = family_theta(d).unwrap();
    let components = artin_primes(d, n, &theta)
        .unwrap()
        .into_iter()
        .map(|l| local_options(d, n, l).unwrap().remove(0))
        .collect();
    AdelicChoice { n, components }
}

#[test]
fn class_images_examples() {
    let g = class_group(221).unwrap();
    let im = class_images_of_norm(221, 17).unwrap();
    assert_eq!(im.entries.len(), 1);
    assert!(g.is_principal(&im.entries[0].1).unwrap());

    let im = class_images_of_norm(221, 5).unwrap();
    assert_eq!(im.local_failure, Some(13));
    assert_eq!(im.entries.len(), 2);
    for (choice, form) in &im.entries {
        assert!(!g.is_principal(form).unwrap());
        assert_eq!(choice.ideal_form(221).unwrap().a.abs(), 5);
    }

    let im = class_images_of_norm(221, 4).unwrap();
    assert!(im.entries.iter().any(|(_, f)| g.is_principal(f).unwrap()));

    let im = class_images_of_norm(221, 3).unwrap();
    assert_eq!(im.local_failure, Some(3));
    assert!(im.entries.is_empty());
}

#[test]
fn ideal_forms_have_the_right_norm() {
    for n in [-20i64, -13, 4, 12, 17, 35, 52, 100, 289] {
        let Ok(im) = class_images_of_norm(221, n) else { continue };
        let g = class_group(221).unwrap();
        for (choice, form) in im.entries {
            let f = choice.ideal_form(221).unwrap();
            assert_eq!(f.discriminant(), 884);
            assert_eq!(g.class_index(&f).unwrap(), g.class_index(&form).unwrap(), "n={n}");
        }
    }
}

#[test]
fn psi_theta_examples() {
    assert_eq!(psi_theta(&opts_first(34, -1)), SymbolValue::MinusOne);
    assert_eq!(psi_theta(&opts_first(34, 1)), SymbolValue::One);
    assert_eq!(psi_theta(&opts_first(146, -2)), SymbolValue::One);
}

#[test]
fn psi_theta_is_independent_of_the_local_point() {
    // at each prime, options with the same ideal carry the same symbol
    for (d, n) in [(34i64, -1i64), (34, 2), (146, -2), (221, 17), (221, -13), (221, 4), (1394, -1)] {
        let theta = family_theta(d).unwrap();
        for l in artin_primes(d, n, &theta).unwrap() {
            let opts = local_options(d, n, l).unwrap();
            for a in &opts {
                for b in &opts {
                    if a.ideal_a == b.ideal_a && a.ideal_b == b.ideal_b {
                        assert_eq!(a.symbol, b.symbol, "D={d} n={n} l={l}");
                    }
                }
            }
        }
    }
}

#[test]
fn joint_decision_examples() {
    let v = joint_artin_decide(221, 17).unwrap();
    assert_eq!(v.witness().map(|(x, y)| (x.clone(), y.clone())), Some((BigInt::from(119), BigInt::from(8))));
    assert_eq!(joint_artin_decide(221, -1).unwrap().kind(), StatusKind::Unsolvable);
    assert_eq!(joint_artin_decide(34, -1).unwrap().kind(), StatusKind::Unsolvable);
    let v = joint_artin_decide(10, 6).unwrap();
    assert_eq!(v.provenance, "oracle:undetermined-by-criteria");
    assert!(v.is_solvable());
}

#[test]
fn joint_decision_matches_oracle_small() {
    for d in [221i64, 34, 146] {
        for n in -150i64..=150 {
            if n == 0 {
                continue;
            }
            let a = joint_artin_decide(d, n).unwrap();
            let o = pellsolver::solve(d, n).unwrap();
            assert_eq!(a.kind(), o.kind(), "D={d} n={n}: {a} vs {o}");
        }
    }
}
