use super::*;
use crate::pellsolver;
use crate::quadring::find_theta_data;
use crate::symbols::hilbert_q_i64;
use proptest::prelude::*;

fn q(v: i64) -> BigRational {
    bigr(v)
}

#[test]
fn squarefree_parts() {
    assert_eq!(squarefree_part(221).unwrap(), (221, 1));
    assert_eq!(squarefree_part(8).unwrap(), (2, 2));
    assert_eq!(squarefree_part(4 * 9 * 7).unwrap(), (7, 6));
}

#[test]
fn local_solvability_examples() {
    assert!(local_solvable(34, -1, 2).unwrap());
    assert!(local_solvable(82, 2, 2).unwrap());
    assert!(local_solvable(21, -1, 2).unwrap());
    assert!(!local_solvable(21, -1, 3).unwrap());
    assert!(!local_solvable(3, -1, 3).unwrap());
    assert!(!local_solvable(7, 3, 2).unwrap());
}

#[test]
fn square_class_examples() {
    assert_eq!(square_class_2(&q(33)).unwrap(), (Parity::Even, SquareClass2(1)));
    assert_eq!(square_class_2(&q(-7)).unwrap(), (Parity::Even, SquareClass2(1)));
    assert_eq!(square_class_2(&q(12)).unwrap(), (Parity::Even, SquareClass2(-5)));
    assert_eq!(square_class_2(&q(6)).unwrap(), (Parity::Odd, SquareClass2(-10)));
    let r = BigRational::new(BigInt::from(5), BigInt::from(8));
    assert_eq!(square_class_2(&r).unwrap(), (Parity::Odd, SquareClass2(10)));
    assert!(square_class_2(&q(0)).is_err());
}

/// Brute force: a point mod l^k whose coordinates are not both divisible by l
/// and whose derivative condition makes it liftable.
fn brute_local(d: i64, n: i64, l: u64) -> bool {
    // scale out l² from n while l² | n and try primitive points
    let mut n = n;
    let mut tries = vec![];
    loop {
        tries.push(n);
        if n % (l * l) as i64 == 0 {
            n /= (l * l) as i64;
        } else {
            break;
        }
    }
    // a primitive point has gradient valuation at most v(2D), so 2·v(2D) + 1 digits suffice
    let k = 2 * intcore::valuation_i64(2 * d, l) + 1;
    let m = (l as i64).pow(k);
    for n in tries {
        for x in 0..m {
            for y in 0..m {
                if (x % l as i64 == 0) && (y % l as i64 == 0) {
                    continue;
                }
                let val = (x * x - d * y * y - n).rem_euclid(m);
                if val != 0 {
                    continue;
                }
                // x or Dy gives a nonzero gradient; its valuation bounds the lift
                let val = |t: i64| if t == 0 { u32::MAX } else { intcore::valuation_i64(t, l) };
                let g = val(2 * x).min(val(2 * d * y));
                if g < k && 2 * g < k {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn local_solvability_matches_brute_force() {
    for d in [2i64, 3, 5, 6, 7, 10, 12, 13, 17, 18, 20, 21, 28, 34, 41, 45, 50] {
        for n in -24i64..=24 {
            if n == 0 {
                continue;
            }
            for l in [2u64, 3, 5] {
                if l == 5 && d.abs() > 20 {
                    continue;
                }
                assert_eq!(
                    local_solvable(d, n, l).unwrap(),
                    brute_local(d, n, l),
                    "D={d} n={n} l={l}"
                );
            }
        }
    }
}

#[test]
fn global_solutions_are_local_and_closed_forms_match_search() {
    for d in 2i64..80 {
        if intcore::exact_sqrt(&BigInt::from(d)).is_some() {
            continue;
        }
        for n in -40i64..=40 {
            if n == 0 {
                continue;
            }
            let global = pellsolver::solve(d, n).unwrap().is_solvable();
            for l in [2u64, 3, 5, 7, 11] {
                let loc = local_solvable(d, n, l).unwrap();
                if global {
                    assert!(loc, "D={d} n={n} l={l}");
                }
                assert_eq!(loc, local_point(d, n, l).unwrap().is_some(), "D={d} n={n} l={l}");
            }
        }
    }
}

#[test]
fn local_points_satisfy_congruence() {
    for (d, n, l) in [(34, -1, 2), (82, 2, 2), (221, 17, 17), (221, -9, 3), (146, 5, 5), (10, 6, 2)] {
        let pts = local_points(d, n, l, if l == 2 { 5 } else { 2 }).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.satisfies(d, n), "{p:?}");
            assert!(p.liftable);
        }
    }
}

#[test]
fn places_over_primes() {
    assert_eq!(Place::over(221, 53).unwrap().len(), 2);
    assert_eq!(Place::over(221, 3).unwrap()[0].kind, PlaceKind::Inert);
    assert_eq!(Place::over(221, 13).unwrap()[0].kind, PlaceKind::Ramified);
    assert_eq!(Place::over(17, 2).unwrap().len(), 2);
    assert_eq!(Place::over(21, 2).unwrap()[0].kind, PlaceKind::Inert);
    assert_eq!(Place::over(34, 2).unwrap()[0].kind, PlaceKind::Ramified);
    for pl in Place::over(221, 53).unwrap() {
        if let PlaceKind::Split { root } = &pl.kind {
            let m = BigInt::from(53u64).pow(ROOT_PRECISION);
            assert_eq!((root * root - BigInt::from(221)).mod_floor(&m), BigInt::zero());
        }
    }
}

#[test]
fn hilbert_ev_examples() {
    let p34 = Place::unique_over(34, 2).unwrap();
    let beta = QuadElem::from_i64(6, -1);
    // norm-one elements
    for (x, y) in [(35i64, 6i64), (1, 0), (-35, 6)] {
        let a = QuadElem::from_i64(x, y);
        assert_eq!(hilbert_ev(&a, &beta, &p34).unwrap(), SymbolValue::One);
    }
    let x2 = intcore::sqrt_2adic(&BigInt::from(33), 40).unwrap();
    let a = QuadElem::from_ints(&x2, &BigInt::one());
    assert_eq!(hilbert_ev(&a, &beta, &p34).unwrap(), SymbolValue::MinusOne);

    let p3 = Place::unique_over(221, 3).unwrap();
    assert_eq!(
        hilbert_ev(&QuadElem::from_i64(3, 0), &QuadElem::from_i64(-1, 0), &p3).unwrap(),
        SymbolValue::One
    );
    assert!(hilbert_ev(&QuadElem::from_i64(0, 0), &beta, &p34).is_err());
}

#[test]
fn hilbert_ev_on_rationals_restricts_correctly() {
    // for a, b ∈ ℚ: (a, b)_{E_v} = (a, N_{E_v/ℚ_l} b)_l = (a, b)_l^{[E_v:ℚ_l]}
    for d in [2i64, 3, 5, 6, 7, 10, 13, 21, 34, 221] {
        for l in [2u64, 3, 5, 7, 13, 17] {
            for pl in Place::over(d, l).unwrap() {
                let deg = if matches!(pl.kind, PlaceKind::Split { .. }) { 1 } else { 2 };
                for a in [-6i64, -3, -2, -1, 2, 3, 5, 7, 10, 12] {
                    for b in [-5i64, -1, 2, 3, 6, 13, 17] {
                        let got = hilbert_ev(&QuadElem::from_i64(a, 0), &QuadElem::from_i64(b, 0), &pl).unwrap();
                        let want = hilbert_q_i64(a, b, RationalPlace::Finite(l)).unwrap().pow(deg);
                        assert_eq!(got, want, "D={d} l={l} a={a} b={b}");
                    }
                }
            }
        }
    }
}

#[test]
fn hilbert_ev_first_argument_rational_is_norm_symbol() {
    // (a, β)_{E_v} = (a, N β)_l for a ∈ ℚ_l
    for d in [2i64, 3, 5, 6, 7, 10, 13, 21, 34, 221, 146] {
        for l in [2u64, 3, 5, 7, 13, 17, 73] {
            for pl in Place::over(d, l).unwrap() {
                if matches!(pl.kind, PlaceKind::Split { .. }) {
                    continue;
                }
                for a in [-6i64, -1, 2, 3, 5, 7, 13, 17] {
                    for (x, y) in [(1i64, 1i64), (3, 2), (5, -1), (0, 1), (7, 3), (12, 1)] {
                        let beta = QuadElem::from_i64(x, y);
                        let nb = x * x - d * y * y;
                        if nb == 0 {
                            continue;
                        }
                        let got = hilbert_ev(&QuadElem::from_i64(a, 0), &beta, &pl).unwrap();
                        let want = hilbert_q_i64(a, nb, RationalPlace::Finite(l)).unwrap();
                        assert_eq!(got, want, "D={d} l={l} a={a} β=({x},{y})");
                    }
                }
            }
        }
    }
}

#[test]
fn theta_character_examples() {
    let t34 = ThetaData::new(34, 2, BigInt::from(6), BigInt::from(1), BigInt::from(1)).unwrap();
    assert_eq!(theta_character(34, &t34).unwrap().as_array(), [1, -1, 1, -1]);
    let t146 = ThetaData::new(146, 2, BigInt::from(14), BigInt::from(1), BigInt::from(5)).unwrap();
    assert_eq!(theta_character(146, &t146).unwrap().as_array(), [1, -1, -1, 1]);
    let t82 = find_theta_data(82, 2).unwrap();
    assert_eq!(theta_character(82, &t82).unwrap().chi_2, SymbolValue::MinusOne);
    let t221 = find_theta_data(221, 17).unwrap();
    assert!(matches!(theta_character(221, &t221), Err(Error::OutsideFamily(221))));
}

#[test]
fn splitting_in_theta_examples() {
    let t = ThetaData::new(221, 17, BigInt::from(119), BigInt::from(8), BigInt::from(1)).unwrap();
    for pl in Place::over(221, 53).unwrap() {
        assert!(splits_in_theta(221, &t, &pl).unwrap());
    }
    for pl in Place::over(221, 79).unwrap() {
        assert!(!splits_in_theta(221, &t, &pl).unwrap());
    }
    assert!(!splits_in_theta(221, &t, &Place::unique_over(221, 3).unwrap()).unwrap());
    assert!(splits_in_theta(221, &t, &Place::unique_over(221, 2).unwrap()).is_err());
    assert!(splits_in_theta(221, &t, &Place::unique_over(221, 17).unwrap()).is_err());
}

#[test]
fn split_place_splitting_matches_quartic_roots() {
    // for l split in E and prime to 2·17, θ splits at both places over l
    // exactly when x⁴ − 238x² + 17 has four roots mod l
    let t = ThetaData::new(221, 17, BigInt::from(119), BigInt::from(8), BigInt::from(1)).unwrap();
    for l in (5u64..400).filter(|&l| intcore::is_prime_u64(l) && l != 13 && l != 17) {
        let places = Place::over(221, l).unwrap();
        if places.len() != 2 {
            continue;
        }
        let roots = (0..l)
            .filter(|&x| {
                let x = x as i128;
                let l = l as i128;
                (x * x * x * x - 238 * x * x + 17).rem_euclid(l) == 0
            })
            .count();
        let s: Vec<bool> = places.iter().map(|p| splits_in_theta(221, &t, p).unwrap()).collect();
        let expected = s.iter().filter(|&&b| b).count() * 2;
        assert_eq!(roots, expected, "l={l}");
    }
}

proptest! {
    #[test]
    fn split_case_matches_rational_symbol(a in 1i64..5000, b in 1i64..5000, sa in any::<bool>(), sb in any::<bool>()) {
        let a = if sa { -a } else { a };
        let b = if sb { -b } else { b };
        for (d, l) in [(221i64, 53u64), (17, 2), (34, 3), (146, 5)] {
            for pl in Place::over(d, l).unwrap() {
                let got = hilbert_ev(&QuadElem::from_i64(a, 0), &QuadElem::from_i64(b, 0), &pl).unwrap();
                prop_assert_eq!(got, hilbert_q_i64(a, b, RationalPlace::Finite(l)).unwrap());
            }
        }
    }

    #[test]
    fn norm_one_elements_pair_trivially_with_theta(t in -2000i64..2000) {
        // ξ = (1 + t√34)² / N(1 + t√34)·... has norm 1; use ξ = γ/γ̄
        let g = QuadElem::from_i64(1 + 2 * t, 1);
        let xi = g.mul(&g, 34);
        let n = g.norm(34);
        let xi = QuadElem::new(&xi.x / &n, &xi.y / &n);
        prop_assert_eq!(xi.norm(34), q(1));
        let pl = Place::unique_over(34, 2).unwrap();
        prop_assert_eq!(hilbert_ev(&xi, &QuadElem::from_i64(6, -1), &pl).unwrap(), SymbolValue::One);
    }

    #[test]
    fn hilbert_ev_bimultiplicative(x1 in -30i64..30, y1 in -30i64..30, x2 in -30i64..30, y2 in -30i64..30, x3 in -30i64..30, y3 in -30i64..30) {
        prop_assume!((x1, y1) != (0, 0) && (x2, y2) != (0, 0) && (x3, y3) != (0, 0));
        for (d, l) in [(34i64, 2u64), (221, 3), (221, 13), (221, 2), (21, 2), (7, 7), (6, 3)] {
            let pl = Place::unique_over(d, l).unwrap();
            let a = QuadElem::from_i64(x1, y1);
            let b = QuadElem::from_i64(x2, y2);
            let c = QuadElem::from_i64(x3, y3);
            let lhs = hilbert_ev(&a.mul(&b, d), &c, &pl).unwrap();
            let rhs = hilbert_ev(&a, &c, &pl).unwrap() * hilbert_ev(&b, &c, &pl).unwrap();
            prop_assert_eq!(lhs, rhs, "D={} l={}", d, l);
            prop_assert_eq!(hilbert_ev(&a, &c, &pl).unwrap(), hilbert_ev(&c, &a, &pl).unwrap());
        }
    }
}
