use nalgebra::{UnitQuaternion, Vector3};
use num_complex::Complex;
use num_traits::Zero;
use proptest::prelude::*;

use twistor_core::analyzer::{
    component_label, fiber_solve, membership, phi_eval, rank4, section_matrix_model, shifted,
    shifted_identity_residual, trace, AnalysisConfig, ComponentLabel,
};
use twistor_core::p1alg::{
    check_rules, h0_from_splitting, kernel_splitting, nullspace_dimension, reality_fixed_space,
    tau_pullback, CoeffPoly, P1Point, SigmaCoordRule, SplittingType,
};
use twistor_core::quotient::{
    binary_dihedral, census_involutions, component_count, cyclic, proper_quotient_predicate,
    quaternion_group, ActionKind,
};
use twistor_core::scalar::{GaussRat, Rational, C64};
use twistor_core::twistor_model::{
    build_quadric, glue_cone_twistor, real_section_system, squaring_section, SquaringVariant,
};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn gauss_strategy() -> impl Strategy<Value = GaussRat> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| Complex::new(rat(a, b), rat(c, d)))
}

fn c64_strategy(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn variant_strategy() -> impl Strategy<Value = SquaringVariant> {
    prop_oneof![Just(SquaringVariant::Minus), Just(SquaringVariant::Plus)]
}

fn point_strategy() -> impl Strategy<Value = P1Point> {
    (c64_strategy(3.0), any::<bool>()).prop_map(|(v, inf)| {
        if inf {
            P1Point::at_infinity(v)
        } else {
            P1Point::standard(v)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn antipodal_is_a_free_involution(p in point_strategy()) {
        let q = p.antipodal();
        prop_assert!(q.antipodal().approx_eq(&p, 1e-9));
        prop_assert!(p.chordal_distance(&q) > 1e-6);
    }

    #[test]
    fn chart_values_are_reciprocal(v in c64_strategy(1.0)) {
        prop_assume!(v.norm() > 1e-3);
        let p = P1Point::standard(v);
        let q = P1Point::at_infinity(C64::new(1.0, 0.0) / v);
        prop_assert!(p.approx_eq(&q, 1e-9));
        let (std_value, inf_value) = (q.standard_value().unwrap(), p.canonical());
        prop_assert!((std_value - v).norm() < 1e-9 * (1.0 + v.norm()));
        prop_assert!(inf_value.approx_eq(&p, 1e-12));
    }

    #[test]
    fn tau_pullback_is_an_involution(
        half in 0usize..=3,
        sign in prop_oneof![Just(1i8), Just(-1i8)],
        coeffs in prop::collection::vec(gauss_strategy(), 7),
    ) {
        let k = 2 * half;
        let rule = SigmaCoordRule::new(0, sign, k).unwrap();
        prop_assert!(check_rules(&[k], std::slice::from_ref(&rule)).is_ok());
        let s = CoeffPoly::new(k, coeffs[..=k].to_vec()).unwrap();
        let back = tau_pullback(&tau_pullback(&s, &rule).unwrap(), &rule).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn swapped_pair_parity(k in 0usize..=4, s0 in prop_oneof![Just(1i8), Just(-1i8)], s1 in prop_oneof![Just(1i8), Just(-1i8)]) {
        let rules = vec![SigmaCoordRule::new(1, s0, k).unwrap(), SigmaCoordRule::new(0, s1, k).unwrap()];
        let parity = if k % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(check_rules(&[k, k], &rules).is_ok(), parity * s0 * s1 == 1);
    }

    #[test]
    fn odd_self_paired_rules_are_rejected(half in 0usize..=3, sign in prop_oneof![Just(1i8), Just(-1i8)]) {
        let k = 2 * half + 1;
        let rule = SigmaCoordRule::new(0, sign, k).unwrap();
        prop_assert!(check_rules(&[k], &[rule]).is_err());
    }

    #[test]
    fn h0_is_nondecreasing_and_eventually_affine(degrees in prop::collection::vec(-6i64..=6, 1..5)) {
        let t = SplittingType::new(degrees.clone());
        let h: Vec<usize> = (-12..=12).map(|m| h0_from_splitting(&t, m)).collect();
        prop_assert!(h.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(h[24] - h[23], t.rank());
        prop_assert_eq!(h[0], 0);
    }

    #[test]
    fn fixed_space_has_coefficient_dimension(degs in prop::collection::vec(0usize..=4, 1..4), signs in prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 3)) {
        // self-paired rules on even degrees, a swapped pair on the first two
        // coordinates when their degrees agree
        let mut degrees = degs.clone();
        let mut rules = Vec::new();
        let swap = degrees.len() >= 2;
        if swap {
            degrees[1] = degrees[0];
            let k = degrees[0];
            let s = if k % 2 == 0 { signs[0] } else { -signs[0] };
            rules.push(SigmaCoordRule::new(1, signs[0], k).unwrap());
            rules.push(SigmaCoordRule::new(0, s, k).unwrap());
        }
        for i in rules.len()..degrees.len() {
            degrees[i] = 2 * (degrees[i] / 2);
            rules.push(SigmaCoordRule::new(i, signs[i], degrees[i]).unwrap());
        }
        let names: Vec<String> = (0..degrees.len()).map(|i| format!("u{i}")).collect();
        let basis = reality_fixed_space(&degrees, &rules, &names).unwrap();
        prop_assert_eq!(basis.real_dim(), basis.coefficient_dim());
        prop_assert_eq!(basis.real_dim(), degrees.iter().map(|k| k + 1).sum::<usize>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kernel_splitting_agrees_with_nullspace_dimensions(
        ncols in 2usize..=4,
        seed_coeffs in prop::collection::vec(-3i64..=3, 64),
        source in prop::collection::vec(0i64..=3, 4),
        gaps in prop::collection::vec(0i64..=2, 3),
    ) {
        let nrows = ncols - 1;
        let source = &source[..ncols];
        let smax = *source.iter().max().unwrap();
        let target: Vec<i64> = gaps[..nrows].iter().map(|g| smax + g).collect();
        let mut it = seed_coeffs.iter().cycle();
        let matrix: Vec<Vec<CoeffPoly<Rational>>> = target
            .iter()
            .map(|&t| {
                source
                    .iter()
                    .map(|&s| {
                        let bound = (t - s) as usize;
                        let coeffs = (0..=bound)
                            .map(|_| Complex::new(Rational::from_integer((*it.next().unwrap()).into()), Rational::zero()))
                            .collect();
                        CoeffPoly::new(bound, coeffs).unwrap()
                    })
                    .collect()
            })
            .collect();
        let split = kernel_splitting(&matrix, source, &target).unwrap();
        for m in -4..=4 {
            prop_assert_eq!(h0_from_splitting(&split, m), nullspace_dimension(&matrix, source, &target, m).unwrap());
        }
        // common zeros of the maximal minors only raise the kernel degree
        if split.rank() == ncols - nrows {
            prop_assert!(split.total_degree() >= source.iter().sum::<i64>() - target.iter().sum::<i64>());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squaring_is_sign_invariant(a in gauss_strategy(), b in gauss_strategy(), v in variant_strategy()) {
        let s = squaring_section::<Rational>(&a, &b, v);
        prop_assert_eq!(&s, &squaring_section::<Rational>(&-a, &-b, v));
        let sys = real_section_system(&build_quadric()).unwrap();
        prop_assert!(sys.residuals(&s.to_params()).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn embedding_is_tau_fixed(p in prop::collection::vec(-2.0f64..2.0, 9)) {
        let model = build_quadric();
        let basis = model.real_basis().unwrap();
        let sections = basis.embed(&p).unwrap();
        prop_assert!(twistor_core::p1alg::RealParamBasis::is_tau_fixed(&sections, &model.sigma_rules, 1e-12).unwrap());
        prop_assert_eq!(basis.read_params(&sections).unwrap(), p);
    }

    #[test]
    fn coefficient_equations_match_evaluation(
        a in c64_strategy(1.0),
        b in c64_strategy(1.0),
        v in variant_strategy(),
        noise in prop::collection::vec(-1.0f64..1.0, 9),
        zetas in prop::collection::vec(c64_strategy(2.0), 20),
        perturb in any::<bool>(),
    ) {
        let model = build_quadric();
        let basis = model.real_basis().unwrap();
        let sys = real_section_system(&model).unwrap();
        let mut p = squaring_section::<f64>(&a, &b, v).to_params();
        if perturb {
            for (x, n) in p.iter_mut().zip(&noise) {
                *x += 0.1 * n;
            }
        }
        let on_equations = sys.residuals_f64(&p)[..5].iter().all(|r| r.abs() < 1e-9);
        let chart = model.equations[0].chart_form(twistor_core::p1alg::Chart::Standard);
        let vanishes = zetas.iter().all(|&z| {
            let u = phi_eval(&basis, &p, &P1Point::standard(z)).unwrap().values;
            chart.eval(z, &u).norm() < 1e-8
        });
        prop_assert_eq!(on_equations, vanishes);
    }

    #[test]
    fn membership_threshold_scales_with_the_point(p in prop::collection::vec(-5.0f64..5.0, 9), tol in 1e-12f64..1e-3) {
        let sys = real_section_system(&build_quadric()).unwrap();
        let r = membership(&sys, &p, tol).unwrap();
        let n2: f64 = p.iter().map(|x| x * x).sum();
        prop_assert!((r.threshold - tol * (1.0 + n2)).abs() <= 1e-12 * r.threshold.max(1.0));
        prop_assert_eq!(r.passed, r.max_residual <= r.threshold);
    }

    #[test]
    fn matrix_model_has_rank_one_shift(q in prop::collection::vec((-9i64..=9, 1i64..=5), 4), v in variant_strategy()) {
        let q: Vec<Rational> = q.into_iter().map(|(n, d)| rat(n, d)).collect();
        let a = Complex::new(q[0].clone(), q[1].clone());
        let b = Complex::new(q[2].clone(), q[3].clone());
        let p = squaring_section::<Rational>(&a, &b, v).to_params();
        let (bm, t, _, _) = section_matrix_model(&p, 0.0).unwrap();
        prop_assert!(trace(&bm).is_zero());
        prop_assert_eq!(rank4(&shifted(&bm, &t)), 1);
        prop_assert!(shifted_identity_residual(&bm, &t).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_sections_through_a_regular_point(
        a in c64_strategy(1.0),
        b in c64_strategy(1.0),
        v in variant_strategy(),
        z in c64_strategy(2.0),
        at_zero in any::<bool>(),
    ) {
        prop_assume!(a.norm() + b.norm() > 0.2);
        let model = build_quadric();
        let basis = model.real_basis().unwrap();
        let sys = real_section_system(&model).unwrap();
        let p = squaring_section::<f64>(&a, &b, v).to_params();
        let zeta = if at_zero { P1Point::zero() } else { P1Point::standard(z) };
        let point = phi_eval(&basis, &p, &zeta).unwrap().values;
        prop_assume!(point.iter().map(|u| u.norm()).sum::<f64>() > 1e-3);
        let sol = fiber_solve(&model, &sys, &zeta, &point, &AnalysisConfig::default()).unwrap();
        prop_assert_eq!(sol.sections.len(), 2);
        prop_assert!(!sol.positive_dimensional);
        prop_assert!(sol.sections.iter().any(|s| s.iter().zip(&p).all(|(x, y)| (x - y).abs() < 1e-6)));
        let labels: Vec<ComponentLabel> = sol.sections.iter().map(|s| component_label(s, 1e-7).unwrap()).collect();
        if !labels.contains(&ComponentLabel::Boundary) {
            prop_assert!(labels.contains(&ComponentLabel::Plus) && labels.contains(&ComponentLabel::Minus));
        }
    }

    #[test]
    fn census_is_conjugation_invariant(
        axis in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        angle in 0.0f64..6.2,
        which in 0usize..4,
    ) {
        let v = Vector3::new(axis.0, axis.1, axis.2);
        prop_assume!(v.norm() > 1e-3);
        let g = match which {
            0 => cyclic(4).unwrap(),
            1 => cyclic(5).unwrap(),
            2 => quaternion_group().unwrap(),
            _ => binary_dihedral(3).unwrap(),
        };
        let u = UnitQuaternion::from_axis_angle(&nalgebra::Unit::new_normalize(v), angle);
        let h = g.conjugated(&u).unwrap();
        let mut a = census_involutions(&g).class_sizes();
        let mut b = census_involutions(&h).class_sizes();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn component_count_matches_predicate() {
    let mut groups = Vec::new();
    for k in 1..=12 {
        groups.push((cyclic(k).unwrap(), k % 2 == 0));
    }
    groups.push((quaternion_group().unwrap(), true));
    for n in 2..=4 {
        groups.push((binary_dihedral(n).unwrap(), true));
    }
    for (g, has_minus_one) in groups {
        let count = component_count(&g, ActionKind::LeftMultiplication);
        assert!(!count.lower_bound);
        assert_eq!(
            count.count == 1,
            proper_quotient_predicate(&g),
            "{}",
            g.name
        );
        assert_eq!(count.count, if has_minus_one { 2 } else { 1 }, "{}", g.name);
        let census = census_involutions(&g);
        assert!(census.involutions.contains(&g.identity()));
        for &i in &census.involutions {
            for h in 0..g.order() {
                let c = g.mul(g.mul(h, i), g.inv(h));
                assert!(census.involutions.contains(&c));
            }
        }
    }
}

#[test]
fn other_actions_give_lower_bounds() {
    let count = component_count(&cyclic(2).unwrap(), ActionKind::Other);
    assert!(count.lower_bound);
    assert!(!count.assumptions.is_empty());
}

#[test]
fn gluing_scales_degrees() {
    for n in 1..=3 {
        let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let weights = vec![1; n];
        for l in [1usize, 2] {
            let rules: Vec<SigmaCoordRule> = match (n, l) {
                (2, 1) => twistor_core::twistor_model::quaternionic_pair_rules(),
                (_, 2) => (0..n)
                    .map(|i| SigmaCoordRule::new(i, 1, 0).unwrap())
                    .collect(),
                _ => continue,
            };
            let m = glue_cone_twistor(&[], &weights, l, &rules, &names).unwrap();
            assert_eq!(m.degrees, vec![l; n]);
        }
    }
}

#[test]
fn quadric_equation_count() {
    // twist 4: 2·2 + 1 real scalars, plus the real and imaginary parts of
    // the component equation
    let sys = real_section_system(&build_quadric()).unwrap();
    assert_eq!(sys.len(), 7);
    assert_eq!(sys.nvars(), 9);
    assert_eq!(sys.expected_regular_rank, Some(5));
}

#[test]
fn surjective_map_has_expected_kernel_degree() {
    // [1, ζ, ζ²]: O ⊕ O ⊕ O → O(2) has no common zero on P¹
    let one = || Complex::new(Rational::from_integer(1.into()), Rational::zero());
    let zero = || Complex::new(Rational::zero(), Rational::zero());
    let row = vec![
        CoeffPoly::new(2, vec![one()]).unwrap(),
        CoeffPoly::new(2, vec![zero(), one()]).unwrap(),
        CoeffPoly::new(2, vec![zero(), zero(), one()]).unwrap(),
    ];
    let split = kernel_splitting(std::slice::from_ref(&row), &[0, 0, 0], &[2]).unwrap();
    assert_eq!(split.total_degree(), -2);
    assert_eq!(split.degrees(), &[-1, -1]);
    // [ζ, ζ²] vanishes at 0: the kernel degree rises by one
    let split = kernel_splitting(&[row[1..].to_vec()], &[0, 0], &[2]).unwrap();
    assert_eq!(split.total_degree(), -1);
}
