use bvkit_core::random::{random_poly, rng, PolyShape, Rng64};
use bvkit_core::{
    exp_delta, gauge_independence_experiment, lagrangian_integral, phase_space, restrict_poly, restrict_to_lagrangian,
    standard_damping, stokes_experiment, BvSpace, Error, ExpElement, GaugeFermion, Gen, Parity, Poly, Scalar,
};
use proptest::prelude::*;

fn space() -> BvSpace {
    let ctx = phase_space(&[("x", Parity::Even), ("t", Parity::Odd)], "p").unwrap();
    BvSpace::new(&ctx).unwrap()
}

fn v(bv: &BvSpace, n: &str) -> Poly {
    Poly::var(bv.context(), n).unwrap()
}

fn gauges(bv: &BvSpace) -> Vec<GaugeFermion> {
    [0, 1, 2, -3]
        .into_iter()
        .map(|a| GaugeFermion::new((&v(bv, "t") * &v(bv, "x")).scale(&Scalar::from_int(a))).unwrap())
        .collect()
}

fn fields(bv: &BvSpace) -> Vec<Gen> {
    bv.pairs().iter().map(|&(x, _)| x).collect()
}

fn random_gauge(r: &mut Rng64, bv: &BvSpace) -> GaugeFermion {
    let s = PolyShape { max_degree: 3, max_terms: 3, ..PolyShape::default() }
        .with_gens(fields(bv))
        .with_parity(Parity::Odd);
    GaugeFermion::new(random_poly(r, bv.context(), &s)).unwrap()
}

fn random_xi(r: &mut Rng64, bv: &BvSpace) -> ExpElement {
    let p = random_poly(r, bv.context(), &PolyShape { max_degree: 4, max_terms: 4, ..PolyShape::default() });
    ExpElement::single(p, standard_damping(bv)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_delta_squares_to_zero(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let even = PolyShape { max_degree: 2, max_terms: 3, parity: Some(Parity::Even), ..PolyShape::default() };
        let pairs: Vec<(Poly, Poly)> = (0..2)
            .map(|_| (random_poly(&mut r, bv.context(), &PolyShape::default()), random_poly(&mut r, bv.context(), &even)))
            .collect();
        let phi = ExpElement::new(bv.context(), pairs).unwrap();
        prop_assert!(exp_delta(&bv, &exp_delta(&bv, &phi).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn exp_delta_without_exponent_is_delta(seed in any::<u64>()) {
        let bv = space();
        let p = random_poly(&mut rng(seed), bv.context(), &PolyShape { max_degree: 4, ..PolyShape::default() });
        prop_assert_eq!(exp_delta(&bv, &ExpElement::from_poly(p.clone())).unwrap(), ExpElement::from_poly(bv.delta(&p).unwrap()));
    }

    #[test]
    fn nilpotent_exponent_agrees_with_expanded_delta(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let p = random_poly(&mut r, bv.context(), &PolyShape::default());
        let n = &v(&bv, "t") * &v(&bv, "xp").scale(&Scalar::from_int(2));
        let lhs = exp_delta(&bv, &ExpElement::single(p.clone(), n.clone()).unwrap()).unwrap();
        let expanded = &p * &(&Poly::one(bv.context()) + &n);
        prop_assert_eq!(lhs, ExpElement::from_poly(bv.delta(&expanded).unwrap()));
    }

    #[test]
    fn restriction_is_a_morphism(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let g = random_gauge(&mut r, &bv);
        let a = random_poly(&mut r, bv.context(), &PolyShape::default());
        let b = random_poly(&mut r, bv.context(), &PolyShape::default());
        let ab = restrict_poly(&bv, &(&a * &b), &g).unwrap();
        prop_assert_eq!(ab, &restrict_poly(&bv, &a, &g).unwrap() * &restrict_poly(&bv, &b, &g).unwrap());
        prop_assert!(!restrict_poly(&bv, &a, &g).unwrap().involves_antifields());
        let t = standard_damping(&bv);
        let formed = restrict_to_lagrangian(&bv, &ExpElement::single(a.clone(), t.clone()).unwrap(), &g).unwrap();
        let separately = ExpElement::single(restrict_poly(&bv, &a, &g).unwrap(), restrict_poly(&bv, &t, &g).unwrap()).unwrap();
        prop_assert_eq!(formed, separately);
    }

    #[test]
    fn exact_integrands_integrate_to_zero(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let xi = random_xi(&mut r, &bv);
        let g = random_gauge(&mut r, &bv);
        prop_assert!(lagrangian_integral(&bv, &exp_delta(&bv, &xi).unwrap(), &g).unwrap().is_zero());
    }

    #[test]
    fn closed_integrands_are_gauge_independent(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let phi0 = random_poly(&mut r, bv.context(), &PolyShape::default().with_gens(fields(&bv)));
        let closed = ExpElement::single(phi0, standard_damping(&bv))
            .unwrap()
            .checked_add(&exp_delta(&bv, &random_xi(&mut r, &bv)).unwrap())
            .unwrap();
        let mut family = gauges(&bv);
        family.push(random_gauge(&mut r, &bv));
        let report = gauge_independence_experiment(&bv, &closed, &family).unwrap();
        prop_assert!(report.all_equal());
    }
}

#[test]
fn fixed_exact_integrand_vanishes_in_every_gauge() {
    let bv = space();
    let xi = ExpElement::single(&v(&bv, "xp") * &v(&bv, "t"), standard_damping(&bv)).unwrap();
    let report = stokes_experiment(&bv, &xi, &gauges(&bv)).unwrap();
    assert_eq!(report.values.len(), 4);
    assert!(report.all_zero());
}

#[test]
fn two_field_space_integrals() {
    let ctx =
        phase_space(&[("x", Parity::Even), ("y", Parity::Even), ("a", Parity::Odd), ("b", Parity::Odd)], "p").unwrap();
    let bv = BvSpace::new(&ctx).unwrap();
    let g = |n| Poly::var(&ctx, n).unwrap();
    let top = ExpElement::single(&(&g("a") * &g("b")) * &(&g("x") * &g("x")), standard_damping(&bv)).unwrap();
    let zero_gauge = GaugeFermion::new(Poly::zero(&ctx)).unwrap();
    assert_eq!(lagrangian_integral(&bv, &top, &zero_gauge).unwrap(), Scalar::one());
    let mut r = rng(2);
    for _ in 0..10 {
        let xi = ExpElement::single(random_poly(&mut r, &ctx, &PolyShape::default()), standard_damping(&bv)).unwrap();
        let gauge = random_gauge(&mut r, &bv);
        assert!(lagrangian_integral(&bv, &exp_delta(&bv, &xi).unwrap(), &gauge).unwrap().is_zero());
    }
}

#[test]
fn non_closed_integrand_is_refused_with_residual() {
    let bv = space();
    let phi = ExpElement::single(&v(&bv, "x") * &v(&bv, "xp"), standard_damping(&bv)).unwrap();
    match gauge_independence_experiment(&bv, &phi, &gauges(&bv)) {
        Err(Error::NotDeltaClosed(residual)) => assert!(!residual.is_zero()),
        other => panic!("expected refusal, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn graph_constraints_are_in_involution(seed in any::<u64>()) {
        let ctx = phase_space(&[("x", Parity::Even), ("y", Parity::Even), ("a", Parity::Odd), ("b", Parity::Odd)], "p").unwrap();
        let bv = BvSpace::new(&ctx).unwrap();
        let g = random_gauge(&mut rng(seed), &bv);
        let map = g.substitution(&bv).unwrap();
        let constraints: Vec<Poly> = bv
            .pairs()
            .iter()
            .map(|&(_, xp)| &Poly::generator(&ctx, xp) - &map[&xp])
            .collect();
        for a in &constraints {
            for b in &constraints {
                prop_assert!(bv.bracket(a, b).unwrap().is_zero());
            }
        }
    }
}
