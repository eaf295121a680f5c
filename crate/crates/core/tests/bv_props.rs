use std::sync::Arc;

use bvkit_core::random::{random_homogeneous, random_poly, rng, PolyShape, Rng64};
use bvkit_core::{phase_space, BvSpace, Context, Derivation, Gen, Identity, LieModel, Parity, Poly, Scalar};
use proptest::prelude::*;

fn space() -> BvSpace {
    let ctx =
        phase_space(&[("x", Parity::Even), ("y", Parity::Even), ("t", Parity::Odd), ("u", Parity::Odd)], "p").unwrap();
    BvSpace::new(&ctx).unwrap()
}

fn shape() -> PolyShape {
    PolyShape { max_degree: 3, max_terms: 4, ..PolyShape::default() }
}

fn action_shape() -> PolyShape {
    PolyShape {
        max_degree: 3,
        max_terms: 4,
        hbar: Some((0, 2)),
        imaginary: true,
        parity: Some(Parity::Even),
        ..PolyShape::default()
    }
}

fn field_derivation(r: &mut Rng64, bv: &BvSpace) -> Derivation {
    let ctx = bv.context();
    let fields: Vec<Gen> = bv.pairs().iter().map(|&(x, _)| x).collect();
    let images: Vec<(Gen, Poly)> = fields
        .iter()
        .map(|&x| {
            let s = PolyShape { max_degree: 2, max_terms: 2, ..PolyShape::default() }
                .with_gens(fields.clone())
                .with_parity(ctx.parity(x).flip());
            (x, random_poly(r, ctx, &s))
        })
        .collect();
    Derivation::new(ctx, Parity::Odd, images).unwrap()
}

fn antifield_free(r: &mut Rng64, bv: &BvSpace) -> Poly {
    let fields: Vec<Gen> = bv.pairs().iter().map(|&(x, _)| x).collect();
    random_poly(r, bv.context(), &shape().with_gens(fields))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bv_algebra_identities(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let args: Vec<Poly> = (0..3).map(|_| random_homogeneous(&mut r, bv.context(), &shape())).collect();
        for id in Identity::ALL {
            prop_assert!(id.residual(&bv, &args).unwrap().is_zero(), "{}", id.name());
        }
    }

    #[test]
    fn delta_squares_to_zero_on_mixed_input(seed in any::<u64>()) {
        let bv = space();
        let p = random_poly(&mut rng(seed), bv.context(), &PolyShape { max_degree: 4, ..shape() });
        prop_assert!(bv.delta(&bv.delta(&p).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn delta_flips_parity(seed in any::<u64>()) {
        let bv = space();
        let p = random_homogeneous(&mut rng(seed), bv.context(), &shape());
        let d = bv.delta(&p).unwrap();
        prop_assert!(d.is_zero() || d.parity() == Some(p.parity().unwrap().flip()));
    }

    #[test]
    fn s1_generates_the_derivation(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let d = field_derivation(&mut r, &bv);
        let s1 = bv.s1_of(&d).unwrap();
        prop_assert!(s1.is_even());
        let phi = antifield_free(&mut r, &bv);
        prop_assert_eq!(bv.bracket(&s1, &phi).unwrap(), d.apply(&phi).unwrap());
        prop_assert_eq!(bv.bracket(&s1, &s1).unwrap(), d.apply(&s1).unwrap().scale(&Scalar::from_int(2)));
        prop_assert_eq!(bv.extract_derivation(&s1).unwrap(), d.clone());
        if d.square_residual().is_empty() {
            prop_assert!(bv.bracket(&s1, &s1).unwrap().is_zero());
        }
    }

    #[test]
    fn omega_squared_is_half_bracket_with_residual(seed in any::<u64>()) {
        let bv = space();
        let mut r = rng(seed);
        let s = random_poly(&mut r, bv.context(), &action_shape());
        let psi = random_poly(&mut r, bv.context(), &PolyShape { hbar: Some((0, 1)), ..shape() });
        let twice = bv.omega_apply(&s, &bv.omega_apply(&s, &psi).unwrap()).unwrap();
        let qme = bv.quantum_master_residual(&s).unwrap();
        prop_assert_eq!(twice, bv.bracket(&qme, &psi).unwrap().scale(&Scalar::from_ratio(1, 2)));
    }

    #[test]
    fn hbar_rows_sum_to_quantum_residual(seed in any::<u64>()) {
        let bv = space();
        let s = random_poly(&mut rng(seed), bv.context(), &PolyShape { hbar: Some((-1, 2)), ..action_shape() });
        let sum = bv
            .hbar_equations(&s)
            .unwrap()
            .into_iter()
            .fold(Poly::zero(bv.context()), |acc, (k, r)| &acc + &r.scale(&Scalar::hbar_pow(k)));
        prop_assert_eq!(sum, bv.quantum_master_residual(&s).unwrap());
    }
}

#[test]
fn master_equation_for_invariant_lift() {
    let l = LieModel::sl2().with_coadjoint(vec!["vh".into(), "ve".into(), "vf".into()]).unwrap();
    let coords = l.coordinates(Some("_plus")).unwrap();
    let bv = BvSpace::new(&coords.ctx).unwrap();
    let d = l.brst_rep(&coords).unwrap();
    let v = |n| Poly::var(&coords.ctx, n).unwrap();
    let s1 = bv.s1_of(&d).unwrap();
    let s0 = &(&v("vh") * &v("vh")) + &(&v("ve") * &v("vf")).scale(&Scalar::from_int(4));
    assert!(d.apply(&s0).unwrap().is_zero());
    let s = &s0 + &s1.scale(&Scalar::hbar());
    assert!(bv.classical_master_residual(&s).unwrap().is_zero());
    assert!(bv.quantum_master_residual(&s1.scale(&Scalar::hbar())).unwrap().is_zero());

    let s = &v("ve") + &s1.scale(&Scalar::hbar());
    let expected = d.apply(&v("ve")).unwrap().scale(&(Scalar::from_int(2) * Scalar::hbar()));
    assert!(!expected.is_zero());
    assert_eq!(bv.classical_master_residual(&s).unwrap(), expected);
}

#[test]
fn antifield_free_actions_solve_the_classical_equation() {
    let bv = space();
    let mut r = rng(99);
    for _ in 0..20 {
        let s = antifield_free(&mut r, &bv);
        let (even, _) = s.parity_parts();
        assert!(bv.classical_master_residual(&even).unwrap().is_zero());
        let rows = bv.hbar_equations(&even).unwrap();
        assert!(rows.iter().all(|(_, p)| p.is_zero()));
    }
}

#[test]
fn omega_is_nilpotent_on_quantum_solutions() {
    let l = LieModel::sl2().with_adjoint(vec!["vh".into(), "ve".into(), "vf".into()]).unwrap();
    let coords = l.coordinates(Some("_plus")).unwrap();
    let bv = BvSpace::new(&coords.ctx).unwrap();
    let s = bv.s1_of(&l.brst_rep(&coords).unwrap()).unwrap().scale(&Scalar::hbar());
    assert!(bv.quantum_master_residual(&s).unwrap().is_zero());
    let mut r = rng(17);
    for _ in 0..30 {
        let psi = random_poly(&mut r, bv.context(), &shape());
        assert!(bv.omega_apply(&s, &bv.omega_apply(&s, &psi).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn pairing_respects_declaration() {
    let ctx: Arc<Context> = phase_space(&[("x", Parity::Even), ("t", Parity::Odd)], "p").unwrap();
    let bv = BvSpace::new(&ctx).unwrap();
    for &(x, xp) in bv.pairs() {
        assert_eq!(ctx.parity(xp), ctx.parity(x).flip());
        assert_eq!(ctx.antifield_of(x), Some(xp));
    }
}
