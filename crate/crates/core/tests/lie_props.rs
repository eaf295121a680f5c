use bvkit_core::random::{random_lie_model, rng};
use bvkit_core::{BvSpace, LieModel, Poly, Scalar};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn names(p: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{p}{i}")).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lie_nilpotence_iff_jacobi(seed in any::<u64>(), density in 0.1f64..0.6) {
        let l = random_lie_model(&mut rng(seed), 3, 0, 2, density);
        let coords = l.coordinates(None).unwrap();
        let nilpotent = l.brst_lie(&coords).unwrap().square_residual().is_empty();
        prop_assert_eq!(nilpotent, l.jacobi_check().is_empty());
    }

    #[test]
    fn rep_nilpotence_iff_both_checks(seed in any::<u64>(), entry in 0usize..27, value in -2i64..=2) {
        let base = LieModel::sl2().with_adjoint(names("v", 3)).unwrap();
        let mut l = base.clone();
        let (i, j, k) = (entry / 9, (entry / 3) % 3, entry % 3);
        l.set_rho(i, j, k, base.rho(i, j, k) + q(value));
        if seed % 3 == 0 {
            let (a, b) = ((seed / 3 % 3) as usize, (seed / 9 % 3) as usize);
            if a != b {
                l.set_f(0, a, b, l.f(0, a, b) + q(1));
            }
        }
        let coords = l.coordinates(None).unwrap();
        let nilpotent = l.brst_rep(&coords).unwrap().square_residual().is_empty();
        prop_assert_eq!(nilpotent, l.jacobi_check().is_empty() && l.rep_check().is_empty());
    }

    #[test]
    fn trace_condition_is_divergence(seed in any::<u64>(), m in 1usize..4, n in 0usize..3) {
        let l = random_lie_model(&mut rng(seed), m, n, 2, 0.5);
        let coords = l.coordinates(Some("_plus")).unwrap();
        let bv = BvSpace::new(&coords.ctx).unwrap();
        let s1 = bv.s1_of(&l.brst_rep(&coords).unwrap()).unwrap();
        prop_assert_eq!(l.trace_condition(&coords).unwrap(), bv.delta(&s1).unwrap());
    }
}

fn valid_models() -> Vec<LieModel> {
    vec![
        LieModel::sl2(),
        LieModel::so3(),
        LieModel::heisenberg(),
        LieModel::solvable2(),
        LieModel::abelian(3),
        LieModel::sl2().with_adjoint(names("v", 3)).unwrap(),
        LieModel::sl2().with_coadjoint(names("v", 3)).unwrap(),
        LieModel::heisenberg().with_adjoint(names("v", 3)).unwrap(),
        LieModel::solvable2().with_coadjoint(names("v", 2)).unwrap(),
    ]
}

#[test]
fn ce_matrices_compose_to_zero() {
    for l in valid_models() {
        assert!(l.jacobi_check().is_empty() && l.rep_check().is_empty());
        let coords = l.coordinates(None).unwrap();
        for p in 0..=1 {
            if p == 1 && l.module_dim() == 0 {
                continue;
            }
            let mats = l.ce_matrices(&coords, p).unwrap();
            for w in mats.windows(2) {
                assert!(w[1].mul(&w[0]).is_zero());
            }
        }
    }
}

#[test]
fn euler_characteristic_vanishes() {
    for l in valid_models() {
        let coords = l.coordinates(None).unwrap();
        let dims = l.ce_cohomology_dims(&coords, 0).unwrap();
        let chi: i64 = dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        assert_eq!(chi, 0);
    }
    for m in 1..=4 {
        let l = LieModel::abelian(m);
        let dims = l.ce_cohomology_dims(&l.coordinates(None).unwrap(), 0).unwrap();
        assert_eq!(dims, (0..=m).map(|k| binomial(m, k)).collect::<Vec<_>>());
    }
}

#[test]
fn quadratic_invariants_of_sl2() {
    let sq = |p: &Poly| p * p;
    // adjoint as literally defined: v_h² + v_e v_f
    let adj = LieModel::sl2().with_adjoint(vec!["vh".into(), "ve".into(), "vf".into()]).unwrap();
    let coords = adj.coordinates(None).unwrap();
    let v = |n| Poly::var(&coords.ctx, n).unwrap();
    let d = adj.brst_rep(&coords).unwrap();
    assert!(d.apply(&(&sq(&v("vh")) + &(&v("ve") * &v("vf")))).unwrap().is_zero());
    assert!(!d.apply(&(&sq(&v("vh")) + &(&v("ve") * &v("vf")).scale(&Scalar::from_int(4)))).unwrap().is_zero());

    // dual presentation: v_h² + 4 v_e v_f
    let co = LieModel::sl2().with_coadjoint(vec!["vh".into(), "ve".into(), "vf".into()]).unwrap();
    let coords = co.coordinates(None).unwrap();
    let v = |n| Poly::var(&coords.ctx, n).unwrap();
    let d = co.brst_rep(&coords).unwrap();
    assert!(d.apply(&(&sq(&v("vh")) + &(&v("ve") * &v("vf")).scale(&Scalar::from_int(4)))).unwrap().is_zero());
}

#[test]
fn adjoint_and_coadjoint_traces_vanish_for_sl2() {
    for l in
        [LieModel::sl2().with_adjoint(names("v", 3)).unwrap(), LieModel::sl2().with_coadjoint(names("v", 3)).unwrap()]
    {
        assert!(l.trace_condition(&l.coordinates(None).unwrap()).unwrap().is_zero());
    }
}
