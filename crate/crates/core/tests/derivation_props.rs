use std::sync::Arc;

use bvkit_core::random::{random_poly, rng, PolyShape};
use bvkit_core::{Context, Derivation, Gen, Parity, Poly, Scalar};
use proptest::prelude::*;

fn ctx() -> Arc<Context> {
    Context::builder()
        .field("x", Parity::Even)
        .field("a", Parity::Odd)
        .field("b", Parity::Odd)
        .field("c", Parity::Odd)
        .build()
        .unwrap()
}

fn random_derivation(r: &mut bvkit_core::random::Rng64, ctx: &Arc<Context>, parity: Parity) -> Derivation {
    let shape = PolyShape { max_degree: 3, max_terms: 3, ..PolyShape::default() };
    let images: Vec<(Gen, Poly)> =
        ctx.gens().map(|g| (g, random_poly(r, ctx, &shape.clone().with_parity(ctx.parity(g) + parity)))).collect();
    Derivation::new(ctx, parity, images).unwrap()
}

/// Vector-field form `D = Σ_v D(v) ∂_v`, independent of the Leibniz walk.
fn apply_by_vector_field(d: &Derivation, phi: &Poly) -> Poly {
    d.context().gens().fold(Poly::zero(d.context()), |acc, v| &acc + &(&d.image(v) * &phi.left_deriv(v).unwrap()))
}

fn parity_of(bit: bool) -> Parity {
    if bit {
        Parity::Odd
    } else {
        Parity::Even
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn apply_matches_vector_field_form(seed in any::<u64>(), odd in any::<bool>()) {
        let ctx = ctx();
        let mut r = rng(seed);
        let d = random_derivation(&mut r, &ctx, parity_of(odd));
        let phi = random_poly(&mut r, &ctx, &PolyShape::default());
        prop_assert_eq!(d.apply(&phi).unwrap(), apply_by_vector_field(&d, &phi));
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), odd in any::<bool>()) {
        let ctx = ctx();
        let mut r = rng(seed);
        let d = random_derivation(&mut r, &ctx, parity_of(odd));
        let a = bvkit_core::random::random_homogeneous(&mut r, &ctx, &PolyShape::default());
        let b = random_poly(&mut r, &ctx, &PolyShape::default());
        let sign = Scalar::from_int(if d.parity().sign_with(a.parity().unwrap()) { -1 } else { 1 });
        let rhs = &(&d.apply(&a).unwrap() * &b) + &(&a * &d.apply(&b).unwrap()).scale(&sign);
        prop_assert_eq!(d.apply(&(&a * &b)).unwrap(), rhs);
    }

    #[test]
    fn commutator_is_a_derivation(seed in any::<u64>(), p in any::<bool>(), q in any::<bool>()) {
        let ctx = ctx();
        let mut r = rng(seed);
        let d = random_derivation(&mut r, &ctx, parity_of(p));
        let e = random_derivation(&mut r, &ctx, parity_of(q));
        let de = d.commutator(&e).unwrap();
        let phi = random_poly(&mut r, &ctx, &PolyShape::default());
        let sign = Scalar::from_int(if d.parity().sign_with(e.parity()) { -1 } else { 1 });
        let composed = &d.apply(&e.apply(&phi).unwrap()).unwrap()
            - &e.apply(&d.apply(&phi).unwrap()).unwrap().scale(&sign);
        prop_assert_eq!(de.apply(&phi).unwrap(), composed);
    }

    #[test]
    fn linf_rows_reassemble_the_square(seed in any::<u64>(), n_max in 1u32..6) {
        let ctx = ctx();
        let mut r = rng(seed);
        let d = random_derivation(&mut r, &ctx, Parity::Odd);
        let report = d.linf_relations(n_max).unwrap();
        for (g, square) in d.square_residual() {
            let mut sum = report.overflow.get(&g).cloned().unwrap_or_else(|| Poly::zero(&ctx));
            for row in &report.rows {
                if let Some(p) = row.residuals.get(&g) {
                    sum = &sum + p;
                }
            }
            prop_assert_eq!(sum, square);
        }
    }
}

#[test]
fn nilpotent_on_generators_means_nilpotent() {
    let l = bvkit_core::LieModel::sl2();
    let coords = l.coordinates(None).unwrap();
    let d = l.brst_lie(&coords).unwrap();
    assert!(d.square_residual().is_empty());
    let mut r = rng(5);
    for _ in 0..50 {
        let phi = random_poly(&mut r, &coords.ctx, &PolyShape::default());
        assert!(d.apply(&d.apply(&phi).unwrap()).unwrap().is_zero());
    }
}

/// `δ₁: c3 ↦ b`, `δ₂` quadratic, `δ₃: b ↦ c1c2c3`; `δ₂` alone fails Jacobi.
fn homotopy_triple(with_third: bool) -> Derivation {
    let ctx = Context::builder()
        .field("c1", Parity::Odd)
        .field("c2", Parity::Odd)
        .field("c3", Parity::Odd)
        .field("b", Parity::Even)
        .build()
        .unwrap();
    let g = |n| Poly::var(&ctx, n).unwrap();
    let mut db = -(&g("c1") * &g("b"));
    if with_third {
        db = &db + &(&(&g("c1") * &g("c2")) * &g("c3"));
    }
    Derivation::new(
        &ctx,
        Parity::Odd,
        [(Gen(0), &g("c1") * &g("c2")), (Gen(2), &g("b") - &(&g("c1") * &g("c3"))), (Gen(3), db)],
    )
    .unwrap()
}

#[test]
fn homotopy_jacobi_triple() {
    let d = homotopy_triple(true);
    let components: Vec<u32> = d.homogeneous_components().iter().map(|(n, _)| *n).collect();
    assert_eq!(components, vec![1, 2, 3]);
    let quadratic = &d.homogeneous_components()[1].1;
    assert!(!quadratic.square_residual().is_empty());
    let report = d.linf_relations(3).unwrap();
    assert!(report.all_hold());

    let truncated = homotopy_triple(false).linf_relations(3).unwrap();
    let failing: Vec<u32> = truncated.rows.iter().filter(|r| !r.holds()).map(|r| r.n).collect();
    assert_eq!(failing, vec![3]);
    assert!(truncated.overflow.is_empty());
}
