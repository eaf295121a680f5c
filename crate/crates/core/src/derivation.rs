//! Parity-homogeneous derivations of `F(V)` given by their values on generators,
//! and the homogeneous-component (L∞) analysis of their squares.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::context::{Context, Gen, Parity};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{same_context, Poly};
use crate::scalar::Scalar;

/// A derivation `D` of parity `d`, determined by the images `D(v)` of the
/// generators. Unlisted generators map to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    ctx: Arc<Context>,
    parity: Parity,
    images: BTreeMap<Gen, Poly>,
}

impl Derivation {
    pub fn zero(ctx: &Arc<Context>, parity: Parity) -> Derivation {
        Derivation { ctx: ctx.clone(), parity, images: BTreeMap::new() }
    }

    /// Checks `parity(D(v)) = parity(v) + parity(D)` for every nonzero image.
    pub fn new(
        ctx: &Arc<Context>,
        parity: Parity,
        images: impl IntoIterator<Item = (Gen, Poly)>,
    ) -> Result<Derivation> {
        let mut out = Derivation::zero(ctx, parity);
        for (g, image) in images {
            ctx.check(g)?;
            if !same_context(ctx, image.context()) {
                return Err(Error::ContextMismatch);
            }
            if image.is_zero() {
                continue;
            }
            let want = ctx.parity(g) + parity;
            if image.parity() != Some(want) {
                return Err(Error::InvalidDerivation(format!(
                    "image of `{}` must be {want} for a {parity} derivation, got {image}",
                    ctx.name(g)
                )));
            }
            let slot = out.images.entry(g).or_insert_with(|| Poly::zero(ctx));
            *slot = &*slot + &image;
        }
        out.images.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn image(&self, g: Gen) -> Poly {
        self.images.get(&g).cloned().unwrap_or_else(|| Poly::zero(&self.ctx))
    }

    /// Nonzero generator images in generator order.
    pub fn images(&self) -> impl Iterator<Item = (Gen, &Poly)> {
        self.images.iter().map(|(g, p)| (*g, p))
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    /// Applies `D` by the graded Leibniz rule: walking a canonical monomial
    /// left to right, `D` picks up `(-1)^(d·parity(prefix))` as it passes the
    /// prefix.
    pub fn apply(&self, phi: &Poly) -> Result<Poly> {
        if !same_context(&self.ctx, phi.context()) {
            return Err(Error::ContextMismatch);
        }
        let ctx = &self.ctx;
        let mut out = Poly::zero(ctx);
        for (m, c) in phi.terms() {
            // even factors come first and the prefix before them is even
            for (slot, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let g = ctx.even_gen(slot);
                let Some(image) = self.images.get(&g) else { continue };
                let mut rest = m.clone();
                rest.even[slot] -= 1;
                let coeff = c * &Scalar::from_int(i64::from(e));
                out = &out + &(image * &Poly::from_terms(ctx, [(rest, coeff)]));
            }
            for (preceding, slot) in m.odd_slots().enumerate() {
                let g = ctx.odd_gen(slot);
                if let Some(image) = self.images.get(&g) {
                    let bit = 1u64 << slot;
                    let prefix = Monomial { even: m.even.clone(), odd: m.odd & (bit - 1) };
                    let suffix = Monomial { even: vec![0; m.even.len()], odd: m.odd & !(bit | (bit - 1)) };
                    let negative = self.parity.is_odd() && preceding % 2 == 1;
                    let coeff = if negative { -c.clone() } else { c.clone() };
                    let term = &(&Poly::from_terms(ctx, [(prefix, coeff)]) * image)
                        * &Poly::from_terms(ctx, [(suffix, Scalar::one())]);
                    out = &out + &term;
                }
            }
        }
        Ok(out)
    }

    /// `D(D(v))` for every generator `v`, zero entries omitted.
    /// `D² = 0` on all of `F(V)` iff this map is empty.
    pub fn square_residual(&self) -> BTreeMap<Gen, Poly> {
        self.ctx
            .gens()
            .filter_map(|g| {
                let r = self.apply(&self.image(g)).expect("same context");
                (!r.is_zero()).then_some((g, r))
            })
            .collect()
    }

    /// Graded commutator `[D, E] = D∘E − (−1)^(d·e) E∘D`, again a derivation.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let sign_flip = self.parity.sign_with(other.parity);
        let images = self.ctx.gens().map(|g| {
            let de = self.apply(&other.image(g)).expect("same context");
            let ed = other.apply(&self.image(g)).expect("same context");
            (g, if sign_flip { &de + &ed } else { &de - &ed })
        });
        Derivation::new(&self.ctx, self.parity + other.parity, images)
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidDerivation("cannot add derivations of different parity".into()));
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        Derivation::new(&self.ctx, parity, self.images().chain(other.images()).map(|(g, p)| (g, p.clone())))
    }

    /// Splits `D = Σ D_n` where `D_n(v)` is the total-degree-`n` part of `D(v)`.
    pub fn homogeneous_components(&self) -> Vec<(u32, Derivation)> {
        let mut by_degree: BTreeMap<u32, Vec<(Gen, Poly)>> = BTreeMap::new();
        for (g, image) in &self.images {
            let degrees: std::collections::BTreeSet<u32> = image.terms().map(|(m, _)| m.degree()).collect();
            for n in degrees {
                by_degree.entry(n).or_default().push((*g, image.degree_part(n)));
            }
        }
        by_degree
            .into_iter()
            .map(|(n, images)| {
                let d = Derivation::new(&self.ctx, self.parity, images).expect("components keep parity");
                (n, d)
            })
            .collect()
    }

    /// Degree-graded pieces of `D∘D` on generators, rows `n = 0..=n_max`.
    ///
    /// For a derivation assembled from homogeneous brackets, row `n` collects
    /// the arity-`n` quadratic relation `Σ_{a+b=n+1} D_a D_b` (so rows 1–3 are
    /// `D₁² = 0`, `D₁D₂ + D₂D₁ = 0`, `D₁D₃ + D₂² + D₃D₁ = 0`). Anything of
    /// degree above `n_max` is kept in `overflow` so rows plus overflow always
    /// reassemble [`Derivation::square_residual`].
    pub fn linf_relations(&self, n_max: u32) -> Result<LinfReport> {
        if n_max < 1 {
            return Err(Error::InvalidDerivation("n_max must be at least 1".into()));
        }
        let squares: BTreeMap<Gen, Poly> = self.square_residual();
        let rows = (0..=n_max)
            .map(|n| LinfRow {
                n,
                residuals: squares.iter().map(|(g, p)| (*g, p.degree_part(n))).filter(|(_, p)| !p.is_zero()).collect(),
            })
            .collect();
        let overflow = squares
            .iter()
            .map(|(g, p)| (*g, p.filter_terms(|m| m.degree() > n_max)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        Ok(LinfReport { rows, overflow })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinfRow {
    pub n: u32,
    /// Nonzero degree-`n` parts of `D(D(v))`, per generator.
    pub residuals: BTreeMap<Gen, Poly>,
}

impl LinfRow {
    pub fn holds(&self) -> bool {
        self.residuals.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinfReport {
    pub rows: Vec<LinfRow>,
    pub overflow: BTreeMap<Gen, Poly>,
}

impl LinfReport {
    pub fn row(&self, n: u32) -> Option<&LinfRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(LinfRow::holds) && self.overflow.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghosts() -> Arc<Context> {
        Context::builder().field("ch", Parity::Odd).field("ce", Parity::Odd).field("cf", Parity::Odd).build().unwrap()
    }

    fn sl2_brst(ctx: &Arc<Context>) -> Derivation {
        let v = |n| Poly::var(ctx, n).unwrap();
        let (ch, ce, cf) = (v("ch"), v("ce"), v("cf"));
        let two = Scalar::from_int(2);
        Derivation::new(
            ctx,
            Parity::Odd,
            [
                (ctx.lookup("ch").unwrap(), &ce * &cf),
                (ctx.lookup("ce").unwrap(), (&ch * &ce).scale(&two)),
                (ctx.lookup("cf").unwrap(), (&ch * &cf).scale(&-two.clone())),
            ],
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let ctx = ghosts();
        let d = sl2_brst(&ctx);
        let v = |n| Poly::var(&ctx, n).unwrap();
        assert_eq!(d.apply(&v("ch")).unwrap(), &v("ce") * &v("cf"));
        assert!(d.apply(&Poly::one(&ctx)).unwrap().is_zero());
        assert!(d.apply(&(&v("ch") * &v("ce"))).unwrap().is_zero());
    }

    #[test]
    fn sl2_brst_squares_to_zero() {
        assert!(sl2_brst(&ghosts()).square_residual().is_empty());
    }

    #[test]
    fn perturbed_sl2_does_not_square_to_zero() {
        let ctx = ghosts();
        let v = |n| Poly::var(&ctx, n).unwrap();
        // [h,e] = 2e + h
        let mut d = sl2_brst(&ctx);
        d.images.insert(ctx.lookup("ch").unwrap(), &(&v("ce") * &v("cf")) + &(&v("ch") * &v("ce")));
        assert!(!d.square_residual().is_empty());
    }

    #[test]
    fn wrong_image_parity_is_rejected() {
        let ctx = ghosts();
        let err = Derivation::new(&ctx, Parity::Odd, [(Gen(0), Poly::var(&ctx, "ce").unwrap())]);
        assert!(matches!(err, Err(Error::InvalidDerivation(_))));
    }

    #[test]
    fn components_split_by_degree() {
        let ctx = Context::builder()
            .field("a", Parity::Odd)
            .field("b", Parity::Odd)
            .field("c", Parity::Odd)
            .field("x", Parity::Even)
            .build()
            .unwrap();
        let v = |n| Poly::var(&ctx, n).unwrap();
        // an even derivation: odd generator a goes to an odd image
        let image = &(&v("a") + &(&v("x") * &v("b"))) + &(&(&v("a") * &v("b")) * &v("c"));
        let d = Derivation::new(&ctx, Parity::Even, [(Gen(0), image)]).unwrap();
        let degrees: Vec<u32> = d.homogeneous_components().iter().map(|(n, _)| *n).collect();
        assert_eq!(degrees, vec![1, 2, 3]);

        let sl2 = sl2_brst(&ghosts());
        let degrees: Vec<u32> = sl2.homogeneous_components().iter().map(|(n, _)| *n).collect();
        assert_eq!(degrees, vec![2]);
        assert!(Derivation::zero(&ctx, Parity::Odd).homogeneous_components().is_empty());
    }

    #[test]
    fn linf_rows_for_pure_lie_brst() {
        let d = sl2_brst(&ghosts());
        let report = d.linf_relations(3).unwrap();
        assert!(report.all_hold());
        assert!(d.linf_relations(0).is_err());
    }

    #[test]
    fn linear_differential_rows_vanish() {
        // δ₁ only: a ↦ x, x ↦ 0 on (a odd, x even); δ₁² = 0
        let ctx = Context::builder().field("a", Parity::Odd).field("x", Parity::Even).build().unwrap();
        let d = Derivation::new(&ctx, Parity::Odd, [(Gen(0), Poly::var(&ctx, "x").unwrap())]).unwrap();
        assert!(d.linf_relations(3).unwrap().all_hold());
    }
}
