//! Seeded random generators for property tests and the identity suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use num_rational::BigRational;

use crate::context::{Context, Gen, Parity};
use crate::lie::LieModel;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::{GaussRational, Scalar};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random polynomial.
#[derive(Clone, Debug)]
pub struct PolyShape {
    pub max_degree: u32,
    pub max_terms: usize,
    /// Integer coefficients are drawn from `−bound..=bound`, zero excluded.
    pub bound: i64,
    /// Forces every term to this parity.
    pub parity: Option<Parity>,
    /// Draws each coefficient's `ħ` power from this inclusive range.
    pub hbar: Option<(i32, i32)>,
    /// Allows imaginary parts.
    pub imaginary: bool,
    /// Restricts the generators used; all generators when `None`.
    pub gens: Option<Vec<Gen>>,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape { max_degree: 3, max_terms: 4, bound: 3, parity: None, hbar: None, imaginary: false, gens: None }
    }
}

impl PolyShape {
    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = Some(parity);
        self
    }

    pub fn with_gens(mut self, gens: Vec<Gen>) -> Self {
        self.gens = Some(gens);
        self
    }
}

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound.max(1));
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

pub fn random_scalar(rng: &mut impl Rng, shape: &PolyShape) -> Scalar {
    let re = BigRational::from_integer(nonzero(rng, shape.bound).into());
    let im = if shape.imaginary && rng.gen_bool(0.3) {
        BigRational::from_integer(nonzero(rng, shape.bound).into())
    } else {
        BigRational::from_integer(0.into())
    };
    let k = shape.hbar.map_or(0, |(lo, hi)| rng.gen_range(lo..=hi));
    Scalar::monomial(k, GaussRational::new(re, im))
}

/// A monomial of degree at most `degree` in the given generators; repeated
/// odd picks are dropped.
pub fn random_monomial(rng: &mut impl Rng, ctx: &Context, gens: &[Gen], degree: u32) -> Monomial {
    let mut m = Monomial::one(ctx);
    if gens.is_empty() {
        return m;
    }
    for _ in 0..degree {
        let g = gens[rng.gen_range(0..gens.len())];
        let slot = ctx.slot(g);
        match ctx.parity(g) {
            Parity::Even => m.even[slot] += 1,
            Parity::Odd => m.odd |= 1u64 << slot,
        }
    }
    m
}

pub fn random_poly(rng: &mut impl Rng, ctx: &Arc<Context>, shape: &PolyShape) -> Poly {
    let gens: Vec<Gen> = shape.gens.clone().unwrap_or_else(|| ctx.gens().collect());
    let n_terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut out = Poly::zero(ctx);
    for _ in 0..n_terms {
        for _ in 0..32 {
            let degree = rng.gen_range(0..=shape.max_degree);
            let m = random_monomial(rng, ctx, &gens, degree);
            if shape.parity.is_none_or(|p| m.parity() == p) {
                out.add_term(m, random_scalar(rng, shape));
                break;
            }
        }
    }
    out
}

/// A random homogeneous polynomial of random parity.
pub fn random_homogeneous(rng: &mut impl Rng, ctx: &Arc<Context>, shape: &PolyShape) -> Poly {
    let parity = if rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
    random_poly(rng, ctx, &shape.clone().with_parity(parity))
}

/// Antisymmetric structure constants and module constants with entries in
/// `−bound..=bound`, each nonzero with probability `density`. No identities
/// are imposed.
pub fn random_lie_model<R: Rng>(rng: &mut R, m: usize, n: usize, bound: i64, density: f64) -> LieModel {
    let basis = (1..=m).map(|i| format!("c{i}")).collect();
    let module = (1..=n).map(|i| format!("v{i}")).collect();
    let mut model = LieModel::builder(basis, module).build().expect("empty data is valid");
    let draw = |rng: &mut R| {
        if rng.gen_bool(density) {
            BigRational::from_integer(nonzero(rng, bound).into())
        } else {
            BigRational::from_integer(0.into())
        }
    };
    for i in 0..m {
        for j in 0..m {
            for k in j + 1..m {
                model.set_f(i, j, k, draw(rng));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                model.set_rho(i, j, k, draw(rng));
            }
        }
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::phase_space;

    #[test]
    fn seeded_draws_repeat() {
        let ctx = phase_space(&[("x", Parity::Even), ("t", Parity::Odd)], "p").unwrap();
        let shape = PolyShape { imaginary: true, hbar: Some((-1, 2)), ..PolyShape::default() };
        let a = random_poly(&mut rng(7), &ctx, &shape);
        let b = random_poly(&mut rng(7), &ctx, &shape);
        assert_eq!(a, b);
    }

    #[test]
    fn requested_parity_is_respected() {
        let ctx = phase_space(&[("x", Parity::Even), ("t", Parity::Odd)], "p").unwrap();
        let mut r = rng(1);
        for _ in 0..50 {
            let p = random_poly(&mut r, &ctx, &PolyShape::default().with_parity(Parity::Odd));
            assert!(p.is_zero() || p.is_odd());
        }
    }

    #[test]
    fn random_models_are_antisymmetric() {
        let model = random_lie_model(&mut rng(3), 3, 2, 2, 0.5);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(*model.f(i, j, k), -model.f(i, k, j).clone());
                }
            }
        }
    }
}
