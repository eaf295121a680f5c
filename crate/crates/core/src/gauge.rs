//! Exponential integrands `Σ P·e^T`, graph Lagrangians `x⁺ = ∂F/∂x` and exact
//! integration over them (Berezin in odd directions, normalized Gaussian
//! moments in even ones).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bv::BvSpace;
use crate::context::{Context, Gen, Parity};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{same_context, Poly};
use crate::scalar::Scalar;

/// A finite sum `Σ P·e^T` with every `T` even.
///
/// Stored in normal form: each exponent has no nilpotent part (monomials
/// containing an odd generator are expanded into the prefactor), exponents are
/// pairwise distinct and prefactors nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpElement {
    ctx: Arc<Context>,
    pairs: Vec<(Poly, Poly)>,
}

fn ordering_key(p: &Poly) -> Vec<(Monomial, Scalar)> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// `e^N` for nilpotent `N`, as a finite sum.
fn exp_nilpotent(n: &Poly) -> Poly {
    let ctx = n.context();
    let mut out = Poly::one(ctx);
    let mut power = Poly::one(ctx);
    let mut k = 0i64;
    let mut factorial = BigInt::one();
    loop {
        k += 1;
        power = &power * n;
        if power.is_zero() {
            return out;
        }
        factorial *= k;
        let inv = Scalar::from_rational(BigRational::new(BigInt::one(), factorial.clone()));
        out = &out + &power.scale(&inv);
    }
}

impl ExpElement {
    pub fn zero(ctx: &Arc<Context>) -> ExpElement {
        ExpElement { ctx: ctx.clone(), pairs: Vec::new() }
    }

    /// Builds `Σ P·e^T` from pairs; every exponent must be even.
    pub fn new(ctx: &Arc<Context>, pairs: impl IntoIterator<Item = (Poly, Poly)>) -> Result<ExpElement> {
        let pairs: Vec<(Poly, Poly)> = pairs.into_iter().collect();
        for (p, t) in &pairs {
            if !same_context(p.context(), ctx) || !same_context(t.context(), ctx) {
                return Err(Error::ContextMismatch);
            }
            if !t.is_even() {
                return Err(Error::ParityMismatch(format!("exponent `{t}` must be even")));
            }
        }
        Ok(Self::normalize(ctx, pairs))
    }

    /// `P·e^0`.
    pub fn from_poly(p: Poly) -> ExpElement {
        let ctx = p.context().clone();
        Self::normalize(&ctx, vec![(p.clone(), Poly::zero(&ctx))])
    }

    /// `P·e^T` for a single pair.
    pub fn single(p: Poly, t: Poly) -> Result<ExpElement> {
        let ctx = p.context().clone();
        Self::new(&ctx, [(p, t)])
    }

    fn normalize(ctx: &Arc<Context>, pairs: Vec<(Poly, Poly)>) -> ExpElement {
        let mut merged: Vec<(Poly, Poly)> = Vec::new();
        for (p, t) in pairs {
            if p.is_zero() {
                continue;
            }
            let body = t.filter_terms(|m| m.odd_bits() == 0);
            let nil = &t - &body;
            let p = if nil.is_zero() { p } else { &p * &exp_nilpotent(&nil) };
            match merged.iter_mut().find(|(_, b)| *b == body) {
                Some(entry) => entry.0 = &entry.0 + &p,
                None => merged.push((p, body)),
            }
        }
        merged.retain(|(p, _)| !p.is_zero());
        merged.sort_by_cached_key(|(_, t)| ordering_key(t));
        ExpElement { ctx: ctx.clone(), pairs: merged }
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// Normalized `(P, T)` pairs, ordered by exponent.
    pub fn pairs(&self) -> &[(Poly, Poly)] {
        &self.pairs
    }

    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn involves_antifields(&self) -> bool {
        self.pairs.iter().any(|(p, t)| p.involves_antifields() || t.involves_antifields())
    }

    pub fn checked_add(&self, other: &ExpElement) -> Result<ExpElement> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::normalize(&self.ctx, self.pairs.iter().chain(&other.pairs).cloned().collect()))
    }

    pub fn scale(&self, c: &Scalar) -> ExpElement {
        Self::normalize(&self.ctx, self.pairs.iter().map(|(p, t)| (p.scale(c), t.clone())).collect())
    }

    /// Multiplies every prefactor by `q`.
    pub fn mul_poly(&self, q: &Poly) -> Result<ExpElement> {
        let pairs = self.pairs.iter().map(|(p, t)| Ok((q.checked_mul(p)?, t.clone()))).collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(&self.ctx, pairs))
    }
}

impl fmt::Display for ExpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, t)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if t.is_zero() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*exp({t})")?;
            }
        }
        Ok(())
    }
}

/// `Δ(Σ P·e^T) = Σ (ΔP + (−1)^P̄{P,T} + (−1)^P̄ P(ΔT + ½{T,T}))·e^T`.
pub fn exp_delta(bv: &BvSpace, phi: &ExpElement) -> Result<ExpElement> {
    if !same_context(bv.context(), phi.context()) {
        return Err(Error::ContextMismatch);
    }
    let half = Scalar::from_ratio(1, 2);
    let mut out = Vec::with_capacity(phi.pairs.len());
    for (p, t) in &phi.pairs {
        let weight = &bv.delta(t)? + &bv.bracket(t, t)?.scale(&half);
        let mut coef = Poly::zero(phi.context());
        for (parity, part) in p.homogeneous_parts() {
            let signed = &bv.bracket(&part, t)? + &(&part * &weight);
            coef = &coef + &bv.delta(&part)?;
            coef = if parity.is_odd() { &coef - &signed } else { &coef + &signed };
        }
        out.push((coef, t.clone()));
    }
    ExpElement::new(phi.context(), out)
}

/// An odd, antifield-free function of the fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFermion {
    f: Poly,
}

impl GaugeFermion {
    pub fn new(f: Poly) -> Result<GaugeFermion> {
        if !f.is_zero() && f.parity() != Some(Parity::Odd) {
            return Err(Error::InvalidGaugeFermion(format!("`{f}` is not odd")));
        }
        let ctx = f.context().clone();
        if let Some(g) = ctx.gens().find(|&g| !ctx.is_field(g) && f.involves(g)) {
            return Err(Error::InvalidGaugeFermion(format!("`{f}` depends on non-field `{}`", ctx.name(g))));
        }
        Ok(GaugeFermion { f })
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    /// `x⁺_i ↦ ←∂F/∂x^i` for every pair of the space. The right derivative
    /// makes `L_F` isotropic for the antibracket of [`BvSpace::bracket`];
    /// it differs from `∂F/∂x^i` by a sign exactly when `x^i` is odd.
    pub fn substitution(&self, bv: &BvSpace) -> Result<BTreeMap<Gen, Poly>> {
        if !same_context(bv.context(), self.f.context()) {
            return Err(Error::ContextMismatch);
        }
        bv.pairs().iter().map(|&(x, xp)| Ok((xp, self.f.right_deriv(x)?))).collect()
    }
}

/// Restriction of a polynomial to the graph Lagrangian `L_F`.
pub fn restrict_poly(bv: &BvSpace, phi: &Poly, gauge: &GaugeFermion) -> Result<Poly> {
    phi.substitute(&gauge.substitution(bv)?)
}

/// Restriction of every prefactor and exponent to `L_F`.
pub fn restrict_to_lagrangian(bv: &BvSpace, phi: &ExpElement, gauge: &GaugeFermion) -> Result<ExpElement> {
    let map = gauge.substitution(bv)?;
    let pairs =
        phi.pairs.iter().map(|(p, t)| Ok((p.substitute(&map)?, t.substitute(&map)?))).collect::<Result<Vec<_>>>()?;
    ExpElement::new(phi.context(), pairs)
}

/// Iterated Berezin integral `∫dθ_1 ⋯ dθ_k Φ`: the last listed generator is
/// integrated first, each step being a left derivative.
pub fn berezin_integrate(phi: &Poly, odd_gens: &[Gen]) -> Result<Poly> {
    let ctx = phi.context();
    if phi.involves_antifields() {
        return Err(Error::Integrand(format!("`{phi}` depends on antifields")));
    }
    let mut out = phi.clone();
    for &g in odd_gens.iter().rev() {
        ctx.check(g)?;
        if !ctx.is_field(g) || ctx.parity(g) != Parity::Odd {
            return Err(Error::Integrand(format!("`{}` is not an odd field", ctx.name(g))));
        }
        out = out.left_deriv(g)?;
    }
    Ok(out)
}

fn double_factorial_moment(n: u32) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    (1..n).step_by(2).fold(BigInt::one(), |acc, k| acc * k)
}

/// Normalized moments of `e^{−½Σx²}`: `Π x_i^{n_i} ↦ Π (n_i − 1)!!` (zero for odd `n_i`).
pub fn gaussian_expectation(p: &Poly) -> Result<Scalar> {
    let ctx = p.context();
    if let Some(g) = ctx.gens().find(|&g| (ctx.parity(g) == Parity::Odd || !ctx.is_field(g)) && p.involves(g)) {
        return Err(Error::Integrand(format!("`{}` is not an even field", ctx.name(g))));
    }
    let mut total = Scalar::zero();
    for (m, c) in p.terms() {
        let moment = m.even_exponents().iter().fold(BigInt::one(), |acc, &e| acc * double_factorial_moment(e));
        if !moment.is_zero() {
            total += &(c * &Scalar::from_rational(BigRational::from_integer(moment)));
        }
    }
    Ok(total)
}

/// `−½ Σ x²` over the even fields.
pub fn standard_damping(bv: &BvSpace) -> Poly {
    let ctx = bv.context();
    let minus_half = Scalar::from_ratio(-1, 2);
    bv.pairs()
        .iter()
        .filter(|&&(x, _)| ctx.parity(x) == Parity::Even)
        .fold(Poly::zero(ctx), |acc, &(x, _)| &acc + &Poly::generator(ctx, x).pow(2).scale(&minus_half))
}

/// `∫_{L_F} Φ` with coordinate volume on the fields, normalized so that
/// `∫ θ_1⋯θ_k e^{−½Σx²} = 1`.
pub fn lagrangian_integral(bv: &BvSpace, phi: &ExpElement, gauge: &GaugeFermion) -> Result<Scalar> {
    let restricted = restrict_to_lagrangian(bv, phi, gauge)?;
    let damping = standard_damping(bv);
    let ctx = bv.context();
    let odd: Vec<Gen> = bv.pairs().iter().map(|&(x, _)| x).filter(|&x| ctx.parity(x) == Parity::Odd).rev().collect();
    let mut total = Scalar::zero();
    for (p, t) in restricted.pairs() {
        if *t != damping {
            return Err(Error::NonNormalizedDamping(t.to_string()));
        }
        total += &gaussian_expectation(&berezin_integrate(p, &odd)?)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeReport {
    /// One exact value per gauge, in input order.
    pub values: Vec<Scalar>,
}

impl GaugeReport {
    pub fn all_equal(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn all_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }
}

/// Integrates a `Δ`-closed `Φ` over each `L_F`. Refuses when `exp_delta(Φ) ≠ 0`.
pub fn gauge_independence_experiment(bv: &BvSpace, phi: &ExpElement, gauges: &[GaugeFermion]) -> Result<GaugeReport> {
    let residual = exp_delta(bv, phi)?;
    if !residual.is_zero() {
        return Err(Error::NotDeltaClosed(Box::new(residual)));
    }
    let values = gauges.iter().map(|g| lagrangian_integral(bv, phi, g)).collect::<Result<_>>()?;
    Ok(GaugeReport { values })
}

/// Integrates `ΔΞ` over each `L_F`; every value should be zero.
pub fn stokes_experiment(bv: &BvSpace, xi: &ExpElement, gauges: &[GaugeFermion]) -> Result<GaugeReport> {
    let exact = exp_delta(bv, xi)?;
    let values = gauges.iter().map(|g| lagrangian_integral(bv, &exact, g)).collect::<Result<_>>()?;
    Ok(GaugeReport { values })
}
