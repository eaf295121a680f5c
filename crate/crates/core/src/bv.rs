//! The BV Laplacian, the antibracket and the master equations on `W ⊕ ΠW*`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::context::{Context, Gen, Parity};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::poly::{Grading, Poly};
use crate::scalar::Scalar;

/// A context in which every field has a paired antifield.
#[derive(Clone, Debug)]
pub struct BvSpace {
    ctx: Arc<Context>,
    pairs: Vec<(Gen, Gen)>,
}

/// Off-shell and on-shell analysis of an action split by antifield degree.
#[derive(Clone, Debug)]
pub struct AntifieldReport {
    /// `{S₀, S₁}`.
    pub first: Poly,
    /// `{S₁, S₁} + 2{S₀, S₂}`.
    pub second: Poly,
    pub points: Vec<PointCheck>,
}

#[derive(Clone, Debug)]
pub struct PointCheck {
    pub point: BTreeMap<Gen, BigRational>,
    /// Fields whose `∂S₀/∂x` does not vanish at the point.
    pub nonzero_gradients: Vec<(Gen, Poly)>,
    /// The second residual with the point substituted; `None` when the point
    /// is not critical and so was not used.
    pub residual: Option<Poly>,
}

impl PointCheck {
    pub fn is_critical(&self) -> bool {
        self.nonzero_gradients.is_empty()
    }

    pub fn on_shell(&self) -> bool {
        self.residual.as_ref().is_some_and(Poly::is_zero)
    }
}

impl AntifieldReport {
    pub fn off_shell(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    /// First residual vanishes and the second vanishes at every supplied point,
    /// all of which must be critical.
    pub fn on_shell(&self) -> bool {
        self.first.is_zero() && self.points.iter().all(PointCheck::on_shell)
    }
}

fn sign(negative: bool, p: Poly) -> Poly {
    if negative {
        -p
    } else {
        p
    }
}

impl BvSpace {
    pub fn new(ctx: &Arc<Context>) -> Result<BvSpace> {
        let mut pairs = Vec::new();
        for x in ctx.fields() {
            let xp = ctx
                .antifield_of(x)
                .ok_or_else(|| Error::MissingPairing(format!("field `{}` has no antifield", ctx.name(x))))?;
            pairs.push((x, xp));
        }
        Ok(BvSpace { ctx: ctx.clone(), pairs })
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// `(field, antifield)` pairs in field declaration order.
    pub fn pairs(&self) -> &[(Gen, Gen)] {
        &self.pairs
    }

    fn check(&self, p: &Poly) -> Result<()> {
        if crate::poly::same_context(p.context(), &self.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn check_action(&self, s: &Poly) -> Result<()> {
        self.check(s)?;
        if !s.is_even() {
            return Err(Error::ParityMismatch("an action must be even".into()));
        }
        Ok(())
    }

    /// `ΔΦ = Σ ∂/∂x⁺_i ∂/∂x^i Φ`, the field derivative taken first.
    pub fn delta(&self, phi: &Poly) -> Result<Poly> {
        self.check(phi)?;
        let mut out = Poly::zero(&self.ctx);
        for &(x, xp) in &self.pairs {
            let inner = phi.left_deriv(x)?;
            if !inner.is_zero() {
                out = &out + &inner.left_deriv(xp)?;
            }
        }
        Ok(out)
    }

    /// The antibracket
    /// `Σ (←∂Φ/∂x⁺)(∂Ψ/∂x) − (−1)^{(Φ̄+1)(Ψ̄+1)} (←∂Ψ/∂x⁺)(∂Φ/∂x)`,
    /// extended bilinearly over parity components.
    pub fn bracket(&self, phi: &Poly, psi: &Poly) -> Result<Poly> {
        self.check(phi)?;
        self.check(psi)?;
        let mut out = Poly::zero(&self.ctx);
        for (pa, a) in phi.homogeneous_parts() {
            for (pb, b) in psi.homogeneous_parts() {
                let negative = !(pa.flip().sign_with(pb.flip()));
                for &(x, xp) in &self.pairs {
                    let first = &a.right_deriv(xp)? * &b.left_deriv(x)?;
                    let second = &b.right_deriv(xp)? * &a.left_deriv(x)?;
                    out = &out + &first;
                    out = &out + &sign(negative, second);
                }
            }
        }
        Ok(out)
    }

    /// `{Φ,Ψ} = (−1)^Φ̄ Δ(ΦΨ) + (−1)^{Φ̄+1} (ΔΦ)Ψ − Φ ΔΨ`, from `Δ` and products only.
    pub fn bracket_via_defect(&self, phi: &Poly, psi: &Poly) -> Result<Poly> {
        self.check(phi)?;
        self.check(psi)?;
        let d_psi = self.delta(psi)?;
        let mut out = Poly::zero(&self.ctx);
        for (pa, a) in phi.homogeneous_parts() {
            let odd = pa.is_odd();
            let whole = sign(odd, self.delta(&(&a * psi))?);
            let left = sign(!odd, &self.delta(&a)? * psi);
            out = &out + &whole;
            out = &out + &left;
            out = &out - &(&a * &d_psi);
        }
        Ok(out)
    }

    /// `S₁ = Σ x⁺_i D(x^i)` for a derivation acting on fields.
    pub fn s1_of(&self, d: &Derivation) -> Result<Poly> {
        if !crate::poly::same_context(d.context(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut out = Poly::zero(&self.ctx);
        for (g, image) in d.images() {
            if !self.ctx.is_field(g) {
                return Err(Error::InvalidDerivation(format!("derivation acts on non-field `{}`", self.ctx.name(g))));
            }
            if image.involves_antifields() {
                return Err(Error::InvalidDerivation(format!("image of `{}` involves antifields", self.ctx.name(g))));
            }
        }
        for &(x, xp) in &self.pairs {
            let image = d.image(x);
            if !image.is_zero() {
                out = &out + &(&Poly::generator(&self.ctx, xp) * &image);
            }
        }
        Ok(out)
    }

    /// The field derivation `x ↦ {S₁, x}` of an even `S₁` linear in antifields.
    pub fn extract_derivation(&self, s1: &Poly) -> Result<Derivation> {
        self.check_action(s1)?;
        if let Some((m, _)) = s1.terms().find(|(m, _)| s1.antifield_degree(m) != 1) {
            return Err(Error::AntifieldDegree(format!("term of antifield degree {} in S1", s1.antifield_degree(m))));
        }
        let images = self
            .pairs
            .iter()
            .map(|&(x, _)| Ok((x, self.bracket(s1, &Poly::generator(&self.ctx, x))?)))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(&self.ctx, Parity::Odd, images)
    }

    /// `{S, S}`.
    pub fn classical_master_residual(&self, s: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        self.bracket(s, s)
    }

    /// `{S, S} − 2iħ ΔS`.
    pub fn quantum_master_residual(&self, s: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        let two_i_hbar = Scalar::from_int(2) * Scalar::i() * Scalar::hbar();
        Ok(&self.bracket(s, s)? - &self.delta(s)?.scale(&two_i_hbar))
    }

    /// With `S = Σ ħ^k S_k`, the residuals
    /// `R_n = Σ_{a+b=n} {S_a, S_b} − 2i ΔS_{n−1}` so that `Σ ħ^n R_n` is the
    /// quantum master residual. Rows cover every `n` that can be nonzero.
    pub fn hbar_equations(&self, s: &Poly) -> Result<Vec<(i32, Poly)>> {
        self.check_action(s)?;
        let parts: BTreeMap<i32, Poly> = s.grade_decompose(Grading::HbarPower).into_iter().collect();
        let (lo, hi) = match (parts.keys().next(), parts.keys().next_back()) {
            (Some(&lo), Some(&hi)) => ((2 * lo).min(lo + 1), (2 * hi).max(hi + 1)),
            _ => (0, 0),
        };
        let mut brackets: BTreeMap<i32, Poly> = BTreeMap::new();
        for (&a, sa) in &parts {
            for (&b, sb) in &parts {
                let entry = brackets.entry(a + b).or_insert_with(|| Poly::zero(&self.ctx));
                *entry = &*entry + &self.bracket(sa, sb)?;
            }
        }
        let two_i = Scalar::from_int(2) * Scalar::i();
        let mut rows = Vec::new();
        for n in lo..=hi {
            let mut r = brackets.remove(&n).unwrap_or_else(|| Poly::zero(&self.ctx));
            if let Some(prev) = parts.get(&(n - 1)) {
                r = &r - &self.delta(prev)?.scale(&two_i);
            }
            rows.push((n, r));
        }
        Ok(rows)
    }

    /// Splits `S` by antifield degree and reports `{S₀,S₁}` and
    /// `{S₁,S₁} + 2{S₀,S₂}`, then checks the latter at each point.
    ///
    /// A point assigns rational values to even fields (missing ones are 0).
    /// It is critical when every `∂S₀/∂x^i` becomes the zero polynomial
    /// after substitution.
    pub fn antifield_report(&self, s: &Poly, points: &[BTreeMap<Gen, BigRational>]) -> Result<AntifieldReport> {
        self.check_action(s)?;
        let parts: BTreeMap<i32, Poly> = s.grade_decompose(Grading::AntifieldDegree).into_iter().collect();
        let part = |k: i32| parts.get(&k).cloned().unwrap_or_else(|| Poly::zero(&self.ctx));
        let (s0, s1, s2) = (part(0), part(1), part(2));
        let first = self.bracket(&s0, &s1)?;
        let second = &self.bracket(&s1, &s1)? + &self.bracket(&s0, &s2)?.scale(&Scalar::from_int(2));
        let mut checks = Vec::with_capacity(points.len());
        for point in points {
            let mut values = BTreeMap::new();
            for &(x, _) in &self.pairs {
                if self.ctx.parity(x) == Parity::Even {
                    values.insert(x, point.get(&x).cloned().unwrap_or_else(|| BigRational::from_integer(0.into())));
                }
            }
            for &g in point.keys() {
                if !values.contains_key(&g) {
                    return Err(Error::ParityMismatch(format!(
                        "point coordinate `{}` is not an even field",
                        self.ctx.name(g)
                    )));
                }
            }
            let mut nonzero_gradients = Vec::new();
            for &(x, _) in &self.pairs {
                let grad = s0.left_deriv(x)?.evaluate_even(&values)?;
                if !grad.is_zero() {
                    nonzero_gradients.push((x, grad));
                }
            }
            let residual = if nonzero_gradients.is_empty() { Some(second.evaluate_even(&values)?) } else { None };
            checks.push(PointCheck { point: values, nonzero_gradients, residual });
        }
        Ok(AntifieldReport { first, second, points: checks })
    }

    /// `ΩΨ = −iħ ΔΨ + {S, Ψ}`.
    pub fn omega_apply(&self, s: &Poly, psi: &Poly) -> Result<Poly> {
        self.check_action(s)?;
        let minus_i_hbar = -(Scalar::i() * Scalar::hbar());
        Ok(&self.delta(psi)?.scale(&minus_i_hbar) + &self.bracket(s, psi)?)
    }
}
