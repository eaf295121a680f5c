//! Sparse superpolynomials in the free graded-commutative algebra on a context.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use crate::context::{Context, Gen, Parity};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// An exact element of `F(V)`: canonical monomials mapped to nonzero scalars.
#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Arc<Context>,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Which integer grading [`Poly::grade_decompose`] splits along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Exponent of ħ in the coefficient; components are returned with ħ stripped.
    HbarPower,
    /// Total degree in antifield generators.
    AntifieldDegree,
}

pub(crate) fn same_context(a: &Arc<Context>, b: &Arc<Context>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ctx: &Arc<Context>) -> Poly {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<Context>, c: Scalar) -> Poly {
        let mut p = Poly::zero(ctx);
        p.add_term(Monomial::one(ctx), c);
        p
    }

    pub fn one(ctx: &Arc<Context>) -> Poly {
        Poly::constant(ctx, Scalar::one())
    }

    pub fn int(ctx: &Arc<Context>, n: i64) -> Poly {
        Poly::constant(ctx, Scalar::from_int(n))
    }

    pub fn generator(ctx: &Arc<Context>, g: Gen) -> Poly {
        let mut p = Poly::zero(ctx);
        p.add_term(Monomial::generator(ctx, g), Scalar::one());
        p
    }

    /// The generator with the given name.
    pub fn var(ctx: &Arc<Context>, name: &str) -> Result<Poly> {
        Ok(Poly::generator(ctx, ctx.lookup(name)?))
    }

    pub fn from_terms(ctx: &Arc<Context>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut p = Poly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ensure_same_context(&self, other: &Poly) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, s)| (m.clone(), s * c)).filter(|(_, s)| !s.is_zero()).collect(),
        }
    }

    /// Graded-commutative product.
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.ensure_same_context(other)?;
        let mut out = Poly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.ensure_same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(p)` if every term has parity `p`; the zero polynomial is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_some()
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_zero() && self.parity() == Some(Parity::Odd)
    }

    /// Splits into `(even part, odd part)`.
    pub fn parity_parts(&self) -> (Poly, Poly) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).partition(|(m, _)| m.parity() == Parity::Even);
        (Poly { ctx: self.ctx.clone(), terms: even }, Poly { ctx: self.ctx.clone(), terms: odd })
    }

    /// Nonzero parity components paired with their parity.
    pub fn homogeneous_parts(&self) -> Vec<(Parity, Poly)> {
        let (even, odd) = self.parity_parts();
        let mut out = Vec::with_capacity(2);
        if !even.is_zero() {
            out.push((Parity::Even, even));
        }
        if !odd.is_zero() {
            out.push((Parity::Odd, odd));
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The part of total polynomial degree exactly `n`.
    pub fn degree_part(&self, n: u32) -> Poly {
        self.filter_terms(|m| m.degree() == n)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn antifield_degree(&self, m: &Monomial) -> u32 {
        self.ctx.antifields().into_iter().map(|g| m.exponent(&self.ctx, g)).sum()
    }

    /// True if some term contains generator `g`.
    pub fn involves(&self, g: Gen) -> bool {
        self.terms.keys().any(|m| m.exponent(&self.ctx, g) > 0)
    }

    pub fn involves_antifields(&self) -> bool {
        self.ctx.antifields().into_iter().any(|g| self.involves(g))
    }

    /// Left derivative `∂_v`: for odd `v` each monomial picks up
    /// `(-1)^(#odd generators preceding v)`.
    pub fn left_deriv(&self, v: Gen) -> Result<Poly> {
        self.ctx.check(v)?;
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            if let Some((mult, reduced, negative)) = m.left_deriv(&self.ctx, v) {
                let mut c = if mult == 1 { c.clone() } else { c * &Scalar::from_int(i64::from(mult)) };
                if negative {
                    c = -c;
                }
                out.add_term(reduced, c);
            }
        }
        Ok(out)
    }

    /// Right derivative `←∂_v Φ = (-1)^(v̄·Φ̄) ∂_v Φ`, applied per parity component.
    pub fn right_deriv(&self, v: Gen) -> Result<Poly> {
        self.ctx.check(v)?;
        let v_parity = self.ctx.parity(v);
        let mut out = Poly::zero(&self.ctx);
        for (parity, part) in self.homogeneous_parts() {
            let d = part.left_deriv(v)?;
            out = &out + &(if v_parity.sign_with(parity) { -d } else { d });
        }
        Ok(out)
    }

    /// Algebra morphism sending each assigned generator to its image and
    /// fixing the rest. Images must have the parity of the generator they replace.
    pub fn substitute(&self, assignments: &BTreeMap<Gen, Poly>) -> Result<Poly> {
        for (g, image) in assignments {
            self.ctx.check(*g)?;
            self.ensure_same_context(image)?;
            let want = self.ctx.parity(*g);
            if !image.is_zero() && image.parity() != Some(want) {
                return Err(Error::ParityMismatch(format!("image of `{}` must be {want}", self.ctx.name(*g))));
            }
        }
        let ctx = &self.ctx;
        let mut powers: HashMap<(Gen, u32), Poly> = HashMap::new();
        let mut power = |g: Gen, e: u32| -> Poly {
            powers
                .entry((g, e))
                .or_insert_with(|| match assignments.get(&g) {
                    Some(image) => image.pow(e),
                    None => Poly::generator(ctx, g).pow(e),
                })
                .clone()
        };
        let mut out = Poly::zero(ctx);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(ctx, c.clone());
            for (slot, &e) in m.even.iter().enumerate() {
                if e > 0 {
                    acc = &acc * &power(ctx.even_gen(slot), e);
                }
            }
            for slot in m.odd_slots() {
                acc = &acc * &power(ctx.odd_gen(slot), 1);
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Splits along the chosen grading into `(degree, component)` pairs in
    /// increasing degree; the components sum back to `self`.
    pub fn grade_decompose(&self, grading: Grading) -> Vec<(i32, Poly)> {
        let mut parts: BTreeMap<i32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            match grading {
                Grading::HbarPower => {
                    for (k, ck) in c.hbar_components() {
                        parts.entry(k).or_insert_with(|| Poly::zero(&self.ctx)).add_term(m.clone(), ck);
                    }
                }
                Grading::AntifieldDegree => {
                    let k = self.antifield_degree(m) as i32;
                    parts.entry(k).or_insert_with(|| Poly::zero(&self.ctx)).add_term(m.clone(), c.clone());
                }
            }
        }
        parts.into_iter().filter(|(_, p)| !p.is_zero()).collect()
    }

    /// Substitutes rational values for even generators, leaving the others.
    pub fn evaluate_even(&self, values: &BTreeMap<Gen, BigRational>) -> Result<Poly> {
        let mut assignments = BTreeMap::new();
        for (g, v) in values {
            self.ctx.check(*g)?;
            if self.ctx.parity(*g) != Parity::Even {
                return Err(Error::ParityMismatch(format!(
                    "cannot evaluate odd generator `{}` at a number",
                    self.ctx.name(*g)
                )));
            }
            assignments.insert(*g, Poly::constant(&self.ctx, Scalar::from_rational(v.clone())));
        }
        self.substitute(&assignments)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(&self.ctx))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("context mismatch in Poly addition")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs.clone())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ctx: self.ctx, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("context mismatch in Poly product")
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul<&Scalar> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Scalar) -> Poly {
        self.scale(rhs)
    }
}

pub(crate) fn fmt_monomial(ctx: &Context, m: &Monomial) -> Option<String> {
    let mut factors = Vec::new();
    for g in ctx.gens() {
        if ctx.parity(g) != Parity::Even {
            continue;
        }
        match m.even[ctx.slot(g)] {
            0 => {}
            1 => factors.push(ctx.name(g).to_string()),
            e => factors.push(format!("{}^{e}", ctx.name(g))),
        }
    }
    for slot in m.odd_slots() {
        factors.push(ctx.name(ctx.odd_gen(slot)).to_string());
    }
    (!factors.is_empty()).then(|| factors.join("*"))
}

impl fmt::Display for Poly {
    /// Canonical text: terms in monomial order, coefficients in lowest
    /// terms, even factors before odd ones, `*` between all factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(&self.ctx, m);
            let atoms = c.atoms();
            let (negative, coeff) = if atoms.len() == 1 {
                (atoms[0].negative, atoms[0].factors())
            } else {
                (false, Some(format!("({c})")))
            };
            let body = match (coeff, mono) {
                (Some(c), Some(m)) => format!("{c}*{m}"),
                (Some(c), None) => c,
                (None, Some(m)) => m,
                (None, None) => "1".to_string(),
            };
            match (idx, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Rational helper used across modules.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}
