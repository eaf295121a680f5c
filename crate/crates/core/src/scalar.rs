//! Exact coefficients: Gaussian rationals with finite Laurent dependence on ħ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element `re + im·i` of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRational::real(&self.re * &rhs.re);
        }
        GaussRational { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

/// A finite sum `Σ_k c_k ħ^k` with `c_k ∈ Q(i)` and `k` any integer.
///
/// Zero coefficients are never stored, so the zero scalar is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    terms: BTreeMap<i32, GaussRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::monomial(0, GaussRational::real(r))
    }

    pub fn from_gauss(g: GaussRational) -> Self {
        Self::monomial(0, g)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::monomial(0, GaussRational::i())
    }

    /// `ħ^k` for any integer `k`.
    pub fn hbar_pow(k: i32) -> Self {
        Self::monomial(k, GaussRational::one())
    }

    pub fn hbar() -> Self {
        Self::hbar_pow(1)
    }

    pub fn monomial(k: i32, c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(k, c_k)` in increasing `k`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i32) -> GaussRational {
        self.terms.get(&k).cloned().unwrap_or_else(GaussRational::zero)
    }

    /// The rational value, if this scalar has no ħ and no imaginary part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next()?;
                (*k == 0 && c.is_real()).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// Splits into `(k, c_k)` scalars free of ħ.
    pub fn hbar_components(&self) -> Vec<(i32, Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, Scalar::monomial(0, c.clone()))).collect()
    }

    pub fn shift_hbar(&self, by: i32) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (k + by, c.clone())).collect() }
    }

    fn add_term(&mut self, k: i32, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

/// One indivisible coefficient part: `±q`, `±q*i`, each possibly times `hbar^k`.
pub(crate) struct Atom {
    pub negative: bool,
    pub magnitude: BigRational,
    pub imaginary: bool,
    pub hbar: i32,
}

impl Scalar {
    /// Decomposes into sign-separated atoms in canonical order
    /// (increasing ħ power, real part before imaginary part).
    pub(crate) fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            for (part, imaginary) in [(&c.re, false), (&c.im, true)] {
                if part.is_zero() {
                    continue;
                }
                out.push(Atom { negative: part.is_negative(), magnitude: part.abs(), imaginary, hbar: *k });
            }
        }
        out
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Atom {
    /// Renders the unsigned atom as `*`-joined factors, omitting a unit magnitude.
    /// Returns `None` for the bare constant 1.
    pub(crate) fn factors(&self) -> Option<String> {
        let mut parts = Vec::new();
        if !self.magnitude.is_one() {
            parts.push(fmt_rational(&self.magnitude));
        }
        if self.imaginary {
            parts.push("i".to_string());
        }
        match self.hbar {
            0 => {}
            1 => parts.push("hbar".to_string()),
            k => parts.push(format!("hbar^{k}")),
        }
        if parts.is_empty() {
            None
        } else {
            Some(parts.join("*"))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.atoms();
        if atoms.is_empty() {
            return write!(f, "0");
        }
        for (idx, atom) in atoms.iter().enumerate() {
            let body = atom.factors().unwrap_or_else(|| "1".to_string());
            match (idx, atom.negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
