//! Generator tables for superspaces.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Z/2 degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^(self * other)` as a boolean "negate" flag.
    pub fn sign_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Field,
    /// Antifield paired with the field at the given generator index.
    Antifield(Gen),
    Plain,
}

/// Index of a generator inside its [`Context`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub role: Role,
    /// Position among generators of the same parity.
    pub slot: usize,
}

/// The ordered generator table of a superspace.
///
/// Declaration order is fixed at construction and defines the canonical
/// order of odd generators inside monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    gens: Vec<Generator>,
    even: Vec<Gen>,
    odd: Vec<Gen>,
    antifield_of: Vec<Option<Gen>>,
    by_name: HashMap<String, Gen>,
}

/// Maximum number of odd generators (odd monomial parts are 64-bit sets).
pub const MAX_ODD: usize = 64;

impl Context {
    pub fn builder() -> ContextBuilder {
        ContextBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.gens.len()).map(Gen)
    }

    pub fn generator(&self, g: Gen) -> &Generator {
        &self.gens[g.0]
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.gens[g.0].name
    }

    pub fn parity(&self, g: Gen) -> Parity {
        self.gens[g.0].parity
    }

    pub fn role(&self, g: Gen) -> Role {
        self.gens[g.0].role
    }

    pub fn slot(&self, g: Gen) -> usize {
        self.gens[g.0].slot
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    /// Generator holding the given even slot.
    pub fn even_gen(&self, slot: usize) -> Gen {
        self.even[slot]
    }

    /// Generator holding the given odd slot.
    pub fn odd_gen(&self, slot: usize) -> Gen {
        self.odd[slot]
    }

    pub fn lookup(&self, name: &str) -> Result<Gen> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn check(&self, g: Gen) -> Result<()> {
        if g.0 < self.gens.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(format!("#{}", g.0)))
        }
    }

    pub fn is_field(&self, g: Gen) -> bool {
        self.role(g) == Role::Field
    }

    pub fn is_antifield(&self, g: Gen) -> bool {
        matches!(self.role(g), Role::Antifield(_))
    }

    /// The antifield paired with field `g`, if any.
    pub fn antifield_of(&self, g: Gen) -> Option<Gen> {
        self.antifield_of[g.0]
    }

    /// Field generators in declaration order.
    pub fn fields(&self) -> Vec<Gen> {
        self.gens().filter(|&g| self.is_field(g)).collect()
    }

    pub fn antifields(&self) -> Vec<Gen> {
        self.gens().filter(|&g| self.is_antifield(g)).collect()
    }
}

#[derive(Default)]
pub struct ContextBuilder {
    entries: Vec<(String, Parity, PendingRole)>,
}

enum PendingRole {
    Field,
    Antifield(String),
    Plain,
}

impl ContextBuilder {
    pub fn field(mut self, name: &str, parity: Parity) -> Self {
        self.entries.push((name.to_string(), parity, PendingRole::Field));
        self
    }

    /// Declares an antifield for a field that is declared (before or after) by name.
    pub fn antifield(mut self, name: &str, parity: Parity, field: &str) -> Self {
        self.entries.push((name.to_string(), parity, PendingRole::Antifield(field.to_string())));
        self
    }

    pub fn plain(mut self, name: &str, parity: Parity) -> Self {
        self.entries.push((name.to_string(), parity, PendingRole::Plain));
        self
    }

    pub fn build(self) -> Result<Arc<Context>> {
        let mut by_name = HashMap::new();
        for (idx, (name, _, _)) in self.entries.iter().enumerate() {
            if !is_identifier(name) || RESERVED.contains(&name.as_str()) {
                return Err(Error::InvalidContext(format!("`{name}` is not a usable generator name")));
            }
            if by_name.insert(name.clone(), Gen(idx)).is_some() {
                return Err(Error::InvalidContext(format!("duplicate generator name `{name}`")));
            }
        }
        let mut gens = Vec::with_capacity(self.entries.len());
        let mut even = Vec::new();
        let mut odd = Vec::new();
        let mut antifield_of = vec![None; self.entries.len()];
        for (idx, (name, parity, pending)) in self.entries.iter().enumerate() {
            let role = match pending {
                PendingRole::Field => Role::Field,
                PendingRole::Plain => Role::Plain,
                PendingRole::Antifield(field) => {
                    let target = *by_name.get(field).ok_or_else(|| {
                        Error::InvalidContext(format!("antifield `{name}` refers to undeclared field `{field}`"))
                    })?;
                    let (_, field_parity, field_role) = &self.entries[target.0];
                    if !matches!(field_role, PendingRole::Field) {
                        return Err(Error::InvalidContext(format!(
                            "antifield `{name}` is paired with `{field}`, which is not a field"
                        )));
                    }
                    if field_parity == parity {
                        return Err(Error::InvalidContext(format!(
                            "antifield `{name}` must have parity opposite to `{field}`"
                        )));
                    }
                    if antifield_of[target.0].is_some() {
                        return Err(Error::InvalidContext(format!("field `{field}` has more than one antifield")));
                    }
                    antifield_of[target.0] = Some(Gen(idx));
                    Role::Antifield(target)
                }
            };
            let slot = match parity {
                Parity::Even => {
                    even.push(Gen(idx));
                    even.len() - 1
                }
                Parity::Odd => {
                    odd.push(Gen(idx));
                    odd.len() - 1
                }
            };
            gens.push(Generator { name: name.clone(), parity: *parity, role, slot });
        }
        if odd.len() > MAX_ODD {
            return Err(Error::InvalidContext(format!(
                "at most {MAX_ODD} odd generators are supported, got {}",
                odd.len()
            )));
        }
        Ok(Arc::new(Context { gens, even, odd, antifield_of, by_name }))
    }
}

/// Names taken by the scalar constants of the expression language.
pub const RESERVED: [&str; 2] = ["i", "hbar"];

/// `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds the phase space `W ⊕ ΠW*`: the given fields in order, followed by
/// one antifield per field named `<field><suffix>`.
pub fn phase_space(fields: &[(&str, Parity)], suffix: &str) -> Result<Arc<Context>> {
    let mut b = Context::builder();
    for (name, parity) in fields {
        b = b.field(name, *parity);
    }
    for (name, parity) in fields {
        b = b.antifield(&format!("{name}{suffix}"), parity.flip(), name);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_names() {
        let err = Context::builder().field("x", Parity::Even).field("x", Parity::Odd).build().unwrap_err();
        assert!(matches!(err, Error::InvalidContext(_)));
    }

    #[test]
    fn rejects_reserved_and_malformed_names() {
        for bad in ["i", "hbar", "2x", "", "x-y"] {
            let err = Context::builder().field(bad, Parity::Even).build().unwrap_err();
            assert!(matches!(err, Error::InvalidContext(_)), "{bad}");
        }
        assert!(Context::builder().field("x_1", Parity::Even).field("hbar2", Parity::Odd).build().is_ok());
    }

    #[test]
    fn antifield_must_flip_parity() {
        let err = Context::builder().field("x", Parity::Even).antifield("xp", Parity::Even, "x").build().unwrap_err();
        assert!(matches!(err, Error::InvalidContext(_)));
    }

    #[test]
    fn one_antifield_per_field() {
        let err = Context::builder()
            .field("x", Parity::Even)
            .antifield("xp", Parity::Odd, "x")
            .antifield("xq", Parity::Odd, "x")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidContext(_)));
    }

    #[test]
    fn phase_space_pairs_fields() {
        let ctx = phase_space(&[("x", Parity::Even), ("t", Parity::Odd)], "_plus").unwrap();
        let x = ctx.lookup("x").unwrap();
        let xp = ctx.lookup("x_plus").unwrap();
        assert_eq!(ctx.antifield_of(x), Some(xp));
        assert_eq!(ctx.parity(xp), Parity::Odd);
        assert_eq!(ctx.role(xp), Role::Antifield(x));
        assert_eq!(ctx.n_even(), 2);
        assert_eq!(ctx.n_odd(), 2);
    }
}
