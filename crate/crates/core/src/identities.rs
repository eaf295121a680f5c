//! The BV-algebra identities as residual functions, and a seeded suite
//! running all of them on random homogeneous inputs.

use crate::bv::BvSpace;
use crate::context::Parity;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::random::{random_homogeneous, rng, PolyShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    DeltaSquared,
    BracketDefect,
    Anticommutativity,
    OddPoisson,
    OddJacobi,
    DeltaDerivesBracket,
    SevenTerms,
}

fn parity(p: &Poly) -> Result<Parity> {
    p.parity().ok_or_else(|| Error::ParityMismatch(format!("`{p}` is not homogeneous")))
}

fn signed(negative: bool, p: Poly) -> Poly {
    if negative {
        -p
    } else {
        p
    }
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::DeltaSquared,
        Identity::BracketDefect,
        Identity::Anticommutativity,
        Identity::OddPoisson,
        Identity::OddJacobi,
        Identity::DeltaDerivesBracket,
        Identity::SevenTerms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::DeltaSquared => "delta-squared",
            Identity::BracketDefect => "bracket-defect",
            Identity::Anticommutativity => "anticommutativity",
            Identity::OddPoisson => "odd-poisson",
            Identity::OddJacobi => "odd-jacobi",
            Identity::DeltaDerivesBracket => "delta-derives-bracket",
            Identity::SevenTerms => "seven-terms",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Identity::DeltaSquared => 1,
            Identity::BracketDefect | Identity::Anticommutativity | Identity::DeltaDerivesBracket => 2,
            Identity::OddPoisson | Identity::OddJacobi | Identity::SevenTerms => 3,
        }
    }

    /// The difference of the two sides; zero when the identity holds.
    /// Arguments must be homogeneous and at least `arity` long.
    pub fn residual(self, bv: &BvSpace, args: &[Poly]) -> Result<Poly> {
        if args.len() < self.arity() {
            return Err(Error::InvalidContext(format!("{} needs {} arguments", self.name(), self.arity())));
        }
        match self {
            Identity::DeltaSquared => bv.delta(&bv.delta(&args[0])?),
            Identity::BracketDefect => {
                Ok(&bv.bracket(&args[0], &args[1])? - &bv.bracket_via_defect(&args[0], &args[1])?)
            }
            Identity::Anticommutativity => {
                let (a, b) = (&args[0], &args[1]);
                let both = parity(a)?.flip().sign_with(parity(b)?.flip());
                Ok(&bv.bracket(b, a)? + &signed(both, bv.bracket(a, b)?))
            }
            Identity::OddPoisson => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let neg = parity(a)?.flip().sign_with(parity(b)?);
                let rhs = &(&bv.bracket(a, b)? * c) + &signed(neg, b * &bv.bracket(a, c)?);
                Ok(&bv.bracket(a, &(b * c))? - &rhs)
            }
            Identity::OddJacobi => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let neg = parity(a)?.flip().sign_with(parity(b)?.flip());
                let rhs = &bv.bracket(&bv.bracket(a, b)?, c)? + &signed(neg, bv.bracket(b, &bv.bracket(a, c)?)?);
                Ok(&bv.bracket(a, &bv.bracket(b, c)?)? - &rhs)
            }
            Identity::DeltaDerivesBracket => {
                let (a, b) = (&args[0], &args[1]);
                let neg = parity(a)?.flip().is_odd();
                let rhs = &bv.bracket(&bv.delta(a)?, b)? + &signed(neg, bv.bracket(a, &bv.delta(b)?)?);
                Ok(&bv.delta(&bv.bracket(a, b)?)? - &rhs)
            }
            Identity::SevenTerms => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let (pa, pb) = (parity(a)?, parity(b)?);
                let lhs = &(&(&bv.delta(&(&(a * b) * c))? + &(&(&bv.delta(a)? * b) * c))
                    + &signed(pa.is_odd(), &(a * &bv.delta(b)?) * c))
                    + &signed((pa + pb).is_odd(), &(a * b) * &bv.delta(c)?);
                let rhs = &(&(&bv.delta(&(a * b))? * c) + &signed(pa.is_odd(), a * &bv.delta(&(b * c))?))
                    + &signed(pa.flip().sign_with(pb), b * &bv.delta(&(a * c))?);
                Ok(&lhs - &rhs)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub identity: Identity,
    pub checked: usize,
    pub failures: usize,
    /// Rendered arguments of the first failing sample.
    pub first_failure: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    /// Random polynomials drawn in total.
    pub inputs: usize,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.failures == 0)
    }
}

/// Draws `samples` triples of random homogeneous polynomials from `seed` and
/// evaluates every identity on each triple.
pub fn run_suite(bv: &BvSpace, seed: u64, samples: usize, shape: &PolyShape) -> Result<SuiteReport> {
    let mut r = rng(seed);
    let mut rows: Vec<SuiteRow> = Identity::ALL
        .iter()
        .map(|&identity| SuiteRow { identity, checked: 0, failures: 0, first_failure: None })
        .collect();
    for _ in 0..samples {
        let args: Vec<Poly> = (0..3).map(|_| random_homogeneous(&mut r, bv.context(), shape)).collect();
        for row in &mut rows {
            row.checked += 1;
            if !row.identity.residual(bv, &args)?.is_zero() {
                row.failures += 1;
                if row.first_failure.is_none() {
                    row.first_failure = Some(args[..row.identity.arity()].iter().map(Poly::to_string).collect());
                }
            }
        }
    }
    Ok(SuiteReport { seed, samples, inputs: 3 * samples, rows })
}
