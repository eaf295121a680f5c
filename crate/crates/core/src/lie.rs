//! Lie algebra and representation data, BRST differentials built from them,
//! Chevalley–Eilenberg complexes and the trace (unimodularity) condition.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::context::{Context, Gen, Parity};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Structure constants `f^i_{jk}` of an `m`-dimensional Lie algebra `g` and
/// constants `ρ^i_{jk}` of an `n`-dimensional module `V`: the basis vector
/// `γ_k` acts on `e_j` with `e_i`-coefficient `ρ^i_{jk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModel {
    basis: Vec<String>,
    module: Vec<String>,
    f: Vec<BigRational>,
    rho: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    /// Basis indices `j < k < l` of the failing triple.
    pub triple: (usize, usize, usize),
    /// Components of `[[γj,γk],γl] + [[γk,γl],γj] + [[γl,γj],γk]`.
    pub residual: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepViolation {
    /// Basis indices `j < k`.
    pub pair: (usize, usize),
    /// `ρ([γj,γk]) − [ρ(γj), ρ(γk)]` as an `n×n` matrix.
    pub residual: Matrix,
}

/// Coordinates on `V ⊕ Πg` inside some context: even module coordinates
/// `v¹…vⁿ` and odd ghosts `c¹…cᵐ`.
#[derive(Clone, Debug)]
pub struct LieCoordinates {
    pub ctx: Arc<Context>,
    pub module: Vec<Gen>,
    pub ghosts: Vec<Gen>,
}

pub struct LieModelBuilder {
    basis: Vec<String>,
    module: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, BigRational>>,
    rho: BTreeMap<(usize, usize, usize), BigRational>,
}

impl LieModelBuilder {
    /// Records `[γj, γk] ∋ coef·γi`. Either order may be given; both orders
    /// of the same pair must agree up to sign.
    pub fn bracket(mut self, j: usize, k: usize, i: usize, coef: BigRational) -> Self {
        *self.brackets.entry((j, k)).or_default().entry(i).or_insert_with(BigRational::zero) += coef;
        self
    }

    /// Records `γk · e_j ∋ coef·e_i`.
    pub fn action(mut self, k: usize, j: usize, i: usize, coef: BigRational) -> Self {
        *self.rho.entry((i, j, k)).or_insert_with(BigRational::zero) += coef;
        self
    }

    pub fn build(self) -> Result<LieModel> {
        let m = self.basis.len();
        let n = self.module.len();
        let mut model = LieModel {
            f: vec![BigRational::zero(); m * m * m],
            rho: vec![BigRational::zero(); n * n * m],
            basis: self.basis,
            module: self.module,
        };
        let names = model.basis.clone();
        for (&(j, k), entries) in &self.brackets {
            if j >= m || k >= m || entries.keys().any(|&i| i >= m) {
                return Err(Error::InvalidLieData(format!("bracket index out of range for [{j},{k}]")));
            }
            if j == k {
                if entries.values().any(|c| !c.is_zero()) {
                    return Err(Error::InvalidLieData(format!("[{0},{0}] must vanish", names[j])));
                }
                continue;
            }
            if let Some(opposite) = self.brackets.get(&(k, j)) {
                if j < k {
                    for i in 0..m {
                        let a = entries.get(&i).cloned().unwrap_or_else(BigRational::zero);
                        let b = opposite.get(&i).cloned().unwrap_or_else(BigRational::zero);
                        if a != -b {
                            return Err(Error::InvalidLieData(format!(
                                "[{},{}] and [{},{}] are not antisymmetric",
                                names[j], names[k], names[k], names[j]
                            )));
                        }
                    }
                } else {
                    continue;
                }
            }
            for (&i, c) in entries {
                model.set_f(i, j, k, c.clone());
            }
        }
        for (&(i, j, k), c) in &self.rho {
            if i >= n || j >= n || k >= m {
                return Err(Error::InvalidLieData("representation index out of range".into()));
            }
            let idx = model.ri(i, j, k);
            model.rho[idx] = c.clone();
        }
        Ok(model)
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

impl LieModel {
    /// Starts a model with the given ghost (basis) and module coordinate names.
    pub fn builder(basis: Vec<String>, module: Vec<String>) -> LieModelBuilder {
        LieModelBuilder { basis, module, brackets: BTreeMap::new(), rho: BTreeMap::new() }
    }

    /// sl₂ with basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    /// Ghosts are named `ch ce cf`.
    pub fn sl2() -> LieModel {
        Self::builder(vec!["ch".into(), "ce".into(), "cf".into()], vec![])
            .bracket(0, 1, 1, q(2))
            .bracket(0, 2, 2, q(-2))
            .bracket(1, 2, 0, q(1))
            .build()
            .expect("sl2 data is valid")
    }

    /// so(3): `[γ1,γ2] = γ3` and cyclic.
    pub fn so3() -> LieModel {
        Self::builder(names("c", 3), vec![])
            .bracket(0, 1, 2, q(1))
            .bracket(1, 2, 0, q(1))
            .bracket(2, 0, 1, q(1))
            .build()
            .expect("so3 data is valid")
    }

    /// The non-abelian 2-dimensional algebra `[γ1, γ2] = γ2`.
    pub fn solvable2() -> LieModel {
        Self::builder(names("c", 2), vec![]).bracket(0, 1, 1, q(1)).build().expect("solvable data is valid")
    }

    /// Heisenberg algebra `[γ1, γ2] = γ3`.
    pub fn heisenberg() -> LieModel {
        Self::builder(names("c", 3), vec![]).bracket(0, 1, 2, q(1)).build().expect("heisenberg data is valid")
    }

    pub fn abelian(m: usize) -> LieModel {
        Self::builder(names("c", m), vec![]).build().expect("abelian data is valid")
    }

    /// Same algebra acting on itself: `ρ^i_{jk} = f^i_{kj}`, i.e. `γk·e_j = [γk, γj]`.
    pub fn with_adjoint(&self, module: Vec<String>) -> Result<LieModel> {
        self.with_module(module, |me, i, j, k| me.f(i, k, j).clone())
    }

    /// Coadjoint module (the adjoint presented in the dual basis):
    /// `ρ^i_{jk} = f^j_{ik}`.
    pub fn with_coadjoint(&self, module: Vec<String>) -> Result<LieModel> {
        self.with_module(module, |me, i, j, k| me.f(j, i, k).clone())
    }

    fn with_module(
        &self,
        module: Vec<String>,
        rho: impl Fn(&LieModel, usize, usize, usize) -> BigRational,
    ) -> Result<LieModel> {
        let m = self.dim();
        if module.len() != m {
            return Err(Error::InvalidLieData(format!("adjoint module needs {m} coordinate names")));
        }
        let mut out = LieModel { module, rho: vec![BigRational::zero(); m * m * m], ..self.clone() };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let idx = out.ri(i, j, k);
                    out.rho[idx] = rho(self, i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// Replaces the module by one of dimension `n` with `γk` acting as `ρ(γk)`,
    /// given as `n×n` matrices with `(i, j)` entry `ρ^i_{jk}`.
    pub fn with_module_matrices(&self, module: Vec<String>, matrices: &[Matrix]) -> Result<LieModel> {
        let n = module.len();
        if matrices.len() != self.dim() || matrices.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::InvalidLieData("module matrices have the wrong shape".into()));
        }
        let mut out = LieModel { module, rho: vec![BigRational::zero(); n * n * self.dim()], ..self.clone() };
        for (k, a) in matrices.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let idx = out.ri(i, j, k);
                    out.rho[idx] = a.get(i, j).clone();
                }
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn module_dim(&self) -> usize {
        self.module.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn module_names(&self) -> &[String] {
        &self.module
    }

    fn fi(&self, i: usize, j: usize, k: usize) -> usize {
        let m = self.dim();
        (i * m + j) * m + k
    }

    fn ri(&self, i: usize, j: usize, k: usize) -> usize {
        let (n, m) = (self.module_dim(), self.dim());
        (i * n + j) * m + k
    }

    /// `f^i_{jk}`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.f[self.fi(i, j, k)]
    }

    /// `ρ^i_{jk}`.
    pub fn rho(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.rho[self.ri(i, j, k)]
    }

    /// Sets `f^i_{jk}` and `f^i_{kj} = −f^i_{jk}`.
    pub fn set_f(&mut self, i: usize, j: usize, k: usize, v: BigRational) {
        let a = self.fi(i, j, k);
        let b = self.fi(i, k, j);
        self.f[b] = -v.clone();
        self.f[a] = v;
    }

    pub fn set_rho(&mut self, i: usize, j: usize, k: usize, v: BigRational) {
        let idx = self.ri(i, j, k);
        self.rho[idx] = v;
    }

    /// `ρ(γk)` as an `n×n` matrix.
    pub fn action_matrix(&self, k: usize) -> Matrix {
        let n = self.module_dim();
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.rho(i, j, k).clone());
            }
        }
        a
    }

    /// Triples `j<k<l` whose Jacobiator
    /// `Σ_p f^p_{jk}f^i_{pl} + f^p_{kl}f^i_{pj} + f^p_{lj}f^i_{pk}` is nonzero.
    pub fn jacobi_check(&self) -> Vec<JacobiViolation> {
        let m = self.dim();
        let mut out = Vec::new();
        for j in 0..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let residual: Vec<BigRational> = (0..m)
                        .map(|i| {
                            (0..m).fold(BigRational::zero(), |acc, p| {
                                acc + self.f(p, j, k) * self.f(i, p, l)
                                    + self.f(p, k, l) * self.f(i, p, j)
                                    + self.f(p, l, j) * self.f(i, p, k)
                            })
                        })
                        .collect();
                    if residual.iter().any(|c| !c.is_zero()) {
                        out.push(JacobiViolation { triple: (j, k, l), residual });
                    }
                }
            }
        }
        out
    }

    /// Pairs `j<k` where `ρ([γj,γk]) ≠ ρ(γj)ρ(γk) − ρ(γk)ρ(γj)`.
    pub fn rep_check(&self) -> Vec<RepViolation> {
        let (m, n) = (self.dim(), self.module_dim());
        let mats: Vec<Matrix> = (0..m).map(|k| self.action_matrix(k)).collect();
        let mut out = Vec::new();
        for j in 0..m {
            for k in j + 1..m {
                let ab = mats[j].mul(&mats[k]);
                let ba = mats[k].mul(&mats[j]);
                let mut residual = Matrix::zeros(n, n);
                for r in 0..n {
                    for c in 0..n {
                        let lhs = (0..m).fold(BigRational::zero(), |acc, p| acc + self.f(p, j, k) * mats[p].get(r, c));
                        residual.set(r, c, lhs - (ab.get(r, c) - ba.get(r, c)));
                    }
                }
                if !residual.is_zero() {
                    out.push(RepViolation { pair: (j, k), residual });
                }
            }
        }
        out
    }

    /// A fresh context `v¹…vⁿ, c¹…cᵐ` named after the model, optionally
    /// followed by one antifield per field named `<name><suffix>`.
    pub fn coordinates(&self, antifield_suffix: Option<&str>) -> Result<LieCoordinates> {
        let mut b = Context::builder();
        for name in &self.module {
            b = b.field(name, Parity::Even);
        }
        for name in &self.basis {
            b = b.field(name, Parity::Odd);
        }
        if let Some(suffix) = antifield_suffix {
            for name in &self.module {
                b = b.antifield(&format!("{name}{suffix}"), Parity::Odd, name);
            }
            for name in &self.basis {
                b = b.antifield(&format!("{name}{suffix}"), Parity::Even, name);
            }
        }
        let ctx = b.build()?;
        self.coordinates_in(&ctx)
    }

    /// Locates the model's coordinates in an existing context by name.
    pub fn coordinates_in(&self, ctx: &Arc<Context>) -> Result<LieCoordinates> {
        let lookup = |name: &String, parity: Parity| -> Result<Gen> {
            let g = ctx.lookup(name)?;
            if ctx.parity(g) != parity {
                return Err(Error::ParityMismatch(format!("`{name}` must be {parity}")));
            }
            Ok(g)
        };
        Ok(LieCoordinates {
            ctx: ctx.clone(),
            module: self.module.iter().map(|n| lookup(n, Parity::Even)).collect::<Result<_>>()?,
            ghosts: self.basis.iter().map(|n| lookup(n, Parity::Odd)).collect::<Result<_>>()?,
        })
    }

    fn check_coordinates(&self, coords: &LieCoordinates) -> Result<()> {
        if coords.module.len() != self.module_dim() || coords.ghosts.len() != self.dim() {
            return Err(Error::InvalidLieData("coordinate count does not match the model".into()));
        }
        Ok(())
    }

    fn ghost_images(&self, coords: &LieCoordinates) -> Vec<(Gen, Poly)> {
        let ctx = &coords.ctx;
        let c: Vec<Poly> = coords.ghosts.iter().map(|&g| Poly::generator(ctx, g)).collect();
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut image = Poly::zero(ctx);
                for j in 0..m {
                    for k in j + 1..m {
                        let f = self.f(i, j, k);
                        if !f.is_zero() {
                            image = &image + &(&c[j] * &c[k]).scale(&Scalar::from_rational(f.clone()));
                        }
                    }
                }
                (coords.ghosts[i], image)
            })
            .collect()
    }

    /// `δc^i = ½ f^i_{jk} c^j c^k` on the ghosts; the module coordinates are untouched.
    pub fn brst_lie(&self, coords: &LieCoordinates) -> Result<Derivation> {
        self.check_coordinates(coords)?;
        Derivation::new(&coords.ctx, Parity::Odd, self.ghost_images(coords))
    }

    /// `δ = ρ^i_{jk} v^j c^k ∂/∂v^i + ½ f^i_{jk} c^j c^k ∂/∂c^i`.
    pub fn brst_rep(&self, coords: &LieCoordinates) -> Result<Derivation> {
        self.check_coordinates(coords)?;
        let ctx = &coords.ctx;
        let v: Vec<Poly> = coords.module.iter().map(|&g| Poly::generator(ctx, g)).collect();
        let c: Vec<Poly> = coords.ghosts.iter().map(|&g| Poly::generator(ctx, g)).collect();
        let (m, n) = (self.dim(), self.module_dim());
        let mut images = self.ghost_images(coords);
        for i in 0..n {
            let mut image = Poly::zero(ctx);
            for j in 0..n {
                for k in 0..m {
                    let r = self.rho(i, j, k);
                    if !r.is_zero() {
                        image = &image + &(&v[j] * &c[k]).scale(&Scalar::from_rational(r.clone()));
                    }
                }
            }
            images.push((coords.module[i], image));
        }
        Derivation::new(ctx, Parity::Odd, images)
    }

    /// Matrices of `δ^{p,q}: S^p(V*)⊗Λ^q g* → S^p(V*)⊗Λ^{q+1} g*` for
    /// `q = 0..=m`, in the monomial bases of [`ce_basis`]. Columns index the source.
    pub fn ce_matrices(&self, coords: &LieCoordinates, p: u32) -> Result<Vec<Matrix>> {
        if p > 1 {
            return Err(Error::InvalidLieData(format!("p must be 0 or 1, got {p}")));
        }
        let delta = self.brst_rep(coords)?;
        let m = self.dim();
        let bases: Vec<Vec<Monomial>> = (0..=m + 1).map(|q| ce_basis(coords, p, q)).collect();
        let mut out = Vec::with_capacity(m + 1);
        for q in 0..=m {
            let source = &bases[q];
            let target = &bases[q + 1];
            let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, b)| (b, i)).collect();
            let mut mat = Matrix::zeros(target.len(), source.len());
            for (col, b) in source.iter().enumerate() {
                let image = delta.apply(&Poly::from_terms(&coords.ctx, [(b.clone(), Scalar::one())]))?;
                for (mono, c) in image.terms() {
                    let row = *index.get(mono).ok_or_else(|| {
                        Error::InvalidLieData("δ left the bigraded piece (module not linear?)".into())
                    })?;
                    let value = c
                        .as_rational()
                        .ok_or_else(|| Error::InvalidLieData("structure constants must be rational".into()))?;
                    mat.set(row, col, value);
                }
            }
            out.push(mat);
        }
        Ok(out)
    }

    /// `dim H^q = dim C^q − rank δ^{p,q} − rank δ^{p,q−1}` for `q = 0..=m`.
    pub fn ce_cohomology_dims(&self, coords: &LieCoordinates, p: u32) -> Result<Vec<usize>> {
        let mats = self.ce_matrices(coords, p)?;
        let ranks: Vec<usize> = mats.iter().map(Matrix::rank).collect();
        Ok((0..mats.len())
            .map(|q| {
                let incoming = if q == 0 { 0 } else { ranks[q - 1] };
                mats[q].cols() - ranks[q] - incoming
            })
            .collect())
    }

    /// The literal sum `(ρ^i_{ik} + f^i_{ik}) c^k`.
    pub fn trace_condition(&self, coords: &LieCoordinates) -> Result<Poly> {
        self.check_coordinates(coords)?;
        let ctx = &coords.ctx;
        let mut out = Poly::zero(ctx);
        for k in 0..self.dim() {
            let mut t = BigRational::zero();
            for i in 0..self.module_dim() {
                t += self.rho(i, i, k);
            }
            for i in 0..self.dim() {
                t += self.f(i, i, k);
            }
            out = &out + &Poly::generator(ctx, coords.ghosts[k]).scale(&Scalar::from_rational(t));
        }
        Ok(out)
    }
}

/// Canonical monomial basis of `S^p(V*) ⊗ Λ^q g*`: `v^j` (for `p = 1`)
/// times each `q`-subset of ghosts, ordered by ghost index.
pub fn ce_basis(coords: &LieCoordinates, p: u32, q: usize) -> Vec<Monomial> {
    let ctx = &coords.ctx;
    let ghost_sets = subsets(coords.ghosts.len(), q);
    let module_parts: Vec<Monomial> = if p == 0 {
        vec![Monomial::one(ctx)]
    } else {
        coords.module.iter().map(|&g| Monomial::generator(ctx, g)).collect()
    };
    let mut out = Vec::new();
    for base in &module_parts {
        for set in &ghost_sets {
            let mut mono = base.clone();
            for &idx in set {
                mono.odd |= 1u64 << ctx.slot(coords.ghosts[idx]);
            }
            out.push(mono);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
