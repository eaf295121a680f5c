//! Line-oriented model files.
//!
//! ```text
//! # comment
//! [generators]
//! x    even field
//! x_p  odd  antifield x
//! [lie]
//! basis  c1 c2
//! module v1 v2
//! action adjoint | coadjoint
//! [brackets]
//! [c1,c2] = c2
//! [rep]
//! c1 . v1 = 2*v2
//! [exprs]
//! S = 1/2*x^2
//! [derivation]
//! c2 = c1*c2
//! [integrand]
//! x_p*t | -1/2*x^2
//! ```
//!
//! `[generators]` comes first. Bracket and action right-hand sides are
//! rational linear combinations of basis ghosts and module coordinates.
//! Each integrand line is `P | T` (meaning `P·e^T`) or just `P`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use bvkit_core::context::{is_identifier, RESERVED};
use bvkit_core::{
    BigRational, BvSpace, Context, Derivation, ExpElement, Gen, LieCoordinates, LieModel, Monomial, Parity, Poly, Role,
};

use crate::expr::{parse_located, ParseError, Warning};

#[derive(Clone, Debug)]
pub struct Model {
    pub ctx: Arc<Context>,
    pub lie: Option<LieModel>,
    pub exprs: Vec<(String, Poly)>,
    pub derivation: Option<Derivation>,
    pub integrand: Option<ExpElement>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {error}")]
    Parse { path: String, error: ParseError },
}

const SECTIONS: [&str; 7] = ["generators", "lie", "brackets", "rep", "exprs", "derivation", "integrand"];

/// One content line: 1-based number, column offset of its first byte, text.
#[derive(Clone, Debug)]
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into() }
    }

    /// Whitespace-separated words with their 1-based columns.
    fn words(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (idx, c) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (start, c.is_whitespace()) {
                (None, false) => start = Some(idx),
                (Some(s), true) => {
                    out.push((self.text[..s].chars().count() + 1, &self.text[s..idx]));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    /// Splits at the first `sep`, returning the right side's column offset too.
    fn split_once(&self, sep: char) -> Option<(&str, &str, usize)> {
        let idx = self.text.find(sep)?;
        let rest = &self.text[idx + sep.len_utf8()..];
        Some((&self.text[..idx], rest, self.text[..idx + sep.len_utf8()].chars().count()))
    }
}

struct Sections<'a> {
    headers: BTreeMap<&'static str, usize>,
    bodies: BTreeMap<&'static str, Vec<Line<'a>>>,
}

fn split_sections(src: &str) -> Result<Sections<'_>, ParseError> {
    let mut headers = BTreeMap::new();
    let mut bodies: BTreeMap<&'static str, Vec<Line>> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (idx, raw) in src.lines().enumerate() {
        let number = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim_end();
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = text.chars().count() - trimmed.chars().count();
        let header = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']'));
        if let Some(name) = header.filter(|h| !h.contains(',')) {
            let name = name.trim();
            let section = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| ParseError {
                line: number,
                column: indent + 1,
                message: format!("unknown section `[{name}]`"),
            })?;
            if headers.insert(*section, number).is_some() {
                return Err(ParseError {
                    line: number,
                    column: indent + 1,
                    message: format!("duplicate section `[{name}]`"),
                });
            }
            if current.is_none() && *section != "generators" {
                return Err(ParseError {
                    line: number,
                    column: indent + 1,
                    message: "the first section must be `[generators]`".into(),
                });
            }
            current = Some(section);
            bodies.entry(section).or_default();
            continue;
        }
        let Some(section) = current else {
            return Err(ParseError {
                line: number,
                column: indent + 1,
                message: "content before any section header".into(),
            });
        };
        bodies.get_mut(section).expect("section body").push(Line { number, text });
    }
    if !headers.contains_key("generators") {
        return Err(ParseError { line: 1, column: 1, message: "missing `[generators]` section".into() });
    }
    Ok(Sections { headers, bodies })
}

fn parse_generators(lines: &[Line]) -> Result<Arc<Context>, ParseError> {
    let mut builder = Context::builder();
    let mut declared: BTreeMap<String, (Parity, bool, bool)> = BTreeMap::new();
    for line in lines {
        let words = line.words();
        if !(3..=4).contains(&words.len()) {
            return Err(line.error(words[0].0, "expected `name parity role [paired-field]`"));
        }
        let (col, name) = words[0];
        if !is_identifier(name) {
            return Err(line.error(col, format!("`{name}` is not a valid identifier")));
        }
        if RESERVED.contains(&name) {
            return Err(line.error(col, format!("`{name}` is reserved")));
        }
        if declared.contains_key(name) {
            return Err(line.error(col, format!("generator `{name}` declared twice")));
        }
        let parity = match words[1].1 {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            other => return Err(line.error(words[1].0, format!("parity must be `even` or `odd`, found `{other}`"))),
        };
        let is_field = match (words[2].1, words.len()) {
            ("field", 3) => {
                builder = builder.field(name, parity);
                true
            }
            ("plain", 3) => {
                builder = builder.plain(name, parity);
                false
            }
            ("antifield", 4) => {
                let (fcol, field) = words[3];
                match declared.get_mut(field) {
                    Some((fp, true, paired)) => {
                        if *paired {
                            return Err(line.error(fcol, format!("field `{field}` already has an antifield")));
                        }
                        if *fp == parity {
                            return Err(line.error(
                                words[1].0,
                                format!("antifield of {fp} field `{field}` must be {}", fp.flip()),
                            ));
                        }
                        *paired = true;
                    }
                    Some(_) => return Err(line.error(fcol, format!("`{field}` is not a field"))),
                    None => {
                        return Err(line.error(fcol, format!("field `{field}` must be declared before its antifield")))
                    }
                }
                builder = builder.antifield(name, parity, field);
                false
            }
            ("field" | "plain", _) => return Err(line.error(words[3].0, "unexpected paired field")),
            ("antifield", _) => return Err(line.error(words[2].0, "antifield needs its paired field")),
            (other, _) => {
                return Err(
                    line.error(words[2].0, format!("role must be `field`, `antifield` or `plain`, found `{other}`"))
                )
            }
        };
        declared.insert(name.to_string(), (parity, is_field, false));
    }
    let first = lines.first().map_or(1, |l| l.number);
    builder.build().map_err(|e| ParseError { line: first, column: 1, message: e.to_string() })
}

enum ModuleKind {
    Table,
    Adjoint,
    Coadjoint,
}

struct LieHeader {
    basis: Vec<String>,
    module: Vec<String>,
    kind: ModuleKind,
}

fn parse_lie_header(lines: &[Line], ctx: &Context) -> Result<LieHeader, ParseError> {
    let mut basis = None;
    let mut module = None;
    let mut kind = None;
    for line in lines {
        let words = line.words();
        let (col, key) = words[0];
        let names = || -> Result<Vec<String>, ParseError> {
            words[1..]
                .iter()
                .map(|&(c, w)| {
                    let g = ctx.lookup(w).map_err(|_| line.error(c, format!("unknown generator `{w}`")))?;
                    if ctx.role(g) != Role::Field {
                        return Err(line.error(c, format!("`{w}` must be declared as a field")));
                    }
                    Ok(w.to_string())
                })
                .collect()
        };
        match key {
            "basis" if basis.is_none() => basis = Some(names()?),
            "module" if module.is_none() => module = Some(names()?),
            "action" if kind.is_none() => {
                kind = Some(match words.get(1).map(|w| w.1) {
                    Some("adjoint") if words.len() == 2 => ModuleKind::Adjoint,
                    Some("coadjoint") if words.len() == 2 => ModuleKind::Coadjoint,
                    _ => return Err(line.error(col, "expected `action adjoint` or `action coadjoint`")),
                })
            }
            "basis" | "module" | "action" => return Err(line.error(col, format!("`{key}` given twice"))),
            other => {
                return Err(line.error(col, format!("unknown key `{other}`; expected `basis`, `module` or `action`")))
            }
        }
    }
    let basis = basis.ok_or_else(|| ParseError {
        line: lines.first().map_or(1, |l| l.number),
        column: 1,
        message: "`[lie]` needs a `basis` line".into(),
    })?;
    Ok(LieHeader { basis, module: module.unwrap_or_default(), kind: kind.unwrap_or(ModuleKind::Table) })
}

/// Reads `Σ q_i·g_i` with every `g_i` among `allowed`, returning `(index, q_i)`.
fn linear_combination(
    line: &Line,
    src: &str,
    col0: usize,
    ctx: &Arc<Context>,
    allowed: &[String],
    warnings: &mut Vec<Warning>,
) -> Result<Vec<(usize, BigRational)>, ParseError> {
    let parsed = parse_located(src, ctx, line.number, col0)?;
    warnings.extend(parsed.warnings);
    let mut out = Vec::new();
    let fail = |what: String| line.error(col0 + 1, what);
    for (mono, coef) in parsed.poly.terms() {
        let idx = allowed
            .iter()
            .position(|name| ctx.lookup(name).map(|g| *mono == Monomial::generator(ctx, g)).unwrap_or(false));
        let Some(idx) = idx else {
            return Err(fail(format!("right-hand side must be linear in {}", allowed.join(", "))));
        };
        let q = coef.as_rational().ok_or_else(|| fail("coefficients must be rational".into()))?;
        out.push((idx, q));
    }
    Ok(out)
}

fn index_of(line: &Line, col: usize, names: &[String], word: &str, what: &str) -> Result<usize, ParseError> {
    names.iter().position(|n| n == word).ok_or_else(|| line.error(col, format!("`{word}` is not a {what}")))
}

fn column_of(line: &Line, needle: &str, from: usize) -> usize {
    let byte = line.text[from..].find(needle).map_or(from, |b| b + from);
    line.text[..byte].chars().count() + 1
}

fn parse_lie(
    sections: &Sections,
    ctx: &Arc<Context>,
    warnings: &mut Vec<Warning>,
) -> Result<Option<LieModel>, ParseError> {
    let header_line = |s: &str| sections.headers.get(s).copied();
    let Some(lie_line) = header_line("lie") else {
        for s in ["brackets", "rep"] {
            if let Some(n) = header_line(s) {
                return Err(ParseError { line: n, column: 1, message: format!("`[{s}]` requires a `[lie]` section") });
            }
        }
        return Ok(None);
    };
    let header = parse_lie_header(&sections.bodies["lie"], ctx)?;
    let lie_error = |e: bvkit_core::Error| ParseError { line: lie_line, column: 1, message: e.to_string() };

    let mut builder = LieModel::builder(header.basis.clone(), Vec::new());
    for line in sections.bodies.get("brackets").map(Vec::as_slice).unwrap_or(&[]) {
        let (lhs, rhs, col0) = line.split_once('=').ok_or_else(|| line.error(1, "expected `[a,b] = expr`"))?;
        let inner = lhs.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']'));
        let pair = inner.and_then(|s| s.split_once(','));
        let Some((a, b)) = pair else {
            return Err(line.error(column_of(line, lhs.trim(), 0), "expected `[a,b]` on the left"));
        };
        let (a, b) = (a.trim(), b.trim());
        let j = index_of(line, column_of(line, a, 0), &header.basis, a, "basis ghost")?;
        let k = index_of(line, column_of(line, b, lhs.find(',').unwrap_or(0)), &header.basis, b, "basis ghost")?;
        for (i, q) in linear_combination(line, rhs, col0, ctx, &header.basis, warnings)? {
            builder = builder.bracket(j, k, i, q);
        }
    }
    let base = builder.build().map_err(lie_error)?;

    let rep_lines = sections.bodies.get("rep").map(Vec::as_slice).unwrap_or(&[]);
    let model = match header.kind {
        ModuleKind::Adjoint | ModuleKind::Coadjoint if !rep_lines.is_empty() => {
            let n = sections.headers["rep"];
            return Err(ParseError {
                line: n,
                column: 1,
                message: "`[rep]` conflicts with `action` in `[lie]`".into(),
            });
        }
        ModuleKind::Adjoint => base.with_adjoint(header.module.clone()).map_err(lie_error)?,
        ModuleKind::Coadjoint => base.with_coadjoint(header.module.clone()).map_err(lie_error)?,
        ModuleKind::Table => {
            let mut builder = LieModel::builder(header.basis.clone(), header.module.clone());
            for j in 0..base.dim() {
                for k in 0..base.dim() {
                    for i in 0..base.dim() {
                        let f = base.f(i, j, k);
                        if j < k && *f != BigRational::from_integer(0.into()) {
                            builder = builder.bracket(j, k, i, f.clone());
                        }
                    }
                }
            }
            for line in rep_lines {
                let (lhs, rhs, col0) = line.split_once('=').ok_or_else(|| line.error(1, "expected `g . v = expr`"))?;
                let Some((g, v)) = lhs.split_once('.') else {
                    return Err(line.error(column_of(line, lhs.trim(), 0), "expected `g . v` on the left"));
                };
                let (g, v) = (g.trim(), v.trim());
                let k = index_of(line, column_of(line, g, 0), &header.basis, g, "basis ghost")?;
                let j = index_of(
                    line,
                    column_of(line, v, lhs.find('.').unwrap_or(0)),
                    &header.module,
                    v,
                    "module coordinate",
                )?;
                for (i, q) in linear_combination(line, rhs, col0, ctx, &header.module, warnings)? {
                    builder = builder.action(k, j, i, q);
                }
            }
            builder.build().map_err(lie_error)?
        }
    };
    model.coordinates_in(ctx).map_err(lie_error)?;
    Ok(Some(model))
}

fn named_line<'a>(line: &'a Line, what: &str) -> Result<(&'a str, &'a str, usize), ParseError> {
    let (lhs, rhs, col0) = line.split_once('=').ok_or_else(|| line.error(1, format!("expected `{what} = expr`")))?;
    let name = lhs.trim();
    if !is_identifier(name) {
        return Err(line.error(column_of(line, name, 0), format!("`{name}` is not a valid name")));
    }
    Ok((name, rhs, col0))
}

/// Parses a model file held in memory.
pub fn parse_model(src: &str) -> Result<Model, ParseError> {
    let sections = split_sections(src)?;
    let ctx = parse_generators(&sections.bodies["generators"])?;
    let mut warnings = Vec::new();
    let lie = parse_lie(&sections, &ctx, &mut warnings)?;

    let mut exprs: Vec<(String, Poly)> = Vec::new();
    for line in sections.bodies.get("exprs").map(Vec::as_slice).unwrap_or(&[]) {
        let (name, rhs, col0) = named_line(line, "name")?;
        if exprs.iter().any(|(n, _)| n == name) {
            return Err(line.error(column_of(line, name, 0), format!("expression `{name}` defined twice")));
        }
        let parsed = parse_located(rhs, &ctx, line.number, col0)?;
        warnings.extend(parsed.warnings);
        exprs.push((name.to_string(), parsed.poly));
    }

    let derivation = match sections.headers.get("derivation") {
        None => None,
        Some(&header) => {
            let mut images: Vec<(Gen, Poly)> = Vec::new();
            let mut parity: Option<Parity> = None;
            for line in &sections.bodies["derivation"] {
                let (name, rhs, col0) = named_line(line, "generator")?;
                let col = column_of(line, name, 0);
                let g = ctx.lookup(name).map_err(|_| line.error(col, format!("unknown generator `{name}`")))?;
                if images.iter().any(|(h, _)| *h == g) {
                    return Err(line.error(col, format!("image of `{name}` given twice")));
                }
                let parsed = parse_located(rhs, &ctx, line.number, col0)?;
                warnings.extend(parsed.warnings);
                let image = parsed.poly;
                if image.is_zero() {
                    continue;
                }
                let p = image.parity().ok_or_else(|| line.error(col0 + 1, "image must have definite parity"))?
                    + ctx.parity(g);
                match parity {
                    Some(q) if q != p => {
                        return Err(line.error(
                            col0 + 1,
                            format!("image parity implies a {p} derivation, earlier lines a {q} one"),
                        ))
                    }
                    _ => parity = Some(p),
                }
                images.push((g, image));
            }
            let d = Derivation::new(&ctx, parity.unwrap_or(Parity::Odd), images).map_err(|e| ParseError {
                line: header,
                column: 1,
                message: e.to_string(),
            })?;
            Some(d)
        }
    };

    let integrand = match sections.headers.get("integrand") {
        None => None,
        Some(&header) => {
            let mut pairs = Vec::new();
            for line in &sections.bodies["integrand"] {
                let (p_src, t_src, t_col) = match line.split_once('|') {
                    Some(parts) => (parts.0, Some(parts.1), parts.2),
                    None => (line.text, None, 0),
                };
                let p = parse_located(p_src, &ctx, line.number, 0)?;
                warnings.extend(p.warnings);
                let t = match t_src {
                    Some(src) => {
                        let t = parse_located(src, &ctx, line.number, t_col)?;
                        warnings.extend(t.warnings);
                        if !t.poly.is_even() {
                            return Err(line.error(t_col + 1, "exponent must be even"));
                        }
                        t.poly
                    }
                    None => Poly::zero(&ctx),
                };
                pairs.push((p.poly, t));
            }
            Some(ExpElement::new(&ctx, pairs).map_err(|e| ParseError {
                line: header,
                column: 1,
                message: e.to_string(),
            })?)
        }
    };

    Ok(Model { ctx, lie, exprs, derivation, integrand, warnings })
}

/// Reads and parses a model file.
pub fn load_model(path: &Path) -> Result<Model, LoadError> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: shown.clone(), source })?;
    parse_model(&src).map_err(|error| LoadError::Parse { path: shown, error })
}

impl Model {
    pub fn expr(&self, name: &str) -> Option<&Poly> {
        self.exprs.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn coordinates(&self) -> Option<LieCoordinates> {
        self.lie.as_ref().map(|l| l.coordinates_in(&self.ctx).expect("validated at parse time"))
    }

    pub fn bv(&self) -> bvkit_core::Result<BvSpace> {
        BvSpace::new(&self.ctx)
    }
}
