//! TOML file formats for presentations, Hopf structures, twisting maps,
//! matrix groups, comodule algebras and fusion tables, plus the element
//! syntax used inside them.
//!
//! Elements are sums of terms; a term is an optional scalar (`2`, `-1/3`,
//! `cyc(8; 0, 1, 0, -1)`) followed by space-separated generator names, with
//! `x^3` as shorthand for `x x x`. Tensor terms split their two legs with `@`
//! (or `⊗`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::algebra::{
    AlgebraElement, GenMatrix, Generator, GradingGroup, GroupElement, Monomial, NormalInverse,
    Presentation, Rule, TauKind, TauMaps,
};
use crate::fusion::{Dims, FusionRing, GradedFusionAction};
use crate::hopf::{HopfPresentation, Tensor};
use crate::matgroup::{FiniteMatrixGroup, Mat2};
use crate::scalars::CycScalar;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}:{line}:{col}: {message}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// Parse context: file name and text, for locating errors.
#[derive(Clone, Copy, Debug)]
pub struct Source<'a> {
    pub path: &'a str,
    pub text: &'a str,
}

impl<'a> Source<'a> {
    pub fn new(path: &'a str, text: &'a str) -> Self {
        Source { path, text }
    }

    fn at(&self, offset: usize, message: impl Into<String>) -> FormatError {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        FormatError::Parse {
            path: self.path.to_string(),
            line,
            col,
            message: message.into(),
        }
    }

    /// Error inside a string value, `offset` bytes past its opening quote.
    fn in_value(
        &self,
        span: &Range<usize>,
        offset: usize,
        message: impl Into<String>,
    ) -> FormatError {
        self.at(span.start + 1 + offset, message)
    }

    fn invalid(&self, message: impl std::fmt::Display) -> FormatError {
        FormatError::Invalid {
            path: self.path.to_string(),
            message: message.to_string(),
        }
    }

    fn toml<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        toml::from_str(self.text).map_err(|e| {
            let start = e.span().map_or(0, |s| s.start);
            self.at(start, e.message().trim().to_string())
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    At,
    Arrow,
    Pow(u32),
    Scalar(CycScalar),
    Name(String),
}

fn tokenize(text: &str) -> std::result::Result<Vec<(usize, Token)>, (usize, String)> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let rest = &text[pos..];
        if c.is_whitespace() {
            i += 1;
        } else if rest.starts_with("->") || rest.starts_with('→') {
            out.push((pos, Token::Arrow));
            i += if c == '→' { 1 } else { 2 };
        } else if c == '+' {
            out.push((pos, Token::Plus));
            i += 1;
        } else if c == '-' || c == '\u{2212}' {
            out.push((pos, Token::Minus));
            i += 1;
        } else if c == '*' {
            out.push((pos, Token::Star));
            i += 1;
        } else if c == '@' || c == '⊗' {
            out.push((pos, Token::At));
            i += 1;
        } else if rest.starts_with("(x)") {
            out.push((pos, Token::At));
            i += 3;
        } else if c == '^' {
            let digits: String = rest[1..].chars().take_while(char::is_ascii_digit).collect();
            let n = digits
                .parse()
                .map_err(|_| (pos, "expected an exponent after `^`".to_string()))?;
            out.push((pos, Token::Pow(n)));
            i += 1 + digits.len();
        } else if rest.starts_with("cyc(") {
            let close = rest.find(')').ok_or((pos, "unclosed `cyc(`".to_string()))?;
            let s = CycScalar::parse(&rest[..=close]).map_err(|e| (pos, e.to_string()))?;
            out.push((pos, Token::Scalar(s)));
            i += rest[..=close].chars().count();
        } else if c.is_ascii_digit() {
            let mut len = rest.chars().take_while(char::is_ascii_digit).count();
            if rest[len..].starts_with('/') {
                len += 1 + rest[len + 1..]
                    .chars()
                    .take_while(char::is_ascii_digit)
                    .count();
            }
            let s = CycScalar::parse(&rest[..len]).map_err(|e| (pos, e.to_string()))?;
            out.push((pos, Token::Scalar(s)));
            i += len;
        } else if c.is_alphabetic() || c == '_' {
            let name: String = rest
                .chars()
                .take_while(|&ch| ch.is_alphanumeric() || ch == '_' || ch == '\'')
                .collect();
            i += name.chars().count();
            out.push((pos, Token::Name(name)));
        } else {
            return Err((pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

type Term = (CycScalar, Vec<Monomial>);

/// Terms with up to `legs` word legs separated by `@`.
fn parse_terms(text: &str, names: &[&[String]]) -> std::result::Result<Vec<Term>, (usize, String)> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err((0, "empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut coeff = CycScalar::one();
        let mut signed = false;
        while let Some((_, t @ (Token::Plus | Token::Minus))) = tokens.get(i) {
            if *t == Token::Minus {
                coeff = -coeff;
            }
            signed = true;
            i += 1;
        }
        if !signed && !terms.is_empty() {
            return Err((tokens[i].0, "expected `+` or `-` between terms".into()));
        }
        let mut legs = vec![Vec::new()];
        let start = i;
        while let Some((pos, t)) = tokens.get(i) {
            match t {
                Token::Plus | Token::Minus => break,
                Token::Star => {}
                Token::Arrow => return Err((*pos, "unexpected `->`".into())),
                Token::At => {
                    if legs.len() == names.len() {
                        return Err((*pos, "too many tensor legs".into()));
                    }
                    legs.push(Vec::new());
                }
                Token::Pow(_) => return Err((*pos, "`^` must follow a generator".into())),
                Token::Scalar(s) => coeff *= s,
                Token::Name(n) => {
                    let leg = legs.len() - 1;
                    let idx = names[leg]
                        .iter()
                        .position(|g| g == n)
                        .ok_or((*pos, format!("unknown generator `{n}`")))?;
                    let times = match tokens.get(i + 1) {
                        Some((_, Token::Pow(k))) => {
                            i += 1;
                            *k as usize
                        }
                        _ => 1,
                    };
                    legs[leg].extend(std::iter::repeat_n(idx as u32, times));
                }
            }
            i += 1;
        }
        if i == start {
            let pos = tokens.get(i).map_or(text.len(), |t| t.0);
            return Err((pos, "expected a term".into()));
        }
        if legs.len() != names.len() {
            return Err((
                tokens[start].0,
                format!("expected {} tensor legs", names.len()),
            ));
        }
        terms.push((coeff, legs.into_iter().map(Monomial).collect()));
    }
    Ok(terms)
}

/// Parses an element over the given generator names.
pub fn parse_element(
    names: &[String],
    text: &str,
) -> std::result::Result<AlgebraElement, (usize, String)> {
    let terms = parse_terms(text, &[names])?;
    Ok(AlgebraElement::from_terms(
        terms.into_iter().map(|(c, mut w)| (w.remove(0), c)),
    ))
}

/// Parses `u @ v` terms; legs may use different generator sets.
pub fn parse_tensor(
    left: &[String],
    right: &[String],
    text: &str,
) -> std::result::Result<Tensor, (usize, String)> {
    let terms = parse_terms(text, &[left, right])?;
    Ok(Tensor::from_terms(terms.into_iter().map(|(c, mut w)| {
        let v = w.pop().expect("two legs");
        (w.pop().expect("two legs"), v, c)
    })))
}

fn parse_rule(names: &[String], text: &str) -> std::result::Result<Rule, (usize, String)> {
    let (lhs, rhs) = text
        .split_once("->")
        .or_else(|| text.split_once('→'))
        .ok_or((0, "expected `lhs -> rhs`".to_string()))?;
    let offset = text.len() - rhs.len();
    let l = parse_element(names, lhs)?;
    let r = parse_element(names, rhs).map_err(|(p, m)| (p + offset, m))?;
    match l.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if c.is_one() && !m.is_empty() => Ok(Rule {
            lhs: (*m).clone(),
            rhs: r,
        }),
        _ => Err((0, "left side of a rule must be a single word".into())),
    }
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn key(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        s.to_string()
    } else {
        quote(s)
    }
}

fn format_comps(g: &GroupElement) -> String {
    let parts: Vec<String> = g.comps().iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn string_list(items: &[String]) -> String {
    if items.is_empty() {
        return "[]".into();
    }
    let mut out = String::from("[\n");
    for s in items {
        let _ = writeln!(out, "    {},", quote(s));
    }
    out.push(']');
    out
}

/// Formats a tensor with `@` between legs.
pub fn format_tensor(t: &Tensor, left: &Presentation, right: &Presentation) -> String {
    let keys: Vec<(String, CycScalar)> = t
        .terms()
        .map(|(u, v, c)| {
            (
                format!("{} @ {}", left.format_word(u), right.format_word(v)),
                c.clone(),
            )
        })
        .collect();
    crate::algebra::format_linear(keys.iter().map(|(k, c)| (k, c)), |k: &String| k.clone())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSection {
    orders: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSection {
    names: Vec<Spanned<String>>,
    degrees: Spanned<Vec<Vec<i64>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RulesSection {
    #[serde(default)]
    rewrite: Vec<Spanned<String>>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormalInverseSection {
    generator: Spanned<String>,
    inverse_of: Spanned<String>,
}

type NamedStrings = BTreeMap<String, Spanned<String>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HopfFile {
    group: GroupSection,
    generators: GeneratorSection,
    #[serde(default)]
    rules: RulesSection,
    normal_inverse: Option<NormalInverseSection>,
    coproduct: Option<NamedStrings>,
    counit: Option<NamedStrings>,
    antipode: Option<NamedStrings>,
}

fn element_at(src: &Source, names: &[String], s: &Spanned<String>) -> Result<AlgebraElement> {
    parse_element(names, s.get_ref()).map_err(|(p, m)| src.in_value(&s.span(), p, m))
}

fn build_presentation(
    src: &Source,
    group: GradingGroup,
    gens: &GeneratorSection,
    rules: &RulesSection,
) -> Result<Presentation> {
    let names: Vec<String> = gens.names.iter().map(|n| n.get_ref().clone()).collect();
    if gens.degrees.get_ref().len() != names.len() {
        return Err(src.at(
            gens.degrees.span().start,
            format!(
                "{} degrees for {} generators",
                gens.degrees.get_ref().len(),
                names.len()
            ),
        ));
    }
    for (i, n) in gens.names.iter().enumerate() {
        if names[..i].contains(n.get_ref()) {
            return Err(src.at(
                n.span().start,
                format!("generator `{}` declared twice", n.get_ref()),
            ));
        }
        if tokenize(n.get_ref()).ok().as_deref() != Some(&[(0, Token::Name(n.get_ref().clone()))]) {
            return Err(src.at(
                n.span().start,
                format!("`{}` is not a valid generator name", n.get_ref()),
            ));
        }
    }
    let generators = names
        .iter()
        .zip(gens.degrees.get_ref())
        .map(|(n, d)| {
            Ok(Generator {
                name: n.clone(),
                degree: group
                    .element(d)
                    .map_err(|e| src.at(gens.degrees.span().start, e.to_string()))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !rules.rewrite.is_empty() && !rules.relations.is_empty() {
        return Err(src.invalid("give either `rewrite` rules or `relations`, not both"));
    }
    if rules.relations.is_empty() {
        let parsed = rules
            .rewrite
            .iter()
            .map(|r| {
                parse_rule(&names, r.get_ref()).map_err(|(p, m)| src.in_value(&r.span(), p, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(group, generators, parsed).map_err(|e| src.invalid(e))
    } else {
        let rels = rules
            .relations
            .iter()
            .map(|r| element_at(src, &names, r))
            .collect::<Result<Vec<_>>>()?;
        Presentation::from_relations(group, generators, rels).map_err(|e| src.invalid(e))
    }
}

fn with_inverse(
    src: &Source,
    p: Presentation,
    inv: &Option<NormalInverseSection>,
) -> Result<Presentation> {
    let Some(inv) = inv else { return Ok(p) };
    let names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let generator = p.generator_index(inv.generator.get_ref()).ok_or_else(|| {
        src.at(
            inv.generator.span().start,
            format!("unknown generator `{}`", inv.generator.get_ref()),
        )
    })?;
    let inverse_of = element_at(src, &names, &inv.inverse_of)?;
    p.with_normal_inverse(NormalInverse {
        generator,
        inverse_of,
    })
    .map_err(|e| src.invalid(e))
}

fn per_generator<T>(
    src: &Source,
    names: &[String],
    table: &NamedStrings,
    section: &str,
    parse: impl Fn(&Spanned<String>) -> Result<T>,
) -> Result<Vec<T>> {
    if let Some(extra) = table.keys().find(|k| !names.contains(k)) {
        return Err(src.at(
            table[extra].span().start,
            format!("[{section}] names unknown generator `{extra}`"),
        ));
    }
    names
        .iter()
        .map(|n| {
            table
                .get(n)
                .ok_or_else(|| src.invalid(format!("[{section}] has no entry for `{n}`")))
                .and_then(&parse)
        })
        .collect()
}

/// Reads a presentation, ignoring any Hopf sections.
pub fn parse_presentation(src: Source) -> Result<Presentation> {
    let file: HopfFile = src.toml()?;
    let p = build_presentation(
        &src,
        GradingGroup::new(file.group.orders.clone()),
        &file.generators,
        &file.rules,
    )?;
    with_inverse(&src, p, &file.normal_inverse)
}

/// Reads a presentation with `[coproduct]`, `[counit]` and `[antipode]`.
pub fn parse_hopf(src: Source) -> Result<HopfPresentation> {
    let file: HopfFile = src.toml()?;
    let p = build_presentation(
        &src,
        GradingGroup::new(file.group.orders.clone()),
        &file.generators,
        &file.rules,
    )?;
    let p = with_inverse(&src, p, &file.normal_inverse)?;
    let names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let missing = |s: &str| src.invalid(format!("missing [{s}] section"));
    let coproduct = per_generator(
        &src,
        &names,
        file.coproduct
            .as_ref()
            .ok_or_else(|| missing("coproduct"))?,
        "coproduct",
        |s| {
            parse_tensor(&names, &names, s.get_ref())
                .map_err(|(o, m)| src.in_value(&s.span(), o, m))
        },
    )?;
    let counit = per_generator(
        &src,
        &names,
        file.counit.as_ref().ok_or_else(|| missing("counit"))?,
        "counit",
        |s| CycScalar::parse(s.get_ref()).map_err(|e| src.in_value(&s.span(), 0, e.to_string())),
    )?;
    let antipode = per_generator(
        &src,
        &names,
        file.antipode.as_ref().ok_or_else(|| missing("antipode"))?,
        "antipode",
        |s| element_at(&src, &names, s),
    )?;
    HopfPresentation::new(p, coproduct, counit, antipode).map_err(|e| src.invalid(e))
}

fn write_presentation_body(out: &mut String, p: &Presentation) {
    let _ = writeln!(out, "[group]\norders = {:?}\n", p.group().orders());
    let names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let degrees: Vec<String> = p
        .generators()
        .iter()
        .map(|g| format_comps(&g.degree))
        .collect();
    let quoted: Vec<String> = names.iter().map(|n| quote(n)).collect();
    let _ = writeln!(
        out,
        "[generators]\nnames = [{}]\ndegrees = [{}]\n",
        quoted.join(", "),
        degrees.join(", ")
    );
    let rules: Vec<String> = p.rules().iter().map(|r| p.format_rule(r)).collect();
    let _ = writeln!(out, "[rules]\nrewrite = {}\n", string_list(&rules));
    if let Some(inv) = p.normal_inverse() {
        let _ = writeln!(
            out,
            "[normal_inverse]\ngenerator = {}\ninverse_of = {}\n",
            quote(&p.generators()[inv.generator as usize].name),
            quote(&p.format_element(&inv.inverse_of))
        );
    }
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    write_presentation_body(&mut out, p);
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

pub fn write_hopf(h: &HopfPresentation) -> String {
    let p = h.base();
    let mut out = String::new();
    write_presentation_body(&mut out, p);
    out.push_str("[coproduct]\n");
    for (g, t) in p.generators().iter().zip(h.coproduct_table()) {
        let _ = writeln!(out, "{} = {}", key(&g.name), quote(&format_tensor(t, p, p)));
    }
    out.push_str("\n[counit]\n");
    for (g, c) in p.generators().iter().zip(h.counit_table()) {
        let _ = writeln!(out, "{} = {}", key(&g.name), quote(&c.to_string()));
    }
    out.push_str("\n[antipode]\n");
    for (g, s) in p.generators().iter().zip(h.antipode_table()) {
        let _ = writeln!(out, "{} = {}", key(&g.name), quote(&p.format_element(s)));
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntry {
    element: Spanned<Vec<i64>>,
    #[serde(default)]
    images: NamedStrings,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TauFile {
    #[serde(default = "default_kind")]
    kind: Spanned<String>,
    #[serde(default)]
    map: Vec<MapEntry>,
}

fn default_kind() -> Spanned<String> {
    Spanned::new(0..0, "action".to_string())
}

/// Linear images of generators; unlisted generators are fixed.
fn build_maps(
    src: &Source,
    p: &Presentation,
    entries: &[MapEntry],
) -> Result<BTreeMap<GroupElement, GenMatrix>> {
    let names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let n = names.len();
    let mut out = BTreeMap::new();
    for e in entries {
        let g = p
            .group()
            .element(e.element.get_ref())
            .map_err(|err| src.at(e.element.span().start, err.to_string()))?;
        let mut m: GenMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            CycScalar::one()
                        } else {
                            CycScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for (gen, img) in &e.images {
            let i = p
                .generator_index(gen)
                .ok_or_else(|| src.at(img.span().start, format!("unknown generator `{gen}`")))?
                as usize;
            let x = element_at(src, &names, img)?;
            let mut row = vec![CycScalar::zero(); n];
            for (w, c) in x.terms() {
                if w.len() != 1 {
                    return Err(src.in_value(
                        &img.span(),
                        0,
                        "images must be linear in the generators",
                    ));
                }
                row[w.0[0] as usize] = c.clone();
            }
            m[i] = row;
        }
        if out.insert(g.clone(), m).is_some() {
            return Err(src.at(e.element.span().start, format!("map at {g} given twice")));
        }
    }
    Ok(out)
}

/// Reads twisting maps over an already loaded presentation.
pub fn parse_tau(src: Source, p: &Presentation) -> Result<TauMaps> {
    let file: TauFile = src.toml()?;
    let kind = match file.kind.get_ref().as_str() {
        "action" => TauKind::Action,
        "table" => TauKind::Table,
        other => {
            return Err(src.at(
                file.kind.span().start,
                format!("unknown kind `{other}` (expected action or table)"),
            ))
        }
    };
    let maps = build_maps(&src, p, &file.map)?;
    TauMaps::new(p, kind, maps).map_err(|e| src.invalid(e))
}

fn write_maps(
    out: &mut String,
    table: &str,
    p: &Presentation,
    maps: &BTreeMap<GroupElement, GenMatrix>,
) {
    for (g, m) in maps {
        if g.is_zero() {
            continue;
        }
        let _ = writeln!(out, "[[{table}]]\nelement = {}\n", format_comps(g));
        let _ = writeln!(out, "[{table}.images]");
        for (i, row) in m.iter().enumerate() {
            let is_id = row
                .iter()
                .enumerate()
                .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() });
            if is_id {
                continue;
            }
            let x = AlgebraElement::from_terms(
                row.iter()
                    .enumerate()
                    .map(|(j, c)| (Monomial::gen(j as u32), c.clone())),
            );
            let _ = writeln!(
                out,
                "{} = {}",
                key(&p.generators()[i].name),
                quote(&p.format_element(&x))
            );
        }
        out.push('\n');
    }
}

pub fn write_tau(tau: &TauMaps, p: &Presentation) -> String {
    let kind = match tau.kind() {
        TauKind::Action => "action",
        TauKind::Table => "table",
    };
    let mut out = format!("kind = \"{kind}\"\n\n");
    write_maps(&mut out, "map", p, tau.matrices());
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    q: Option<Spanned<String>>,
    generators: Option<Vec<Spanned<Vec<String>>>>,
    elements: Option<Vec<Spanned<Vec<String>>>>,
}

/// A finite subgroup of `GL(2)` given by generators or by its full element
/// list, with an optional default `q`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub group: FiniteMatrixGroup,
    pub q: Option<CycScalar>,
}

pub fn parse_matrix_group(src: Source) -> Result<GroupSpec> {
    let file: GroupFile = src.toml()?;
    let mats = |list: &[Spanned<Vec<String>>]| -> Result<Vec<Mat2>> {
        list.iter()
            .map(|m| {
                let e = m.get_ref();
                if e.len() != 4 {
                    return Err(src.at(
                        m.span().start,
                        "a matrix is four entries [a, b, c, d] in row order",
                    ));
                }
                let s = e
                    .iter()
                    .map(|x| {
                        CycScalar::parse(x).map_err(|err| src.at(m.span().start, err.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Mat2::new(
                    s[0].clone(),
                    s[1].clone(),
                    s[2].clone(),
                    s[3].clone(),
                ))
            })
            .collect()
    };
    let group = match (&file.generators, &file.elements) {
        (Some(g), None) => FiniteMatrixGroup::generated_by(&mats(g)?),
        (None, Some(e)) => FiniteMatrixGroup::from_elements(mats(e)?),
        _ => return Err(src.invalid("give exactly one of `generators` or `elements`")),
    }
    .map_err(|e| src.invalid(e))?;
    let q = match &file.q {
        Some(q) => Some(
            CycScalar::parse(q.get_ref()).map_err(|e| src.in_value(&q.span(), 0, e.to_string()))?,
        ),
        None => None,
    };
    Ok(GroupSpec { group, q })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComoduleFile {
    hopf: String,
    action: String,
    #[serde(default = "default_twist")]
    twist: Spanned<String>,
    generators: GeneratorSection,
    #[serde(default)]
    rules: RulesSection,
    coaction: NamedStrings,
    #[serde(default)]
    beta: Vec<MapEntry>,
}

fn default_twist() -> Spanned<String> {
    Spanned::new(0..0, "strict".to_string())
}

/// How the carrier relations are twisted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistMode {
    /// `beta` must preserve the relations.
    Strict,
    /// Relations are twisted one by one.
    Rules,
}

/// Paths named in a comodule-algebra file, relative to that file.
pub fn comodule_dependencies(src: Source) -> Result<(String, String)> {
    let file: ComoduleFile = src.toml()?;
    Ok((file.hopf, file.action))
}

#[derive(Clone, Debug)]
pub struct ComoduleSpec {
    pub carrier: Presentation,
    pub coaction: Vec<Tensor>,
    pub beta: BTreeMap<GroupElement, GenMatrix>,
    pub mode: TwistMode,
}

pub fn parse_comodule(src: Source, hopf: &HopfPresentation) -> Result<ComoduleSpec> {
    let file: ComoduleFile = src.toml()?;
    let a = hopf.base();
    let carrier = build_presentation(&src, a.group().clone(), &file.generators, &file.rules)?;
    let a_names: Vec<String> = a.generators().iter().map(|g| g.name.clone()).collect();
    let names: Vec<String> = carrier
        .generators()
        .iter()
        .map(|g| g.name.clone())
        .collect();
    let coaction = per_generator(&src, &names, &file.coaction, "coaction", |s| {
        parse_tensor(&a_names, &names, s.get_ref()).map_err(|(o, m)| src.in_value(&s.span(), o, m))
    })?;
    let beta = build_maps(&src, &carrier, &file.beta)?;
    let mode = match file.twist.get_ref().as_str() {
        "strict" => TwistMode::Strict,
        "rules" => TwistMode::Rules,
        other => {
            return Err(src.at(
                file.twist.span().start,
                format!("unknown twist `{other}` (expected strict or rules)"),
            ))
        }
    };
    Ok(ComoduleSpec {
        carrier,
        coaction,
        beta,
        mode,
    })
}

/// Writes a comodule algebra file pointing at `hopf` and `action`.
pub fn write_comodule(
    hopf_path: &str,
    action_path: &str,
    a: &Presentation,
    carrier: &Presentation,
    coaction: &[Tensor],
    beta: &BTreeMap<GroupElement, GenMatrix>,
    mode: TwistMode,
) -> String {
    let mut out = format!(
        "hopf = {}\naction = {}\n",
        quote(hopf_path),
        quote(action_path)
    );
    if mode == TwistMode::Rules {
        out.push_str("twist = \"rules\"\n");
    }
    out.push('\n');
    let mut body = String::new();
    write_presentation_body(&mut body, carrier);
    // The carrier shares the Hopf algebra's grading group.
    let body = body
        .split_once("\n\n")
        .map_or(body.as_str(), |(_, rest)| rest)
        .to_string();
    out.push_str(&body);
    out.push_str("[coaction]\n");
    for (g, t) in carrier.generators().iter().zip(coaction) {
        let _ = writeln!(
            out,
            "{} = {}",
            key(&g.name),
            quote(&format_tensor(t, a, carrier))
        );
    }
    out.push('\n');
    write_maps(&mut out, "beta", carrier, beta);
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermEntry {
    element: Spanned<Vec<i64>>,
    images: Spanned<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradingSection {
    orders: Vec<u32>,
    degrees: Spanned<Vec<Vec<i64>>>,
    #[serde(default)]
    perm: Vec<PermEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FusionFile {
    simples: Vec<Spanned<String>>,
    unit: Spanned<String>,
    duals: Option<Spanned<Vec<String>>>,
    dims: Option<Spanned<Vec<String>>>,
    mult: Vec<Spanned<String>>,
    grading: Option<GradingSection>,
}

#[derive(Clone, Debug)]
pub struct FusionSpec {
    pub ring: FusionRing,
    pub action: Option<GradedFusionAction>,
}

/// Reads a fusion table. Products with the unit may be omitted; duals
/// default to self-duality.
pub fn parse_fusion(src: Source) -> Result<FusionSpec> {
    let file: FusionFile = src.toml()?;
    let names: Vec<String> = file.simples.iter().map(|s| s.get_ref().clone()).collect();
    for (i, s) in file.simples.iter().enumerate() {
        if names[..i].contains(s.get_ref()) || s.get_ref().split_whitespace().count() != 1 {
            return Err(src.at(
                s.span().start,
                format!("bad or repeated simple `{}`", s.get_ref()),
            ));
        }
    }
    let lookup = |name: &str, span: &Range<usize>| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| src.at(span.start, format!("unknown simple `{name}`")))
    };
    let unit = lookup(file.unit.get_ref(), &file.unit.span())?;
    let dual = match &file.duals {
        Some(d) if d.get_ref().len() != names.len() => {
            return Err(src.at(d.span().start, "one dual per simple"))
        }
        Some(d) => d
            .get_ref()
            .iter()
            .map(|s| lookup(s, &d.span()))
            .collect::<Result<Vec<_>>>()?,
        None => (0..names.len()).collect(),
    };
    let dims = match &file.dims {
        Some(d) if d.get_ref().len() != names.len() => {
            return Err(src.at(d.span().start, "one dimension per simple"))
        }
        Some(d) => Some(
            d.get_ref()
                .iter()
                .map(|s| CycScalar::parse(s).map_err(|e| src.at(d.span().start, e.to_string())))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut entries = Vec::new();
    let mut given = std::collections::BTreeSet::new();
    for m in &file.mult {
        let parts: Vec<&str> = m.get_ref().split_whitespace().collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(src.at(m.span().start, "expected `s r t` or `s r t multiplicity`"));
        }
        let s = lookup(parts[0], &m.span())?;
        let r = lookup(parts[1], &m.span())?;
        let t = lookup(parts[2], &m.span())?;
        let k: u32 = match parts.get(3) {
            Some(k) => k
                .parse()
                .map_err(|_| src.at(m.span().start, format!("bad multiplicity `{k}`")))?,
            None => 1,
        };
        if !given.insert((s, r, t)) {
            return Err(src.at(m.span().start, "triple given twice"));
        }
        entries.push((s, r, t, k));
    }
    for x in 0..names.len() {
        for (s, r) in [(unit, x), (x, unit)] {
            if !entries.iter().any(|&(a, b, _, _)| (a, b) == (s, r)) {
                entries.push((s, r, x, 1));
            }
        }
    }
    entries.sort_unstable();
    entries.dedup();
    let ring =
        FusionRing::new(names.clone(), unit, dual, &entries, dims).map_err(|e| src.invalid(e))?;
    let action = match &file.grading {
        None => None,
        Some(g) => {
            let group = GradingGroup::new(g.orders.clone());
            if g.degrees.get_ref().len() != names.len() {
                return Err(src.at(g.degrees.span().start, "one degree per simple"));
            }
            let degree = g
                .degrees
                .get_ref()
                .iter()
                .map(|d| {
                    group
                        .element(d)
                        .map_err(|e| src.at(g.degrees.span().start, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut perm = BTreeMap::new();
            for p in &g.perm {
                let el = group
                    .element(p.element.get_ref())
                    .map_err(|e| src.at(p.element.span().start, e.to_string()))?;
                if p.images.get_ref().len() != names.len() {
                    return Err(src.at(p.images.span().start, "one image per simple"));
                }
                let images = p
                    .images
                    .get_ref()
                    .iter()
                    .map(|s| lookup(s, &p.images.span()))
                    .collect::<Result<Vec<_>>>()?;
                perm.insert(el, images);
            }
            Some(
                GradedFusionAction::new(ring.clone(), group, degree, perm)
                    .map_err(|e| src.invalid(e))?,
            )
        }
    };
    Ok(FusionSpec { ring, action })
}

/// Writes a fusion table, omitting products with the unit.
pub fn write_fusion(ring: &FusionRing) -> String {
    let names = ring.names();
    let quoted = |v: &[String]| v.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", ");
    let mut out = format!(
        "simples = [{}]\nunit = {}\n",
        quoted(names),
        quote(&names[ring.unit()])
    );
    let duals: Vec<String> = ring.duals().iter().map(|&d| names[d].clone()).collect();
    let _ = writeln!(out, "duals = [{}]", quoted(&duals));
    if let Dims::Exact(d) = ring.dims() {
        let ds: Vec<String> = d.iter().map(CycScalar::to_string).collect();
        let _ = writeln!(out, "dims = [{}]", quoted(&ds));
    }
    let mult: Vec<String> = ring
        .entries()
        .into_iter()
        .filter(|&(s, r, _, _)| s != ring.unit() && r != ring.unit())
        .map(|(s, r, t, m)| {
            if m == 1 {
                format!("{} {} {}", names[s], names[r], names[t])
            } else {
                format!("{} {} {} {m}", names[s], names[r], names[t])
            }
        })
        .collect();
    let _ = writeln!(out, "mult = {}", string_list(&mult));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::fusion::builtin as fb;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn element_syntax() {
        let n = names(&["x", "y"]);
        let e = parse_element(&n, "-1/2 x y + cyc(4; 0, 1)*y^2 - 3").unwrap();
        assert_eq!(e.coeff(&Monomial(vec![0, 1])), CycScalar::from_ratio(-1, 2));
        assert_eq!(
            e.coeff(&Monomial(vec![1, 1])),
            CycScalar::root_of_unity(1, 4).unwrap()
        );
        assert_eq!(e.coeff(&Monomial::one()), CycScalar::from_int(-3));
        assert_eq!(
            parse_element(&n, "x z").unwrap_err(),
            (2, "unknown generator `z`".to_string())
        );
        assert!(parse_element(&n, "x y y x").is_ok());
        assert!(parse_element(&n, "x +").is_err());
        assert!(parse_element(&n, "").is_err());
        let t = parse_tensor(&n, &n, "x @ y - 2 y ⊗ 1").unwrap();
        assert_eq!(t.terms().count(), 2);
    }

    #[test]
    fn printed_elements_reparse() {
        let p = builtin::quantum_plane(&CycScalar::root_of_unity(1, 8).unwrap()).unwrap();
        let n: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
        for r in p.rules() {
            let text = p.format_rule(r);
            assert_eq!(parse_rule(&n, &text).unwrap(), *r, "{text}");
        }
    }

    #[test]
    fn hopf_round_trip() {
        for h in [
            builtin::sl2(&CycScalar::one()).unwrap(),
            builtin::gl2().unwrap(),
        ] {
            let text = write_hopf(&h);
            let back = parse_hopf(Source::new("t.hopf", &text)).unwrap();
            assert_eq!(back, h, "{text}");
        }
    }

    #[test]
    fn tau_round_trip() {
        let x = builtin::sl2_sign_action().unwrap();
        let p = x.hopf().base();
        let text = write_tau(x.action(), p);
        assert_eq!(
            parse_tau(Source::new("t.tau", &text), p).unwrap(),
            *x.action()
        );
    }

    #[test]
    fn parse_errors_are_located() {
        let text = "[group]\norders = [2]\n\n[generators]\nnames = [\"x\", \"y\"]\ndegrees = [[1], [1]]\n\n[rules]\nrewrite = [\"y x -> x q\"]\n";
        let err = parse_presentation(Source::new("bad.hopf", text)).unwrap_err();
        assert_eq!(err.to_string(), "bad.hopf:9:22: unknown generator `q`");
        let err =
            parse_presentation(Source::new("bad.hopf", "[group]\norders = [2\n")).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn fusion_round_trip() {
        for ring in [fb::ising(), fb::rep_s3()] {
            let text = write_fusion(&ring);
            let back = parse_fusion(Source::new("t.fus", &text)).unwrap();
            assert_eq!(back.ring, ring, "{text}");
        }
    }

    #[test]
    fn non_group_list_rejected() {
        let text = "elements = [[\"1\", \"0\", \"0\", \"1\"], [\"0\", \"1\", \"-1\", \"0\"]]\n";
        let err = parse_matrix_group(Source::new("bad.grp", text)).unwrap_err();
        assert!(err.to_string().contains("is not in the list"), "{err}");
    }
}
