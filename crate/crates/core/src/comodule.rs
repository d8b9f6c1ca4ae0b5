//! Comodule algebras over presented Hopf algebras, their twists, invariant
//! rings over finite quantum subgroups, and the monoidal comparison map `F_2`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{
    tau_twist_multiply, twist_presentation, twist_rules, AlgebraElement, AlgebraError, GenMatrix,
    Generator, GroupElement, Monomial, Presentation, TauKind, TauMaps,
};
use crate::builtin;
use crate::hopf::{
    graded_twist, to_twisted, HopfError, HopfPresentation, InvariantCocentralAction, Tensor,
};
use crate::linalg;
use crate::matgroup::{check_admissible, AdmissibleReport, FiniteMatrixGroup, MatGroupError};
use crate::scalars::{CycScalar, RationalPoly};

#[derive(Debug, Error)]
pub enum ComoduleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Group(#[from] MatGroupError),
    #[error("invalid comodule structure: {0}")]
    Structure(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("group is not admissible: {0}")]
    NotAdmissible(String),
}

pub type Result<T> = std::result::Result<T, ComoduleError>;

fn structure(msg: String) -> ComoduleError {
    ComoduleError::Structure(msg)
}

fn scale_tensor(t: &Tensor, c: &CycScalar) -> Tensor {
    Tensor::from_terms(t.terms().map(|(u, v, s)| (u.clone(), v.clone(), s * c)))
}

type Tensor3 = BTreeMap<(Monomial, Monomial, Monomial), CycScalar>;

fn add3(t: &mut Tensor3, key: (Monomial, Monomial, Monomial), c: CycScalar) {
    let s = match t.remove(&key) {
        Some(x) => &x + &c,
        None => c,
    };
    if !s.is_zero() {
        t.insert(key, s);
    }
}

/// A left comodule algebra `rho: R -> A (x) R`, given on generators of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleAlgebra {
    hopf: HopfPresentation,
    carrier: Presentation,
    coaction: Vec<Tensor>,
}

impl ComoduleAlgebra {
    pub fn new(
        hopf: HopfPresentation,
        carrier: Presentation,
        coaction: Vec<Tensor>,
    ) -> Result<Self> {
        if hopf.base().group() != carrier.group() {
            return Err(structure(
                "carrier and Hopf algebra are graded by different groups".into(),
            ));
        }
        if coaction.len() != carrier.num_generators() {
            return Err(ComoduleError::Dimension(format!(
                "{} coaction entries for {} generators",
                coaction.len(),
                carrier.num_generators()
            )));
        }
        let r = ComoduleAlgebra {
            hopf,
            carrier,
            coaction,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn hopf(&self) -> &HopfPresentation {
        &self.hopf
    }

    pub fn carrier(&self) -> &Presentation {
        &self.carrier
    }

    pub fn coaction_table(&self) -> &[Tensor] {
        &self.coaction
    }

    /// `rho` extended multiplicatively.
    pub fn coact(&self, r: &AlgebraElement) -> Result<Tensor> {
        let a = self.hopf.base();
        let mut out = Tensor::zero();
        for (w, c) in r.terms() {
            let mut acc = Tensor::one();
            for &y in &w.0 {
                acc = acc.mul_mixed(a, &self.carrier, &self.coaction[y as usize])?;
            }
            out = out.add(&scale_tensor(&acc, c));
        }
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let a = self.hopf.base();
        let p = &self.carrier;
        for (i, t) in self.coaction.iter().enumerate() {
            let name = &p.generators()[i].name;
            let deg = &p.generators()[i].degree;
            for (u, v, _) in t.terms() {
                if !a.is_normal(u) || !p.is_normal(v) {
                    return Err(structure(format!(
                        "coaction of {name} is not in normal form"
                    )));
                }
                if a.degree_of(u) != *deg {
                    return Err(structure(format!(
                        "coaction of {name} has a coefficient outside degree {deg}"
                    )));
                }
            }
        }
        for r in p.relations() {
            if !self.coact(&r)?.is_zero() {
                return Err(structure(format!(
                    "coaction does not respect the relation {}",
                    p.format_element(&r)
                )));
            }
        }
        for (i, t) in self.coaction.iter().enumerate() {
            let name = &p.generators()[i].name;
            let mut left = Tensor3::new();
            let mut right = Tensor3::new();
            let mut counit = AlgebraElement::zero();
            for (u, v, c) in t.terms() {
                let du = self.hopf.coproduct(&AlgebraElement::monomial(u.clone()))?;
                for (m, n, s) in du.terms() {
                    add3(&mut left, (m.clone(), n.clone(), v.clone()), c * s);
                }
                let rv = self.coact(&AlgebraElement::monomial(v.clone()))?;
                for (m, n, s) in rv.terms() {
                    add3(&mut right, (u.clone(), m.clone(), n.clone()), c * s);
                }
                let e = self.hopf.counit(&AlgebraElement::monomial(u.clone()));
                counit = counit.add(&AlgebraElement::term(v.clone(), c * &e));
            }
            if left != right {
                return Err(structure(format!(
                    "coaction is not coassociative on {name}"
                )));
            }
            if counit != AlgebraElement::generator(i as u32) {
                return Err(structure(format!("counit law fails on {name}")));
            }
        }
        Ok(())
    }
}

/// A comodule algebra with a compatible action `beta` of the grading group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComoduleAlgebra {
    base: ComoduleAlgebra,
    action: InvariantCocentralAction,
    beta: TauMaps,
}

impl EquivariantComoduleAlgebra {
    pub fn new(
        action: InvariantCocentralAction,
        carrier: Presentation,
        coaction: Vec<Tensor>,
        beta: TauMaps,
    ) -> Result<Self> {
        let base = ComoduleAlgebra::new(action.hopf().clone(), carrier, coaction)?;
        if beta.kind() != TauKind::Action {
            return Err(structure("beta is not declared as a group action".into()));
        }
        beta.check(&base.carrier)?;
        let r = EquivariantComoduleAlgebra { base, action, beta };
        r.check_equivariance()?;
        Ok(r)
    }

    pub fn comodule(&self) -> &ComoduleAlgebra {
        &self.base
    }

    pub fn carrier(&self) -> &Presentation {
        &self.base.carrier
    }

    pub fn action(&self) -> &InvariantCocentralAction {
        &self.action
    }

    pub fn beta(&self) -> &TauMaps {
        &self.beta
    }

    /// `rho beta_g = (alpha_g (x) beta_g) rho` on generators.
    fn check_equivariance(&self) -> Result<()> {
        let p = &self.base.carrier;
        for g in self.beta.matrices().keys() {
            for i in 0..p.num_generators() as u32 {
                let x = AlgebraElement::generator(i);
                let lhs = self.base.coact(&self.beta.apply(p, g, &x)?)?;
                let rhs = self.base.coaction[i as usize]
                    .map(|u| self.action.act(g, u), |v| Ok(self.beta.apply(p, g, v)?))?;
                if lhs != rhs {
                    return Err(structure(format!(
                        "coaction is not equivariant at {g} on {}",
                        p.generators()[i as usize].name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Rewrites the coaction table into twisted presentations on both legs.
fn twisted_coaction(
    x: &InvariantCocentralAction,
    hopf_t: &HopfPresentation,
    r: &ComoduleAlgebra,
    beta: &TauMaps,
    carrier_t: &Presentation,
) -> Result<Vec<Tensor>> {
    let zero = r.carrier.group().zero();
    let mut out = Vec::new();
    for t in &r.coaction {
        out.push(t.map(
            |u| to_twisted(x, hopf_t.base(), u),
            |v| Ok(carrier_t.normal_form(&beta.theta_inv(&r.carrier, &zero, v))?),
        )?);
    }
    Ok(out)
}

/// `R^{t,beta}` over `A^{t,alpha}`: same generators and coaction table, the
/// carrier product twisted by `beta`.
pub fn twist_comodule_algebra(
    x: &InvariantCocentralAction,
    r: &EquivariantComoduleAlgebra,
) -> Result<EquivariantComoduleAlgebra> {
    if r.action != *x {
        return Err(structure(
            "the comodule algebra is built over a different action".into(),
        ));
    }
    let hopf_t = graded_twist(x)?;
    let carrier_t = twist_presentation(r.carrier(), &r.beta)?;
    let coaction = twisted_coaction(x, &hopf_t, &r.base, &r.beta, &carrier_t)?;
    let beta_t = TauMaps::new(&carrier_t, TauKind::Action, r.beta.matrices().clone())?;
    let alpha_t = TauMaps::new(
        hopf_t.base(),
        TauKind::Action,
        x.action().matrices().clone(),
    )?;
    let action_t = InvariantCocentralAction::new(hopf_t, alpha_t)?;
    EquivariantComoduleAlgebra::new(action_t, carrier_t, coaction, beta_t)
}

/// Twist of a comodule algebra whose carrier relations are not preserved by
/// `beta`: the relations are twisted one by one and the result is validated
/// directly as a comodule algebra over `A^{t,alpha}`.
pub fn twist_comodule_rules(
    x: &InvariantCocentralAction,
    r: &ComoduleAlgebra,
    beta: BTreeMap<GroupElement, GenMatrix>,
) -> Result<ComoduleAlgebra> {
    if r.hopf != *x.hopf() {
        return Err(structure(
            "the comodule algebra is built over a different Hopf algebra".into(),
        ));
    }
    let beta = TauMaps::new(&r.carrier, TauKind::Action, beta)?;
    let hopf_t = graded_twist(x)?;
    let carrier_t = twist_rules(&r.carrier, &beta)?;
    let coaction = twisted_coaction(x, &hopf_t, r, &beta, &carrier_t)?;
    ComoduleAlgebra::new(hopf_t, carrier_t, coaction)
}

/// Outcome of comparing identity-degree products before and after twisting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    pub checked: usize,
    pub mismatch: Option<String>,
}

impl ChartReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Products of identity-degree words of length `<= max_len` agree in `R`,
/// under the twisted product formula, and in the twisted presentation.
pub fn identity_degree_chart(
    r: &EquivariantComoduleAlgebra,
    max_len: usize,
) -> Result<ChartReport> {
    let p = r.carrier();
    let tw = twist_presentation(p, &r.beta)?;
    let zero = p.group().zero();
    let words: Vec<Monomial> = p
        .normal_words(max_len)
        .into_iter()
        .filter(|w| p.degree_of(w).is_zero())
        .collect();
    let mut checked = 0;
    for u in &words {
        for v in &words {
            let (ue, ve) = (
                AlgebraElement::monomial(u.clone()),
                AlgebraElement::monomial(v.clone()),
            );
            let plain = p.multiply(&ue, &ve)?;
            let twisted = tau_twist_multiply(p, &r.beta, &ue, &ve)?;
            let ut = tw.normal_form(&r.beta.theta_inv(p, &zero, &ue))?;
            let vt = tw.normal_form(&r.beta.theta_inv(p, &zero, &ve))?;
            let via = p.normal_form(&r.beta.theta(&tw, &zero, &tw.multiply(&ut, &vt)?))?;
            checked += 1;
            if plain != twisted || plain != via {
                let msg = format!("{} * {}", p.format_word(u), p.format_word(v));
                return Ok(ChartReport {
                    checked,
                    mismatch: Some(msg),
                });
            }
        }
    }
    Ok(ChartReport {
        checked,
        mismatch: None,
    })
}

/// Functions on a finite matrix group, with pointwise product or the product
/// twisted by the cyclic group generated by `q`.
#[derive(Clone, Debug)]
pub struct FunctionAlgebra {
    group: FiniteMatrixGroup,
    q: CycScalar,
    order: u32,
    twisted: bool,
    /// `k -> x -> index of q^k x`.
    scalar_perm: Vec<Vec<usize>>,
    /// `m -> x -> index of alpha^m(x)`.
    alpha_perm: Vec<Vec<usize>>,
}

pub type Function = Vec<CycScalar>;

impl FunctionAlgebra {
    pub fn new(group: FiniteMatrixGroup, q: &CycScalar, twisted: bool) -> Result<Self> {
        let report = check_admissible(&group, q)?;
        if twisted && !report.admissible() {
            return Err(ComoduleError::NotAdmissible(admissible_witness(&report)));
        }
        let order = report.q_order;
        let qi = q.inv().map_err(|e| structure(e.to_string()))?;
        let elems = group.elements();
        let mut scalar_perm = Vec::new();
        let mut alpha_perm = Vec::new();
        if twisted {
            for k in 0..order as i64 {
                let s = q.pow(k).expect("nonzero");
                scalar_perm.push(
                    elems
                        .iter()
                        .map(|x| group.index_of(&x.scale(&s)).expect("scalars"))
                        .collect(),
                );
            }
            let mut cur: Vec<usize> = (0..elems.len()).collect();
            for _ in 0..order {
                alpha_perm.push(cur.clone());
                cur = cur
                    .iter()
                    .map(|&i| group.index_of(&elems[i].alpha(q, &qi)).expect("stable"))
                    .collect();
            }
        }
        Ok(FunctionAlgebra {
            group,
            q: q.clone(),
            order,
            twisted,
            scalar_perm,
            alpha_perm,
        })
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn one(&self) -> Function {
        vec![CycScalar::one(); self.dim()]
    }

    /// Matrix coordinate `0..4` for `a, b, c, d`.
    pub fn coordinate(&self, i: usize) -> Function {
        self.group
            .elements()
            .iter()
            .map(|m| m.entry(i).clone())
            .collect()
    }

    /// Degree components `f_m(x) = N^{-1} sum_k q^{-mk} f(q^k x)`.
    pub fn components(&self, f: &Function) -> Vec<Function> {
        let n = self.order as i64;
        let inv_n = CycScalar::from_ratio(1, n);
        (0..n)
            .map(|m| {
                (0..self.dim())
                    .map(|x| {
                        let s: CycScalar = (0..n)
                            .map(|k| {
                                &f[self.scalar_perm[k as usize][x]]
                                    * &self.q.pow(-m * k).expect("nonzero")
                            })
                            .sum();
                        &s * &inv_n
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, f: &Function, h: &Function) -> Function {
        if !self.twisted {
            return f.iter().zip(h).map(|(a, b)| a * b).collect();
        }
        let mut out = vec![CycScalar::zero(); self.dim()];
        for (m, fm) in self.components(f).iter().enumerate() {
            if fm.iter().all(CycScalar::is_zero) {
                continue;
            }
            let perm = &self.alpha_perm[m];
            for x in 0..self.dim() {
                if !fm[x].is_zero() {
                    out[x] += &(&fm[x] * &h[perm[x]]);
                }
            }
        }
        out
    }

    /// Restriction of the matrix coordinates: `a, b, c, d`, the determinant
    /// `e` and its inverse `t`.
    pub fn quotient_images(&self, a: &Presentation) -> Result<Vec<Function>> {
        let det: Function = self.group.elements().iter().map(|m| m.det()).collect();
        a.generators()
            .iter()
            .map(|g| match g.name.as_str() {
                "a" => Ok(self.coordinate(0)),
                "b" => Ok(self.coordinate(1)),
                "c" => Ok(self.coordinate(2)),
                "d" => Ok(self.coordinate(3)),
                "e" => Ok(det.clone()),
                "t" => Ok(det.iter().map(|v| v.inv().expect("invertible")).collect()),
                other => Err(ComoduleError::Dimension(format!(
                    "no matrix coordinate named {other}"
                ))),
            })
            .collect()
    }
}

fn admissible_witness(r: &AdmissibleReport) -> String {
    if let Some(s) = &r.missing_scalar {
        format!("scalar {s} is missing")
    } else if let Some(x) = &r.alpha_witness {
        format!("alpha moves {x} outside the group")
    } else {
        "ok".into()
    }
}

/// `F(G) (x) R`, keyed by carrier word.
type FnTensor = BTreeMap<Monomial, Function>;

struct CoactionEngine<'a> {
    fa: &'a FunctionAlgebra,
    carrier: &'a Presentation,
    gens: Vec<FnTensor>,
    cache: HashMap<Monomial, FnTensor>,
}

impl<'a> CoactionEngine<'a> {
    fn new(r: &'a ComoduleAlgebra, fa: &'a FunctionAlgebra) -> Result<Self> {
        let a = r.hopf.base();
        let images = fa.quotient_images(a)?;
        let word_fn = |u: &Monomial| {
            u.0.iter()
                .fold(fa.one(), |acc, &y| fa.mul(&acc, &images[y as usize]))
        };
        let mut gens = Vec::new();
        for t in &r.coaction {
            let mut out = FnTensor::new();
            for (u, v, c) in t.terms() {
                let f: Function = word_fn(u).iter().map(|x| x * c).collect();
                add_fn(&mut out, v.clone(), &f);
            }
            gens.push(out);
        }
        Ok(CoactionEngine {
            fa,
            carrier: &r.carrier,
            gens,
            cache: HashMap::new(),
        })
    }

    fn mul(&self, x: &FnTensor, y: &FnTensor) -> Result<FnTensor> {
        let mut out = FnTensor::new();
        for (u, f) in x {
            for (v, h) in y {
                let fh = self.fa.mul(f, h);
                if fh.iter().all(CycScalar::is_zero) {
                    continue;
                }
                let uv = self
                    .carrier
                    .normal_form(&AlgebraElement::monomial(u.concat(v)))?;
                for (w, c) in uv.terms() {
                    let scaled: Function = fh.iter().map(|z| z * c).collect();
                    add_fn(&mut out, w.clone(), &scaled);
                }
            }
        }
        Ok(out)
    }

    fn coact_word(&mut self, w: &Monomial) -> Result<FnTensor> {
        if let Some(t) = self.cache.get(w) {
            return Ok(t.clone());
        }
        let out = match w.0.split_last() {
            None => FnTensor::from([(Monomial::one(), self.fa.one())]),
            Some((&last, prefix)) => {
                let head = self.coact_word(&Monomial(prefix.to_vec()))?;
                let g = self.gens[last as usize].clone();
                self.mul(&head, &g)?
            }
        };
        self.cache.insert(w.clone(), out.clone());
        Ok(out)
    }
}

fn add_fn(t: &mut FnTensor, w: Monomial, f: &Function) {
    let entry = t
        .entry(w.clone())
        .or_insert_with(|| vec![CycScalar::zero(); f.len()]);
    for (a, b) in entry.iter_mut().zip(f) {
        *a += b;
    }
    if entry.iter().all(CycScalar::is_zero) {
        t.remove(&w);
    }
}

/// Basis of `{r in span(words) : rho(r) = 1 (x) r}` over the finite quotient,
/// in reduced echelon form with columns ordered as `words`.
pub fn coinvariants(
    r: &ComoduleAlgebra,
    fa: &FunctionAlgebra,
    words: &[Monomial],
) -> Result<Vec<AlgebraElement>> {
    let mut engine = CoactionEngine::new(r, fa)?;
    let mut rows: BTreeMap<(Monomial, usize), Vec<CycScalar>> = BTreeMap::new();
    let blank = vec![CycScalar::zero(); words.len()];
    for (j, w) in words.iter().enumerate() {
        for x in 0..fa.dim() {
            rows.entry((w.clone(), x)).or_insert_with(|| blank.clone())[j] -= &CycScalar::one();
        }
        for (m, f) in engine.coact_word(w)? {
            for (x, v) in f.iter().enumerate() {
                if !v.is_zero() {
                    rows.entry((m.clone(), x)).or_insert_with(|| blank.clone())[j] += v;
                }
            }
        }
    }
    let matrix: Vec<Vec<CycScalar>> = rows.into_values().collect();
    let kernel = linalg::kernel(&matrix, words.len());
    let basis = linalg::span_basis(&kernel);
    Ok(basis
        .into_iter()
        .map(|v| AlgebraElement::from_terms(words.iter().cloned().zip(v)))
        .collect())
}

/// Normal words of length exactly `n`.
pub fn words_of_length(p: &Presentation, n: usize) -> Vec<Monomial> {
    p.normal_words(n)
        .into_iter()
        .filter(|w| w.len() == n)
        .collect()
}

/// Homogeneous polynomials of degree `n` in commuting `x, y`, stored by the
/// exponent of `y`.
type Binary = Vec<CycScalar>;

fn binary_mul(f: &Binary, g: &Binary) -> Binary {
    let mut out = vec![CycScalar::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    out
}

/// The word `x^{n-b} y^b` on generators `0, 1`.
fn plane_word(n: usize, b: usize) -> Monomial {
    let mut w = vec![0u32; n - b];
    w.extend(std::iter::repeat_n(1u32, b));
    Monomial(w)
}

/// Image of the Reynolds operator on degree-`n` polynomials, where `g` acts by
/// `x -> a x + b y, y -> c x + d y`.
pub fn reynolds_invariants(g: &FiniteMatrixGroup, n: usize) -> Vec<AlgebraElement> {
    let inv_order = CycScalar::from_ratio(1, g.order() as i64);
    let mut images = Vec::new();
    for b in 0..=n {
        let mut avg = vec![CycScalar::zero(); n + 1];
        for m in g.elements() {
            let lx = vec![m.entry(0).clone(), m.entry(1).clone()];
            let ly = vec![m.entry(2).clone(), m.entry(3).clone()];
            let mut f = vec![CycScalar::one()];
            for _ in 0..n - b {
                f = binary_mul(&f, &lx);
            }
            for _ in 0..b {
                f = binary_mul(&f, &ly);
            }
            for (acc, v) in avg.iter_mut().zip(&f) {
                *acc += v;
            }
        }
        images.push(avg.iter().map(|v| v * &inv_order).collect::<Vec<_>>());
    }
    linalg::span_basis(&images)
        .into_iter()
        .map(|v| {
            AlgebraElement::from_terms(
                v.into_iter()
                    .enumerate()
                    .map(|(b, c)| (plane_word(n, b), c)),
            )
        })
        .collect()
}

/// `|G|^{-1} sum_g 1 / det(1 - t g)` up to `t^max_degree`.
pub fn molien_series(g: &FiniteMatrixGroup, max_degree: usize) -> RationalPoly {
    let mut total = vec![CycScalar::zero(); max_degree + 1];
    for m in g.elements() {
        let (tr, det) = (m.trace(), m.det());
        let mut prev2 = CycScalar::zero();
        let mut prev = CycScalar::one();
        total[0] += &prev;
        for slot in total.iter_mut().skip(1) {
            let next = &(&tr * &prev) - &(&det * &prev2);
            *slot += &next;
            prev2 = prev;
            prev = next;
        }
    }
    let inv_order = CycScalar::from_ratio(1, g.order() as i64);
    RationalPoly::new(
        total
            .iter()
            .map(|c| {
                (c * &inv_order)
                    .to_rational()
                    .expect("Molien coefficients are rational")
            })
            .collect(),
    )
}

fn plane_group_carrier(
    group: &crate::algebra::GradingGroup,
    relation: AlgebraElement,
) -> Result<Presentation> {
    let one = group.element(&[1])?;
    let gens = vec![
        Generator {
            name: "x".into(),
            degree: one.clone(),
        },
        Generator {
            name: "y".into(),
            degree: one,
        },
    ];
    Ok(Presentation::from_relations(
        group.clone(),
        gens,
        vec![relation],
    )?)
}

/// `x -> a (x) x + b (x) y, y -> c (x) x + d (x) y`.
fn matrix_coaction(a: &Presentation) -> Result<Vec<Tensor>> {
    let idx = |n: &str| {
        a.generator_index(n)
            .ok_or_else(|| structure(format!("Hopf algebra has no generator {n}")))
    };
    let (ga, gb, gc, gd) = (idx("a")?, idx("b")?, idx("c")?, idx("d")?);
    let one = CycScalar::one();
    let t = |p: u32, q: u32| {
        Tensor::from_terms([
            (Monomial::gen(p), Monomial::gen(0), one.clone()),
            (Monomial::gen(q), Monomial::gen(1), one.clone()),
        ])
    };
    Ok(vec![t(ga, gb), t(gc, gd)])
}

/// `K[x, y]` with the matrix coaction and `beta(x) = x, beta(y) = q y`.
pub fn plane_comodule(
    x: &InvariantCocentralAction,
    q: &CycScalar,
) -> Result<EquivariantComoduleAlgebra> {
    let a = x.hopf().base();
    let group = a.group();
    let carrier = plane_group_carrier(
        group,
        AlgebraElement::word(&[1, 0]).sub(&AlgebraElement::word(&[0, 1])),
    )?;
    let coaction = matrix_coaction(a)?;
    let gen = group.element(&[1])?;
    let beta = TauMaps::new(
        &carrier,
        TauKind::Action,
        BTreeMap::from([(
            gen,
            vec![
                vec![CycScalar::one(), CycScalar::zero()],
                vec![CycScalar::zero(), q.clone()],
            ],
        )]),
    )?;
    EquivariantComoduleAlgebra::new(x.clone(), carrier, coaction, beta)
}

/// The Weyl algebra `yx - xy = 1` with the matrix coaction of `h`.
pub fn weyl_comodule(h: &HopfPresentation) -> Result<ComoduleAlgebra> {
    let a = h.base();
    let rel = AlgebraElement::word(&[1, 0])
        .sub(&AlgebraElement::word(&[0, 1]))
        .sub(&AlgebraElement::one());
    let carrier = plane_group_carrier(a.group(), rel)?;
    ComoduleAlgebra::new(h.clone(), carrier, matrix_coaction(a)?)
}

/// `beta(x) = x, beta(y) = q y` at the generator of a cyclic grading group.
pub fn plane_beta(
    group: &crate::algebra::GradingGroup,
    q: &CycScalar,
) -> Result<BTreeMap<GroupElement, GenMatrix>> {
    let gen = group.element(&[1])?;
    Ok(BTreeMap::from([(
        gen,
        vec![
            vec![CycScalar::one(), CycScalar::zero()],
            vec![CycScalar::zero(), q.clone()],
        ],
    )]))
}

/// One row of the invariant correspondence table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceRow {
    pub degree: usize,
    pub classical: usize,
    pub twisted: usize,
    pub untwisted: usize,
    pub molien: BigRational,
    /// The twisted coinvariants, carried to `K[x, y]`, span the classical
    /// invariants.
    pub same_span: bool,
}

impl CorrespondenceRow {
    pub fn passed(&self) -> bool {
        let m = BigRational::from_integer(self.classical.into());
        self.classical == self.twisted
            && self.twisted == self.untwisted
            && self.molien == m
            && self.same_span
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub group_order: usize,
    pub admissible: AdmissibleReport,
    pub twisted_rules: Vec<String>,
    pub rows: Vec<CorrespondenceRow>,
    /// Twisted coinvariant basis in degree 2, as printed in `K_{q^{-1}}[x, y]`.
    pub degree_two_basis: Vec<String>,
    pub products_checked: usize,
    pub product_failure: Option<String>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CorrespondenceRow::passed) && self.product_failure.is_none()
    }

    pub fn first_failing_row(&self) -> Option<&CorrespondenceRow> {
        self.rows.iter().find(|r| !r.passed())
    }
}

/// Degrees of the generating set used for the multiplicative check.
const GENERATING_DEGREE: usize = 6;

/// Compares `K_{q^{-1}}[x, y]^G` with `K[x, y]^{G'}`, where `G` is the twist
/// of the finite group `G'`.
pub fn verify_invariant_correspondence(
    g: &FiniteMatrixGroup,
    q: &CycScalar,
    max_degree: usize,
) -> Result<CorrespondenceReport> {
    let admissible = check_admissible(g, q)?;
    if !admissible.admissible() {
        return Err(ComoduleError::NotAdmissible(admissible_witness(
            &admissible,
        )));
    }
    let x = builtin::gl2_diagonal_action(q)?;
    let r = plane_comodule(&x, q)?;
    let rt = twist_comodule_algebra(&x, &r)?;
    let fa = FunctionAlgebra::new(g.clone(), q, false)?;
    let fat = FunctionAlgebra::new(g.clone(), q, true)?;
    let molien = molien_series(g, max_degree);
    let (p, pt) = (r.carrier(), rt.carrier());
    let zero = p.group().zero();
    let to_plain = |u: &AlgebraElement| -> Result<AlgebraElement> {
        Ok(p.normal_form(&r.beta.theta(pt, &zero, u))?)
    };
    let mut rows = Vec::new();
    let mut generating: Vec<(usize, AlgebraElement)> = Vec::new();
    let mut degree_two_basis = Vec::new();
    for n in 0..=max_degree {
        let words_t = words_of_length(pt, n);
        let twisted = coinvariants(rt.comodule(), &fat, &words_t)?;
        let untwisted = coinvariants(r.comodule(), &fa, &words_of_length(p, n))?;
        let classical = reynolds_invariants(g, n);
        let words = words_of_length(p, n);
        let coords = |e: &AlgebraElement| words.iter().map(|w| e.coeff(w)).collect::<Vec<_>>();
        let carried: Vec<Vec<CycScalar>> = twisted
            .iter()
            .map(|u| to_plain(u).map(|e| coords(&e)))
            .collect::<Result<_>>()?;
        let classical_coords: Vec<Vec<CycScalar>> = classical.iter().map(coords).collect();
        let same_span = carried.len() == classical_coords.len()
            && linalg::intersection_dim(&carried, &classical_coords) == classical_coords.len();
        if n == 2 {
            degree_two_basis = twisted.iter().map(|u| pt.format_element(u)).collect();
        }
        if n <= GENERATING_DEGREE {
            generating.extend(twisted.iter().map(|u| (n, u.clone())));
        }
        rows.push(CorrespondenceRow {
            degree: n,
            classical: classical.len(),
            twisted: twisted.len(),
            untwisted: untwisted.len(),
            molien: molien.coeff(n),
            same_span,
        });
    }
    let mut products_checked = 0;
    let mut product_failure = None;
    'outer: for (du, u) in &generating {
        for (dv, v) in &generating {
            if du + dv > max_degree {
                continue;
            }
            let lhs = to_plain(&pt.multiply(u, v)?)?;
            let rhs = p.multiply(&to_plain(u)?, &to_plain(v)?)?;
            products_checked += 1;
            if lhs != rhs {
                product_failure = Some(format!(
                    "{} * {}",
                    pt.format_element(u),
                    pt.format_element(v)
                ));
                break 'outer;
            }
        }
    }
    Ok(CorrespondenceReport {
        group_order: g.order(),
        admissible,
        twisted_rules: pt.rules().iter().map(|ru| pt.format_rule(ru)).collect(),
        rows,
        degree_two_basis,
        products_checked,
        product_failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredRow {
    pub degree: usize,
    pub classical: usize,
    pub twisted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylReport {
    pub twisted_rules: Vec<String>,
    pub rows: Vec<FilteredRow>,
}

impl WeylReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.classical == r.twisted)
    }
}

/// Filtered coinvariants of `A_1` over `F(G')` against those of its sign twist
/// `W_2` over the twisted function algebra, for words of length `<= n`.
pub fn verify_weyl_correspondence(g: &FiniteMatrixGroup, max_degree: usize) -> Result<WeylReport> {
    let minus = CycScalar::from_int(-1);
    let x = builtin::sl2_sign_action()?;
    let a1 = weyl_comodule(x.hopf())?;
    let beta = plane_beta(a1.carrier().group(), &minus)?;
    let w2 = twist_comodule_rules(&x, &a1, beta)?;
    let fa = FunctionAlgebra::new(g.clone(), &minus, false)?;
    let fat = FunctionAlgebra::new(g.clone(), &minus, true)?;
    let mut rows = Vec::new();
    for n in 0..=max_degree {
        let classical = coinvariants(&a1, &fa, &a1.carrier().normal_words(n))?.len();
        let twisted = coinvariants(&w2, &fat, &w2.carrier().normal_words(n))?.len();
        rows.push(FilteredRow {
            degree: n,
            classical,
            twisted,
        });
    }
    let pt = w2.carrier();
    Ok(WeylReport {
        twisted_rules: pt.rules().iter().map(|r| pt.format_rule(r)).collect(),
        rows,
    })
}

/// A finite-dimensional graded comodule `delta(v_j) = sum_i N[j][i] (x) v_i`
/// with a compatible group action given by row matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComodule {
    names: Vec<String>,
    degrees: Vec<GroupElement>,
    matrix: Vec<Vec<AlgebraElement>>,
    beta: BTreeMap<GroupElement, GenMatrix>,
}

fn identity(n: usize) -> GenMatrix {
    (0..n)
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
        .collect()
}

fn scalar_mat_mul(a: &GenMatrix, b: &GenMatrix) -> GenMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

fn kron(a: &GenMatrix, b: &GenMatrix) -> GenMatrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![CycScalar::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    out[i * m + j][k * m + l] = &a[i][k] * &b[j][l];
                }
            }
        }
    }
    out
}

/// `sum_k s[j][k] n[k][i]`.
fn left_scale(s: &GenMatrix, n: &[Vec<AlgebraElement>]) -> Vec<Vec<AlgebraElement>> {
    let cols = n.first().map_or(0, Vec::len);
    s.iter()
        .map(|row| {
            (0..cols)
                .map(|i| {
                    row.iter()
                        .zip(n)
                        .fold(AlgebraElement::zero(), |acc, (c, nrow)| {
                            acc.add(&nrow[i].scale(c))
                        })
                })
                .collect()
        })
        .collect()
}

/// `sum_k n[j][k] s[k][i]`.
fn right_scale(n: &[Vec<AlgebraElement>], s: &GenMatrix) -> Vec<Vec<AlgebraElement>> {
    let cols = s.first().map_or(0, Vec::len);
    n.iter()
        .map(|row| {
            (0..cols)
                .map(|i| {
                    row.iter()
                        .zip(s)
                        .fold(AlgebraElement::zero(), |acc, (e, srow)| {
                            acc.add(&e.scale(&srow[i]))
                        })
                })
                .collect()
        })
        .collect()
}

impl GradedComodule {
    /// `beta` must cover a generating set of the grading group; the rest is
    /// filled in by composition.
    pub fn new(
        x: &InvariantCocentralAction,
        names: Vec<String>,
        degrees: Vec<GroupElement>,
        matrix: Vec<Vec<AlgebraElement>>,
        beta: BTreeMap<GroupElement, GenMatrix>,
    ) -> Result<Self> {
        let n = names.len();
        if degrees.len() != n || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(ComoduleError::Dimension(format!(
                "comodule data is not {n} x {n}"
            )));
        }
        let group = x.hopf().base().group();
        let mut full: BTreeMap<GroupElement, GenMatrix> =
            BTreeMap::from([(group.zero(), identity(n))]);
        let mut frontier = vec![group.zero()];
        while let Some(a) = frontier.pop() {
            for (g, mg) in &beta {
                if mg.len() != n || mg.iter().any(|r| r.len() != n) {
                    return Err(ComoduleError::Dimension(format!(
                        "beta at {g} is not {n} x {n}"
                    )));
                }
                let b = a.add(g);
                let mb = scalar_mat_mul(mg, &full[&a]);
                match full.get(&b) {
                    Some(existing) if *existing != mb => {
                        return Err(structure(format!(
                            "beta is not a group action (conflict at {b})"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        full.insert(b.clone(), mb);
                        frontier.push(b);
                    }
                }
            }
        }
        if let Some(g) = group
            .elements()?
            .into_iter()
            .find(|g| !full.contains_key(g))
        {
            return Err(structure(format!("beta does not reach {g}")));
        }
        let v = GradedComodule {
            names,
            degrees,
            matrix,
            beta: full,
        };
        v.validate(x)?;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn matrix(&self) -> &[Vec<AlgebraElement>] {
        &self.matrix
    }

    pub fn beta(&self, g: &GroupElement) -> &GenMatrix {
        &self.beta[g]
    }

    fn validate(&self, x: &InvariantCocentralAction) -> Result<()> {
        let h = x.hopf();
        let a = h.base();
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                let e = &self.matrix[j][i];
                if a.normal_form(e)? != *e {
                    return Err(structure(format!("entry ({j}, {i}) is not in normal form")));
                }
                if !e.is_zero() && a.homogeneous_degree(e).as_ref() != Some(&self.degrees[j]) {
                    return Err(structure(format!(
                        "entry ({j}, {i}) is not of degree {}",
                        self.degrees[j]
                    )));
                }
                let mut rhs = Tensor::zero();
                for k in 0..n {
                    rhs = rhs.add(&Tensor::outer(&self.matrix[j][k], &self.matrix[k][i]));
                }
                if h.coproduct(e)? != rhs {
                    return Err(structure(format!(
                        "coaction is not coassociative at ({j}, {i})"
                    )));
                }
                let expected = if i == j {
                    CycScalar::one()
                } else {
                    CycScalar::zero()
                };
                if h.counit(e) != expected {
                    return Err(structure(format!("counit law fails at ({j}, {i})")));
                }
            }
        }
        for (g, b) in &self.beta {
            for j in 0..n {
                for i in 0..n {
                    if !b[j][i].is_zero() && self.degrees[j] != self.degrees[i] {
                        return Err(structure(format!("beta at {g} mixes degrees")));
                    }
                }
            }
            let acted: Vec<Vec<AlgebraElement>> = self
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| x.act(g, e))
                        .collect::<std::result::Result<_, _>>()
                })
                .collect::<std::result::Result<_, _>>()?;
            if right_scale(&acted, b) != left_scale(b, &self.matrix) {
                return Err(structure(format!("coaction is not equivariant at {g}")));
            }
        }
        Ok(())
    }

    /// `K` in the identity degree.
    pub fn trivial(x: &InvariantCocentralAction) -> Result<Self> {
        let group = x.hopf().base().group();
        let beta = group
            .elements()?
            .into_iter()
            .map(|g| (g, identity(1)))
            .collect();
        Self::new(
            x,
            vec!["1".into()],
            vec![group.zero()],
            vec![vec![AlgebraElement::one()]],
            beta,
        )
    }

    /// `span(x, y)` with the matrix coaction and `beta = diag(1, q)`.
    pub fn fundamental(x: &InvariantCocentralAction, q: &CycScalar) -> Result<Self> {
        let a = x.hopf().base();
        let idx = |n: &str| {
            a.generator_index(n)
                .ok_or_else(|| structure(format!("no generator {n}")))
        };
        let g = |n: &str| idx(n).map(AlgebraElement::generator);
        let one = a.group().element(&[1])?;
        let matrix = vec![vec![g("a")?, g("b")?], vec![g("c")?, g("d")?]];
        let beta = vec![
            vec![CycScalar::one(), CycScalar::zero()],
            vec![CycScalar::zero(), q.clone()],
        ];
        Self::new(
            x,
            vec!["x".into(), "y".into()],
            vec![one.clone(), one.clone()],
            matrix,
            BTreeMap::from([(one, beta)]),
        )
    }

    /// `V (x) W` with basis `v_i (x) w_j` in lexicographic order.
    pub fn tensor(&self, other: &Self, a: &Presentation) -> Result<Self> {
        let (n, m) = (self.dim(), other.dim());
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..n {
            for j in 0..m {
                names.push(format!("{}{}", self.names[i], other.names[j]));
                degrees.push(self.degrees[i].add(&other.degrees[j]));
            }
        }
        let mut matrix = vec![vec![AlgebraElement::zero(); n * m]; n * m];
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        matrix[i * m + j][k * m + l] =
                            a.multiply(&self.matrix[i][k], &other.matrix[j][l])?;
                    }
                }
            }
        }
        let beta = self
            .beta
            .iter()
            .map(|(g, b)| (g.clone(), kron(b, &other.beta[g])))
            .collect();
        Ok(GradedComodule {
            names,
            degrees,
            matrix,
            beta,
        })
    }
}

/// `F_2(V, W): v_i (x) w_j -> v_i (x) beta_{deg v_i}(w_j)`, or with
/// `beta_{-deg v_i}` for the inverse.
pub fn f2_matrix(v: &GradedComodule, w: &GradedComodule, inverse: bool) -> GenMatrix {
    let (n, m) = (v.dim(), w.dim());
    let mut out = vec![vec![CycScalar::zero(); n * m]; n * m];
    for i in 0..n {
        let g = if inverse {
            v.degrees[i].neg()
        } else {
            v.degrees[i].clone()
        };
        let b = w.beta(&g);
        for j in 0..m {
            for l in 0..m {
                out[i * m + j][i * m + l] = b[j][l].clone();
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalReport {
    pub checks: Vec<MonoidalCheck>,
    pub f2: GenMatrix,
}

impl MonoidalReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn twisted_matrix(
    x: &InvariantCocentralAction,
    tw: &Presentation,
    m: &[Vec<AlgebraElement>],
) -> Result<Vec<Vec<AlgebraElement>>> {
    m.iter()
        .map(|row| row.iter().map(|e| Ok(to_twisted(x, tw, e)?)).collect())
        .collect()
}

/// Coaction matrix of `F(V) (x) F(W)` computed with twisted products.
fn twisted_tensor_matrix(
    tw: &Presentation,
    nv: &[Vec<AlgebraElement>],
    nw: &[Vec<AlgebraElement>],
) -> Result<Vec<Vec<AlgebraElement>>> {
    let (n, m) = (nv.len(), nw.len());
    let mut out = vec![vec![AlgebraElement::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    out[i * m + j][k * m + l] = tw.multiply(&nv[i][k], &nw[j][l])?;
                }
            }
        }
    }
    Ok(out)
}

fn colinear(
    x: &InvariantCocentralAction,
    tw: &Presentation,
    a: &Presentation,
    v: &GradedComodule,
    w: &GradedComodule,
) -> Result<bool> {
    let phi = f2_matrix(v, w, false);
    let target = twisted_matrix(x, tw, v.tensor(w, a)?.matrix())?;
    let source = twisted_tensor_matrix(
        tw,
        &twisted_matrix(x, tw, &v.matrix)?,
        &twisted_matrix(x, tw, &w.matrix)?,
    )?;
    Ok(left_scale(&phi, &target) == right_scale(&source, &phi))
}

/// Checks that `F_2` is a grading-preserving, equivariant, colinear and
/// invertible family satisfying the associativity identity on `V, W, Z`.
pub fn monoidal_equivalence_check(
    x: &InvariantCocentralAction,
    v: &GradedComodule,
    w: &GradedComodule,
    z: &GradedComodule,
) -> Result<MonoidalReport> {
    let a = x.hopf().base();
    let twisted = graded_twist(x)?;
    let tw = twisted.base();
    let phi = f2_matrix(v, w, false);
    let vw = v.tensor(w, a)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| {
        checks.push(MonoidalCheck {
            name: name.into(),
            passed,
        })
    };

    let degrees_ok = (0..phi.len())
        .all(|r| (0..phi.len()).all(|s| phi[r][s].is_zero() || vw.degrees[r] == vw.degrees[s]));
    push("F_2 preserves degrees", degrees_ok);
    let equivariant = vw
        .beta
        .values()
        .all(|b| scalar_mat_mul(&phi, b) == scalar_mat_mul(b, &phi));
    push("F_2 commutes with the group action", equivariant);

    push("F_2(V, W) is colinear", colinear(x, tw, a, v, w)?);
    push("F_2(W, Z) is colinear", colinear(x, tw, a, w, z)?);
    let wz = w.tensor(z, a)?;
    push("F_2(V (x) W, Z) is colinear", colinear(x, tw, a, &vw, z)?);
    push("F_2(V, W (x) Z) is colinear", colinear(x, tw, a, v, &wz)?);

    let id_v = identity(v.dim());
    let id_z = identity(z.dim());
    let lhs = scalar_mat_mul(&kron(&phi, &id_z), &f2_matrix(&vw, z, false));
    let rhs = scalar_mat_mul(
        &kron(&id_v, &f2_matrix(w, z, false)),
        &f2_matrix(v, &wz, false),
    );
    push("associativity", lhs == rhs);

    let inv = f2_matrix(v, w, true);
    push(
        "inverse uses the opposite degree",
        scalar_mat_mul(&phi, &inv) == identity(phi.len()),
    );
    Ok(MonoidalReport { checks, f2: phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::named;

    fn minus() -> CycScalar {
        CycScalar::from_int(-1)
    }

    fn plane_x() -> InvariantCocentralAction {
        builtin::gl2_diagonal_action(&minus()).unwrap()
    }

    #[test]
    fn trivial_beta_leaves_carrier() {
        let x = builtin::gl2_diagonal_action(&CycScalar::one()).unwrap();
        let r = plane_comodule(&x, &CycScalar::one()).unwrap();
        let t = twist_comodule_algebra(&x, &r).unwrap();
        assert_eq!(t.carrier().rules(), r.carrier().rules());
    }

    #[test]
    fn sign_twist_gives_skew_plane() {
        let x = plane_x();
        let r = plane_comodule(&x, &minus()).unwrap();
        let t = twist_comodule_algebra(&x, &r).unwrap();
        let p = t.carrier();
        let rules: Vec<String> = p.rules().iter().map(|r| p.format_rule(r)).collect();
        assert_eq!(rules, vec!["y x -> -x y"]);
        assert_eq!(t.comodule().coaction_table().len(), 2);
    }

    #[test]
    fn weyl_twist() {
        let x = builtin::sl2_sign_action().unwrap();
        let a1 = weyl_comodule(x.hopf()).unwrap();
        let beta = plane_beta(a1.carrier().group(), &minus()).unwrap();
        // beta is not an automorphism of A_1, so only the rule-level twist applies.
        assert!(TauMaps::new(a1.carrier(), TauKind::Action, beta.clone())
            .unwrap()
            .check(a1.carrier())
            .is_err());
        let w2 = twist_comodule_rules(&x, &a1, beta).unwrap();
        let p = w2.carrier();
        let rules: Vec<String> = p.rules().iter().map(|r| p.format_rule(r)).collect();
        assert_eq!(rules, vec!["y x -> -x y + 1"]);
    }

    #[test]
    fn coinvariant_examples() {
        let x = plane_x();
        let r = plane_comodule(&x, &minus()).unwrap();
        let rt = twist_comodule_algebra(&x, &r).unwrap();
        let pm = FunctionAlgebra::new(named::plus_minus_identity(), &minus(), true).unwrap();
        let basis = coinvariants(rt.comodule(), &pm, &words_of_length(rt.carrier(), 2)).unwrap();
        let shown: Vec<String> = basis
            .iter()
            .map(|b| rt.carrier().format_element(b))
            .collect();
        assert_eq!(shown, vec!["x x", "x y", "y y"]);
        let unit = coinvariants(rt.comodule(), &pm, &words_of_length(rt.carrier(), 0)).unwrap();
        assert_eq!(unit, vec![AlgebraElement::one()]);

        // x^a y^b is fixed by diag(i, -i) iff a = b mod 4.
        let c4 = FunctionAlgebra::new(named::cyclic_diagonal(4), &minus(), false).unwrap();
        let basis = coinvariants(r.comodule(), &c4, &words_of_length(r.carrier(), 2)).unwrap();
        assert_eq!(basis, vec![AlgebraElement::word(&[0, 1])]);
    }

    #[test]
    fn reynolds_and_molien() {
        assert_eq!(reynolds_invariants(&named::trivial(), 5).len(), 6);
        assert!(reynolds_invariants(&named::plus_minus_identity(), 3).is_empty());
        assert_eq!(reynolds_invariants(&named::quaternion(), 4).len(), 2);
        let m = molien_series(&named::trivial(), 4);
        assert_eq!(
            m.coeffs()
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect::<Vec<i64>>(),
            [1, 2, 3, 4, 5]
        );
        let m = molien_series(&named::plus_minus_identity(), 4);
        assert_eq!(
            m.coeffs()
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect::<Vec<i64>>(),
            [1, 0, 3, 0, 5]
        );
        let q8 = named::quaternion();
        let m = molien_series(&q8, 12);
        for n in 0..=12 {
            assert_eq!(
                m.coeff(n),
                BigRational::from_integer(reynolds_invariants(&q8, n).len().into())
            );
        }
    }

    #[test]
    fn correspondence_plus_minus() {
        let rep =
            verify_invariant_correspondence(&named::plus_minus_identity(), &minus(), 8).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let dims: Vec<usize> = rep.rows.iter().map(|r| r.twisted).collect();
        assert_eq!(dims, [1, 0, 3, 0, 5, 0, 7, 0, 9]);
        assert_eq!(rep.degree_two_basis, ["x x", "x y", "y y"]);
        assert!(rep.products_checked > 0);
    }

    #[test]
    fn correspondence_nonclassical() {
        let rep =
            verify_invariant_correspondence(&named::binary_tetrahedral(), &minus(), 6).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn correspondence_rejects_inadmissible() {
        let err = verify_invariant_correspondence(&named::trivial(), &minus(), 2).unwrap_err();
        assert!(matches!(err, ComoduleError::NotAdmissible(_)));
    }

    #[test]
    fn weyl_filtered_dims() {
        let rep = verify_weyl_correspondence(&named::plus_minus_identity(), 4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let dims: Vec<usize> = rep.rows.iter().map(|r| r.twisted).collect();
        assert_eq!(dims, [1, 1, 4, 4, 9]);
    }

    #[test]
    fn chart_identity_degree() {
        let x = plane_x();
        let r = plane_comodule(&x, &minus()).unwrap();
        let rep = identity_degree_chart(&r, 4).unwrap();
        assert!(rep.passed());
        assert!(rep.checked > 0);
    }

    #[test]
    fn monoidal_trivial_and_fundamental() {
        let x = builtin::sl2_sign_action().unwrap();
        let k = GradedComodule::trivial(&x).unwrap();
        let rep = monoidal_equivalence_check(&x, &k, &k, &k).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.f2, identity(1));

        let v = GradedComodule::fundamental(&x, &minus()).unwrap();
        let rep = monoidal_equivalence_check(&x, &v, &v, &v).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let m = CycScalar::from_int(-1);
        let (o, z) = (CycScalar::one(), CycScalar::zero());
        let expected = vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), m.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), m],
        ];
        assert_eq!(rep.f2, expected);
    }

    #[test]
    fn corrupt_comodule_rejected() {
        let x = builtin::sl2_sign_action().unwrap();
        let one = x.hopf().base().group().element(&[1]).unwrap();
        let g = AlgebraElement::generator;
        let matrix = vec![vec![g(0), g(2)], vec![g(1), g(3)]];
        let beta = BTreeMap::from([(one.clone(), identity(2))]);
        let err = GradedComodule::new(
            &x,
            vec!["x".into(), "y".into()],
            vec![one.clone(), one],
            matrix,
            beta,
        );
        assert!(err.is_err());
    }
}
