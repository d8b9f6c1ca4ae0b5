//! Hopf structure on presentations, invariant cocentral actions, graded
//! twisting and twisting of graded ideals.

use std::collections::BTreeMap;

use crate::algebra::{
    twist_presentation, AlgebraElement, AlgebraError, GroupElement, Monomial, Presentation,
    TauKind, TauMaps,
};
use crate::linalg;
use crate::scalars::CycScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("malformed Hopf data: {0}")]
    Structure(String),
    #[error("coproduct of {0} has a leg outside its degree")]
    NotCocentral(String),
    #[error("antipode of {0} does not have the inverse degree")]
    AntipodeDegree(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("ideal generator `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("ideal is not stable under the action: {0}")]
    NotStable(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;

/// Sparse element of `A (x) A`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<(Monomial, Monomial), CycScalar>,
}

impl Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Monomial::one(), Monomial::one(), CycScalar::one());
        t
    }

    pub fn add_term(&mut self, u: Monomial, v: Monomial, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        let key = (u, v);
        let s = match self.terms.get(&key) {
            Some(x) => x + &c,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Monomial, CycScalar)>>(iter: I) -> Self {
        let mut t = Self::zero();
        for (u, v, c) in iter {
            t.add_term(u, v, c);
        }
        t
    }

    /// `x (x) y` for two linear combinations.
    pub fn outer(x: &AlgebraElement, y: &AlgebraElement) -> Self {
        let mut t = Self::zero();
        for (u, a) in x.terms() {
            for (v, b) in y.terms() {
                t.add_term(u.clone(), v.clone(), a * b);
            }
        }
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &CycScalar)> {
        self.terms.iter().map(|((u, v), c)| (u, v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((u, v), c) in &other.terms {
            t.add_term(u.clone(), v.clone(), c.clone());
        }
        t
    }

    /// Product in `A (x) A` followed by normal form in each leg.
    pub fn mul(&self, p: &Presentation, other: &Self) -> Result<Self> {
        self.mul_mixed(p, p, other)
    }

    /// Product in `A (x) R` with each leg reduced in its own presentation.
    pub fn mul_mixed(
        &self,
        left_p: &Presentation,
        right_p: &Presentation,
        other: &Self,
    ) -> Result<Self> {
        let mut t = Self::zero();
        for ((u, v), a) in &self.terms {
            for ((x, y), b) in &other.terms {
                let left = left_p.normal_form(&AlgebraElement::monomial(u.concat(x)))?;
                let right = right_p.normal_form(&AlgebraElement::monomial(v.concat(y)))?;
                let c = a * b;
                for (m, s) in left.terms() {
                    for (n, r) in right.terms() {
                        t.add_term(m.clone(), n.clone(), &(&c * s) * r);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Applies linear maps to each leg.
    pub fn map<F, G>(&self, f: F, g: G) -> Result<Self>
    where
        F: Fn(&AlgebraElement) -> Result<AlgebraElement>,
        G: Fn(&AlgebraElement) -> Result<AlgebraElement>,
    {
        let mut t = Self::zero();
        for ((u, v), c) in &self.terms {
            let fu = f(&AlgebraElement::monomial(u.clone()))?;
            let gv = g(&AlgebraElement::monomial(v.clone()))?;
            for (m, s) in fu.terms() {
                for (n, r) in gv.terms() {
                    t.add_term(m.clone(), n.clone(), &(c * s) * r);
                }
            }
        }
        Ok(t)
    }

    pub fn format(&self, p: &Presentation) -> String {
        let keys: Vec<(String, CycScalar)> = self
            .terms
            .iter()
            .rev()
            .map(|((u, v), c)| {
                (
                    format!("{} (x) {}", p.format_word(u), p.format_word(v)),
                    c.clone(),
                )
            })
            .collect();
        crate::algebra::format_linear(keys.iter().map(|(k, c)| (k, c)), |k: &String| k.clone())
    }
}

type Tensor3 = BTreeMap<(Monomial, Monomial, Monomial), CycScalar>;

fn add3(t: &mut Tensor3, key: (Monomial, Monomial, Monomial), c: CycScalar) {
    if c.is_zero() {
        return;
    }
    let s = match t.get(&key) {
        Some(x) => x + &c,
        None => c,
    };
    if s.is_zero() {
        t.remove(&key);
    } else {
        t.insert(key, s);
    }
}

/// A presentation with coproduct, counit and antipode on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfPresentation {
    base: Presentation,
    coproduct: Vec<Tensor>,
    counit: Vec<CycScalar>,
    antipode: Vec<AlgebraElement>,
}

impl HopfPresentation {
    /// Validates shapes, cocentrality of the grading and the antipode degree
    /// law. Compatibility with the relations is left to [`check_hopf_axioms`].
    pub fn new(
        base: Presentation,
        coproduct: Vec<Tensor>,
        counit: Vec<CycScalar>,
        antipode: Vec<AlgebraElement>,
    ) -> Result<Self> {
        let n = base.num_generators();
        if coproduct.len() != n || counit.len() != n || antipode.len() != n {
            return Err(HopfError::Structure(format!(
                "expected {n} coproduct, counit and antipode entries, got {}, {}, {}",
                coproduct.len(),
                counit.len(),
                antipode.len()
            )));
        }
        let mut reduced_coproduct = Vec::with_capacity(n);
        for t in &coproduct {
            let r = t.map(|x| Ok(base.normal_form(x)?), |x| Ok(base.normal_form(x)?))?;
            reduced_coproduct.push(r);
        }
        let antipode = antipode
            .iter()
            .map(|s| base.normal_form(s))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for (i, g) in base.generators().iter().enumerate() {
            for (u, v, _) in reduced_coproduct[i].terms() {
                if base.degree_of(u) != g.degree || base.degree_of(v) != g.degree {
                    return Err(HopfError::NotCocentral(g.name.clone()));
                }
            }
            let inv = g.degree.neg();
            if antipode[i].terms().any(|(m, _)| base.degree_of(m) != inv) {
                return Err(HopfError::AntipodeDegree(g.name.clone()));
            }
        }
        Ok(HopfPresentation {
            base,
            coproduct: reduced_coproduct,
            counit,
            antipode,
        })
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn coproduct_table(&self) -> &[Tensor] {
        &self.coproduct
    }

    pub fn counit_table(&self) -> &[CycScalar] {
        &self.counit
    }

    pub fn antipode_table(&self) -> &[AlgebraElement] {
        &self.antipode
    }

    /// `Delta` extended multiplicatively to any combination of words.
    pub fn coproduct(&self, x: &AlgebraElement) -> Result<Tensor> {
        let mut out = Tensor::zero();
        for (w, c) in x.terms() {
            let mut acc = Tensor::one();
            for &y in &w.0 {
                acc = acc.mul(&self.base, &self.coproduct[y as usize])?;
            }
            for (u, v, s) in acc.terms() {
                out.add_term(u.clone(), v.clone(), c * s);
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &AlgebraElement) -> CycScalar {
        x.terms()
            .map(|(w, c)| {
                w.0.iter()
                    .fold(c.clone(), |acc, &y| &acc * &self.counit[y as usize])
            })
            .sum()
    }

    /// `S` extended anti-multiplicatively.
    pub fn antipode(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            let mut acc = AlgebraElement::scalar(c.clone());
            for &y in w.0.iter().rev() {
                acc = self.base.multiply(&acc, &self.antipode[y as usize])?;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    fn delta_left(&self, t: &Tensor) -> Result<Tensor3> {
        let mut out = Tensor3::new();
        for (u, v, c) in t.terms() {
            for (x, y, s) in self
                .coproduct(&AlgebraElement::monomial(u.clone()))?
                .terms()
            {
                add3(&mut out, (x.clone(), y.clone(), v.clone()), c * s);
            }
        }
        Ok(out)
    }

    fn delta_right(&self, t: &Tensor) -> Result<Tensor3> {
        let mut out = Tensor3::new();
        for (u, v, c) in t.terms() {
            for (x, y, s) in self
                .coproduct(&AlgebraElement::monomial(v.clone()))?
                .terms()
            {
                add3(&mut out, (u.clone(), x.clone(), y.clone()), c * s);
            }
        }
        Ok(out)
    }

    /// `m (S (x) id) Delta` or `m (id (x) S) Delta` applied to `x`.
    fn convolution(&self, x: &AlgebraElement, antipode_left: bool) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (u, v, c) in self.coproduct(x)?.terms() {
            let (u, v) = (
                AlgebraElement::monomial(u.clone()),
                AlgebraElement::monomial(v.clone()),
            );
            let prod = if antipode_left {
                self.base.multiply(&self.antipode(&u)?, &v)?
            } else {
                self.base.multiply(&u, &self.antipode(&v)?)?
            };
            out = out.add(&prod.scale(c));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfReport {
    pub checks: Vec<AxiomCheck>,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct CheckBuilder {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl CheckBuilder {
    fn new(name: &'static str) -> Self {
        CheckBuilder {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            name: self.name,
            passed: self.witness.is_none(),
            checked: self.checked,
            witness: self.witness,
        }
    }
}

/// Bounded verification of the Hopf algebra axioms.
pub fn check_hopf_axioms(h: &HopfPresentation, word_bound: usize) -> Result<HopfReport> {
    let p = &h.base;
    let n = p.num_generators() as u32;
    let gens: Vec<AlgebraElement> = (0..n).map(AlgebraElement::generator).collect();
    let name = |i: u32| p.generators()[i as usize].name.clone();
    let mut checks = Vec::new();

    let degs: Vec<GroupElement> = p.generators().iter().map(|g| g.degree.clone()).collect();
    let mut surj = CheckBuilder::new("degree map surjective");
    if p.group().is_finite() {
        let reach = p.group().generated_subgroup(&degs)?;
        let all = p.group().elements()?;
        let missing = all.iter().find(|g| !reach.contains(g)).cloned();
        surj.record(missing.is_none(), || {
            format!("degree {} not reached", missing.unwrap())
        });
    }
    checks.push(surj.finish());

    let mut coco = CheckBuilder::new("cocentral grading");
    for i in 0..n {
        let ok = h.coproduct[i as usize].terms().all(|(u, v, _)| {
            p.degree_of(u) == degs[i as usize] && p.degree_of(v) == degs[i as usize]
        });
        coco.record(ok, || name(i));
    }
    checks.push(coco.finish());

    let mut wd_delta = CheckBuilder::new("coproduct respects relations");
    let mut wd_eps = CheckBuilder::new("counit respects relations");
    let mut wd_s = CheckBuilder::new("antipode respects relations");
    for r in p.rules() {
        let lhs = AlgebraElement::monomial(r.lhs.clone());
        let rule = || p.format_rule(r);
        wd_delta.record(h.coproduct(&lhs)? == h.coproduct(&r.rhs)?, rule);
        wd_eps.record(h.counit(&lhs) == h.counit(&r.rhs), rule);
        wd_s.record(h.antipode(&lhs)? == h.antipode(&r.rhs)?, rule);
    }
    checks.extend([wd_delta.finish(), wd_eps.finish(), wd_s.finish()]);

    let mut coassoc = CheckBuilder::new("coassociativity");
    let mut counit = CheckBuilder::new("counit law");
    for i in 0..n {
        let d = &h.coproduct[i as usize];
        coassoc.record(h.delta_left(d)? == h.delta_right(d)?, || name(i));
        let eps = |x: &AlgebraElement| Ok(AlgebraElement::scalar(h.counit(x)));
        let id = |x: &AlgebraElement| Ok(x.clone());
        let left = d.map(eps, id)?;
        let right = d.map(id, eps)?;
        let expected = Tensor::outer(&AlgebraElement::one(), &gens[i as usize]);
        let expected_r = Tensor::outer(&gens[i as usize], &AlgebraElement::one());
        counit.record(left == expected && right == expected_r, || name(i));
    }
    checks.extend([coassoc.finish(), counit.finish()]);

    let mut sdeg = CheckBuilder::new("antipode degree law");
    for i in 0..n {
        let inv = degs[i as usize].neg();
        sdeg.record(
            h.antipode[i as usize]
                .terms()
                .all(|(m, _)| p.degree_of(m) == inv),
            || name(i),
        );
    }
    checks.push(sdeg.finish());

    let mut s_law = CheckBuilder::new("antipode law");
    for w in p.normal_words(word_bound.max(1)) {
        if w.is_empty() {
            continue;
        }
        let x = AlgebraElement::monomial(w.clone());
        let expected = AlgebraElement::scalar(h.counit(&x));
        let ok = h.convolution(&x, true)? == expected && h.convolution(&x, false)? == expected;
        s_law.record(ok, || p.format_word(&w));
    }
    checks.push(s_law.finish());

    Ok(HopfReport { checks })
}

/// A grading-preserving action of the grading group by Hopf automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCocentralAction {
    hopf: HopfPresentation,
    action: TauMaps,
}

impl InvariantCocentralAction {
    pub fn new(hopf: HopfPresentation, action: TauMaps) -> Result<Self> {
        if action.kind() != TauKind::Action {
            return Err(HopfError::InvalidAction(
                "maps are not declared as a group action".into(),
            ));
        }
        let x = InvariantCocentralAction { hopf, action };
        x.validate()?;
        Ok(x)
    }

    pub fn hopf(&self) -> &HopfPresentation {
        &self.hopf
    }

    pub fn action(&self) -> &TauMaps {
        &self.action
    }

    /// `alpha_g` extended multiplicatively, then reduced.
    pub fn act(&self, g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
        let p = &self.hopf.base;
        let m = self.action.matrix(g);
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            let mut acc = AlgebraElement::scalar(c.clone());
            for &y in &w.0 {
                let img = AlgebraElement::from_terms(
                    m[y as usize]
                        .iter()
                        .enumerate()
                        .map(|(j, s)| (Monomial::gen(j as u32), s.clone())),
                );
                acc = acc.free_mul(&img);
            }
            out = out.add(&acc);
        }
        Ok(p.normal_form(&out)?)
    }

    fn validate(&self) -> Result<()> {
        let p = &self.hopf.base;
        let n = p.num_generators() as u32;
        for g in self.action.matrices().keys() {
            for r in p.relations() {
                if !self.act(g, &r)?.is_zero() {
                    return Err(HopfError::InvalidAction(format!(
                        "alpha_{g} does not preserve the relation {}",
                        p.format_element(&r)
                    )));
                }
            }
            for i in 0..n {
                let x = AlgebraElement::generator(i);
                let ax = self.act(g, &x)?;
                let lhs = self.hopf.coproduct(&ax)?;
                let rhs = self
                    .hopf
                    .coproduct(&x)?
                    .map(|u| self.act(g, u), |v| self.act(g, v))?;
                let gname = &p.generators()[i as usize].name;
                if lhs != rhs {
                    return Err(HopfError::InvalidAction(format!(
                        "alpha_{g} is not a coalgebra map on {gname}"
                    )));
                }
                if self.hopf.counit(&ax) != self.hopf.counit(&x) {
                    return Err(HopfError::InvalidAction(format!(
                        "alpha_{g} does not preserve the counit on {gname}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same maps viewed on the twisted algebra, inverted; twisting by
    /// these undoes [`graded_twist`].
    pub fn untwisting_action(
        &self,
        twisted: &HopfPresentation,
    ) -> Result<InvariantCocentralAction> {
        let inv = self.action.inverse_family();
        let tau = TauMaps::new(twisted.base(), TauKind::Action, inv.matrices().clone())?;
        InvariantCocentralAction::new(twisted.clone(), tau)
    }
}

/// Converts an element of `A` to the twisted presentation through `j`.
pub fn to_twisted(
    x: &InvariantCocentralAction,
    tw: &Presentation,
    a: &AlgebraElement,
) -> Result<AlgebraElement> {
    let p = &x.hopf.base;
    let zero = p.group().zero();
    Ok(tw.normal_form(&x.action.theta_inv(p, &zero, a))?)
}

/// The graded twist `A^{t,alpha}` on the same generators.
pub fn graded_twist(x: &InvariantCocentralAction) -> Result<HopfPresentation> {
    let p = &x.hopf.base;
    let tw = twist_presentation(p, &x.action)?;
    let mut coproduct = Vec::new();
    let mut antipode = Vec::new();
    for (i, g) in p.generators().iter().enumerate() {
        let d = x.hopf.coproduct[i].map(|u| to_twisted(x, &tw, u), |v| to_twisted(x, &tw, v))?;
        coproduct.push(d);
        let s = x.act(&g.degree.neg(), &x.hopf.antipode[i])?;
        antipode.push(to_twisted(x, &tw, &s)?);
    }
    HopfPresentation::new(tw, coproduct, x.hopf.counit.clone(), antipode)
}

/// Ideal generated by homogeneous elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHopfIdeal {
    generators: Vec<AlgebraElement>,
}

impl GradedHopfIdeal {
    pub fn new(ambient: &Presentation, generators: Vec<AlgebraElement>) -> Result<Self> {
        let mut out = Vec::new();
        for g in generators {
            let g = ambient.normal_form(&g)?;
            if ambient.homogeneous_degree(&g).is_none() {
                return Err(HopfError::NotHomogeneous(ambient.format_element(&g)));
            }
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(GradedHopfIdeal { generators: out })
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Whether `x` lies in the span of `u g v` with `|u| + |v| <= bound`.
pub fn ideal_contains_bounded(
    p: &Presentation,
    gens: &[AlgebraElement],
    x: &AlgebraElement,
    bound: usize,
) -> Result<bool> {
    let x = p.normal_form(x)?;
    if x.is_zero() {
        return Ok(true);
    }
    let words = p.normal_words(bound);
    let mut vectors: Vec<AlgebraElement> = Vec::new();
    for u in &words {
        for v in &words {
            if u.len() + v.len() > bound {
                continue;
            }
            for g in gens {
                let e = AlgebraElement::monomial(u.clone())
                    .free_mul(g)
                    .free_mul(&AlgebraElement::monomial(v.clone()));
                let e = p.normal_form(&e)?;
                if !e.is_zero() {
                    vectors.push(e);
                }
            }
        }
    }
    let mut keys: Vec<Monomial> = vectors
        .iter()
        .chain([&x])
        .flat_map(|e| e.terms().map(|(m, _)| m.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let row = |e: &AlgebraElement| -> Vec<CycScalar> { keys.iter().map(|k| e.coeff(k)).collect() };
    let span: Vec<Vec<CycScalar>> = vectors.iter().map(row).collect();
    let mut with_x = span.clone();
    with_x.push(row(&x));
    Ok(linalg::rank(&span) == linalg::rank(&with_x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityMethod {
    Rewriting,
    BoundedSpan(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedIdeal {
    /// `j(I)` inside the twisted Hopf algebra.
    pub ideal: GradedHopfIdeal,
    pub twisted_hopf: HopfPresentation,
    /// `(A/I)^{t}`.
    pub quotient_then_twist: Presentation,
    /// `A^{t} / j(I)`.
    pub twist_then_quotient: Presentation,
    pub stability: StabilityMethod,
    /// Whether both quotient constructions agree on all words up to the bound.
    pub commutes: bool,
}

/// Twists a graded stable ideal and checks that quotienting commutes with
/// twisting on words up to `word_bound`.
pub fn twist_ideal(
    x: &InvariantCocentralAction,
    ideal: &GradedHopfIdeal,
    word_bound: usize,
) -> Result<TwistedIdeal> {
    let p = &x.hopf.base;
    for g in &ideal.generators {
        if p.homogeneous_degree(g).is_none() {
            return Err(HopfError::NotHomogeneous(p.format_element(g)));
        }
    }
    let quotient = p.with_relations(&ideal.generators)?;
    let confluent = quotient.check_confluence(6).passed();
    let stability = if confluent {
        StabilityMethod::Rewriting
    } else {
        StabilityMethod::BoundedSpan(word_bound)
    };
    for g in x.action.matrices().keys() {
        for i in &ideal.generators {
            let img = x.act(g, i)?;
            let inside = if confluent {
                quotient.normal_form(&img)?.is_zero()
            } else {
                ideal_contains_bounded(p, &ideal.generators, &img, word_bound)?
            };
            if !inside {
                return Err(HopfError::NotStable(format!(
                    "alpha_{g}({}) is not in the ideal",
                    p.format_element(i)
                )));
            }
        }
    }
    let twisted_hopf = graded_twist(x)?;
    let tw = twisted_hopf.base();
    let jgens = ideal
        .generators
        .iter()
        .map(|g| to_twisted(x, tw, g))
        .collect::<Result<Vec<_>>>()?;
    let twisted_ideal = GradedHopfIdeal::new(tw, jgens)?;
    let twist_then_quotient = tw.with_relations(&twisted_ideal.generators)?;
    let tau = TauMaps::new(&quotient, TauKind::Action, x.action.matrices().clone())?;
    let quotient_then_twist = twist_presentation(&quotient, &tau)?;
    let mut commutes = quotient_then_twist == twist_then_quotient;
    if commutes {
        for w in p.normal_words(word_bound) {
            let m = AlgebraElement::monomial(w);
            if quotient_then_twist.normal_form(&m)? != twist_then_quotient.normal_form(&m)? {
                commutes = false;
                break;
            }
        }
    }
    Ok(TwistedIdeal {
        ideal: twisted_ideal,
        twisted_hopf,
        quotient_then_twist,
        twist_then_quotient,
        stability,
        commutes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn sl2_axioms_and_negative_control() {
        let h = builtin::sl2(&CycScalar::one()).unwrap();
        assert!(check_hopf_axioms(&h, 3).unwrap().passed());
        let mut s = h.antipode_table().to_vec();
        s[0] = AlgebraElement::generator(0);
        let broken = HopfPresentation::new(
            h.base().clone(),
            h.coproduct_table().to_vec(),
            h.counit_table().to_vec(),
            s,
        )
        .unwrap();
        let report = check_hopf_axioms(&broken, 2).unwrap();
        assert!(!report.passed());
        let law = report
            .checks
            .iter()
            .find(|c| c.name == "antipode law")
            .unwrap();
        assert!(!law.passed);
        assert_eq!(law.witness.as_deref(), Some("a"));
    }

    #[test]
    fn group_algebras_are_hopf() {
        for n in [2, 4] {
            let h = builtin::group_hopf(&crate::algebra::GradingGroup::cyclic(n)).unwrap();
            assert!(check_hopf_axioms(&h, 4).unwrap().passed());
        }
    }

    #[test]
    fn trivial_action_twist_is_identity() {
        let h = builtin::sl2(&CycScalar::one()).unwrap();
        let id = TauMaps::identity(h.base()).unwrap();
        let x = InvariantCocentralAction::new(h.clone(), id).unwrap();
        assert_eq!(graded_twist(&x).unwrap(), h);
    }

    #[test]
    fn sign_twist_of_sl2() {
        let x = builtin::sl2_sign_action().unwrap();
        let t = graded_twist(&x).unwrap();
        let p = t.base();
        let expected = builtin::sl2(&CycScalar::from_int(-1)).unwrap();
        assert_eq!(p.rules(), expected.base().rules());
        assert_eq!(t.coproduct_table(), x.hopf().coproduct_table());
        assert!(check_hopf_axioms(&t, 3).unwrap().passed());
        let back = graded_twist(&x.untwisting_action(&t).unwrap()).unwrap();
        assert_eq!(back, *x.hopf());
    }

    #[test]
    fn corrupt_action_rejected() {
        let h = builtin::sl2(&CycScalar::one()).unwrap();
        let one = h.base().group().element(&[1]).unwrap();
        // Negating a alone breaks the relation ad - bc = 1.
        let mut m = vec![vec![CycScalar::zero(); 4]; 4];
        m[0][0] = CycScalar::from_int(-1);
        for i in 1..4 {
            m[i][i] = CycScalar::one();
        }
        let tau = TauMaps::new(h.base(), TauKind::Action, BTreeMap::from([(one, m)])).unwrap();
        assert!(matches!(
            InvariantCocentralAction::new(h, tau),
            Err(HopfError::InvalidAction(_))
        ));
    }

    #[test]
    fn ideal_twisting_gl2() {
        let x = builtin::gl2_sign_action().unwrap();
        let p = x.hopf().base();
        let zero = AlgebraElement::zero();
        let empty = GradedHopfIdeal::new(p, vec![zero]).unwrap();
        assert!(empty.is_zero());
        let t = twist_ideal(&x, &empty, 2).unwrap();
        assert!(t.ideal.is_zero());
        assert!(t.commutes);

        let ideal = GradedHopfIdeal::new(p, builtin::gl2_determinant_ideal()).unwrap();
        let t = twist_ideal(&x, &ideal, 3).unwrap();
        assert!(t.commutes);
        assert_eq!(t.stability, StabilityMethod::Rewriting);
        // Dropping the collapsed generators e, t leaves the twisted SL(2) rules.
        let sl = graded_twist(&builtin::sl2_sign_action().unwrap()).unwrap();
        let kept: Vec<_> = t
            .twist_then_quotient
            .rules()
            .iter()
            .filter(|r| r.lhs.0.iter().all(|&i| i < 4))
            .cloned()
            .collect();
        assert_eq!(kept, sl.base().rules());
    }

    #[test]
    fn non_homogeneous_ideal_rejected() {
        let h = builtin::sl2(&CycScalar::one()).unwrap();
        let bad = AlgebraElement::generator(0).sub(&AlgebraElement::one());
        assert!(matches!(
            GradedHopfIdeal::new(h.base(), vec![bad]),
            Err(HopfError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn bounded_membership() {
        let h = builtin::sl2(&CycScalar::one()).unwrap();
        let p = h.base();
        let b = AlgebraElement::generator(1);
        let ab = AlgebraElement::word(&[0, 1]);
        assert!(ideal_contains_bounded(p, std::slice::from_ref(&b), &ab, 1).unwrap());
        assert!(!ideal_contains_bounded(p, &[b], &AlgebraElement::generator(0), 2).unwrap());
    }
}
