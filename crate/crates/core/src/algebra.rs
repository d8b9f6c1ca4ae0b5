//! Finitely presented algebras graded by a finitely generated abelian group,
//! rewriting to normal form, and twisted products.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::linalg;
use crate::scalars::CycScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("generator index {0} out of range")]
    BadGenerator(u32),
    #[error("group element has {found} components, expected {expected}")]
    BadGroupElement { found: usize, expected: usize },
    #[error("relation `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("rule `{0}` does not decrease the monomial order")]
    NotDecreasing(String),
    #[error("reduction exceeded the step budget of {0}")]
    StepBudget(usize),
    #[error("grading group must be finite")]
    InfiniteGroup,
    #[error("invalid twisting maps: {0}")]
    InvalidTau(String),
    #[error("rewriting system is not confluent: {0}")]
    NotConfluent(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// A finitely generated abelian group `Z/n_1 x ... x Z/n_k` (order 0 = `Z`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingGroup {
    orders: Vec<u32>,
}

impl GradingGroup {
    pub fn new(orders: Vec<u32>) -> Self {
        GradingGroup { orders }
    }

    pub fn trivial() -> Self {
        GradingGroup { orders: Vec::new() }
    }

    pub fn cyclic(n: u32) -> Self {
        GradingGroup { orders: vec![n] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&n| n > 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.orders.iter().map(|&n| n as u64).product())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            comps: vec![0; self.orders.len()],
            orders: self.orders.clone(),
        }
    }

    pub fn element(&self, comps: &[i64]) -> Result<GroupElement> {
        if comps.len() != self.orders.len() {
            return Err(AlgebraError::BadGroupElement {
                found: comps.len(),
                expected: self.orders.len(),
            });
        }
        Ok(GroupElement::reduced(comps.to_vec(), self.orders.clone()))
    }

    /// Standard generator `e_i`.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut comps = vec![0; self.orders.len()];
        comps[i] = 1;
        GroupElement::reduced(comps, self.orders.clone())
    }

    /// All elements in lexicographic order of components.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(AlgebraError::InfiniteGroup);
        }
        let mut out = vec![Vec::new()];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..n as i64).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        Ok(out
            .into_iter()
            .map(|c| GroupElement {
                comps: c,
                orders: self.orders.clone(),
            })
            .collect())
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(AlgebraError::InfiniteGroup);
        }
        let mut seen: BTreeSet<GroupElement> = BTreeSet::from([self.zero()]);
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.add(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|&n| {
                if n == 0 {
                    "Z".to_string()
                } else {
                    format!("Z/{n}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    comps: Vec<i64>,
    orders: Vec<u32>,
}

impl GroupElement {
    fn reduced(mut comps: Vec<i64>, orders: Vec<u32>) -> Self {
        for (c, &n) in comps.iter_mut().zip(&orders) {
            if n > 0 {
                *c = c.rem_euclid(n as i64);
            }
        }
        GroupElement { comps, orders }
    }

    pub fn comps(&self) -> &[i64] {
        &self.comps
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Self::reduced(comps, self.orders.clone())
    }

    pub fn neg(&self) -> Self {
        Self::reduced(self.comps.iter().map(|a| -a).collect(), self.orders.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::reduced(
            self.comps.iter().map(|a| a * k).collect(),
            self.orders.clone(),
        )
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.comps.as_slice() {
            [] => write!(f, "0"),
            [c] => write!(f, "{c}"),
            cs => {
                let parts: Vec<String> = cs.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// A word in the generators, ordered degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(i: u32) -> Self {
        Monomial(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Monomial(w)
    }
}

/// Sparse linear combination of words with no zero coefficients.
///
/// Elements produced by a [`Presentation`] are in normal form; the same type
/// also carries raw combinations in the free algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, CycScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(CycScalar::one())
    }

    pub fn scalar(c: CycScalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, CycScalar::one())
    }

    pub fn generator(i: u32) -> Self {
        Self::monomial(Monomial::gen(i))
    }

    pub fn word(letters: &[u32]) -> Self {
        Self::monomial(Monomial(letters.to_vec()))
    }

    pub fn term(m: Monomial, c: CycScalar) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, CycScalar)>>(iter: I) -> Self {
        let mut x = Self::zero();
        for (m, c) in iter {
            x.add_term(m, c);
        }
        x
    }

    pub fn add_term(&mut self, m: Monomial, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> CycScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &CycScalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycScalar::from_int(-1))
    }

    /// Concatenation product in the free algebra (no reduction).
    pub fn free_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: AlgebraElement,
}

impl Rule {
    /// The relation `lhs - rhs`.
    pub fn relation(&self) -> AlgebraElement {
        AlgebraElement::monomial(self.lhs.clone()).sub(&self.rhs)
    }
}

/// A generator declared to be the two-sided inverse of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalInverse {
    pub generator: u32,
    pub inverse_of: AlgebraElement,
}

pub const DEFAULT_STEP_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug)]
struct RuleSet {
    rules: Vec<Rule>,
    by_first: HashMap<u32, Vec<usize>>,
}

impl RuleSet {
    fn new(mut rules: Vec<Rule>) -> Self {
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let mut by_first: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if let Some(&first) = r.lhs.0.first() {
                by_first.entry(first).or_default().push(i);
            }
        }
        RuleSet { rules, by_first }
    }

    fn find(&self, word: &[u32], skip: Option<usize>) -> Option<(usize, usize)> {
        for i in 0..word.len() {
            if let Some(cands) = self.by_first.get(&word[i]) {
                for &r in cands {
                    if Some(r) != skip && word[i..].starts_with(&self.rules[r].lhs.0) {
                        return Some((i, r));
                    }
                }
            }
        }
        None
    }

    fn reduce(
        &self,
        x: &AlgebraElement,
        skip: Option<usize>,
        budget: usize,
    ) -> Result<AlgebraElement> {
        // Always rewrite the largest pending monomial; everything a rule
        // produces is smaller, so each monomial is visited at most once.
        let mut work = x.terms.clone();
        let mut out = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((m, c)) = work.pop_last() {
            steps += 1;
            if steps > budget {
                return Err(AlgebraError::StepBudget(budget));
            }
            match self.find(&m.0, skip) {
                None => {
                    out.insert(m, c);
                }
                Some((pos, r)) => {
                    let rule = &self.rules[r];
                    let prefix = &m.0[..pos];
                    let suffix = &m.0[pos + rule.lhs.len()..];
                    for (rm, rc) in rule.rhs.terms() {
                        let mut w = Vec::with_capacity(prefix.len() + rm.len() + suffix.len());
                        w.extend_from_slice(prefix);
                        w.extend_from_slice(&rm.0);
                        w.extend_from_slice(suffix);
                        let coef = &c * rc;
                        let key = Monomial(w);
                        match work.get_mut(&key) {
                            Some(v) => {
                                let s = &*v + &coef;
                                if s.is_zero() {
                                    work.remove(&key);
                                } else {
                                    *v = s;
                                }
                            }
                            None => {
                                work.insert(key, coef);
                            }
                        }
                    }
                }
            }
        }
        Ok(AlgebraElement { terms: out })
    }
}

/// A finitely presented `Gamma`-graded algebra with a deglex rewriting system.
#[derive(Clone, Debug)]
pub struct Presentation {
    group: GradingGroup,
    generators: Vec<Generator>,
    rules: RuleSet,
    normal_inverse: Option<NormalInverse>,
    step_budget: usize,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.generators == other.generators
            && self.rules.rules == other.rules.rules
            && self.normal_inverse == other.normal_inverse
    }
}

impl Eq for Presentation {}

impl Presentation {
    /// Builds a presentation from already oriented rules.
    pub fn new(group: GradingGroup, generators: Vec<Generator>, rules: Vec<Rule>) -> Result<Self> {
        let p = Presentation {
            group,
            generators,
            rules: RuleSet::new(rules),
            normal_inverse: None,
            step_budget: DEFAULT_STEP_BUDGET,
        };
        p.validate_rules()?;
        Ok(p)
    }

    /// Orients `relations` by their leading monomials and inter-reduces them,
    /// giving the canonical rule set of the ideal when it is confluent.
    pub fn from_relations(
        group: GradingGroup,
        generators: Vec<Generator>,
        relations: Vec<AlgebraElement>,
    ) -> Result<Self> {
        let mut p = Presentation {
            group,
            generators,
            rules: RuleSet::new(Vec::new()),
            normal_inverse: None,
            step_budget: DEFAULT_STEP_BUDGET,
        };
        for r in &relations {
            p.check_letters(r)?;
            if p.homogeneous_degree(r).is_none() && !r.is_zero() {
                return Err(AlgebraError::NotHomogeneous(p.format_element(r)));
            }
        }
        let rules = interreduce(relations, p.step_budget)?;
        p.rules = RuleSet::new(rules);
        p.validate_rules()?;
        Ok(p)
    }

    pub fn group_algebra(group: &GradingGroup) -> Result<Self> {
        if !group.is_finite() {
            return Err(AlgebraError::InfiniteGroup);
        }
        let generators = (0..group.rank())
            .map(|i| Generator {
                name: format!("g{}", i + 1),
                degree: group.basis(i),
            })
            .collect();
        let mut rels = Vec::new();
        for (i, &n) in group.orders().iter().enumerate() {
            let i = i as u32;
            rels.push(AlgebraElement::word(&vec![i; n as usize]).sub(&AlgebraElement::one()));
            for j in 0..i {
                rels.push(AlgebraElement::word(&[i, j]).sub(&AlgebraElement::word(&[j, i])));
            }
        }
        Self::from_relations(group.clone(), generators, rels)
    }

    pub fn with_normal_inverse(mut self, inv: NormalInverse) -> Result<Self> {
        self.check_letters(&inv.inverse_of)?;
        if inv.generator as usize >= self.generators.len() {
            return Err(AlgebraError::BadGenerator(inv.generator));
        }
        let t = AlgebraElement::generator(inv.generator);
        let left = self.multiply(&t, &inv.inverse_of)?;
        let right = self.multiply(&inv.inverse_of, &t)?;
        if left != AlgebraElement::one() || right != AlgebraElement::one() {
            return Err(AlgebraError::Invalid(format!(
                "{} is not a two-sided inverse of {}",
                self.generators[inv.generator as usize].name,
                self.format_element(&inv.inverse_of)
            )));
        }
        self.normal_inverse = Some(inv);
        Ok(self)
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules.rules
    }

    pub fn normal_inverse(&self) -> Option<&NormalInverse> {
        self.normal_inverse.as_ref()
    }

    pub fn relations(&self) -> Vec<AlgebraElement> {
        self.rules().iter().map(Rule::relation).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<u32> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u32)
    }

    pub fn degree_of(&self, m: &Monomial) -> GroupElement {
        m.0.iter().fold(self.group.zero(), |acc, &i| {
            acc.add(&self.generators[i as usize].degree)
        })
    }

    /// The common degree of all terms, or `None` for a non-homogeneous element.
    /// The zero element is homogeneous of every degree and reports `e`.
    pub fn homogeneous_degree(&self, x: &AlgebraElement) -> Option<GroupElement> {
        let mut degs = x.terms().map(|(m, _)| self.degree_of(m));
        let first = degs.next().unwrap_or_else(|| self.group.zero());
        degs.all(|d| d == first).then_some(first)
    }

    fn check_letters(&self, x: &AlgebraElement) -> Result<()> {
        for (m, _) in x.terms() {
            for &i in &m.0 {
                if i as usize >= self.generators.len() {
                    return Err(AlgebraError::BadGenerator(i));
                }
            }
        }
        Ok(())
    }

    fn validate_rules(&self) -> Result<()> {
        for g in &self.generators {
            if g.degree.orders() != self.group.orders() {
                return Err(AlgebraError::BadGroupElement {
                    found: g.degree.comps().len(),
                    expected: self.group.rank(),
                });
            }
        }
        for r in self.rules() {
            let rel = r.relation();
            self.check_letters(&rel)?;
            if r.lhs.is_empty() || r.rhs.terms().any(|(m, _)| *m >= r.lhs) {
                return Err(AlgebraError::NotDecreasing(self.format_rule(r)));
            }
            if self.homogeneous_degree(&rel).is_none() {
                return Err(AlgebraError::NotHomogeneous(self.format_rule(r)));
            }
        }
        Ok(())
    }

    pub fn normal_form(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_letters(x)?;
        self.rules.reduce(x, None, self.step_budget)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.normal_form(&a.free_mul(b))
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.rules.find(&m.0, None).is_none()
    }

    pub fn homogeneous_part(&self, a: &AlgebraElement, g: &GroupElement) -> AlgebraElement {
        AlgebraElement::from_terms(
            a.terms()
                .filter(|(m, _)| self.degree_of(m) == *g)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn homogeneous_components(
        &self,
        a: &AlgebraElement,
    ) -> BTreeMap<GroupElement, AlgebraElement> {
        let mut out: BTreeMap<GroupElement, AlgebraElement> = BTreeMap::new();
        for (m, c) in a.terms() {
            out.entry(self.degree_of(m))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Normal words of length `<= max_len`, in increasing monomial order.
    pub fn normal_words(&self, max_len: usize) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let mut level = vec![Monomial::one()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &level {
                for g in 0..self.generators.len() as u32 {
                    let mut v = w.0.clone();
                    v.push(g);
                    // Only suffixes ending at the new letter can match.
                    let reducible = self.rules().iter().any(|r| v.ends_with(&r.lhs.0));
                    if !reducible {
                        next.push(Monomial(v));
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// Adjoins further relations and re-canonicalizes the rule set.
    pub fn with_relations(&self, extra: &[AlgebraElement]) -> Result<Self> {
        let mut rels = self.relations();
        rels.extend(extra.iter().cloned());
        let mut p = Self::from_relations(self.group.clone(), self.generators.clone(), rels)?;
        p.step_budget = self.step_budget;
        Ok(p)
    }

    /// Checks every overlap and inclusion ambiguity whose word has length at
    /// most `max_len`.
    pub fn check_confluence(&self, max_len: usize) -> ConfluenceReport {
        let rules = self.rules();
        let mut checked = 0;
        for (i, r1) in rules.iter().enumerate() {
            for (j, r2) in rules.iter().enumerate() {
                let l1 = &r1.lhs.0;
                let l2 = &r2.lhs.0;
                // Overlaps: a proper suffix of l1 equals a proper prefix of l2.
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut word = l1.clone();
                    word.extend_from_slice(&l2[k..]);
                    if word.len() > max_len {
                        continue;
                    }
                    checked += 1;
                    if let Some(f) = self.resolve(&word, (0, r1), (l1.len() - k, r2)) {
                        return ConfluenceReport {
                            checked,
                            failure: Some(f),
                        };
                    }
                }
                // Inclusions: l2 occurs inside l1.
                if i != j && l2.len() <= l1.len() && l1.len() <= max_len {
                    for pos in 0..=l1.len() - l2.len() {
                        if l1[pos..pos + l2.len()] == l2[..] {
                            checked += 1;
                            if let Some(f) = self.resolve(l1, (0, r1), (pos, r2)) {
                                return ConfluenceReport {
                                    checked,
                                    failure: Some(f),
                                };
                            }
                        }
                    }
                }
            }
        }
        ConfluenceReport {
            checked,
            failure: None,
        }
    }

    fn resolve(
        &self,
        word: &[u32],
        a: (usize, &Rule),
        b: (usize, &Rule),
    ) -> Option<ConfluenceFailure> {
        let apply = |(pos, r): (usize, &Rule)| {
            let prefix = AlgebraElement::word(&word[..pos]);
            let suffix = AlgebraElement::word(&word[pos + r.lhs.len()..]);
            self.normal_form(&prefix.free_mul(&r.rhs).free_mul(&suffix))
        };
        match (apply(a), apply(b)) {
            (Ok(x), Ok(y)) if x == y => None,
            (x, y) => Some(ConfluenceFailure {
                word: self.format_word(&Monomial(word.to_vec())),
                left: x
                    .map(|e| self.format_element(&e))
                    .unwrap_or_else(|e| e.to_string()),
                right: y
                    .map(|e| self.format_element(&e))
                    .unwrap_or_else(|e| e.to_string()),
            }),
        }
    }

    /// Checks `A_g A_h = A_{g+h}` on the length filtration up to `bound`.
    pub fn check_strong_grading(&self, bound: usize) -> Result<StrongGradingReport> {
        let elements = self.group.elements()?;
        let degs: Vec<GroupElement> = self.generators.iter().map(|g| g.degree.clone()).collect();
        let reachable = self.group.generated_subgroup(&degs)?;
        let surjective = reachable.len() == elements.len();
        let missing: Vec<GroupElement> = elements
            .iter()
            .filter(|g| !reachable.contains(g))
            .cloned()
            .collect();

        // Products of long words may collapse to short ones (a d t - b c t = 1
        // in GL(2)), so products are taken up to `n + slack`: twice the longest
        // shortest word needed to reach a degree, plus the longest rule.
        let short = self.normal_words(elements.len());
        let min_len = elements
            .iter()
            .filter_map(|g| {
                short
                    .iter()
                    .find(|w| self.degree_of(w) == *g)
                    .map(Monomial::len)
            })
            .max()
            .unwrap_or(0);
        let rule_len = self.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(0);
        let slack = 2 * min_len + rule_len;
        let words = self.normal_words(bound + slack);
        let mut by_degree: BTreeMap<GroupElement, Vec<Monomial>> = BTreeMap::new();
        for w in &words {
            by_degree
                .entry(self.degree_of(w))
                .or_default()
                .push(w.clone());
        }
        let empty = Vec::new();
        let mut checked = 0;
        for g in &elements {
            for h in &elements {
                let target = g.add(h);
                let tw = by_degree.get(&target).unwrap_or(&empty);
                for n in 0..=bound {
                    checked += 1;
                    let filtered: Vec<&Monomial> = tw.iter().filter(|w| w.len() <= n).collect();
                    let want = filtered.len();
                    let limit = n + slack;
                    let index: HashMap<&Monomial, usize> = tw
                        .iter()
                        .filter(|w| w.len() <= limit)
                        .enumerate()
                        .map(|(i, w)| (w, i))
                        .collect();
                    let mut products = Vec::new();
                    for u in by_degree.get(g).unwrap_or(&empty) {
                        for v in by_degree.get(h).unwrap_or(&empty) {
                            if u.len() + v.len() > limit {
                                continue;
                            }
                            let p = self.normal_form(&AlgebraElement::monomial(u.concat(v)))?;
                            if p.max_len() > limit {
                                continue;
                            }
                            let mut row = vec![CycScalar::zero(); index.len()];
                            for (m, c) in p.terms() {
                                row[index[m]] = c.clone();
                            }
                            products.push(row);
                        }
                    }
                    let basis: Vec<Vec<CycScalar>> = filtered
                        .iter()
                        .map(|w| {
                            let mut row = vec![CycScalar::zero(); index.len()];
                            row[index[*w]] = CycScalar::one();
                            row
                        })
                        .collect();
                    let got = linalg::intersection_dim(&products, &basis);
                    if got < want {
                        return Ok(StrongGradingReport {
                            surjective,
                            missing_degrees: missing,
                            checked,
                            failure: Some(StrongGradingFailure {
                                g: g.clone(),
                                h: h.clone(),
                                length: n,
                                expected: want,
                                found: got,
                            }),
                        });
                    }
                }
            }
        }
        Ok(StrongGradingReport {
            surjective,
            missing_degrees: missing,
            checked,
            failure: None,
        })
    }

    pub fn format_word(&self, m: &Monomial) -> String {
        if m.is_empty() {
            return "1".to_string();
        }
        m.0.iter()
            .map(|&i| self.generators[i as usize].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Text form: terms in decreasing monomial order joined by `+`/`-`.
    pub fn format_element(&self, x: &AlgebraElement) -> String {
        format_linear(x.terms().rev(), |m| self.format_word(m))
    }

    pub fn format_rule(&self, r: &Rule) -> String {
        format!(
            "{} -> {}",
            self.format_word(&r.lhs),
            self.format_element(&r.rhs)
        )
    }
}

/// Formats a linear combination; `name` renders each basis key.
pub fn format_linear<'a, K: 'a, I, F>(terms: I, name: F) -> String
where
    I: Iterator<Item = (&'a K, &'a CycScalar)>,
    F: Fn(&K) -> String,
{
    let mut out = String::new();
    for (k, c) in terms {
        let word = name(k);
        let (neg, mag) = match c.to_rational() {
            Some(r) if r < num_rational::BigRational::from_integer(0.into()) => {
                (true, CycScalar::from_rational(-r))
            }
            _ => (false, c.clone()),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if word == "1" {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&word);
        } else {
            out.push_str(&format!("{mag} {word}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Inter-reduces relations into monic rules until no rule's monomials are
/// reducible by the others.
fn interreduce(relations: Vec<AlgebraElement>, budget: usize) -> Result<Vec<Rule>> {
    let to_rule = |r: &AlgebraElement| -> Result<Rule> {
        let (lm, lc) = r.leading().expect("nonzero relation");
        let inv = lc.inv().map_err(|e| AlgebraError::Invalid(e.to_string()))?;
        let monic = r.scale(&inv);
        let rhs = AlgebraElement::monomial(lm.clone()).sub(&monic);
        Ok(Rule {
            lhs: lm.clone(),
            rhs,
        })
    };
    let mut rules: Vec<Rule> = relations
        .iter()
        .filter(|r| !r.is_zero())
        .map(to_rule)
        .collect::<Result<Vec<_>>>()?;
    loop {
        let set = RuleSet::new(rules.clone());
        let mut changed = false;
        let mut next = Vec::with_capacity(set.rules.len());
        // Reduce each rule by all the others in the current (sorted) set.
        let mut dropped = BTreeSet::new();
        for i in 0..set.rules.len() {
            let rel = set.rules[i].relation();
            let others = RuleSet::new(
                set.rules
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i && !dropped.contains(j))
                    .map(|(_, r)| r.clone())
                    .collect(),
            );
            let red = others.reduce(&rel, None, budget)?;
            if red.is_zero() {
                dropped.insert(i);
                changed = true;
                continue;
            }
            let rule = to_rule(&red)?;
            if rule != set.rules[i] {
                changed = true;
            }
            next.push(rule);
        }
        rules = next;
        if !changed {
            break;
        }
    }
    rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
    Ok(rules)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceFailure {
    pub word: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub checked: usize,
    pub failure: Option<ConfluenceFailure>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongGradingFailure {
    pub g: GroupElement,
    pub h: GroupElement,
    pub length: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongGradingReport {
    pub surjective: bool,
    pub missing_degrees: Vec<GroupElement>,
    pub checked: usize,
    pub failure: Option<StrongGradingFailure>,
}

impl StrongGradingReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.failure.is_none()
    }
}

/// Matrix of a linear map on the span of the generators:
/// `m[i][j]` is the coefficient of generator `j` in the image of generator `i`.
pub type GenMatrix = Vec<Vec<CycScalar>>;

fn identity_matrix(n: usize) -> GenMatrix {
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

/// `x -> a(b(x))` where both act on generator images.
fn compose(a: &GenMatrix, b: &GenMatrix) -> GenMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (0..n).map(|j| &b[i][j] * &a[j][k]).sum())
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauKind {
    /// Each map is an algebra automorphism and `g -> tau_g` is a homomorphism.
    Action,
    /// Arbitrary graded linear maps obeying the twisting cocycle law.
    Table,
}

/// Degree-preserving linear maps `tau_g`, one per group element, given on
/// generators and extended to words by the twisting cocycle law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauMaps {
    group: GradingGroup,
    kind: TauKind,
    maps: BTreeMap<GroupElement, GenMatrix>,
    inverses: BTreeMap<GroupElement, GenMatrix>,
}

impl TauMaps {
    pub fn identity(p: &Presentation) -> Result<Self> {
        Self::new(p, TauKind::Action, BTreeMap::new())
    }

    /// For `Action`, `given` need only cover a generating set of the group;
    /// for `Table`, missing elements act as the identity.
    pub fn new(
        p: &Presentation,
        kind: TauKind,
        given: BTreeMap<GroupElement, GenMatrix>,
    ) -> Result<Self> {
        let group = p.group().clone();
        let elements = group.elements()?;
        let n = p.num_generators();
        for (g, m) in &given {
            if g.orders() != group.orders() {
                return Err(AlgebraError::BadGroupElement {
                    found: g.comps().len(),
                    expected: group.rank(),
                });
            }
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(AlgebraError::InvalidTau(format!(
                    "map at {g} is not {n} x {n}"
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    if !m[i][j].is_zero() && p.generators[i].degree != p.generators[j].degree {
                        return Err(AlgebraError::InvalidTau(format!(
                            "map at {g} sends {} to a different degree",
                            p.generators[i].name
                        )));
                    }
                }
            }
        }
        let zero = group.zero();
        if let Some(m) = given.get(&zero) {
            if *m != identity_matrix(n) {
                return Err(AlgebraError::InvalidTau(
                    "map at the identity element is not the identity".into(),
                ));
            }
        }
        let mut maps: BTreeMap<GroupElement, GenMatrix> = BTreeMap::new();
        match kind {
            TauKind::Table => {
                for g in &elements {
                    maps.insert(
                        g.clone(),
                        given.get(g).cloned().unwrap_or_else(|| identity_matrix(n)),
                    );
                }
            }
            TauKind::Action => {
                maps.insert(zero.clone(), identity_matrix(n));
                let mut frontier = vec![zero];
                while let Some(a) = frontier.pop() {
                    for (g, mg) in &given {
                        let b = a.add(g);
                        let mb = compose(&maps[&a], mg);
                        match maps.get(&b) {
                            Some(existing) if *existing != mb => {
                                return Err(AlgebraError::InvalidTau(format!(
                                    "maps do not define a group action (conflict at {b})"
                                )));
                            }
                            Some(_) => {}
                            None => {
                                maps.insert(b.clone(), mb);
                                frontier.push(b);
                            }
                        }
                    }
                }
                for g in &elements {
                    maps.entry(g.clone()).or_insert_with(|| identity_matrix(n));
                }
                for (g, mg) in &given {
                    if maps[g] != *mg {
                        return Err(AlgebraError::InvalidTau(format!(
                            "maps do not define a group action (at {g})"
                        )));
                    }
                }
            }
        }
        let mut inverses = BTreeMap::new();
        for (g, m) in &maps {
            let inv = linalg::invert(m)
                .ok_or_else(|| AlgebraError::InvalidTau(format!("map at {g} is singular")))?;
            inverses.insert(g.clone(), inv);
        }
        let tau = TauMaps {
            group,
            kind,
            maps,
            inverses,
        };
        if kind == TauKind::Action {
            tau.check_action_law()?;
        }
        Ok(tau)
    }

    fn check_action_law(&self) -> Result<()> {
        for (g, mg) in &self.maps {
            for (h, mh) in &self.maps {
                if compose(mg, mh) != self.maps[&g.add(h)] {
                    return Err(AlgebraError::InvalidTau(format!(
                        "tau_{g} tau_{h} != tau_{}",
                        g.add(h)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> TauKind {
        self.kind
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn matrix(&self, g: &GroupElement) -> &GenMatrix {
        &self.maps[g]
    }

    pub fn matrices(&self) -> &BTreeMap<GroupElement, GenMatrix> {
        &self.maps
    }

    pub fn is_trivial(&self) -> bool {
        self.maps.values().all(|m| *m == identity_matrix(m.len()))
    }

    /// The family `g -> tau_g^{-1}`, which untwists.
    pub fn inverse_family(&self) -> TauMaps {
        let kind = if self.kind == TauKind::Action
            && self.maps.keys().all(|g| {
                self.maps.keys().all(|h| {
                    compose(&self.inverses[g], &self.inverses[h]) == self.inverses[&g.add(h)]
                })
            }) {
            TauKind::Action
        } else {
            TauKind::Table
        };
        TauMaps {
            group: self.group.clone(),
            kind,
            maps: self.inverses.clone(),
            inverses: self.maps.clone(),
        }
    }

    fn image(m: &GenMatrix, i: u32) -> AlgebraElement {
        AlgebraElement::from_terms(
            m[i as usize]
                .iter()
                .enumerate()
                .map(|(j, c)| (Monomial::gen(j as u32), c.clone())),
        )
    }

    fn theta_with(
        &self,
        p: &Presentation,
        mats: &BTreeMap<GroupElement, GenMatrix>,
        g: &GroupElement,
        x: &AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            let mut acc = AlgebraElement::scalar(c.clone());
            let mut h = g.clone();
            for &y in &w.0 {
                acc = acc.free_mul(&Self::image(&mats[&h], y));
                h = h.add(&p.generators[y as usize].degree);
            }
            out = out.add(&acc);
        }
        out
    }

    /// `theta_g(y_1 ... y_m) = tau_g(y_1) tau_{g+k_1}(y_2) ...` in the free algebra.
    pub fn theta(&self, p: &Presentation, g: &GroupElement, x: &AlgebraElement) -> AlgebraElement {
        self.theta_with(p, &self.maps, g, x)
    }

    /// Inverse of [`Self::theta`], computed letter by letter.
    pub fn theta_inv(
        &self,
        p: &Presentation,
        g: &GroupElement,
        x: &AlgebraElement,
    ) -> AlgebraElement {
        self.theta_with(p, &self.inverses, g, x)
    }

    /// `tau_g` on normal-form elements of `p`.
    pub fn apply(
        &self,
        p: &Presentation,
        g: &GroupElement,
        x: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        let zero = self.group.zero();
        p.normal_form(&self.theta(p, g, &self.theta_inv(p, &zero, x)))
    }

    /// Checks that every `tau_g` descends from the free algebra to `p`.
    pub fn check(&self, p: &Presentation) -> Result<()> {
        for r in p.relations() {
            for h in self.maps.keys() {
                let pulled = self.theta_inv(p, h, &r);
                for g in self.maps.keys() {
                    let img = p.normal_form(&self.theta(p, g, &pulled))?;
                    if !img.is_zero() {
                        return Err(AlgebraError::InvalidTau(format!(
                            "tau_{g} does not preserve the relation {}",
                            p.format_element(&r)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `a ._tau b = sum_g a_g tau_g(b)`.
pub fn tau_twist_multiply(
    p: &Presentation,
    tau: &TauMaps,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    for (g, ag) in p.homogeneous_components(a) {
        let tb = tau.apply(p, &g, b)?;
        out = out.add(&p.multiply(&ag, &tb)?);
    }
    Ok(out)
}

/// Presentation of the twisted algebra on the same generators: the words
/// `w` with `theta_e(w)` in the original ideal.
pub fn twist_presentation(p: &Presentation, tau: &TauMaps) -> Result<Presentation> {
    tau.check(p)?;
    let degs: Vec<GroupElement> = p.generators.iter().map(|g| g.degree.clone()).collect();
    let shifts = p.group.generated_subgroup(&degs)?;
    let mut rels = Vec::new();
    for r in p.relations() {
        for h in &shifts {
            rels.push(tau.theta_inv(p, h, &r));
        }
    }
    let mut out = Presentation::from_relations(p.group.clone(), p.generators.clone(), rels)?;
    out.step_budget = p.step_budget;
    let report = out.check_confluence(6);
    if let Some(f) = report.failure {
        return Err(AlgebraError::NotConfluent(format!(
            "{} resolves to {} and {}",
            f.word, f.left, f.right
        )));
    }
    if let Some(inv) = &p.normal_inverse {
        // Kept only when the twisted products still witness the inverse.
        let zero = p.group.zero();
        let twisted = out.normal_form(&tau.theta_inv(p, &zero, &inv.inverse_of))?;
        if let Ok(with) = out.clone().with_normal_inverse(NormalInverse {
            generator: inv.generator,
            inverse_of: twisted,
        }) {
            out = with;
        }
    }
    Ok(out)
}

/// Rule-level twist: each relation `r` is replaced by `theta_e^{-1}(r)` alone.
///
/// When every `tau_g` preserves the relations this is the presentation of
/// [`twist_presentation`]. Otherwise no twisted algebra stands behind it and
/// the output must be validated on its own terms.
pub fn twist_rules(p: &Presentation, tau: &TauMaps) -> Result<Presentation> {
    let zero = p.group.zero();
    let rels = p
        .relations()
        .iter()
        .map(|r| tau.theta_inv(p, &zero, r))
        .collect();
    let mut out = Presentation::from_relations(p.group.clone(), p.generators.clone(), rels)?;
    out.step_budget = p.step_budget;
    if let Some(f) = out.check_confluence(6).failure {
        return Err(AlgebraError::NotConfluent(format!(
            "{} resolves to {} and {}",
            f.word, f.left, f.right
        )));
    }
    Ok(out)
}

/// Structure constants `(i, j) -> y_i y_j` for all generator pairs.
pub fn generator_products(p: &Presentation) -> Result<Vec<AlgebraElement>> {
    let n = p.num_generators() as u32;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(p.normal_form(&AlgebraElement::word(&[i, j]))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2() -> GradingGroup {
        GradingGroup::cyclic(2)
    }

    fn gens(group: &GradingGroup, names: &[(&str, i64)]) -> Vec<Generator> {
        names
            .iter()
            .map(|&(n, d)| Generator {
                name: n.to_string(),
                degree: group.element(&[d]).unwrap(),
            })
            .collect()
    }

    /// `yx = q xy` with `x < y`.
    fn quantum_plane(q: CycScalar) -> Presentation {
        let g = z2();
        let rel = AlgebraElement::word(&[1, 0]).sub(&AlgebraElement::word(&[0, 1]).scale(&q));
        Presentation::from_relations(g.clone(), gens(&g, &[("x", 1), ("y", 1)]), vec![rel]).unwrap()
    }

    fn neg1() -> CycScalar {
        CycScalar::from_int(-1)
    }

    #[test]
    fn normal_form_examples() {
        let q = CycScalar::root_of_unity(1, 3).unwrap();
        let p = quantum_plane(q.clone());
        let x = AlgebraElement::word(&[1, 0]);
        assert_eq!(
            p.normal_form(&x).unwrap(),
            AlgebraElement::word(&[0, 1]).scale(&q)
        );
        assert_eq!(
            p.normal_form(&AlgebraElement::one()).unwrap(),
            AlgebraElement::one()
        );
        let y2x = AlgebraElement::word(&[1, 1, 0]);
        assert_eq!(
            p.normal_form(&y2x).unwrap(),
            AlgebraElement::word(&[0, 1, 1]).scale(&(&q * &q))
        );
    }

    #[test]
    fn multiply_examples() {
        let p = quantum_plane(neg1());
        let x = AlgebraElement::generator(0);
        let y = AlgebraElement::generator(1);
        assert_eq!(p.multiply(&x, &y).unwrap(), AlgebraElement::word(&[0, 1]));
        assert_eq!(
            p.multiply(&y, &x).unwrap(),
            AlgebraElement::word(&[0, 1]).neg()
        );
        let s = x.add(&y);
        let expected = AlgebraElement::word(&[0, 0]).add(&AlgebraElement::word(&[1, 1]));
        assert_eq!(p.multiply(&s, &s).unwrap(), expected);
        assert_eq!(p.multiply(&AlgebraElement::one(), &s).unwrap(), s);
    }

    #[test]
    fn homogeneous_parts() {
        let p = quantum_plane(neg1());
        let a = AlgebraElement::word(&[0, 1]).add(&AlgebraElement::one());
        let zero = p.group().zero();
        let one = p.group().element(&[1]).unwrap();
        assert_eq!(p.homogeneous_part(&a, &zero), a);
        assert!(p.homogeneous_part(&a, &one).is_zero());
        let mixed = a.add(&AlgebraElement::generator(0));
        let total = p
            .homogeneous_part(&mixed, &zero)
            .add(&p.homogeneous_part(&mixed, &one));
        assert_eq!(total, mixed);
    }

    fn sign_on_y(p: &Presentation) -> TauMaps {
        let one = p.group().element(&[1]).unwrap();
        let m = vec![
            vec![CycScalar::one(), CycScalar::zero()],
            vec![CycScalar::zero(), neg1()],
        ];
        TauMaps::new(p, TauKind::Action, BTreeMap::from([(one, m)])).unwrap()
    }

    #[test]
    fn twisting_commutative_plane() {
        let p = quantum_plane(CycScalar::one());
        let tau = sign_on_y(&p);
        let x = AlgebraElement::generator(0);
        let y = AlgebraElement::generator(1);
        let yx = tau_twist_multiply(&p, &tau, &y, &x).unwrap();
        let xy = tau_twist_multiply(&p, &tau, &x, &y).unwrap();
        assert_eq!(yx, AlgebraElement::word(&[0, 1]));
        assert_eq!(xy, AlgebraElement::word(&[0, 1]).neg());
        let twisted = twist_presentation(&p, &tau).unwrap();
        assert_eq!(twisted, quantum_plane(neg1()));
        let back = twist_presentation(&twisted, &tau.inverse_family()).unwrap();
        assert_eq!(back, p);
        let trivial = TauMaps::identity(&p).unwrap();
        assert_eq!(
            tau_twist_multiply(&p, &trivial, &y, &x).unwrap(),
            p.multiply(&y, &x).unwrap()
        );
    }

    #[test]
    fn confluence_detects_bad_systems() {
        let p = quantum_plane(neg1());
        assert!(p.check_confluence(6).passed());
        // yx -> 0 and yy -> xx overlap on yyx without resolving.
        let g = z2();
        let bad = Presentation::new(
            g.clone(),
            gens(&g, &[("x", 1), ("y", 1)]),
            vec![
                Rule {
                    lhs: Monomial(vec![1, 0]),
                    rhs: AlgebraElement::zero(),
                },
                Rule {
                    lhs: Monomial(vec![1, 1]),
                    rhs: AlgebraElement::word(&[0, 0]),
                },
            ],
        )
        .unwrap();
        assert!(!bad.check_confluence(6).passed());
    }

    #[test]
    fn rejects_bad_rules() {
        let g = z2();
        let increasing = Presentation::new(
            g.clone(),
            gens(&g, &[("x", 1), ("y", 1)]),
            vec![Rule {
                lhs: Monomial(vec![0, 1]),
                rhs: AlgebraElement::word(&[1, 0]),
            }],
        );
        assert!(matches!(increasing, Err(AlgebraError::NotDecreasing(_))));
        let inhomogeneous = Presentation::from_relations(
            g.clone(),
            gens(&g, &[("x", 1), ("y", 0)]),
            vec![AlgebraElement::word(&[1, 0]).sub(&AlgebraElement::generator(1))],
        );
        assert!(matches!(
            inhomogeneous,
            Err(AlgebraError::NotHomogeneous(_))
        ));
        let looping = quantum_plane(neg1()).with_step_budget(3);
        assert_eq!(
            looping.normal_form(&AlgebraElement::word(&[1, 1, 1, 0, 0, 0])),
            Err(AlgebraError::StepBudget(3))
        );
    }

    #[test]
    fn strong_grading() {
        let g = GradingGroup::cyclic(4);
        let ka = Presentation::group_algebra(&g).unwrap();
        assert!(ka.check_strong_grading(3).unwrap().passed());
        // Generators all of degree 0 leave A_1 = 0.
        let two = z2();
        let degenerate = Presentation::from_relations(
            two.clone(),
            gens(&two, &[("x", 0), ("y", 0)]),
            vec![AlgebraElement::word(&[1, 0]).sub(&AlgebraElement::word(&[0, 1]))],
        )
        .unwrap();
        let report = degenerate.check_strong_grading(2).unwrap();
        assert!(!report.passed());
        assert!(!report.surjective);
        let f = report.failure.unwrap();
        assert_eq!(f.g, two.element(&[1]).unwrap());
    }

    /// Random rewriting strategy: pick any applicable rule position.
    fn reduce_randomly(
        p: &Presentation,
        w: &[u32],
        choices: &mut impl Iterator<Item = usize>,
    ) -> AlgebraElement {
        let mut x = AlgebraElement::word(w);
        loop {
            let mut redexes = Vec::new();
            for (m, _) in x.terms() {
                for (ri, r) in p.rules().iter().enumerate() {
                    for pos in 0..m.len() {
                        if m.0[pos..].starts_with(&r.lhs.0) {
                            redexes.push((m.clone(), ri, pos));
                        }
                    }
                }
            }
            if redexes.is_empty() {
                return x;
            }
            let (m, ri, pos) = redexes[choices.next().unwrap_or(0) % redexes.len()].clone();
            let c = x.coeff(&m);
            let r = &p.rules()[ri];
            let rep = AlgebraElement::word(&m.0[..pos])
                .free_mul(&r.rhs)
                .free_mul(&AlgebraElement::word(&m.0[pos + r.lhs.len()..]))
                .scale(&c);
            x = x.sub(&AlgebraElement::term(m, c)).add(&rep);
        }
    }

    fn cubic_plane() -> Presentation {
        let g = GradingGroup::cyclic(3);
        let q = CycScalar::root_of_unity(1, 3).unwrap();
        let rels = vec![
            AlgebraElement::word(&[1, 0]).sub(&AlgebraElement::word(&[0, 1]).scale(&q)),
            AlgebraElement::word(&[2, 0]).sub(&AlgebraElement::word(&[0, 2]).scale(&q)),
            AlgebraElement::word(&[2, 1]).sub(&AlgebraElement::word(&[1, 2]).scale(&q)),
        ];
        Presentation::from_relations(g.clone(), gens(&g, &[("x", 1), ("y", 1), ("z", 1)]), rels)
            .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn strategy_independence(w in proptest::collection::vec(0u32..3, 0..=6), picks in proptest::collection::vec(0usize..50, 64)) {
            let p = cubic_plane();
            let mut it = picks.into_iter();
            let random = reduce_randomly(&p, &w, &mut it);
            prop_assert_eq!(random, p.normal_form(&AlgebraElement::word(&w)).unwrap());
        }

        #[test]
        fn associativity(a in proptest::collection::vec(0u32..3, 0..4), b in proptest::collection::vec(0u32..3, 0..4), c in proptest::collection::vec(0u32..3, 0..4)) {
            let p = cubic_plane();
            let (a, b, c) = (AlgebraElement::word(&a), AlgebraElement::word(&b).add(&AlgebraElement::generator(1)), AlgebraElement::word(&c));
            let left = p.multiply(&p.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = p.multiply(&a, &p.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn products_of_homogeneous_parts(a in proptest::collection::vec(0u32..2, 0..4), b in proptest::collection::vec(0u32..2, 0..4)) {
            let p = quantum_plane(neg1());
            let prod = p.multiply(&AlgebraElement::word(&a), &AlgebraElement::word(&b)).unwrap();
            let expected = p.degree_of(&Monomial(a)).add(&p.degree_of(&Monomial(b)));
            prop_assert!(prod.is_zero() || p.homogeneous_degree(&prod) == Some(expected));
        }

        #[test]
        fn twisted_product_associative(a in proptest::collection::vec(0u32..2, 0..4), b in proptest::collection::vec(0u32..2, 0..4), c in proptest::collection::vec(0u32..2, 0..4)) {
            let p = quantum_plane(CycScalar::root_of_unity(1, 4).unwrap());
            let tau = sign_on_y(&p);
            let (a, b, c) = (AlgebraElement::word(&a), AlgebraElement::word(&b), AlgebraElement::word(&c).add(&AlgebraElement::one()));
            let left = tau_twist_multiply(&p, &tau, &tau_twist_multiply(&p, &tau, &a, &b).unwrap(), &c).unwrap();
            let right = tau_twist_multiply(&p, &tau, &a, &tau_twist_multiply(&p, &tau, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn untwist_round_trip_structure_constants() {
        let p = cubic_plane();
        let one = p.group().element(&[1]).unwrap();
        let w = CycScalar::root_of_unity(1, 3).unwrap();
        let m = vec![
            vec![CycScalar::one(), CycScalar::zero(), CycScalar::zero()],
            vec![CycScalar::zero(), w.clone(), CycScalar::zero()],
            vec![CycScalar::zero(), CycScalar::zero(), &w * &w],
        ];
        let tau = TauMaps::new(&p, TauKind::Action, BTreeMap::from([(one, m)])).unwrap();
        let twisted = twist_presentation(&p, &tau).unwrap();
        assert_ne!(
            generator_products(&twisted).unwrap(),
            generator_products(&p).unwrap()
        );
        let back = twist_presentation(&twisted, &tau.inverse_family()).unwrap();
        assert_eq!(
            generator_products(&back).unwrap(),
            generator_products(&p).unwrap()
        );
        assert_eq!(back, p);
    }
}
