//! Fusion rings with dimension functions: chain groups, graded twisting of
//! fusion rules, dimension-weighted Markov operators and convolution, and
//! spectral norms of fusion matrices over (truncated) infinite rules.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, GradingGroup, GroupElement};
use crate::scalars::CycScalar;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("fusion ring invariant fails: {0}")]
    Invariant(String),
    #[error("invalid fusion data: {0}")]
    Invalid(String),
    #[error("graded action is not invariant: {0}")]
    NotInvariant(String),
    #[error("precision lost: {0}")]
    Precision(String),
    #[error(transparent)]
    Group(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, FusionError>;

/// Tolerance used when dimensions are only known numerically.
pub const APPROX_TOL: f64 = 1e-12;

/// Scalars the Markov formulas are evaluated in.
pub trait Weight: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn from_u64(n: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn close(&self, other: &Self) -> bool;
}

impl Weight for CycScalar {
    fn zero() -> Self {
        CycScalar::zero()
    }
    fn from_u64(n: u64) -> Self {
        CycScalar::from_int(n as i64)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("dimensions are nonzero")
    }
    fn close(&self, other: &Self) -> bool {
        self == other
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn close(&self, other: &Self) -> bool {
        (self - other).abs() <= APPROX_TOL * self.abs().max(other.abs()).max(1.0)
    }
}

/// A vector of values indexed by simples, exact or numerical.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Exact(Vec<CycScalar>),
    Approx(Vec<f64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact(v) => v.len(),
            Values::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Values::Exact(v) => v.iter().map(CycScalar::to_f64).collect(),
            Values::Approx(v) => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Values::Exact(_))
    }

    /// Equality, exact or within [`APPROX_TOL`].
    pub fn agrees(&self, other: &Values) -> bool {
        match (self, other) {
            (Values::Exact(a), Values::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.close(y))
            }
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        let parts: Vec<String> = match self {
            Values::Exact(v) => names
                .iter()
                .zip(v)
                .map(|(n, c)| format!("{n}: {c}"))
                .collect(),
            Values::Approx(v) => names
                .iter()
                .zip(v)
                .map(|(n, c)| format!("{n}: {c:.12}"))
                .collect(),
        };
        parts.join(", ")
    }
}

/// Dimension function of a finite fusion ring.
#[derive(Clone, Debug, PartialEq)]
pub enum Dims {
    Exact(Vec<CycScalar>),
    /// Perron-Frobenius dimensions computed numerically.
    Approx(Vec<f64>),
}

/// A finite fusion ring. `m(s, r, t)` is the multiplicity of `t` in `s (x) r`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRing {
    names: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    products: Vec<Vec<Vec<(usize, u32)>>>,
    dims: Dims,
}

impl FusionRing {
    /// Builds and validates a ring from its nonzero `(s, r, t, m)` entries.
    /// Without declared dimensions the Perron-Frobenius ones are computed.
    pub fn new(
        names: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        entries: &[(usize, usize, usize, u32)],
        dims: Option<Vec<CycScalar>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(FusionError::Invalid("no simples".into()));
        }
        if unit >= n || dual.len() != n || dual.iter().any(|&d| d >= n) {
            return Err(FusionError::Invalid("unit or dual out of range".into()));
        }
        let mut products = vec![vec![Vec::new(); n]; n];
        for &(s, r, t, m) in entries {
            if s >= n || r >= n || t >= n {
                return Err(FusionError::Invalid(format!(
                    "entry ({s}, {r}, {t}) out of range"
                )));
            }
            if m == 0 {
                continue;
            }
            let list: &mut Vec<(usize, u32)> = &mut products[s][r];
            if list.iter().any(|&(u, _)| u == t) {
                return Err(FusionError::Invalid(format!(
                    "multiplicity of {} in {} (x) {} given twice",
                    names[t], names[s], names[r]
                )));
            }
            list.push((t, m));
        }
        for row in &mut products {
            for list in row.iter_mut() {
                list.sort_unstable();
            }
        }
        let mut ring = FusionRing {
            names,
            unit,
            dual,
            products,
            dims: Dims::Approx(vec![1.0; n]),
        };
        ring.dims = match dims {
            Some(d) if d.len() != n => {
                return Err(FusionError::Invalid(format!(
                    "{} dimensions for {n} simples",
                    d.len()
                )))
            }
            Some(d) => Dims::Exact(d),
            None => Dims::Approx(ring.perron_frobenius_dims()),
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, s: usize) -> usize {
        self.dual[s]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn dims_values(&self) -> Values {
        match &self.dims {
            Dims::Exact(d) => Values::Exact(d.clone()),
            Dims::Approx(d) => Values::Approx(d.clone()),
        }
    }

    pub fn product(&self, s: usize, r: usize) -> &[(usize, u32)] {
        &self.products[s][r]
    }

    pub fn mult(&self, s: usize, r: usize, t: usize) -> u32 {
        self.products[s][r]
            .iter()
            .find(|&&(u, _)| u == t)
            .map_or(0, |&(_, m)| m)
    }

    /// All nonzero `(s, r, t, m)` in lexicographic order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        let mut out = Vec::new();
        for (s, row) in self.products.iter().enumerate() {
            for (r, list) in row.iter().enumerate() {
                out.extend(list.iter().map(|&(t, m)| (s, r, t, m)));
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        let e = self.unit;
        let name = |i: usize| &self.names[i];
        for r in 0..n {
            if self.products[e][r] != [(r, 1)] || self.products[r][e] != [(r, 1)] {
                return Err(FusionError::Invariant(format!(
                    "unit law fails at {}",
                    name(r)
                )));
            }
        }
        for s in 0..n {
            if self.dual[self.dual[s]] != s {
                return Err(FusionError::Invariant(format!(
                    "dual is not an involution at {}",
                    name(s)
                )));
            }
            for r in 0..n {
                let expected = u32::from(r == self.dual[s]);
                if self.mult(s, r, e) != expected {
                    return Err(FusionError::Invariant(format!(
                        "unit occurs {} times in {} (x) {}",
                        self.mult(s, r, e),
                        name(s),
                        name(r)
                    )));
                }
            }
        }
        for s in 0..n {
            for r in 0..n {
                for v in 0..n {
                    let mut left = vec![0u64; n];
                    for &(u, a) in self.product(s, r) {
                        for &(t, b) in self.product(u, v) {
                            left[t] += u64::from(a * b);
                        }
                    }
                    let mut right = vec![0u64; n];
                    for &(u, a) in self.product(r, v) {
                        for &(t, b) in self.product(s, u) {
                            right[t] += u64::from(a * b);
                        }
                    }
                    if left != right {
                        return Err(FusionError::Invariant(format!(
                            "associativity fails on ({} {}) {}",
                            name(s),
                            name(r),
                            name(v)
                        )));
                    }
                }
            }
        }
        match &self.dims {
            Dims::Exact(d) => self.check_dims(d),
            Dims::Approx(d) => self.check_dims(d),
        }
    }

    fn check_dims<W: Weight>(&self, d: &[W]) -> Result<()> {
        for s in 0..self.len() {
            for r in 0..self.len() {
                let rhs = self.product(s, r).iter().fold(W::zero(), |acc, &(t, m)| {
                    acc.add(&W::from_u64(m.into()).mul(&d[t]))
                });
                if !d[s].mul(&d[r]).close(&rhs) {
                    return Err(FusionError::Invariant(format!(
                        "dimension is not multiplicative on {} (x) {}",
                        self.names[s], self.names[r]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Power iteration on `I + sum_s N_s`, normalised so the unit has dimension 1.
    fn perron_frobenius_dims(&self) -> Vec<f64> {
        let n = self.len();
        let mut v = vec![1.0; n];
        for _ in 0..10_000 {
            let mut w = v.clone();
            for s in 0..n {
                for r in 0..n {
                    for &(t, m) in self.product(s, r) {
                        w[t] += f64::from(m) * v[r];
                    }
                }
            }
            let norm = w[self.unit];
            w.iter_mut().for_each(|x| *x /= norm);
            let delta = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            v = w;
            if delta < 1e-15 {
                break;
            }
        }
        v
    }

    fn transition<W: Weight>(&self, d: &[W], s: usize, f: &[W]) -> Vec<W> {
        (0..self.len())
            .map(|r| {
                let den = d[s].mul(&d[r]);
                self.product(s, r).iter().fold(W::zero(), |acc, &(t, m)| {
                    acc.add(&W::from_u64(m.into()).mul(&d[t]).div(&den).mul(&f[t]))
                })
            })
            .collect()
    }

    /// `(P_s f)(r) = sum_t m^t_{sr} d(t) / (d(s) d(r)) f(t)`.
    pub fn markov_apply(&self, s: usize, f: &[CycScalar]) -> Values {
        match &self.dims {
            Dims::Exact(d) => Values::Exact(self.transition(d, s, f)),
            Dims::Approx(d) => {
                let f: Vec<f64> = f.iter().map(CycScalar::to_f64).collect();
                Values::Approx(self.transition(d, s, &f))
            }
        }
    }

    /// `p_s(r, t)`.
    pub fn transition_probability(&self, s: usize, r: usize, t: usize) -> Values {
        let mut f = vec![CycScalar::zero(); self.len()];
        f[t] = CycScalar::one();
        match self.markov_apply(s, &f) {
            Values::Exact(v) => Values::Exact(vec![v[r].clone()]),
            Values::Approx(v) => Values::Approx(vec![v[r]]),
        }
    }

    /// `sum_t p_s(r, t) = 1` for every `s, r`, asserted from the formula.
    pub fn row_stochastic(&self) -> std::result::Result<(), String> {
        let ones = vec![CycScalar::one(); self.len()];
        for s in 0..self.len() {
            let p = self.markov_apply(s, &ones);
            let expected = match &p {
                Values::Exact(v) => Values::Exact(vec![CycScalar::one(); v.len()]),
                Values::Approx(v) => Values::Approx(vec![1.0; v.len()]),
            };
            if !p.agrees(&expected) {
                return Err(format!("rows of P_{} do not sum to 1", self.names[s]));
            }
        }
        Ok(())
    }

    fn convolve_with<W: Weight>(&self, d: &[W], nu: &[W], mu: &[W]) -> Vec<W> {
        let n = self.len();
        let mut out = vec![W::zero(); n];
        for s in 0..n {
            if nu[s] == W::zero() {
                continue;
            }
            for r in 0..n {
                if mu[r] == W::zero() {
                    continue;
                }
                let w = nu[s].mul(&mu[r]).div(&d[s].mul(&d[r]));
                for &(t, m) in self.product(s, r) {
                    out[t] = out[t].add(&w.mul(&W::from_u64(m.into())).mul(&d[t]));
                }
            }
        }
        out
    }

    /// `(nu * mu)(t) = sum_{s,r} nu(s) mu(r) m^t_{sr} d(t) / (d(s) d(r))`.
    pub fn convolve(&self, nu: &Measure, mu: &Measure) -> Result<Measure> {
        let out = match (&self.dims, &nu.0, &mu.0) {
            (Dims::Exact(d), Values::Exact(a), Values::Exact(b)) => {
                Values::Exact(self.convolve_with(d, a, b))
            }
            (Dims::Exact(d), _, _) => {
                let d: Vec<f64> = d.iter().map(CycScalar::to_f64).collect();
                Values::Approx(self.convolve_with(&d, &nu.0.to_f64(), &mu.0.to_f64()))
            }
            (Dims::Approx(d), _, _) => {
                Values::Approx(self.convolve_with(d, &nu.0.to_f64(), &mu.0.to_f64()))
            }
        };
        Measure::from_values(out)
    }

    /// `P_mu = sum_s mu(s) P_s`.
    pub fn markov_measure(&self, mu: &Measure, f: &Values) -> Values {
        let n = self.len();
        match (&self.dims, &mu.0, f) {
            (Dims::Exact(d), Values::Exact(m), Values::Exact(f)) => {
                let mut out = vec![CycScalar::zero(); n];
                for s in (0..n).filter(|&s| !m[s].is_zero()) {
                    for (o, v) in out.iter_mut().zip(self.transition(d, s, f)) {
                        *o += &(&m[s] * &v);
                    }
                }
                Values::Exact(out)
            }
            _ => {
                let d = self.dims_values().to_f64();
                let (m, f) = (mu.0.to_f64(), f.to_f64());
                let mut out = vec![0.0; n];
                for s in (0..n).filter(|&s| m[s] != 0.0) {
                    for (o, v) in out.iter_mut().zip(self.transition(&d, s, &f)) {
                        *o += m[s] * v;
                    }
                }
                Values::Approx(out)
            }
        }
    }

    /// Fusion matrix `Gamma_X[s][t] = m^s_{X t}` for `X = sum x_i U_i`.
    pub fn fusion_matrix(&self, x: &[(usize, u32)]) -> Vec<Vec<u64>> {
        let n = self.len();
        let mut g = vec![vec![0u64; n]; n];
        for &(a, k) in x {
            for (t, col) in (0..n).map(|t| (t, self.product(a, t))) {
                for &(s, m) in col {
                    g[s][t] += u64::from(k * m);
                }
            }
        }
        g
    }

    /// `d(X)`.
    pub fn object_dim(&self, x: &[(usize, u32)]) -> Values {
        match &self.dims {
            Dims::Exact(d) => Values::Exact(vec![x
                .iter()
                .map(|&(a, k)| &d[a] * &CycScalar::from_int(k.into()))
                .sum()]),
            Dims::Approx(d) => {
                Values::Approx(vec![x.iter().map(|&(a, k)| d[a] * f64::from(k)).sum()])
            }
        }
    }

    /// `d^T Gamma_X = d(X) d^T`: the dimension vector is a positive eigenvector,
    /// so `||Gamma_X||` is `d(X)`.
    pub fn dimension_eigen_check(&self, x: &[(usize, u32)]) -> bool {
        let g = self.fusion_matrix(x);
        let n = self.len();
        match &self.dims {
            Dims::Exact(d) => {
                let dx: CycScalar = x
                    .iter()
                    .map(|&(a, k)| &d[a] * &CycScalar::from_int(k.into()))
                    .sum();
                (0..n).all(|t| {
                    let lhs: CycScalar = (0..n)
                        .map(|s| &d[s] * &CycScalar::from_int(g[s][t] as i64))
                        .sum();
                    lhs == &dx * &d[t]
                })
            }
            Dims::Approx(d) => {
                let dx: f64 = x.iter().map(|&(a, k)| d[a] * f64::from(k)).sum();
                (0..n).all(|t| {
                    (0..n)
                        .map(|s| d[s] * g[s][t] as f64)
                        .sum::<f64>()
                        .close(&(dx * d[t]))
                })
            }
        }
    }
}

/// A probability measure on the simples of a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure(Values);

impl Measure {
    /// From nonnegative rationals that sum to 1.
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights
            .iter()
            .any(|w| w < &BigRational::from_integer(0.into()))
        {
            return Err(FusionError::Invalid("negative weight".into()));
        }
        Measure::from_values(Values::Exact(
            weights.into_iter().map(CycScalar::from_rational).collect(),
        ))
    }

    pub fn point(n: usize, s: usize) -> Self {
        let mut v = vec![CycScalar::zero(); n];
        v[s] = CycScalar::one();
        Measure(Values::Exact(v))
    }

    fn from_values(v: Values) -> Result<Self> {
        let ok = match &v {
            Values::Exact(w) => w.iter().sum::<CycScalar>().is_one(),
            Values::Approx(w) => (w.iter().sum::<f64>() - 1.0).abs() <= APPROX_TOL,
        };
        if !ok {
            return Err(FusionError::Precision("measure does not sum to 1".into()));
        }
        Ok(Measure(v))
    }

    pub fn values(&self) -> &Values {
        &self.0
    }
}

/// Chain group of a finite fusion ring as a multiplication table on classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGroup {
    /// Class of each simple.
    pub degree: Vec<usize>,
    /// Members of each class.
    pub classes: Vec<Vec<usize>>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub abelian: bool,
}

impl ChainGroup {
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    fn element_order(&self, g: usize) -> usize {
        let (mut x, mut k) = (g, 1);
        while x != self.identity {
            x = self.table[x][g];
            k += 1;
        }
        k
    }

    /// Invariant factors `d_1 | d_2 | ...`, e.g. `[2, 2]` or `[6]`; `None` if nonabelian.
    pub fn abelian_invariants(&self) -> Option<Vec<usize>> {
        if !self.abelian {
            return None;
        }
        let orders: Vec<usize> = (0..self.order()).map(|g| self.element_order(g)).collect();
        let mut n = self.order();
        // Primary factors per prime, largest first; merged into invariant factors below.
        let mut primary: Vec<Vec<usize>> = Vec::new();
        let mut p = 2;
        while n > 1 {
            if !n.is_multiple_of(p) {
                p += 1;
                continue;
            }
            let mut top = 0;
            while n.is_multiple_of(p) {
                n /= p;
                top += 1;
            }
            // s_k = log_p #{x : x^{p^k} = 1}; the number of factors of size >= p^k is s_k - s_{k-1}.
            let mut s = vec![0u32];
            for k in 1..=top {
                let pk = p.pow(k);
                let count = orders.iter().filter(|&&o| pk % o == 0).count();
                s.push(count.ilog(p));
            }
            let at_least: Vec<u32> = (1..s.len()).map(|k| s[k] - s[k - 1]).collect();
            let mut factors = Vec::new();
            for k in (1..=at_least.len()).rev() {
                let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
                factors.extend(std::iter::repeat_n(p.pow(k as u32), exact as usize));
            }
            primary.push(factors);
            p += 1;
        }
        let rank = primary.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<usize> = (0..rank)
            .map(|i| primary.iter().filter_map(|f| f.get(i)).product())
            .collect();
        factors.reverse();
        Some(factors)
    }

    pub fn describe(&self) -> String {
        match self.abelian_invariants() {
            Some(f) if f.is_empty() => "trivial".into(),
            Some(f) => f
                .iter()
                .map(|k| format!("Z/{k}"))
                .collect::<Vec<_>>()
                .join(" x "),
            None => format!("nonabelian of order {}", self.order()),
        }
    }

    /// `tilde mu(g) = sum_{deg s = g} mu(s)`.
    pub fn pushforward(&self, mu: &Measure) -> Values {
        match &mu.0 {
            Values::Exact(w) => {
                let mut out = vec![CycScalar::zero(); self.order()];
                for (s, v) in w.iter().enumerate() {
                    out[self.degree[s]] += v;
                }
                Values::Exact(out)
            }
            Values::Approx(w) => {
                let mut out = vec![0.0; self.order()];
                for (s, v) in w.iter().enumerate() {
                    out[self.degree[s]] += v;
                }
                Values::Approx(out)
            }
        }
    }

    /// Group convolution `(a * b)(g) = sum_{xy = g} a(x) b(y)`.
    pub fn convolve(&self, a: &Values, b: &Values) -> Values {
        let n = self.order();
        match (a, b) {
            (Values::Exact(a), Values::Exact(b)) => {
                let mut out = vec![CycScalar::zero(); n];
                for x in 0..n {
                    for y in 0..n {
                        out[self.table[x][y]] += &(&a[x] * &b[y]);
                    }
                }
                Values::Exact(out)
            }
            _ => {
                let (a, b) = (a.to_f64(), b.to_f64());
                let mut out = vec![0.0; n];
                for x in 0..n {
                    for y in 0..n {
                        out[self.table[x][y]] += a[x] * b[y];
                    }
                }
                Values::Approx(out)
            }
        }
    }

    /// Whether a grading by `group` factors through the chain group.
    pub fn factors(&self, group: &GradingGroup, degrees: &[GroupElement]) -> bool {
        let rep: Vec<&GroupElement> = self.classes.iter().map(|c| &degrees[c[0]]).collect();
        let constant = self
            .classes
            .iter()
            .enumerate()
            .all(|(i, c)| c.iter().all(|&s| &degrees[s] == rep[i]));
        let hom = (0..self.order())
            .all(|x| (0..self.order()).all(|y| rep[x].add(rep[y]) == *rep[self.table[x][y]]));
        constant && hom && rep[self.identity] == &group.zero()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

/// The universal grading: simples are identified whenever they occur in a
/// common product.
pub fn chain_group(ring: &FusionRing) -> Result<ChainGroup> {
    let n = ring.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for s in 0..n {
        for r in 0..n {
            if let Some((&(first, _), rest)) = ring.product(s, r).split_first() {
                for &(t, _) in rest {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, t));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut class_of_root = BTreeMap::new();
    let mut degree = vec![0; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (s, deg) in degree.iter_mut().enumerate() {
        let root = find(&mut parent, s);
        let next = class_of_root.len();
        let c = *class_of_root.entry(root).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(s);
        *deg = c;
    }
    let k = classes.len();
    let mut table = vec![vec![usize::MAX; k]; k];
    for s in 0..n {
        for r in 0..n {
            for &(t, _) in ring.product(s, r) {
                let slot = &mut table[degree[s]][degree[r]];
                if *slot != usize::MAX && *slot != degree[t] {
                    return Err(FusionError::Invariant(
                        "chain classes do not multiply consistently".into(),
                    ));
                }
                *slot = degree[t];
            }
        }
    }
    if table.iter().flatten().any(|&x| x == usize::MAX) {
        return Err(FusionError::Invariant(
            "some product of classes is empty".into(),
        ));
    }
    let abelian = (0..k).all(|x| (0..k).all(|y| table[x][y] == table[y][x]));
    Ok(ChainGroup {
        identity: degree[ring.unit()],
        degree,
        classes,
        table,
        abelian,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PushforwardReport {
    pub lhs: Values,
    pub rhs: Values,
}

impl PushforwardReport {
    pub fn passed(&self) -> bool {
        self.lhs.agrees(&self.rhs)
    }
}

/// Compares `tilde(nu * mu)` with `tilde nu * tilde mu` on the chain group.
pub fn chain_pushforward_check(
    ring: &FusionRing,
    nu: &Measure,
    mu: &Measure,
) -> Result<PushforwardReport> {
    let ch = chain_group(ring)?;
    let lhs = ch.pushforward(&ring.convolve(nu, mu)?);
    let rhs = ch.convolve(&ch.pushforward(nu), &ch.pushforward(mu));
    Ok(PushforwardReport { lhs, rhs })
}

/// A grading of a fusion ring by a finite abelian group with an action on
/// simples by permutations.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedFusionAction {
    ring: FusionRing,
    group: GradingGroup,
    degree: Vec<GroupElement>,
    perm: BTreeMap<GroupElement, Vec<usize>>,
}

impl GradedFusionAction {
    /// `perm` may be given on generators only; it is closed under composition.
    pub fn new(
        ring: FusionRing,
        group: GradingGroup,
        degree: Vec<GroupElement>,
        perm: BTreeMap<GroupElement, Vec<usize>>,
    ) -> Result<Self> {
        let n = ring.len();
        if degree.len() != n {
            return Err(FusionError::Invalid(format!(
                "{} degrees for {n} simples",
                degree.len()
            )));
        }
        if !group.is_finite() {
            return Err(FusionError::Invalid(
                "the acting group must be finite".into(),
            ));
        }
        for (g, p) in &perm {
            let mut seen = vec![false; n];
            if p.len() != n
                || p.iter()
                    .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
            {
                return Err(FusionError::Invalid(format!(
                    "perm at {g} is not a permutation of the simples"
                )));
            }
        }
        let mut full = BTreeMap::from([(group.zero(), (0..n).collect::<Vec<_>>())]);
        let mut frontier = vec![group.zero()];
        while let Some(a) = frontier.pop() {
            for (g, pg) in &perm {
                let b = a.add(g);
                let composed: Vec<usize> = full[&a].iter().map(|&i| pg[i]).collect();
                match full.get(&b) {
                    Some(existing) if *existing != composed => {
                        return Err(FusionError::NotInvariant(format!(
                            "perm is not a homomorphism at {b}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        full.insert(b.clone(), composed);
                        frontier.push(b);
                    }
                }
            }
        }
        let x = GradedFusionAction {
            ring,
            group,
            degree,
            perm: full,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn trivial(
        ring: FusionRing,
        group: GradingGroup,
        degree: Vec<GroupElement>,
    ) -> Result<Self> {
        Self::new(ring, group, degree, BTreeMap::new())
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn degree(&self, s: usize) -> &GroupElement {
        &self.degree[s]
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degree
    }

    /// The permutation at `g`; identity outside the generated subgroup.
    pub fn perm(&self, g: &GroupElement) -> Vec<usize> {
        self.perm
            .get(g)
            .cloned()
            .unwrap_or_else(|| (0..self.ring.len()).collect())
    }

    fn validate(&self) -> Result<()> {
        let f = &self.ring;
        let name = |i: usize| &f.names[i];
        for s in 0..f.len() {
            for r in 0..f.len() {
                for &(t, _) in f.product(s, r) {
                    if self.degree[t] != self.degree[s].add(&self.degree[r]) {
                        return Err(FusionError::Invalid(format!(
                            "degrees are not a grading: {} occurs in {} (x) {}",
                            name(t),
                            name(s),
                            name(r)
                        )));
                    }
                }
            }
        }
        if !self.degree[f.unit].is_zero() {
            return Err(FusionError::Invalid("unit is not in degree 0".into()));
        }
        for (g, p) in &self.perm {
            let bad = |what: &str, s: usize| {
                Err(FusionError::NotInvariant(format!(
                    "perm at {g} {what} at {}",
                    name(s)
                )))
            };
            if p[f.unit] != f.unit {
                return bad("moves the unit", f.unit);
            }
            for s in 0..f.len() {
                if self.degree[p[s]] != self.degree[s] {
                    return bad("changes the degree", s);
                }
                if f.dual[p[s]] != p[f.dual[s]] {
                    return bad("does not commute with duality", s);
                }
                let same_dim = match &f.dims {
                    Dims::Exact(d) => d[p[s]] == d[s],
                    Dims::Approx(d) => d[p[s]].close(&d[s]),
                };
                if !same_dim {
                    return bad("changes the dimension", s);
                }
                for r in 0..f.len() {
                    for &(t, m) in f.product(s, r) {
                        if f.mult(p[s], p[r], p[t]) != m {
                            return Err(FusionError::NotInvariant(format!(
                                "perm at {g} does not preserve {} (x) {} -> {}",
                                name(s),
                                name(r),
                                name(t)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `f o perm(g)`.
    pub fn compose(&self, f: &[CycScalar], g: &GroupElement) -> Vec<CycScalar> {
        self.perm(g).iter().map(|&i| f[i].clone()).collect()
    }
}

/// `mult'[s][r][t] = mult[s][perm(deg s)(r)][t]`, duals recomputed.
pub fn twist_fusion(x: &GradedFusionAction) -> Result<FusionRing> {
    let f = &x.ring;
    let n = f.len();
    let mut entries = Vec::new();
    for s in 0..n {
        let p = x.perm(&x.degree[s]);
        for r in 0..n {
            entries.extend(f.product(s, p[r]).iter().map(|&(t, m)| (s, r, t, m)));
        }
    }
    let dual: Vec<usize> = (0..n)
        .map(|s| x.perm(&x.degree[s].neg())[f.dual[s]])
        .collect();
    let dims = match &f.dims {
        Dims::Exact(d) => Some(d.clone()),
        Dims::Approx(_) => None,
    };
    FusionRing::new(f.names.clone(), f.unit, dual, &entries, dims)
        .map_err(|e| FusionError::NotInvariant(format!("twisted rules fail: {e}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedMarkovReport {
    pub simple: String,
    pub twisted: Values,
    /// `(P_s f) o perm(deg s)` on the original ring.
    pub expected: Values,
    /// Whether `P_s(f o perm(deg s))` also matches.
    pub literal_form_matches: bool,
}

impl TwistedMarkovReport {
    pub fn passed(&self) -> bool {
        self.twisted.agrees(&self.expected)
    }
}

fn permute(v: &Values, p: &[usize]) -> Values {
    match v {
        Values::Exact(w) => Values::Exact(p.iter().map(|&i| w[i].clone()).collect()),
        Values::Approx(w) => Values::Approx(p.iter().map(|&i| w[i]).collect()),
    }
}

/// `P^{t}_s f = (P_s f) o perm(deg s)` on the twisted ring.
pub fn twisted_markov_check(
    x: &GradedFusionAction,
    s: usize,
    f: &[CycScalar],
) -> Result<TwistedMarkovReport> {
    let twisted_ring = twist_fusion(x)?;
    let g = &x.degree[s];
    let twisted = twisted_ring.markov_apply(s, f);
    let expected = permute(&x.ring.markov_apply(s, f), &x.perm(g));
    let literal = x.ring.markov_apply(s, &x.compose(f, g));
    Ok(TwistedMarkovReport {
        simple: x.ring.names[s].clone(),
        literal_form_matches: twisted.agrees(&literal),
        twisted,
        expected,
    })
}

/// Fusion rules produced on demand, for rings that may be infinite.
pub trait FusionRules {
    fn unit(&self) -> usize;
    fn product(&self, s: usize, r: usize) -> Vec<(usize, u32)>;
    fn name(&self, s: usize) -> String;
    fn dual(&self, s: usize) -> usize;
    /// Declared dimension, if any.
    fn dim(&self, s: usize) -> Option<f64>;
}

impl FusionRules for FusionRing {
    fn unit(&self) -> usize {
        self.unit
    }
    fn product(&self, s: usize, r: usize) -> Vec<(usize, u32)> {
        FusionRing::product(self, s, r).to_vec()
    }
    fn name(&self, s: usize) -> String {
        self.names[s].clone()
    }
    fn dual(&self, s: usize) -> usize {
        self.dual[s]
    }
    fn dim(&self, s: usize) -> Option<f64> {
        Some(self.dims_values().to_f64()[s])
    }
}

/// `U_j (x) U_k = U_{|j-k|} + U_{|j-k|+2} + ... + U_{j+k}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Su2Rules {
    /// Overrides `d(U_1)`; the rest follow the Chebyshev recursion.
    pub declared_fundamental_dim: Option<f64>,
}

impl FusionRules for Su2Rules {
    fn unit(&self) -> usize {
        0
    }
    fn product(&self, j: usize, k: usize) -> Vec<(usize, u32)> {
        (j.abs_diff(k)..=j + k).step_by(2).map(|t| (t, 1)).collect()
    }
    fn name(&self, s: usize) -> String {
        format!("U{s}")
    }
    fn dual(&self, s: usize) -> usize {
        s
    }
    fn dim(&self, s: usize) -> Option<f64> {
        let d1 = self.declared_fundamental_dim.unwrap_or(2.0);
        let (mut a, mut b) = (1.0, d1);
        for _ in 0..s {
            (a, b) = (b, d1 * b - a);
        }
        Some(a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub object: String,
    pub ball_size: usize,
    /// `(ball size, lower bound for ||Gamma_X||)`, increasing in both.
    pub lower_bounds: Vec<(usize, f64)>,
    pub estimate: f64,
    /// Schur bound `sqrt(max row sum * max column sum)` over the rows and
    /// columns of simples in the ball, or the estimate itself when the ball is
    /// closed. It bounds `||Gamma_X||` when those maxima are global, as for
    /// rules of bounded degree like SU(2).
    pub upper_bound: f64,
    /// No product left the ball, so the truncated matrix is the whole operator.
    pub closed: bool,
    pub tol: f64,
    pub declared_dim: Option<f64>,
}

impl SpectralReport {
    pub fn converged(&self) -> bool {
        self.upper_bound - self.estimate <= self.tol
    }

    /// `d(X) - ||Gamma_X||`, using the upper bound.
    pub fn dimension_gap(&self) -> Option<f64> {
        self.declared_dim.map(|d| d - self.upper_bound)
    }

    /// `d(X) = ||Gamma_X||` within tolerance.
    pub fn amenable(&self) -> Option<bool> {
        self.declared_dim
            .map(|d| self.converged() && (d - self.estimate).abs() <= self.tol)
    }
}

/// Sparse square matrix in row lists.
struct Sparse {
    rows: Vec<Vec<(usize, f64)>>,
}

impl Sparse {
    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a * v[j]).sum())
            .collect()
    }

    fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                out[j] += a * v[i];
            }
        }
        out
    }
}

/// Number of eigenvalues of the symmetric tridiagonal `(alpha, beta)` below `x`.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..alpha.len() {
        let b2 = if i == 0 {
            0.0
        } else {
            beta[i - 1] * beta[i - 1]
        };
        q = alpha[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (alpha[i].abs() + x.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn largest_tridiagonal_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let n = alpha.len();
    let mut hi = (0..n)
        .map(|i| {
            let l = if i > 0 { beta[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { beta[i].abs() } else { 0.0 };
            alpha[i] + l + r
        })
        .fold(f64::MIN, f64::max);
    let mut lo = (0..n)
        .map(|i| {
            let l = if i > 0 { beta[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { beta[i].abs() } else { 0.0 };
            alpha[i] - l - r
        })
        .fold(f64::MAX, f64::min);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alpha, beta, mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Largest eigenvalue of `M^T M` by Lanczos from a random start, as `||M||`.
fn lanczos_norm(m: &Sparse, rng: &mut ChaCha8Rng) -> f64 {
    let n = m.rows.len();
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut prev = vec![0.0; n];
    let mut beta_prev = 0.0;
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for _ in 0..n {
        let mut w = m.apply_transpose(&m.apply(&v));
        let a: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
        for i in 0..n {
            w[i] -= a * v[i] + beta_prev * prev[i];
        }
        alpha.push(a);
        let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if b < 1e-13 {
            break;
        }
        beta.push(b);
        prev = std::mem::replace(&mut v, w.into_iter().map(|x| x / b).collect());
        beta_prev = b;
    }
    beta.truncate(alpha.len().saturating_sub(1));
    largest_tridiagonal_eigenvalue(&alpha, &beta)
        .max(0.0)
        .sqrt()
}

/// Estimates `||Gamma_X||` on the ball of `truncation` simples reached from the
/// unit by tensoring with `X`.
pub fn spectral_norm_estimate(
    rules: &dyn FusionRules,
    x: &[(usize, u32)],
    truncation: usize,
    tol: f64,
    seed: u64,
) -> Result<SpectralReport> {
    if x.is_empty() || truncation == 0 {
        return Err(FusionError::Invalid("empty object or truncation".into()));
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::from([(rules.unit(), 0)]);
    let mut order = vec![rules.unit()];
    let mut queue = VecDeque::from([rules.unit()]);
    let mut columns: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut closed = true;
    while let Some(t) = queue.pop_front() {
        let mut col: BTreeMap<usize, u64> = BTreeMap::new();
        for &(a, k) in x {
            for (s, m) in rules.product(a, t) {
                *col.entry(s).or_default() += u64::from(k * m);
            }
        }
        for &s in col.keys() {
            if let std::collections::btree_map::Entry::Vacant(e) = index.entry(s) {
                if order.len() < truncation {
                    e.insert(order.len());
                    order.push(s);
                    queue.push_back(s);
                } else {
                    closed = false;
                }
            }
        }
        columns.push(col.into_iter().collect());
    }
    let n = order.len();
    let mut rows = vec![Vec::new(); n];
    for (j, col) in columns.iter().enumerate() {
        for &(s, m) in col {
            if let Some(&i) = index.get(&s) {
                rows[i].push((j, m as f64));
            }
        }
    }
    // Full row and column sums of the simples in the ball, including entries
    // outside it; row s of Gamma_X is column s of Gamma_{dual X}.
    let total = |obj: &[(usize, u32)], t: usize| -> f64 {
        obj.iter()
            .flat_map(|&(a, k)| {
                rules
                    .product(a, t)
                    .into_iter()
                    .map(move |(_, m)| f64::from(k * m))
            })
            .sum()
    };
    let x_dual: Vec<(usize, u32)> = x.iter().map(|&(a, k)| (rules.dual(a), k)).collect();
    let col_max = order.iter().map(|&t| total(x, t)).fold(0.0, f64::max);
    let row_max = order.iter().map(|&s| total(&x_dual, s)).fold(0.0, f64::max);
    let upper_bound = (row_max * col_max).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes: Vec<usize> =
        std::iter::successors(Some(n), |&k| (k > 64).then_some(k / 2)).collect();
    sizes.reverse();
    let mut lower_bounds = Vec::new();
    let mut best: f64 = 0.0;
    for k in sizes {
        let sub = Sparse {
            rows: rows[..k]
                .iter()
                .map(|r| r.iter().copied().filter(|&(j, _)| j < k).collect())
                .collect(),
        };
        best = best.max(lanczos_norm(&sub, &mut rng).min(upper_bound));
        lower_bounds.push((k, best));
    }
    let upper_bound = if closed { best } else { upper_bound };
    let declared_dim = x
        .iter()
        .map(|&(a, k)| rules.dim(a).map(|d| d * f64::from(k)))
        .sum::<Option<f64>>();
    let object = x
        .iter()
        .map(|&(a, k)| {
            if k == 1 {
                rules.name(a)
            } else {
                format!("{k} {}", rules.name(a))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(SpectralReport {
        object,
        ball_size: n,
        lower_bounds,
        estimate: best,
        upper_bound,
        closed,
        tol,
        declared_dim,
    })
}

/// Built-in rings.
pub mod builtin {
    use super::*;

    /// Group ring of a finite abelian group, simples named by their components.
    pub fn pointed(group: &GradingGroup) -> Result<FusionRing> {
        let elems = group.elements()?;
        let idx: BTreeMap<&GroupElement, usize> =
            elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut entries = Vec::new();
        for (s, a) in elems.iter().enumerate() {
            for (r, b) in elems.iter().enumerate() {
                entries.push((s, r, idx[&a.add(b)], 1));
            }
        }
        let dual = elems.iter().map(|g| idx[&g.neg()]).collect();
        let names = elems.iter().map(|g| format!("g{g}")).collect();
        FusionRing::new(
            names,
            idx[&group.zero()],
            dual,
            &entries,
            Some(vec![CycScalar::one(); elems.len()]),
        )
    }

    /// `1, eps, sigma` with `sigma^2 = 1 + eps` and `d(sigma) = sqrt 2`.
    pub fn ising() -> FusionRing {
        let sqrt2 = CycScalar::parse("cyc(8; 0,1,0,-1)").expect("valid literal");
        let entries = [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (0, 2, 2, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 1),
            (1, 2, 2, 1),
            (2, 0, 2, 1),
            (2, 1, 2, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
        ];
        let names = ["1", "eps", "sigma"].map(String::from).to_vec();
        FusionRing::new(
            names,
            0,
            vec![0, 1, 2],
            &entries,
            Some(vec![CycScalar::one(), CycScalar::one(), sqrt2]),
        )
        .expect("Ising rules are valid")
    }

    /// `1, sgn, V` with `V^2 = 1 + sgn + V`.
    pub fn rep_s3() -> FusionRing {
        let entries = [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (0, 2, 2, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 1),
            (1, 2, 2, 1),
            (2, 0, 2, 1),
            (2, 1, 2, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
            (2, 2, 2, 1),
        ];
        let names = ["1", "sgn", "V"].map(String::from).to_vec();
        let d = [1, 1, 2].map(CycScalar::from_int).to_vec();
        FusionRing::new(names, 0, vec![0, 1, 2], &entries, Some(d))
            .expect("Rep(S3) rules are valid")
    }

    /// `Z/n` graded mod `k` (with `k | n`) and acted on by `x -> u x`.
    pub fn pointed_cyclic_action(n: u32, k: u32, u: i64) -> Result<GradedFusionAction> {
        let zn = GradingGroup::cyclic(n);
        let ring = pointed(&zn)?;
        let gamma = GradingGroup::cyclic(k);
        let elems = zn.elements()?;
        let degree = elems
            .iter()
            .map(|g| gamma.element(&[g.comps()[0]]))
            .collect::<std::result::Result<_, _>>()?;
        let idx: BTreeMap<&GroupElement, usize> =
            elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let perm = elems.iter().map(|g| idx[&g.scale(u)]).collect();
        GradedFusionAction::new(
            ring,
            gamma.clone(),
            degree,
            BTreeMap::from([(gamma.element(&[1])?, perm)]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    fn q(n: i64, d: i64) -> CycScalar {
        CycScalar::from_ratio(n, d)
    }

    #[test]
    fn chain_groups() {
        let ch = chain_group(&ising()).unwrap();
        assert_eq!(ch.describe(), "Z/2");
        assert_eq!(ch.degree, [0, 0, 1]);
        assert_eq!(chain_group(&rep_s3()).unwrap().describe(), "trivial");
        let z6 = pointed(&GradingGroup::cyclic(6)).unwrap();
        assert_eq!(chain_group(&z6).unwrap().describe(), "Z/6");
        let z2z6 = pointed(&GradingGroup::new(vec![2, 6])).unwrap();
        assert_eq!(
            chain_group(&z2z6).unwrap().abelian_invariants(),
            Some(vec![2, 6])
        );
        let v4 = pointed(&GradingGroup::new(vec![2, 2])).unwrap();
        assert_eq!(chain_group(&v4).unwrap().describe(), "Z/2 x Z/2");
        let z8 = pointed(&GradingGroup::cyclic(8)).unwrap();
        assert_eq!(
            chain_group(&z8).unwrap().abelian_invariants(),
            Some(vec![8])
        );
    }

    #[test]
    fn ising_markov() {
        let r = ising();
        let mut f = vec![CycScalar::zero(); 3];
        f[0] = CycScalar::one();
        assert_eq!(
            r.markov_apply(2, &f),
            Values::Exact(vec![CycScalar::zero(), CycScalar::zero(), q(1, 2)])
        );
        assert!(r.row_stochastic().is_ok());
        let s = Measure::point(3, 2);
        let c = r.convolve(&s, &s).unwrap();
        assert_eq!(
            c.values(),
            &Values::Exact(vec![q(1, 2), q(1, 2), CycScalar::zero()])
        );
        let rep = chain_pushforward_check(&r, &s, &s).unwrap();
        assert!(rep.passed());
        assert_eq!(
            rep.lhs,
            Values::Exact(vec![CycScalar::one(), CycScalar::zero()])
        );
    }

    #[test]
    fn pointed_markov_is_translation() {
        let r = pointed(&GradingGroup::cyclic(5)).unwrap();
        let f: Vec<CycScalar> = (0..5).map(|i| CycScalar::from_int(i * i)).collect();
        let out = r.markov_apply(2, &f);
        let expected: Vec<CycScalar> = (0..5).map(|i| f[(i + 2) % 5].clone()).collect();
        assert_eq!(out, Values::Exact(expected));
        let id = r.markov_apply(0, &f);
        assert_eq!(id, Values::Exact(f));
    }

    #[test]
    fn composition_order() {
        // P_s P_u = P_{delta_u * delta_s}.
        let r = pointed(&GradingGroup::cyclic(5)).unwrap();
        let f = Values::Exact((0..5).map(|i| CycScalar::from_int(i * i + 1)).collect());
        let (ds, du) = (Measure::point(5, 1), Measure::point(5, 3));
        let lhs = r.markov_measure(&ds, &r.markov_measure(&du, &f));
        let rhs = r.markov_measure(&r.convolve(&du, &ds).unwrap(), &f);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn z4_negation_twist_is_klein() {
        let x = pointed_cyclic_action(4, 2, -1).unwrap();
        let t = twist_fusion(&x).unwrap();
        assert_eq!(chain_group(&t).unwrap().describe(), "Z/2 x Z/2");
        assert_eq!(t.duals(), &[0, 1, 2, 3]);
        let f: Vec<CycScalar> = (0..4).map(|i| CycScalar::from_int(3 * i + 1)).collect();
        let rep = twisted_markov_check(&x, 1, &f).unwrap();
        assert!(rep.passed());
        assert!(!rep.literal_form_matches);
    }

    #[test]
    fn double_twist_returns() {
        let x = pointed_cyclic_action(8, 2, 3).unwrap();
        let t = twist_fusion(&x).unwrap();
        let gamma = x.group().clone();
        let inv = (0..8)
            .map(|i| {
                x.perm(&gamma.element(&[1]).unwrap())
                    .iter()
                    .position(|&p| p == i)
                    .unwrap()
            })
            .collect();
        let back = GradedFusionAction::new(
            t,
            gamma.clone(),
            x.degrees().to_vec(),
            BTreeMap::from([(gamma.element(&[1]).unwrap(), inv)]),
        )
        .unwrap();
        assert_eq!(twist_fusion(&back).unwrap().entries(), x.ring().entries());
    }

    #[test]
    fn degree_changing_perm_rejected() {
        let err = pointed_cyclic_action(4, 4, -1).unwrap_err();
        assert!(matches!(err, FusionError::NotInvariant(_)), "{err}");
        assert!(err.to_string().contains("changes the degree"));
    }

    #[test]
    fn bad_tables_rejected() {
        let entries = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)];
        let err = FusionRing::new(vec!["1".into(), "x".into()], 0, vec![0, 1], &entries, None)
            .unwrap_err();
        assert!(err.to_string().contains("unit occurs"));
    }

    #[test]
    fn approximate_dims() {
        // Fibonacci: tau^2 = 1 + tau.
        let entries = [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 1),
            (1, 1, 1, 1),
        ];
        let r = FusionRing::new(
            vec!["1".into(), "tau".into()],
            0,
            vec![0, 1],
            &entries,
            None,
        )
        .unwrap();
        let Dims::Approx(d) = r.dims() else { panic!() };
        assert!((d[1] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(r.row_stochastic().is_ok());
        assert!(r.dimension_eigen_check(&[(1, 1)]));
    }

    #[test]
    fn ball_norm_of_finite_ring() {
        let r = rep_s3();
        let rep = spectral_norm_estimate(&r, &[(2, 1)], 10, 1e-9, 1).unwrap();
        assert!((rep.estimate - 2.0).abs() < 1e-9);
        assert!(r.dimension_eigen_check(&[(2, 1)]));
    }

    #[test]
    fn su2_small_truncation() {
        let rep = spectral_norm_estimate(&Su2Rules::default(), &[(1, 1)], 100, 1e-6, 7).unwrap();
        let exact = 2.0 * (std::f64::consts::PI / 101.0).cos();
        assert!(
            (rep.estimate - exact).abs() < 1e-9,
            "{} vs {exact}",
            rep.estimate
        );
        assert!(rep.lower_bounds.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(Su2Rules::default().dim(3), Some(4.0));
    }
}
