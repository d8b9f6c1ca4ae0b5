//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis of `zeta_N` modulo the cyclotomic
//! polynomial `Phi_N`, always reduced to the smallest conductor whose field
//! contains them. Two equal field elements therefore have identical
//! `(conductor, coeffs)`, so derived equality and hashing are field equality.

use std::collections::HashMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor must be positive, got {0}")]
    InvalidConductor(i64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the monic cyclotomic polynomial `Phi_n`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_int_div(&num, &den);
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Reduces a polynomial in `zeta_n` modulo `Phi_n`; output has length `phi(n)`.
fn reduce_mod_phi(mut poly: Vec<BigRational>, n: u32) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    if poly.len() > d {
        for i in (d..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    let t = &c * BigRational::from_integer(BigInt::from(pj));
                    poly[i - d + j] -= t;
                }
            }
        }
    }
    poly.resize(d, BigRational::zero());
    poly
}

/// Per-conductor tables. Subfields of `Q(zeta_n)` are coordinate subspaces of
/// the tensor product of the prime-power power bases, so canonicalization
/// moves into that basis, reads the minimal conductor off the support, and
/// moves back.
struct Conductor {
    phi: usize,
    /// `x^e mod Phi_n` for `0 <= e < n`.
    powers: Vec<Vec<(usize, i64)>>,
    /// Prime-power factors `(p, k, p^k, phi(p^k))`.
    factors: Vec<(u32, u32, u32, usize)>,
    /// `zeta_n^j` for `j < phi` in the tensor basis (flat mixed-radix index).
    to_tensor: Vec<Vec<(usize, i64)>>,
}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn conductor_data(n: u32) -> Arc<Conductor> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Conductor>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&n) {
        return d.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(
            cur.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        );
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for (i, x) in next.iter_mut().enumerate() {
                *x -= top * poly[i];
            }
        }
        cur = next;
    }
    let factors: Vec<(u32, u32, u32, usize)> = factorize(n)
        .into_iter()
        .map(|(p, k)| {
            let q = p.pow(k);
            (p, k, q, euler_phi(q) as usize)
        })
        .collect();
    let to_tensor = if factors.len() <= 1 {
        (0..phi).map(|j| vec![(j, 1)]).collect()
    } else {
        let parts: Vec<(Arc<Conductor>, u32)> = factors
            .iter()
            .map(|&(_, _, q, _)| {
                let cofactor = (n / q) % q;
                let u = (1..q).find(|u| (u * cofactor) % q == 1).expect("coprime");
                (conductor_data(q), u)
            })
            .collect();
        (0..phi)
            .map(|j| {
                let mut acc: Vec<(usize, i64)> = vec![(0, 1)];
                for ((data, u), &(_, _, q, phq)) in parts.iter().zip(&factors) {
                    let e = ((j as u64 * *u as u64) % q as u64) as usize;
                    let mut next = Vec::new();
                    for &(idx, c) in &acc {
                        for &(i, d) in &data.powers[e] {
                            next.push((idx * phq + i, c * d));
                        }
                    }
                    acc = next;
                }
                acc
            })
            .collect()
    };
    let d = Arc::new(Conductor {
        phi,
        powers,
        factors,
        to_tensor,
    });
    cache.lock().unwrap().insert(n, d.clone());
    d
}

/// An exact element of the cyclotomic field `Q(zeta_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycScalar {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    /// Builds an element from power-basis coordinates of any length; the
    /// polynomial is reduced modulo `Phi_N` and then canonicalized.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self, ScalarError> {
        if conductor == 0 {
            return Err(ScalarError::InvalidConductor(0));
        }
        Ok(Self::canonical(
            conductor,
            reduce_mod_phi(coeffs, conductor),
        ))
    }

    /// `zeta_N^k`.
    pub fn root_of_unity(k: i64, conductor: u32) -> Result<Self, ScalarError> {
        if conductor == 0 {
            return Err(ScalarError::InvalidConductor(0));
        }
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_coeffs(conductor, poly)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn canonical(conductor: u32, coeffs: Vec<BigRational>) -> Self {
        if conductor == 1 || coeffs.iter().skip(1).all(Zero::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap_or_else(BigRational::zero);
            return CycScalar {
                conductor: 1,
                coeffs: vec![c0],
            };
        }
        let (nums, den) = to_integers(&coeffs);
        Self::canonical_int(conductor, nums, den)
    }

    /// Canonical form of `nums / den` in the power basis of `zeta_conductor`.
    fn canonical_int(conductor: u32, nums: Vec<BigInt>, den: BigInt) -> Self {
        let build = |cond: u32, v: Vec<BigInt>| CycScalar {
            conductor: cond,
            coeffs: v
                .into_iter()
                .map(|n| BigRational::new(n, den.clone()))
                .collect(),
        };
        if conductor == 1 || nums.iter().skip(1).all(Zero::is_zero) {
            let c0 = nums.into_iter().next().unwrap_or_else(BigInt::zero);
            return build(1, vec![c0]);
        }
        let data = conductor_data(conductor);
        let mut tensor = vec![BigInt::zero(); data.phi];
        for (j, c) in nums.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(idx, k) in &data.to_tensor[j] {
                tensor[idx] += c * k;
            }
        }
        let support: Vec<usize> = (0..data.phi).filter(|&i| !tensor[i].is_zero()).collect();
        let mut strides = vec![1usize; data.factors.len()];
        for f in (0..data.factors.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * data.factors[f + 1].3;
        }
        let digit = |idx: usize, f: usize| (idx / strides[f]) % data.factors[f].3;
        // For each prime, the smallest level whose subfield holds every digit.
        let mut levels = Vec::with_capacity(data.factors.len());
        let mut m = 1u32;
        for (f, &(p, k, _, _)) in data.factors.iter().enumerate() {
            let g = support.iter().fold(0usize, |g, &idx| g.gcd(&digit(idx, f)));
            let l = if g == 0 {
                0
            } else {
                let mut v = 0;
                let mut g = g;
                while g % p as usize == 0 {
                    g /= p as usize;
                    v += 1;
                }
                k.saturating_sub(v)
            };
            levels.push(l);
            m *= p.pow(l);
        }
        if m == conductor {
            return build(conductor, nums);
        }
        let target = conductor_data(m);
        let mut out = vec![BigInt::zero(); target.phi];
        for &idx in &support {
            let mut e = 0u64;
            for (f, &(p, k, _, _)) in data.factors.iter().enumerate() {
                let l = levels[f];
                let i = digit(idx, f) as u64 / p.pow(k - l) as u64;
                e += i * (m / p.pow(l)) as u64;
            }
            let e = (e % m as u64) as usize;
            for &(i, k) in &target.powers[e] {
                out[i] += &tensor[idx] * k;
            }
        }
        build(m, out)
    }

    fn lift(&self, target: u32) -> Vec<BigRational> {
        if target == self.conductor {
            return self.coeffs.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        reduce_mod_phi(poly, target)
    }

    fn common(&self, other: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let l = self.conductor.lcm(&other.conductor);
        (l, self.lift(l), other.lift(l))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            return Self::from_rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let (l, a, b) = self.common(other);
        let sum = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Self::canonical(l, sum)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            return Self::from_rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.conductor == 1 {
            let s = &self.coeffs[0];
            return CycScalar {
                conductor: other.conductor,
                coeffs: other.coeffs.iter().map(|c| c * s).collect(),
            };
        }
        if other.conductor == 1 {
            let s = &other.coeffs[0];
            return CycScalar {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            };
        }
        let (l, a, b) = self.common(other);
        let (a, da) = to_integers(&a);
        let (b, db) = to_integers(&b);
        let phi = cyclotomic_polynomial(l);
        let d = phi.len() - 1;
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for i in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    prod[i - d + j] -= &c * pj;
                }
            }
        }
        prod.truncate(d);
        Self::canonical_int(l, prod, da * db)
    }

    pub fn neg_ref(&self) -> Self {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        // Solve (multiplication by self) * y = 1 in the power basis.
        let n = self.coeffs.len();
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let mut poly = vec![BigRational::zero(); j + n];
            for (k, c) in self.coeffs.iter().enumerate() {
                poly[j + k] = c.clone();
            }
            columns.push(reduce_mod_phi(poly, self.conductor));
        }
        let matrix: Vec<Vec<BigRational>> = (0..n)
            .map(|row| (0..n).map(|col| columns[col][row].clone()).collect())
            .collect();
        let inverse = crate::linalg::invert_rational(&matrix).ok_or(ScalarError::DivisionByZero)?;
        let y = (0..n).map(|row| inverse[row][0].clone()).collect();
        Ok(Self::canonical(self.conductor, y))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, exp: i64) -> Result<Self, ScalarError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&sq);
            }
            sq = sq.mul_ref(&sq);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        Self::canonical(self.conductor, reduce_mod_phi(poly, self.conductor))
    }

    /// Value under the embedding `zeta_N -> exp(2 pi i / N)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
                (re + v * ang.cos(), im + v * ang.sin())
            })
    }

    /// Real part of the principal complex embedding.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().0
    }

    /// Multiplicative order when this is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let bound = 2u32.lcm(&self.conductor);
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul_ref(self);
        }
        None
    }

    /// Parses `cyc(N; c_0, c_1, ...)` or a plain rational `a/b`.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        let t = text.trim().replace('\u{2212}', "-");
        let err = || ScalarError::Parse(text.trim().to_string());
        if let Some(rest) = t.strip_prefix("cyc(") {
            let body = rest.strip_suffix(')').ok_or_else(err)?;
            let (n, cs) = body.split_once(';').ok_or_else(err)?;
            let n: u32 = n.trim().parse().map_err(|_| err())?;
            if n == 0 {
                return Err(ScalarError::InvalidConductor(0));
            }
            let coeffs = cs
                .split(',')
                .map(parse_rational)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(err)?;
            return Self::from_coeffs(n, coeffs);
        }
        parse_rational(&t).map(Self::from_rational).ok_or_else(err)
    }
}

/// Common-denominator form `(numerators, denominator)`.
fn to_integers(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (nums, den)
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "cyc({}; {})", self.conductor, parts.join(", "))
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Default for CycScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for CycScalar {
    fn from(v: BigRational) -> Self {
        Self::from_rational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                $f(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                $f(&self, &rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                $f(&self, rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycScalar, b: &CycScalar| a.add_ref(b));
binop!(Sub, sub, |a: &CycScalar, b: &CycScalar| a
    .add_ref(&b.neg_ref()));
binop!(Mul, mul, |a: &CycScalar, b: &CycScalar| a.mul_ref(b));

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.neg_ref()
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.neg_ref()
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Sum for CycScalar {
    fn sum<I: Iterator<Item = CycScalar>>(iter: I) -> Self {
        iter.fold(CycScalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a CycScalar> for CycScalar {
    fn sum<I: Iterator<Item = &'a CycScalar>>(iter: I) -> Self {
        iter.fold(CycScalar::zero(), |a, b| a + b)
    }
}

/// Builds `zeta_N^k` in canonical form.
pub fn cyc_make(k: i64, conductor: i64) -> Result<CycScalar, ScalarError> {
    if conductor < 1 {
        return Err(ScalarError::InvalidConductor(conductor));
    }
    CycScalar::root_of_unity(k, conductor as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
}

/// Field arithmetic; unary operations ignore `b`.
pub fn cyc_arith(a: &CycScalar, b: &CycScalar, op: ArithOp) -> Result<CycScalar, ScalarError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Inv => a.inv(),
        ArithOp::Neg => Ok(-a),
    }
}

/// Dense rational polynomial (power-series container).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = fmt_rational(&c.abs());
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*t")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: multiply polynomials modulo `x^N - 1`, then test
    /// equality by reducing the difference with schoolbook division by `Phi_N`
    /// computed from the product formula over primitive roots.
    fn oracle_equal_mod_phi(n: u32, a: &[i64], b: &[i64]) -> bool {
        let mut diff = vec![0i64; n as usize];
        for (k, &v) in a.iter().enumerate() {
            diff[k % n as usize] += v;
        }
        for (k, &v) in b.iter().enumerate() {
            diff[k % n as usize] -= v;
        }
        // Evaluate at every primitive n-th root numerically.
        (1..=n).filter(|k| k.gcd(&n) == 1).all(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (e, &c) in diff.iter().enumerate() {
                let ang = 2.0 * std::f64::consts::PI * (k as f64) * (e as f64) / n as f64;
                re += c as f64 * ang.cos();
                im += c as f64 * ang.sin();
            }
            re.abs() < 1e-9 && im.abs() < 1e-9
        })
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n) as usize);
        }
    }

    #[test]
    fn make_examples() {
        assert_eq!(cyc_make(0, 1).unwrap(), CycScalar::one());
        assert_eq!(cyc_make(1, 2).unwrap(), CycScalar::from_int(-1));
        let i = cyc_make(1, 4).unwrap();
        assert_eq!(i.conductor(), 4);
        assert_eq!(&i * &i, CycScalar::from_int(-1));
        // x * x = x^2 must equal -1 modulo Phi_4 by the oracle.
        assert!(oracle_equal_mod_phi(4, &[0, 0, 1], &[-1]));
        assert!(cyc_make(1, 0).is_err());
    }

    #[test]
    fn arith_examples() {
        let z4 = cyc_make(1, 4).unwrap();
        assert_eq!(
            cyc_arith(&z4, &z4, ArithOp::Mul).unwrap(),
            CycScalar::from_int(-1)
        );
        let z3 = cyc_make(1, 3).unwrap();
        let z3sq = cyc_make(2, 3).unwrap();
        assert!(oracle_equal_mod_phi(3, &[0, 1, 1], &[-1]));
        assert_eq!(
            cyc_arith(&z3, &z3sq, ArithOp::Add).unwrap(),
            CycScalar::from_int(-1)
        );
        assert_eq!(CycScalar::zero().inv(), Err(ScalarError::DivisionByZero));
        let x = &z3 + &CycScalar::from_int(2);
        assert_eq!(&x * &x.inv().unwrap(), CycScalar::one());
    }

    #[test]
    fn conductor_minimization() {
        // zeta_8^2 = i lives in Q(i).
        assert_eq!(cyc_make(2, 8).unwrap(), cyc_make(1, 4).unwrap());
        // zeta_6 = -zeta_3^2.
        assert_eq!(cyc_make(1, 6).unwrap(), -cyc_make(2, 3).unwrap());
        // sqrt 2 = zeta_8 - zeta_8^3 squares to 2.
        let sqrt2 = cyc_make(1, 8).unwrap() - cyc_make(3, 8).unwrap();
        assert_eq!(sqrt2.conductor(), 8);
        assert_eq!(&sqrt2 * &sqrt2, CycScalar::from_int(2));
        // i * (-i) mixed with zeta_3 stays exact.
        let a = cyc_make(1, 4).unwrap() * cyc_make(1, 3).unwrap();
        assert_eq!(a.conductor(), 12);
        assert_eq!(a.pow(12).unwrap(), CycScalar::one());
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "-1", "3/4", "cyc(8; 0, 1, 0, -1)", "cyc(4; 1/2, -3)"] {
            let x = CycScalar::parse(s).unwrap();
            assert_eq!(CycScalar::parse(&x.to_string()).unwrap(), x);
        }
        assert_eq!(
            CycScalar::parse("\u{2212}1").unwrap(),
            CycScalar::from_int(-1)
        );
        assert!(CycScalar::parse("cyc(4 0 1)").is_err());
        assert!(CycScalar::parse("1/0").is_err());
        // cyc(2; 5) = 5 after reduction to the minimal conductor.
        assert_eq!(CycScalar::parse("cyc(2; 5)").unwrap().to_string(), "5");
    }

    #[test]
    fn roots_of_unity_orders() {
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                let z = cyc_make(k, n as i64).unwrap();
                assert_eq!(z.pow(n as i64).unwrap(), CycScalar::one());
                if (k as u32).gcd(&n) == 1 {
                    for m in 1..n {
                        assert_ne!(
                            z.pow(m as i64).unwrap(),
                            CycScalar::one(),
                            "k={k} n={n} m={m}"
                        );
                    }
                    assert_eq!(z.root_of_unity_order(), Some(n));
                }
            }
        }
        assert_eq!(CycScalar::from_int(2).root_of_unity_order(), None);
    }

    #[test]
    fn conjugation_and_embedding() {
        let z = cyc_make(1, 5).unwrap();
        assert_eq!(&z * &z.conj(), CycScalar::one());
        let (re, im) = cyc_make(1, 8).unwrap().to_complex();
        assert!((re - 0.5f64.sqrt()).abs() < 1e-12 && (im - 0.5f64.sqrt()).abs() < 1e-12);
    }

    use proptest::prelude::*;

    fn arb_scalar() -> impl Strategy<Value = CycScalar> {
        (
            1u32..=24,
            proptest::collection::vec(-4i64..=4, 1..6),
            1i64..4,
        )
            .prop_map(|(n, cs, d)| {
                let coeffs = cs
                    .into_iter()
                    .map(|c| BigRational::new(c.into(), d.into()))
                    .collect();
                CycScalar::from_coeffs(n, coeffs).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), CycScalar::one());
            }
        }

        #[test]
        fn canonicalization_idempotent(a in arb_scalar()) {
            let again = CycScalar::from_coeffs(a.conductor(), a.coeffs().to_vec()).unwrap();
            prop_assert_eq!(again, a);
        }
    }
}
