//! Finite subgroups of `GL(2)` over cyclotomic scalars and the admissibility
//! checks used for quantum subgroups of `SL_q(2)`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalars::CycScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatGroupError {
    #[error("matrix {0} is not invertible")]
    Singular(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group closure exceeded {0} elements")]
    TooLarge(usize),
    #[error("empty matrix list")]
    Empty,
}

pub type Result<T> = std::result::Result<T, MatGroupError>;

/// A 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [CycScalar; 4]);

impl Mat2 {
    pub fn new(a: CycScalar, b: CycScalar, c: CycScalar, d: CycScalar) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn identity() -> Self {
        Self::scalar(CycScalar::one())
    }

    pub fn scalar(s: CycScalar) -> Self {
        Mat2([s.clone(), CycScalar::zero(), CycScalar::zero(), s])
    }

    pub fn diag(a: CycScalar, d: CycScalar) -> Self {
        Mat2([a, CycScalar::zero(), CycScalar::zero(), d])
    }

    pub fn antidiag(b: CycScalar, c: CycScalar) -> Self {
        Mat2([CycScalar::zero(), b, c, CycScalar::zero()])
    }

    pub fn entry(&self, i: usize) -> &CycScalar {
        &self.0[i]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn det(&self) -> CycScalar {
        let [a, b, c, d] = &self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> CycScalar {
        &self.0[0] + &self.0[3]
    }

    pub fn inv(&self) -> Option<Mat2> {
        let det = self.det().inv().ok()?;
        let [a, b, c, d] = &self.0;
        Some(Mat2([d * &det, -(b * &det), -(c * &det), a * &det]))
    }

    pub fn scale(&self, s: &CycScalar) -> Mat2 {
        Mat2(self.0.clone().map(|x| &x * s))
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[1].is_zero() && self.0[2].is_zero()
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.0[0].is_zero() && self.0[3].is_zero()
    }

    /// `(a, b; c, d) -> (a, q^{-1} b; q c, d)`.
    pub fn alpha(&self, q: &CycScalar, qi: &CycScalar) -> Mat2 {
        let [a, b, c, d] = &self.0;
        Mat2([a.clone(), b * qi, c * q, d.clone()])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite matrix group stored as its element list, identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
}

const MAX_ORDER: usize = 10_000;

impl FiniteMatrixGroup {
    /// Closure of `gens` under multiplication.
    pub fn generated_by(gens: &[Mat2]) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.inv().is_none() {
                return Err(MatGroupError::Singular(i));
            }
        }
        let mut elements = vec![Mat2::identity()];
        let mut index: HashMap<Mat2, usize> = HashMap::from([(Mat2::identity(), 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier].clone();
            frontier += 1;
            for g in gens {
                let y = x.mul(g);
                if !index.contains_key(&y) {
                    if elements.len() >= MAX_ORDER {
                        return Err(MatGroupError::TooLarge(MAX_ORDER));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        Ok(FiniteMatrixGroup { elements, index })
    }

    /// Validates that `list` is closed under products and inverses.
    pub fn from_elements(list: Vec<Mat2>) -> Result<Self> {
        if list.is_empty() {
            return Err(MatGroupError::Empty);
        }
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for (i, m) in list.into_iter().enumerate() {
            if m.inv().is_none() {
                return Err(MatGroupError::Singular(i));
            }
            if !index.contains_key(&m) {
                index.insert(m.clone(), elements.len());
                elements.push(m);
            }
        }
        let id = Mat2::identity();
        let Some(&pos) = index.get(&id) else {
            return Err(MatGroupError::NotAGroup("identity is missing".into()));
        };
        elements.swap(0, pos);
        let index: HashMap<Mat2, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        for x in &elements {
            for y in &elements {
                let xy = x.mul(y);
                if !index.contains_key(&xy) {
                    return Err(MatGroupError::NotAGroup(format!(
                        "{x} * {y} = {xy} is not in the list"
                    )));
                }
            }
        }
        Ok(FiniteMatrixGroup { elements, index })
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.index.contains_key(m)
    }
}

/// Outcome of [`check_admissible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleReport {
    /// Order of `q` as a root of unity.
    pub q_order: u32,
    pub contains_scalars: bool,
    pub missing_scalar: Option<Mat2>,
    pub alpha_stable: bool,
    pub alpha_witness: Option<Mat2>,
    /// Elements whose `alpha`-orbit stays inside their scalar coset.
    pub criterion_count: usize,
    pub criterion_witness: Option<Mat2>,
}

impl AdmissibleReport {
    pub fn admissible(&self) -> bool {
        self.contains_scalars && self.alpha_stable
    }

    /// The twisted function algebra is commutative exactly when every element
    /// satisfies the orbit criterion.
    pub fn twist_commutative(&self, order: usize) -> bool {
        self.criterion_count == order
    }
}

/// Admissibility of `h` for the twisting parameter `q`, a root of unity.
pub fn check_admissible(h: &FiniteMatrixGroup, q: &CycScalar) -> Result<AdmissibleReport> {
    let n = q
        .root_of_unity_order()
        .ok_or_else(|| MatGroupError::NotAGroup(format!("q = {q} is not a root of unity")))?;
    let qi = q
        .inv()
        .map_err(|_| MatGroupError::NotAGroup("q = 0".into()))?;
    let scalars: Vec<Mat2> = (0..n as i64)
        .map(|k| Mat2::scalar(q.pow(k).expect("nonzero")))
        .collect();
    let missing_scalar = scalars.iter().find(|s| !h.contains(s)).cloned();
    let alpha_witness = h
        .elements
        .iter()
        .find(|x| !h.contains(&x.alpha(q, &qi)))
        .cloned();
    let mut criterion_count = 0;
    let mut criterion_witness = None;
    for x in &h.elements {
        let coset: Vec<Mat2> = scalars.iter().map(|s| x.mul(s)).collect();
        let mut y = x.clone();
        let mut ok = true;
        for _ in 0..n {
            if !coset.contains(&y) {
                ok = false;
                break;
            }
            y = y.alpha(q, &qi);
        }
        if ok {
            criterion_count += 1;
        } else if criterion_witness.is_none() {
            criterion_witness = Some(x.clone());
        }
    }
    Ok(AdmissibleReport {
        q_order: n,
        contains_scalars: missing_scalar.is_none(),
        missing_scalar,
        alpha_stable: alpha_witness.is_none(),
        alpha_witness,
        criterion_count,
        criterion_witness,
    })
}

/// Named groups shipped with the gallery.
pub mod named {
    use super::*;

    fn z(k: i64, n: u32) -> CycScalar {
        CycScalar::root_of_unity(k, n).expect("valid root")
    }

    fn int(v: i64) -> CycScalar {
        CycScalar::from_int(v)
    }

    pub fn trivial() -> FiniteMatrixGroup {
        FiniteMatrixGroup::generated_by(&[]).expect("trivial group")
    }

    pub fn plus_minus_identity() -> FiniteMatrixGroup {
        FiniteMatrixGroup::generated_by(&[Mat2::scalar(int(-1))]).expect("cyclic")
    }

    /// `<diag(zeta_n, zeta_n^{-1})>`.
    pub fn cyclic_diagonal(n: u32) -> FiniteMatrixGroup {
        FiniteMatrixGroup::generated_by(&[Mat2::diag(z(1, n), z(-1, n))]).expect("cyclic")
    }

    pub fn quaternion() -> FiniteMatrixGroup {
        FiniteMatrixGroup::generated_by(&[
            Mat2::diag(z(1, 4), z(-1, 4)),
            Mat2::antidiag(int(1), int(-1)),
        ])
        .expect("Q8")
    }

    /// Binary dihedral group of order `4n`.
    pub fn binary_dihedral(n: u32) -> FiniteMatrixGroup {
        FiniteMatrixGroup::generated_by(&[
            Mat2::diag(z(1, 2 * n), z(-1, 2 * n)),
            Mat2::antidiag(int(1), int(-1)),
        ])
        .expect("binary dihedral")
    }

    /// Binary tetrahedral group of order 24.
    pub fn binary_tetrahedral() -> FiniteMatrixGroup {
        let i = z(1, 4);
        let half = CycScalar::from_ratio(1, 2);
        let one_plus_i = (&int(1) + &i) * &half;
        let m = Mat2::new(
            one_plus_i.clone(),
            one_plus_i.clone(),
            (&i - &int(1)) * &half,
            (&int(1) - &i) * &half,
        );
        FiniteMatrixGroup::generated_by(&[
            Mat2::diag(i.clone(), -i),
            Mat2::antidiag(int(1), int(-1)),
            m,
        ])
        .expect("2T")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn minus_one() -> CycScalar {
        CycScalar::from_int(-1)
    }

    #[test]
    fn orders() {
        assert_eq!(trivial().order(), 1);
        assert_eq!(plus_minus_identity().order(), 2);
        assert_eq!(cyclic_diagonal(4).order(), 4);
        assert_eq!(cyclic_diagonal(8).order(), 8);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(binary_dihedral(4).order(), 16);
        assert_eq!(binary_tetrahedral().order(), 24);
        for g in [quaternion(), binary_tetrahedral()] {
            assert!(g.elements().iter().all(|m| m.det().is_one()));
        }
    }

    #[test]
    fn list_validation() {
        let q8 = quaternion();
        assert!(FiniteMatrixGroup::from_elements(q8.elements().to_vec()).is_ok());
        let mut broken = q8.elements().to_vec();
        broken.pop();
        assert!(matches!(
            FiniteMatrixGroup::from_elements(broken),
            Err(MatGroupError::NotAGroup(_))
        ));
        let singular = vec![
            Mat2::identity(),
            Mat2::diag(CycScalar::one(), CycScalar::zero()),
        ];
        assert_eq!(
            FiniteMatrixGroup::from_elements(singular),
            Err(MatGroupError::Singular(1))
        );
    }

    #[test]
    fn admissibility_verdicts() {
        let r = check_admissible(&plus_minus_identity(), &minus_one()).unwrap();
        assert!(r.admissible());
        assert!(r.twist_commutative(2));

        let q8 = quaternion();
        let r = check_admissible(&q8, &minus_one()).unwrap();
        assert!(r.admissible());
        assert!(r.twist_commutative(8));

        // Every element of BD16 is diagonal or antidiagonal.
        let bd = binary_dihedral(4);
        assert!(bd
            .elements()
            .iter()
            .all(|m| m.is_diagonal() || m.is_antidiagonal()));
        let r = check_admissible(&bd, &minus_one()).unwrap();
        assert!(r.admissible());
        assert!(r.twist_commutative(16));

        let t = binary_tetrahedral();
        let r = check_admissible(&t, &minus_one()).unwrap();
        assert!(r.admissible());
        assert_eq!(r.criterion_count, 8);
        assert!(!r.twist_commutative(24));

        let r = check_admissible(&trivial(), &minus_one()).unwrap();
        assert!(!r.contains_scalars);
        assert_eq!(r.missing_scalar, Some(Mat2::scalar(minus_one())));
    }

    #[test]
    fn criterion_matches_diagonal_dichotomy() {
        // For q = -1 the orbit condition says x is diagonal or antidiagonal.
        let t = binary_tetrahedral();
        let r = check_admissible(&t, &minus_one()).unwrap();
        let count = t
            .elements()
            .iter()
            .filter(|m| m.is_diagonal() || m.is_antidiagonal())
            .count();
        assert_eq!(r.criterion_count, count);
    }
}
