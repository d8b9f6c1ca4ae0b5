//! Library results against independent computations.

use std::collections::BTreeSet;

use nalgebra::{Complex, DMatrix};

use gtwist_core::algebra::{AlgebraElement, GradingGroup, Monomial};
use gtwist_core::builtin;
use gtwist_core::comodule::{molien_series, reynolds_invariants, verify_invariant_correspondence};
use gtwist_core::fusion::builtin::{ising, pointed, rep_s3};
use gtwist_core::fusion::{
    spectral_norm_estimate, FusionRing, FusionRules, Measure, Su2Rules, Values,
};
use gtwist_core::matgroup::{named, FiniteMatrixGroup};
use gtwist_core::{cyc_make, CycScalar};

/// `x^k mod Phi_n(x)` arithmetic on integer coefficient vectors.
mod polymod {
    pub fn cyclotomic(n: usize) -> Vec<i64> {
        // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
        let mut num = vec![0i64; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            num = divide(&num, &cyclotomic(d));
        }
        num
    }

    fn divide(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut r = a.to_vec();
        let (da, db) = (a.len() - 1, b.len() - 1);
        let mut q = vec![0; da - db + 1];
        for i in (0..=da - db).rev() {
            let c = r[i + db] / b[db];
            q[i] = c;
            for j in 0..=db {
                r[i + j] -= c * b[j];
            }
        }
        assert!(r.iter().all(|&c| c == 0), "inexact division");
        q
    }

    pub fn reduce(mut p: Vec<i64>, m: &[i64]) -> Vec<i64> {
        let dm = m.len() - 1;
        while p.len() > dm {
            let c = p.pop().unwrap();
            let shift = p.len() - dm;
            for j in 0..dm {
                p[shift + j] -= c * m[j];
            }
        }
        p
    }

    pub fn mul(a: &[i64], b: &[i64], m: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        reduce(out, m)
    }
}

fn from_poly(p: &[i64], n: i64) -> CycScalar {
    let mut out = CycScalar::zero();
    for (k, &c) in p.iter().enumerate() {
        let mut term = cyc_make(k as i64, n).unwrap();
        term *= &CycScalar::from_int(c);
        out += &term;
    }
    out
}

fn zeta_poly(k: usize, n: usize) -> Vec<i64> {
    let mut p = vec![0; k + 1];
    p[k] = 1;
    polymod::reduce(p, &polymod::cyclotomic(n))
}

#[test]
fn cyclotomic_products_match_polynomial_reduction() {
    assert_eq!(polymod::cyclotomic(4), [1, 0, 1]);
    assert_eq!(polymod::cyclotomic(8), [1, 0, 0, 0, 1]);
    let i = cyc_make(1, 4).unwrap();
    assert_eq!(&i * &i, CycScalar::from_int(-1));
    for n in [3usize, 4, 5, 8, 12] {
        let m = polymod::cyclotomic(n);
        for a in 0..n {
            for b in 0..n {
                let want = from_poly(
                    &polymod::mul(&zeta_poly(a, n), &zeta_poly(b, n), &m),
                    n as i64,
                );
                let got =
                    &cyc_make(a as i64, n as i64).unwrap() * &cyc_make(b as i64, n as i64).unwrap();
                assert_eq!(got, want, "zeta_{n}^{a} * zeta_{n}^{b}");
            }
        }
    }
    let z3 = cyc_make(1, 3).unwrap();
    assert_eq!(&z3 + &cyc_make(2, 3).unwrap(), CycScalar::from_int(-1));
}

/// Every result reachable by rewriting any occurrence, in any order.
fn all_reductions(word: Vec<u32>, q: &CycScalar) -> BTreeSet<Vec<(Vec<u32>, String)>> {
    fn go(
        terms: Vec<(Vec<u32>, CycScalar)>,
        q: &CycScalar,
        out: &mut BTreeSet<Vec<(Vec<u32>, String)>>,
    ) {
        let mut progressed = false;
        for (t, (w, c)) in terms.iter().enumerate() {
            for i in 0..w.len().saturating_sub(1) {
                if w[i] == 1 && w[i + 1] == 0 {
                    progressed = true;
                    let mut next = terms.clone();
                    let mut nw = w.clone();
                    nw.swap(i, i + 1);
                    next[t] = (nw, c * q);
                    go(next, q, out);
                }
            }
        }
        if !progressed {
            let mut v: Vec<(Vec<u32>, String)> =
                terms.into_iter().map(|(w, c)| (w, c.to_string())).collect();
            v.sort();
            out.insert(v);
        }
    }
    let mut out = BTreeSet::new();
    go(vec![(word, CycScalar::one())], q, &mut out);
    out
}

#[test]
fn quantum_plane_reduction_is_order_independent() {
    let q = cyc_make(1, 5).unwrap();
    let plane = builtin::quantum_plane(&q).unwrap();
    for word in [vec![1, 1, 0], vec![1, 0, 1, 0], vec![1, 1, 0, 0, 1]] {
        let results = all_reductions(word.clone(), &q);
        assert_eq!(results.len(), 1, "{word:?}");
        let nf = plane
            .normal_form(&AlgebraElement::monomial(Monomial(word.clone())))
            .unwrap();
        let got: Vec<(Vec<u32>, String)> = nf
            .terms()
            .map(|(m, c)| (m.0.clone(), c.to_string()))
            .collect();
        assert_eq!(got, *results.first().unwrap(), "{word:?}");
    }
    // y^2 x -> q^2 x y^2
    let nf = plane
        .normal_form(&AlgebraElement::monomial(Monomial(vec![1, 1, 0])))
        .unwrap();
    assert_eq!(
        nf,
        AlgebraElement::monomial(Monomial(vec![0, 1, 1])).scale(&(&q * &q))
    );
}

#[test]
fn skew_plane_square() {
    let p = builtin::quantum_plane(&CycScalar::from_int(-1)).unwrap();
    let s = AlgebraElement::generator(0).add(&AlgebraElement::generator(1));
    let sq = p.multiply(&s, &s).unwrap();
    let want = AlgebraElement::monomial(Monomial(vec![0, 0]))
        .add(&AlgebraElement::monomial(Monomial(vec![1, 1])));
    assert_eq!(sq, want);
}

fn complex(m: &gtwist_core::matgroup::Mat2) -> [Complex<f64>; 4] {
    m.0.clone().map(|x| {
        let (re, im) = x.to_complex();
        Complex::new(re, im)
    })
}

/// Molien coefficients from `h_n = tr h_{n-1} - det h_{n-2}` averaged over the group.
fn molien_numeric(g: &FiniteMatrixGroup, max: usize) -> Vec<f64> {
    let mut sums = vec![Complex::new(0.0, 0.0); max + 1];
    for m in g.elements() {
        let [a, b, c, d] = complex(m);
        let (tr, det) = (a + d, a * d - b * c);
        let mut h = vec![Complex::new(1.0, 0.0), tr];
        for n in 2..=max {
            h.push(tr * h[n - 1] - det * h[n - 2]);
        }
        for n in 0..=max {
            sums[n] += h[n];
        }
    }
    sums.iter().map(|s| s.re / g.order() as f64).collect()
}

fn groups() -> Vec<(&'static str, FiniteMatrixGroup)> {
    vec![
        ("pmI", named::plus_minus_identity()),
        ("C4", named::cyclic_diagonal(4)),
        ("C8", named::cyclic_diagonal(8)),
        ("Q8", named::quaternion()),
        ("BD16", named::binary_dihedral(4)),
        ("2T", named::binary_tetrahedral()),
    ]
}

#[test]
fn group_orders() {
    let orders: Vec<usize> = groups().iter().map(|(_, g)| g.order()).collect();
    assert_eq!(orders, [2, 4, 8, 8, 16, 24]);
}

#[test]
fn molien_series_matches_trace_recursion() {
    for (name, g) in groups() {
        let exact = molien_series(&g, 12);
        let numeric = molien_numeric(&g, 12);
        for n in 0..=12 {
            let c = exact.coeff(n);
            let c = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            assert!(
                (c - numeric[n]).abs() < 1e-9,
                "{name} degree {n}: {c} vs {}",
                numeric[n]
            );
        }
    }
}

#[test]
fn reynolds_dimensions_match_molien() {
    for (name, g) in groups() {
        let m = molien_numeric(&g, 8);
        for (n, want) in m.iter().enumerate() {
            assert_eq!(
                reynolds_invariants(&g, n).len(),
                want.round() as usize,
                "{name} degree {n}"
            );
        }
    }
}

#[test]
fn monomial_invariants_of_diagonal_c4() {
    // x^a y^b is fixed by diag(i, -i) iff a = b mod 4.
    let g = named::cyclic_diagonal(4);
    for n in 0..=8 {
        let count = (0..=n)
            .filter(|&a| (a as i64 - (n - a) as i64).rem_euclid(4) == 0)
            .count();
        assert_eq!(reynolds_invariants(&g, n).len(), count, "degree {n}");
    }
    let deg2 = reynolds_invariants(&g, 2);
    assert_eq!(deg2.len(), 1);
    assert_eq!(deg2[0].terms().count(), 1);
}

#[test]
fn plus_minus_identity_dimensions_are_parity_counts() {
    let rep = verify_invariant_correspondence(
        &named::plus_minus_identity(),
        &CycScalar::from_int(-1),
        10,
    )
    .unwrap();
    for row in &rep.rows {
        let want = if row.degree % 2 == 0 {
            row.degree + 1
        } else {
            0
        };
        assert_eq!(
            (row.classical, row.twisted),
            (want, want),
            "degree {}",
            row.degree
        );
    }
}

fn matrix(ring: &FusionRing, x: usize) -> DMatrix<f64> {
    let n = ring.len();
    let m = ring.fusion_matrix(&[(x, 1)]);
    DMatrix::from_fn(n, n, |i, j| m[i][j] as f64)
}

fn numeric_dims(ring: &FusionRing) -> Vec<f64> {
    match ring.dims_values() {
        Values::Exact(v) => v.iter().map(CycScalar::to_f64).collect(),
        Values::Approx(v) => v,
    }
}

#[test]
fn dimensions_are_perron_frobenius_eigenvalues() {
    let fib = gtwist_core::format::parse_fusion(gtwist_core::format::Source::new(
        "fib",
        "simples = [\"1\", \"tau\"]\nunit = \"1\"\nmult = [\"tau tau 1\", \"tau tau tau\"]\n",
    ))
    .unwrap()
    .ring;
    for ring in [
        ising(),
        rep_s3(),
        fib,
        pointed(&GradingGroup::cyclic(5)).unwrap(),
    ] {
        let dims = numeric_dims(&ring);
        for x in 0..ring.len() {
            let sv = matrix(&ring, x).singular_values();
            let norm = sv.iter().copied().fold(0.0, f64::max);
            assert!(
                (norm - dims[x]).abs() < 1e-9,
                "{}: {norm} vs {}",
                ring.names()[x],
                dims[x]
            );
            let rep = spectral_norm_estimate(&ring, &[(x, 1)], 100, 1e-9, 3).unwrap();
            assert!(rep.closed);
            assert!((rep.estimate - norm).abs() < 1e-9);
        }
    }
}

#[test]
fn truncated_su2_matches_dense_norm() {
    let n = 150;
    let su2 = Su2Rules::default();
    let rep = spectral_norm_estimate(&su2, &[(1, 1)], n, 1e-6, 0).unwrap();
    assert_eq!(rep.ball_size, n);
    // Ball of size n is U_0..U_{n-1}; the truncated matrix is the path adjacency matrix.
    let m = DMatrix::from_fn(n, n, |i, j| {
        su2.product(1, j)
            .iter()
            .filter(|p| p.0 == i)
            .map(|p| f64::from(p.1))
            .sum::<f64>()
    });
    let dense = m.singular_values().iter().copied().fold(0.0, f64::max);
    assert!(
        (rep.estimate - dense).abs() < 1e-8,
        "{} vs {dense}",
        rep.estimate
    );
    assert!((dense - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos()).abs() < 1e-9);
    assert!(rep.estimate <= rep.upper_bound && rep.upper_bound <= 2.0 + 1e-12);
}

#[test]
fn markov_on_pointed_ring_is_translation() {
    let ring = pointed(&GradingGroup::cyclic(5)).unwrap();
    let f: Vec<CycScalar> = (0..5).map(|k| CycScalar::from_int(k * k - 3)).collect();
    for s in 0..5 {
        let Values::Exact(got) = ring.markov_apply(s, &f) else {
            panic!("exact ring")
        };
        for r in 0..5 {
            let sr = (0..5).find(|&t| ring.mult(s, r, t) == 1).unwrap();
            assert_eq!(got[r], f[sr]);
        }
    }
}

#[test]
fn ising_sigma_squared() {
    let ring = ising();
    let [one, eps, sigma] = ["1", "eps", "sigma"].map(|s| ring.index_of(s).unwrap());
    let d = Measure::point(3, sigma);
    let conv = ring.convolve(&d, &d).unwrap();
    let half = CycScalar::from_ratio(1, 2);
    let mut want = vec![CycScalar::zero(); 3];
    want[one] = half.clone();
    want[eps] = half;
    assert_eq!(*conv.values(), Values::Exact(want));
}
