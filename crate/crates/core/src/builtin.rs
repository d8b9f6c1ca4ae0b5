//! Built-in algebras, groups and fusion rings used by the gallery and tests.

use std::collections::BTreeMap;

use crate::algebra::{
    AlgebraElement as E, Generator, GradingGroup, Monomial, NormalInverse, Presentation, TauKind,
    TauMaps,
};
use crate::hopf::{HopfPresentation, InvariantCocentralAction, Result, Tensor};
use crate::scalars::CycScalar;

fn w(letters: &[u32]) -> E {
    E::word(letters)
}

fn c(v: i64) -> CycScalar {
    CycScalar::from_int(v)
}

fn named(group: &GradingGroup, names: &[(&str, i64)]) -> Vec<Generator> {
    names
        .iter()
        .map(|&(n, d)| Generator {
            name: n.to_string(),
            degree: group.element(&[d]).expect("rank one"),
        })
        .collect()
}

fn tensor(pairs: &[(&[u32], &[u32])]) -> Tensor {
    Tensor::from_terms(
        pairs
            .iter()
            .map(|(u, v)| (Monomial(u.to_vec()), Monomial(v.to_vec()), CycScalar::one())),
    )
}

/// The standard matrix coproduct on `a, b, c, d` (indices 0..4).
fn matrix_coproduct() -> Vec<Tensor> {
    vec![
        tensor(&[(&[0], &[0]), (&[1], &[2])]),
        tensor(&[(&[0], &[1]), (&[1], &[3])]),
        tensor(&[(&[2], &[0]), (&[3], &[2])]),
        tensor(&[(&[2], &[1]), (&[3], &[3])]),
    ]
}

/// `O(SL_q(2))` on `a < b < c < d`, all of degree 1 in `Z/2`.
pub fn sl2(q: &CycScalar) -> Result<HopfPresentation> {
    let g = GradingGroup::cyclic(2);
    let qi = q
        .inv()
        .map_err(|e| crate::hopf::HopfError::Structure(e.to_string()))?;
    let rels = vec![
        w(&[1, 0]).sub(&w(&[0, 1]).scale(q)),
        w(&[2, 0]).sub(&w(&[0, 2]).scale(q)),
        w(&[3, 1]).sub(&w(&[1, 3]).scale(q)),
        w(&[3, 2]).sub(&w(&[2, 3]).scale(q)),
        w(&[2, 1]).sub(&w(&[1, 2])),
        w(&[3, 0])
            .sub(&w(&[0, 3]))
            .sub(&w(&[1, 2]).scale(&(q - &qi))),
        w(&[0, 3]).sub(&w(&[1, 2]).scale(&qi)).sub(&E::one()),
    ];
    let base = Presentation::from_relations(
        g.clone(),
        named(&g, &[("a", 1), ("b", 1), ("c", 1), ("d", 1)]),
        rels,
    )?;
    let counit = vec![c(1), c(0), c(0), c(1)];
    let antipode = vec![w(&[3]), w(&[1]).scale(&-q), w(&[2]).scale(&-&qi), w(&[0])];
    HopfPresentation::new(base, matrix_coproduct(), counit, antipode)
}

/// `O(GL(2))` with a determinant generator `e = ad - bc` and its inverse
/// `t`, graded by `Z/2`.
pub fn gl2() -> Result<HopfPresentation> {
    gl2_graded(2)
}

/// `O(GL(2))` graded by `Z/n` with `a, b, c, d` in degree 1, `e = ad - bc`
/// in degree 2 and `t = e^{-1}` in degree -2.
pub fn gl2_graded(n: u32) -> Result<HopfPresentation> {
    let g = GradingGroup::cyclic(n);
    let mut rels = Vec::new();
    for i in 0..6u32 {
        for j in 0..i {
            rels.push(w(&[i, j]).sub(&w(&[j, i])));
        }
    }
    rels.push(w(&[0, 3]).sub(&w(&[1, 2])).sub(&w(&[4])));
    rels.push(w(&[4, 5]).sub(&E::one()));
    let base = Presentation::from_relations(
        g.clone(),
        named(
            &g,
            &[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("e", 2), ("t", -2)],
        ),
        rels,
    )?
    .with_normal_inverse(NormalInverse {
        generator: 5,
        inverse_of: w(&[4]),
    })?;
    let mut coproduct = matrix_coproduct();
    coproduct.push(tensor(&[(&[4], &[4])]));
    coproduct.push(tensor(&[(&[5], &[5])]));
    let counit = vec![c(1), c(0), c(0), c(1), c(1), c(1)];
    let antipode = vec![
        w(&[3, 5]),
        w(&[1, 5]).neg(),
        w(&[2, 5]).neg(),
        w(&[0, 5]),
        w(&[5]),
        w(&[4]),
    ];
    HopfPresentation::new(base, coproduct, counit, antipode)
}

/// Scales the generators by `diag` at the generator of the cyclic grading group.
fn diagonal_action(h: HopfPresentation, diag: &[CycScalar]) -> Result<InvariantCocentralAction> {
    let n = diag.len();
    let mut m = vec![vec![CycScalar::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = diag[i].clone();
    }
    let one = h.base().group().element(&[1])?;
    let tau = TauMaps::new(h.base(), TauKind::Action, BTreeMap::from([(one, m)]))?;
    InvariantCocentralAction::new(h, tau)
}

/// `b, c -> -b, -c` at the generator of `Z/2`, fixing everything else.
fn sign_action(h: HopfPresentation) -> Result<InvariantCocentralAction> {
    let diag: Vec<CycScalar> = (0..h.base().num_generators())
        .map(|i| if i == 1 || i == 2 { c(-1) } else { c(1) })
        .collect();
    diagonal_action(h, &diag)
}

pub fn sl2_sign_action() -> Result<InvariantCocentralAction> {
    sign_action(sl2(&c(1))?)
}

pub fn gl2_sign_action() -> Result<InvariantCocentralAction> {
    sign_action(gl2()?)
}

/// `b -> q^{-1} b, c -> q c` on `O(GL(2))` graded by the order of `q`.
pub fn gl2_diagonal_action(q: &CycScalar) -> Result<InvariantCocentralAction> {
    let err = |m: &str| crate::hopf::HopfError::Structure(m.to_string());
    let n = q
        .root_of_unity_order()
        .ok_or_else(|| err("q is not a root of unity"))?;
    let qi = q.inv().map_err(|e| err(&e.to_string()))?;
    diagonal_action(gl2_graded(n)?, &[c(1), qi, q.clone(), c(1), c(1), c(1)])
}

/// `(ad - bc - 1)`, cutting `O(GL(2))` down to `O(SL(2))`.
pub fn gl2_determinant_ideal() -> Vec<E> {
    vec![w(&[0, 3]).sub(&w(&[1, 2])).sub(&E::one())]
}

/// The group algebra `K Gamma` of a finite abelian group.
pub fn group_hopf(group: &GradingGroup) -> Result<HopfPresentation> {
    let base = Presentation::group_algebra(group)?;
    let n = base.num_generators();
    let coproduct = (0..n as u32).map(|i| tensor(&[(&[i], &[i])])).collect();
    let counit = vec![c(1); n];
    let antipode = group
        .orders()
        .iter()
        .enumerate()
        .map(|(i, &k)| w(&vec![i as u32; k as usize - 1]))
        .collect();
    HopfPresentation::new(base, coproduct, counit, antipode)
}

/// `K_q[x, y]`: `yx = q xy`, both generators of degree 1 in `Z/2`.
pub fn quantum_plane(
    q: &CycScalar,
) -> std::result::Result<Presentation, crate::algebra::AlgebraError> {
    let g = GradingGroup::cyclic(2);
    Presentation::from_relations(
        g.clone(),
        named(&g, &[("x", 1), ("y", 1)]),
        vec![w(&[1, 0]).sub(&w(&[0, 1]).scale(q))],
    )
}

/// The quantum Weyl algebra `yx = q xy + 1`; `q = 1` is `A_1`.
pub fn weyl(q: &CycScalar) -> std::result::Result<Presentation, crate::algebra::AlgebraError> {
    let g = GradingGroup::cyclic(2);
    let rel = w(&[1, 0]).sub(&w(&[0, 1]).scale(q)).sub(&E::one());
    Presentation::from_relations(g.clone(), named(&g, &[("x", 1), ("y", 1)]), vec![rel])
}
