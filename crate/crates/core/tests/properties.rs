use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::collection::vec;
use proptest::prelude::*;

use gtwist_core::algebra::{AlgebraElement, GradingGroup, Monomial};
use gtwist_core::builtin;
use gtwist_core::format::{self, Source};
use gtwist_core::fusion::builtin::{ising, pointed, pointed_cyclic_action, rep_s3};
use gtwist_core::fusion::{
    chain_group, chain_pushforward_check, spectral_norm_estimate, twist_fusion,
    twisted_markov_check, FusionRing, GradedFusionAction, Measure, Su2Rules, Values,
};
use gtwist_core::hopf::graded_twist;
use gtwist_core::CycScalar;

fn measure(w: &[u8]) -> Measure {
    let mut w: Vec<i64> = w.iter().map(|&a| i64::from(a)).collect();
    if w.iter().all(|&a| a == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    Measure::new(
        w.iter()
            .map(|&a| BigRational::new(a.into(), total.into()))
            .collect(),
    )
    .unwrap()
}

fn ring(k: usize) -> FusionRing {
    match k % 4 {
        0 => ising(),
        1 => rep_s3(),
        2 => pointed(&GradingGroup::new(vec![2, 4])).unwrap(),
        _ => pointed(&GradingGroup::cyclic(5)).unwrap(),
    }
}

fn word(w: &[u32]) -> AlgebraElement {
    AlgebraElement::monomial(Monomial(w.to_vec()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law(a in vec(-20i64..20, 2), b in vec(-20i64..20, 2), c in vec(-20i64..20, 2)) {
        let g = GradingGroup::new(vec![4, 6]);
        let [x, y, z] = [a, b, c].map(|v| g.element(&v).unwrap());
        prop_assert!(x.comps()[0] < 4 && x.comps()[1] < 6);
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&x.neg()), g.zero());
    }

    #[test]
    fn counit_and_coproduct_are_multiplicative(u in vec(0u32..4, 0..3), v in vec(0u32..4, 0..3)) {
        let h = graded_twist(&builtin::sl2_sign_action().unwrap()).unwrap();
        let p = h.base();
        let (u, v) = (p.normal_form(&word(&u)).unwrap(), p.normal_form(&word(&v)).unwrap());
        let uv = p.multiply(&u, &v).unwrap();
        prop_assert_eq!(h.counit(&uv), &h.counit(&u) * &h.counit(&v));
        let lhs = h.coproduct(&uv).unwrap();
        let rhs = h.coproduct(&u).unwrap().mul(p, &h.coproduct(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_by_algebra_maps(u in vec(0u32..6, 0..3), v in vec(0u32..6, 0..3), k in 0i64..4) {
        let x = builtin::gl2_diagonal_action(&CycScalar::root_of_unity(1, 4).unwrap()).unwrap();
        let p = x.hopf().base();
        let g = p.group().element(&[k]).unwrap();
        let (u, v) = (p.normal_form(&word(&u)).unwrap(), p.normal_form(&word(&v)).unwrap());
        let lhs = x.act(&g, &p.multiply(&u, &v).unwrap()).unwrap();
        let rhs = p.multiply(&x.act(&g, &u).unwrap(), &x.act(&g, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn markov_operators_fix_constants(k in 0usize..4, c in -9i64..9) {
        let f = ring(k);
        let one = vec![CycScalar::from_int(c); f.len()];
        for s in 0..f.len() {
            prop_assert!(f.markov_apply(s, &one).agrees(&Values::Exact(one.clone())));
        }
    }

    #[test]
    fn convolution_stays_normalised(k in 0usize..4, a in vec(0u8..9, 8), b in vec(0u8..9, 8)) {
        let f = ring(k);
        let n = f.len();
        let conv = f.convolve(&measure(&a[..n]), &measure(&b[..n])).unwrap();
        let Values::Exact(w) = conv.values() else { panic!("exact ring") };
        prop_assert_eq!(w.iter().sum::<CycScalar>(), CycScalar::one());
    }

    #[test]
    fn pushforward_is_a_homomorphism(k in 0usize..4, a in vec(0u8..9, 8), b in vec(0u8..9, 8)) {
        let f = ring(k);
        let n = f.len();
        prop_assert!(chain_pushforward_check(&f, &measure(&a[..n]), &measure(&b[..n])).unwrap().passed());
    }

    #[test]
    fn twisted_markov_identity(case in 0usize..3, f in vec(-12i64..12, 16)) {
        let (n, k, u) = [(4, 2, -1), (8, 4, 5), (16, 4, 5)][case];
        let x = pointed_cyclic_action(n, k, u).unwrap();
        let f: Vec<CycScalar> = f[..n as usize].iter().map(|&v| CycScalar::from_int(v)).collect();
        for s in 0..n as usize {
            prop_assert!(twisted_markov_check(&x, s, &f).unwrap().passed());
        }
    }

    #[test]
    fn twisting_keeps_the_chain_group_order(case in 0usize..3) {
        let (n, k, u) = [(4, 2, -1), (8, 4, 5), (9, 3, 4)][case];
        let x = pointed_cyclic_action(n, k, u).unwrap();
        let t = twist_fusion(&x).unwrap();
        prop_assert!(t.row_stochastic().is_ok());
        prop_assert_eq!(chain_group(&t).unwrap().order(), n as usize);
    }

    #[test]
    fn spectral_bounds_are_ordered(truncation in 1usize..300, seed in 0u64..1000) {
        let rep = spectral_norm_estimate(&Su2Rules::default(), &[(1, 1)], truncation, 1e-6, seed).unwrap();
        prop_assert!(rep.estimate >= 0.0 && rep.upper_bound > 0.0);
        prop_assert!(rep.estimate <= rep.upper_bound + 1e-12);
        prop_assert!(rep.lower_bounds.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
    }
}

fn gallery_actions() -> Vec<GradedFusionAction> {
    let mut out: Vec<_> = [(4, 2, -1), (8, 4, 5), (9, 3, 4), (16, 4, 5)]
        .into_iter()
        .map(|(n, k, u)| pointed_cyclic_action(n, k, u).unwrap())
        .collect();
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../gallery/ising-graded.fus"
    ))
    .unwrap();
    out.push(
        format::parse_fusion(Source::new("ising-graded.fus", &text))
            .unwrap()
            .action
            .unwrap(),
    );
    out
}

#[test]
fn twisting_preserves_dimensions() {
    for x in gallery_actions() {
        let t = twist_fusion(&x).unwrap();
        assert!(t.dims_values().agrees(&x.ring().dims_values()));
        assert!(t.row_stochastic().is_ok());
    }
}

#[test]
fn inverse_perm_untwists_fusion_rules() {
    for x in gallery_actions() {
        let t = twist_fusion(&x).unwrap();
        let inverse: BTreeMap<_, _> = x
            .group()
            .elements()
            .unwrap()
            .into_iter()
            .map(|g| (g.clone(), x.perm(&g.neg())))
            .collect();
        let y =
            GradedFusionAction::new(t, x.group().clone(), x.degrees().to_vec(), inverse).unwrap();
        assert_eq!(twist_fusion(&y).unwrap(), *x.ring());
    }
}

#[test]
fn emitted_files_reparse() {
    let minus = CycScalar::from_int(-1);
    let hopfs = [
        builtin::sl2(&minus).unwrap(),
        graded_twist(&builtin::gl2_sign_action().unwrap()).unwrap(),
        graded_twist(
            &builtin::gl2_diagonal_action(&CycScalar::root_of_unity(1, 4).unwrap()).unwrap(),
        )
        .unwrap(),
    ];
    for h in hopfs {
        let text = format::write_hopf(&h);
        assert_eq!(
            format::parse_hopf(Source::new("out.hopf", &text)).unwrap(),
            h
        );
    }
    for x in gallery_actions() {
        let t = twist_fusion(&x).unwrap();
        let text = format::write_fusion(&t);
        assert_eq!(
            format::parse_fusion(Source::new("out.fus", &text))
                .unwrap()
                .ring,
            t
        );
    }
}
