//! Property suites: exact ring axioms, homomorphism and Leibniz laws,
//! Groebner closure and canonicity, saturation stabilization, and the
//! cocycle-reduction laws, all on randomized inputs.

use gext_core::cech::{
    classify_extension, overlap_bundle_ring, reduce_bundle_cocycle, torsor_datum, verify_witness,
    Cocycle,
};
use gext_core::ideals::{
    ideal_equality, ideal_membership, radical_membership, saturate, Budget, Ideal,
};
use gext_core::lnd::{Derivation, PresentedAlgebra};
use gext_core::polycore::{
    rat_int, Monomial, MonomialOrder, Polynomial, Rat, Ring, RingDescriptor,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn ring3() -> Ring {
    RingDescriptor::new(vec!["x", "y", "z"], MonomialOrder::DegRevLex)
}

fn arb_poly(ring: Ring, max_terms: usize, max_exp: i32) -> impl Strategy<Value = Polynomial> {
    let n = ring.num_vars();
    proptest::collection::vec(
        (
            proptest::collection::vec(0..=max_exp, n),
            -4i64..=4,
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(exps, c)| (Monomial(exps), rat_int(c)))
            .collect();
        Polynomial::from_terms(&ring, terms).expect("non-negative exponents")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(
        a in arb_poly(ring3(), 4, 3),
        b in arb_poly(ring3(), 4, 3),
        c in arb_poly(ring3(), 4, 3),
    ) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let comm = a.add(&b).unwrap();
        prop_assert_eq!(comm, b.add(&a).unwrap());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        f in arb_poly(ring3(), 3, 2),
        g in arb_poly(ring3(), 3, 2),
        img_x in arb_poly(ring3(), 2, 2),
        img_y in arb_poly(ring3(), 2, 2),
    ) {
        let r = ring3();
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), img_x);
        map.insert("y".to_string(), img_y);
        let lhs = f.mul(&g).unwrap().substitute(&map, &r).unwrap();
        let rhs = f.substitute(&map, &r).unwrap().mul(&g.substitute(&map, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = f.add(&g).unwrap().substitute(&map, &r).unwrap();
        let rhs = f.substitute(&map, &r).unwrap().add(&g.substitute(&map, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogeneous_components_sum_back(f in arb_poly(ring3(), 6, 4)) {
        let (comps, lowest) = f.homogeneous_decompose().unwrap();
        let sum = comps.values().fold(Polynomial::zero(f.ring()), |a, b| a.add(b).unwrap());
        prop_assert_eq!(&sum, &f);
        if f.is_zero() {
            prop_assert!(lowest.is_none());
        } else {
            prop_assert_eq!(lowest.unwrap(), comps.keys().next().copied().unwrap());
        }
    }

    #[test]
    fn leibniz_rule(
        f in arb_poly(ring3(), 4, 3),
        g in arb_poly(ring3(), 4, 3),
    ) {
        for v in ["x", "y", "z"] {
            let lhs = f.mul(&g).unwrap().partial_derivative(v).unwrap();
            let rhs = f
                .partial_derivative(v).unwrap().mul(&g).unwrap()
                .add(&g.partial_derivative(v).unwrap().mul(&f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn groebner_closure_and_canonicity(
        mut gens in proptest::collection::vec(arb_poly(ring3(), 3, 2), 1..=3),
    ) {
        let budget = Budget::default();
        gens.retain(|g| !g.is_zero());
        prop_assume!(!gens.is_empty());
        let r = ring3();
        let i1 = Ideal::new(&r, gens.clone()).unwrap();
        let gb1 = match i1.groebner(&budget) {
            Ok(gb) => gb,
            Err(_) => return Ok(()), // budget exits are not property failures
        };
        prop_assert!(gb1.verify_closure(&budget).unwrap());
        gens.reverse();
        let i2 = Ideal::new(&r, gens).unwrap();
        let gb2 = i2.groebner(&budget).unwrap();
        prop_assert_eq!(gb1.basis(), gb2.basis());
    }

    #[test]
    fn normal_form_is_additive(
        f in arb_poly(ring3(), 4, 3),
        g in arb_poly(ring3(), 4, 3),
        h in arb_poly(ring3(), 3, 2),
    ) {
        prop_assume!(!h.is_zero());
        let budget = Budget::default();
        let r = ring3();
        let gb = Ideal::new(&r, vec![h]).unwrap().groebner(&budget).unwrap();
        let direct = gb.normal_form(&f.add(&g).unwrap(), &budget).unwrap();
        let nf_f = gb.normal_form(&f, &budget).unwrap();
        let nf_g = gb.normal_form(&g, &budget).unwrap();
        let recombined = gb.normal_form(&nf_f.add(&nf_g).unwrap(), &budget).unwrap();
        prop_assert_eq!(direct, recombined);
    }

    #[test]
    fn saturation_laws(
        gens in proptest::collection::vec(arb_poly(ring3(), 3, 2), 1..=2),
        f in arb_poly(ring3(), 2, 2),
    ) {
        prop_assume!(!f.is_zero());
        let budget = Budget::default();
        let r = ring3();
        let i = Ideal::new(&r, gens).unwrap();
        let sat = match saturate(&i, &f, &budget) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        // I ⊆ sat
        for g in i.generators() {
            prop_assert!(ideal_membership(g, &sat, &budget).unwrap());
        }
        // f * sat ⊆ sat
        for g in sat.generators() {
            prop_assert!(ideal_membership(&f.mul(g).unwrap(), &sat, &budget).unwrap());
        }
        // stabilization
        let sat2 = saturate(&sat, &f, &budget).unwrap();
        prop_assert!(ideal_equality(&sat, &sat2, &budget).unwrap());
    }

    #[test]
    fn radical_extends_membership(
        gens in proptest::collection::vec(arb_poly(ring3(), 2, 2), 1..=2),
        f in arb_poly(ring3(), 2, 2),
    ) {
        let budget = Budget::default();
        let r = ring3();
        let i = Ideal::new(&r, gens).unwrap();
        if let Ok(true) = ideal_membership(&f, &i, &budget) {
            prop_assert!(radical_membership(&f, &i, &budget).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn modification_restricts_to_iso_off_divisor(
        g in arb_poly(RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex), 3, 2),
    ) {
        use gext_core::affinemod::{modify_presentation, verify_restriction_iso, ModificationCenter};
        let budget = Budget::default();
        let r = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let a = PresentedAlgebra::free(&r, &budget).unwrap();
        let f = gext_core::polycore::parse_polynomial(&r, "x").unwrap();
        let center = ModificationCenter::new(a, f, vec![
            gext_core::polycore::parse_polynomial(&r, "x").unwrap(),
            g,
        ], &budget).unwrap();
        let m = match modify_presentation(&center, &budget) {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        prop_assert!(verify_restriction_iso(&m, &budget).unwrap());
    }
}

// --- derivation laws on a quotient ------------------------------------------

fn sl2_with_derivation() -> (std::sync::Arc<PresentedAlgebra>, Derivation) {
    let budget = Budget::default();
    let r = RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex);
    let rel = gext_core::polycore::parse_polynomial(&r, "x*v - y*u - 1").unwrap();
    let alg = PresentedAlgebra::new(&r, vec![rel], &budget).unwrap();
    let mut img = BTreeMap::new();
    img.insert("u".to_string(), gext_core::polycore::parse_polynomial(&r, "x").unwrap());
    img.insert("v".to_string(), gext_core::polycore::parse_polynomial(&r, "y").unwrap());
    let d = Derivation::new(alg.clone(), img).unwrap();
    (alg, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivation_leibniz_guard(
        f in arb_poly(RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex), 3, 2),
        g in arb_poly(RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex), 3, 2),
    ) {
        let budget = Budget::default();
        let (alg, d) = sl2_with_derivation();
        let lhs = d.apply(&f.mul(&g).unwrap()).unwrap();
        let rhs = f.mul(&d.apply(&g).unwrap()).unwrap()
            .add(&g.mul(&d.apply(&f).unwrap()).unwrap()).unwrap();
        prop_assert!(alg.is_zero_mod(&lhs.sub(&rhs).unwrap(), &budget).unwrap());
    }
}

// --- cocycle laws -------------------------------------------------------------

fn arb_laurent_cocycle() -> impl Strategy<Value = Polynomial> {
    let ring = gext_core::cech::cocycle_ring();
    proptest::collection::vec(
        (
            proptest::collection::vec(-4i32..=4, 2),
            -4i64..=4,
        ),
        0..=5,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(exps, c)| (Monomial(exps), rat_int(c)))
            .collect();
        Polynomial::from_terms(&ring, terms).expect("laurent ring")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_class_idempotent_and_linear(
        a in arb_laurent_cocycle(),
        b in arb_laurent_cocycle(),
    ) {
        let ca = Cocycle::new(a.clone()).unwrap();
        // idempotent: re-reducing the canonical part changes nothing
        let canon = ca.canonical_class();
        let ring = gext_core::cech::cocycle_ring();
        let canon_poly = Polynomial::from_terms(
            &ring,
            canon.iter().map(|(&(i, j), c)| {
                (Monomial(vec![-(i as i32), -(j as i32)]), c.clone())
            }).collect(),
        ).unwrap();
        prop_assert_eq!(
            Cocycle::new(canon_poly).unwrap().canonical_class(),
            canon.clone()
        );
        // linear
        let cb = Cocycle::new(b.clone()).unwrap();
        let csum = Cocycle::new(a.add(&b).unwrap()).unwrap();
        let mut expect: BTreeMap<(i64, i64), Rat> = canon;
        for (k, v) in cb.canonical_class() {
            let entry = expect.entry(k).or_insert_with(|| rat_int(0));
            *entry += v;
        }
        expect.retain(|_, v| !num_traits::Zero::is_zero(v));
        prop_assert_eq!(csum.canonical_class(), expect);
    }

    #[test]
    fn minimal_level_at_least_two(a in arb_laurent_cocycle()) {
        let c = Cocycle::new(a).unwrap();
        if let Ok(cls) = classify_extension(&c) {
            prop_assert!(cls.l0 >= 2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bundle_reduction_witnesses_resubstitute(
        terms in proptest::collection::vec(
            (-4i32..=4, 0i32..=2, 0i32..=3, -4i64..=4),
            1..=4,
        ),
    ) {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let d = torsor_datum(&c, 2).unwrap();
        let ov = overlap_bundle_ring();
        let g = Polynomial::from_terms(
            &ov,
            terms.into_iter()
                .map(|(r, a, s, coef)| (Monomial(vec![r, a, s]), rat_int(coef)))
                .collect(),
        ).unwrap();
        let w = reduce_bundle_cocycle(&g, &d, 10_000).unwrap();
        prop_assert!(verify_witness(&g, &w, &d).unwrap());
    }
}
