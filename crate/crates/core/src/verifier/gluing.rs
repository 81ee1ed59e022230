//! Pipeline behind `kind = gluing`: hand-described two-chart surfaces with
//! their torsor structure. Verifies the gluing is an isomorphism of the
//! overlap rings, the bundle gluing is equivariant for the translation
//! actions, local slices exist on both charts, the fiber over the base
//! point is a reduced plane of the stated multiplicity.

use super::{CheckReport, Checks, GluingCase, LocalizedChartSpec};
use crate::blowup::verify_custom_gluing;
use crate::error::{Error, Result};
use crate::ideals::{ideal_membership, radical_membership, Budget, Ideal};
use crate::lnd::{Derivation, PresentedAlgebra, RingMorphism};
use crate::polycore::{parse_polynomial, Polynomial, Ring};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Builds a presented algebra from a chart spec: variables, relations, and
/// localizations realized as adjoined inverses `name_inv`.
fn build_chart(spec: &LocalizedChartSpec, budget: &Budget) -> Result<Arc<PresentedAlgebra>> {
    let ring = crate::polycore::RingDescriptor::new(
        spec.vars.clone(),
        crate::polycore::MonomialOrder::DegRevLex,
    );
    let rels = spec
        .relations
        .iter()
        .map(|s| parse_polynomial(&ring, s))
        .collect::<Result<Vec<_>>>()?;
    let alg = PresentedAlgebra::new(&ring, rels, budget)?;
    if spec.inverted.is_empty() {
        return Ok(alg);
    }
    let elems = spec
        .inverted
        .iter()
        .map(|(hint, g)| Ok((hint.as_str(), parse_polynomial(&ring, g)?)))
        .collect::<Result<Vec<_>>>()?;
    alg.localized(elems, budget)
}

fn parse_images(
    map: &BTreeMap<String, String>,
    target: &Ring,
) -> Result<BTreeMap<String, Polynomial>> {
    map.iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(target, v)?)))
        .collect()
}

pub(super) fn run(case: &GluingCase, budget: &Budget) -> Vec<CheckReport> {
    let mut checks = Checks::new();
    let setup = (|| -> Result<_> {
        let c0 = build_chart(&case.chart0, budget)?;
        let cinf = build_chart(&case.chart_inf, budget)?;
        let ov0 = if case.overlap0_invert.is_empty() {
            c0.clone()
        } else {
            let elems = case
                .overlap0_invert
                .iter()
                .map(|(hint, g)| Ok((hint.as_str(), parse_polynomial(c0.ring(), g)?)))
                .collect::<Result<Vec<_>>>()?;
            c0.localized(elems, budget)?
        };
        let ovinf = if case.overlap_inf_invert.is_empty() {
            cinf.clone()
        } else {
            let elems = case
                .overlap_inf_invert
                .iter()
                .map(|(hint, g)| Ok((hint.as_str(), parse_polynomial(cinf.ring(), g)?)))
                .collect::<Result<Vec<_>>>()?;
            cinf.localized(elems, budget)?
        };
        Ok((c0, cinf, ov0, ovinf))
    })();
    let (chart0, chart_inf, overlap0, overlap_inf) = match setup {
        Ok(v) => v,
        Err(e) => {
            checks.run("chart_setup", Err(e));
            return checks.into_vec();
        }
    };

    // 1. the custom gluing is an isomorphism of the overlap rings
    let gl = (|| -> Result<(bool, String)> {
        let t = RingMorphism::new(
            overlap_inf.clone(),
            overlap0.clone(),
            parse_images(&case.transition, overlap0.ring())?,
        )?;
        let inv = RingMorphism::new(
            overlap0.clone(),
            overlap_inf.clone(),
            parse_images(&case.inverse, overlap_inf.ring())?,
        )?;
        let ok = verify_custom_gluing(&t, &inv, budget)?;
        Ok((ok, "transition and inverse compose to the identity".into()))
    })();
    checks.run("gluing_isomorphism", gl);

    // 2. the bundle gluing is equivariant for the translation actions
    let equi = (|| -> Result<(bool, String)> {
        let b0 = overlap0.extended(vec!["t0"], budget)?;
        let binf = overlap_inf.extended(vec!["tinf"], budget)?;
        let mut images = parse_images(&case.transition, b0.ring())?;
        images.insert("tinf".into(), parse_polynomial(b0.ring(), &case.bundle_transition)?);
        let t = RingMorphism::new(binf.clone(), b0.clone(), images)?;
        if !t.check_well_defined(budget)? {
            return Ok((false, "bundle transition not well defined".into()));
        }
        let d0 = Derivation::new(b0.clone(), {
            let mut m = BTreeMap::new();
            m.insert("t0".to_string(), Polynomial::one(b0.ring()));
            m
        })?;
        let dinf = Derivation::new(binf.clone(), {
            let mut m = BTreeMap::new();
            m.insert("tinf".to_string(), Polynomial::one(binf.ring()));
            m
        })?;
        let ok = crate::lnd::check_equivariant(&t, &dinf, &d0, budget)?;
        Ok((
            ok,
            format!("t_inf = {} intertwines the translations", case.bundle_transition),
        ))
    })();
    checks.run("bundle_gluing_equivariant", equi);

    // 3. local slices on both full bundle charts
    let slices = (|| -> Result<(bool, String)> {
        let b0 = chart0.extended(vec!["t0"], budget)?;
        let d0 = Derivation::new(b0.clone(), {
            let mut m = BTreeMap::new();
            m.insert("t0".to_string(), Polynomial::one(b0.ring()));
            m
        })?;
        let s0 = d0.find_local_slice(1, budget)?;
        let binf = chart_inf.extended(vec!["tinf"], budget)?;
        let dinf = Derivation::new(binf.clone(), {
            let mut m = BTreeMap::new();
            m.insert("tinf".to_string(), Polynomial::one(binf.ring()));
            m
        })?;
        let sinf = dinf.find_local_slice(1, budget)?;
        match (s0, sinf) {
            (Some(a), Some(b)) => Ok((true, format!("slices {a} and {b}"))),
            _ => Ok((false, "no slice found within the degree cap".into())),
        }
    })();
    checks.run("local_slices_both_charts", slices);

    // 4. fiber multiplicity along the kept curve, by the order ladder in
    // the localization where the curve is principal
    let mult = (|| -> Result<(bool, String)> {
        let ring = overlap_inf.ring().clone();
        // localize at the declared unit so the kept curve is V(order_equation)
        let base = {
            let spec = LocalizedChartSpec {
                vars: case.chart_inf.vars.clone(),
                relations: case.chart_inf.relations.clone(),
                inverted: vec![("ordunit".into(), case.order_unit.clone())],
            };
            build_chart(&spec, budget)?
        };
        let _ = ring;
        let r = base.ring().clone();
        let eq = parse_polynomial(&r, &case.order_equation)?;
        let bx = parse_polynomial(&r, &case.base_images_inf.0)?;
        let by = parse_polynomial(&r, &case.base_images_inf.1)?;
        let ord = |g: &Polynomial| -> Result<u32> {
            let mut k = 0u32;
            loop {
                let pow = eq.pow(k + 1)?;
                let ideal = Ideal::new(&r, vec![pow])?
                    .join(base.relations())?;
                if ideal_membership(g, &ideal, budget)? {
                    k += 1;
                    if k > 16 {
                        return Err(Error::Invalid("order ladder exceeded 16".into()));
                    }
                } else {
                    return Ok(k);
                }
            }
        };
        let m = ord(&bx)?.min(ord(&by)?);
        Ok((
            m == case.expect_multiplicity,
            format!(
                "ord({}) = {}, ord({}) = {}, multiplicity {} (expected {})",
                case.base_images_inf.0,
                ord(&bx)?,
                case.base_images_inf.1,
                ord(&by)?,
                m,
                case.expect_multiplicity
            ),
        ))
    })();
    checks.run("fiber_multiplicity_two", mult);

    // 5. reduced fiber is the plane cut out by the stated equations, on the
    // full infinity chart (the fiber lives entirely there)
    let fib = (|| -> Result<(bool, String)> {
        let binf = chart_inf.extended(vec!["tinf"], budget)?;
        let r = binf.ring().clone();
        let mut gens = binf.relations().generators().to_vec();
        gens.push(parse_polynomial(&r, &case.base_images_inf.0)?);
        gens.push(parse_polynomial(&r, &case.base_images_inf.1)?);
        let fiber = Ideal::new(&r, gens)?;
        let expected = Ideal::new(
            &r,
            case.expect_fiber_vanishing
                .iter()
                .map(|s| parse_polynomial(&r, s))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let mut ok = true;
        for g in fiber.generators() {
            if !radical_membership(g, &expected, budget)? {
                ok = false;
            }
        }
        for g in expected.generators() {
            if !radical_membership(g, &fiber, budget)? {
                ok = false;
            }
        }
        let coords: Vec<String> = r
            .vars()
            .iter()
            .filter(|v| {
                !case
                    .expect_fiber_vanishing
                    .iter()
                    .any(|s| s == *v)
            })
            .cloned()
            .collect();
        Ok((
            ok,
            format!("reduced fiber = Spec k[{}]", coords.join(", ")),
        ))
    })();
    checks.run("fiber_reduced_plane", fib);

    checks.into_vec()
}
