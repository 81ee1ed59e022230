//! Pipeline behind `kind = variety-extension`: derivation well-definedness,
//! nilpotency certification, co-action axioms, embedding pullback and
//! equivariance, fiber structure over the base point, quotient-component
//! invariance, Jacobian smoothness, and the optional equivariant
//! modification match.

use super::{Checks, CheckReport, ExtensionCase};
use crate::affinemod::{
    modify_presentation, verify_equivariant_modification, verify_restriction_iso,
    ModificationCenter,
};
use crate::error::{Error, Result};
use crate::ideals::{
    ideal_equality, ideal_membership, is_unit_ideal, jacobian_smooth_along, radical_membership,
    Budget, Ideal,
};
use crate::lnd::{check_equivariant, Derivation, PresentedAlgebra, RingMorphism};
use crate::polycore::{parse_polynomial, Polynomial};
use std::collections::BTreeMap;
use std::sync::Arc;

struct Ctx {
    algebra: Arc<PresentedAlgebra>,
    derivation: Derivation,
}

fn build_ctx(case: &ExtensionCase, budget: &Budget) -> Result<Ctx> {
    let ring = case.ring.build()?;
    let relations = case
        .relations
        .iter()
        .map(|s| parse_polynomial(&ring, s))
        .collect::<Result<Vec<_>>>()?;
    let algebra = PresentedAlgebra::new(&ring, relations, budget)?;
    let images = case
        .derivation
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(&ring, v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let derivation = Derivation::new(algebra.clone(), images)?;
    Ok(Ctx {
        algebra,
        derivation,
    })
}

pub(super) fn run(case: &ExtensionCase, budget: &Budget) -> Vec<CheckReport> {
    let mut checks = Checks::new();
    let ctx = match build_ctx(case, budget) {
        Ok(ctx) => ctx,
        Err(e) => {
            checks.run("setup", Err(e));
            return checks.into_vec();
        }
    };
    let ring = ctx.algebra.ring().clone();

    // 1. well-definedness
    checks.run(
        "derivation_well_defined",
        ctx.derivation.check_well_defined(budget).map(|ok| {
            (
                ok,
                if ok {
                    "images of all relation generators lie in the relation ideal".into()
                } else {
                    first_bad_relation(&ctx, budget)
                },
            )
        }),
    );

    // 2. nilpotency certification
    let indices = ctx
        .derivation
        .check_locally_nilpotent(case.nilpotency_cap, budget);
    checks.run(
        "locally_nilpotent",
        indices.as_ref().map_err(clone_err).map(|idx| {
            let mut ok = true;
            for (var, expect) in &case.expect_nilpotency_indices {
                if idx.get(var) != Some(expect) {
                    ok = false;
                }
            }
            (ok, format!("indices {idx:?}"))
        }),
    );

    // 3. co-action axioms for the exponential
    checks.run(
        "coaction_axioms",
        ctx.derivation
            .exponential(case.nilpotency_cap, budget)
            .and_then(|c| c.check_axioms(budget))
            .map(|ok| (ok, "counit, co-associativity, relation preservation".into())),
    );

    // 4-5. embedding pullback membership and equivariance
    if let Some(emb) = &case.embedding {
        match build_embedding(&ctx, emb, budget) {
            Ok((phi, d_torsor)) => {
                checks.run(
                    "embedding_pullback_membership",
                    phi.check_well_defined(budget).map(|ok| {
                        (
                            ok,
                            "relation pullbacks vanish modulo the torsor ideal".into(),
                        )
                    }),
                );
                checks.run(
                    "embedding_equivariant",
                    check_equivariant(&phi, &ctx.derivation, &d_torsor, budget)
                        .map(|ok| (ok, "co-morphism intertwines the derivations".into())),
                );
                for v in &emb.variants {
                    let outcome = (|| -> Result<(bool, String)> {
                        let images = v
                            .images
                            .iter()
                            .map(|(k, s)| {
                                Ok((k.clone(), parse_polynomial(phi.target().ring(), s)?))
                            })
                            .collect::<Result<BTreeMap<_, _>>>()?;
                        let var_phi = RingMorphism::new(
                            ctx.algebra.clone(),
                            phi.target().clone(),
                            images,
                        )?;
                        let ok = var_phi.check_well_defined(budget)?;
                        Ok((
                            ok == v.expect_well_defined,
                            format!(
                                "variant `{}` well-defined = {ok} (expected {}){}{}",
                                v.label,
                                v.expect_well_defined,
                                if v.note.is_empty() { "" } else { "; " },
                                v.note
                            ),
                        ))
                    })();
                    checks.run(&format!("embedding_variant_{}", v.label), outcome);
                }
            }
            Err(e) => checks.run("embedding_setup", Err(e)),
        }
    }

    // 6-8. fibers
    for (i, fiber) in case.fibers.iter().enumerate() {
        let name = format!(
            "fiber_{}",
            fiber
                .point
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join("_")
        );
        let _ = i;
        checks.run(&name, check_fiber(&ctx, fiber, budget));
    }

    // 10. quotient-component invariance
    for inv in &case.invariants {
        let outcome = (|| -> Result<(bool, String)> {
            let num = parse_polynomial(&ring, &inv.num)?;
            let den = parse_polynomial(&ring, &inv.den)?;
            let ok = ctx
                .derivation
                .check_invariant_fraction(&num, &den, budget)?;
            Ok((
                ok,
                format!("D({}/{}) = 0 on the variety", inv.num, inv.den),
            ))
        })();
        checks.run(&format!("invariant_{}_over_{}", inv.num, inv.den), outcome);
    }

    // 9. smoothness along the declared locus
    if let Some(s) = &case.smoothness {
        let outcome = (|| -> Result<(bool, String)> {
            let at = Ideal::new(
                &ring,
                s.at.iter()
                    .map(|f| parse_polynomial(&ring, f))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let ok = jacobian_smooth_along(ctx.algebra.relations(), &at, s.codim, budget)?;
            Ok((
                ok,
                format!(
                    "relations + locus + {0}x{0} Jacobian minors generate the unit ideal",
                    s.codim
                ),
            ))
        })();
        checks.run("smooth_along_locus", outcome);
    }

    // 11. equivariant modification match
    if let Some(m) = &case.modification {
        run_modification(&ctx, m, budget, &mut checks);
    }

    checks.into_vec()
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::ResourceBudgetExceeded { steps, cap } => Error::ResourceBudgetExceeded {
            steps: *steps,
            cap: *cap,
        },
        Error::CapExceeded(v) => Error::CapExceeded(v.clone()),
        other => Error::Invalid(other.to_string()),
    }
}

fn first_bad_relation(ctx: &Ctx, budget: &Budget) -> String {
    for g in ctx.algebra.relations().generators() {
        if let Ok(dg) = ctx.derivation.apply(g) {
            if let Ok(false) = ctx.algebra.is_zero_mod(&dg, budget) {
                return format!("witness: D({g}) = {dg} is not in the relation ideal");
            }
        }
    }
    "no witness found".into()
}

fn build_embedding(
    ctx: &Ctx,
    emb: &super::EmbeddingSpec,
    budget: &Budget,
) -> Result<(RingMorphism, Derivation)> {
    let torsor_ring = emb.torsor_ring.build()?;
    let rels = emb
        .torsor_relations
        .iter()
        .map(|s| parse_polynomial(&torsor_ring, s))
        .collect::<Result<Vec<_>>>()?;
    let torsor = PresentedAlgebra::new(&torsor_ring, rels, budget)?;
    let d_images = emb
        .torsor_derivation
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(&torsor_ring, v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let d_torsor = Derivation::new(torsor.clone(), d_images)?;
    let images = emb
        .images
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(&torsor_ring, v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let phi = RingMorphism::new(ctx.algebra.clone(), torsor, images)?;
    Ok((phi, d_torsor))
}

/// Specializes the base point into the relations and checks the expected
/// fiber structure.
fn check_fiber(
    ctx: &Ctx,
    fiber: &super::FiberSpec,
    budget: &Budget,
) -> Result<(bool, String)> {
    let ring = ctx.algebra.ring().clone();
    // fiber ideal: relations + (var - value)
    let mut gens = ctx.algebra.relations().generators().to_vec();
    let mut point_polys = Vec::new();
    for (var, value) in &fiber.point {
        let v = parse_polynomial(&ring, var)?;
        let c = parse_polynomial(&ring, value)?;
        let g = v.sub(&c)?;
        point_polys.push(g.clone());
        gens.push(g);
    }
    let fiber_ideal = Ideal::new(&ring, gens)?;

    // substituted relations (for principal fiber shapes)
    let point_map: BTreeMap<String, Polynomial> = fiber
        .point
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(&ring, v)?)))
        .collect::<Result<_>>()?;
    let substituted: Vec<Polynomial> = ctx
        .algebra
        .relations()
        .generators()
        .iter()
        .map(|g| g.substitute(&point_map, &ring))
        .collect::<Result<_>>()?;
    let nonzero: Vec<&Polynomial> = substituted.iter().filter(|g| !g.is_zero()).collect();

    match &fiber.expect {
        super::FiberExpect::Empty => {
            let ok = is_unit_ideal(&fiber_ideal, budget)?;
            Ok((ok, "specialized ideal is the unit ideal".into()))
        }
        super::FiberExpect::ReducedPlane { vanishing, coords } => {
            let mut expected_gens = point_polys.clone();
            for v in vanishing {
                expected_gens.push(parse_polynomial(&ring, v)?);
            }
            let expected = Ideal::new(&ring, expected_gens)?;
            // mutual radical membership
            let mut ok = true;
            for g in fiber_ideal.generators() {
                if !radical_membership(g, &expected, budget)? {
                    ok = false;
                }
            }
            for g in expected.generators() {
                if !radical_membership(g, &fiber_ideal, budget)? {
                    ok = false;
                }
            }
            let exact = ideal_equality(&fiber_ideal, &expected, budget)?;
            Ok((
                ok,
                format!(
                    "reduced fiber = Spec k[{}]{}",
                    coords.join(", "),
                    if exact {
                        " (scheme-theoretically reduced)"
                    } else {
                        " (up to nilpotents)"
                    }
                ),
            ))
        }
        super::FiberExpect::ReducedPresentation { relations } => {
            let mut expected_gens = point_polys.clone();
            for v in relations {
                expected_gens.push(parse_polynomial(&ring, v)?);
            }
            let expected = Ideal::new(&ring, expected_gens)?;
            let ok = ideal_equality(&fiber_ideal, &expected, budget)?;
            Ok((
                ok,
                format!("fiber presented by {{{}}}", relations.join(", ")),
            ))
        }
        super::FiberExpect::PrincipalMultiplicity { var, multiplicity } => {
            if nonzero.len() != 1 {
                return Ok((
                    false,
                    format!("expected one nonzero specialized relation, got {}", nonzero.len()),
                ));
            }
            let m = nonzero[0].univariate_multiplicity(var)?;
            Ok((
                m == *multiplicity,
                format!("principal fiber ({}) has multiplicity {m}", nonzero[0]),
            ))
        }
        super::FiberExpect::Squarefree { var } => {
            if nonzero.len() != 1 {
                return Ok((
                    false,
                    format!("expected one nonzero specialized relation, got {}", nonzero.len()),
                ));
            }
            let ok = nonzero[0].univariate_squarefree(var)?;
            Ok((
                ok,
                format!("principal fiber ({}) is squarefree", nonzero[0]),
            ))
        }
        super::FiberExpect::TwoComponents {
            components,
            trivial_action,
        } => {
            if components.len() != 2 {
                return Ok((false, "expected exactly two components".into()));
            }
            let comp_ideals: Vec<Ideal> = components
                .iter()
                .map(|extra| {
                    let mut gens = point_polys.clone();
                    for s in extra {
                        gens.push(parse_polynomial(&ring, s)?);
                    }
                    Ideal::new(&ring, gens)
                })
                .collect::<Result<_>>()?;
            // fiber contains both components
            for (k, comp) in comp_ideals.iter().enumerate() {
                for g in fiber_ideal.generators() {
                    if !ideal_membership(g, comp, budget)? {
                        return Ok((
                            false,
                            format!("fiber generator {g} does not vanish on component {k}"),
                        ));
                    }
                }
            }
            // components are disjoint
            if !is_unit_ideal(&comp_ideals[0].join(&comp_ideals[1])?, budget)? {
                return Ok((false, "components are not disjoint".into()));
            }
            // the fiber has no points outside the two components
            for g in comp_ideals[0].generators() {
                for h in comp_ideals[1].generators() {
                    let prod = g.mul(h)?;
                    if !radical_membership(&prod, &fiber_ideal, budget)? {
                        return Ok((
                            false,
                            format!("product {prod} misses the radical of the fiber"),
                        ));
                    }
                }
            }
            if *trivial_action {
                for (k, comp) in comp_ideals.iter().enumerate() {
                    let gb = comp.groebner(budget)?;
                    for img in ctx.derivation.images().values() {
                        if !gb.contains(img, budget)? {
                            return Ok((
                                false,
                                format!("derivation image {img} is nonzero on component {k}"),
                            ));
                        }
                    }
                }
            }
            Ok((
                true,
                "two disjoint reduced planes, trivial induced action".into(),
            ))
        }
    }
}

fn run_modification(
    ctx: &Ctx,
    spec: &super::ModificationSpec,
    budget: &Budget,
    checks: &mut Checks,
) {
    let setup = (|| -> Result<_> {
        let src_ring = spec.source_ring.build()?;
        let rels = spec
            .source_relations
            .iter()
            .map(|s| parse_polynomial(&src_ring, s))
            .collect::<Result<Vec<_>>>()?;
        let source = PresentedAlgebra::new(&src_ring, rels, budget)?;
        let d_src = Derivation::new(
            source.clone(),
            spec.source_derivation
                .iter()
                .map(|(k, v)| Ok((k.clone(), parse_polynomial(&src_ring, v)?)))
                .collect::<Result<BTreeMap<_, _>>>()?,
        )?;
        let divisor = parse_polynomial(&src_ring, &spec.divisor)?;
        let center = spec
            .center
            .iter()
            .map(|s| parse_polynomial(&src_ring, s))
            .collect::<Result<Vec<_>>>()?;
        let center = ModificationCenter::new(source.clone(), divisor, center, budget)?;
        let modified = modify_presentation(&center, budget)?;
        Ok((source, d_src, modified))
    })();
    let (source, d_src, modified) = match setup {
        Ok(v) => v,
        Err(e) => {
            checks.run("modification_setup", Err(e));
            return;
        }
    };
    let _ = source;
    let mring = modified.algebra.ring().clone();

    checks.run(
        "modification_restriction_iso",
        verify_restriction_iso(&modified, budget).map(|ok| {
            (
                ok,
                format!(
                    "structure morphism invertible off {} with T_i = g_i / f",
                    spec.divisor
                ),
            )
        }),
    );

    let d_new = spec
        .modified_derivation
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_polynomial(&mring, v)?)))
        .collect::<Result<BTreeMap<_, _>>>()
        .and_then(|imgs| Derivation::new(modified.algebra.clone(), imgs));
    match d_new {
        Ok(d_new) => {
            checks.run(
                "modification_equivariant",
                verify_equivariant_modification(&modified, &d_src, &d_new, budget)
                    .map(|ok| (ok, "sigma intertwines the derivations".into())),
            );
        }
        Err(e) => checks.run("modification_equivariant", Err(e)),
    }

    // mutual isomorphism with this case's presentation
    let iso = (|| -> Result<(bool, String)> {
        let fwd_images = spec
            .match_forward
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_polynomial(ctx.algebra.ring(), v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let forward = RingMorphism::new(modified.algebra.clone(), ctx.algebra.clone(), fwd_images)?;
        let bwd_images = spec
            .match_backward
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_polynomial(&mring, v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let backward = RingMorphism::new(ctx.algebra.clone(), modified.algebra.clone(), bwd_images)?;
        let ok = forward.check_well_defined(budget)?
            && backward.check_well_defined(budget)?
            && backward.compose(&forward)?.is_identity(budget)?
            && forward.compose(&backward)?.is_identity(budget)?;
        Ok((
            ok,
            "modified presentation and case presentation are mutually inverse".into(),
        ))
    })();
    checks.run("modification_matches_case", iso);
}
