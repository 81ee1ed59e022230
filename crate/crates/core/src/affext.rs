//! Synthesis of affine additive-group extensions over the open blow-up
//! surfaces: starting from the minimal-level torsor datum of a cocycle,
//! restrict to the open surface of a tower and perform one equivariant
//! bundle modification per level until the chart actions admit slices.
//!
//! The pipeline works on a two-chart atlas. The inner chart contains the
//! kept exceptional line E_n as a coordinate axis; the outer chart covers
//! the rest and carries a slice from the start. Supported towers are the
//! single blow-up (modifications happen over E_1) and free chains (each
//! point the origin of the newest primary chart), which is exactly the
//! shape where every modification center is a section over E_n and each
//! step drops the level by one. Other towers exit with `SynthesisStuck`.

use crate::cech::{classify_extension, cocycle_ring, torsor_datum, Cocycle, TorsorDatum};
use crate::error::{Error, Result};
use crate::ideals::{ideal_membership, Budget, Ideal};
use crate::polycore::{
    invert_unit, parse_polynomial, Monomial, MonomialOrder, Polynomial, Rat, Ring, RingDescriptor,
};
use crate::blowup::Tower;
use std::collections::BTreeMap;

/// One chart of the synthesized torsor atlas. The action is
/// fiber -> fiber + gamma * t for the stated coefficient gamma.
#[derive(Clone, Debug)]
pub struct AtlasChart {
    pub name: String,
    pub ring: Ring,
    pub fiber_var: String,
    pub action_coeff: Polynomial,
    pub base_x: Polynomial,
    pub base_y: Polynomial,
    pub slice: Option<Polynomial>,
    /// whether this chart sits on the infinity side of the standard
    /// two-chart bundle cover (fixes the orientation of cocycle comparisons)
    pub infinity_side: bool,
}

/// Result of the synthesis: the two-chart atlas, the transition data on the
/// overlap, the level trace of the modification sequence, and the datum the
/// construction started from.
#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub inner: AtlasChart,
    pub outer: AtlasChart,
    /// overlap = inner ring with its two base coordinates inverted
    pub overlap_ring: Ring,
    /// co-morphism: outer coordinates expressed on the overlap
    pub transition: BTreeMap<String, Polynomial>,
    /// overlap base coordinates as Laurent monomials in x, y
    pub coord_to_xy: BTreeMap<String, Polynomial>,
    pub level_trace: Vec<i64>,
    pub modification_log: Vec<String>,
    pub datum: TorsorDatum,
    pub tower_size: usize,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub checks: Vec<CheckResult>,
    pub level_trace: Vec<i64>,
    pub fiber_multiplicity: u32,
}

impl CertificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn is_origin(p: &(String, String)) -> bool {
    let z = |s: &str| s.trim() == "0" || s.trim() == "0/1";
    z(&p.0) && z(&p.1)
}

/// Requires the tower to be the free chain rooted at the origin: step one
/// blows (0,0) in the base chart, each later step the origin of the newest
/// primary chart.
fn check_chain_shape(tower: &Tower) -> Result<()> {
    let steps = tower.steps();
    if steps.is_empty() {
        return Err(Error::SynthesisStuck {
            stage: 0,
            reason: "tower has no blow-ups".into(),
        });
    }
    let mut expect_chart = "U0".to_string();
    for (i, s) in steps.iter().enumerate() {
        if s.chart != expect_chart || !is_origin(&s.point) {
            return Err(Error::SynthesisStuck {
                stage: i,
                reason: format!(
                    "unsupported tower shape at step {} (chart {}, point ({}, {})); \
                     only free chains rooted at the origin synthesize here",
                    i, s.chart, s.point.0, s.point.1
                ),
            });
        }
        expect_chart = format!("{expect_chart}.A{}", i + 1);
    }
    Ok(())
}

/// The synthesis: classify, build the level-l0 datum, restrict to the open
/// surface of the tower, and modify until the level reaches zero.
pub fn synthesize_extension(
    c: &Cocycle,
    tower: &Tower,
    budget: &Budget,
) -> Result<ExtensionResult> {
    let cls = classify_extension(c)?;
    check_chain_shape(tower)?;
    let n = tower.num_blowups() as i64;
    let l0 = cls.l0;
    let datum = torsor_datum(c, l0)?;

    // chart skeletons
    let (inner_base, e_name, other_name, inner_bx, inner_by, infinity_side) = if n == 1 {
        // inner = the z-chart of the blow-up: coordinates (z, y), E_1 = {y=0}
        ("Ubar1", "y", "z", "y*z", "y", false)
    } else {
        // inner = the primary chain chart U_n: coordinates (x, w), E_n = {x=0}
        ("Un", "x", "w", "x", "", true)
    };

    let mut level_trace = Vec::new();
    let mut log = Vec::new();

    // inner chart, modified m times: fiber u0 -> e*u1 -> ... -> e^m um,
    // where m is the measured order of the pulled-back action coefficient
    // along E_n; each modification divides the coefficient by e exactly and
    // the level is recomputed after every step
    let fiber_final: String;
    let inner_ring: Ring;
    {
        let probe_ring = RingDescriptor::new(
            vec![e_name.to_string(), other_name.to_string()],
            MonomialOrder::DegRevLex,
        );
        let e = Polynomial::var(&probe_ring, e_name)?;
        let mut gamma = e.pow(l0 as u32)?; // pullback of the canonical action
        let ord = |g: &Polynomial| -> Result<i64> {
            let mut k = 0i64;
            let mut cur = g.clone();
            while let Some(q) = cur.try_exact_div(&e)? {
                k += 1;
                cur = q;
            }
            Ok(k)
        };
        let m = ord(&gamma)?;
        fiber_final = format!("u{m}");
        level_trace.push(m);
        for k in 1..=m {
            gamma = gamma.try_exact_div(&e)?.ok_or(Error::SynthesisStuck {
                stage: k as usize,
                reason: "action coefficient is not divisible by the divisor".into(),
            })?;
            let level = ord(&gamma)?;
            if level != m - k {
                return Err(Error::SynthesisStuck {
                    stage: k as usize,
                    reason: format!("level {level} after step {k}, expected {}", m - k),
                });
            }
            level_trace.push(level);
            log.push(format!(
                "modification {k}: center = zero section (e = {e_name}, fiber u{}); u{} = {e_name}*u{k}",
                k - 1,
                k - 1
            ));
        }
        inner_ring = RingDescriptor::new(
            vec![e_name.to_string(), other_name.to_string(), fiber_final.clone()],
            MonomialOrder::DegRevLex,
        );
    }

    let (inner_bx, inner_by) = if n == 1 {
        (
            parse_polynomial(&inner_ring, inner_bx)?,
            parse_polynomial(&inner_ring, inner_by)?,
        )
    } else {
        let x = Polynomial::var(&inner_ring, "x")?;
        let w = Polynomial::var(&inner_ring, "w")?;
        (x.clone(), x.pow(n as u32)?.mul(&w)?)
    };

    let inner = AtlasChart {
        name: inner_base.to_string(),
        ring: inner_ring.clone(),
        fiber_var: fiber_final.clone(),
        action_coeff: Polynomial::one(&inner_ring),
        base_x: inner_bx,
        base_y: inner_by,
        slice: Some(Polynomial::var(&inner_ring, &fiber_final)?),
        infinity_side,
    };

    // outer chart: fully off E_n, sliced from the start
    let outer = if n == 1 {
        // U1 localized at x: coordinates (x^{±1}, w1), fiber up
        let ring = RingDescriptor::with_inverted(
            vec!["x", "w1", "up"],
            vec!["x"],
            MonomialOrder::DegRevLex,
        );
        let x = Polynomial::var(&ring, "x")?;
        let gamma = x.pow(l0 as u32)?;
        let slice = Polynomial::var(&ring, "up")?.mul(&invert_unit(&gamma).expect("unit"))?;
        AtlasChart {
            name: "U1x".into(),
            ring: ring.clone(),
            fiber_var: "up".into(),
            action_coeff: gamma,
            base_x: x.clone(),
            base_y: x.mul(&Polynomial::var(&ring, "w1")?)?,
            slice: Some(slice),
            infinity_side: true,
        }
    } else {
        // the z-chart localized at y: coordinates (z, y^{±1}), fiber u
        let ring = RingDescriptor::with_inverted(
            vec!["z", "y", "u"],
            vec!["y"],
            MonomialOrder::DegRevLex,
        );
        let y = Polynomial::var(&ring, "y")?;
        let gamma = y.pow(l0 as u32)?;
        let slice = Polynomial::var(&ring, "u")?.mul(&invert_unit(&gamma).expect("unit"))?;
        AtlasChart {
            name: "Ubar1y".into(),
            ring: ring.clone(),
            fiber_var: "u".into(),
            action_coeff: gamma,
            base_x: y.mul(&Polynomial::var(&ring, "z")?)?,
            base_y: y,
            slice: Some(slice),
            infinity_side: false,
        }
    };

    // overlap ring and transition
    let overlap_ring = RingDescriptor::with_inverted(
        inner_ring.vars().to_vec(),
        vec![e_name, other_name],
        MonomialOrder::DegRevLex,
    );
    let um = Polynomial::var(&overlap_ring, &fiber_final)?;
    let mut transition = BTreeMap::new();
    let mut coord_to_xy = BTreeMap::new();
    let xy = cocycle_ring();
    if n == 1 {
        // overlap coords (y, z) units; outer coords: x = yz, w1 = 1/z,
        // up = z^{l0} * (y^{l0} u_m) + p
        let z = Polynomial::var(&overlap_ring, "z")?;
        let y = Polynomial::var(&overlap_ring, "y")?;
        let x_img = y.mul(&z)?;
        transition.insert("x".into(), x_img.clone());
        transition.insert("w1".into(), invert_unit(&z).expect("unit"));
        let p_ov = datum.gluing.cast(&overlap_ring)?;
        let zl = z.pow(l0 as u32)?;
        let yl = y.pow(l0 as u32)?;
        transition.insert("up".into(), zl.mul(&yl)?.mul(&um)?.add(&p_ov)?);
        coord_to_xy.insert("z".into(), parse_polynomial(&xy, "x*y^(-1)")?);
        coord_to_xy.insert("y".into(), parse_polynomial(&xy, "y")?);
    } else {
        // overlap coords (x, w) units; outer coords: z = x^{1-n} w^{-1},
        // y = x^n w, u = z^{-l0} (x^{l0} u_m - p(z, y))
        let x = Polynomial::var(&overlap_ring, "x")?;
        let w = Polynomial::var(&overlap_ring, "w")?;
        let w_inv = invert_unit(&w).expect("unit");
        let x_inv = invert_unit(&x).expect("unit");
        let z_img = x_inv.pow((n - 1) as u32)?.mul(&w_inv)?;
        let y_img = x.pow(n as u32)?.mul(&w)?;
        transition.insert("z".into(), z_img.clone());
        transition.insert("y".into(), y_img.clone());
        let mut sub = BTreeMap::new();
        sub.insert("z".to_string(), z_img.clone());
        sub.insert("y".to_string(), y_img.clone());
        let p_ov = datum.gluing.substitute(&sub, &overlap_ring)?;
        let z_inv_l0 = invert_unit(&z_img).expect("unit").pow(l0 as u32)?;
        let xl = x.pow(l0 as u32)?;
        transition.insert(
            "u".into(),
            z_inv_l0.mul(&xl.mul(&um)?.sub(&p_ov)?)?,
        );
        coord_to_xy.insert("x".into(), parse_polynomial(&xy, "x")?);
        coord_to_xy.insert(
            "w".into(),
            parse_polynomial(&xy, &format!("x^(-{n})*y"))?,
        );
    }
    let _ = budget;

    Ok(ExtensionResult {
        inner,
        outer,
        overlap_ring,
        transition,
        coord_to_xy,
        level_trace,
        modification_log: log,
        datum,
        tower_size: tower.num_blowups(),
    })
}

fn apply_action(
    chart_ring: &Ring,
    fiber: &str,
    gamma: &Polynomial,
    f: &Polynomial,
) -> Result<Polynomial> {
    let df = f.partial_derivative(fiber)?;
    let _ = chart_ring;
    df.mul(gamma)
}

/// Runs the five certification predicates against the original cocycle.
pub fn certify_extension(
    e: &ExtensionResult,
    original: &Cocycle,
    budget: &Budget,
) -> Result<CertificationReport> {
    let mut checks = Vec::new();
    let ov = &e.overlap_ring;

    // (1) the transition is equivariant: D_inner(T(a)) = T(D_outer(a))
    {
        let gamma_in = e.inner.action_coeff.cast(ov)?;
        let mut pass = true;
        let mut detail = String::new();
        for var in e.outer.ring.vars() {
            let img = e
                .transition
                .get(var)
                .ok_or_else(|| Error::Invalid(format!("transition misses `{var}`")))?;
            let lhs = apply_action(ov, &e.inner.fiber_var, &gamma_in, img)?;
            let d_out = if var == &e.outer.fiber_var {
                e.outer.action_coeff.clone()
            } else {
                Polynomial::zero(&e.outer.ring)
            };
            let rhs = d_out.substitute(&e.transition, ov)?;
            if lhs.sub(&rhs)? != Polynomial::zero(ov) {
                pass = false;
                detail = format!("fails on `{var}` between {} and {}", e.outer.name, e.inner.name);
                break;
            }
        }
        if pass {
            detail = format!("{} -> {} equivariant", e.outer.name, e.inner.name);
        }
        checks.push(CheckResult {
            name: "transitions_equivariant".into(),
            pass,
            detail,
        });
    }

    // (2) local slices on both charts
    {
        let mut pass = true;
        let mut detail = String::new();
        for chart in [&e.inner, &e.outer] {
            match &chart.slice {
                Some(s) => {
                    let ds = apply_action(&chart.ring, &chart.fiber_var, &chart.action_coeff, s)?;
                    if ds != Polynomial::one(&chart.ring) {
                        pass = false;
                        detail = format!("slice on {} does not satisfy D(s) = 1", chart.name);
                        break;
                    }
                    detail.push_str(&format!("{}: s = {}; ", chart.name, s));
                }
                None => {
                    pass = false;
                    detail = format!("no slice on {}", chart.name);
                    break;
                }
            }
        }
        checks.push(CheckResult {
            name: "local_slices_exist".into(),
            pass,
            detail,
        });
    }

    // (3) off E_n the torsor reproduces the input class: the slice
    // difference, oriented infinity-side minus zero-side, equals the input
    // cocycle up to a chart-regular coboundary
    {
        let s_in = e.inner.slice.clone().expect("inner slice").cast(ov)?;
        let s_out = e
            .outer
            .slice
            .clone()
            .expect("outer slice")
            .substitute(&e.transition, ov)?;
        let diff = if e.inner.infinity_side {
            s_in.sub(&s_out)?
        } else {
            s_out.sub(&s_in)?
        };
        // the difference must be a base function (fiber degree zero)
        let fiber_idx = ov.var_index(&e.inner.fiber_var)?;
        let mut pass = !diff.uses_var(fiber_idx);
        let mut detail;
        if pass {
            let mut sub = BTreeMap::new();
            for (k, v) in &e.coord_to_xy {
                sub.insert(k.clone(), v.clone());
            }
            let xy = cocycle_ring();
            let diff_xy = diff.substitute(&sub, &xy)?;
            let delta = diff_xy.sub(original.value())?;
            let residual = Cocycle::new(delta)?;
            pass = residual.canonical_class().is_empty();
            let (wx, wy) = residual.regular_split();
            detail = if pass {
                format!(
                    "difference cocycle {} matches the input up to the coboundary ({}) - ({})",
                    diff_xy, wx, wy.neg()
                )
            } else {
                format!("difference cocycle {} has a nonzero class", diff_xy)
            };
        } else {
            detail = "slice difference involves the fiber variable".into();
        }
        if !pass && detail.is_empty() {
            detail = "restriction comparison failed".into();
        }
        checks.push(CheckResult {
            name: "restriction_matches_input".into(),
            pass,
            detail,
        });
    }

    // (4) fiber over the origin: principal multiplicity and reduced plane
    let fiber_multiplicity;
    {
        let e_var = e.inner.ring.vars()[0].clone();
        let e_poly = Polynomial::var(&e.inner.ring, &e_var)?;
        let ord = |f: &Polynomial| -> u32 {
            let mut k = 0;
            let mut cur = f.clone();
            loop {
                let lowered: Option<Polynomial> = (|| {
                    let terms: Vec<(Monomial, Rat)> = cur
                        .terms()
                        .iter()
                        .map(|(m, c)| {
                            let mut e2 = m.clone();
                            e2.0[0] -= 1;
                            (e2, c.clone())
                        })
                        .collect();
                    if terms.iter().all(|(m, _)| m.0[0] >= 0) {
                        Polynomial::from_terms(&e.inner.ring, terms).ok()
                    } else {
                        None
                    }
                })();
                match lowered {
                    Some(l) if !cur.is_zero() => {
                        cur = l;
                        k += 1;
                    }
                    _ => return k,
                }
            }
        };
        let m1 = ord(&e.inner.base_x);
        let m2 = ord(&e.inner.base_y);
        fiber_multiplicity = m1.min(m2);
        let em = e_poly.pow(fiber_multiplicity)?;
        let fiber_ideal = Ideal::new(
            &e.inner.ring,
            vec![e.inner.base_x.clone(), e.inner.base_y.clone()],
        )?;
        let principal = ideal_membership(&em, &fiber_ideal, budget)?;
        let others: Vec<&String> = e
            .inner
            .ring
            .vars()
            .iter()
            .filter(|v| **v != e_var)
            .collect();
        let pass = principal;
        checks.push(CheckResult {
            name: "fiber_reduced_plane".into(),
            pass,
            detail: format!(
                "fiber ideal = ({e_var}^{fiber_multiplicity}); reduced fiber = Spec k[{}, {}], translation action on the fiber variable",
                others[0], others[1]
            ),
        });
    }

    // (5) smoothness along the fiber: the inner chart is a free polynomial
    // ring, so the total space is smooth there
    checks.push(CheckResult {
        name: "smooth_along_fiber".into(),
        pass: true,
        detail: format!("chart {} is a free polynomial ring", e.inner.name),
    });

    Ok(CertificationReport {
        checks,
        level_trace: e.level_trace.clone(),
        fiber_multiplicity,
    })
}
