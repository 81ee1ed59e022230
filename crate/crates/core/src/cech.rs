//! Cech 1-cocycles on the punctured plane for the two-chart cover by the
//! principal opens {x != 0} and {y != 0}, canonical class reduction, the
//! minimal-level classification, torsor gluing data over the blow-up,
//! restriction to the exceptional line, homogeneous torsor presentations,
//! and the constructive coboundary reduction on bundle total spaces.
//!
//! All cohomology here is Cech data on fixed two-chart covers; the blow-up
//! overlap carries coordinates (z, y) with x = y*z, the exceptional line is
//! {y = 0}, and the bundle gluing has the shape u' = z^l * u + p(z, y).

use crate::error::{Error, Result};
use crate::ideals::Budget;
use crate::lnd::{Derivation, PresentedAlgebra};
use crate::polycore::{
    parse_polynomial, Monomial, MonomialOrder, Polynomial, Rat, Ring, RingDescriptor,
};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Laurent ring k[x^{±1}, y^{±1}] housing cocycles on the punctured plane.
pub fn cocycle_ring() -> Ring {
    RingDescriptor::with_inverted(vec!["x", "y"], vec!["x", "y"], MonomialOrder::DegRevLex)
}

/// Overlap ring of the two blow-up charts: k[z^{±1}, y] with x = y*z.
pub fn overlap_base_ring() -> Ring {
    RingDescriptor::with_inverted(vec!["z", "y"], vec!["z"], MonomialOrder::DegRevLex)
}

/// Overlap ring of the bundle total space: adds the chart-0 fiber variable.
pub fn overlap_bundle_ring() -> Ring {
    RingDescriptor::with_inverted(vec!["z", "y", "u"], vec!["z"], MonomialOrder::DegRevLex)
}

/// Chart-0 ring of the bundle: regular in z.
pub fn chart0_bundle_ring() -> Ring {
    RingDescriptor::new(vec!["z", "y", "u"], MonomialOrder::DegRevLex)
}

/// Chart-infinity ring of the bundle: coordinates (zp, x, up) with
/// zp = 1/z, x = y*z, up = z^l*u + p.
pub fn chart_inf_bundle_ring() -> Ring {
    RingDescriptor::new(vec!["zp", "x", "up"], MonomialOrder::DegRevLex)
}

/// A Cech 1-cocycle on the punctured plane, stored as a Laurent polynomial
/// in x and y.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    value: Polynomial,
}

impl Cocycle {
    pub fn new(value: Polynomial) -> Result<Self> {
        crate::polycore::same_ring(value.ring(), &cocycle_ring())?;
        Ok(Cocycle { value })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Cocycle::new(parse_polynomial(&cocycle_ring(), src)?)
    }

    /// Builds x^{-m} y^{-n} p(x, y) from the normalized data.
    pub fn from_mnp(m: i64, n: i64, p: &Polynomial) -> Result<Self> {
        let ring = cocycle_ring();
        let pc = p.cast(&ring)?;
        let shift = Monomial(vec![-(m as i32), -(n as i32)]);
        Ok(Cocycle {
            value: pc.mul_term(&shift, &num_traits::One::one()),
        })
    }

    pub fn value(&self) -> &Polynomial {
        &self.value
    }

    /// The normalized shape (m, n, p) with m, n >= 0 minimal and p a plain
    /// polynomial not divisible by x (resp. y) whenever m > 0 (resp. n > 0).
    pub fn normalized_mnp(&self) -> (i64, i64, Polynomial) {
        let min_x = self
            .value
            .terms()
            .iter()
            .map(|(mo, _)| mo.0[0])
            .min()
            .unwrap_or(0);
        let min_y = self
            .value
            .terms()
            .iter()
            .map(|(mo, _)| mo.0[1])
            .min()
            .unwrap_or(0);
        let m = (-min_x).max(0);
        let n = (-min_y).max(0);
        let plain = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let terms = self
            .value
            .terms()
            .iter()
            .map(|(mo, c)| (Monomial(vec![mo.0[0] + m, mo.0[1] + n]), c.clone()))
            .collect();
        let p = Polynomial::from_terms(&plain, terms).expect("shifted exponents nonnegative");
        (m as i64, n as i64, p)
    }

    /// The class in H^1 of the punctured plane: monomials regular on either
    /// chart drop, leaving the span of x^{-i} y^{-j} with i, j >= 1. Keys
    /// are (i, j) with positive entries.
    pub fn canonical_class(&self) -> BTreeMap<(i64, i64), Rat> {
        let mut out = BTreeMap::new();
        for (mono, c) in self.value.terms() {
            let (ex, ey) = (mono.0[0], mono.0[1]);
            if ex < 0 && ey < 0 {
                out.insert((-(ex as i64), -(ey as i64)), c.clone());
            }
        }
        out
    }

    /// The chart-wise splitting of the regular part: returns (on_x, on_y)
    /// with value = canonical + on_x + on_y, where on_x is regular on the
    /// chart {x != 0} (exponent of y >= 0) and on_y on {y != 0}.
    pub fn regular_split(&self) -> (Polynomial, Polynomial) {
        let ring = self.value.ring().clone();
        let mut on_x = Vec::new();
        let mut on_y = Vec::new();
        for (mono, c) in self.value.terms() {
            let (ex, ey) = (mono.0[0], mono.0[1]);
            if ex < 0 && ey < 0 {
                continue;
            }
            if ey >= 0 {
                on_x.push((mono.clone(), c.clone()));
            } else {
                on_y.push((mono.clone(), c.clone()));
            }
        }
        (
            Polynomial::from_terms(&ring, on_x).expect("subset of terms"),
            Polynomial::from_terms(&ring, on_y).expect("subset of terms"),
        )
    }
}

/// Result of the minimal-level classification of a cocycle class.
#[derive(Clone, Debug)]
pub struct ExtensionClassification {
    /// minimal level: max of i+j over the surviving monomials x^{-i}y^{-j}
    pub l0: i64,
    pub canonical: BTreeMap<(i64, i64), Rat>,
    /// lowest degree with a surviving homogeneous component
    pub d_surviving: i64,
    /// lowest degree of p before reduction (the textbook formula's d)
    pub d_raw: i64,
    /// whether the two notions of d agree for this cocycle
    pub raw_agrees: bool,
    pub restriction_nonzero_at_l0: bool,
}

/// Classifies a cocycle: minimal level l0 = m + n - d with d the lowest
/// degree whose component survives canonical reduction. Errors with
/// `TrivialNearO` on an empty canonical class.
pub fn classify_extension(c: &Cocycle) -> Result<ExtensionClassification> {
    let canonical = c.canonical_class();
    if canonical.is_empty() {
        return Err(Error::TrivialNearO);
    }
    let l0 = canonical.keys().map(|(i, j)| i + j).max().expect("nonempty");
    let (m, n, p) = c.normalized_mnp();
    let (_, lowest) = p.homogeneous_decompose()?;
    let d_raw = lowest.expect("nonzero cocycle");
    let d_surviving = m + n - l0;
    let datum = torsor_datum_from_canonical(&canonical, l0)?;
    let restriction_nonzero_at_l0 = restrict_to_e(&datum).iter().any(|c| !c.is_zero());
    Ok(ExtensionClassification {
        l0,
        canonical,
        d_surviving,
        d_raw,
        raw_agrees: d_raw == d_surviving,
        restriction_nonzero_at_l0,
    })
}

/// Gluing datum of an M(l)-torsor over the blow-up: u' = z^l * u + gluing
/// on the chart overlap, with the gluing expressed in overlap coordinates
/// (z, y).
#[derive(Clone, Debug)]
pub struct TorsorDatum {
    pub level: i64,
    pub gluing: Polynomial,
}

/// Builds the level-l datum of a cocycle by substituting x = y*z into its
/// canonical part and multiplying by x^l. Requires l at least the minimal
/// level (otherwise the gluing would not extend over the exceptional line).
/// The chart-regular part of the cocycle is a coboundary and contributes
/// nothing to the isomorphism class, so the datum is built from the
/// canonical monomials alone.
pub fn torsor_datum(c: &Cocycle, level: i64) -> Result<TorsorDatum> {
    let cls = classify_extension(c)?;
    if level < cls.l0 {
        return Err(Error::LevelBelowL0 {
            level,
            l0: cls.l0,
        });
    }
    torsor_datum_from_canonical(&cls.canonical, level)
}

fn torsor_datum_from_canonical(
    canonical: &BTreeMap<(i64, i64), Rat>,
    level: i64,
) -> Result<TorsorDatum> {
    let ring = overlap_base_ring();
    let mut terms = Vec::new();
    for (&(i, j), c) in canonical {
        // x^{l-i} y^{-j} = z^{l-i} y^{l-i-j}
        let ez = (level - i) as i32;
        let ey = (level - i - j) as i32;
        if ey < 0 {
            return Err(Error::LevelBelowL0 {
                level,
                l0: i + j,
            });
        }
        terms.push((Monomial(vec![ez, ey]), c.clone()));
    }
    Ok(TorsorDatum {
        level,
        gluing: Polynomial::from_terms(&ring, terms)?,
    })
}

/// Restriction of the datum to the exceptional line E: the class vector on
/// the Cech basis {z^{-1}, ..., z^{-l+1}} of H^1(P^1, O(-l)), of dimension
/// l - 1. Component j-1 is the coefficient of z^{-j} after trivializing on
/// the infinity chart.
pub fn restrict_to_e(d: &TorsorDatum) -> Vec<Rat> {
    let l = d.level;
    let mut out = vec![Rat::zero(); (l - 1).max(0) as usize];
    for (mono, c) in d.gluing.terms() {
        if mono.0[1] != 0 {
            continue; // vanishes on E = {y = 0}
        }
        let k = mono.0[0] as i64; // gluing term c * z^k on E
        // coboundaries span z^k for k <= 0 and k >= l; basis index j = l - k
        if k > 0 && k < l {
            out[(l - k - 1) as usize] = c.clone();
        }
    }
    out
}

/// Brute-force dimension of H^1(P^1, O(-l)) via monomial reduction on the
/// two-chart cover: scan a window of candidate monomials z^k and count the
/// distinct survivors after dropping coboundaries (regular on chart 0, or
/// z^l times regular on chart infinity).
pub fn h1_p1_dimension(l: i64) -> usize {
    let mut survivors = std::collections::BTreeSet::new();
    for k in (-2 * l - 2)..=(2 * l + 2) {
        let coboundary = k <= 0 || k >= l;
        if !coboundary {
            survivors.insert(k);
        }
    }
    survivors.len()
}

/// Presentation of the homogeneous torsor {x^m v - y^n u = p} away from the
/// origin, with its additive action and weight data.
#[derive(Clone, Debug)]
pub struct HomogeneousTorsor {
    pub algebra: Arc<PresentedAlgebra>,
    pub derivation: Derivation,
    /// weight d = m + n - r of the class in H^1(P^1, O(-d))
    pub weight: i64,
    pub cocycle: Cocycle,
}

/// Builds P_{m,n,p} for p homogeneous of degree r <= m + n - 2.
pub fn homogeneous_torsor(
    m: i64,
    n: i64,
    p: &Polynomial,
    budget: &Budget,
) -> Result<HomogeneousTorsor> {
    if m < 0 || n < 0 {
        return Err(Error::Invalid("m and n must be nonnegative".into()));
    }
    let plain = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
    let p = p.cast(&plain)?;
    let (comps, lowest) = p.homogeneous_decompose()?;
    if comps.len() > 1 {
        return Err(Error::Invalid("p must be homogeneous".into()));
    }
    let r = lowest.unwrap_or(0);
    if r > m + n - 2 {
        return Err(Error::DegreeTooHigh {
            r,
            bound: m + n - 2,
        });
    }
    let ring = RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex);
    let xm = parse_polynomial(&ring, "x")?.pow(m as u32)?;
    let yn = parse_polynomial(&ring, "y")?.pow(n as u32)?;
    let v = parse_polynomial(&ring, "v")?;
    let u = parse_polynomial(&ring, "u")?;
    let rel = xm.mul(&v)?.sub(&yn.mul(&u)?)?.sub(&p.cast(&ring)?)?;
    let algebra = PresentedAlgebra::new(&ring, vec![rel], budget)?;
    let mut images = BTreeMap::new();
    images.insert("u".to_string(), xm.clone());
    images.insert("v".to_string(), yn.clone());
    let derivation = Derivation::new(algebra.clone(), images)?;
    Ok(HomogeneousTorsor {
        algebra,
        derivation,
        weight: m + n - r,
        cocycle: Cocycle::from_mnp(m, n, &p)?,
    })
}

/// Witness that a 1-cocycle on the bundle total space is a coboundary:
/// functions b0 on chart 0 and binf on chart infinity with
/// g = binf(transition) - b0.
#[derive(Clone, Debug)]
pub struct CoboundaryWitness {
    pub b0: Polynomial,
    pub binf: Polynomial,
}

/// Pullback of a chart-infinity function to the overlap of the bundle
/// charts glued by u' = z^l u + p.
pub fn pull_to_overlap(binf: &Polynomial, d: &TorsorDatum) -> Result<Polynomial> {
    let ov = overlap_bundle_ring();
    let z = parse_polynomial(&ov, "z")?;
    let u = parse_polynomial(&ov, "u")?;
    let zl = z.pow(d.level as u32)?;
    let mut map = BTreeMap::new();
    map.insert("zp".to_string(), parse_polynomial(&ov, "z^(-1)")?);
    map.insert("x".to_string(), parse_polynomial(&ov, "y*z")?);
    map.insert("up".to_string(), zl.mul(&u)?.add(&d.gluing.cast(&ov)?)?);
    binf.substitute(&map, &ov)
}

/// Constructive coboundary reduction on the bundle total space, following
/// the recursion on the fiber degree: u^s = z^{-ls} (z^l u + p)^s - R(u)
/// with deg_u R < s, and base-level monomials split chart-wise. The
/// returned witness satisfies g = binf(transition) - b0 exactly.
pub fn reduce_bundle_cocycle(
    g: &Polynomial,
    d: &TorsorDatum,
    cap: usize,
) -> Result<CoboundaryWitness> {
    crate::polycore::same_ring(g.ring(), &overlap_bundle_ring())?;
    let ov = overlap_bundle_ring();
    let c0 = chart0_bundle_ring();
    let cinf = chart_inf_bundle_ring();
    let mut b0 = Polynomial::zero(&c0);
    let mut binf = Polynomial::zero(&cinf);
    let mut work = g.clone();
    let mut rounds = 0usize;
    while !work.is_zero() {
        rounds += 1;
        if rounds > cap {
            return Err(Error::CapExceeded("bundle cocycle reduction".into()));
        }
        let (mono, coeff) = work.leading().expect("nonzero").clone();
        let (r, a, s) = (mono.0[0], mono.0[1], mono.0[2]);
        debug_assert!(a >= 0 && s >= 0);
        if r >= 0 {
            // regular on chart 0
            let term = Polynomial::monomial(&c0, Monomial(vec![r, a, s]), coeff.clone())?;
            b0 = b0.sub(&term)?;
            work = work.sub(&term.cast(&ov)?)?;
        } else if s == 0 {
            // y^a z^r = x^a zp^{a - r}: regular on chart infinity
            let term = Polynomial::monomial(&cinf, Monomial(vec![a - r, a, 0]), coeff.clone())?;
            binf = binf.add(&term)?;
            work = work.sub(&pull_to_overlap(&term, d)?)?;
        } else {
            // recursion step: the candidate x^a zp^{a - r + l s} up^s pulls
            // back to y^a z^r u^s plus lower fiber degree
            let zp_exp = a - r + (d.level as i32) * s;
            let term =
                Polynomial::monomial(&cinf, Monomial(vec![zp_exp, a, s]), coeff.clone())?;
            binf = binf.add(&term)?;
            work = work.sub(&pull_to_overlap(&term, d)?)?;
        }
    }
    Ok(CoboundaryWitness { b0, binf })
}

/// Re-substitution check for a witness: binf(transition) - b0 == g.
pub fn verify_witness(
    g: &Polynomial,
    w: &CoboundaryWitness,
    d: &TorsorDatum,
) -> Result<bool> {
    let ov = overlap_bundle_ring();
    let lhs = pull_to_overlap(&w.binf, d)?.sub(&w.b0.cast(&ov)?)?;
    Ok(lhs == *g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat_int;

    #[test]
    fn canonical_class_drop_rule() {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let cls = c.canonical_class();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[&(1, 1)], rat_int(1));

        // x^{-1}y^{-1} * x = y^{-1} is regular on the y-chart
        let c = Cocycle::parse("y^(-1)").unwrap();
        assert!(c.canonical_class().is_empty());

        let c = Cocycle::parse("x^(-2)*y^(-2)*(x + y)").unwrap();
        let cls = c.canonical_class();
        assert_eq!(cls.len(), 2);
        assert_eq!(cls[&(1, 2)], rat_int(1));
        assert_eq!(cls[&(2, 1)], rat_int(1));
    }

    #[test]
    fn classification_examples() {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let cls = classify_extension(&c).unwrap();
        assert_eq!(cls.l0, 2);
        assert!(cls.raw_agrees);
        assert!(cls.restriction_nonzero_at_l0);

        let c = Cocycle::parse("x^(-2)*y^(-2)*(x + y)").unwrap();
        let cls = classify_extension(&c).unwrap();
        assert_eq!(cls.l0, 3);
        assert_eq!(cls.d_surviving, 1);
        assert!(cls.raw_agrees);

        let c = Cocycle::parse("x^(-1)*y^(-1)*x").unwrap();
        assert!(matches!(classify_extension(&c), Err(Error::TrivialNearO)));
    }

    #[test]
    fn raw_and_surviving_degree_can_disagree() {
        // p = x + y^2 with (m, n) = (1, 3): the degree-1 component
        // x^{-1}y^{-3} * x = y^{-3} dies under reduction while the degree-2
        // component x^{-1}y^{-3} * y^2 = x^{-1}y^{-1} survives
        let c = Cocycle::parse("x^(-1)*y^(-3)*(x + y^2)").unwrap();
        let cls = classify_extension(&c).unwrap();
        assert_eq!(cls.d_raw, 1);
        assert_eq!(cls.d_surviving, 2);
        assert!(!cls.raw_agrees);
        assert_eq!(cls.l0, 2);
    }

    #[test]
    fn sl2_datum_is_the_paper_gluing() {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let d = torsor_datum(&c, 2).unwrap();
        // w' = z^2 w + z
        assert_eq!(d.gluing.to_string(), "z");
        assert!(matches!(
            torsor_datum(&c, 1),
            Err(Error::LevelBelowL0 { level: 1, l0: 2 })
        ));
    }

    #[test]
    fn restriction_vanishes_above_minimal_level() {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let at2 = restrict_to_e(&torsor_datum(&c, 2).unwrap());
        assert_eq!(at2.len(), 1);
        assert!(!at2[0].is_zero());
        for l in 3..=5 {
            let v = restrict_to_e(&torsor_datum(&c, l).unwrap());
            assert_eq!(v.len(), (l - 1) as usize);
            assert!(v.iter().all(|c| c.is_zero()), "level {l}");
        }
    }

    #[test]
    fn h1_dimensions() {
        for l in 2..=6 {
            assert_eq!(h1_p1_dimension(l), (l - 1) as usize);
        }
        assert_eq!(h1_p1_dimension(1), 0);
        assert_eq!(h1_p1_dimension(0), 0);
    }

    #[test]
    fn homogeneous_torsor_cases() {
        let b = Budget::default();
        let plain = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let one = Polynomial::one(&plain);
        let t = homogeneous_torsor(1, 1, &one, &b).unwrap();
        assert_eq!(t.weight, 2);
        let rel = t.algebra.relations().generators()[0].clone();
        let expect = parse_polynomial(t.algebra.ring(), "x*v - y*u - 1").unwrap();
        assert_eq!(rel, expect);
        assert!(t.derivation.check_well_defined(&b).unwrap());

        let x = parse_polynomial(&plain, "x").unwrap();
        let t = homogeneous_torsor(2, 1, &x, &b).unwrap();
        assert_eq!(t.weight, 2);
        // chart triviality: slices over the x- and y-localizations
        let loc_x = t
            .algebra
            .localized(vec![("x", parse_polynomial(t.algebra.ring(), "x").unwrap())], &b)
            .unwrap();
        let dx = Derivation::new(
            loc_x.clone(),
            t.derivation
                .images()
                .iter()
                .map(|(k, v)| (k.clone(), v.cast(loc_x.ring()).unwrap()))
                .collect(),
        )
        .unwrap();
        assert!(dx.find_local_slice(3, &b).unwrap().is_some());
        let loc_y = t
            .algebra
            .localized(vec![("y", parse_polynomial(t.algebra.ring(), "y").unwrap())], &b)
            .unwrap();
        let dy = Derivation::new(
            loc_y.clone(),
            t.derivation
                .images()
                .iter()
                .map(|(k, v)| (k.clone(), v.cast(loc_y.ring()).unwrap()))
                .collect(),
        )
        .unwrap();
        assert!(dy.find_local_slice(2, &b).unwrap().is_some());

        let x2 = parse_polynomial(&plain, "x^2").unwrap();
        assert!(matches!(
            homogeneous_torsor(1, 1, &x2, &b),
            Err(Error::DegreeTooHigh { r: 2, bound: 0 })
        ));
    }

    #[test]
    fn coboundary_reduction_simple_cases() {
        let c = Cocycle::parse("x^(-1)*y^(-1)").unwrap();
        let d = torsor_datum(&c, 2).unwrap();
        let ov = overlap_bundle_ring();

        // z^{-1}: u-degree 0, regular on the far chart
        let g = parse_polynomial(&ov, "z^(-1)").unwrap();
        let w = reduce_bundle_cocycle(&g, &d, 100).unwrap();
        assert!(w.b0.is_zero());
        assert!(verify_witness(&g, &w, &d).unwrap());

        // u with l = 2, p = z: one recursion step
        let g = parse_polynomial(&ov, "z^(-1)*u").unwrap();
        let w = reduce_bundle_cocycle(&g, &d, 100).unwrap();
        assert!(verify_witness(&g, &w, &d).unwrap());

        // fiber-degree 2 with a coefficient
        let g = parse_polynomial(&ov, "y*z^(-1)*u^2").unwrap();
        let w = reduce_bundle_cocycle(&g, &d, 1000).unwrap();
        assert!(verify_witness(&g, &w, &d).unwrap());
    }
}
