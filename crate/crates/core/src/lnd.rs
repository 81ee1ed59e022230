//! Derivations on presented algebras: well-definedness on the quotient,
//! local-nilpotency certification, exponential co-actions, equivariance and
//! invariance checks, and local slice detection.
//!
//! Nilpotency is certified per generator; by the Leibniz rule that suffices
//! for local nilpotency on the whole finitely generated algebra. A `CapExceeded`
//! exit means "not certified up to the cap", never "not locally nilpotent".

use crate::error::{Error, Result};
use crate::ideals::{Budget, GroebnerBasis, Ideal};
use crate::polycore::{same_ring, Monomial, Polynomial, Rat, Ring};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finitely presented (quotient of a) polynomial ring. Localizations are
/// modeled by adjoined inverse variables with relations `g * g_inv - 1`, so
/// the presentation stays purely polynomial.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    ring: Ring,
    relations: Ideal,
    gb: GroebnerBasis,
}

impl PresentedAlgebra {
    pub fn new(ring: &Ring, relations: Vec<Polynomial>, budget: &Budget) -> Result<Arc<Self>> {
        let alg = Self::new_unchecked(ring, relations, budget)?;
        if alg.gb.is_unit() {
            return Err(Error::Invalid(
                "relations are the unit ideal (empty scheme); use new_allow_empty".into(),
            ));
        }
        Ok(alg)
    }

    /// Same as `new` but tolerates the unit ideal (empty scheme), which
    /// legitimately shows up for fibers over points outside the image.
    pub fn new_allow_empty(
        ring: &Ring,
        relations: Vec<Polynomial>,
        budget: &Budget,
    ) -> Result<Arc<Self>> {
        Self::new_unchecked(ring, relations, budget)
    }

    fn new_unchecked(ring: &Ring, relations: Vec<Polynomial>, budget: &Budget) -> Result<Arc<Self>> {
        if !ring.inverted().is_empty() {
            return Err(Error::Invalid(
                "presented algebras use adjoined inverses, not Laurent rings".into(),
            ));
        }
        let relations = Ideal::new(ring, relations)?;
        let gb = relations.groebner(budget)?;
        Ok(Arc::new(PresentedAlgebra {
            ring: ring.clone(),
            relations,
            gb,
        }))
    }

    pub fn free(ring: &Ring, budget: &Budget) -> Result<Arc<Self>> {
        Self::new(ring, Vec::new(), budget)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn nf(&self, f: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        self.gb.normal_form(f, budget)
    }

    pub fn is_zero_mod(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        self.gb.contains(f, budget)
    }

    /// The same algebra with extra free variables appended.
    pub fn extended(&self, extra: Vec<&str>, budget: &Budget) -> Result<Arc<Self>> {
        let ring = self.ring.extended(extra, self.ring.order());
        let rels = self
            .relations
            .generators()
            .iter()
            .map(|g| g.cast(&ring))
            .collect::<Result<_>>()?;
        Self::new_unchecked(&ring, rels, budget)
    }

    /// Localization at the given elements: adjoins `name_inv` with relation
    /// `g * g_inv - 1` for each.
    pub fn localized(
        &self,
        elems: Vec<(&str, Polynomial)>,
        budget: &Budget,
    ) -> Result<Arc<Self>> {
        let mut ring = self.ring.clone();
        let mut rels = self.relations.generators().to_vec();
        for (hint, g) in elems {
            same_ring(g.ring(), &self.ring)?;
            let name = ring.fresh_name(&format!("{hint}_inv"));
            let new_ring = ring.extended(vec![name.clone()], ring.order());
            rels = rels
                .iter()
                .map(|r| r.cast(&new_ring))
                .collect::<Result<_>>()?;
            let inv = Polynomial::var(&new_ring, &name)?;
            rels.push(g.cast(&new_ring)?.mul(&inv)?.sub(&Polynomial::one(&new_ring))?);
            ring = new_ring;
        }
        Self::new_unchecked(&ring, rels, budget)
    }
}

/// A k-derivation of a presented algebra, given by generator images and
/// extended by the Leibniz rule. Variables absent from the image map are
/// sent to zero (base variables of relative derivations).
#[derive(Clone, Debug)]
pub struct Derivation {
    algebra: Arc<PresentedAlgebra>,
    images: BTreeMap<String, Polynomial>,
}

impl Derivation {
    pub fn new(
        algebra: Arc<PresentedAlgebra>,
        images: BTreeMap<String, Polynomial>,
    ) -> Result<Self> {
        for (name, img) in &images {
            algebra.ring().var_index(name)?;
            same_ring(img.ring(), algebra.ring())?;
        }
        Ok(Derivation { algebra, images })
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn images(&self) -> &BTreeMap<String, Polynomial> {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Polynomial {
        self.images
            .get(var)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.algebra.ring()))
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        same_ring(f.ring(), self.algebra.ring())?;
        let mut acc = Polynomial::zero(self.algebra.ring());
        for (var, img) in &self.images {
            if img.is_zero() {
                continue;
            }
            let df = f.partial_derivative(var)?;
            if !df.is_zero() {
                acc = acc.add(&df.mul(img)?)?;
            }
        }
        Ok(acc)
    }

    /// Well-defined on the quotient iff the image of every relation
    /// generator lies back in the relation ideal.
    pub fn check_well_defined(&self, budget: &Budget) -> Result<bool> {
        for g in self.algebra.relations().generators() {
            if !self.algebra.is_zero_mod(&self.apply(g)?, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Per-generator nilpotency indices: the least `n` with `D^n(x) = 0`
    /// modulo relations. Errors with `CapExceeded` if some generator fails
    /// to reach zero within `cap` iterations.
    pub fn check_locally_nilpotent(
        &self,
        cap: u32,
        budget: &Budget,
    ) -> Result<BTreeMap<String, u32>> {
        let mut out = BTreeMap::new();
        for var in self.algebra.ring().vars() {
            let mut cur = self.algebra.nf(&Polynomial::var(self.algebra.ring(), var)?, budget)?;
            let mut n = 0u32;
            loop {
                if cur.is_zero() {
                    break;
                }
                if n >= cap {
                    return Err(Error::CapExceeded(var.clone()));
                }
                cur = self.algebra.nf(&self.apply(&cur)?, budget)?;
                n += 1;
            }
            out.insert(var.clone(), n);
        }
        Ok(out)
    }

    /// The exponential co-action `x -> sum_k D^k(x) t^k / k!`, defined once
    /// nilpotency is certified.
    pub fn exponential(&self, cap: u32, budget: &Budget) -> Result<CoAction> {
        let indices = self
            .check_locally_nilpotent(cap, budget)
            .map_err(|e| match e {
                Error::CapExceeded(_) => Error::NotCertifiedNilpotent,
                other => other,
            })?;
        let param = self.algebra.ring().fresh_name("t");
        let ext = self.algebra.extended(vec![&param], budget)?;
        let t = Polynomial::var(ext.ring(), &param)?;
        let mut images = BTreeMap::new();
        for var in self.algebra.ring().vars() {
            let n = indices[var];
            let mut acc = Polynomial::zero(ext.ring());
            let mut dk = Polynomial::var(self.algebra.ring(), var)?;
            let mut factorial = Rat::one();
            for k in 0..=n {
                if k > 0 {
                    dk = self.algebra.nf(&self.apply(&dk)?, budget)?;
                    factorial = factorial * Rat::from_integer(k.into());
                }
                if dk.is_zero() {
                    break;
                }
                let tk = t.pow(k)?;
                acc = acc.add(&dk.cast(ext.ring())?.mul(&tk)?.scale(&factorial.recip()))?;
            }
            images.insert(var.clone(), acc);
        }
        Ok(CoAction {
            algebra: self.algebra.clone(),
            ext,
            param,
            images,
        })
    }

    /// Invariance of a fraction `num/den`: `D(num)*den - num*D(den)` lies in
    /// the relations.
    pub fn check_invariant_fraction(
        &self,
        num: &Polynomial,
        den: &Polynomial,
        budget: &Budget,
    ) -> Result<bool> {
        if self.algebra.is_zero_mod(den, budget)? {
            return Err(Error::ZeroDenominator);
        }
        let lhs = self.apply(num)?.mul(den)?;
        let rhs = num.mul(&self.apply(den)?)?;
        self.algebra.is_zero_mod(&lhs.sub(&rhs)?, budget)
    }

    /// Searches for `s` of total degree <= `degree_cap` with `D(s) = 1`
    /// modulo relations, by exact linear algebra over the monomial basis.
    /// `None` is inconclusive, not a proof of absence.
    pub fn find_local_slice(
        &self,
        degree_cap: i64,
        budget: &Budget,
    ) -> Result<Option<Polynomial>> {
        let ring = self.algebra.ring();
        let candidates = monomials_up_to(ring, degree_cap);
        // column j = coefficients of nf(D(m_j)) over the monomial support
        let mut columns: Vec<Polynomial> = Vec::with_capacity(candidates.len());
        for m in &candidates {
            let pm = Polynomial::monomial(ring, m.clone(), Rat::one())?;
            columns.push(self.algebra.nf(&self.apply(&pm)?, budget)?);
        }
        let mut support: Vec<Monomial> = Vec::new();
        for c in &columns {
            for (m, _) in c.terms() {
                if !support.contains(m) {
                    support.push(m.clone());
                }
            }
        }
        let one = Monomial::one(ring.num_vars());
        if !support.contains(&one) {
            support.push(one.clone());
        }
        support.sort();
        let rows = support.len();
        let cols = columns.len();
        let mut matrix = vec![vec![Rat::zero(); cols]; rows];
        for (j, c) in columns.iter().enumerate() {
            for (m, coeff) in c.terms() {
                let i = support.binary_search(m).expect("support member");
                matrix[i][j] = coeff.clone();
            }
        }
        let mut rhs = vec![Rat::zero(); rows];
        rhs[support.binary_search(&one).expect("constant row")] = Rat::one();
        match solve_linear(matrix, rhs) {
            Some(sol) => {
                let mut terms = Vec::new();
                for (j, c) in sol.into_iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((candidates[j].clone(), c));
                    }
                }
                let s = Polynomial::from_terms(ring, terms)?;
                let check = self.apply(&s)?.sub(&Polynomial::one(ring))?;
                debug_assert!(self.algebra.is_zero_mod(&check, budget)?);
                Ok(Some(s))
            }
            None => Ok(None),
        }
    }
}

fn monomials_up_to(ring: &Ring, degree_cap: i64) -> Vec<Monomial> {
    let n = ring.num_vars();
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<i32>, idx: usize, remaining: i64) {
        if idx == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=remaining {
            cur[idx] = e as i32;
            rec(out, cur, idx + 1, remaining - e);
        }
        cur[idx] = 0;
    }
    rec(&mut out, &mut cur, 0, degree_cap.max(0));
    out.sort_by_key(|m| (m.total_degree(), m.0.clone()));
    out
}

/// Exact Gaussian elimination; returns one solution of `A x = b` with free
/// variables set to zero, or `None` if inconsistent.
fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut row = 0usize;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..cols {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    a[r][c] = &a[r][c] - &(&factor * &a[row][c]);
                }
                b[r] = &b[r] - &(&factor * &b[row]);
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == rows {
            break;
        }
    }
    // consistency
    for r in row..rows {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (col, pv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pv {
            x[col] = b[*r].clone();
        }
    }
    Some(x)
}

/// Co-morphism of an algebra map; also used for chart transitions and
/// variety morphisms (in which case it is the co-morphism of a morphism
/// from the target variety to the source variety).
#[derive(Clone, Debug)]
pub struct RingMorphism {
    source: Arc<PresentedAlgebra>,
    target: Arc<PresentedAlgebra>,
    images: BTreeMap<String, Polynomial>,
}

impl RingMorphism {
    pub fn new(
        source: Arc<PresentedAlgebra>,
        target: Arc<PresentedAlgebra>,
        images: BTreeMap<String, Polynomial>,
    ) -> Result<Self> {
        for (name, img) in &images {
            source.ring().var_index(name)?;
            same_ring(img.ring(), target.ring())?;
        }
        Ok(RingMorphism {
            source,
            target,
            images,
        })
    }

    /// Identity-on-names morphism (useful when the target ring extends the
    /// source ring).
    pub fn inclusion(source: Arc<PresentedAlgebra>, target: Arc<PresentedAlgebra>) -> Result<Self> {
        let mut images = BTreeMap::new();
        for v in source.ring().vars() {
            images.insert(v.clone(), Polynomial::var(target.ring(), v)?);
        }
        RingMorphism::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<PresentedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<String, Polynomial> {
        &self.images
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        same_ring(f.ring(), self.source.ring())?;
        f.substitute(&self.images, self.target.ring())
    }

    pub fn check_well_defined(&self, budget: &Budget) -> Result<bool> {
        for (name, _) in self.source.ring().vars().iter().enumerate().map(|(i, v)| (v, i)) {
            if !self.images.contains_key(name) {
                return Err(Error::Invalid(format!(
                    "morphism is missing an image for `{name}`"
                )));
            }
        }
        for g in self.source.relations().generators() {
            if !self.target.is_zero_mod(&self.apply(g)?, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compose(&self, then: &RingMorphism) -> Result<RingMorphism> {
        same_ring(self.target.ring(), then.source.ring())?;
        let mut images = BTreeMap::new();
        for (name, img) in &self.images {
            images.insert(name.clone(), then.apply(img)?);
        }
        RingMorphism::new(self.source.clone(), then.target.clone(), images)
    }

    /// Checks `phi` is the identity endomorphism modulo target relations
    /// (source and target must share a ring).
    pub fn is_identity(&self, budget: &Budget) -> Result<bool> {
        same_ring(self.source.ring(), self.target.ring())?;
        for v in self.source.ring().vars() {
            let diff = self
                .apply(&Polynomial::var(self.source.ring(), v)?)?
                .sub(&Polynomial::var(self.target.ring(), v)?)?;
            if !self.target.is_zero_mod(&diff, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Equivariance of a co-morphism `phi` for derivations on its source and
/// target: `D_tgt(phi(a)) = phi(D_src(a))` mod target relations for every
/// source generator `a`.
pub fn check_equivariant(
    phi: &RingMorphism,
    d_src: &Derivation,
    d_tgt: &Derivation,
    budget: &Budget,
) -> Result<bool> {
    same_ring(phi.source().ring(), d_src.algebra().ring())?;
    same_ring(phi.target().ring(), d_tgt.algebra().ring())?;
    for var in phi.source().ring().vars() {
        let lhs = d_tgt.apply(&phi.apply(&Polynomial::var(phi.source().ring(), var)?)?)?;
        let rhs = phi.apply(&d_src.image_of(var))?;
        if !phi.target().is_zero_mod(&lhs.sub(&rhs)?, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponential co-action of a certified locally nilpotent derivation.
#[derive(Clone, Debug)]
pub struct CoAction {
    algebra: Arc<PresentedAlgebra>,
    /// ring ∪ {t} with the same relations
    ext: Arc<PresentedAlgebra>,
    param: String,
    images: BTreeMap<String, Polynomial>,
}

impl CoAction {
    pub fn new(
        algebra: Arc<PresentedAlgebra>,
        param: &str,
        images: BTreeMap<String, Polynomial>,
        budget: &Budget,
    ) -> Result<Self> {
        let ext = algebra.extended(vec![param], budget)?;
        for (name, img) in &images {
            algebra.ring().var_index(name)?;
            same_ring(img.ring(), ext.ring())?;
        }
        Ok(CoAction {
            algebra,
            ext,
            param: param.to_string(),
            images,
        })
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn images(&self) -> &BTreeMap<String, Polynomial> {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Result<Polynomial> {
        match self.images.get(var) {
            Some(p) => Ok(p.clone()),
            None => Polynomial::var(self.ext.ring(), var),
        }
    }

    /// Applies the co-action to an element of the base ring, landing in
    /// ring ∪ {t}.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        same_ring(f.ring(), self.algebra.ring())?;
        let mut map = self.images.clone();
        for v in self.algebra.ring().vars() {
            map.entry(v.clone())
                .or_insert(Polynomial::var(self.ext.ring(), v)?);
        }
        f.substitute(&map, self.ext.ring())
    }

    /// (i) counit: t = 0 restores the identity mod relations;
    /// (ii) co-associativity: acting with s after t equals acting with t+s;
    /// (iii) the relations are preserved.
    pub fn check_axioms(&self, budget: &Budget) -> Result<bool> {
        let ring = self.algebra.ring();
        // (i)
        for var in ring.vars() {
            let img = self.image_of(var)?;
            let mut zero_t = BTreeMap::new();
            zero_t.insert(self.param.clone(), Polynomial::zero(self.ext.ring()));
            let at0 = img.substitute(&zero_t, self.ext.ring())?;
            let diff = at0.sub(&Polynomial::var(self.ext.ring(), var)?)?;
            if !self.ext.is_zero_mod(&diff, budget)? {
                return Ok(false);
            }
        }
        // (iii)
        for g in self.algebra.relations().generators() {
            if !self.ext.is_zero_mod(&self.apply(g)?, budget)? {
                return Ok(false);
            }
        }
        // (ii) in ring ∪ {t, s}
        let s_name = self.ext.ring().fresh_name("s");
        let ext2 = self.ext.extended(vec![&s_name], budget)?;
        let t = Polynomial::var(ext2.ring(), &self.param)?;
        let s = Polynomial::var(ext2.ring(), &s_name)?;
        for var in ring.vars() {
            let img_t = self.image_of(var)?.cast(ext2.ring())?;
            // substitute every ring variable v by c_s(v); t stays t
            let mut map = BTreeMap::new();
            for v in ring.vars() {
                let cs_v = self.image_of(v)?;
                let mut rename = BTreeMap::new();
                rename.insert(self.param.clone(), s.clone());
                map.insert(v.clone(), cs_v.cast(ext2.ring())?.substitute(&rename, ext2.ring())?);
            }
            let lhs = img_t.substitute(&map, ext2.ring())?;
            let mut tps = BTreeMap::new();
            tps.insert(self.param.clone(), t.add(&s)?);
            let rhs = self.image_of(var)?.cast(ext2.ring())?.substitute(&tps, ext2.ring())?;
            if !ext2.is_zero_mod(&lhs.sub(&rhs)?, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dixmier-style rectification data: substituting `t = -s` for a slice
    /// `s` sends every generator to a D-invariant element. Used as the slice
    /// certificate.
    pub fn rectify_at(&self, slice: &Polynomial) -> Result<BTreeMap<String, Polynomial>> {
        same_ring(slice.ring(), self.algebra.ring())?;
        let mut map = BTreeMap::new();
        map.insert(self.param.clone(), slice.cast(self.ext.ring())?.neg());
        let mut out = BTreeMap::new();
        for var in self.algebra.ring().vars() {
            let img = self.image_of(var)?.substitute(&map, self.ext.ring())?;
            out.insert(var.clone(), img.cast(self.algebra.ring())?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_polynomial, MonomialOrder, RingDescriptor};

    fn budget() -> Budget {
        Budget::default()
    }

    fn sl2() -> Arc<PresentedAlgebra> {
        let r = RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex);
        let rel = parse_polynomial(&r, "x*v - y*u - 1").unwrap();
        PresentedAlgebra::new(&r, vec![rel], &budget()).unwrap()
    }

    fn sl2_derivation(alg: &Arc<PresentedAlgebra>) -> Derivation {
        let r = alg.ring().clone();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "x").unwrap());
        img.insert("v".into(), parse_polynomial(&r, "y").unwrap());
        Derivation::new(alg.clone(), img).unwrap()
    }

    #[test]
    fn intro_derivation_well_defined() {
        let r = RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex);
        let rel = parse_polynomial(&r, "x^2*(x-1)*v + y*u^2 - x").unwrap();
        let alg = PresentedAlgebra::new(&r, vec![rel], &budget()).unwrap();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "x^2*(x-1)").unwrap());
        img.insert("v".into(), parse_polynomial(&r, "-2*y*u").unwrap());
        let d = Derivation::new(alg, img).unwrap();
        // D(F) = 0 identically, before any reduction
        let rel = parse_polynomial(d.algebra().ring(), "x^2*(x-1)*v + y*u^2 - x").unwrap();
        assert!(d.apply(&rel).unwrap().is_zero());
        assert!(d.check_well_defined(&budget()).unwrap());
    }

    #[test]
    fn non_well_defined_detected() {
        let r = RingDescriptor::new(vec!["u", "v"], MonomialOrder::DegRevLex);
        let alg =
            PresentedAlgebra::new(&r, vec![parse_polynomial(&r, "u*v").unwrap()], &budget())
                .unwrap();
        let mut img = BTreeMap::new();
        img.insert("u".into(), Polynomial::one(&r));
        let d = Derivation::new(alg, img).unwrap();
        assert!(!d.check_well_defined(&budget()).unwrap());
    }

    #[test]
    fn sl2_nilpotency_indices() {
        let alg = sl2();
        let d = sl2_derivation(&alg);
        let idx = d.check_locally_nilpotent(64, &budget()).unwrap();
        assert_eq!(idx["x"], 1);
        assert_eq!(idx["y"], 1);
        assert_eq!(idx["u"], 2);
        assert_eq!(idx["v"], 2);
    }

    #[test]
    fn semisimple_derivation_hits_cap() {
        let r = RingDescriptor::new(vec!["u"], MonomialOrder::Lex);
        let alg = PresentedAlgebra::free(&r, &budget()).unwrap();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "u").unwrap());
        let d = Derivation::new(alg, img).unwrap();
        assert!(matches!(
            d.check_locally_nilpotent(10, &budget()),
            Err(Error::CapExceeded(v)) if v == "u"
        ));
    }

    #[test]
    fn sl2_exponential_and_axioms() {
        let alg = sl2();
        let d = sl2_derivation(&alg);
        let c = d.exponential(16, &budget()).unwrap();
        let ext_ring = c.image_of("u").unwrap().ring().clone();
        assert_eq!(
            c.image_of("u").unwrap(),
            parse_polynomial(&ext_ring, "u + x*t").unwrap()
        );
        assert_eq!(
            c.image_of("v").unwrap(),
            parse_polynomial(&ext_ring, "v + y*t").unwrap()
        );
        assert!(c.check_axioms(&budget()).unwrap());
    }

    #[test]
    fn zero_derivation_exponential_is_identity() {
        let alg = sl2();
        let d = Derivation::new(alg.clone(), BTreeMap::new()).unwrap();
        let c = d.exponential(4, &budget()).unwrap();
        for v in alg.ring().vars() {
            let img = c.image_of(v).unwrap();
            assert_eq!(img.to_string(), *v);
        }
        assert!(c.check_axioms(&budget()).unwrap());
    }

    #[test]
    fn quadratic_time_fails_coassociativity() {
        let r = RingDescriptor::new(vec!["u"], MonomialOrder::Lex);
        let alg = PresentedAlgebra::free(&r, &budget()).unwrap();
        let ext = alg.extended(vec!["t"], &budget()).unwrap();
        let mut images = BTreeMap::new();
        images.insert(
            "u".into(),
            parse_polynomial(ext.ring(), "u + t^2").unwrap(),
        );
        let c = CoAction::new(alg, "t", images, &budget()).unwrap();
        assert!(!c.check_axioms(&budget()).unwrap());
    }

    #[test]
    fn slice_on_localized_sl2() {
        let alg = sl2();
        let loc = alg
            .localized(
                vec![("x", parse_polynomial(alg.ring(), "x").unwrap())],
                &budget(),
            )
            .unwrap();
        let r = loc.ring().clone();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "x").unwrap());
        img.insert("v".into(), parse_polynomial(&r, "y").unwrap());
        let d = Derivation::new(loc, img).unwrap();
        let s = d.find_local_slice(2, &budget()).unwrap().expect("slice");
        let check = d.apply(&s).unwrap().sub(&Polynomial::one(&r)).unwrap();
        assert!(d.algebra().is_zero_mod(&check, &budget()).unwrap());
    }

    #[test]
    fn no_global_slice_on_plane() {
        let r = RingDescriptor::new(vec!["x", "u"], MonomialOrder::DegRevLex);
        let alg = PresentedAlgebra::free(&r, &budget()).unwrap();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "x").unwrap());
        let d = Derivation::new(alg, img).unwrap();
        assert!(d.find_local_slice(4, &budget()).unwrap().is_none());
    }

    #[test]
    fn equivariance_of_x0_embedding() {
        // j0: O(X0) -> O(SL2), p -> xu, q -> xv, r -> yv
        let sl2_alg = sl2();
        let r0 = RingDescriptor::new(
            vec!["x", "y", "p", "q", "r"],
            MonomialOrder::DegRevLex,
        );
        let rels = vec![
            parse_polynomial(&r0, "x*r - y*q").unwrap(),
            parse_polynomial(&r0, "y*p - x*(q-1)").unwrap(),
            parse_polynomial(&r0, "p*r - q*(q-1)").unwrap(),
        ];
        let x0 = PresentedAlgebra::new(&r0, rels, &budget()).unwrap();
        let mut d0_img = BTreeMap::new();
        d0_img.insert("p".into(), parse_polynomial(&r0, "x^2").unwrap());
        d0_img.insert("q".into(), parse_polynomial(&r0, "x*y").unwrap());
        d0_img.insert("r".into(), parse_polynomial(&r0, "y^2").unwrap());
        let d0 = Derivation::new(x0.clone(), d0_img).unwrap();
        assert!(d0.check_well_defined(&budget()).unwrap());

        let rs = sl2_alg.ring().clone();
        let mut images = BTreeMap::new();
        images.insert("x".into(), parse_polynomial(&rs, "x").unwrap());
        images.insert("y".into(), parse_polynomial(&rs, "y").unwrap());
        images.insert("p".into(), parse_polynomial(&rs, "x*u").unwrap());
        images.insert("q".into(), parse_polynomial(&rs, "x*v").unwrap());
        images.insert("r".into(), parse_polynomial(&rs, "y*v").unwrap());
        let j0 = RingMorphism::new(x0, sl2_alg.clone(), images).unwrap();
        assert!(j0.check_well_defined(&budget()).unwrap());

        let d_sl2 = sl2_derivation(&sl2_alg);
        assert!(check_equivariant(&j0, &d0, &d_sl2, &budget()).unwrap());

        // wrong target derivation fails
        let mut bad = BTreeMap::new();
        bad.insert("u".into(), Polynomial::one(&rs));
        let d_bad = Derivation::new(sl2_alg, bad).unwrap();
        assert!(!check_equivariant(&j0, &d0, &d_bad, &budget()).unwrap());
    }

    #[test]
    fn equivariance_composes_through_x1() {
        // the composite of the two co-morphisms O(X0) -> O(X1) -> O(SL2)
        // agrees with the direct embedding O(X0) -> O(SL2)
        let b = budget();
        let sl2_alg = sl2();
        let rs = sl2_alg.ring().clone();
        let r0 = RingDescriptor::new(vec!["x", "y", "p", "q", "r"], MonomialOrder::DegRevLex);
        let x0 = PresentedAlgebra::new(
            &r0,
            vec![
                parse_polynomial(&r0, "x*r - y*q").unwrap(),
                parse_polynomial(&r0, "y*p - x*(q-1)").unwrap(),
                parse_polynomial(&r0, "p*r - q*(q-1)").unwrap(),
            ],
            &b,
        )
        .unwrap();
        let r1 = RingDescriptor::new(vec!["x", "y", "z1", "z2", "w"], MonomialOrder::DegRevLex);
        let x1 = PresentedAlgebra::new(
            &r1,
            vec![
                parse_polynomial(&r1, "x*w - y*(y*z1 + 1)").unwrap(),
                parse_polynomial(&r1, "x*z2 - z1*(y*z1 + 1)").unwrap(),
                parse_polynomial(&r1, "z1*w - y*z2").unwrap(),
            ],
            &b,
        )
        .unwrap();
        let eta = RingMorphism::new(
            x0.clone(),
            x1.clone(),
            [
                ("x", "x"),
                ("y", "y"),
                ("p", "x*z1"),
                ("q", "y*z1 + 1"),
                ("r", "w"),
            ]
            .iter()
            .map(|(k, v)| (k.to_string(), parse_polynomial(&r1, v).unwrap()))
            .collect(),
        )
        .unwrap();
        let j1 = RingMorphism::new(
            x1,
            sl2_alg.clone(),
            [
                ("x", "x"),
                ("y", "y"),
                ("z1", "u"),
                ("z2", "u*v"),
                ("w", "y*v"),
            ]
            .iter()
            .map(|(k, v)| (k.to_string(), parse_polynomial(&rs, v).unwrap()))
            .collect(),
        )
        .unwrap();
        let j0 = RingMorphism::new(
            x0.clone(),
            sl2_alg.clone(),
            [
                ("x", "x"),
                ("y", "y"),
                ("p", "x*u"),
                ("q", "x*v"),
                ("r", "y*v"),
            ]
            .iter()
            .map(|(k, v)| (k.to_string(), parse_polynomial(&rs, v).unwrap()))
            .collect(),
        )
        .unwrap();
        let composite = eta.compose(&j1).unwrap();
        for var in x0.ring().vars() {
            let a = composite
                .apply(&Polynomial::var(x0.ring(), var).unwrap())
                .unwrap();
            let c = j0
                .apply(&Polynomial::var(x0.ring(), var).unwrap())
                .unwrap();
            assert!(
                sl2_alg.is_zero_mod(&a.sub(&c).unwrap(), &b).unwrap(),
                "composite disagrees with direct embedding on {var}"
            );
        }
        // and the composite is itself equivariant
        let d0 = Derivation::new(
            x0,
            [("p", "x^2"), ("q", "x*y"), ("r", "y^2")]
                .iter()
                .map(|(k, v)| (k.to_string(), parse_polynomial(&r0, v).unwrap()))
                .collect(),
        )
        .unwrap();
        let d_sl2 = sl2_derivation(&sl2_alg);
        assert!(check_equivariant(&composite, &d0, &d_sl2, &b).unwrap());
    }

    #[test]
    fn invariance_of_fractions() {
        let alg = sl2();
        let d = sl2_derivation(&alg);
        let r = alg.ring().clone();
        // x is invariant
        assert!(d
            .check_invariant_fraction(
                &parse_polynomial(&r, "x").unwrap(),
                &Polynomial::one(&r),
                &budget()
            )
            .unwrap());
        // u is not
        assert!(!d
            .check_invariant_fraction(
                &parse_polynomial(&r, "u").unwrap(),
                &Polynomial::one(&r),
                &budget()
            )
            .unwrap());
        // u/x is invariant... D(u/x) = x/x = 1, not 0
        assert!(!d
            .check_invariant_fraction(
                &parse_polynomial(&r, "u").unwrap(),
                &parse_polynomial(&r, "x").unwrap(),
                &budget()
            )
            .unwrap());
        // v/y - u/x = 1/(xy) is invariant: D(v)x*y... check vx - uy over xy
        assert!(d
            .check_invariant_fraction(
                &parse_polynomial(&r, "v*x - u*y").unwrap(),
                &parse_polynomial(&r, "x*y").unwrap(),
                &budget()
            )
            .unwrap());
    }

    #[test]
    fn slice_certificate_rectifies() {
        let alg = sl2();
        let loc = alg
            .localized(
                vec![("x", parse_polynomial(alg.ring(), "x").unwrap())],
                &budget(),
            )
            .unwrap();
        let r = loc.ring().clone();
        let mut img = BTreeMap::new();
        img.insert("u".into(), parse_polynomial(&r, "x").unwrap());
        img.insert("v".into(), parse_polynomial(&r, "y").unwrap());
        let d = Derivation::new(loc, img).unwrap();
        let s = d.find_local_slice(2, &budget()).unwrap().expect("slice");
        let c = d.exponential(8, &budget()).unwrap();
        for (_, img) in c.rectify_at(&s).unwrap() {
            let di = d.apply(&img).unwrap();
            assert!(d.algebra().is_zero_mod(&di, &budget()).unwrap());
        }
    }
}
