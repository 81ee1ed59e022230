//! Exact sparse multivariate polynomial arithmetic over the rationals.
//!
//! Polynomials are stored as term lists sorted in strictly descending
//! monomial order, so the leading term is always `terms[0]`. Exponents are
//! signed: a variable may carry negative exponents only when the ring
//! descriptor marks it as inverted (Laurent). Coefficients are
//! arbitrary-precision rationals; nothing in the crate ever rounds.

mod parse;

pub use parse::parse_polynomial;

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(n.into())
}

/// Monomial order tag. Variable precedence is the order of the ring's
/// variable list. `Elim(k)` is the product order that eliminates the first
/// `k` variables: degrevlex on the first block, ties broken by degrevlex on
/// the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    #[serde(rename = "lex")]
    Lex,
    #[serde(rename = "degrevlex")]
    DegRevLex,
    #[serde(rename = "elim")]
    Elim(usize),
}

impl MonomialOrder {
    pub fn cmp_exps(&self, a: &[i32], b: &[i32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::DegRevLex => cmp_degrevlex(a, b),
            MonomialOrder::Elim(k) => {
                let k = k.min(a.len());
                cmp_degrevlex(&a[..k], &b[..k]).then_with(|| cmp_degrevlex(&a[k..], &b[k..]))
            }
        }
    }
}

fn cmp_lex(a: &[i32], b: &[i32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn cmp_degrevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing position wins
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

/// Ambient ring data: named variables, the subset allowed negative
/// exponents, and the monomial order used for canonical term storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDescriptor {
    vars: Vec<String>,
    inverted: BTreeSet<usize>,
    order: MonomialOrder,
}

pub type Ring = Arc<RingDescriptor>;

impl RingDescriptor {
    pub fn new<S: Into<String>>(vars: Vec<S>, order: MonomialOrder) -> Ring {
        Self::with_inverted(vars, Vec::new(), order)
    }

    /// `inverted` lists variable names permitted negative exponents.
    pub fn with_inverted<S: Into<String>>(
        vars: Vec<S>,
        inverted: Vec<&str>,
        order: MonomialOrder,
    ) -> Ring {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable name `{v}`");
        }
        let inv = inverted
            .iter()
            .map(|n| {
                vars.iter()
                    .position(|v| v == n)
                    .unwrap_or_else(|| panic!("inverted variable `{n}` not among ring variables"))
            })
            .collect();
        Arc::new(RingDescriptor {
            vars,
            inverted: inv,
            order,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn inverted(&self) -> &BTreeSet<usize> {
        &self.inverted
    }

    pub fn is_inverted(&self, idx: usize) -> bool {
        self.inverted.contains(&idx)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var_name(&self, idx: usize) -> &str {
        &self.vars[idx]
    }

    /// Same variables and inversions under a different monomial order.
    pub fn reordered(&self, order: MonomialOrder) -> Ring {
        Arc::new(RingDescriptor {
            vars: self.vars.clone(),
            inverted: self.inverted.clone(),
            order,
        })
    }

    /// New descriptor with extra variables appended (never inverted).
    pub fn extended<S: Into<String>>(&self, extra: Vec<S>, order: MonomialOrder) -> Ring {
        let mut vars = self.vars.clone();
        for v in extra {
            let v = v.into();
            assert!(
                !vars.contains(&v),
                "extended variable `{v}` already present"
            );
            vars.push(v);
        }
        Arc::new(RingDescriptor {
            vars,
            inverted: self.inverted.clone(),
            order,
        })
    }

    /// A variable name based on `base` that does not collide with existing ones.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.vars.iter().any(|v| v == base) {
            return base.to_string();
        }
        let mut i = 1usize;
        loop {
            let cand = format!("{base}{i}");
            if !self.vars.iter().any(|v| v == &cand) {
                return cand;
            }
            i += 1;
        }
    }
}

pub fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "{:?} vs {:?}",
            a.vars(),
            b.vars()
        )))
    }
}

/// Exponent vector; one signed entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize) -> Self {
        let mut e = vec![0; n];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&a| -a).collect())
    }

    /// Componentwise difference when every entry stays non-negative.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            let d = a - b;
            if d < 0 {
                return None;
            }
            out.push(d);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Sparse exact polynomial, canonically stored: terms strictly descending in
/// the ring's monomial order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Rat)>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Ring, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::one(ring.num_vars()), c)],
        }
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        let idx = ring.var_index(name)?;
        Ok(Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.num_vars(), idx), Rat::one())],
        })
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rat) -> Result<Self> {
        check_exponents(ring, &m)?;
        if c.is_zero() {
            return Ok(Self::zero(ring));
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: vec![(m, c)],
        })
    }

    /// Builds from arbitrary (monomial, coefficient) pairs, merging and
    /// sorting into canonical form.
    pub fn from_terms(ring: &Ring, terms: Vec<(Monomial, Rat)>) -> Result<Self> {
        for (m, _) in &terms {
            check_exponents(ring, m)?;
        }
        Ok(Self::from_terms_unchecked(ring, terms))
    }

    fn from_terms_unchecked(ring: &Ring, terms: Vec<(Monomial, Rat)>) -> Self {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Rat::zero);
            *entry += c;
        }
        let mut list: Vec<(Monomial, Rat)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        list.sort_by(|(a, _), (b, _)| order.cmp_exps(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms: list,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.0.iter().any(|&e| e < 0))
    }

    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[idx] != 0)
    }

    pub fn degree_in(&self, idx: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.0[idx]).max()
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &other.ring)?;
        Ok(self.merged(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &other.ring)?;
        Ok(self.merged(other, true))
    }

    fn merged(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp_exps(&ma.0, &mb.0) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb.clone() } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        ca.clone() - cb.clone()
                    } else {
                        ca.clone() + cb.clone()
                    };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c.clone() } else { c.clone() })),
        );
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.merged(&large.mul_term(m, c), false);
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.num_vars()), c)
    }

    pub fn pow(&self, k: u32) -> Result<Polynomial> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with the Laurent rule on inverted variables.
    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial> {
        let idx = self.ring.var_index(var)?;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut em = m.clone();
            em.0[idx] = e - 1;
            terms.push((em, c * rat_int(e as i64)));
        }
        Ok(Self::from_terms_unchecked(&self.ring, terms))
    }

    /// Splits into homogeneous components by total degree. Laurent input is
    /// rejected. Returns the component map and the lowest degree present
    /// (`None` for the zero polynomial).
    pub fn homogeneous_decompose(&self) -> Result<(BTreeMap<i64, Polynomial>, Option<i64>)> {
        if self.has_negative_exponents() {
            return Err(Error::LaurentInput);
        }
        let mut buckets: BTreeMap<i64, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets
                .entry(m.total_degree())
                .or_default()
                .push((m.clone(), c.clone()));
        }
        let lowest = buckets.keys().next().copied();
        let map = buckets
            .into_iter()
            .map(|(d, ts)| (d, Self::from_terms_unchecked(&self.ring, ts)))
            .collect();
        Ok((map, lowest))
    }

    /// Ring-homomorphism evaluation. Variables absent from `map` are sent to
    /// the target variable of the same name. A variable occurring with a
    /// negative exponent must have a unit image: a nonzero rational times a
    /// monomial supported on inverted target variables.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, Polynomial>,
        target: &Ring,
    ) -> Result<Polynomial> {
        for img in map.values() {
            same_ring(img.ring(), target)?;
        }
        let n = self.ring.num_vars();
        // images resolved lazily: a variable that never occurs in a term
        // needs no counterpart in the target ring
        let mut images: Vec<Option<Polynomial>> = vec![None; n];
        let image_of = |idx: usize, images: &mut Vec<Option<Polynomial>>| -> Result<Polynomial> {
            if images[idx].is_none() {
                let name = self.ring.var_name(idx);
                images[idx] = Some(match map.get(name) {
                    Some(p) => p.clone(),
                    None => Polynomial::var(target, name)?,
                });
            }
            Ok(images[idx].clone().expect("just set"))
        };
        let mut acc = Polynomial::zero(target);
        // cache of img^k per (variable, power)
        let mut pos_pows: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = image_of(idx, &mut images)?;
                let factor = if e > 0 {
                    power_cached(&mut pos_pows[idx], &img, e as usize)?
                } else {
                    let unit = invert_unit(&img).ok_or_else(|| {
                        Error::NonUnitImageForInvertedVariable(
                            self.ring.var_name(idx).to_string(),
                        )
                    })?;
                    unit.pow((-e) as u32)?
                };
                term = term.mul(&factor)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Specializes variables to rational values (a substitution shortcut).
    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> Result<Polynomial> {
        let map = values
            .iter()
            .map(|(k, v)| (k.clone(), Polynomial::constant(&self.ring, v.clone())))
            .collect();
        self.substitute(&map, &self.ring)
    }

    /// Re-expresses this polynomial in another ring that contains (at least)
    /// all variables it actually uses, matching variables by name.
    pub fn cast(&self, target: &Ring) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        let idx_map: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.vars().iter().position(|w| w == v))
            .collect();
        for (m, c) in &self.terms {
            let mut e = vec![0i32; target.num_vars()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp != 0 {
                    let j = idx_map[i]
                        .ok_or_else(|| Error::UnknownVariable(self.ring.var_name(i).into()))?;
                    e[j] = exp;
                }
            }
            terms.push((Monomial(e), c.clone()));
        }
        Polynomial::from_terms(target, terms)
    }

    /// True iff `gcd(f, df/dv)` is constant for a polynomial univariate in
    /// `v`; any other variable occurring in `f` is an error.
    pub fn univariate_squarefree(&self, var: &str) -> Result<bool> {
        let idx = self.ring.var_index(var)?;
        for (m, _) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if i != idx && e != 0 {
                    return Err(Error::NotUnivariateAfterSpecialization(
                        self.ring.var_name(idx).to_string(),
                    ));
                }
                if e < 0 {
                    return Err(Error::LaurentInput);
                }
            }
        }
        let f = self.to_univariate(idx);
        let df = univ_derivative(&f);
        let g = univ_gcd(f, df);
        Ok(univ_deg(&g) <= 0)
    }

    /// Largest k with `s^k | f` where `s` is the squarefree part of a
    /// univariate `f`; reports the multiplicity of a principal fiber ideal.
    pub fn univariate_multiplicity(&self, var: &str) -> Result<u32> {
        let idx = self.ring.var_index(var)?;
        let f = self.to_univariate(idx);
        if f.is_empty() {
            return Err(Error::Invalid("zero polynomial has no multiplicity".into()));
        }
        let df = univ_derivative(&f);
        let g = univ_gcd(f.clone(), df);
        let sf = univ_div_exact(&f, &g).ok_or_else(|| Error::Invalid("gcd division failed".into()))?;
        let mut mult = 0u32;
        let mut cur = f;
        while let Some(q) = univ_div_exact(&cur, &sf) {
            mult += 1;
            cur = q;
        }
        Ok(mult)
    }

    /// Exact division by `g` when it leaves no remainder (plain polynomial
    /// data; leading terms under the ring order).
    pub fn try_exact_div(&self, g: &Polynomial) -> Result<Option<Polynomial>> {
        same_ring(&self.ring, g.ring())?;
        if g.is_zero() {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        }
        let (gl_m, gl_c) = g.leading().expect("nonzero divisor").clone();
        let mut rem = self.clone();
        let mut quo: Vec<(Monomial, Rat)> = Vec::new();
        while !rem.is_zero() {
            let (lm, lc) = rem.leading().expect("nonzero").clone();
            let Some(q) = lm.try_div(&gl_m) else {
                return Ok(None);
            };
            let c = lc / gl_c.clone();
            quo.push((q.clone(), c.clone()));
            rem = rem.sub(&g.mul_term(&q, &c))?;
        }
        Ok(Some(Polynomial::from_terms_unchecked(&self.ring, quo)))
    }

    fn to_univariate(&self, idx: usize) -> Vec<(i32, Rat)> {
        let mut v: Vec<(i32, Rat)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.0[idx], c.clone()))
            .collect();
        v.sort_by_key(|(e, _)| *e);
        v
    }
}

fn power_cached(cache: &mut Vec<Polynomial>, base: &Polynomial, k: usize) -> Result<Polynomial> {
    if k == 0 {
        return Ok(Polynomial::one(base.ring()));
    }
    while cache.len() < k {
        let next = match cache.last() {
            Some(p) => p.mul(base)?,
            None => base.clone(),
        };
        cache.push(next);
    }
    Ok(cache[k - 1].clone())
}

fn check_exponents(ring: &Ring, m: &Monomial) -> Result<()> {
    assert_eq!(m.0.len(), ring.num_vars(), "exponent vector length mismatch");
    for (i, &e) in m.0.iter().enumerate() {
        if e < 0 && !ring.is_inverted(i) {
            return Err(Error::NegativeExponent(ring.var_name(i).to_string()));
        }
    }
    Ok(())
}

/// If `p` is a single term `c * m` with `m` supported on inverted variables,
/// returns its inverse; otherwise `None`.
pub fn invert_unit(p: &Polynomial) -> Option<Polynomial> {
    if p.terms.len() != 1 {
        return None;
    }
    let (m, c) = &p.terms[0];
    for (i, &e) in m.0.iter().enumerate() {
        if e != 0 && !p.ring.is_inverted(i) {
            return None;
        }
    }
    Some(Polynomial {
        ring: p.ring.clone(),
        terms: vec![(m.inv(), c.recip())],
    })
}

// --- dense univariate helpers (sorted ascending by exponent, sparse pairs) ---

fn univ_derivative(f: &[(i32, Rat)]) -> Vec<(i32, Rat)> {
    f.iter()
        .filter(|(e, _)| *e != 0)
        .map(|(e, c)| (e - 1, c * rat_int(*e as i64)))
        .collect()
}

fn univ_normalize(mut f: Vec<(i32, Rat)>) -> Vec<(i32, Rat)> {
    f.retain(|(_, c)| !c.is_zero());
    f.sort_by_key(|(e, _)| *e);
    f
}

fn univ_deg(f: &[(i32, Rat)]) -> i32 {
    f.last().map(|(e, _)| *e).unwrap_or(-1)
}

fn univ_sub_scaled(a: &[(i32, Rat)], b: &[(i32, Rat)], shift: i32, scale: &Rat) -> Vec<(i32, Rat)> {
    let mut map: BTreeMap<i32, Rat> = a.iter().cloned().collect();
    for (e, c) in b {
        let entry = map.entry(e + shift).or_insert_with(Rat::zero);
        *entry -= c * scale;
    }
    univ_normalize(map.into_iter().collect())
}

fn univ_gcd(mut a: Vec<(i32, Rat)>, mut b: Vec<(i32, Rat)>) -> Vec<(i32, Rat)> {
    a = univ_normalize(a);
    b = univ_normalize(b);
    while !b.is_empty() {
        // remainder of a by b
        while univ_deg(&a) >= univ_deg(&b) && !a.is_empty() {
            let (ea, ca) = a.last().unwrap().clone();
            let (eb, cb) = b.last().unwrap().clone();
            a = univ_sub_scaled(&a, &b, ea - eb, &(ca / cb));
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some((_, lc)) = a.last() {
        let lc = lc.clone();
        for (_, c) in a.iter_mut() {
            *c /= lc.clone();
        }
    }
    a
}

fn univ_div_exact(f: &[(i32, Rat)], g: &[(i32, Rat)]) -> Option<Vec<(i32, Rat)>> {
    if g.is_empty() {
        return None;
    }
    let mut rem = f.to_vec();
    let mut quo: Vec<(i32, Rat)> = Vec::new();
    let (eg, cg) = g.last().unwrap().clone();
    while !rem.is_empty() {
        let (er, cr) = rem.last().unwrap().clone();
        if er < eg {
            return None;
        }
        let q = cr / cg.clone();
        quo.push((er - eg, q.clone()));
        rem = univ_sub_scaled(&rem, g, er - eg, &q);
    }
    Some(univ_normalize(quo))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(display_rat(&abs));
            }
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.ring.var_name(idx);
                if e == 1 {
                    factors.push(name.to_string());
                } else if e > 0 {
                    factors.push(format!("{name}^{e}"));
                } else {
                    factors.push(format!("{name}^({e})"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn display_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_xyuv() -> Ring {
        RingDescriptor::new(vec!["x", "y", "u", "v"], MonomialOrder::DegRevLex)
    }

    fn p(ring: &Ring, s: &str) -> Polynomial {
        parse_polynomial(ring, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring_xyuv();
        let lhs = p(&r, "x+y").mul(&p(&r, "x-y")).unwrap();
        assert_eq!(lhs, p(&r, "x^2 - y^2"));
    }

    #[test]
    fn additive_identity() {
        let r = ring_xyuv();
        let f = p(&r, "x^2*(x-1)*v + y*u^2 - x");
        assert_eq!(f.add(&Polynomial::zero(&r)).unwrap(), f);
    }

    #[test]
    fn hand_expansion() {
        // (xv - yu - 1) * x
        let r = ring_xyuv();
        let got = p(&r, "x*v - y*u - 1").mul(&p(&r, "x")).unwrap();
        assert_eq!(got, p(&r, "x^2*v - x*y*u - x"));
    }

    #[test]
    fn substitute_fiber_point() {
        // intro threefold at (x,y) = (1,0) collapses to -1
        let r = ring_xyuv();
        let f = p(&r, "x^2*(x-1)*v + y*u^2 - x");
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), Polynomial::one(&r));
        map.insert("y".to_string(), Polynomial::zero(&r));
        let got = f.substitute(&map, &r).unwrap();
        assert_eq!(got, Polynomial::constant(&r, rat_int(-1)));
    }

    #[test]
    fn substitute_chart_transition() {
        let src = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let tgt = RingDescriptor::new(vec!["x", "w1"], MonomialOrder::DegRevLex);
        let f = p(&src, "y");
        let mut map = BTreeMap::new();
        map.insert("y".to_string(), p(&tgt, "x*w1"));
        assert_eq!(f.substitute(&map, &tgt).unwrap(), p(&tgt, "x*w1"));
    }

    #[test]
    fn substitute_laurent_gluing() {
        // z0*u0 under z0 -> zinf^-1, u0 -> zinf*uinf gives uinf
        let src = RingDescriptor::with_inverted(
            vec!["z0", "u0"],
            vec!["z0", "u0"],
            MonomialOrder::DegRevLex,
        );
        let tgt = RingDescriptor::with_inverted(
            vec!["zinf", "uinf"],
            vec!["zinf", "uinf"],
            MonomialOrder::DegRevLex,
        );
        let f = p(&src, "z0*u0");
        let mut map = BTreeMap::new();
        map.insert("z0".to_string(), p(&tgt, "zinf^(-1)"));
        map.insert("u0".to_string(), p(&tgt, "zinf*uinf"));
        assert_eq!(f.substitute(&map, &tgt).unwrap(), p(&tgt, "uinf"));
    }

    #[test]
    fn non_unit_image_rejected() {
        let src = RingDescriptor::with_inverted(vec!["z"], vec!["z"], MonomialOrder::Lex);
        let tgt = RingDescriptor::new(vec!["w"], MonomialOrder::Lex);
        let f = p(&src, "z^(-1)");
        let mut map = BTreeMap::new();
        map.insert("z".to_string(), p(&tgt, "w + 1"));
        assert!(matches!(
            f.substitute(&map, &tgt),
            Err(Error::NonUnitImageForInvertedVariable(_))
        ));
    }

    #[test]
    fn homogeneous_components() {
        let r = ring_xyuv();
        let f = p(&r, "1 + x + x*y");
        let (comps, lowest) = f.homogeneous_decompose().unwrap();
        assert_eq!(lowest, Some(0));
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[&0], Polynomial::one(&r));
        assert_eq!(comps[&1], p(&r, "x"));
        assert_eq!(comps[&2], p(&r, "x*y"));
        let sum = comps
            .values()
            .fold(Polynomial::zero(&r), |a, b| a.add(b).unwrap());
        assert_eq!(sum, f);

        let (z, low) = Polynomial::zero(&r).homogeneous_decompose().unwrap();
        assert!(z.is_empty());
        assert_eq!(low, None);
    }

    #[test]
    fn partial_derivatives() {
        let r = ring_xyuv();
        assert_eq!(
            p(&r, "y*u^2").partial_derivative("u").unwrap(),
            p(&r, "2*y*u")
        );
        assert_eq!(
            p(&r, "x^2*(x-1)*v").partial_derivative("v").unwrap(),
            p(&r, "x^2*(x-1)")
        );
        assert_eq!(
            p(&r, "x^2*v").partial_derivative("x").unwrap(),
            p(&r, "2*x*v")
        );
    }

    #[test]
    fn squarefree_checks() {
        let r = ring_xyuv();
        assert!(p(&r, "u^2 - 1").univariate_squarefree("u").unwrap());
        assert!(!p(&r, "u^2").univariate_squarefree("u").unwrap());
        assert!(p(&r, "u").univariate_squarefree("u").unwrap());
        assert!(p(&r, "u^2 + x").univariate_squarefree("u").is_err());
        assert_eq!(p(&r, "u^2").univariate_multiplicity("u").unwrap(), 2);
        assert_eq!(p(&r, "u^2 - 1").univariate_multiplicity("u").unwrap(), 1);
    }

    #[test]
    fn print_parse_roundtrip() {
        let r = ring_xyuv();
        let f = p(&r, "x^2*(x-1)*v + y*u^2 - x - 3/4");
        let printed = f.to_string();
        assert_eq!(p(&r, &printed), f);
    }
}
