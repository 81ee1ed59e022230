//! Groebner-basis engine and ideal-theoretic predicates: membership,
//! equality, elimination, saturation, radical membership via Rabinowitsch,
//! unit-ideal detection, and the Jacobian smoothness test.
//!
//! Buchberger with the normal pair-selection strategy and both classical
//! criteria. Every computed basis is reduced (monic, auto-reduced) so the
//! output is the canonical form for the given order. Tie-breaking is
//! deterministic throughout: pair selection by lcm under the working order
//! and then by input index, reducers tried in basis order.
//!
//! Laurent generators are cleared to polynomial form by multiplying with
//! monomials in the inverted variables; where a genuine localization is
//! required, an inverse variable with relation `v*v_inv - 1` is adjoined,
//! keeping the core purely polynomial.

use crate::error::{Error, Result};
use crate::polycore::{
    same_ring, Monomial, MonomialOrder, Polynomial, Rat, Ring, RingDescriptor,
};
use num_traits::One;
use std::collections::BTreeSet;

/// Reduction-step cap. Exceeding it is an error, never a silent wrong
/// answer; the default matches desk-scale instances.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { cap: 1_000_000 }
    }
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget { cap }
    }

    fn charge(&self, steps: &mut u64, amount: u64) -> Result<()> {
        *steps += amount;
        if *steps > self.cap {
            Err(Error::ResourceBudgetExceeded {
                steps: *steps,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            same_ring(g.ring(), ring)?;
        }
        let mut gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            gens.push(Polynomial::zero(ring));
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: vec![Polynomial::zero(ring)],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    pub fn join(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn groebner(&self, budget: &Budget) -> Result<GroebnerBasis> {
        self.groebner_with_order(self.ring.order(), budget)
    }

    pub fn groebner_with_order(
        &self,
        order: MonomialOrder,
        budget: &Budget,
    ) -> Result<GroebnerBasis> {
        let (work_ring, inv_pairs, extra) = clear_ring(&self.ring, order);
        let mut cleared: Vec<Polynomial> = Vec::new();
        for g in &self.gens {
            if !g.is_zero() {
                cleared.push(clear_poly(g, &work_ring)?);
            }
        }
        cleared.extend(extra.iter().cloned());
        let mut steps = 0u64;
        let basis = buchberger(&work_ring, order, cleared, budget, &mut steps)?;
        Ok(GroebnerBasis {
            source_ring: self.ring.clone(),
            work_ring,
            order,
            basis,
            inv_pairs,
            steps_used: steps,
        })
    }
}

/// Reduced Groebner basis for a fixed order; canonical for the ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    source_ring: Ring,
    work_ring: Ring,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    /// (variable, adjoined inverse) index pairs in the working ring
    inv_pairs: Vec<(usize, usize)>,
    steps_used: u64,
}

impl GroebnerBasis {
    pub fn source_ring(&self) -> &Ring {
        &self.source_ring
    }

    pub fn work_ring(&self) -> &Ring {
        &self.work_ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn steps_used(&self) -> u64 {
        self.steps_used
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant() && !self.basis[0].is_zero()
    }

    fn to_work(&self, f: &Polynomial) -> Result<Polynomial> {
        same_ring(f.ring(), &self.source_ring)?;
        clear_poly(f, &self.work_ring)
    }

    /// Remainder of multivariate division; zero iff `f` lies in the ideal.
    /// For Laurent inputs the remainder is reported back in the source ring
    /// (denominators restored), so `normal_form(f) == 0` remains the
    /// membership test.
    pub fn normal_form(&self, f: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        let fw = self.to_work(f)?;
        let mut steps = 0u64;
        let (nf, shift) = self.normal_form_work_shifted(f, fw, budget, &mut steps)?;
        uncleard(&nf, &self.source_ring, &self.inv_pairs, &shift)
    }

    fn normal_form_work_shifted(
        &self,
        f: &Polynomial,
        fw: Polynomial,
        budget: &Budget,
        steps: &mut u64,
    ) -> Result<(Polynomial, Monomial)> {
        let shift = clearing_shift(f, self.work_ring.num_vars());
        let nf = reduce_full(&fw, &self.basis, self.order, budget, steps)?;
        Ok((nf, shift))
    }

    pub fn contains(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        let fw = self.to_work(f)?;
        let mut steps = 0u64;
        Ok(reduce_full(&fw, &self.basis, self.order, budget, &mut steps)?.is_zero())
    }

    /// Direct check of the Buchberger criterion on the stored basis: every
    /// S-polynomial of basis pairs reduces to zero. Independent of how the
    /// basis was constructed.
    pub fn verify_closure(&self, budget: &Budget) -> Result<bool> {
        let mut steps = 0u64;
        for i in 0..self.basis.len() {
            for j in (i + 1)..self.basis.len() {
                let s = s_polynomial(&self.basis[i], &self.basis[j])?;
                if !reduce_full(&s, &self.basis, self.order, budget, &mut steps)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

// --- Laurent clearing -----------------------------------------------------

/// Working polynomial ring for a possibly-Laurent source ring: inverted
/// variables lose their flag and gain an adjoined inverse with relation
/// `v * v_inv - 1`.
fn clear_ring(ring: &Ring, order: MonomialOrder) -> (Ring, Vec<(usize, usize)>, Vec<Polynomial>) {
    if ring.inverted().is_empty() {
        return (ring.reordered(order), Vec::new(), Vec::new());
    }
    let mut vars: Vec<String> = ring.vars().to_vec();
    let mut pairs = Vec::new();
    let mut hat_names = Vec::new();
    for &idx in ring.inverted() {
        let base = format!("{}_inv", ring.var_name(idx));
        let mut name = base.clone();
        let mut k = 1;
        while vars.contains(&name) || hat_names.contains(&name) {
            name = format!("{base}{k}");
            k += 1;
        }
        hat_names.push(name);
    }
    let n0 = vars.len();
    vars.extend(hat_names.iter().cloned());
    let work = RingDescriptor::new(vars, order);
    let mut rels = Vec::new();
    for (k, &idx) in ring.inverted().iter().enumerate() {
        let hat = n0 + k;
        pairs.push((idx, hat));
        let mut e = vec![0i32; work.num_vars()];
        e[idx] = 1;
        e[hat] = 1;
        let rel = Polynomial::from_terms(
            &work,
            vec![
                (Monomial(e), Rat::one()),
                (Monomial::one(work.num_vars()), -Rat::one()),
            ],
        )
        .expect("unit relation");
        rels.push(rel);
    }
    (work, pairs, rels)
}

/// Multiplies away negative exponents (legal: inverted variables are units)
/// and recasts into the working ring.
fn clear_poly(f: &Polynomial, work: &Ring) -> Result<Polynomial> {
    let n = f.ring().num_vars();
    let shift = clearing_shift(f, n);
    let mut terms = Vec::with_capacity(f.terms().len());
    for (m, c) in f.terms() {
        let mut e = vec![0i32; work.num_vars()];
        for i in 0..n {
            e[i] = m.0[i] + shift.0[i];
            debug_assert!(e[i] >= 0);
        }
        terms.push((Monomial(e), c.clone()));
    }
    Polynomial::from_terms(work, terms)
}

fn clearing_shift(f: &Polynomial, width: usize) -> Monomial {
    let n = f.ring().num_vars();
    let mut shift = vec![0i32; width.max(n)];
    for (m, _) in f.terms() {
        for i in 0..n {
            if m.0[i] < 0 {
                shift[i] = shift[i].max(-m.0[i]);
            }
        }
    }
    Monomial(shift)
}

/// Maps a working-ring polynomial back to the source ring: adjoined
/// inverses become negative exponents, and the clearing shift is undone.
fn uncleard(
    f: &Polynomial,
    source: &Ring,
    inv_pairs: &[(usize, usize)],
    shift: &Monomial,
) -> Result<Polynomial> {
    let n = source.num_vars();
    let mut terms = Vec::with_capacity(f.terms().len());
    for (m, c) in f.terms() {
        let mut e = vec![0i32; n];
        for i in 0..n {
            e[i] = m.0[i] - shift.0[i];
        }
        for &(idx, hat) in inv_pairs {
            e[idx] -= m.0[hat];
        }
        terms.push((Monomial(e), c.clone()));
    }
    Polynomial::from_terms(source, terms)
}

// --- division and Buchberger ----------------------------------------------

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let (lmf, lcf) = f.leading().expect("nonzero");
    let (lmg, lcg) = g.leading().expect("nonzero");
    let lcm = lmf.lcm(lmg);
    let mf = lcm.try_div(lmf).expect("lcm divisible");
    let mg = lcm.try_div(lmg).expect("lcm divisible");
    let a = f.mul_term(&mf, &lcf.recip());
    let b = g.mul_term(&mg, &lcg.recip());
    a.sub(&b)
}

/// Full normal form: reduces every term of `f`, trying reducers in basis
/// order. Each single-term reduction charges one budget step.
fn reduce_full(
    f: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
    steps: &mut u64,
) -> Result<Polynomial> {
    let ring = f.ring().clone();
    let mut remainder: Vec<(Monomial, Rat)> = Vec::new();
    let mut cur = f.clone();
    'outer: while let Some((lm, lc)) = cur.leading().cloned() {
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (lmg, lcg) = g.leading().expect("nonzero basis element");
            if let Some(q) = lm.try_div(lmg) {
                budget.charge(steps, 1)?;
                let coeff = &lc / lcg;
                cur = cur.sub(&g.mul_term(&q, &coeff))?;
                continue 'outer;
            }
        }
        let lt = Polynomial::monomial(&ring, lm.clone(), lc.clone())?;
        remainder.push((lm, lc));
        cur = cur.sub(&lt)?;
    }
    let _ = order;
    Polynomial::from_terms(&ring, remainder)
}

/// Pair-queue key: compares by the lcm of the leading monomials under the
/// working order, then by input indices. Deterministic normal selection in
/// O(log P) per operation.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PairKey {
    order: MonomialOrder,
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order
            .cmp_exps(&self.lcm.0, &other.lcm.0)
            .then_with(|| (self.i, self.j).cmp(&(other.i, other.j)))
    }
}

impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn buchberger(
    ring: &Ring,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
    budget: &Budget,
    steps: &mut u64,
) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let push_pair = |queue: &mut BTreeSet<PairKey>,
                         pending: &mut BTreeSet<(usize, usize)>,
                         basis: &[Polynomial],
                         i: usize,
                         j: usize| {
        queue.insert(PairKey {
            order,
            lcm: lead(&basis[i]).lcm(lead(&basis[j])),
            i,
            j,
        });
        pending.insert((i, j));
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            push_pair(&mut queue, &mut pending, &basis, i, j);
        }
    }

    while let Some(key) = queue.pop_first() {
        let (i, j) = (key.i, key.j);
        pending.remove(&(i, j));

        let (lmi, lmj) = (lead(&basis[i]), lead(&basis[j]));
        // first Buchberger criterion: coprime leading monomials
        if lmi.coprime(lmj) {
            continue;
        }
        // chain criterion
        let lcm = lmi.lcm(lmj);
        let mut chained = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j || g.is_zero() {
                continue;
            }
            if lcm.try_div(lead(g)).is_some() {
                let p1 = (i.min(k), i.max(k));
                let p2 = (j.min(k), j.max(k));
                if !pending.contains(&p1) && !pending.contains(&p2) {
                    chained = true;
                    break;
                }
            }
        }
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j])?;
        let nf = reduce_full(&s, &basis, order, budget, steps)?;
        if !nf.is_zero() {
            let new_idx = basis.len();
            basis.push(nf);
            for k in 0..new_idx {
                push_pair(&mut queue, &mut pending, &basis, k, new_idx);
            }
        }
    }

    reduce_basis(ring, order, basis, budget, steps)
}

fn lead(f: &Polynomial) -> &Monomial {
    &f.leading().expect("nonzero").0
}

/// Inter-reduction to the reduced (monic, auto-reduced, sorted) basis.
fn reduce_basis(
    ring: &Ring,
    order: MonomialOrder,
    mut basis: Vec<Polynomial>,
    budget: &Budget,
    steps: &mut u64,
) -> Result<Vec<Polynomial>> {
    basis.retain(|g| !g.is_zero());
    // minimalize: drop elements whose leading monomial another one divides
    basis.sort_by(|a, b| order.cmp_exps(&lead(a).0, &lead(b).0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis.into_iter() {
        if !minimal.iter().any(|h| lead(&g).try_div(lead(h)).is_some()) {
            minimal.push(g);
        }
    }
    // tail-reduce each element modulo the others and normalize to monic
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let nf = reduce_full(&minimal[i], &others, order, budget, steps)?;
        if nf.is_zero() {
            continue;
        }
        let lc = nf.leading().expect("nonzero").1.clone();
        reduced.push(nf.scale(&lc.recip()));
    }
    reduced.sort_by(|a, b| order.cmp_exps(&lead(b).0, &lead(a).0));
    let _ = ring;
    Ok(reduced)
}

// --- ideal predicates -------------------------------------------------------

pub fn ideal_membership(f: &Polynomial, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    let gb = ideal.groebner(budget)?;
    gb.contains(f, budget)
}

pub fn ideal_equality(a: &Ideal, b: &Ideal, budget: &Budget) -> Result<bool> {
    same_ring(a.ring(), b.ring())?;
    let ga = a.groebner(budget)?;
    for g in b.generators() {
        if !ga.contains(g, budget)? {
            return Ok(false);
        }
    }
    let gbv = b.groebner(budget)?;
    for g in a.generators() {
        if !gbv.contains(g, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `I ∩ k[keep]`, returned over a ring on exactly the kept variables (in
/// their original relative order, original order tag).
pub fn eliminate(ideal: &Ideal, keep: &[&str], budget: &Budget) -> Result<Ideal> {
    let ring = ideal.ring();
    let keep_idx: BTreeSet<usize> = keep
        .iter()
        .map(|n| ring.var_index(n))
        .collect::<Result<_>>()?;
    let elim_names: Vec<String> = ring
        .vars()
        .iter()
        .enumerate()
        .filter(|(i, _)| !keep_idx.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    let keep_names: Vec<String> = ring
        .vars()
        .iter()
        .enumerate()
        .filter(|(i, _)| keep_idx.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    if !ring.inverted().is_empty() {
        return Err(Error::Invalid(
            "eliminate expects a cleared polynomial ring".into(),
        ));
    }

    let mut perm_vars = elim_names.clone();
    perm_vars.extend(keep_names.iter().cloned());
    let perm_ring = RingDescriptor::new(perm_vars, MonomialOrder::Elim(elim_names.len()));
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.cast(&perm_ring))
        .collect::<Result<_>>()?;
    let mut steps = 0u64;
    let basis = buchberger(
        &perm_ring,
        MonomialOrder::Elim(elim_names.len()),
        gens,
        budget,
        &mut steps,
    )?;

    let keep_ring = RingDescriptor::new(keep_names.clone(), ring.order());
    let kept: Vec<Polynomial> = basis
        .iter()
        .filter(|g| {
            g.terms()
                .iter()
                .all(|(m, _)| m.0[..elim_names.len()].iter().all(|&e| e == 0))
        })
        .map(|g| g.cast(&keep_ring))
        .collect::<Result<_>>()?;
    Ideal::new(&keep_ring, kept)
}

/// Saturation `(I : f^∞)` by the auxiliary-variable method: adjoin `t`, add
/// `1 - t*f`, eliminate `t`.
pub fn saturate(ideal: &Ideal, f: &Polynomial, budget: &Budget) -> Result<Ideal> {
    same_ring(ideal.ring(), f.ring())?;
    if f.is_zero() {
        return Err(Error::Invalid("cannot saturate by zero".into()));
    }
    let ring = ideal.ring();
    let t = ring.fresh_name("t_sat");
    let mut vars = vec![t.clone()];
    vars.extend(ring.vars().iter().cloned());
    let ext = RingDescriptor::new(vars, MonomialOrder::Elim(1));

    let mut gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.cast(&ext))
        .collect::<Result<_>>()?;
    let tf = Polynomial::var(&ext, &t)?.mul(&f.cast(&ext)?)?;
    gens.push(Polynomial::one(&ext).sub(&tf)?);

    let mut steps = 0u64;
    let basis = buchberger(&ext, MonomialOrder::Elim(1), gens, budget, &mut steps)?;
    let kept: Vec<Polynomial> = basis
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.0[0] == 0))
        .map(|g| g.cast(ring))
        .collect::<Result<_>>()?;
    Ideal::new(ring, kept)
}

/// Rabinowitsch: `f ∈ √I` iff `1 ∈ I + (1 - t*f)`.
pub fn radical_membership(f: &Polynomial, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    same_ring(ideal.ring(), f.ring())?;
    if f.is_zero() {
        // 0 lies in every ideal, hence in every radical
        return Ok(true);
    }
    let ring = ideal.ring();
    let t = ring.fresh_name("t_rab");
    let mut vars = vec![t.clone()];
    vars.extend(ring.vars().iter().cloned());
    let ext = RingDescriptor::new(vars, MonomialOrder::Elim(1));
    let mut gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.cast(&ext))
        .collect::<Result<_>>()?;
    let tf = Polynomial::var(&ext, &t)?.mul(&f.cast(&ext)?)?;
    gens.push(Polynomial::one(&ext).sub(&tf)?);
    let mut steps = 0u64;
    let basis = buchberger(&ext, MonomialOrder::Elim(1), gens, budget, &mut steps)?;
    Ok(basis.len() == 1 && basis[0].is_constant())
}

pub fn is_unit_ideal(ideal: &Ideal, budget: &Budget) -> Result<bool> {
    Ok(ideal.groebner(budget)?.is_unit())
}

/// Jacobian smoothness along a closed locus: true iff no singular point of
/// the presented scheme lies on `V(at)`, certified by the unit-ideal test on
/// relations + at + all `codim x codim` minors of the relation Jacobian.
pub fn jacobian_smooth_along(
    relations: &Ideal,
    at: &Ideal,
    codim: usize,
    budget: &Budget,
) -> Result<bool> {
    same_ring(relations.ring(), at.ring())?;
    let ring = relations.ring();
    let rels: Vec<&Polynomial> = relations
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .collect();
    let nrows = rels.len();
    let ncols = ring.num_vars();
    if codim == 0 || codim > nrows || codim > ncols {
        return Err(Error::BadCodim(codim));
    }
    let mut jac: Vec<Vec<Polynomial>> = Vec::with_capacity(nrows);
    for r in &rels {
        let mut row = Vec::with_capacity(ncols);
        for v in ring.vars() {
            row.push(r.partial_derivative(v)?);
        }
        jac.push(row);
    }
    let mut gens: Vec<Polynomial> = relations.generators().to_vec();
    gens.extend(at.generators().iter().cloned());
    let mut seen: BTreeSet<Vec<(Monomial, String)>> = BTreeSet::new();
    for rows in combinations(nrows, codim) {
        for cols in combinations(ncols, codim) {
            let m = minor(&jac, &rows, &cols)?;
            if m.is_zero() {
                continue;
            }
            // minors repeat up to sign; keep one representative of each
            let lc = m.leading().expect("nonzero").1.clone();
            let normalized = m.scale(&lc.recip());
            let key: Vec<(Monomial, String)> = normalized
                .terms()
                .iter()
                .map(|(mo, c)| (mo.clone(), c.to_string()))
                .collect();
            if seen.insert(key) {
                gens.push(normalized);
            }
        }
    }
    is_unit_ideal(&Ideal::new(ring, gens)?, budget)
}

fn minor(jac: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
    determinant(&rows
        .iter()
        .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
        .collect::<Vec<Vec<Polynomial>>>())
}

fn determinant(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = Polynomial::zero(&ring);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = entry.mul(&determinant(&sub)?)?;
        acc = if j % 2 == 0 {
            acc.add(&cofactor)?
        } else {
            acc.sub(&cofactor)?
        };
    }
    Ok(acc)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 <= n - (k - i) {
                cur[i] += 1;
                for j in (i + 1)..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
