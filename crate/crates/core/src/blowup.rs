//! Towers of point blow-ups over the affine plane: chart atlases with
//! transitions, exceptional-curve bookkeeping (self-intersections kept as a
//! ledger, total-transform multiplicities recomputed from pullbacks), dual
//! graphs in DOT form, and the open surfaces obtained by removing all but
//! the last exceptional curve.

use crate::error::{Error, Result};
use crate::ideals::Budget;
use crate::lnd::PresentedAlgebra;
use crate::polycore::{parse_polynomial, MonomialOrder, Polynomial, Rat, Ring, RingDescriptor};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

pub type ChartId = String;

/// Affine chart of a tower surface: two coordinates and the co-morphism
/// from the base plane k[x, y].
#[derive(Clone, Debug)]
pub struct Chart {
    pub id: ChartId,
    pub ring: Ring,
    /// images of the base coordinates (x, y) in this chart
    pub base_images: (Polynomial, Polynomial),
}

impl Chart {
    pub fn algebra(&self, budget: &Budget) -> Result<Arc<PresentedAlgebra>> {
        PresentedAlgebra::free(&self.ring, budget)
    }
}

#[derive(Clone, Debug)]
pub struct ExceptionalCurve {
    pub name: String,
    pub self_intersection: i64,
    /// principal local equation per chart where the curve is visible
    pub locus: BTreeMap<ChartId, Polynomial>,
    /// multiplicity in the total transform of the first blown-up point,
    /// maintained by the additivity rule at creation time
    pub ledger_multiplicity: u32,
}

/// One blow-up step: the chart it happened in and the blown-up point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerStep {
    pub chart: ChartId,
    pub point: (String, String),
}

/// A sequence of point blow-ups over A^2, with the full chart atlas, curve
/// records, and the adjacency tree of exceptional curves.
#[derive(Clone, Debug)]
pub struct Tower {
    charts: Vec<Chart>,
    curves: Vec<ExceptionalCurve>,
    adjacency: BTreeSet<(String, String)>,
    steps: Vec<TowerStep>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        let d: i64 = d.trim().parse().map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        Ok(Rat::new(n.into(), d.into()))
    } else {
        let n: i64 = s.parse().map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        Ok(Rat::from_integer(n.into()))
    }
}

impl Tower {
    /// The base plane before any blow-up, as the single chart `U0` with
    /// coordinates (x, y).
    pub fn base() -> Self {
        let ring = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let x = Polynomial::var(&ring, "x").unwrap();
        let y = Polynomial::var(&ring, "y").unwrap();
        Tower {
            charts: vec![Chart {
                id: "U0".into(),
                ring,
                base_images: (x, y),
            }],
            curves: Vec::new(),
            adjacency: BTreeSet::new(),
            steps: Vec::new(),
        }
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, id: &str) -> Result<&Chart> {
        self.charts
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::Invalid(format!("unknown chart `{id}`")))
    }

    pub fn curves(&self) -> &[ExceptionalCurve] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Result<&ExceptionalCurve> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Invalid(format!("unknown curve `{name}`")))
    }

    pub fn adjacency(&self) -> &BTreeSet<(String, String)> {
        &self.adjacency
    }

    pub fn steps(&self) -> &[TowerStep] {
        &self.steps
    }

    pub fn num_blowups(&self) -> usize {
        self.steps.len()
    }

    /// Blows up a rational point of the given chart. From the second step
    /// on, the point must lie on the most recent exceptional curve. Two new
    /// charts enter the atlas; self-intersections and adjacency are updated
    /// by the standard ledger rules.
    pub fn blowup_point(&mut self, chart_id: &str, point: (Rat, Rat)) -> Result<()> {
        let chart = self.chart(chart_id)?.clone();
        let k = self.curves.len();
        let new_name = format!("E{}", k + 1);

        // which curves pass through the point
        let mut through: Vec<usize> = Vec::new();
        for (i, c) in self.curves.iter().enumerate() {
            if let Some(eq) = c.locus.get(chart_id) {
                if eval_at(eq, &point)?.is_zero() {
                    through.push(i);
                }
            }
        }
        if k > 0 {
            let newest = k - 1;
            if !through.contains(&newest) {
                return Err(Error::PointNotOnRequiredCurve {
                    point: format!("({}, {})", point.0, point.1),
                    curve: self.curves[newest].name.clone(),
                });
            }
        }
        if through.len() > 2 {
            return Err(Error::Invalid(
                "point lies on more than two exceptional curves".into(),
            ));
        }

        // fresh chart coordinate names: a_{k+1}, b_{k+1} on chart A,
        // c_{k+1}, d_{k+1} on chart B
        let n = k + 1;
        let (av, bv) = (format!("a{n}"), format!("b{n}"));
        let (cv, dv) = (format!("c{n}"), format!("d{n}"));
        let id_a = format!("{chart_id}.A{n}");
        let id_b = format!("{chart_id}.B{n}");

        // chart A: (s, t) -> (p + s, q + s t); exceptional = {s = 0}
        // chart B: (s, t) -> (p + s t, q + t); exceptional = {t = 0}
        let ring_a = RingDescriptor::new(vec![av.clone(), bv.clone()], MonomialOrder::DegRevLex);
        let ring_b = RingDescriptor::new(vec![cv.clone(), dv.clone()], MonomialOrder::DegRevLex);
        let sub_a = {
            let s = Polynomial::var(&ring_a, &av)?;
            let t = Polynomial::var(&ring_a, &bv)?;
            let old0 = s.add(&Polynomial::constant(&ring_a, point.0.clone()))?;
            let old1 = s.mul(&t)?.add(&Polynomial::constant(&ring_a, point.1.clone()))?;
            (old0, old1)
        };
        let sub_b = {
            let s = Polynomial::var(&ring_b, &cv)?;
            let t = Polynomial::var(&ring_b, &dv)?;
            let old0 = s.mul(&t)?.add(&Polynomial::constant(&ring_b, point.0.clone()))?;
            let old1 = t.add(&Polynomial::constant(&ring_b, point.1.clone()))?;
            (old0, old1)
        };

        let old_vars = chart.ring.vars().to_vec();
        let pull = |f: &Polynomial, ring: &Ring, sub: &(Polynomial, Polynomial)| -> Result<Polynomial> {
            let mut map = BTreeMap::new();
            map.insert(old_vars[0].clone(), sub.0.clone());
            map.insert(old_vars[1].clone(), sub.1.clone());
            f.substitute(&map, ring)
        };

        let chart_a = Chart {
            id: id_a.clone(),
            ring: ring_a.clone(),
            base_images: (
                pull(&chart.base_images.0, &ring_a, &sub_a)?,
                pull(&chart.base_images.1, &ring_a, &sub_a)?,
            ),
        };
        let chart_b = Chart {
            id: id_b.clone(),
            ring: ring_b.clone(),
            base_images: (
                pull(&chart.base_images.0, &ring_b, &sub_b)?,
                pull(&chart.base_images.1, &ring_b, &sub_b)?,
            ),
        };

        // update existing curve loci in the new charts and the ledger
        let exc_a = Polynomial::var(&ring_a, &av)?;
        let exc_b = Polynomial::var(&ring_b, &dv)?;
        for (i, c) in self.curves.iter_mut().enumerate() {
            let on_point = through.contains(&i);
            if let Some(eq) = c.locus.get(chart_id).cloned() {
                let pa = pull(&eq, &ring_a, &sub_a)?;
                let pb = pull(&eq, &ring_b, &sub_b)?;
                let pa = if on_point { divide_out(&pa, &exc_a)? } else { pa };
                let pb = if on_point { divide_out(&pb, &exc_b)? } else { pb };
                if !pa.is_constant() {
                    c.locus.insert(id_a.clone(), pa);
                }
                if !pb.is_constant() {
                    c.locus.insert(id_b.clone(), pb);
                }
            }
            if on_point {
                c.self_intersection -= 1;
            }
        }

        // adjacency: curves through the point now meet the new curve instead
        // of (possibly) each other
        if through.len() == 2 {
            let (p, q) = (
                self.curves[through[0]].name.clone(),
                self.curves[through[1]].name.clone(),
            );
            let key = if p < q { (p, q) } else { (q, p) };
            self.adjacency.remove(&key);
        }
        for &i in &through {
            let a = self.curves[i].name.clone();
            let key = if a < new_name {
                (a, new_name.clone())
            } else {
                (new_name.clone(), a)
            };
            self.adjacency.insert(key);
        }

        let ledger_multiplicity = if k == 0 {
            1
        } else {
            through.iter().map(|&i| self.curves[i].ledger_multiplicity).sum()
        };
        let mut locus = BTreeMap::new();
        locus.insert(id_a.clone(), exc_a);
        locus.insert(id_b.clone(), exc_b);
        self.curves.push(ExceptionalCurve {
            name: new_name,
            self_intersection: -1,
            locus,
            ledger_multiplicity,
        });
        self.charts.push(chart_a);
        self.charts.push(chart_b);
        self.steps.push(TowerStep {
            chart: chart_id.to_string(),
            point: (point.0.to_string(), point.1.to_string()),
        });
        Ok(())
    }

    /// Builds a tower from serialized steps.
    pub fn from_steps(steps: &[TowerStep]) -> Result<Tower> {
        let mut t = Tower::base();
        for s in steps {
            let p = (parse_rat(&s.point.0)?, parse_rat(&s.point.1)?);
            t.blowup_point(&s.chart, p)?;
        }
        Ok(t)
    }

    /// Deterministic DOT rendering of the dual graph: vertices are the
    /// exceptional curves labeled with self-intersections, edges the
    /// adjacency.
    pub fn dual_graph_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for c in &self.curves {
            let _ = writeln!(
                out,
                "  {} [label=\"{} ({})\"];",
                c.name, c.name, c.self_intersection
            );
        }
        for (a, b) in &self.adjacency {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }

    /// Chain summary of the dual graph: (curve name, self-intersection)
    /// sorted by curve index, plus the edge list.
    pub fn dual_graph_data(&self) -> (Vec<(String, i64)>, Vec<(String, String)>) {
        (
            self.curves
                .iter()
                .map(|c| (c.name.clone(), c.self_intersection))
                .collect(),
            self.adjacency.iter().cloned().collect(),
        )
    }

    /// Order of vanishing data: for each exceptional curve, the minimum over
    /// the given base functions of the order of vanishing of its pullback
    /// along the curve, computed by repeated exact division in each chart
    /// where the curve is visible (the results must agree).
    pub fn total_transform_multiplicity(
        &self,
        funcs: (&Polynomial, &Polynomial),
    ) -> Result<BTreeMap<String, u32>> {
        let mut out = BTreeMap::new();
        for c in &self.curves {
            let mut orders: Vec<u32> = Vec::new();
            for f in [funcs.0, funcs.1] {
                let mut per_chart: Option<u32> = None;
                for (chart_id, eq) in &c.locus {
                    let chart = self.chart(chart_id)?;
                    let mut map = BTreeMap::new();
                    map.insert("x".to_string(), chart.base_images.0.clone());
                    map.insert("y".to_string(), chart.base_images.1.clone());
                    let pulled = f.substitute(&map, &chart.ring)?;
                    let ord = vanish_order(&pulled, eq)?;
                    match per_chart {
                        None => per_chart = Some(ord),
                        Some(prev) => {
                            if prev != ord {
                                return Err(Error::Invalid(format!(
                                    "inconsistent vanishing order for {} across charts",
                                    c.name
                                )));
                            }
                        }
                    }
                }
                orders.push(per_chart.unwrap_or(0));
            }
            out.insert(c.name.clone(), *orders.iter().min().unwrap_or(&0));
        }
        Ok(out)
    }

    /// Multiplicities along each curve via the ledger rule: the first curve
    /// enters at 1; blowing a free point of a curve of multiplicity m gives
    /// m; blowing a node gives the sum. Maintained at creation time, and
    /// used as the independent cross-check of
    /// `total_transform_multiplicity` for towers rooted at the origin.
    pub fn ledger_multiplicities(&self) -> BTreeMap<String, u32> {
        self.curves
            .iter()
            .map(|c| (c.name.clone(), c.ledger_multiplicity))
            .collect()
    }

    /// The open surface S_n: all exceptional curves but the last removed.
    /// Verifies the construction rule that the last curve meets the removed
    /// ones in at most one point, and that the kept curve is a line.
    pub fn open_surface(&self, budget: &Budget) -> Result<OpenSurface> {
        let n = self.curves.len();
        if n == 0 {
            return Err(Error::Invalid("open surface needs at least one blow-up".into()));
        }
        let last = &self.curves[n - 1];
        let removed: Vec<String> = self.curves[..n - 1].iter().map(|c| c.name.clone()).collect();
        let neighbors: Vec<&(String, String)> = self
            .adjacency
            .iter()
            .filter(|(a, b)| a == &last.name || b == &last.name)
            .collect();
        if neighbors.len() >= 2 {
            return Err(Error::RuleCViolated);
        }
        // kept curve is covered by the retained charts and its coordinate
        // ring restricted to the main chart is a univariate polynomial ring
        let main_chart = self
            .charts
            .iter()
            .rev()
            .find(|c| last.locus.contains_key(&c.id))
            .expect("last curve visible in its own charts")
            .clone();
        let eq = last.locus[&main_chart.id].clone();
        let alg = PresentedAlgebra::new_allow_empty(&main_chart.ring, vec![eq.clone()], budget)?;
        // E_n in this chart must be a coordinate line: its ideal principal
        // with linear, single-variable equation
        let linear = eq.total_degree() == Some(1) && eq.terms().len() == 1;
        if !linear {
            return Err(Error::Invalid(format!(
                "kept curve is not a coordinate line in chart {}",
                main_chart.id
            )));
        }
        let _ = alg;
        Ok(OpenSurface {
            kept: last.name.clone(),
            removed,
            main_chart,
            kept_equation: eq,
        })
    }
}

fn eval_at(f: &Polynomial, point: &(Rat, Rat)) -> Result<Rat> {
    let vars = f.ring().vars().to_vec();
    let mut vals = BTreeMap::new();
    vals.insert(vars[0].clone(), point.0.clone());
    vals.insert(vars[1].clone(), point.1.clone());
    let v = f.specialize(&vals)?;
    v.constant_value()
        .ok_or_else(|| Error::Invalid("evaluation did not produce a constant".into()))
}

/// Removes every factor equal to `divisor` (exact monomial-wise division by
/// a single-variable equation).
fn divide_out(f: &Polynomial, divisor: &Polynomial) -> Result<Polynomial> {
    let mut cur = f.clone();
    loop {
        match cur.try_exact_div(divisor)? {
            Some(q) if !q.is_zero() => cur = q,
            _ => return Ok(cur),
        }
    }
}

/// Order of vanishing of `f` along the principal locus `eq`: the number of
/// times `eq` divides `f` exactly.
fn vanish_order(f: &Polynomial, eq: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::Invalid("zero pullback has infinite order".into()));
    }
    let mut ord = 0u32;
    let mut cur = f.clone();
    while let Some(q) = cur.try_exact_div(eq)? {
        ord += 1;
        cur = q;
        if ord > 64 {
            return Err(Error::Invalid("vanishing order exceeds 64".into()));
        }
    }
    Ok(ord)
}


#[derive(Clone, Debug)]
pub struct OpenSurface {
    pub kept: String,
    pub removed: Vec<String>,
    /// the chart containing the kept curve as a coordinate line
    pub main_chart: Chart,
    pub kept_equation: Polynomial,
}

/// Gluing verification for hand-described surfaces: `transition` and
/// `inverse_hint` are co-morphisms between the two overlap rings; both
/// composites must be the identity modulo the localized relations.
pub fn verify_custom_gluing(
    transition: &crate::lnd::RingMorphism,
    inverse_hint: &crate::lnd::RingMorphism,
    budget: &Budget,
) -> Result<bool> {
    Ok(transition.check_well_defined(budget)?
        && inverse_hint.check_well_defined(budget)?
        && transition.compose(inverse_hint)?.is_identity(budget)?
        && inverse_hint.compose(transition)?.is_identity(budget)?)
}

/// Convenience: the chain tower where each step blows up the origin
/// of the newest primary chart (all free points).
pub fn chain_tower(n: usize) -> Result<Tower> {
    let mut t = Tower::base();
    let mut chart = "U0".to_string();
    for i in 0..n {
        t.blowup_point(&chart, (Rat::zero(), Rat::zero()))?;
        chart = format!("{chart}.A{}", i + 1);
    }
    Ok(t)
}

/// The fork-shaped tower behind the two-chart surfaces of the second
/// example family (for n >= 1: 2n+3 blow-ups): free point, node, then a
/// free chain.
pub fn fork_tower(n: usize) -> Result<Tower> {
    let mut t = Tower::base();
    // E1: blow the origin of the plane
    t.blowup_point("U0", (Rat::zero(), Rat::zero()))?;
    // E2: free point of E1 (origin of the A-chart)
    t.blowup_point("U0.A1", (Rat::zero(), Rat::zero()))?;
    // E3: the node E1 ∩ E2. In chart U0.A1.B2 the exceptional E2 is {d2=0}
    // and the proper transform of E1 is {c2=0}, so the node is the origin.
    t.blowup_point("U0.A1.B2", (Rat::zero(), Rat::zero()))?;
    // E4..E_{2n+3}: free chain on the newest curve, away from older curves.
    // In chart ...A_k the newest curve is {a_k = 0} and older curves meet it
    // only at infinity of the chart, except right after the node step where
    // the proper transforms sit at b=0; blowing at b = 1 stays clear.
    let mut chart = "U0.A1.B2".to_string();
    let mut first = true;
    for k in 3..(2 * n + 3) {
        let b = if first { Rat::one() } else { Rat::zero() };
        // the newest curve in chart `chart.Ak` is {a_k = 0}
        chart = format!("{chart}.A{k}");
        t.blowup_point(&chart, (Rat::zero(), b))?;
        first = false;
    }
    Ok(t)
}

pub fn base_coordinate_functions() -> (Polynomial, Polynomial) {
    let ring = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
    (
        parse_polynomial(&ring, "x").unwrap(),
        parse_polynomial(&ring, "y").unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn single_blowup_charts_and_curve() {
        let mut t = Tower::base();
        t.blowup_point("U0", (Rat::zero(), Rat::zero())).unwrap();
        assert_eq!(t.curves().len(), 1);
        assert_eq!(t.curves()[0].self_intersection, -1);
        // y = x * w pattern in the A chart
        let a = t.chart("U0.A1").unwrap();
        assert_eq!(a.base_images.0.to_string(), "a1");
        assert_eq!(a.base_images.1.to_string(), "a1*b1");
        let (x, y) = base_coordinate_functions();
        let mult = t.total_transform_multiplicity((&x, &y)).unwrap();
        assert_eq!(mult["E1"], 1);
    }

    #[test]
    fn figure_one_ledger() {
        // free, free, node E2∩E3, free on E4: chain (-2,-3,-2,-2) plus -1
        let mut t = Tower::base();
        t.blowup_point("U0", (Rat::zero(), Rat::zero())).unwrap();
        t.blowup_point("U0.A1", (Rat::zero(), Rat::zero())).unwrap();
        // after step 2 the newest curve is E2 = {a2=0} in chart U0.A1.A2
        // with E1 meeting it in chart B2; blow a free point of E2
        t.blowup_point("U0.A1.A2", (Rat::zero(), Rat::one())).unwrap();
        // E2 is now -2 and E1 -2; blow the node E2 ∩ E3:
        // in chart U0.A1.A2.B3, E3 = {d3=0}, E2 proper = {c3=0}
        t.blowup_point("U0.A1.A2.B3", (Rat::zero(), Rat::zero()))
            .unwrap();
        // blow a free point of E4: E4 = {a4=0} in ...A4 with neighbors away
        t.blowup_point("U0.A1.A2.B3.A4", (Rat::zero(), Rat::one()))
            .unwrap();
        let (verts, _) = t.dual_graph_data();
        let si: Vec<i64> = verts.iter().map(|(_, s)| *s).collect();
        assert_eq!(si, vec![-2, -3, -2, -2, -1]);
    }

    #[test]
    fn free_point_must_lie_on_newest_curve() {
        let mut t = Tower::base();
        t.blowup_point("U0", (Rat::zero(), Rat::zero())).unwrap();
        let err = t.blowup_point("U0.A1", (Rat::one(), Rat::one()));
        assert!(matches!(err, Err(Error::PointNotOnRequiredCurve { .. })));
    }

    #[test]
    fn chain_tower_dual_graph() {
        for n in 2..=5 {
            let t = chain_tower(n).unwrap();
            let (verts, edges) = t.dual_graph_data();
            let si: Vec<i64> = verts.iter().map(|(_, s)| *s).collect();
            let mut expected = vec![-2i64; n - 1];
            expected.push(-1);
            assert_eq!(si, expected, "chain self-intersections for n={n}");
            assert_eq!(edges.len(), n - 1);
            for i in 1..n {
                let a = format!("E{i}");
                let b = format!("E{}", i + 1);
                let key = if a < b { (a, b) } else { (b, a) };
                assert!(edges.contains(&key));
            }
            let (x, y) = base_coordinate_functions();
            let mult = t.total_transform_multiplicity((&x, &y)).unwrap();
            assert_eq!(mult[&format!("E{n}")], 1);
            assert_eq!(t.ledger_multiplicities(), mult);
        }
    }

    #[test]
    fn fork_tower_matches_figure() {
        let t = fork_tower(1).unwrap();
        let (verts, edges) = t.dual_graph_data();
        let si: Vec<i64> = verts.iter().map(|(_, s)| *s).collect();
        assert_eq!(si, vec![-3, -2, -2, -2, -1]);
        let want: BTreeSet<(String, String)> = [
            ("E1", "E3"),
            ("E2", "E3"),
            ("E3", "E4"),
            ("E4", "E5"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(edges.into_iter().collect::<BTreeSet<_>>(), want);
        let (x, y) = base_coordinate_functions();
        let mult = t.total_transform_multiplicity((&x, &y)).unwrap();
        assert_eq!(mult["E5"], 2);
        assert_eq!(t.ledger_multiplicities(), mult);
    }

    #[test]
    fn multiplicity_additivity_at_nodes() {
        let t = fork_tower(1).unwrap();
        let m = t.ledger_multiplicities();
        assert_eq!(m["E1"], 1);
        assert_eq!(m["E2"], 1);
        assert_eq!(m["E3"], 2);
        assert_eq!(m["E4"], 2);
        assert_eq!(m["E5"], 2);
    }

    #[test]
    fn open_surface_of_chain() {
        let t = chain_tower(2).unwrap();
        let s = t.open_surface(&budget()).unwrap();
        assert_eq!(s.kept, "E2");
        assert_eq!(s.removed, vec!["E1".to_string()]);
    }

    #[test]
    fn rule_c_violation_detected() {
        // blow the node of E1 and E2 last: E3 meets both removed curves
        let mut t = Tower::base();
        t.blowup_point("U0", (Rat::zero(), Rat::zero())).unwrap();
        t.blowup_point("U0.A1", (Rat::zero(), Rat::zero())).unwrap();
        t.blowup_point("U0.A1.B2", (Rat::zero(), Rat::zero())).unwrap();
        assert!(matches!(t.open_surface(&budget()), Err(Error::RuleCViolated)));
    }

    #[test]
    fn mismatched_inverse_hint_is_rejected() {
        use crate::lnd::{PresentedAlgebra, RingMorphism};
        let b = budget();
        let r0 = RingDescriptor::new(vec!["s"], MonomialOrder::DegRevLex);
        let a = PresentedAlgebra::free(&r0, &b).unwrap();
        let loc = a
            .localized(vec![("s", parse_polynomial(&r0, "s").unwrap())], &b)
            .unwrap();
        let rl = loc.ring().clone();
        let t = RingMorphism::new(
            loc.clone(),
            loc.clone(),
            [("s", "s"), ("s_inv", "s_inv")]
                .iter()
                .map(|(k, v)| (k.to_string(), parse_polynomial(&rl, v).unwrap()))
                .collect(),
        )
        .unwrap();
        // wrong inverse: sends s to s^2
        let bad = RingMorphism::new(
            loc.clone(),
            loc,
            [("s", "s^2"), ("s_inv", "s_inv")]
                .iter()
                .map(|(k, v)| (k.to_string(), parse_polynomial(&rl, v).unwrap()))
                .collect(),
        )
        .unwrap();
        assert!(!verify_custom_gluing(&t, &bad, &b).unwrap());
    }

    #[test]
    fn sibling_charts_cohere_on_overlap() {
        // the two charts of one blow-up describe the same base functions
        // under the standard identification a = c*d, b = 1/d ... with the
        // A-chart pair (a, b) and B-chart pair (c, d): a = c*d, b = 1/c
        let mut t = Tower::base();
        t.blowup_point("U0", (Rat::zero(), Rat::zero())).unwrap();
        let a = t.chart("U0.A1").unwrap();
        let bch = t.chart("U0.B1").unwrap();
        let overlap = RingDescriptor::with_inverted(
            vec!["c1", "d1"],
            vec!["c1"],
            MonomialOrder::DegRevLex,
        );
        let mut map = BTreeMap::new();
        map.insert(
            "a1".to_string(),
            parse_polynomial(&overlap, "c1*d1").unwrap(),
        );
        map.insert(
            "b1".to_string(),
            parse_polynomial(&overlap, "c1^(-1)").unwrap(),
        );
        for (fa, fb) in [
            (&a.base_images.0, &bch.base_images.0),
            (&a.base_images.1, &bch.base_images.1),
        ] {
            let via_a = fa.substitute(&map, &overlap).unwrap();
            let direct = fb.cast(&overlap).unwrap();
            assert_eq!(via_a, direct);
        }
    }

    #[test]
    fn dot_output_is_stable() {
        let t = chain_tower(3).unwrap();
        let dot = t.dual_graph_dot();
        assert!(dot.contains("E1 [label=\"E1 (-2)\"]"));
        assert!(dot.contains("E3 [label=\"E3 (-1)\"]"));
        assert!(dot.contains("E1 -- E2;"));
    }
}
