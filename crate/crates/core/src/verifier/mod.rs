//! Case-file ingestion, the built-in corpus, the end-to-end verification
//! pipelines for encoded examples, and report generation.
//!
//! A case file is a JSON document (`"schema": 1`) whose `kind` selects the
//! pipeline: `variety-extension`, `cocycle`, `tower`, `gluing`, or
//! `synthesis`. Expected results are part of the case and every declared
//! expectation shows up as exactly one check in the report. Budget and cap
//! exits surface as `inconclusive`, never as silent failures.

mod corpus;
mod extension;
mod gluing;

pub use corpus::builtin_corpus;

use crate::affext::{certify_extension, synthesize_extension};
use crate::blowup::{base_coordinate_functions, chain_tower, fork_tower, Tower, TowerStep};
use crate::cech::{classify_extension, h1_p1_dimension, restrict_to_e, torsor_datum, Cocycle};
use crate::error::{Error, Result};
use crate::ideals::Budget;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingSpec {
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: String,
}

fn default_order() -> String {
    "degrevlex".into()
}

impl RingSpec {
    pub fn build(&self) -> Result<crate::polycore::Ring> {
        let order = match self.order.as_str() {
            "lex" => crate::polycore::MonomialOrder::Lex,
            "degrevlex" => crate::polycore::MonomialOrder::DegRevLex,
            other => return Err(Error::Invalid(format!("unknown order `{other}`"))),
        };
        Ok(crate::polycore::RingDescriptor::new(
            self.vars.clone(),
            order,
        ))
    }
}

/// Expected fiber structure over a base point.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FiberExpect {
    /// the fiber is empty: the specialized ideal is the unit ideal
    Empty,
    /// scheme-theoretic fiber is the reduced plane cut out by `vanishing`,
    /// with the listed coordinates surviving
    ReducedPlane {
        vanishing: Vec<String>,
        coords: Vec<String>,
    },
    /// fiber presented by explicit residual relations (e.g. a quadric)
    ReducedPresentation { relations: Vec<String> },
    /// principal fiber ideal with the stated multiplicity in one variable
    PrincipalMultiplicity { var: String, multiplicity: u32 },
    /// principal fiber ideal, squarefree in the stated variable
    Squarefree { var: String },
    /// disjoint union of two affine planes, each given by extra vanishing
    /// equations; optionally the induced action must be trivial on both
    TwoComponents {
        components: Vec<Vec<String>>,
        trivial_action: bool,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberSpec {
    pub point: BTreeMap<String, String>,
    pub expect: FiberExpect,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingVariant {
    pub label: String,
    pub images: BTreeMap<String, String>,
    pub expect_well_defined: bool,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub torsor_ring: RingSpec,
    pub torsor_relations: Vec<String>,
    pub torsor_derivation: BTreeMap<String, String>,
    /// images of the extension's generators in the torsor ring (the
    /// co-morphism of the open embedding)
    pub images: BTreeMap<String, String>,
    #[serde(default)]
    pub variants: Vec<EmbeddingVariant>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantSpec {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothnessSpec {
    pub at: Vec<String>,
    pub codim: usize,
}

/// Data realizing this variety as an equivariant affine modification of a
/// source variety, with the mutual-isomorphism oracle for the match.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModificationSpec {
    pub source_ring: RingSpec,
    pub source_relations: Vec<String>,
    pub source_derivation: BTreeMap<String, String>,
    pub divisor: String,
    pub center: Vec<String>,
    /// derivation on the modified presentation (variables t1, t2, ...)
    pub modified_derivation: BTreeMap<String, String>,
    /// modified presentation -> this case's ring
    pub match_forward: BTreeMap<String, String>,
    /// this case's ring -> modified presentation
    pub match_backward: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionCase {
    pub ring: RingSpec,
    pub relations: Vec<String>,
    pub derivation: BTreeMap<String, String>,
    #[serde(default = "default_cap")]
    pub nilpotency_cap: u32,
    #[serde(default)]
    pub expect_nilpotency_indices: BTreeMap<String, u32>,
    #[serde(default)]
    pub embedding: Option<EmbeddingSpec>,
    #[serde(default)]
    pub fibers: Vec<FiberSpec>,
    #[serde(default)]
    pub invariants: Vec<InvariantSpec>,
    #[serde(default)]
    pub smoothness: Option<SmoothnessSpec>,
    #[serde(default)]
    pub modification: Option<ModificationSpec>,
}

fn default_cap() -> u32 {
    64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleCase {
    pub value: String,
    pub expect_l0: i64,
    #[serde(default)]
    pub expect_restriction_zero_at: Vec<i64>,
    #[serde(default)]
    pub expect_h1_dims_up_to: Option<i64>,
    #[serde(default)]
    pub expect_datum_gluing: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerBuilder {
    Chain { n: usize },
    Fork { n: usize },
    Steps { steps: Vec<TowerStep> },
}

impl TowerBuilder {
    pub fn build(&self) -> Result<Tower> {
        match self {
            TowerBuilder::Chain { n } => chain_tower(*n),
            TowerBuilder::Fork { n } => fork_tower(*n),
            TowerBuilder::Steps { steps } => Tower::from_steps(steps),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerCase {
    pub tower: TowerBuilder,
    pub expect_self_intersections: Vec<i64>,
    #[serde(default)]
    pub expect_adjacency: Vec<(String, String)>,
    #[serde(default)]
    pub expect_multiplicity: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalizedChartSpec {
    pub vars: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    /// elements to invert, with the names their inverses get
    #[serde(default)]
    pub inverted: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingCase {
    /// family parameter (the surface has 2n+3 exceptional curves)
    pub n: usize,
    /// the two full charts of the surface
    pub chart0: LocalizedChartSpec,
    pub chart_inf: LocalizedChartSpec,
    /// extra elements inverted on each side of the overlap
    #[serde(default)]
    pub overlap0_invert: Vec<(String, String)>,
    #[serde(default)]
    pub overlap_inf_invert: Vec<(String, String)>,
    /// co-morphism overlap_inf -> overlap_0
    pub transition: BTreeMap<String, String>,
    /// co-morphism overlap_0 -> overlap_inf
    pub inverse: BTreeMap<String, String>,
    /// bundle gluing: image of t_inf in the 0-chart bundle
    pub bundle_transition: String,
    /// base coordinates pulled back to the infinity chart
    pub base_images_inf: (String, String),
    /// unit certificate: this element is invertible along the kept curve
    pub order_unit: String,
    /// local equation whose vanishing order realizes the multiplicity
    pub order_equation: String,
    pub expect_multiplicity: u32,
    pub expect_fiber_vanishing: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SynthesisCase {
    pub cocycle: String,
    pub tower: TowerBuilder,
    pub expect_level_trace: Vec<i64>,
    pub expect_multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CasePayload {
    VarietyExtension(ExtensionCase),
    Cocycle(CocycleCase),
    Tower(TowerCase),
    Gluing(GluingCase),
    Synthesis(SynthesisCase),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseFile {
    pub schema: u32,
    pub id: String,
    #[serde(default)]
    pub description: String,
    /// audit pointer to the source location the expectations come from
    #[serde(default)]
    pub citation: String,
    #[serde(flatten)]
    pub payload: CasePayload,
}

impl CaseFile {
    pub fn from_json(src: &str) -> Result<CaseFile> {
        let case: CaseFile = serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if case.schema != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported schema version {} (expected {})",
                case.schema, SCHEMA_VERSION
            )));
        }
        Ok(case)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case serialization")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    /// witness on pass (certificate data) or counterexample on failure
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub case_id: String,
    pub checks: Vec<CheckReport>,
    pub elapsed_ms: u128,
    pub budget_cap: u64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("case {} ({} ms)\n", self.case_id, self.elapsed_ms));
        for c in &self.checks {
            out.push_str(&format!("  [{}] {} - {}\n", c.status, c.name, c.detail));
        }
        out
    }
}

pub(crate) struct Checks {
    items: Vec<CheckReport>,
}

impl Checks {
    pub(crate) fn new() -> Self {
        Checks { items: Vec::new() }
    }

    /// Records a boolean check; budget/cap errors become inconclusive, all
    /// other errors become failures carrying the error text.
    pub(crate) fn run(
        &mut self,
        name: &str,
        outcome: Result<(bool, String)>,
    ) {
        let (status, detail) = match outcome {
            Ok((true, d)) => (CheckStatus::Pass, d),
            Ok((false, d)) => (CheckStatus::Fail, d),
            Err(Error::ResourceBudgetExceeded { steps, cap }) => (
                CheckStatus::Inconclusive,
                format!("budget exceeded: {steps} steps against cap {cap}"),
            ),
            Err(Error::CapExceeded(what)) => (
                CheckStatus::Inconclusive,
                format!("iteration cap exceeded at {what}"),
            ),
            Err(e) => (CheckStatus::Fail, format!("error: {e}")),
        };
        self.items.push(CheckReport {
            name: name.to_string(),
            status,
            detail,
        });
    }

    pub(crate) fn into_vec(self) -> Vec<CheckReport> {
        self.items
    }
}

/// Dispatches a case file to its pipeline and assembles the report.
pub fn run_case(case: &CaseFile, budget: &Budget) -> Report {
    let t0 = Instant::now();
    let checks = match &case.payload {
        CasePayload::VarietyExtension(c) => extension::run(c, budget),
        CasePayload::Cocycle(c) => run_cocycle_case(c),
        CasePayload::Tower(c) => run_tower_case(c),
        CasePayload::Gluing(c) => gluing::run(c, budget),
        CasePayload::Synthesis(c) => run_synthesis_case(c, budget),
    };
    Report {
        case_id: case.id.clone(),
        checks,
        elapsed_ms: t0.elapsed().as_millis(),
        budget_cap: budget.cap,
    }
}

fn run_cocycle_case(c: &CocycleCase) -> Vec<CheckReport> {
    let mut checks = Checks::new();
    let parsed = Cocycle::parse(&c.value);
    let cocycle = match parsed {
        Ok(v) => v,
        Err(e) => {
            checks.run("parse", Err(e));
            return checks.into_vec();
        }
    };
    checks.run(
        "classification_l0",
        classify_extension(&cocycle).map(|cls| {
            (
                cls.l0 == c.expect_l0,
                format!(
                    "l0 = {} (expected {}); surviving monomials {:?}; d_raw = {}, d_surviving = {}{}",
                    cls.l0,
                    c.expect_l0,
                    cls.canonical.keys().collect::<Vec<_>>(),
                    cls.d_raw,
                    cls.d_surviving,
                    if cls.raw_agrees { "" } else { " (textbook d disagrees; surviving d is authoritative)" }
                ),
            )
        }),
    );
    checks.run(
        "restriction_nonzero_at_l0",
        torsor_datum(&cocycle, c.expect_l0).map(|d| {
            let v = restrict_to_e(&d);
            (
                v.iter().any(|x| !num_traits::Zero::is_zero(x)),
                format!("class vector at level {}: {:?}", c.expect_l0, v.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
            )
        }),
    );
    for l in &c.expect_restriction_zero_at {
        checks.run(
            &format!("restriction_zero_at_{l}"),
            torsor_datum(&cocycle, *l).map(|d| {
                let v = restrict_to_e(&d);
                (
                    v.iter().all(num_traits::Zero::is_zero) && v.len() == (*l - 1) as usize,
                    format!("dimension {} vector vanishes", v.len()),
                )
            }),
        );
    }
    if let Some(max) = c.expect_h1_dims_up_to {
        let mut ok = true;
        let mut detail = String::new();
        for l in 2..=max {
            let dim = h1_p1_dimension(l);
            if dim != (l - 1) as usize {
                ok = false;
            }
            detail.push_str(&format!("dim H1(O(-{l})) = {dim}; "));
        }
        checks.run("h1_dimensions", Ok((ok, detail)));
    }
    if let Some(expected) = &c.expect_datum_gluing {
        checks.run(
            "datum_gluing",
            torsor_datum(&cocycle, c.expect_l0).map(|d| {
                let got = d.gluing.to_string();
                (got == *expected, format!("gluing = {got} (expected {expected})"))
            }),
        );
    }
    checks.into_vec()
}

fn run_tower_case(c: &TowerCase) -> Vec<CheckReport> {
    let mut checks = Checks::new();
    let tower = match c.tower.build() {
        Ok(t) => t,
        Err(e) => {
            checks.run("build", Err(e));
            return checks.into_vec();
        }
    };
    let (verts, edges) = tower.dual_graph_data();
    let si: Vec<i64> = verts.iter().map(|(_, s)| *s).collect();
    checks.run(
        "self_intersections",
        Ok((
            si == c.expect_self_intersections,
            format!("{si:?} (expected {:?})", c.expect_self_intersections),
        )),
    );
    if !c.expect_adjacency.is_empty() {
        let got: std::collections::BTreeSet<_> = edges.into_iter().collect();
        let want: std::collections::BTreeSet<_> = c.expect_adjacency.iter().cloned().collect();
        checks.run(
            "dual_graph_adjacency",
            Ok((got == want, format!("{got:?}"))),
        );
    }
    if !c.expect_multiplicity.is_empty() {
        let (x, y) = base_coordinate_functions();
        checks.run(
            "total_transform_multiplicity",
            tower.total_transform_multiplicity((&x, &y)).map(|m| {
                let ok = c.expect_multiplicity.iter().all(|(k, v)| m.get(k) == Some(v));
                (ok, format!("{m:?} (expected ⊇ {:?})", c.expect_multiplicity))
            }),
        );
        checks.run(
            "ledger_cross_check",
            tower.total_transform_multiplicity((&x, &y)).map(|m| {
                let ledger = tower.ledger_multiplicities();
                (m == ledger, format!("division orders {m:?} vs ledger {ledger:?}"))
            }),
        );
    }
    checks.into_vec()
}

fn run_synthesis_case(c: &SynthesisCase, budget: &Budget) -> Vec<CheckReport> {
    let mut checks = Checks::new();
    let cocycle = match Cocycle::parse(&c.cocycle) {
        Ok(v) => v,
        Err(e) => {
            checks.run("parse", Err(e));
            return checks.into_vec();
        }
    };
    let tower = match c.tower.build() {
        Ok(t) => t,
        Err(e) => {
            checks.run("tower", Err(e));
            return checks.into_vec();
        }
    };
    match synthesize_extension(&cocycle, &tower, budget) {
        Ok(ext) => {
            checks.run(
                "level_trace",
                Ok((
                    ext.level_trace == c.expect_level_trace,
                    format!("{:?} (expected {:?})", ext.level_trace, c.expect_level_trace),
                )),
            );
            match certify_extension(&ext, &cocycle, budget) {
                Ok(report) => {
                    for chk in &report.checks {
                        checks.run(
                            &format!("certify_{}", chk.name),
                            Ok((chk.pass, chk.detail.clone())),
                        );
                    }
                    checks.run(
                        "fiber_multiplicity",
                        Ok((
                            report.fiber_multiplicity == c.expect_multiplicity,
                            format!(
                                "multiplicity {} (expected {})",
                                report.fiber_multiplicity, c.expect_multiplicity
                            ),
                        )),
                    );
                }
                Err(e) => checks.run("certify", Err(e)),
            }
        }
        Err(e) => checks.run("synthesize", Err(e)),
    }
    checks.into_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_files_round_trip() {
        for case in builtin_corpus() {
            let json = case.to_json();
            let back = CaseFile::from_json(&json).unwrap();
            assert_eq!(back.to_json(), json, "round trip for {}", case.id);
        }
    }

    #[test]
    fn malformed_case_reports_location() {
        let bad = "{ \"schema\": 1, \"id\": \"x\",\n  \"kind\": ";
        match CaseFile::from_json(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn report_serialization_round_trips() {
        let case = builtin_corpus().into_iter().next().unwrap();
        let report = run_case(&case, &Budget::default());
        let json = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive_not_fail() {
        let case = corpus_case_by_id("x0-homogeneous-quadric");
        let tiny = Budget::new(3);
        let report = run_case(&case, &tiny);
        assert!(
            report
                .checks
                .iter()
                .any(|c| c.status == CheckStatus::Inconclusive),
            "{}",
            report.render_text()
        );
        assert!(
            report.checks.iter().all(|c| c.status != CheckStatus::Fail),
            "budget exits must not masquerade as failures:\n{}",
            report.render_text()
        );
    }

    fn corpus_case_by_id(id: &str) -> CaseFile {
        builtin_corpus()
            .into_iter()
            .find(|c| c.id == id)
            .expect("corpus id")
    }
}
