//! The built-in corpus: the threefolds, towers, gluings, cocycles and
//! synthesis runs that the verification pipelines replay, each with its
//! expected-results block and a citation string for audit.

use super::*;

fn m(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn sv(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn ring(vars: &[&str]) -> RingSpec {
    RingSpec {
        vars: sv(vars),
        order: "degrevlex".into(),
    }
}

fn intro_case() -> CaseFile {
    CaseFile {
        schema: SCHEMA_VERSION,
        id: "intro-threefold".into(),
        description: "Smooth threefold x^2(x-1)v + yu^2 - x = 0 with its fiber degenerations"
            .into(),
        citation: "introduction, first example".into(),
        payload: CasePayload::VarietyExtension(ExtensionCase {
            ring: ring(&["x", "y", "u", "v"]),
            relations: sv(&["x^2*(x-1)*v + y*u^2 - x"]),
            derivation: m(&[("u", "x^2*(x-1)"), ("v", "-2*y*u")]),
            nilpotency_cap: 64,
            expect_nilpotency_indices: [("x", 1u32), ("y", 1), ("u", 2), ("v", 3)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            embedding: None,
            fibers: vec![
                FiberSpec {
                    point: m(&[("x", "1"), ("y", "0")]),
                    expect: FiberExpect::Empty,
                },
                FiberSpec {
                    point: m(&[("x", "0"), ("y", "0")]),
                    expect: FiberExpect::ReducedPlane {
                        vanishing: vec![],
                        coords: sv(&["u", "v"]),
                    },
                },
                FiberSpec {
                    point: m(&[("x", "0"), ("y", "1")]),
                    expect: FiberExpect::PrincipalMultiplicity {
                        var: "u".into(),
                        multiplicity: 2,
                    },
                },
                FiberSpec {
                    point: m(&[("x", "1"), ("y", "1")]),
                    expect: FiberExpect::Squarefree { var: "u".into() },
                },
            ],
            invariants: vec![],
            smoothness: Some(SmoothnessSpec {
                at: sv(&["x", "y"]),
                codim: 1,
            }),
            modification: None,
        }),
    }
}

fn two_component_case() -> CaseFile {
    CaseFile {
        schema: SCHEMA_VERSION,
        id: "two-component-fiber".into(),
        description: "Extension whose central fiber is a disjoint union of two planes with \
                      trivial induced action"
            .into(),
        citation: "first section, two-components example".into(),
        payload: CasePayload::VarietyExtension(ExtensionCase {
            ring: ring(&["x", "y", "c", "d", "e", "f"]),
            relations: sv(&[
                "x*d - y*(c+1)",
                "x*c^2 - y^2*e",
                "y*f - c*(c+1)",
                "x*f^2 - (c+1)^2*e",
                "d*e - c*f",
            ]),
            derivation: m(&[
                ("c", "x*y"),
                ("d", "y^2"),
                ("f", "x*(2*c+1)"),
                ("e", "2*x^2*f - 2*x*y*e"),
            ]),
            nilpotency_cap: 64,
            expect_nilpotency_indices: [("x", 1u32), ("y", 1), ("c", 2), ("d", 2), ("e", 3), ("f", 3)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            embedding: Some(EmbeddingSpec {
                torsor_ring: ring(&["x", "y", "u", "v"]),
                torsor_relations: sv(&["x*v - y*u - 1"]),
                torsor_derivation: m(&[("u", "x"), ("v", "y")]),
                images: m(&[
                    ("x", "x"),
                    ("y", "y"),
                    ("c", "y*u"),
                    ("d", "y*v"),
                    ("e", "x*u^2"),
                    ("f", "x*u*v"),
                ]),
                variants: vec![],
            }),
            fibers: vec![FiberSpec {
                point: m(&[("x", "0"), ("y", "0")]),
                expect: FiberExpect::TwoComponents {
                    components: vec![sv(&["c", "e"]), sv(&["c + 1", "f + d*e"])],
                    trivial_action: true,
                },
            }],
            invariants: vec![],
            smoothness: None,
            modification: None,
        }),
    }
}

fn x0_case() -> CaseFile {
    CaseFile {
        schema: SCHEMA_VERSION,
        id: "x0-homogeneous-quadric".into(),
        description: "The extension X0 with central fiber the smooth quadric pr = q(q-1)".into(),
        citation: "homogeneous torsor example".into(),
        payload: CasePayload::VarietyExtension(ExtensionCase {
            ring: ring(&["x", "y", "p", "q", "r"]),
            relations: sv(&["x*r - y*q", "y*p - x*(q-1)", "p*r - q*(q-1)"]),
            derivation: m(&[("p", "x^2"), ("q", "x*y"), ("r", "y^2")]),
            nilpotency_cap: 64,
            expect_nilpotency_indices: [("x", 1u32), ("y", 1), ("p", 2), ("q", 2), ("r", 2)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            embedding: Some(EmbeddingSpec {
                torsor_ring: ring(&["x", "y", "u", "v"]),
                torsor_relations: sv(&["x*v - y*u - 1"]),
                torsor_derivation: m(&[("u", "x"), ("v", "y")]),
                images: m(&[
                    ("x", "x"),
                    ("y", "y"),
                    ("p", "x*u"),
                    ("q", "x*v"),
                    ("r", "y*v"),
                ]),
                variants: vec![],
            }),
            fibers: vec![FiberSpec {
                point: m(&[("x", "0"), ("y", "0")]),
                expect: FiberExpect::ReducedPresentation {
                    relations: sv(&["p*r - q*(q-1)"]),
                },
            }],
            invariants: vec![],
            smoothness: Some(SmoothnessSpec {
                at: sv(&["x", "y"]),
                codim: 2,
            }),
            modification: None,
        }),
    }
}

fn x1_case() -> CaseFile {
    CaseFile {
        schema: SCHEMA_VERSION,
        id: "x1-proper-extension".into(),
        description: "The proper extension X1, its quotient data, and its realization as an \
                      equivariant modification of X0"
            .into(),
        citation: "proper-extension example and the standard equivariant modification".into(),
        payload: CasePayload::VarietyExtension(ExtensionCase {
            ring: ring(&["x", "y", "z1", "z2", "w"]),
            relations: sv(&[
                "x*w - y*(y*z1 + 1)",
                "x*z2 - z1*(y*z1 + 1)",
                "z1*w - y*z2",
            ]),
            derivation: m(&[("z1", "x"), ("z2", "2*y*z1 + 1"), ("w", "y^2")]),
            nilpotency_cap: 64,
            expect_nilpotency_indices: [("x", 1u32), ("y", 1), ("z1", 2), ("z2", 3), ("w", 2)]
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            embedding: Some(EmbeddingSpec {
                torsor_ring: ring(&["x", "y", "u", "v"]),
                torsor_relations: sv(&["x*v - y*u - 1"]),
                torsor_derivation: m(&[("u", "x"), ("v", "y")]),
                images: m(&[
                    ("x", "x"),
                    ("y", "y"),
                    ("z1", "u"),
                    ("z2", "u*v"),
                    ("w", "y*v"),
                ]),
                variants: vec![EmbeddingVariant {
                    label: "w_maps_to_yu".into(),
                    images: m(&[
                        ("x", "x"),
                        ("y", "y"),
                        ("z1", "u"),
                        ("z2", "u*v"),
                        ("w", "y*u"),
                    ]),
                    expect_well_defined: false,
                    note: "recorded discrepancy: one stated embedding ends in y*u, the other \
                           in y*v; the relation x*w = y*(y*z1+1) forces w = y*v on the torsor, \
                           so the y*u variant must fail the pullback test"
                        .into(),
                }],
            }),
            fibers: vec![FiberSpec {
                point: m(&[("x", "0"), ("y", "0")]),
                expect: FiberExpect::ReducedPlane {
                    vanishing: sv(&["z1"]),
                    coords: sv(&["z2", "w"]),
                },
            }],
            invariants: vec![
                InvariantSpec {
                    num: "x".into(),
                    den: "y".into(),
                },
                InvariantSpec {
                    num: "y*z1 + 1".into(),
                    den: "w".into(),
                },
            ],
            smoothness: Some(SmoothnessSpec {
                at: sv(&["x", "y"]),
                codim: 2,
            }),
            modification: Some(ModificationSpec {
                source_ring: ring(&["x", "y", "p", "q", "r"]),
                source_relations: sv(&["x*r - y*q", "y*p - x*(q-1)", "p*r - q*(q-1)"]),
                source_derivation: m(&[("p", "x^2"), ("q", "x*y"), ("r", "y^2")]),
                divisor: "x^2".into(),
                center: sv(&["x^2", "x*p", "p*q"]),
                modified_derivation: m(&[
                    ("p", "x^2"),
                    ("q", "x*y"),
                    ("r", "y^2"),
                    ("t2", "x"),
                    ("t3", "2*y*t2 + 1"),
                ]),
                match_forward: m(&[
                    ("x", "x"),
                    ("y", "y"),
                    ("p", "x*z1"),
                    ("q", "y*z1 + 1"),
                    ("r", "w"),
                    ("t1", "1"),
                    ("t2", "z1"),
                    ("t3", "z2"),
                ]),
                match_backward: m(&[
                    ("x", "x"),
                    ("y", "y"),
                    ("z1", "t2"),
                    ("z2", "t3"),
                    ("w", "r"),
                ]),
            }),
        }),
    }
}

/// The chain family for n >= 1: variables x, y0, z1, z2, y1..yn.
fn xn_case(n: usize) -> CaseFile {
    let mut vars = vec!["x".to_string(), "y0".to_string(), "z1".to_string(), "z2".to_string()];
    for i in 1..=n {
        vars.push(format!("y{i}"));
    }
    let mut relations = Vec::new();
    // quadrics y_i y_j = y_k y_l for i + j = k + l
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            pairs.push((i, j));
        }
    }
    for a in 0..pairs.len() {
        for b in (a + 1)..pairs.len() {
            let (i, j) = pairs[a];
            let (k, l) = pairs[b];
            if i + j == k + l {
                relations.push(format!("y{i}*y{j} - y{k}*y{l}"));
            }
        }
    }
    for i in 0..n {
        relations.push(format!("z2*y{i} - z1*y{}", i + 1));
    }
    for i in 0..n {
        relations.push(format!("x*y{} - y{i}*(y0*z1 + 1)", i + 1));
    }
    relations.push("x*z2 - z1*(y0*z1 + 1)".into());

    let mut derivation = vec![("z1".to_string(), "x".to_string()),
        ("z2".to_string(), "2*y0*z1 + 1".to_string())];
    for i in 1..=n {
        derivation.push((format!("y{i}"), format!("{i}*y0*y{}", i - 1)));
    }

    let mut embedding_images = vec![
        ("x".to_string(), "x".to_string()),
        ("y0".to_string(), "y0".to_string()),
        ("z1".to_string(), "u".to_string()),
        ("z2".to_string(), "u*v".to_string()),
    ];
    for i in 1..=n {
        embedding_images.push((format!("y{i}"), format!("y0*v^{i}")));
    }

    let mut indices: BTreeMap<String, u32> = BTreeMap::new();
    indices.insert("x".into(), 1);
    indices.insert("y0".into(), 1);
    indices.insert("z1".into(), 2);
    indices.insert("z2".into(), 3);
    for i in 1..=n {
        indices.insert(format!("y{i}"), (i + 1) as u32);
    }

    let mut invariants = vec![InvariantSpec {
        num: "x".into(),
        den: "1".into(),
    }];
    for i in 1..=n {
        invariants.push(InvariantSpec {
            num: format!("y{i}"),
            den: format!("(y0*z1 + 1)^{i}"),
        });
    }

    let mut vanishing = vec!["z1".to_string()];
    for i in 1..n {
        vanishing.push(format!("y{i}"));
    }

    CaseFile {
        schema: SCHEMA_VERSION,
        id: format!("xn-family-{n}"),
        description: format!(
            "Member n = {n} of the chain family: quotient a chain of {} blow-ups",
            n
        ),
        citation: "chain family of extensions and its quotient charts".into(),
        payload: CasePayload::VarietyExtension(ExtensionCase {
            ring: RingSpec {
                vars,
                order: "degrevlex".into(),
            },
            relations,
            derivation: derivation.into_iter().collect(),
            nilpotency_cap: 64,
            expect_nilpotency_indices: indices,
            embedding: Some(EmbeddingSpec {
                torsor_ring: ring(&["x", "y0", "u", "v"]),
                torsor_relations: sv(&["x*v - y0*u - 1"]),
                torsor_derivation: m(&[("u", "x"), ("v", "y0")]),
                images: embedding_images.into_iter().collect(),
                variants: vec![],
            }),
            fibers: vec![FiberSpec {
                point: m(&[("x", "0"), ("y0", "0")]),
                expect: FiberExpect::ReducedPlane {
                    vanishing,
                    coords: vec!["z2".into(), format!("y{n}")],
                },
            }],
            invariants,
            smoothness: if n <= 2 {
                Some(SmoothnessSpec {
                    at: sv(&["x", "y0"]),
                    codim: n + 1,
                })
            } else {
                None
            },
            modification: None,
        }),
    }
}

/// The two-chart family with a multiplicity-two fiber, ingested from its
/// explicit gluing data (2n+3 exceptional curves upstairs).
fn x2n3_case(n: usize) -> CaseFile {
    let relation_inf = if n == 1 {
        "uinf*vinf - zinf^2 - uinf".to_string()
    } else {
        format!("uinf^{n}*vinf - zinf^2 - uinf")
    };
    let vinf_image = format!("(z0_inv*u0_inv)^{n}*(z0_inv^2 + z0*u0)");
    let order_unit = if n == 1 {
        "vinf - 1".to_string()
    } else {
        format!("uinf^{}*vinf - 1", n - 1)
    };
    CaseFile {
        schema: SCHEMA_VERSION,
        id: format!("x2n3-family-{n}"),
        description: format!(
            "Member n = {n} of the fork family: torsor over the two-chart surface with \
             {} exceptional curves and a multiplicity-two fiber",
            2 * n + 3
        ),
        citation: "second example family, gluing data and multiplicity-two fiber".into(),
        payload: CasePayload::Gluing(GluingCase {
            n,
            chart0: LocalizedChartSpec {
                vars: sv(&["z0", "u0"]),
                relations: vec![],
                inverted: vec![("u0".into(), "u0".into())],
            },
            chart_inf: LocalizedChartSpec {
                vars: sv(&["zinf", "uinf", "vinf"]),
                relations: vec![relation_inf],
                inverted: vec![],
            },
            overlap0_invert: vec![("z0".into(), "z0".into())],
            overlap_inf_invert: vec![
                ("zinf".into(), "zinf".into()),
                ("uinf".into(), "uinf".into()),
            ],
            transition: m(&[
                ("zinf", "z0_inv"),
                ("uinf", "z0*u0"),
                ("vinf", vinf_image.as_str()),
                ("zinf_inv", "z0"),
                ("uinf_inv", "z0_inv*u0_inv"),
            ]),
            inverse: m(&[
                ("z0", "zinf_inv"),
                ("u0", "zinf*uinf"),
                ("z0_inv", "zinf"),
                ("u0_inv", "zinf_inv*uinf_inv"),
            ]),
            bundle_transition: "t0 + z0_inv*u0_inv^2".into(),
            base_images_inf: ("uinf".into(), "zinf*uinf".into()),
            order_unit,
            order_equation: "zinf".into(),
            expect_multiplicity: 2,
            expect_fiber_vanishing: sv(&["zinf", "uinf"]),
        }),
    }
}

fn tower_cases() -> Vec<CaseFile> {
    let mut out = Vec::new();
    // the five-step sample tower with a node blow-up in the middle
    out.push(CaseFile {
        schema: SCHEMA_VERSION,
        id: "tower-five-steps".into(),
        description: "Five blow-ups: free, free, free on the new curve, the node, then free"
            .into(),
        citation: "figure of successive total transforms".into(),
        payload: CasePayload::Tower(TowerCase {
            tower: TowerBuilder::Steps {
                steps: vec![
                    TowerStep {
                        chart: "U0".into(),
                        point: ("0".into(), "0".into()),
                    },
                    TowerStep {
                        chart: "U0.A1".into(),
                        point: ("0".into(), "0".into()),
                    },
                    TowerStep {
                        chart: "U0.A1.A2".into(),
                        point: ("0".into(), "1".into()),
                    },
                    TowerStep {
                        chart: "U0.A1.A2.B3".into(),
                        point: ("0".into(), "0".into()),
                    },
                    TowerStep {
                        chart: "U0.A1.A2.B3.A4".into(),
                        point: ("0".into(), "1".into()),
                    },
                ],
            },
            expect_self_intersections: vec![-2, -3, -2, -2, -1],
            expect_adjacency: vec![
                ("E1".into(), "E2".into()),
                ("E2".into(), "E4".into()),
                ("E3".into(), "E4".into()),
                ("E4".into(), "E5".into()),
            ],
            expect_multiplicity: BTreeMap::new(),
        }),
    });
    for n in 2..=5 {
        let mut adjacency = Vec::new();
        for i in 1..n {
            adjacency.push((format!("E{i}"), format!("E{}", i + 1)));
        }
        let mut si = vec![-2i64; n - 1];
        si.push(-1);
        out.push(CaseFile {
            schema: SCHEMA_VERSION,
            id: format!("tower-chain-{n}"),
            description: format!("Free chain of {n} blow-ups"),
            citation: "chain dual graph figure".into(),
            payload: CasePayload::Tower(TowerCase {
                tower: TowerBuilder::Chain { n },
                expect_self_intersections: si,
                expect_adjacency: adjacency,
                expect_multiplicity: [(format!("E{n}"), 1u32)].into_iter().collect(),
            }),
        });
    }
    for n in 1..=2 {
        let total = 2 * n + 3;
        let mut si = vec![-3i64];
        si.extend(vec![-2i64; total - 2]);
        si.push(-1);
        let mut adjacency = vec![
            ("E1".to_string(), "E3".to_string()),
            ("E2".to_string(), "E3".to_string()),
        ];
        for i in 3..total {
            adjacency.push((format!("E{i}"), format!("E{}", i + 1)));
        }
        out.push(CaseFile {
            schema: SCHEMA_VERSION,
            id: format!("tower-fork-{n}"),
            description: format!("Fork tower with {total} exceptional curves"),
            citation: "fork dual graph figure".into(),
            payload: CasePayload::Tower(TowerCase {
                tower: TowerBuilder::Fork { n },
                expect_self_intersections: si,
                expect_adjacency: adjacency,
                expect_multiplicity: [(format!("E{total}"), 2u32)].into_iter().collect(),
            }),
        });
    }
    out
}

fn cocycle_case() -> CaseFile {
    CaseFile {
        schema: SCHEMA_VERSION,
        id: "sl2-cocycle".into(),
        description: "The class of the basic torsor over the punctured plane".into(),
        citation: "simplest homogeneous case, d = 2".into(),
        payload: CasePayload::Cocycle(CocycleCase {
            value: "x^(-1)*y^(-1)".into(),
            expect_l0: 2,
            expect_restriction_zero_at: vec![3, 4, 5],
            expect_h1_dims_up_to: Some(6),
            expect_datum_gluing: Some("z".into()),
        }),
    }
}

fn synthesis_cases() -> Vec<CaseFile> {
    vec![
        CaseFile {
            schema: SCHEMA_VERSION,
            id: "synthesis-single-blowup".into(),
            description: "Synthesize the minimal extension over the once-blown plane minus a \
                          boundary point"
                .into(),
            citation: "affine extension theorem, case n = 1".into(),
            payload: CasePayload::Synthesis(SynthesisCase {
                cocycle: "x^(-1)*y^(-1)".into(),
                tower: TowerBuilder::Chain { n: 1 },
                expect_level_trace: vec![2, 1, 0],
                expect_multiplicity: 1,
            }),
        },
        CaseFile {
            schema: SCHEMA_VERSION,
            id: "synthesis-chain-2".into(),
            description: "Synthesize over the two-step chain surface".into(),
            citation: "affine extension theorem, case n = 2 with the chain quotient".into(),
            payload: CasePayload::Synthesis(SynthesisCase {
                cocycle: "x^(-1)*y^(-1)".into(),
                tower: TowerBuilder::Chain { n: 2 },
                expect_level_trace: vec![2, 1, 0],
                expect_multiplicity: 1,
            }),
        },
    ]
}

/// All built-in cases, in a deterministic order.
pub fn builtin_corpus() -> Vec<CaseFile> {
    let mut out = vec![
        intro_case(),
        two_component_case(),
        x0_case(),
        x1_case(),
        xn_case(1),
        xn_case(2),
        xn_case(3),
        x2n3_case(1),
        x2n3_case(2),
    ];
    out.extend(tower_cases());
    out.push(cocycle_case());
    out.extend(synthesis_cases());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::Budget;

    #[test]
    fn corpus_ids_unique() {
        let corpus = builtin_corpus();
        let mut ids: Vec<&str> = corpus.iter().map(|c| c.id.as_str()).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn intro_case_is_green() {
        let report = run_case(&intro_case(), &Budget::default());
        assert!(report.all_pass(), "{}", report.render_text());
    }

    #[test]
    fn cocycle_case_is_green() {
        let report = run_case(&cocycle_case(), &Budget::default());
        assert!(report.all_pass(), "{}", report.render_text());
    }
}
