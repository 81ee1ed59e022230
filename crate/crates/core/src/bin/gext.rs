//! Command-line front end: run verification cases (files or the built-in
//! corpus), classify cocycles, build and inspect blow-up towers, compute
//! modification presentations, and synthesize extensions.

use clap::{Args, Parser, Subcommand};
use gext_core::affext::{certify_extension, synthesize_extension};
use gext_core::affinemod::{modify_presentation, verify_restriction_iso, ModificationCenter};
use gext_core::blowup::{base_coordinate_functions, Tower, TowerStep};
use gext_core::cech::{classify_extension, restrict_to_e, torsor_datum, Cocycle};
use gext_core::ideals::Budget;
use gext_core::lnd::PresentedAlgebra;
use gext_core::polycore::parse_polynomial;
use gext_core::verifier::{builtin_corpus, run_case, CaseFile, Report, RingSpec, TowerBuilder};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gext", version, about = "exact toolkit for additive-group torsor extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// reduction-step budget for Groebner computations
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// iteration cap for nilpotency certification
    #[arg(long, global = true, default_value_t = 64)]
    cap: u32,
    /// emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run case files, or the whole built-in corpus with --corpus
    Verify(VerifyArgs),
    /// Cocycle operations on the punctured plane
    Cech {
        #[command(subcommand)]
        sub: CechCommand,
    },
    /// Build a tower from a JSON description and report on it
    Blowup(BlowupArgs),
    /// Compute the presentation of an affine modification
    Modify(ModifyArgs),
    /// Synthesize an extension from a cocycle and a tower
    Synth(SynthArgs),
    /// Print the built-in corpus as JSON case files
    Corpus {
        /// write each case to <dir>/<id>.json instead of stdout
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// case files to run
    files: Vec<PathBuf>,
    /// run every built-in corpus case
    #[arg(long)]
    corpus: bool,
}

#[derive(Subcommand)]
enum CechCommand {
    /// Classify the cocycle x^-m y^-n p(x, y)
    Classify {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: String,
    },
}

#[derive(Args)]
struct BlowupArgs {
    /// tower description: {"steps": [{"chart": "U0", "point": ["0","0"]}, ...]}
    #[arg(long)]
    tower: PathBuf,
    /// write the dual graph in DOT form to this path
    #[arg(long)]
    dot: Option<PathBuf>,
    /// print total-transform multiplicities of the base coordinates
    #[arg(long)]
    multiplicity: bool,
}

#[derive(Args)]
struct ModifyArgs {
    /// modification description (ring, relations, divisor, center)
    #[arg(long)]
    case: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// cocycle file: {"cocycle": "x^(-1)*y^(-1)"}
    #[arg(long)]
    cocycle: PathBuf,
    /// tower file, same schema as for blowup
    #[arg(long)]
    tower: PathBuf,
    /// write the certification report as JSON here
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct TowerFile {
    #[serde(default)]
    steps: Vec<TowerStep>,
    #[serde(default)]
    builder: Option<TowerBuilder>,
}

impl TowerFile {
    fn build(&self) -> Result<Tower> {
        if let Some(b) = &self.builder {
            Ok(b.build()?)
        } else {
            Ok(Tower::from_steps(&self.steps)?)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CocycleFile {
    cocycle: String,
}

#[derive(Serialize, Deserialize)]
struct ModifyFile {
    ring: RingSpec,
    #[serde(default)]
    relations: Vec<String>,
    divisor: String,
    center: Vec<String>,
}

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn read_json<T: for<'a> Deserialize<'a>>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget::new(cli.budget);
    match dispatch(&cli, &budget) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli, budget: &Budget) -> Result<ExitCode> {
    match &cli.command {
        Command::Verify(args) => {
            let mut cases: Vec<CaseFile> = Vec::new();
            if args.corpus {
                cases.extend(builtin_corpus());
            }
            for f in &args.files {
                let text = std::fs::read_to_string(f)
                    .map_err(|e| format!("cannot read {}: {e}", f.display()))?;
                cases.push(CaseFile::from_json(&text)?);
            }
            if cases.is_empty() {
                return Err("nothing to verify: pass case files or --corpus".into());
            }
            let reports: Vec<Report> = cases.iter().map(|c| run_case(c, budget)).collect();
            let all_pass = reports.iter().all(|r| r.all_pass());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for r in &reports {
                    print!("{}", r.render_text());
                }
                println!(
                    "{} of {} cases green",
                    reports.iter().filter(|r| r.all_pass()).count(),
                    reports.len()
                );
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Cech { sub } => match sub {
            CechCommand::Classify { m, n, p } => {
                let plain = gext_core::polycore::RingDescriptor::new(
                    vec!["x", "y"],
                    gext_core::polycore::MonomialOrder::DegRevLex,
                );
                let p = parse_polynomial(&plain, p)?;
                let c = Cocycle::from_mnp(*m, *n, &p)?;
                let cls = classify_extension(&c)?;
                let datum = torsor_datum(&c, cls.l0)?;
                let restriction = restrict_to_e(&datum);
                if cli.json {
                    let out = serde_json::json!({
                        "l0": cls.l0,
                        "d_raw": cls.d_raw,
                        "d_surviving": cls.d_surviving,
                        "raw_agrees": cls.raw_agrees,
                        "canonical": cls.canonical.iter()
                            .map(|((i, j), c)| serde_json::json!({"i": i, "j": j, "coeff": c.to_string()}))
                            .collect::<Vec<_>>(),
                        "datum": { "level": datum.level, "gluing": datum.gluing.to_string() },
                        "restriction_to_e": restriction.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                } else {
                    println!("minimal level l0 = {}", cls.l0);
                    println!(
                        "surviving monomials: {}",
                        cls.canonical
                            .iter()
                            .map(|((i, j), c)| format!("{c} * x^(-{i})*y^(-{j})"))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    );
                    if !cls.raw_agrees {
                        println!(
                            "note: textbook d = {} disagrees with surviving d = {}",
                            cls.d_raw, cls.d_surviving
                        );
                    }
                    println!("datum at l0: u' = z^{} u + {}", datum.level, datum.gluing);
                    println!(
                        "restriction class on E: [{}]",
                        restriction
                            .iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Blowup(args) => {
            let tf: TowerFile = read_json(&args.tower)?;
            let tower = tf.build()?;
            let (verts, edges) = tower.dual_graph_data();
            if let Some(path) = &args.dot {
                std::fs::write(path, tower.dual_graph_dot())?;
                println!("dual graph written to {}", path.display());
            }
            if cli.json {
                let mult = if args.multiplicity {
                    let (x, y) = base_coordinate_functions();
                    Some(tower.total_transform_multiplicity((&x, &y))?)
                } else {
                    None
                };
                let out = serde_json::json!({
                    "curves": verts.iter().map(|(n, s)| serde_json::json!({"name": n, "self_intersection": s})).collect::<Vec<_>>(),
                    "adjacency": edges,
                    "multiplicity": mult,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for (name, si) in &verts {
                    println!("{name}: self-intersection {si}");
                }
                for (a, b) in &edges {
                    println!("{a} -- {b}");
                }
                if args.multiplicity {
                    let (x, y) = base_coordinate_functions();
                    let mult = tower.total_transform_multiplicity((&x, &y))?;
                    for (name, m) in mult {
                        println!("multiplicity along {name}: {m}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Modify(args) => {
            let mf: ModifyFile = read_json(&args.case)?;
            let ring = mf.ring.build()?;
            let relations = mf
                .relations
                .iter()
                .map(|s| parse_polynomial(&ring, s))
                .collect::<gext_core::Result<Vec<_>>>()?;
            let algebra = PresentedAlgebra::new(&ring, relations, budget)?;
            let divisor = parse_polynomial(&ring, &mf.divisor)?;
            let center = mf
                .center
                .iter()
                .map(|s| parse_polynomial(&ring, s))
                .collect::<gext_core::Result<Vec<_>>>()?;
            let center = ModificationCenter::new(algebra, divisor, center, budget)?;
            let modified = modify_presentation(&center, budget)?;
            let iso = verify_restriction_iso(&modified, budget)?;
            if cli.json {
                let out = serde_json::json!({
                    "vars": modified.algebra.ring().vars(),
                    "relations": modified.algebra.relations().generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "restriction_isomorphism": iso,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!(
                    "modified presentation in k[{}]:",
                    modified.algebra.ring().vars().join(", ")
                );
                for g in modified.algebra.relations().generators() {
                    println!("  {g} = 0");
                }
                println!("restriction off {} is an isomorphism: {iso}", mf.divisor);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth(args) => {
            let cf: CocycleFile = read_json(&args.cocycle)?;
            let tf: TowerFile = read_json(&args.tower)?;
            let cocycle = Cocycle::parse(&cf.cocycle)?;
            let tower = tf.build()?;
            let ext = synthesize_extension(&cocycle, &tower, budget)?;
            let report = certify_extension(&ext, &cocycle, budget)?;
            let json = serde_json::json!({
                "checks": report.checks.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "status": if c.pass { "pass" } else { "fail" },
                    "witness": c.detail,
                })).collect::<Vec<_>>(),
                "level_trace": report.level_trace,
                "fiber_multiplicity": report.fiber_multiplicity,
                "charts": [ext.inner.name, ext.outer.name],
                "modifications": ext.modification_log,
            });
            if let Some(path) = &args.report {
                std::fs::write(path, serde_json::to_string_pretty(&json)?)?;
                println!("report written to {}", path.display());
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json)?);
            } else {
                println!("level trace: {:?}", report.level_trace);
                for c in &report.checks {
                    println!(
                        "  [{}] {} - {}",
                        if c.pass { "pass" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
            }
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Corpus { dir } => {
            let corpus = builtin_corpus();
            match dir {
                Some(d) => {
                    std::fs::create_dir_all(d)?;
                    for case in &corpus {
                        let path = d.join(format!("{}.json", case.id));
                        std::fs::write(&path, case.to_json())?;
                    }
                    println!("{} cases written to {}", corpus.len(), d.display());
                }
                None => {
                    for case in &corpus {
                        println!("{}", case.to_json());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
