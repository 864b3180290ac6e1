//! `polsyz`: analyze sets of degree-2 monomials through their graph.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 precondition failure
//! (incohesive input), 3 internal invariant breach.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polsyz_core::bowtie::{enumerate_bowties, is_induced_bowtie};
use polsyz_core::error::Error;
use polsyz_core::graph::{cohesion, edge_graph, pinch, Cohesion};
use polsyz_core::monomial::MonomialSet;
use polsyz_core::oracle::{linear_presentation_oracle, oracle_report};
use polsyz_core::report::{analyze, BowTieSummary};
use polsyz_core::syzygy::{generators_p, generators_z, generic_rank, SyzygyVector};
use polsyz_core::walk::{
    build_skeleton, class_to_dot, classify_non_split, enumerate_non_split_walks, EnumOptions,
};

#[derive(Parser)]
#[command(name = "polsyz", version, about = "Structural analysis of degree-2 monomial algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Module {
    Z,
    P,
}

#[derive(clap::Args)]
struct Common {
    /// Input file in .mon format.
    input: PathBuf,
    /// Maximum walk length for enumerations.
    #[arg(long, default_value_t = 12)]
    max_walk_len: usize,
    /// Fine-degree total bound for the oracle.
    #[arg(long, default_value_t = 8)]
    degree_bound: u32,
    /// Seed for the randomized generic evaluation points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on odd/even cycle length during bow-tie enumeration.
    #[arg(long)]
    max_cycle_len: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Full structural report: cohesion, dimension, bipartiteness,
    /// linear presentation, polarizability, normality.
    Analyze(Common),
    /// Non-split even closed walks up to the length bound.
    Walks(Common),
    /// Bow ties with classification and inducedness.
    Bowties(Common),
    /// Syzygy generators of the chosen module.
    Syzygies {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Module::Z)]
        module: Module,
    },
    /// Exact rational slice verification.
    Oracle(Common),
    /// Pinch a proper edge x_i -- x_j (substitute x_j := x_i).
    Pinch {
        #[command(flatten)]
        common: Common,
        /// The edge to pinch, as i,j.
        #[arg(long, value_parser = parse_edge)]
        edge: (usize, usize),
        /// Write the pinched .mon here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph export: DOT (default) or canonical .mon regeneration (text).
    Export(Common),
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected i,j".into());
    }
    let a = parts[0].trim().parse().map_err(|_| "bad index".to_string())?;
    let b = parts[1].trim().parse().map_err(|_| "bad index".to_string())?;
    Ok((a, b))
}

#[derive(Serialize)]
struct Meta {
    seed: u64,
    max_walk_len: usize,
    degree_bound: u32,
}

impl Meta {
    fn from(c: &Common) -> Self {
        Meta { seed: c.seed, max_walk_len: c.max_walk_len, degree_bound: c.degree_bound }
    }
}

#[derive(Serialize)]
struct WalkDoc {
    edges: Vec<usize>,
    vertices: Vec<usize>,
    class: Option<&'static str>,
    skeleton_non_split: Option<bool>,
    skeleton: Option<polsyz_core::walk::Skeleton>,
}

#[derive(Serialize)]
struct BowTieDoc {
    #[serde(flatten)]
    summary: BowTieSummary,
    induced: bool,
}

#[derive(Serialize)]
struct SyzygyDoc {
    walk: Option<Vec<usize>>,
    multidegree: Vec<u32>,
    entries: Vec<SyzygyEntryDoc>,
}

#[derive(Serialize)]
struct SyzygyEntryDoc {
    gen_index: usize,
    coeff: i64,
    monomial: Vec<u32>,
}

fn syzygy_doc(v: &SyzygyVector) -> SyzygyDoc {
    SyzygyDoc {
        walk: v.source_walk.clone(),
        multidegree: v.multidegree.0.clone(),
        entries: v
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| SyzygyEntryDoc {
                gen_index: i + 1,
                coeff: e.coeff,
                monomial: e.exponents.0.clone(),
            })
            .collect(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Parse { .. }
                | Error::DuplicateMonomial { .. }
                | Error::IndexOutOfRange { .. }
                | Error::EmptySet => 1,
                Error::Incohesive { .. } => 2,
                Error::Internal(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn load(common: &Common) -> Result<MonomialSet, Error> {
    let text = std::fs::read_to_string(&common.input).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", common.input.display()),
    })?;
    let set = MonomialSet::parse(&text)?;
    let unused = set.unused_variables();
    if !unused.is_empty() {
        eprintln!(
            "warning: declared variables never used: {}",
            unused.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(set)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze(common) => {
            let set = load(&common)?;
            let report = analyze(&set)?;
            match common.format {
                Format::Json | Format::Dot => {
                    #[derive(Serialize)]
                    struct Doc {
                        meta: Meta,
                        #[serde(flatten)]
                        report: polsyz_core::report::AnalyzeReport,
                    }
                    emit(&Doc { meta: Meta::from(&common), report });
                }
                Format::Text => {
                    println!("cohesive:            yes");
                    println!("bipartite:           {}", yesno(report.bipartite));
                    println!("dimension:           {}", report.dimension);
                    println!(
                        "edge-graph diameter: {}",
                        report.l_diameter.map_or("inf".into(), |d| d.to_string())
                    );
                    println!("linearly presented:  {}", yesno(report.linearly_presented));
                    println!("polarizable:         {}", yesno(report.polarizable));
                    println!("normal:              {}", yesno(report.normal));
                    println!("odd cycle condition: {}", yesno(report.odd_cycle_condition));
                    for w in &report.witnesses {
                        println!(
                            "witness: {} bow tie, cycles {:?} {:?}, path {:?}",
                            w.kind, w.cycle1, w.cycle2, w.path
                        );
                    }
                    if report.birational_onto_image_implied {
                        println!("note: polarizable with dimension n implies the defining map is birational onto its image");
                    }
                }
            }
            Ok(())
        }
        Command::Walks(common) => {
            let set = load(&common)?;
            let walks =
                enumerate_non_split_walks(&set, &EnumOptions::with_max_len(common.max_walk_len));
            if common.format == Format::Dot {
                for w in &walks {
                    if let Ok(class) = classify_non_split(&set, w) {
                        print!("{}", class_to_dot(&set, &class));
                    }
                }
                return Ok(());
            }
            let docs: Vec<WalkDoc> = walks
                .iter()
                .map(|w| {
                    let class = classify_non_split(&set, w).ok();
                    let skeleton = class.as_ref().map(|c| build_skeleton(&set, c));
                    WalkDoc {
                        edges: w.edges().to_vec(),
                        vertices: w.vertices().to_vec(),
                        class: class.as_ref().map(|c| c.kind.as_str()),
                        skeleton_non_split:
                            skeleton.as_ref().map(polsyz_core::walk::skeleton_non_split),
                        skeleton,
                    }
                })
                .collect();
            #[derive(Serialize)]
            struct Doc {
                meta: Meta,
                count: usize,
                walks: Vec<WalkDoc>,
            }
            emit(&Doc { meta: Meta::from(&common), count: docs.len(), walks: docs });
            Ok(())
        }
        Command::Bowties(common) => {
            let set = load(&common)?;
            let ties = enumerate_bowties(&set);
            let docs: Vec<BowTieDoc> = ties
                .iter()
                .map(|b| BowTieDoc {
                    summary: BowTieSummary::from(b),
                    induced: is_induced_bowtie(&set, b),
                })
                .collect();
            #[derive(Serialize)]
            struct Doc {
                meta: Meta,
                count: usize,
                bowties: Vec<BowTieDoc>,
            }
            emit(&Doc { meta: Meta::from(&common), count: docs.len(), bowties: docs });
            Ok(())
        }
        Command::Syzygies { common, module } => {
            let set = load(&common)?;
            let (vectors, truncated, name) = match module {
                Module::Z => (generators_z(&set)?, false, "Z"),
                Module::P => {
                    let p = generators_p(&set, common.max_walk_len)?;
                    (p.vectors, p.truncated, "P")
                }
            };
            let rank = generic_rank(&set, &vectors, common.seed);
            #[derive(Serialize)]
            struct Doc {
                meta: Meta,
                module: &'static str,
                truncated: bool,
                generic_rank: usize,
                generators: Vec<SyzygyDoc>,
            }
            emit(&Doc {
                meta: Meta::from(&common),
                module: name,
                truncated,
                generic_rank: rank,
                generators: vectors.iter().map(syzygy_doc).collect(),
            });
            Ok(())
        }
        Command::Oracle(common) => {
            let set = load(&common)?;
            let report = oracle_report(&set, common.degree_bound)?;
            let linear = linear_presentation_oracle(&set, common.degree_bound)?;
            #[derive(Serialize)]
            struct Doc {
                meta: Meta,
                linear_presentation_oracle: bool,
                #[serde(flatten)]
                report: polsyz_core::oracle::OracleReport,
            }
            emit(&Doc {
                meta: Meta::from(&common),
                linear_presentation_oracle: linear.ok,
                report,
            });
            Ok(())
        }
        Command::Pinch { common, edge, out } => {
            let set = load(&common)?;
            let pinched = pinch(&set, edge.0, edge.1)?;
            if !pinched.merged.is_empty() {
                eprintln!(
                    "note: {} generator pair(s) collapsed under the pinch",
                    pinched.merged.len()
                );
            }
            let text = pinched.set.to_mon_string();
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    Error::Parse { line: 0, msg: format!("cannot write {}: {e}", path.display()) }
                })?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Export(common) => {
            let set = load(&common)?;
            match common.format {
                Format::Text => print!("{}", set.to_mon_string()),
                Format::Json | Format::Dot => {
                    print!("{}", set.graph().to_dot());
                    if common.format == Format::Dot {
                        print!("{}", edge_graph(&set).to_dot("f"));
                    }
                }
            }
            // Cohesion is advisory for export.
            if let Cohesion::Partitioned { .. } = cohesion(&set) {
                eprintln!("warning: the generator set is not cohesive");
            }
            Ok(())
        }
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
