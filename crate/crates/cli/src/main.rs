use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use pairham::check::{
    check_ph, constructive_extender, explore_bishop_on_rook, verify_extension, CheckConfig,
    ExtenderChoice, Mode, PhReport, Verdict,
};
use pairham::construct::Extension;
use pairham::format::{parse_cycle, parse_graph, parse_pairing, write_cycle, write_graph, write_pairing};
use pairham::graph::{build_family, build_rook, Family, Graph};
use pairham::matching::{cut_pairing, enumerate_pairings, random_pairing, Pairing};
use pairham::search::{
    decide_nonextendable, search, Certificate, CertificateOutcome, SearchConfig, SearchOutcome,
    DEFAULT_BUDGET,
};

const LONG_ABOUT: &str = "\
Builds rook-type graphs, extends pairings to Hamiltonian cycles, and checks the
pairing-Hamiltonian property.

Formats (vertices are written <row>.<col>, zero-based; `#` starts a comment):
  graph    `graph <family>` header, then `v <row>.<col>` and `e <row>.<col> <row>.<col>` lines
  pairing  one pair per line: `<row>.<col> <row>.<col>`
  cycle    one line of labels, closed implicitly, optionally followed by
           `# pairing-edges: k, graph-edges: n-k`
Certificates and reports are JSON.

Exit codes: 0 success, 1 verification failed or nonextendable pairing,
2 usage or parse error, 3 search budget exhausted.";

#[derive(Parser, Debug)]
#[command(name = "pairham", version, about = "Pairing-Hamiltonian toolkit", long_about = LONG_ABOUT)]
struct Cli {
    /// Output file (or directory for `gen pairing --all`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Node budget per search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for check-ph and explore-bor; all cores when absent.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for every random choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph or pairings.
    #[command(subcommand)]
    Gen(Gen),
    /// Extend a pairing to a Hamiltonian cycle; writes a cycle file, or a
    /// nonextendability certificate and exits 1.
    Extend {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pairing: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Construct)]
        method: Method,
    },
    /// Check a cycle against a graph and pairing; exit 0 if valid, 1 otherwise.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pairing: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
    },
    /// Run an extender over all or sampled pairings and write a JSON report.
    CheckPh(CheckPh),
    /// Certify by exhaustive search that the vertical cut of the 2 x m2 rook graph does not extend.
    CertifyCut {
        #[arg(long)]
        m2: u32,
    },
    /// Exhaustively check every bishop-on-a-rook graph of even order up to K.
    ExploreBor {
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        wall_time: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Write a graph file.
    Graph {
        #[arg(long, value_enum)]
        family: GenFamily,
        #[arg(long)]
        m1: u32,
        /// Second parameter (rook, bor, knn).
        #[arg(long)]
        m2: Option<u32>,
    },
    /// Write pairing files for a graph.
    #[command(group(ArgGroup::new("which").required(true).args(["all", "random"])))]
    Pairing {
        #[arg(long)]
        graph: PathBuf,
        /// Every pairing, in enumeration order.
        #[arg(long)]
        all: bool,
        /// One uniformly random pairing drawn with --seed.
        #[arg(long)]
        random: bool,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "sample"])))]
struct CheckPh {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    exhaustive: bool,
    /// Number of random pairings, drawn with --seed.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, value_enum, default_value_t = ExtenderArg::Both)]
    extender: ExtenderArg,
    /// Record elapsed seconds in the report.
    #[arg(long)]
    wall_time: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenFamily {
    Rook,
    Bor,
    Knn,
    Hypercube,
    Complete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Construct,
    Search,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtenderArg {
    Constructive,
    Search,
    Both,
}

/// An error that ends the run with a specific exit code.
#[derive(Debug)]
struct Exit(u8, String);

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<pairham::Error>() {
        Some(pairham::Error::BudgetExceeded(_)) => 3,
        Some(pairham::Error::InternalInvariant(_)) => 1,
        _ => 2,
    }
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| Exit(2, format!("cannot read {}: {e}", path.display())).into())
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_pairing(path: &Path, g: &Graph) -> anyhow::Result<Pairing> {
    let m = parse_pairing(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    m.check_covers(g).with_context(|| format!("in {}", path.display()))?;
    Ok(m)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let search_cfg = SearchConfig::default().with_budget(Some(cli.budget));
    let check_cfg = |wall_time: bool| CheckConfig { search: search_cfg, record_wall_time: wall_time, ..CheckConfig::default() };
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen(Gen::Graph { family, m1, m2 }) => {
            let need_m2 = || m2.ok_or_else(|| Exit(2, "--m2 is required for this family".into()));
            let family = match family {
                GenFamily::Rook => Family::Rook(m1, need_m2()?),
                GenFamily::Bor => Family::BishopOnRook(m1, need_m2()?),
                GenFamily::Knn => Family::CompleteBipartite(m1, need_m2()?),
                GenFamily::Hypercube => Family::Hypercube(m1),
                GenFamily::Complete => Family::Complete(m1),
            };
            emit(out, &write_graph(&build_family(&family)?))?;
        }
        Command::Gen(Gen::Pairing { graph, all, .. }) => {
            let g = load_graph(&graph)?;
            if all {
                match out {
                    Some(dir) => {
                        fs::create_dir_all(dir)?;
                        for (i, m) in enumerate_pairings(&g)?.enumerate() {
                            fs::write(dir.join(format!("pairing-{i:06}.txt")), write_pairing(&m))?;
                        }
                    }
                    None => {
                        let mut text = String::new();
                        for (i, m) in enumerate_pairings(&g)?.enumerate() {
                            text += &format!("# pairing {i}\n{}\n", write_pairing(&m));
                        }
                        emit(None, &text)?;
                    }
                }
            } else {
                emit(out, &write_pairing(&random_pairing(&g, cli.seed)?))?;
            }
        }
        Command::Extend { graph, pairing, method } => {
            let g = load_graph(&graph)?;
            let m = load_pairing(&pairing, &g)?;
            let cycle = match method {
                Method::Construct => {
                    let extend = constructive_extender(&g).ok_or_else(|| {
                        Exit(2, format!("no constructive extender for `{}`; use --method search", g.family()))
                    })?;
                    match extend(&m, &search_cfg)? {
                        Extension::Extended(c) => Some(c),
                        Extension::Nonextendable(_) => None,
                    }
                }
                Method::Search => match search(&g, &m, &search_cfg)? {
                    SearchOutcome::Extendable(c, _) => Some(c),
                    SearchOutcome::Nonextendable(_) => None,
                    SearchOutcome::Inconclusive(_) => return Err(pairham::Error::BudgetExceeded(cli.budget).into()),
                },
            };
            match cycle {
                Some(c) if verify_extension(&g, &m, &c) => emit(out, &write_cycle(&c, Some(&m)))?,
                Some(_) => bail!(Exit(1, "extender returned a cycle that fails verification".into())),
                None => {
                    let cert = decide_nonextendable(&g, &m, &search_cfg)?;
                    return certificate_exit(out, &cert, 1);
                }
            }
        }
        Command::Verify { graph, pairing, cycle } => {
            let g = load_graph(&graph)?;
            let m = load_pairing(&pairing, &g)?;
            let c = parse_cycle(&read(&cycle)?).with_context(|| format!("in {}", cycle.display()))?;
            if !verify_extension(&g, &m, &c) {
                eprintln!("cycle does not extend the pairing in this graph");
                return Ok(1);
            }
        }
        Command::CheckPh(args) => {
            let g = load_graph(&args.graph)?;
            let mode = match args.sample {
                Some(n) => Mode::Sampled { n, seed: cli.seed },
                None => Mode::Exhaustive,
            };
            let extender = match args.extender {
                ExtenderArg::Constructive => ExtenderChoice::Constructive,
                ExtenderArg::Search => ExtenderChoice::Search,
                ExtenderArg::Both => ExtenderChoice::Both,
            };
            let report = check_ph(&g, mode, extender, &check_cfg(args.wall_time))?;
            emit(out, &json(&report)?)?;
            return Ok(report_code(&report));
        }
        Command::CertifyCut { m2 } => {
            if m2 < 3 || m2 % 2 == 0 {
                bail!(Exit(2, format!("--m2 must be odd and at least 3, got {m2}")));
            }
            let cert = decide_nonextendable(&build_rook(2, m2)?, &cut_pairing(m2)?, &search_cfg)?;
            return certificate_exit(out, &cert, 0);
        }
        Command::ExploreBor { max_order, wall_time } => {
            let reports = explore_bishop_on_rook(max_order, &check_cfg(wall_time))?;
            emit(out, &json(&reports)?)?;
            return Ok(reports.iter().map(report_code).max().unwrap_or(0));
        }
    }
    Ok(0)
}

/// Writes a certificate; `nonextendable_code` is returned when it proves nonextendability.
fn certificate_exit(out: Option<&Path>, cert: &Certificate, nonextendable_code: u8) -> anyhow::Result<u8> {
    emit(out, &json(cert)?)?;
    Ok(match cert.outcome {
        CertificateOutcome::Nonextendable => nonextendable_code,
        CertificateOutcome::Inconclusive => 3,
        CertificateOutcome::Extendable => 1,
    })
}

fn report_code(report: &PhReport) -> u8 {
    if !report.disagreements.is_empty() {
        1
    } else if report.verdict == Verdict::Inconclusive {
        3
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
