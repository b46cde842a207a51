use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use spectile::diagonal::{self, DiagonalPair, HarnessConfig};
use spectile::lifting::{self, BoxedSet, PipelineConfig};
use spectile::search::Overrun;
use spectile::setfile::{parse_set_file, SetFile};
use spectile::{spectral, tiling, Error, GroupSpec, PointSet, SearchConfig, SearchOutcome};

/// Exact verification and search of spectral sets and tiles in finite abelian groups.
#[derive(Parser)]
#[command(name = "spectile", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Ambient group, e.g. `4`, `2x3`, `24^3`. Checked against file headers.
    #[arg(long, global = true, conflicts_with = "box_dims")]
    group: Option<GroupSpec>,
    /// Base box for lifted sets, e.g. `4` or `2x3`.
    #[arg(long = "box", global = true)]
    box_dims: Option<GroupSpec>,
    /// Node budget for searches, sample budget for the harness, pair budget
    /// for direct spectral checks.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Expand search candidates in enumeration order so the witness found is
    /// the lexicographically least one.
    #[arg(long, global = true)]
    canonical: bool,
    /// Print a JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that A + B covers the group exactly once.
    CheckTiling { a: PathBuf, b: PathBuf },
    /// Check that the characters in LAMBDA are pairwise orthogonal on S.
    CheckSpectral { s: PathBuf, lambda: PathBuf },
    /// Search for a spectrum of S.
    FindSpectrum { s: PathBuf },
    /// Search for a tiling complement of A.
    FindComplement { a: PathBuf },
    /// Check whether P ⊂ G x G is spectral with the diagonal as spectrum.
    DiagonalCheck { p: PathBuf },
    /// Compare tiling of (A, B) with diagonal spectrality of A x B.
    ProductDiagonal {
        a: PathBuf,
        b: PathBuf,
        /// Also check this many random pairs of the diagonal directly.
        #[arg(long, default_value_t = 0)]
        spot_checks: u64,
    },
    /// Cross-check the diagonal criteria over all or sampled instances in a group.
    Harness,
    /// Run a tiling of a box through the diagonal criterion and the lifting A(k).
    Pipeline {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        k: u64,
    },
}

/// Process exit codes.
const TRUE: u8 = 0;
const FALSE: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

struct Report {
    code: u8,
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.common.json;
    match run(&cli) {
        Ok(r) => {
            if json {
                let mut obj = r.json;
                obj["exit"] = json!(r.code);
                println!("{obj}");
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            let code = match e {
                Failure::Lib(Error::BudgetExceeded { .. } | Error::SizeLimit { .. }) => BUDGET,
                _ => USAGE,
            };
            if json {
                println!("{}", json!({ "error": e.to_string(), "exit": code }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<SetFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    parse_set_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Loads group-set files that must share one ambient group (the `--group`
/// value when given). Box files are read in `∏ Z_{n_i}`.
fn load_group_sets(paths: &[&Path], group: Option<&GroupSpec>) -> Result<Vec<PointSet>> {
    let mut sets = Vec::new();
    for &p in paths {
        let set = match read(p)? {
            SetFile::Group(s) => s,
            SetFile::Box(b) => lifting::to_quotient(&b, b.dims())?,
        };
        let expected = group.or_else(|| sets.first().map(PointSet::ambient));
        if let Some(g) = expected {
            if g != set.ambient() {
                return Err(Failure::Usage(format!(
                    "{}: header group {} does not match {g}",
                    p.display(),
                    set.ambient()
                )));
            }
        }
        sets.push(set);
    }
    Ok(sets)
}

fn load_boxed(paths: &[&Path], dims: Option<&GroupSpec>) -> Result<Vec<BoxedSet>> {
    let mut sets: Vec<BoxedSet> = Vec::new();
    for &p in paths {
        let SetFile::Box(set) = read(p)? else {
            return Err(Failure::Usage(format!(
                "{}: expected a `box` header",
                p.display()
            )));
        };
        let expected = dims
            .map(|g| g.orders().to_vec())
            .or_else(|| sets.first().map(|s| s.dims().to_vec()));
        if let Some(d) = expected {
            if d != set.dims() {
                return Err(Failure::Usage(format!(
                    "{}: box {:?} does not match {:?}",
                    p.display(),
                    set.dims(),
                    d
                )));
            }
        }
        sets.push(set);
    }
    Ok(sets)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn code(ok: bool) -> u8 {
    if ok {
        TRUE
    } else {
        FALSE
    }
}

fn search_config(c: &Common) -> SearchConfig {
    let mut cfg = SearchConfig {
        threads: c.threads,
        canonical: c.canonical,
        ..SearchConfig::default()
    };
    if let Some(b) = c.budget {
        cfg.max_nodes = b;
    }
    cfg
}

fn overrun_text(o: &Overrun) -> String {
    match o {
        Overrun::GroupOrder { order, limit } => format!("group order {order} > {limit}"),
        Overrun::Nodes { limit } => format!("search nodes > {limit}"),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    let group = c.group.as_ref();
    match &cli.command {
        Command::CheckTiling { a, b } => {
            let sets = load_group_sets(&[a, b], group)?;
            let v = tiling::verify_tiling(&sets[0], &sets[1])?;
            let text = match v.failure() {
                None => format!(
                    "tiling=yes group={} |A|={} |B|={}\n",
                    sets[0].ambient(),
                    sets[0].len(),
                    sets[1].len()
                ),
                Some(f) => format!("tiling=no {f}\n"),
            };
            Ok(Report {
                code: code(v.holds()),
                json: json!({ "tiling": v.holds(), "failure": v.failure().map(|f| f.to_string()) }),
                text,
            })
        }
        Command::CheckSpectral { s, lambda } => {
            let sets = load_group_sets(&[s, lambda], group)?;
            let v = spectral::verify_spectral_pair(&sets[0], &sets[1])?;
            let text = match (v.certificate(), v.failure()) {
                (Some(cert), _) => format!("spectral=yes pairs={}\n", cert.checked_pairs),
                (_, Some(f)) => format!("spectral=no {f}\n"),
                _ => unreachable!(),
            };
            Ok(Report {
                code: code(v.holds()),
                json: json!({ "spectral": v.holds(), "failure": v.failure().map(|f| f.to_string()) }),
                text,
            })
        }
        Command::FindSpectrum { s } => {
            let set = &load_group_sets(&[s], group)?[0];
            Ok(match spectral::find_spectrum(set, &search_config(c))? {
                SearchOutcome::Found(cert) => Report {
                    code: TRUE,
                    text: format!("spectral=yes spectrum={}\n", cert.spectrum),
                    json: json!({ "outcome": "found", "spectrum": cert.spectrum.to_string() }),
                },
                SearchOutcome::Exhausted => Report {
                    code: FALSE,
                    text: "no spectrum (exhaustive)\n".into(),
                    json: json!({ "outcome": "exhausted" }),
                },
                SearchOutcome::BudgetExceeded(o) => Report {
                    code: BUDGET,
                    text: format!("undecided: budget exceeded ({})\n", overrun_text(&o)),
                    json: json!({ "outcome": "budget-exceeded", "detail": overrun_text(&o) }),
                },
            })
        }
        Command::FindComplement { a } => {
            let set = &load_group_sets(&[a], group)?[0];
            Ok(match tiling::find_complement(set, &search_config(c))? {
                SearchOutcome::Found(cert) => Report {
                    code: TRUE,
                    text: format!("tiling=yes complement={}\n", cert.complement),
                    json: json!({ "outcome": "found", "complement": cert.complement.to_string() }),
                },
                SearchOutcome::Exhausted => Report {
                    code: FALSE,
                    text: "no complement (exhaustive)\n".into(),
                    json: json!({ "outcome": "exhausted" }),
                },
                SearchOutcome::BudgetExceeded(o) => Report {
                    code: BUDGET,
                    text: format!("undecided: budget exceeded ({})\n", overrun_text(&o)),
                    json: json!({ "outcome": "budget-exceeded", "detail": overrun_text(&o) }),
                },
            })
        }
        Command::DiagonalCheck { p } => {
            let square = group
                .map(|g| spectile::group::product_group(g, g))
                .transpose()?;
            let set = &load_group_sets(&[p], square.as_ref())?[0];
            let base = match group {
                Some(g) => g.clone(),
                None => half_of(set.ambient())?,
            };
            let pair = DiagonalPair::new(&base)?;
            let r =
                pair.cross_check(set, c.budget.unwrap_or(diagonal::DEFAULT_MAX_DIRECT_PAIRS))?;
            let direct = r.direct.map(yes).unwrap_or("skipped");
            let agree = r.agree.map(yes).unwrap_or("n/a");
            let text = format!(
                "diagonal-spectral={} direct={direct} criterion={} agree={agree}\n",
                yes(r.criterion),
                yes(r.criterion)
            );
            Ok(Report {
                code: code(r.criterion && r.agree != Some(false)),
                json: json!({
                    "criterion": r.criterion,
                    "direct": r.direct,
                    "agree": r.agree,
                    "direct_failure": r.direct_failure.map(|f| f.to_string()),
                }),
                text,
            })
        }
        Command::ProductDiagonal { a, b, spot_checks } => {
            let sets = load_group_sets(&[a, b], group)?;
            let pair = DiagonalPair::new(sets[0].ambient())?;
            let r = pair.product_with_diagonal(&sets[0], &sets[1])?;
            let mut text = format!(
                "tiling={} product-spectral={} agree={}\n",
                yes(r.tiling),
                yes(r.product_spectral),
                yes(r.agree)
            );
            let mut ok = r.tiling && r.product_spectral && r.agree;
            let mut spot = Value::Null;
            if *spot_checks > 0 {
                let product = pair.product().product_set(&sets[0], &sets[1])?;
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                let s = pair.spot_check(&product, *spot_checks, &mut rng)?;
                text.push_str(&format!(
                    "spot-check sampled={} failures={}\n",
                    s.sampled,
                    s.failures.len()
                ));
                ok &= s.failures.is_empty();
                spot = json!({ "sampled": s.sampled, "failures": s.failures.len() });
            }
            Ok(Report {
                code: code(ok),
                json: json!({
                    "tiling": r.tiling,
                    "product_spectral": r.product_spectral,
                    "agree": r.agree,
                    "spot_check": spot,
                }),
                text,
            })
        }
        Command::Harness => {
            let g = group.ok_or_else(|| Failure::Usage("harness needs --group".into()))?;
            let mut cfg = HarnessConfig {
                seed: c.seed,
                threads: c.threads,
                ..HarnessConfig::default()
            };
            if let Some(b) = c.budget {
                cfg.budget = b;
                cfg.split_budget = b;
            }
            let r = diagonal::run_harness(g, &cfg)?;
            Ok(Report {
                code: code(r.disagreements.is_empty()),
                text: r.render(),
                json: serde_json::to_value(&r).expect("serializable report"),
            })
        }
        Command::Pipeline { a, b, k } => {
            let sets = load_boxed(&[a, b], c.box_dims.as_ref().or(group))?;
            let mut cfg = PipelineConfig {
                seed: c.seed,
                ..PipelineConfig::default()
            };
            if let Some(b) = c.budget {
                cfg.max_pairs = b;
            }
            let r = lifting::tiling_product_pipeline(&sets[0], &sets[1], *k, &cfg)?;
            Ok(Report {
                code: code(r.passed()),
                text: r.render(),
                json: serde_json::to_value(&r).expect("serializable report"),
            })
        }
    }
}

/// `G` from a header `G x G` whose two halves coincide.
fn half_of(square: &GroupSpec) -> Result<GroupSpec> {
    let f = square.orders();
    let (l, r) = f.split_at(f.len() / 2);
    if !f.len().is_multiple_of(2) || l != r {
        return Err(Failure::Usage(format!(
            "cannot read {square} as G x G; pass --group"
        )));
    }
    Ok(GroupSpec::new(l.to_vec())?)
}
