use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freecoarse::free::NormStatus;
use freecoarse::harness::{
    ball_table, check_map, norm_query, output_root, run_suite, write_artifacts, HarnessError, NormQuery,
    SpaceConfig, SpaceKind, SuiteRun, SUITES,
};

/// Verification harness for free coarse groups. Artifacts go to
/// `$FREECOARSE_OUT/<suite>/` (default `freecoarse-out`).
#[derive(Parser)]
#[command(name = "freecoarse", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Flags override the config file, which overrides the defaults.
#[derive(Args)]
struct Overrides {
    /// JSON or TOML configuration (`.toml` selects TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the sampled suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Use the integer path with this many points.
    #[arg(long, global = true, conflicts_with = "grid")]
    path: Option<usize>,
    /// Use the L1 grid `ROWSxCOLS`.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Index of the distinguished point.
    #[arg(long, global = true)]
    z: Option<usize>,
    #[arg(long, global = true)]
    max_grade: Option<usize>,
    #[arg(long, global = true)]
    max_conjugator_length: Option<usize>,
    #[arg(long, global = true)]
    search_budget: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    maps: Option<usize>,
    /// Number of points of the target path for `check-map` and the
    /// universal-property suite.
    #[arg(long, global = true)]
    target_points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and write its artifacts.
    Run { suite: String },
    /// Norm of an element of A_p(X) or bounds for a free-group word.
    Norm {
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        element: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Grade sizes around the identity as CSV on stdout.
    Balls {
        /// Comma-separated radii; defaults to the configured ones.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<usize>>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Check the map sending point i to the i-th image, an element over the
    /// target path's points.
    CheckMap {
        #[arg(required = true)]
        images: Vec<String>,
    },
    /// Print the suite names.
    ListSuites,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once('x').ok_or("expected ROWSxCOLS")?;
    Ok((r.parse().map_err(|e| format!("rows: {e}"))?, c.parse().map_err(|e| format!("cols: {e}"))?))
}

impl Overrides {
    fn resolve(&self) -> Result<SpaceConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => SpaceConfig::load(path)?,
            None => SpaceConfig::default(),
        };
        if let Some(n) = self.path {
            cfg.space = SpaceKind::Path { n };
        }
        if let Some((rows, cols)) = self.grid {
            cfg.space = SpaceKind::Grid { rows, cols };
        }
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.z, self.z);
        set(&mut cfg.max_grade, self.max_grade);
        set(&mut cfg.max_conjugator_length, self.max_conjugator_length);
        set(&mut cfg.samples, self.samples);
        set(&mut cfg.maps, self.maps);
        set(&mut cfg.target_points, self.target_points);
        if let Some(p) = self.p {
            cfg.p = p;
        }
        if let Some(b) = self.search_budget {
            cfg.search_budget = b;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn finish(run: &SuiteRun) -> Result<ExitCode, HarnessError> {
    let dir = write_artifacts(run, &output_root())?;
    for c in &run.report.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        println!("{status}  {}  [{}]", c.name, c.range);
        if let Some(w) = &c.witness {
            println!("      witness: {w}");
        }
    }
    println!("{}: {} ({})", run.report.suite, if run.report.passed { "passed" } else { "failed" }, dir.display());
    Ok(if run.report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn execute(cli: &Cli) -> Result<ExitCode, HarnessError> {
    if let Command::ListSuites = cli.command {
        for s in SUITES {
            let seeded = if s.sampled { " (seeded)" } else { "" };
            println!("{:<26} {}{seeded}", s.name, s.summary);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cfg = cli.overrides.resolve()?;
    match &cli.command {
        Command::Run { suite } => finish(&run_suite(suite, &cfg)?),
        Command::CheckMap { images } => finish(&check_map(&cfg, images)?),
        Command::Norm { element, word, r } => {
            let query = match (element, word) {
                (Some(e), _) => NormQuery::Element(e.clone()),
                (None, Some(w)) => NormQuery::Word(w.clone()),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let result = norm_query(&cfg, &query, *r)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
            if let NormStatus::NotWithinLimits { .. } = result.status {
                eprintln!(
                    "no factorization within max_grade = {}, max_conjugator_length = {}, search_budget = {}",
                    cfg.max_grade, cfg.max_conjugator_length, cfg.search_budget
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Balls { radii, max_n } => {
            let radii = radii.as_deref().unwrap_or(&cfg.radii);
            let table = ball_table(&cfg.free_config()?, radii, max_n.unwrap_or(cfg.max_n))?;
            print!("{}", table.to_csv()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ListSuites => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
