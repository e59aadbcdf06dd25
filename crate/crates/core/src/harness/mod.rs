//! Named verification suites over a declarative configuration, and their
//! artifacts: `report.json` (deterministic), `timing.json` and CSV tables.

mod config;
mod parse;
mod suites;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::coarse::CoarseError;
use crate::coarse::Window;
use crate::free::{ap_norm, word_norm_bounds, FreeError, NormResult};
use crate::group::{ApElement, GroupError, VarietyTag};
use crate::report::SuiteReport;

pub use config::{ConfigError, SpaceConfig, SpaceKind, VarietyName};
pub use parse::{parse_element, parse_word, ParseError};
pub use suites::{ball_table, compare_tjoin_with_oracle, random_l1_points, random_word, GENERATOR};

/// Environment variable naming the artifact directory.
pub const OUTPUT_ENV: &str = "FREECOARSE_OUT";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite {0:?}; run list-suites for the names")]
    UnknownSuite(String),
    #[error("configuration error at {0}")]
    Config(#[from] ConfigError),
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Problems with the request rather than with the checked statements.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            HarnessError::UnknownSuite(_)
                | HarnessError::Config(_)
                | HarnessError::Parse(_)
                | HarnessError::Free(FreeError::Budget { .. } | FreeError::ZeroLimit(_) | FreeError::UnknownPoint(_))
        )
    }
}

/// A CSV table written next to the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self { file: file.to_owned(), header: header.iter().map(|h| (*h).to_owned()).collect(), rows }
    }

    /// `element, r, n_lo, n_hi, method`; an empty `n_hi` means no upper bound.
    pub fn norms(rows: Vec<Vec<String>>) -> Self {
        Self::new("norms.csv", &["element", "r", "n_lo", "n_hi", "method"], rows)
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("records are UTF-8"))
    }
}

pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    pub sampled: bool,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "lemma2-restriction", summary: "grades of x - y against powers of the base relation", sampled: false },
    Suite { name: "oracle-vs-tjoin", summary: "matching solver against the enumeration oracle, p = 2", sampled: true },
    Suite { name: "ideal-axioms", summary: "identity, monotonicity, differences and singletons for the bases", sampled: false },
    Suite { name: "augmentation-obstruction", summary: "no member outside the augmentation kernel without the z-shift", sampled: false },
    Suite { name: "coarse-group", summary: "left/right translations for A(X) and the flip group", sampled: false },
    Suite { name: "example1-obstruction", summary: "every flip-window vector splits over H_0 and its conjugate", sampled: false },
    Suite { name: "prop3-extension", summary: "extension of a subgroup base to an abelian group", sampled: false },
    Suite { name: "universal-property", summary: "moduli of homomorphisms extending sampled coarse maps", sampled: true },
    Suite { name: "remark3-growth", summary: "maximal norms over bounded spaces of 2m points", sampled: false },
    Suite { name: "sandwich-bounds", summary: "lower and upper bounds for sampled free-group words", sampled: true },
];

/// One executed suite.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub report: SuiteReport,
    pub tables: Vec<Table>,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct Timing<'a> {
    suite: &'a str,
    seconds: f64,
}

pub fn run_suite(name: &str, cfg: &SpaceConfig) -> Result<SuiteRun, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let outcome = match name {
        "lemma2-restriction" => suites::lemma2_restriction(cfg),
        "oracle-vs-tjoin" => suites::oracle_vs_tjoin(cfg),
        "ideal-axioms" => suites::ideal_axioms(cfg),
        "augmentation-obstruction" => suites::augmentation(cfg),
        "coarse-group" => suites::coarse_group(cfg),
        "example1-obstruction" => suites::example1(cfg),
        "prop3-extension" => suites::prop3_extension(cfg),
        "universal-property" => suites::universal_property(cfg),
        "remark3-growth" => suites::remark3_growth(cfg),
        "sandwich-bounds" => suites::sandwich_bounds(cfg),
        other => return Err(HarnessError::UnknownSuite(other.to_owned())),
    }?;
    let sampled = SUITES.iter().any(|s| s.name == name && s.sampled);
    let report = SuiteReport::new(name, if sampled { cfg.seed } else { None }, outcome.checks);
    Ok(SuiteRun { report, tables: outcome.tables, elapsed: start.elapsed() })
}

/// Checks the map sending point `i` of the configured space to `images[i]`,
/// an element of `A` over the `target_points`-point path (`x0 … x{k-1}`).
pub fn check_map(cfg: &SpaceConfig, images: &[String]) -> Result<SuiteRun, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let p = cfg.prime()?;
    let target = Window::indexed(cfg.target_points);
    let images: Vec<ApElement> = images.iter().map(|t| parse_element(t, &target, p)).collect::<Result<_, _>>()?;
    let points = cfg.filtration()?.window().len();
    if images.len() != points {
        return Err(ConfigError::new("images", format!("{} images for {points} points", images.len())).into());
    }
    let outcome = suites::check_map(cfg, &images)?;
    let report = SuiteReport::new("check-map", None, outcome.checks);
    Ok(SuiteRun { report, tables: outcome.tables, elapsed: start.elapsed() })
}

/// What a norm query asks about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormQuery {
    /// An element of `A_p(X)`, e.g. `x0+x2`.
    Element(String),
    /// A free-group word, e.g. `x0 x1^-1`; always searched in the free group.
    Word(String),
}

pub fn norm_query(cfg: &SpaceConfig, query: &NormQuery, r: usize) -> Result<NormResult, HarnessError> {
    let fc = cfg.free_config()?;
    let window = fc.space().window().clone();
    Ok(match query {
        NormQuery::Element(text) => ap_norm(&fc, &parse_element(text, &window, fc.p)?, r)?,
        NormQuery::Word(text) => {
            let fc = fc.with_variety(VarietyTag::AllGroups);
            word_norm_bounds(&fc, &parse_word(text, &window)?, r)?
        }
    })
}

/// `report.json` bytes: pretty-printed, newline-terminated, no timing.
pub fn report_json(report: &SuiteReport) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

/// `$FREECOARSE_OUT`, or `freecoarse-out` in the working directory.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ENV).map_or_else(|| PathBuf::from("freecoarse-out"), PathBuf::from)
}

/// Writes the run into `root/<suite>/` and returns that directory.
pub fn write_artifacts(run: &SuiteRun, root: &Path) -> Result<PathBuf, HarnessError> {
    let dir = root.join(&run.report.suite);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("report.json"), report_json(&run.report)?)?;
    let timing = Timing { suite: &run.report.suite, seconds: run.elapsed.as_secs_f64() };
    std::fs::write(dir.join("timing.json"), serde_json::to_string_pretty(&timing)? + "\n")?;
    for t in &run.tables {
        std::fs::write(dir.join(&t.file), t.to_csv()?)?;
    }
    Ok(dir)
}
