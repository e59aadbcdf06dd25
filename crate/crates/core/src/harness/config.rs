use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coarse::{metric, metric_filtration, Filtration, Window};
use crate::free::{
    FreeCoarseConfig, DEFAULT_MAX_CONJUGATOR_LENGTH, DEFAULT_MAX_GRADE, DEFAULT_SEARCH_BUDGET,
};
use crate::group::{Prime, VarietyTag};

/// A configuration problem, with the place it was found: a field path such as
/// `space.metric[2][3]`, or `line L, column C` for syntax errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceKind {
    /// Integer points `0..n` with `|i - j|`.
    Path { n: usize },
    /// `rows × cols` integer grid with the L1 metric.
    Grid { rows: usize, cols: usize },
    /// Explicit points with a metric table; labels default to `x0, x1, …`.
    Points {
        #[serde(default)]
        labels: Option<Vec<String>>,
        metric: Vec<Vec<u64>>,
    },
    /// `n` points, diagonal at radius 0 and everything from radius 1 on.
    Bounded { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyName {
    AbelianExpP,
    AllGroups,
}

/// The declarative run configuration. Every field has a default, so an empty
/// document is valid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpaceConfig {
    pub space: SpaceKind,
    pub p: u32,
    pub z: usize,
    pub variety: VarietyName,
    pub max_grade: usize,
    pub max_conjugator_length: usize,
    pub search_budget: u64,
    /// Required by the sampled suites.
    pub seed: Option<u64>,
    /// Radii for the restriction, obstruction and ball suites.
    pub radii: Vec<usize>,
    pub max_n: usize,
    /// Grade ranges for the axiom suite.
    pub axiom_max_n: usize,
    pub axiom_max_r: usize,
    /// Highest chain index of the filtration in the coarse-group suite.
    pub coarse_levels: usize,
    /// Seeded L1 point sets added to the oracle-vs-tjoin suite.
    pub random_sets: usize,
    pub random_set_points: usize,
    /// Sampled words in the sandwich suite.
    pub samples: usize,
    pub max_word_length: usize,
    /// Sampled maps in the universal-property suite, and their target.
    pub maps: usize,
    pub target_points: usize,
    pub map_max_n: usize,
    pub map_max_r: usize,
    pub flip_half_width: u32,
    pub growth_max_m: usize,
    pub extension_rank: usize,
    pub extension_sub_rank: usize,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        Self {
            space: SpaceKind::Path { n: 8 },
            p: 2,
            z: 0,
            variety: VarietyName::AbelianExpP,
            max_grade: DEFAULT_MAX_GRADE,
            max_conjugator_length: DEFAULT_MAX_CONJUGATOR_LENGTH,
            search_budget: DEFAULT_SEARCH_BUDGET,
            seed: None,
            radii: vec![1, 2, 3],
            max_n: 8,
            axiom_max_n: 3,
            axiom_max_r: 2,
            coarse_levels: 3,
            random_sets: 3,
            random_set_points: 12,
            samples: 50,
            max_word_length: 6,
            maps: 5,
            target_points: 6,
            map_max_n: 4,
            map_max_r: 2,
            flip_half_width: 4,
            growth_max_m: 5,
            extension_rank: 6,
            extension_sub_rank: 3,
        }
    }
}

/// `line L, column C` for a byte offset.
fn line_col(text: &str, offset: usize) -> String {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    format!("line {line}, column {column}")
}

impl SpaceConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| ConfigError::new(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let location = e.span().map_or_else(|| "document".to_owned(), |s| line_col(text, s.start));
            ConfigError::new(location, e.message().to_owned())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a `.toml` file as TOML and anything else as JSON.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(path.display().to_string(), e.to_string()))?;
        let parsed = if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        };
        parsed.map_err(|e| ConfigError::new(format!("{}: {}", path.display(), e.location), e.message))
    }

    pub fn prime(&self) -> Result<Prime, ConfigError> {
        Prime::new(self.p).map_err(|e| ConfigError::new("p", e.to_string()))
    }

    pub fn variety_tag(&self) -> Result<VarietyTag, ConfigError> {
        Ok(match self.variety {
            VarietyName::AbelianExpP => VarietyTag::AbelianExpP(self.prime()?),
            VarietyName::AllGroups => VarietyTag::AllGroups,
        })
    }

    pub fn filtration(&self) -> Result<Filtration, ConfigError> {
        let positive = |field: &str, v: usize| {
            if v == 0 {
                Err(ConfigError::new(format!("space.{field}"), "must be positive"))
            } else {
                Ok(())
            }
        };
        Ok(match &self.space {
            SpaceKind::Path { n } => {
                positive("n", *n)?;
                metric::path(*n)
            }
            SpaceKind::Grid { rows, cols } => {
                positive("rows", *rows)?;
                positive("cols", *cols)?;
                metric::grid(*rows, *cols)
            }
            SpaceKind::Bounded { n } => {
                positive("n", *n)?;
                Filtration::bounded(Window::indexed(*n))
            }
            SpaceKind::Points { labels, metric } => {
                if metric.is_empty() {
                    return Err(ConfigError::new("space.metric", "needs at least one point"));
                }
                let window = match labels {
                    None => Window::indexed(metric.len()),
                    Some(labels) => {
                        if labels.len() != metric.len() {
                            return Err(ConfigError::new(
                                "space.labels",
                                format!("{} labels for {} metric rows", labels.len(), metric.len()),
                            ));
                        }
                        Arc::new(
                            Window::new(labels.iter().cloned())
                                .map_err(|e| ConfigError::new("space.labels", e.to_string()))?,
                        )
                    }
                };
                if let Some(i) = metric.iter().position(|row| row.len() != metric.len()) {
                    return Err(ConfigError::new(
                        format!("space.metric[{i}]"),
                        format!("row has {} entries, expected {}", metric[i].len(), metric.len()),
                    ));
                }
                metric_filtration(window, metric).map_err(|e| ConfigError::new("space.metric", e.to_string()))?
            }
        })
    }

    /// The construction inputs for this configuration.
    pub fn free_config(&self) -> Result<FreeCoarseConfig, ConfigError> {
        let space = self.filtration()?;
        let cfg = FreeCoarseConfig::new(&space, self.prime()?, self.z)
            .map_err(|e| ConfigError::new("z", e.to_string()))?
            .with_variety(self.variety_tag()?)
            .with_limits(self.max_grade, self.max_conjugator_length)
            .map_err(|e| ConfigError::new("max_grade", e.to_string()))?
            .with_search_budget(self.search_budget)
            .map_err(|e| ConfigError::new("search_budget", e.to_string()))?;
        Ok(cfg)
    }

    /// Checks everything that does not depend on the suite being run.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.free_config()?;
        if self.radii.is_empty() {
            return Err(ConfigError::new("radii", "needs at least one radius"));
        }
        if self.flip_half_width == 0 || self.flip_half_width > 10 {
            return Err(ConfigError::new("flip_half_width", "must be in 1..=10"));
        }
        if self.extension_sub_rank == 0 || self.extension_sub_rank > self.extension_rank {
            return Err(ConfigError::new("extension_sub_rank", "must be in 1..=extension_rank"));
        }
        if self.target_points == 0 {
            return Err(ConfigError::new("target_points", "must be positive"));
        }
        if self.random_set_points == 0 {
            return Err(ConfigError::new("random_set_points", "must be positive"));
        }
        Ok(())
    }

    pub fn require_seed(&self, suite: &str) -> Result<u64, ConfigError> {
        self.seed.ok_or_else(|| ConfigError::new("seed", format!("suite {suite} samples and needs a seed")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_documents_use_defaults() {
        assert_eq!(SpaceConfig::from_json("{}").unwrap(), SpaceConfig::default());
        assert_eq!(SpaceConfig::from_toml("").unwrap(), SpaceConfig::default());
    }

    #[test]
    fn json_and_toml_agree() {
        let j = SpaceConfig::from_json(r#"{"space": {"kind": "grid", "rows": 3, "cols": 3}, "p": 3, "seed": 7}"#)
            .unwrap();
        let t = SpaceConfig::from_toml("p = 3\nseed = 7\n[space]\nkind = \"grid\"\nrows = 3\ncols = 3\n").unwrap();
        assert_eq!(j, t);
        assert_eq!(j.filtration().unwrap().window().len(), 9);
    }

    #[test]
    fn errors_carry_locations() {
        let e = SpaceConfig::from_json("{\n  \"p\": 4\n}").unwrap_err();
        assert_eq!(e.location, "p");
        let e = SpaceConfig::from_json("{\n  \"colour\": 1\n}").unwrap_err();
        assert!(e.location.starts_with("line 2"), "{e}");
        let e = SpaceConfig::from_toml("p = 2\nbogus = 1\n").unwrap_err();
        assert!(e.location.starts_with("line 2"), "{e}");
        let e = SpaceConfig::from_json(r#"{"space": {"kind": "points", "metric": [[0, 1], [2, 0]]}}"#).unwrap_err();
        assert_eq!(e.location, "space.metric");
        let e = SpaceConfig::from_json(r#"{"space": {"kind": "points", "metric": [[0, 1], [1]]}}"#).unwrap_err();
        assert_eq!(e.location, "space.metric[1]");
        let e = SpaceConfig::from_json(r#"{"z": 9}"#).unwrap_err();
        assert_eq!(e.location, "z");
    }

    #[test]
    fn labelled_points() {
        let c = SpaceConfig::from_json(
            r#"{"space": {"kind": "points", "labels": ["a", "b", "c"], "metric": [[0,1,2],[1,0,1],[2,1,0]]}}"#,
        )
        .unwrap();
        let f = c.filtration().unwrap();
        assert_eq!(f.window().label(2), "c");
        assert!(f.level(1).contains(0, 1) && !f.level(1).contains(0, 2));
    }

    #[test]
    fn sampled_suites_need_seeds() {
        assert!(SpaceConfig::default().require_seed("sandwich-bounds").is_err());
    }
}
