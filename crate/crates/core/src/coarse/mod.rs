//! Coarse spaces presented as monotone entourage filtrations on finite windows.
//!
//! A coarse structure with a countable base is materialized as a sequence of
//! reflexive relations `levels(0) ⊆ levels(1) ⊆ ...` over a [`Window`], plus a
//! declared [`CompBound`] saying which level absorbs a composite. Everything
//! here is window-relative: answers are exact for the sample, and statements
//! about the ambient (possibly infinite) space are only as good as the window.

mod entourage;
mod filtration;
mod maps;
pub mod metric;
mod window;

use thiserror::Error;

pub use entourage::Entourage;
pub use filtration::{CompBound, CompBoundViolation, Coverage, Filtration};
pub use maps::{
    check_asymorphism, check_coarse_equivalence_witness, coarse_modulus, AsymorphismReport,
    Counterexample, CoverageReport, EquivalenceReport, Modulus, ModulusOutcome, PointMap,
};
pub use metric::{metric_filtration, MetricError};
pub use window::{PointId, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoarseError {
    #[error("window has no points")]
    EmptyWindow,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("point id {0} is outside the window")]
    UnknownPoint(PointId),
    #[error("entourages live on different windows")]
    WindowMismatch,
    #[error("filtration has no levels")]
    NoLevels,
    #[error("level {radius} is not contained in level {}", radius + 1)]
    NotMonotone { radius: usize },
    #[error("level {radius} is not symmetric")]
    NotSymmetric { radius: usize },
    #[error("map is defined on {found} points, domain has {expected}")]
    MapDomain { expected: usize, found: usize },
}
