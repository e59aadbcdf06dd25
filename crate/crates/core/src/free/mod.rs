//! Norms in free coarse groups over a windowed coarse space.
//!
//! In `A(X)` (abelian, exponent `p`) an element `a` lies in the grade
//! `Y_{n,ε} + {0, z, …, (p-1)z}` exactly when `a - σ(a)z` is a sum of `n`
//! differences `x - y` with `(x, y) ∈ ε`, where `σ` is the augmentation. The
//! least such `n` is the norm of `a` at that radius. It is computed by
//! breadth-first search over the whole group ([`ApNormOracle`]) or, for
//! `p = 2`, as a minimum-weight perfect matching ([`ap_norm_tjoin`]).
//!
//! In the free group only bounds are available: [`word_norm_bounds`] pairs an
//! abelian lower bound with a certified search for factorizations into
//! conjugates of short generators.

mod checks;
mod matching;
mod oracle;
mod tjoin;
mod words;

use serde::Serialize;
use thiserror::Error;

use crate::coarse::{Filtration, PointId};
use crate::group::{ApElement, GroupError, Prime, ReducedWord, VarietyTag};

pub use checks::{
    augmentation_obstruction, ball_growth, boundedness_growth, restriction_check,
    universal_extension_check, BallGrowthRow, GradeImage, GrowthRow, GrowthTable,
    ObstructionReport, PairNorm, RestrictionDiscrepancy, RestrictionReport, UniversalReport,
};
pub use matching::{min_perfect_matching, MatchingRoute};
pub use oracle::ApNormOracle;
pub use tjoin::{ap_norm, ap_norm_tjoin};
pub use words::{core_set, product_of, word_norm_bounds, ConjugateFactor, WordSearcher};

/// Default search limits.
pub const DEFAULT_MAX_GRADE: usize = 6;
pub const DEFAULT_MAX_CONJUGATOR_LENGTH: usize = 3;
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000;
/// Largest group the oracle will enumerate.
pub const ORACLE_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("distinguished point {0} is outside the window")]
    UnknownPoint(PointId),
    #[error("search limit `{0}` must be positive")]
    ZeroLimit(&'static str),
    #[error("the group has {size} elements, over the enumeration budget of {limit}")]
    Budget { size: u128, limit: usize },
    #[error("the matching reduction needs p = 2, not {0}")]
    NotBinary(u32),
    #[error("internal error: support of odd size {0} after the z-shift")]
    OddSupport(usize),
    #[error("element mentions point {point} outside a window of {len}")]
    OutsideWindow { point: PointId, len: usize },
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Inputs of the construction: the base space, the prime, the distinguished
/// point and the search limits for free-group words.
#[derive(Debug, Clone)]
pub struct FreeCoarseConfig {
    space: Filtration,
    pub p: Prime,
    pub z: PointId,
    pub variety: VarietyTag,
    pub max_grade: usize,
    pub max_conjugator_length: usize,
    pub search_budget: u64,
}

impl FreeCoarseConfig {
    /// The space is symmetrized; the variety defaults to `AbelianExpP(p)`.
    pub fn new(space: &Filtration, p: Prime, z: PointId) -> Result<Self, FreeError> {
        if !space.window().contains(z) {
            return Err(FreeError::UnknownPoint(z));
        }
        Ok(Self {
            space: space.symmetrized(),
            p,
            z,
            variety: VarietyTag::AbelianExpP(p),
            max_grade: DEFAULT_MAX_GRADE,
            max_conjugator_length: DEFAULT_MAX_CONJUGATOR_LENGTH,
            search_budget: DEFAULT_SEARCH_BUDGET,
        })
    }

    pub fn with_variety(mut self, variety: VarietyTag) -> Self {
        self.variety = variety;
        self
    }

    pub fn with_limits(mut self, max_grade: usize, max_conjugator_length: usize) -> Result<Self, FreeError> {
        if max_grade == 0 {
            return Err(FreeError::ZeroLimit("max_grade"));
        }
        if max_conjugator_length == 0 {
            return Err(FreeError::ZeroLimit("max_conjugator_length"));
        }
        self.max_grade = max_grade;
        self.max_conjugator_length = max_conjugator_length;
        Ok(self)
    }

    pub fn with_search_budget(mut self, budget: u64) -> Result<Self, FreeError> {
        if budget == 0 {
            return Err(FreeError::ZeroLimit("search_budget"));
        }
        self.search_budget = budget;
        Ok(self)
    }

    pub fn space(&self) -> &Filtration {
        &self.space
    }

    pub fn points(&self) -> usize {
        self.space.window().len()
    }

    pub(crate) fn check_element(&self, a: &ApElement) -> Result<(), FreeError> {
        if a.modulus() != self.p {
            return Err(GroupError::ModulusMismatch(self.p.get(), a.modulus().get()).into());
        }
        let len = self.points();
        match a.support().find(|&x| x >= len) {
            Some(point) => Err(FreeError::OutsideWindow { point, len }),
            None => Ok(()),
        }
    }

    pub(crate) fn check_word(&self, w: &ReducedWord) -> Result<(), FreeError> {
        let len = self.points();
        match w.letters().iter().find(|l| l.point >= len) {
            Some(l) => Err(FreeError::OutsideWindow { point: l.point, len }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NormStatus {
    Exact { n: usize },
    Interval { lo: usize, hi: usize },
    /// Not found within the limits; `lower` is still a valid lower bound.
    NotWithinLimits { lower: usize },
}

impl NormStatus {
    pub fn lower(&self) -> usize {
        match *self {
            NormStatus::Exact { n } => n,
            NormStatus::Interval { lo, .. } => lo,
            NormStatus::NotWithinLimits { lower } => lower,
        }
    }

    pub fn upper(&self) -> Option<usize> {
        match *self {
            NormStatus::Exact { n } => Some(n),
            NormStatus::Interval { hi, .. } => Some(hi),
            NormStatus::NotWithinLimits { .. } => None,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match *self {
            NormStatus::Exact { n } => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Tjoin,
    Search,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Tjoin => "tjoin",
            Method::Search => "search",
        })
    }
}

/// Evidence for an upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// `a - shift·z` is the sum of the listed `x - y`, each pair in `ε_r`.
    Differences { shift: u32, pairs: Vec<(PointId, PointId)> },
    /// `a - shift·z` is the sum of `x - y` over the chains joining each pair.
    Matching { shift: u32, pairs: Vec<(PointId, PointId)> },
    /// `w` is the product of `g⁻¹ d g` over the factors, in order.
    Factors(Vec<ConjugateFactor>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormResult {
    pub status: NormStatus,
    pub radius: usize,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl NormResult {
    pub fn exact(n: usize, radius: usize, method: Method) -> Self {
        Self { status: NormStatus::Exact { n }, radius, method, certificate: None }
    }

    /// `Exact` when the bounds meet.
    pub fn bounds(lo: usize, hi: Option<usize>, radius: usize, method: Method) -> Self {
        let status = match hi {
            Some(hi) if hi == lo => NormStatus::Exact { n: lo },
            Some(hi) => NormStatus::Interval { lo, hi },
            None => NormStatus::NotWithinLimits { lower: lo },
        };
        Self { status, radius, method, certificate: None }
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = Some(certificate);
        self
    }
}

/// `a - σ(a)·z`: the forced representative in the augmentation kernel.
pub fn shift_to_kernel(a: &ApElement, z: PointId) -> (u32, ApElement) {
    let s = a.augmentation();
    let shifted = a
        .sub(&ApElement::generator(a.modulus(), z).scale(s))
        .expect("same modulus");
    (s, shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::metric;

    #[test]
    fn config_validation() {
        let space = metric::path(4);
        assert_eq!(FreeCoarseConfig::new(&space, Prime::TWO, 4).unwrap_err(), FreeError::UnknownPoint(4));
        let cfg = FreeCoarseConfig::new(&space, Prime::TWO, 0).unwrap();
        assert_eq!(cfg.max_grade, 6);
        assert_eq!(cfg.max_conjugator_length, 3);
        assert!(cfg.clone().with_limits(0, 3).is_err());
        assert!(cfg.check_element(&ApElement::generator(Prime::TWO, 9)).is_err());
    }

    #[test]
    fn shift_lands_in_the_kernel() {
        let p = Prime::new(5).unwrap();
        let a = ApElement::from_terms(p, [(1, 2), (3, 4)]);
        let (s, b) = shift_to_kernel(&a, 0);
        assert_eq!(s, 1);
        assert_eq!(b.augmentation(), 0);
        assert_eq!(b.coefficient(0), 4);
    }

    #[test]
    fn bounds_collapse_when_equal() {
        assert_eq!(NormResult::bounds(2, Some(2), 1, Method::Search).status, NormStatus::Exact { n: 2 });
        assert_eq!(
            NormResult::bounds(1, None, 1, Method::Search).status,
            NormStatus::NotWithinLimits { lower: 1 }
        );
    }
}
