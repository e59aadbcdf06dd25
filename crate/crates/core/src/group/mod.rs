//! Element arithmetic: the free abelian group `A(X)` of exponent `p`, the free
//! group on `X` as reduced words, and the semidirect product `H ⋊ ⟨φ⟩` built
//! from a reflection of `Z`-indexed `Z_2` vectors.

mod ap;
mod flip;
mod hom;
mod word;

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coarse::PointId;

pub use ap::{ApElement, ApGroup};
pub use flip::{FlipElement, FlipGroup};
pub use hom::{extend_to_hom, Homomorphism};
pub use word::{abelianize, FreeGroup, Letter, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("mixed moduli {0} and {1}")]
    ModulusMismatch(u32, u32),
    #[error("index {index} is outside the flip window -{half_width}..={half_width}")]
    FlipOverflow { index: i64, half_width: u32 },
    #[error("flip windows of half-width {0} and {1} mixed")]
    FlipWindowMismatch(u32, u32),
    #[error("flip window half-width {0} exceeds the supported maximum of 63")]
    FlipWindowTooWide(u32),
    #[error("image of point {point} does not have exponent {p}")]
    ExponentViolation { point: PointId, p: u32 },
    #[error("images of points {a} and {b} do not commute")]
    NonCommuting { a: PointId, b: PointId },
    #[error("{expected} images required, {found} supplied")]
    ImageCount { expected: usize, found: usize },
    #[error("the group is not abelian")]
    NotAbelian,
    #[error("homomorphism is defined on {expected}, not {found}")]
    VarietyMismatch { expected: String, found: String },
}

/// A prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, GroupError> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if is_prime {
            Ok(Prime(p))
        } else {
            Err(GroupError::NotPrime(p))
        }
    }

    pub const TWO: Prime = Prime(2);

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Prime {
    type Error = GroupError;
    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

/// The variety a free object lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyTag {
    /// Abelian groups of exponent `p`.
    AbelianExpP(Prime),
    AllGroups,
}

impl std::fmt::Display for VarietyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarietyTag::AbelianExpP(p) => write!(f, "abelian groups of exponent {}", p.get()),
            VarietyTag::AllGroups => f.write_str("all groups"),
        }
    }
}

/// Group operations on a carrier type. Operations assume both arguments come
/// from the same group value and panic otherwise.
pub trait GroupLaw {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_abelian(&self) -> bool {
        false
    }

    fn pow(&self, a: &Self::Elem, k: u64) -> Self::Elem {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.op(&acc, a);
        }
        acc
    }

    /// `g⁻¹ a g`.
    fn conjugate(&self, a: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        self.op(&self.op(&self.inv(g), a), g)
    }

    /// `a b⁻¹`.
    fn quotient(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.op(a, &self.inv(b))
    }
}

/// The one-element group.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialGroup;

impl GroupLaw for TrivialGroup {
    type Elem = ();
    fn identity(&self) {}
    fn op(&self, _: &(), _: &()) {}
    fn inv(&self, _: &()) {}
    fn is_abelian(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(97).is_ok());
        for bad in [0, 1, 4, 9, 91] {
            assert_eq!(Prime::new(bad), Err(GroupError::NotPrime(bad)));
        }
        let p: Result<Prime, _> = serde_json::from_str("6");
        assert!(p.is_err());
    }
}
