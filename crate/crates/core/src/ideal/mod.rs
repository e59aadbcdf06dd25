//! Group ideals presented by graded bases, the entourages they induce on a
//! group acting on itself, and checkers for the ideal axioms, invariance and
//! the left/right coarse-group conditions.
//!
//! A base is a family `B(g)` of subsets indexed by grades `g`, monotone in the
//! grade, given intensionally by a membership test. The ideal it generates
//! consists of all subsets of the `B(g)`, so downward closure needs no
//! separate witness.

mod action;
mod checks;
mod extension;
mod flip;
mod ybase;

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;

use serde::Serialize;

use crate::coarse::{Filtration, PointId};
use crate::group::{ApElement, Prime, ReducedWord};

pub use action::{
    check_left_coarse, check_right_coarse, entourage_from_ideal, ideal_filtration, CoarseGroupReport,
    GroupWindow, Side, TranslationWitness,
};
pub use checks::{
    check_ideal_axioms, check_invariance, AxiomReport, AxiomViolation, InvarianceEscape, InvarianceReport,
};
pub use extension::{extend_ideal_abelian, ExtensionBase};
pub use flip::{flip_obstruction_check, FlipBase, FlipObstructionReport, FlipSplit};
pub use ybase::{ap_ideal_member, PullbackBase, YBase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealKind {
    FreeAbelianYBase,
    Pullback,
    FiniteSets,
    AllSubsets,
    Extension,
    FlipExample,
}

/// A base of a group ideal, graded so that `g ≤ g'` implies `B(g) ⊆ B(g')`.
pub trait GradedIdealBase {
    type Elem: Clone + Eq + Hash + Debug;
    type Grade: Copy + Eq + Debug;

    fn kind(&self) -> IdealKind;

    fn member(&self, a: &Self::Elem, g: Self::Grade) -> bool;

    /// Partial order on grades under which the base is monotone.
    fn grade_le(&self, g: Self::Grade, h: Self::Grade) -> bool;

    /// A grade predicted to contain `a b⁻¹` whenever `a ∈ B(g)`, `b ∈ B(h)`.
    fn difference_grade(&self, g: Self::Grade, h: Self::Grade) -> Self::Grade;

    /// Some grade containing `a`, least in the base's preferred order, or
    /// `None` if no grade the base can represent contains it.
    fn locate(&self, a: &Self::Elem) -> Option<Self::Grade>;
}

/// `Y_ε = {x - y : (x, y) ∈ ε_r}`, sorted, including `0`.
pub fn difference_set(space: &Filtration, r: usize, p: Prime) -> Vec<ApElement> {
    let mut out: Vec<ApElement> = space
        .level(r)
        .pairs()
        .map(|(x, y)| ApElement::difference(p, x, y))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `D_ε = {x y⁻¹ : (x, y) ∈ ε_r}`, sorted, including `e`.
pub fn difference_words(space: &Filtration, r: usize) -> Vec<ReducedWord> {
    let mut out: Vec<ReducedWord> = space.level(r).pairs().map(|(x, y)| ReducedWord::quotient(x, y)).collect();
    out.sort();
    out.dedup();
    out
}

/// The ideal of all subsets.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllSubsets<E>(PhantomData<E>);

impl<E> AllSubsets<E> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<E: Clone + Eq + Hash + Debug> GradedIdealBase for AllSubsets<E> {
    type Elem = E;
    type Grade = ();

    fn kind(&self) -> IdealKind {
        IdealKind::AllSubsets
    }

    fn member(&self, _: &E, _: ()) -> bool {
        true
    }

    fn grade_le(&self, _: (), _: ()) -> bool {
        true
    }

    fn difference_grade(&self, _: (), _: ()) {}

    fn locate(&self, _: &E) -> Option<()> {
        Some(())
    }
}

/// Finite subsets of `A(X)`, through the cofinal chain of finite subgroups
/// `F_m = {a : support(a) ⊆ {x_0, …, x_{m-1}}}`.
#[derive(Debug, Clone, Copy)]
pub struct FiniteSets {
    pub p: Prime,
}

impl GradedIdealBase for FiniteSets {
    type Elem = ApElement;
    type Grade = usize;

    fn kind(&self) -> IdealKind {
        IdealKind::FiniteSets
    }

    fn member(&self, a: &ApElement, m: usize) -> bool {
        a.modulus() == self.p && a.support().all(|x: PointId| x < m)
    }

    fn grade_le(&self, g: usize, h: usize) -> bool {
        g <= h
    }

    fn difference_grade(&self, g: usize, h: usize) -> usize {
        g.max(h)
    }

    fn locate(&self, a: &ApElement) -> Option<usize> {
        (a.modulus() == self.p).then(|| a.support().last().map_or(0, |x| x + 1))
    }
}
