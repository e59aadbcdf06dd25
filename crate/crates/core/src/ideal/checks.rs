use serde::Serialize;

use super::{GradedIdealBase, IdealKind};
use crate::group::GroupLaw;

/// First violated axiom, rendered with `Debug`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub kind: IdealKind,
    pub grades: usize,
    pub elements: usize,
    pub checked: u64,
    pub violation: Option<AxiomViolation>,
    pub passed: bool,
}

/// Checks, over the given grades and sample elements:
/// the identity lies in every grade, membership is monotone along comparable
/// grades, `a b⁻¹ ∈ B(difference_grade(g, h))` for `a ∈ B(g)`, `b ∈ B(h)`, and
/// (if `singletons`) every sample lies in the grade `locate` reports.
pub fn check_ideal_axioms<B, G>(
    base: &B,
    group: &G,
    grades: &[B::Grade],
    elements: &[B::Elem],
    singletons: bool,
) -> AxiomReport
where
    B: GradedIdealBase,
    G: GroupLaw<Elem = B::Elem>,
{
    let mut checked = 0u64;
    let violation = (|| {
        let e = group.identity();
        for &g in grades {
            checked += 1;
            if !base.member(&e, g) {
                return Some(AxiomViolation { axiom: "identity", detail: format!("e ∉ B({g:?})") });
            }
        }
        let members: Vec<Vec<&B::Elem>> =
            grades.iter().map(|&g| elements.iter().filter(|a| base.member(a, g)).collect()).collect();
        for (i, &g) in grades.iter().enumerate() {
            for &h in grades {
                if g == h || !base.grade_le(g, h) {
                    continue;
                }
                for a in &members[i] {
                    checked += 1;
                    if !base.member(a, h) {
                        return Some(AxiomViolation {
                            axiom: "monotone",
                            detail: format!("{a:?} ∈ B({g:?}) but ∉ B({h:?})"),
                        });
                    }
                }
            }
        }
        for (i, &g) in grades.iter().enumerate() {
            for (j, &h) in grades.iter().enumerate() {
                let d = base.difference_grade(g, h);
                for a in &members[i] {
                    for b in &members[j] {
                        checked += 1;
                        let q = group.quotient(a, b);
                        if !base.member(&q, d) {
                            return Some(AxiomViolation {
                                axiom: "difference",
                                detail: format!("{a:?} ∈ B({g:?}), {b:?} ∈ B({h:?}), but {q:?} ∉ B({d:?})"),
                            });
                        }
                    }
                }
            }
        }
        if singletons {
            for a in elements {
                checked += 1;
                match base.locate(a) {
                    Some(g) if base.member(a, g) => {}
                    Some(g) => {
                        return Some(AxiomViolation {
                            axiom: "singleton",
                            detail: format!("{a:?} located at {g:?} but not a member there"),
                        })
                    }
                    None => {
                        return Some(AxiomViolation { axiom: "singleton", detail: format!("{a:?} lies in no grade") })
                    }
                }
            }
        }
        None
    })();
    AxiomReport {
        kind: base.kind(),
        grades: grades.len(),
        elements: elements.len(),
        checked,
        passed: violation.is_none(),
        violation,
    }
}

/// A grade whose conjugate by `conjugator` fits in none of the tested grades.
/// `escapes` pairs every tested grade with a conjugated member outside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceEscape {
    pub grade: String,
    pub conjugator: String,
    pub escapes: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub kind: IdealKind,
    pub checked: u64,
    /// Every conjugated grade landed in itself.
    pub same_grade: bool,
    /// For each tested `(grade, conjugator)`, the grade itself if it holds the
    /// conjugated members, else the first listed grade that does.
    pub landing: Vec<(String, String, Option<String>)>,
    pub escape: Option<InvarianceEscape>,
    pub passed: bool,
}

/// For each grade `g` and conjugator `c`, looks for a tested grade containing
/// `c⁻¹ a c` for every sampled `a ∈ B(g)`.
pub fn check_invariance<B, G>(
    base: &B,
    group: &G,
    grades: &[B::Grade],
    elements: &[B::Elem],
    conjugators: &[B::Elem],
) -> InvarianceReport
where
    B: GradedIdealBase,
    G: GroupLaw<Elem = B::Elem>,
{
    let mut checked = 0u64;
    let mut same_grade = true;
    let mut landing = Vec::new();
    let mut escape = None;
    for &g in grades {
        let members: Vec<&B::Elem> = elements.iter().filter(|a| base.member(a, g)).collect();
        for c in conjugators {
            let images: Vec<B::Elem> = members.iter().map(|a| group.conjugate(a, c)).collect();
            checked += images.len() as u64;
            let outside = |h: B::Grade| images.iter().zip(&members).find(|(b, _)| !base.member(b, h));
            let found = std::iter::once(g).chain(grades.iter().copied()).find(|&h| outside(h).is_none());
            if found != Some(g) {
                same_grade = false;
            }
            landing.push((format!("{g:?}"), format!("{c:?}"), found.map(|h| format!("{h:?}"))));
            if found.is_none() && escape.is_none() {
                let escapes = grades
                    .iter()
                    .map(|&h| {
                        let (b, a) = outside(h).expect("no grade holds every image");
                        (format!("{h:?}"), format!("{a:?}"), format!("{b:?}"))
                    })
                    .collect();
                escape = Some(InvarianceEscape { grade: format!("{g:?}"), conjugator: format!("{c:?}"), escapes });
            }
        }
    }
    InvarianceReport { kind: base.kind(), checked, same_grade, landing, passed: escape.is_none(), escape }
}

#[cfg(test)]
mod tests {
    use super::super::{AllSubsets, FiniteSets, FlipBase, PullbackBase, YBase};
    use super::*;
    use crate::coarse::metric;
    use crate::free::FreeCoarseConfig;
    use crate::group::{ApElement, ApGroup, FlipGroup, FreeGroup, Prime, ReducedWord};

    fn y_base(n: usize) -> YBase {
        YBase::new(&FreeCoarseConfig::new(&metric::path(n), Prime::TWO, 0).unwrap()).unwrap()
    }

    fn y_grades(max_n: usize, max_r: usize) -> Vec<(usize, usize)> {
        (0..=max_n).flat_map(|n| (0..=max_r).map(move |r| (n, r))).collect()
    }

    #[test]
    fn y_base_axioms_on_a_short_path() {
        let b = y_base(6);
        let elems: Vec<_> = ApElement::enumerate(Prime::TWO, 6).collect();
        let r = check_ideal_axioms(&b, &ApGroup { p: Prime::TWO }, &y_grades(2, 2), &elems, true);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn all_subsets_and_finite_sets_pass() {
        let g = ApGroup { p: Prime::TWO };
        let elems: Vec<_> = ApElement::enumerate(Prime::TWO, 4).collect();
        assert!(check_ideal_axioms(&AllSubsets::new(), &g, &[()], &elems, true).passed);
        let f = FiniteSets { p: Prime::TWO };
        assert!(check_ideal_axioms(&f, &g, &[0, 1, 2, 3, 4], &elems, true).passed);
    }

    #[test]
    fn a_broken_base_is_caught() {
        // Claims differences stay in the same grade, which fails for Y-bases.
        struct Tight(YBase);
        impl GradedIdealBase for Tight {
            type Elem = ApElement;
            type Grade = (usize, usize);
            fn kind(&self) -> IdealKind {
                IdealKind::FreeAbelianYBase
            }
            fn member(&self, a: &ApElement, g: (usize, usize)) -> bool {
                self.0.member(a, g)
            }
            fn grade_le(&self, g: (usize, usize), h: (usize, usize)) -> bool {
                self.0.grade_le(g, h)
            }
            fn difference_grade(&self, g: (usize, usize), _: (usize, usize)) -> (usize, usize) {
                g
            }
            fn locate(&self, a: &ApElement) -> Option<(usize, usize)> {
                self.0.locate(a)
            }
        }
        let elems: Vec<_> = ApElement::enumerate(Prime::TWO, 4).collect();
        let r = check_ideal_axioms(&Tight(y_base(4)), &ApGroup { p: Prime::TWO }, &y_grades(1, 1), &elems, false);
        assert_eq!(r.violation.map(|v| v.axiom), Some("difference"));
    }

    #[test]
    fn abelian_and_pullback_bases_are_invariant() {
        let b = y_base(4);
        let elems: Vec<_> = ApElement::enumerate(Prime::TWO, 4).collect();
        let r = check_invariance(&b, &ApGroup { p: Prime::TWO }, &y_grades(2, 1), &elems, &elems);
        assert!(r.passed && r.same_grade);

        let pb = PullbackBase::new(y_base(3));
        let words: Vec<ReducedWord> = FreeGroup::words_up_to(3, 2);
        let conj: Vec<ReducedWord> = FreeGroup::words_up_to(3, 4);
        let r = check_invariance(&pb, &FreeGroup, &y_grades(1, 1), &words, &conj);
        assert!(r.passed && r.same_grade, "{r:?}");
    }

    #[test]
    fn flip_base_is_not_invariant() {
        let g = FlipGroup::new(4).unwrap();
        let b = FlipBase::new(g);
        let elems: Vec<_> = g.elements().collect();
        let r = check_invariance(&b, &g, &b.grades(), &elems, &[g.phi()]);
        assert!(!r.passed);
        let esc = r.escape.unwrap();
        assert_eq!(esc.escapes.len(), b.grades().len());
        let axioms = check_ideal_axioms(&b, &g, &b.grades(), &elems, false);
        assert!(axioms.passed, "{axioms:?}");
    }
}
