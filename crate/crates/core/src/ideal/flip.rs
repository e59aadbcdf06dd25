use std::collections::HashSet;

use serde::Serialize;

use super::{GradedIdealBase, IdealKind};
use crate::group::{FlipElement, FlipGroup, GroupLaw};

/// The subgroups `H_m = {(v, id) : support(v) ⊆ [m, N]}` of the truncated
/// flip group, graded by `m` with larger sets at smaller `m`.
///
/// Grades run over `1-N ..= N`. `H_{-N}` is the whole vector window, which
/// would absorb every conjugate and hide the escape that the truncation is
/// meant to exhibit, so it is left out.
#[derive(Debug, Clone, Copy)]
pub struct FlipBase {
    group: FlipGroup,
}

impl FlipBase {
    pub fn new(group: FlipGroup) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &FlipGroup {
        &self.group
    }

    /// Every grade, coarsest last.
    pub fn grades(&self) -> Vec<i64> {
        let n = i64::from(self.group.half_width());
        (1 - n..=n).rev().collect()
    }
}

impl GradedIdealBase for FlipBase {
    type Elem = FlipElement;
    type Grade = i64;

    fn kind(&self) -> IdealKind {
        IdealKind::FlipExample
    }

    fn member(&self, a: &FlipElement, m: i64) -> bool {
        !a.is_flip() && a.half_width() == self.group.half_width() && a.support().all(|i| i >= m)
    }

    fn grade_le(&self, g: i64, h: i64) -> bool {
        g >= h
    }

    /// `H_m + H_{m'} ⊆ H_{min(m, m')}`.
    fn difference_grade(&self, g: i64, h: i64) -> i64 {
        g.min(h)
    }

    fn locate(&self, a: &FlipElement) -> Option<i64> {
        if a.is_flip() || a.half_width() != self.group.half_width() {
            return None;
        }
        let n = i64::from(self.group.half_width());
        let m = a.support().next().unwrap_or(n);
        (m > -n).then_some(m)
    }
}

/// Split of a vector into its positive-index part, in `H_1 ⊆ H_0`, and its
/// non-positive part, in `φ H_0 φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipSplit {
    pub vector: String,
    pub in_h0: String,
    pub in_conjugate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipObstructionReport {
    pub half_width: u32,
    pub vectors_checked: u64,
    /// A vector that failed to split, if any.
    pub split_failure: Option<String>,
    /// Order of the subgroup generated by `H_0 ∪ φ H_0 φ`.
    pub closure_size: u64,
    /// Order of the vector window `H^{(N)}`.
    pub window_size: u64,
    pub examples: Vec<FlipSplit>,
    pub passed: bool,
}

/// Checks `H_0 + φ H_0 φ = H^{(N)}` on the truncated window, both by splitting
/// every vector and by closing the union under products.
pub fn flip_obstruction_check(group: &FlipGroup) -> FlipObstructionReport {
    let phi = group.phi();
    let n = group.half_width();
    let origin = u64::from(n);
    let low_mask: u128 = (1u128 << (origin + 1)) - 1;
    let in_h0 = |v: &FlipElement| !v.is_flip() && v.support().all(|i| i >= 0);
    let mut split_failure = None;
    let mut examples = Vec::new();
    let mut checked = 0u64;
    for v in group.vectors() {
        checked += 1;
        let plus = group.from_bits(v.bits() & !low_mask, false);
        let minus = group.from_bits(v.bits() & low_mask, false);
        let reflected = group.conjugate(&minus, &phi);
        let ok = in_h0(&plus) && in_h0(&reflected) && group.op(&plus, &minus) == v;
        if !ok && split_failure.is_none() {
            split_failure = Some(format!("{v:?}"));
        }
        if examples.len() < 3 && plus.bits() != 0 && minus.bits() != 0 {
            examples.push(FlipSplit {
                vector: format!("{v:?}"),
                in_h0: format!("{plus:?}"),
                in_conjugate: format!("{minus:?}"),
            });
        }
    }

    let generators: Vec<FlipElement> = group
        .vectors()
        .filter(in_h0)
        .flat_map(|h| [h, group.conjugate(&h, &phi)])
        .collect();
    let mut closure: HashSet<FlipElement> = HashSet::from([group.identity()]);
    let mut frontier = vec![group.identity()];
    while let Some(a) = frontier.pop() {
        for g in &generators {
            let b = group.op(&a, g);
            if closure.insert(b) {
                frontier.push(b);
            }
        }
    }
    let window_size = 1u64 << (2 * n + 1);
    let closure_size = closure.len() as u64;
    FlipObstructionReport {
        half_width: n,
        vectors_checked: checked,
        passed: split_failure.is_none() && closure_size == window_size && checked == window_size,
        split_failure,
        closure_size,
        window_size,
        examples,
    }
}
