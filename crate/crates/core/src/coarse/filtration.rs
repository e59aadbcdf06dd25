use std::sync::Arc;

use serde::Serialize;

use super::entourage::Entourage;
use super::window::{same_window, PointId, Window};
use super::CoarseError;

/// Declared bound `(r, s) ↦ t` with `levels(r) ∘ levels(s) ⊆ levels(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompBound {
    /// `r + s`, the bound of every metric filtration.
    Sum,
    /// `max(r, s)`, e.g. a bounded structure whose positive levels are full.
    Max,
    /// Pointwise maximum of two bounds (products).
    Join(Box<CompBound>, Box<CompBound>),
}

impl CompBound {
    pub fn eval(&self, r: usize, s: usize) -> usize {
        match self {
            CompBound::Sum => r + s,
            CompBound::Max => r.max(s),
            CompBound::Join(a, b) => a.eval(r, s).max(b.eval(r, s)),
        }
    }
}

/// A countable monotone base of a coarse structure, materialized on a window.
///
/// `levels[r]` is the entourage of radius index `r`; indices past the last
/// stored level saturate to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    window: Arc<Window>,
    levels: Vec<Entourage>,
    comp_bound: CompBound,
    symmetric: bool,
}

/// A composition-bound violation found by [`Filtration::verify_comp_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompBoundViolation {
    pub r: usize,
    pub s: usize,
    pub bound: usize,
    pub pair: (PointId, PointId),
}

/// Outcome of a covering query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Covered { radius: usize },
    Uncovered { point: PointId },
}

impl Coverage {
    pub fn radius(self) -> Option<usize> {
        match self {
            Coverage::Covered { radius } => Some(radius),
            Coverage::Uncovered { .. } => None,
        }
    }
}

impl Filtration {
    /// Validates monotonicity and the symmetry flag. The composition bound is
    /// checked separately by [`verify_comp_bound`](Self::verify_comp_bound).
    pub fn new(
        window: Arc<Window>,
        levels: Vec<Entourage>,
        comp_bound: CompBound,
        symmetric: bool,
    ) -> Result<Self, CoarseError> {
        if levels.is_empty() {
            return Err(CoarseError::NoLevels);
        }
        for level in &levels {
            if !same_window(&window, level.window()) {
                return Err(CoarseError::WindowMismatch);
            }
        }
        for (r, pair) in levels.windows(2).enumerate() {
            if !pair[0].is_subset(&pair[1]) {
                return Err(CoarseError::NotMonotone { radius: r });
            }
        }
        if symmetric {
            if let Some(r) = levels.iter().position(|l| !l.is_symmetric()) {
                return Err(CoarseError::NotSymmetric { radius: r });
            }
        }
        Ok(Self { window, levels, comp_bound, symmetric })
    }

    /// Only the diagonal at every radius.
    pub fn discrete(window: Arc<Window>) -> Self {
        let levels = vec![Entourage::diagonal(window.clone())];
        Self { window, levels, comp_bound: CompBound::Max, symmetric: true }
    }

    /// The bounded structure: Δ at radius 0, the full relation from radius 1 on.
    pub fn bounded(window: Arc<Window>) -> Self {
        let levels = vec![Entourage::diagonal(window.clone()), Entourage::full(window.clone())];
        Self { window, levels, comp_bound: CompBound::Max, symmetric: true }
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn level(&self, r: usize) -> &Entourage {
        &self.levels[r.min(self.levels.len() - 1)]
    }

    /// Index of the last stored level; every larger radius equals it.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn comp_bound(&self, r: usize, s: usize) -> usize {
        self.comp_bound.eval(r, s)
    }

    pub fn comp_bound_rule(&self) -> &CompBound {
        &self.comp_bound
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Exhaustively checks `levels(r) ∘ levels(s) ⊆ levels(comp_bound(r, s))`
    /// for all `r, s ≤ max_r`.
    pub fn verify_comp_bound(&self, max_r: usize) -> Result<(), CompBoundViolation> {
        for r in 0..=max_r {
            for s in 0..=max_r {
                let bound = self.comp_bound(r, s);
                let composed = self.level(r).compose(self.level(s)).expect("same window");
                let target = self.level(bound);
                let escaped = composed.pairs().find(|&(x, y)| !target.contains(x, y));
                if let Some(pair) = escaped {
                    return Err(CompBoundViolation { r, s, bound, pair });
                }
            }
        }
        Ok(())
    }

    /// Applies `symmetrize` to every level.
    pub fn symmetrized(&self) -> Filtration {
        if self.symmetric {
            return self.clone();
        }
        Filtration {
            window: self.window.clone(),
            levels: self.levels.iter().map(Entourage::symmetrize).collect(),
            comp_bound: self.comp_bound.clone(),
            symmetric: true,
        }
    }

    /// Smallest radius whose level relates every pair, if any.
    pub fn is_connected(&self) -> Option<usize> {
        self.levels.iter().position(Entourage::is_full)
    }

    /// A ball `B(x, levels(r))` containing `ys` with the least radius, ties
    /// broken by the lowest center.
    pub fn bounding_ball(&self, ys: &[PointId]) -> Result<Option<(PointId, usize)>, CoarseError> {
        for &y in ys {
            self.window.check(y)?;
        }
        for (r, level) in self.levels.iter().enumerate() {
            if let Some(x) = self.window.points().find(|&x| ys.iter().all(|&y| level.contains(x, y))) {
                return Ok(Some((x, r)));
            }
        }
        Ok(None)
    }

    pub fn is_bounded(&self, ys: &[PointId]) -> Result<bool, CoarseError> {
        Ok(self.bounding_ball(ys)?.is_some())
    }

    /// Least `r` with `window = ⋃_{y ∈ ys} B(y, levels(r))`, or a point left
    /// uncovered by the top level.
    pub fn is_large(&self, ys: &[PointId]) -> Result<Coverage, CoarseError> {
        for &y in ys {
            self.window.check(y)?;
        }
        for (r, level) in self.levels.iter().enumerate() {
            let uncovered = self.window.points().find(|&x| !ys.iter().any(|&y| level.contains(y, x)));
            match uncovered {
                None => return Ok(Coverage::Covered { radius: r }),
                Some(point) if r == self.top() => return Ok(Coverage::Uncovered { point }),
                Some(_) => {}
            }
        }
        unreachable!("levels is nonempty")
    }

    /// The subspace on `ys`, as a filtration over a fresh window whose points
    /// are `ys` in ascending order.
    pub fn restrict(&self, ys: &[PointId]) -> Result<Filtration, CoarseError> {
        let mut ys = ys.to_vec();
        ys.sort_unstable();
        ys.dedup();
        if ys.is_empty() {
            return Err(CoarseError::EmptyWindow);
        }
        for &y in &ys {
            self.window.check(y)?;
        }
        let window = Arc::new(Window::new(ys.iter().map(|&y| self.window.label(y).to_owned()))?);
        let levels = self
            .levels
            .iter()
            .map(|level| {
                Entourage::from_fn(window.clone(), |a, b| level.contains(ys[a], ys[b]))
            })
            .collect();
        Ok(Filtration {
            window,
            levels,
            comp_bound: self.comp_bound.clone(),
            symmetric: self.symmetric,
        })
    }

    /// The product structure on `self.window × other.window`; point
    /// `(a, b)` has id `a * other.len() + b`.
    pub fn product(&self, other: &Filtration) -> Filtration {
        let n2 = other.window.len();
        let labels = self.window.points().flat_map(|a| {
            other
                .window
                .points()
                .map(move |b| format!("({},{})", self.window.label(a), other.window.label(b)))
        });
        let window = Arc::new(Window::new(labels).expect("pairs of distinct labels are distinct"));
        let top = self.top().max(other.top());
        let levels = (0..=top)
            .map(|r| {
                let (l1, l2) = (self.level(r), other.level(r));
                Entourage::from_fn(window.clone(), |p, q| {
                    l1.contains(p / n2, q / n2) && l2.contains(p % n2, q % n2)
                })
            })
            .collect();
        Filtration {
            window,
            levels,
            comp_bound: CompBound::Join(
                Box::new(self.comp_bound.clone()),
                Box::new(other.comp_bound.clone()),
            ),
            symmetric: self.symmetric && other.symmetric,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::metric::path;
    use super::*;

    #[test]
    fn connectedness() {
        let f = path(8);
        assert_eq!(f.is_connected(), Some(7));
        assert_eq!(Filtration::discrete(Window::indexed(3)).is_connected(), None);
        assert_eq!(Filtration::discrete(Window::indexed(1)).is_connected(), Some(0));
    }

    #[test]
    fn boundedness() {
        let f = path(8);
        assert!(f.is_bounded(&[5]).unwrap());
        assert_eq!(f.bounding_ball(&[0, 7]).unwrap(), Some((3, 4)));
        assert_eq!(f.bounding_ball(&(0..8).collect::<Vec<_>>()).unwrap().map(|b| b.1), Some(4));
        let d = Filtration::discrete(Window::indexed(4));
        assert!(!d.is_bounded(&[0, 1]).unwrap());
        assert!(d.is_bounded(&[2]).unwrap());
    }

    #[test]
    fn large_subsets() {
        let f = path(10);
        let all: Vec<_> = (0..10).collect();
        assert_eq!(f.is_large(&all).unwrap(), Coverage::Covered { radius: 0 });
        let evens: Vec<_> = (0..10).step_by(2).collect();
        assert_eq!(f.is_large(&evens).unwrap(), Coverage::Covered { radius: 1 });
        let d = Filtration::discrete(Window::indexed(3));
        assert_eq!(d.is_large(&[0]).unwrap(), Coverage::Uncovered { point: 1 });
    }

    #[test]
    fn restriction_keeps_only_surviving_pairs() {
        let f = path(8);
        let sub = f.restrict(&[4, 0, 2]).unwrap();
        assert_eq!(sub.window().labels(), ["x0", "x2", "x4"]);
        assert_eq!(sub.level(1).len(), 3);
        assert!(sub.level(2).contains(0, 1) && !sub.level(2).contains(0, 2));
        assert!(sub.is_symmetric());
        assert_eq!(f.restrict(&(0..8).collect::<Vec<_>>()).unwrap(), f);
        assert!(matches!(f.restrict(&[]), Err(CoarseError::EmptyWindow)));
    }

    #[test]
    fn restrict_twice_is_restrict_of_intersection() {
        let f = path(9);
        let once = f.restrict(&[1, 3, 4, 6, 8]).unwrap();
        // ids 1, 2, 4 in the subspace are x3, x4, x8.
        let twice = once.restrict(&[1, 2, 4]).unwrap();
        assert_eq!(twice, f.restrict(&[3, 4, 8]).unwrap());
    }

    #[test]
    fn product_of_two_lines_is_the_sup_metric() {
        let a = path(4);
        let p = a.product(&a);
        assert_eq!(p.window().len(), 16);
        for r in 0..4 {
            for s in 0..16usize {
                for t in 0..16usize {
                    let sup = (s / 4).abs_diff(t / 4).max((s % 4).abs_diff(t % 4));
                    assert_eq!(p.level(r).contains(s, t), sup <= r);
                }
            }
        }
        assert_eq!(p.comp_bound(2, 3), 5);
        p.verify_comp_bound(4).unwrap();
    }

    #[test]
    fn monotonicity_is_enforced() {
        let w = Window::indexed(3);
        let levels = vec![Entourage::full(w.clone()), Entourage::diagonal(w.clone())];
        assert!(matches!(
            Filtration::new(w, levels, CompBound::Sum, false),
            Err(CoarseError::NotMonotone { radius: 0 })
        ));
    }

    #[test]
    fn false_comp_bound_is_caught() {
        let w = Window::indexed(4);
        let band = |k: usize| Entourage::from_fn(w.clone(), move |x, y| x.abs_diff(y) <= k);
        let f = Filtration::new(w.clone(), vec![band(0), band(1), band(2), band(3)], CompBound::Max, true)
            .unwrap();
        let v = f.verify_comp_bound(2).unwrap_err();
        assert_eq!((v.r, v.s, v.bound), (1, 1, 1));
    }
}
