use std::collections::VecDeque;

use super::{shift_to_kernel, Certificate, FreeCoarseConfig, FreeError, Method, NormResult, ORACLE_BUDGET};
use crate::coarse::PointId;
use crate::group::{ApElement, Prime};

const UNREACHED: u16 = u16::MAX;

/// Breadth-first distances over all of `A(X)` from `0`, one step being the
/// addition of some `x - y` with `(x, y) ∈ ε_r`. The distance of `b` in the
/// augmentation kernel is the least `n` with `b ∈ Y_{n,ε_r}`.
#[derive(Debug, Clone)]
pub struct ApNormOracle {
    p: Prime,
    points: usize,
    z: PointId,
    radius: usize,
    powers: Vec<usize>,
    steps: Vec<(PointId, PointId)>,
    dist: Vec<u16>,
    depth: usize,
}

impl ApNormOracle {
    pub fn new(cfg: &FreeCoarseConfig, r: usize) -> Result<Self, FreeError> {
        let p = cfg.p;
        let points = cfg.points();
        let size = u128::from(p.get()).checked_pow(points as u32).unwrap_or(u128::MAX);
        if size > ORACLE_BUDGET as u128 {
            return Err(FreeError::Budget { size, limit: ORACLE_BUDGET });
        }
        let q = p.get() as usize;
        let powers: Vec<usize> = (0..points).map(|x| q.pow(x as u32)).collect();
        let level = cfg.space().level(r);
        let steps: Vec<(PointId, PointId)> = level
            .pairs()
            .filter(|&(x, y)| x != y && (q > 2 || x < y))
            .collect();
        let mut oracle = Self {
            p,
            points,
            z: cfg.z,
            radius: r,
            powers,
            steps,
            dist: vec![UNREACHED; size as usize],
            depth: 0,
        };
        oracle.explore();
        Ok(oracle)
    }

    /// Index of `i + (x - y)`.
    fn step(&self, i: usize, x: PointId, y: PointId) -> usize {
        let q = self.p.get() as usize;
        if q == 2 {
            return i ^ self.powers[x] ^ self.powers[y];
        }
        let (px, py) = (self.powers[x], self.powers[y]);
        let dx = i / px % q;
        let dy = i / py % q;
        let up = if dx + 1 == q { i - dx * px } else { i + px };
        if dy == 0 {
            up + (q - 1) * py
        } else {
            up - py
        }
    }

    fn explore(&mut self) {
        let mut queue = VecDeque::from([0usize]);
        self.dist[0] = 0;
        while let Some(i) = queue.pop_front() {
            let d = self.dist[i];
            for k in 0..self.steps.len() {
                let (x, y) = self.steps[k];
                let j = self.step(i, x, y);
                if self.dist[j] == UNREACHED {
                    self.dist[j] = d + 1;
                    self.depth = self.depth.max(usize::from(d) + 1);
                    queue.push_back(j);
                }
            }
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Number of elements of the group.
    pub fn size(&self) -> usize {
        self.dist.len()
    }

    /// Largest finite distance.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Least `n` with `b ∈ Y_{n,ε_r}`, if any; no z-shift is applied.
    pub fn kernel_norm(&self, b: &ApElement) -> Option<usize> {
        self.index_norm(b.encode(self.points))
    }

    pub fn index_norm(&self, index: usize) -> Option<usize> {
        match self.dist[index] {
            UNREACHED => None,
            d => Some(usize::from(d)),
        }
    }

    /// The norm with the forced shift `σ(a)·z`.
    pub fn norm_value(&self, a: &ApElement) -> Option<usize> {
        self.kernel_norm(&shift_to_kernel(a, self.z).1)
    }

    pub fn norm(&self, a: &ApElement) -> Result<NormResult, FreeError> {
        self.check(a)?;
        let (shift, b) = shift_to_kernel(a, self.z);
        Ok(match self.kernel_norm(&b) {
            Some(n) => NormResult::exact(n, self.radius, Method::Oracle)
                .with_certificate(Certificate::Differences { shift, pairs: self.decompose(&b) }),
            None => NormResult::bounds(self.depth + 1, None, self.radius, Method::Oracle),
        })
    }

    /// `a ∈ Y_{n,ε_r} + {0, z, …, (p-1)z}`.
    pub fn member(&self, a: &ApElement, n: usize) -> bool {
        self.norm_value(a).is_some_and(|m| m <= n)
    }

    fn check(&self, a: &ApElement) -> Result<(), FreeError> {
        if a.modulus() != self.p {
            return Err(crate::group::GroupError::ModulusMismatch(self.p.get(), a.modulus().get()).into());
        }
        match a.support().find(|&x| x >= self.points) {
            Some(point) => Err(FreeError::OutsideWindow { point, len: self.points }),
            None => Ok(()),
        }
    }

    /// A shortest sum of differences `x - y`, `(x, y) ∈ ε_r`, equal to `b`,
    /// read back along decreasing distances. Empty when `b` is unreachable.
    pub fn decompose(&self, b: &ApElement) -> Vec<(PointId, PointId)> {
        let mut i = b.encode(self.points);
        let mut out = Vec::new();
        while self.dist[i] != 0 && self.dist[i] != UNREACHED {
            let d = self.dist[i];
            // i = j + (x - y) with dist[j] = d - 1, so j = i + (y - x).
            let (x, y, j) = self
                .steps
                .iter()
                .find_map(|&(x, y)| {
                    let j = self.step(i, y, x);
                    (self.dist[j] == d - 1).then_some((x, y, j))
                })
                .expect("a predecessor one layer down");
            out.push((x, y));
            i = j;
        }
        out
    }

    /// `counts[n]` = number of kernel elements at distance exactly `n`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0; self.depth + 1];
        for &d in &self.dist {
            if d != UNREACHED {
                counts[usize::from(d)] += 1;
            }
        }
        counts
    }

    /// Every element of the group with its norm, in index order.
    pub fn all_norms(&self) -> impl Iterator<Item = (ApElement, Option<usize>)> + '_ {
        ApElement::enumerate(self.p, self.points).map(move |a| {
            let n = self.norm_value(&a);
            (a, n)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::NormStatus;
    use super::*;
    use crate::coarse::metric;

    fn path_cfg(n: usize, p: u32) -> FreeCoarseConfig {
        FreeCoarseConfig::new(&metric::path(n), Prime::new(p).unwrap(), 0).unwrap()
    }

    fn el(p: u32, terms: &[(PointId, i64)]) -> ApElement {
        ApElement::from_terms(Prime::new(p).unwrap(), terms.iter().copied())
    }

    #[test]
    fn documented_norms_on_the_eight_path() {
        let o = ApNormOracle::new(&path_cfg(8, 2), 1).unwrap();
        assert_eq!(o.norm(&ApElement::zero(Prime::TWO)).unwrap().status, NormStatus::Exact { n: 0 });
        assert_eq!(o.norm_value(&el(2, &[(0, 1), (2, 1)])), Some(2));
        assert_eq!(o.norm_value(&el(2, &[(0, 1), (5, 1)])), Some(5));
        // x3 = (x3 - x0) + z with z = x0.
        assert_eq!(o.norm_value(&el(2, &[(3, 1)])), Some(3));
        assert!(o.member(&el(2, &[(3, 1)]), 3));
        assert!(!o.member(&el(2, &[(3, 1)]), 2));
    }

    #[test]
    fn steps_match_element_arithmetic() {
        let cfg = path_cfg(4, 5);
        let o = ApNormOracle::new(&cfg, 2).unwrap();
        for a in ApElement::enumerate(cfg.p, 4).step_by(37) {
            for &(x, y) in &o.steps {
                let b = a.add(&ApElement::difference(cfg.p, x, y)).unwrap();
                assert_eq!(o.step(a.encode(4), x, y), b.encode(4));
            }
        }
    }

    #[test]
    fn decomposition_sums_back() {
        let cfg = path_cfg(6, 3);
        let o = ApNormOracle::new(&cfg, 1).unwrap();
        for a in ApElement::enumerate(cfg.p, 6).filter(|a| a.augmentation() == 0) {
            let pairs = o.decompose(&a);
            assert_eq!(Some(pairs.len()), o.kernel_norm(&a));
            let sum = pairs.iter().fold(ApElement::zero(cfg.p), |acc, &(x, y)| {
                assert!(cfg.space().level(1).contains(x, y));
                acc.add(&ApElement::difference(cfg.p, x, y)).unwrap()
            });
            assert_eq!(sum, a);
        }
    }

    #[test]
    fn disconnected_levels_leave_elements_unreached() {
        let space = crate::coarse::Filtration::discrete(crate::coarse::Window::indexed(3));
        let cfg = FreeCoarseConfig::new(&space, Prime::TWO, 0).unwrap();
        let o = ApNormOracle::new(&cfg, 0).unwrap();
        assert_eq!(o.size(), 8);
        assert_eq!(o.norm_value(&el(2, &[(1, 1), (2, 1)])), None);
        assert_eq!(
            o.norm(&el(2, &[(1, 1), (2, 1)])).unwrap().status,
            NormStatus::NotWithinLimits { lower: 1 }
        );
        assert_eq!(o.norm_value(&el(2, &[(0, 1)])), Some(0));
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = path_cfg(21, 2);
        assert!(matches!(ApNormOracle::new(&cfg, 1), Err(FreeError::Budget { .. })));
    }
}
