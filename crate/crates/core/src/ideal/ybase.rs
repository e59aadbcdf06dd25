use super::{GradedIdealBase, IdealKind};
use crate::free::{ap_norm, ApNormOracle, FreeCoarseConfig, FreeError};
use crate::group::{abelianize, ApElement, ReducedWord};

/// The base `Y_{n,ε_r} + {0, z, …, (p-1)z}` of `A(X)`, graded by `(n, r)`.
#[derive(Debug, Clone)]
pub struct YBase {
    cfg: FreeCoarseConfig,
    /// One oracle per stored level of the space; larger radii saturate.
    oracles: Vec<ApNormOracle>,
}

impl YBase {
    pub fn new(cfg: &FreeCoarseConfig) -> Result<Self, FreeError> {
        let oracles = (0..=cfg.space().top()).map(|r| ApNormOracle::new(cfg, r)).collect::<Result<_, _>>()?;
        Ok(Self { cfg: cfg.clone(), oracles })
    }

    pub fn config(&self) -> &FreeCoarseConfig {
        &self.cfg
    }

    pub fn oracle(&self, r: usize) -> &ApNormOracle {
        &self.oracles[r.min(self.oracles.len() - 1)]
    }

    pub fn norm(&self, a: &ApElement, r: usize) -> Option<usize> {
        self.oracle(r).norm_value(a)
    }
}

impl GradedIdealBase for YBase {
    type Elem = ApElement;
    type Grade = (usize, usize);

    fn kind(&self) -> IdealKind {
        IdealKind::FreeAbelianYBase
    }

    fn member(&self, a: &ApElement, (n, r): (usize, usize)) -> bool {
        a.modulus() == self.cfg.p && self.oracle(r).member(a, n)
    }

    fn grade_le(&self, (n, r): (usize, usize), (m, s): (usize, usize)) -> bool {
        n <= m && r <= s
    }

    /// `Y_{n,ε} - Y_{n',ε'} ⊆ Y_{n+n',ε∘ε'}`, and `ε_r ∘ ε_s ⊆ ε_{comp(r,s)}`.
    fn difference_grade(&self, (n, r): (usize, usize), (m, s): (usize, usize)) -> (usize, usize) {
        (n + m, self.cfg.space().comp_bound(r, s))
    }

    /// Least `n` at the least radius where `a` has a finite norm.
    fn locate(&self, a: &ApElement) -> Option<(usize, usize)> {
        (0..self.oracles.len()).find_map(|r| self.norm(a, r).map(|n| (n, r)))
    }
}

/// `a ∈ Y_{n,ε_r} + {0, z, …, (p-1)z}`, decided through the exact norm.
pub fn ap_ideal_member(cfg: &FreeCoarseConfig, a: &ApElement, n: usize, r: usize) -> Result<bool, FreeError> {
    Ok(ap_norm(cfg, a, r)?.status.exact().is_some_and(|m| m <= n))
}

/// The preimage of a [`YBase`] under abelianization `F(X) → A(X)`.
#[derive(Debug, Clone)]
pub struct PullbackBase {
    base: YBase,
}

impl PullbackBase {
    pub fn new(base: YBase) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &YBase {
        &self.base
    }
}

impl GradedIdealBase for PullbackBase {
    type Elem = ReducedWord;
    type Grade = (usize, usize);

    fn kind(&self) -> IdealKind {
        IdealKind::Pullback
    }

    fn member(&self, w: &ReducedWord, g: (usize, usize)) -> bool {
        self.base.member(&abelianize(w, self.base.cfg.p), g)
    }

    fn grade_le(&self, g: (usize, usize), h: (usize, usize)) -> bool {
        self.base.grade_le(g, h)
    }

    fn difference_grade(&self, g: (usize, usize), h: (usize, usize)) -> (usize, usize) {
        self.base.difference_grade(g, h)
    }

    fn locate(&self, w: &ReducedWord) -> Option<(usize, usize)> {
        self.base.locate(&abelianize(w, self.base.cfg.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::metric;
    use crate::group::Prime;

    fn base(n: usize, p: u32) -> YBase {
        YBase::new(&FreeCoarseConfig::new(&metric::path(n), Prime::new(p).unwrap(), 0).unwrap()).unwrap()
    }

    #[test]
    fn documented_membership() {
        let b = base(8, 2);
        let p = Prime::TWO;
        assert!(b.member(&ApElement::zero(p), (0, 0)));
        let x3 = ApElement::generator(p, 3);
        assert!(b.member(&x3, (3, 1)));
        assert!(!b.member(&x3, (2, 1)));
        assert_eq!(b.locate(&x3), Some((3, 1)));
        let a = ApElement::from_terms(p, [(0, 1), (1, 1)]);
        let c = ApElement::from_terms(p, [(2, 1), (3, 1)]);
        assert!(b.member(&a, (1, 1)) && b.member(&c, (1, 1)));
        assert!(b.member(&a.sub(&c).unwrap(), b.difference_grade((1, 1), (1, 1))));
        assert_eq!(b.difference_grade((1, 1), (1, 1)), (2, 2));
    }

    #[test]
    fn membership_agrees_with_the_dispatcher() {
        for p in [2, 3] {
            let b = base(5, p);
            let cfg = b.config().clone();
            for a in ApElement::enumerate(cfg.p, 5) {
                for (n, r) in [(0, 1), (1, 1), (2, 2), (3, 1)] {
                    assert_eq!(ap_ideal_member(&cfg, &a, n, r).unwrap(), b.member(&a, (n, r)));
                }
            }
        }
    }

    #[test]
    fn pullback_ignores_conjugation() {
        let pb = PullbackBase::new(base(4, 2));
        let w = ReducedWord::quotient(0, 1);
        let g = ReducedWord::quotient(2, 3).multiply(&ReducedWord::generator(1));
        assert!(pb.member(&w, (1, 1)));
        assert!(pb.member(&w.conjugate_by(&g), (1, 1)));
        assert_eq!(pb.locate(&w), Some((1, 1)));
    }
}
