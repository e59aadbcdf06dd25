use super::{GradedIdealBase, IdealKind};
use crate::coarse::PointId;
use crate::group::{ApElement, GroupError, GroupLaw, Prime};

/// The base `F_m + B(g)` on `G = A(points)` extending a base `B` of the
/// subgroup `H` spanned by `h_coords`. `F_m` is the finite subgroup of
/// elements supported on the first `m` coordinates, which is cofinal among
/// finite subsets of `G`.
#[derive(Debug, Clone)]
pub struct ExtensionBase<B> {
    base: B,
    p: Prime,
    points: usize,
    in_h: Vec<bool>,
}

/// Extends a base on the subgroup of `group` spanned by `h_coords`.
pub fn extend_ideal_abelian<B, G>(
    base: B,
    group: &G,
    p: Prime,
    points: usize,
    h_coords: &[PointId],
) -> Result<ExtensionBase<B>, GroupError>
where
    B: GradedIdealBase<Elem = ApElement>,
    G: GroupLaw<Elem = ApElement>,
{
    if !group.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let mut in_h = vec![false; points];
    for &x in h_coords {
        if x >= points {
            return Err(GroupError::ImageCount { expected: points, found: x + 1 });
        }
        in_h[x] = true;
    }
    Ok(ExtensionBase { base, p, points, in_h })
}

impl<B: GradedIdealBase<Elem = ApElement>> ExtensionBase<B> {
    pub fn in_subgroup(&self, a: &ApElement) -> bool {
        a.support().all(|x| x < self.points && self.in_h[x])
    }

    pub fn base(&self) -> &B {
        &self.base
    }
}

impl<B: GradedIdealBase<Elem = ApElement>> GradedIdealBase for ExtensionBase<B> {
    type Elem = ApElement;
    type Grade = (usize, B::Grade);

    fn kind(&self) -> IdealKind {
        IdealKind::Extension
    }

    /// Whether `x = a + b` with `a ∈ F_m`, `b ∈ H ∩ B(g)`. The coordinates of
    /// `a` off `H` are forced to be those of `x`; its coordinates in
    /// `H ∩ [0, m)` are enumerated.
    fn member(&self, x: &ApElement, (m, g): Self::Grade) -> bool {
        if x.modulus() != self.p || x.support().any(|y| y >= self.points) {
            return false;
        }
        if x.support().any(|y| !self.in_h[y] && y >= m) {
            return false;
        }
        let h_part = ApElement::from_terms(
            self.p,
            x.terms().iter().filter(|t| self.in_h[t.0]).map(|&(y, c)| (y, i64::from(c))),
        );
        let free: Vec<PointId> = (0..m.min(self.points)).filter(|&y| self.in_h[y]).collect();
        let q = self.p.get() as usize;
        let choices = q.checked_pow(free.len() as u32).unwrap_or(usize::MAX);
        (0..choices).any(|mut code| {
            let shift = ApElement::from_terms(
                self.p,
                free.iter().map(|&y| {
                    let c = code % q;
                    code /= q;
                    (y, c as i64)
                }),
            );
            let b = h_part.sub(&shift).expect("same modulus");
            self.base.member(&b, g)
        })
    }

    fn grade_le(&self, (m, g): Self::Grade, (n, h): Self::Grade) -> bool {
        m <= n && self.base.grade_le(g, h)
    }

    fn difference_grade(&self, (m, g): Self::Grade, (n, h): Self::Grade) -> Self::Grade {
        (m.max(n), self.base.difference_grade(g, h))
    }

    fn locate(&self, x: &ApElement) -> Option<Self::Grade> {
        if x.modulus() != self.p || x.support().any(|y| y >= self.points) {
            return None;
        }
        let m = x.support().filter(|&y| !self.in_h[y]).last().map_or(0, |y| y + 1);
        let h_part = ApElement::from_terms(
            self.p,
            x.terms().iter().filter(|t| self.in_h[t.0]).map(|&(y, c)| (y, i64::from(c))),
        );
        match self.base.locate(&h_part) {
            Some(g) => Some((m, g)),
            None => {
                let g = self.base.locate(&ApElement::zero(self.p))?;
                Some((x.support().last().map_or(0, |y| y + 1), g))
            }
        }
    }
}
