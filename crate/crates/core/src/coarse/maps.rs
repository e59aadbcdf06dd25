use serde::Serialize;

use super::filtration::{Coverage, Filtration};
use super::window::PointId;
use super::CoarseError;

/// A total map between two windows, by point id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    images: Vec<PointId>,
}

impl PointMap {
    pub fn new(images: Vec<PointId>) -> Self {
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn constant(n: usize, target: PointId) -> Self {
        Self { images: vec![target; n] }
    }

    pub fn apply(&self, x: PointId) -> PointId {
        self.images[x]
    }

    pub fn images(&self) -> &[PointId] {
        &self.images
    }

    pub fn then(&self, g: &PointMap) -> PointMap {
        PointMap { images: self.images.iter().map(|&y| g.apply(y)).collect() }
    }

    fn validate(&self, src: &Filtration, dst: &Filtration) -> Result<(), CoarseError> {
        if self.images.len() != src.window().len() {
            return Err(CoarseError::MapDomain { expected: src.window().len(), found: self.images.len() });
        }
        for &y in &self.images {
            dst.window().check(y)?;
        }
        Ok(())
    }
}

/// `r ↦ r'` on radii `0..=range`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modulus {
    map: Vec<usize>,
}

impl Modulus {
    pub fn from_vec(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn get(&self, r: usize) -> Option<usize> {
        self.map.get(r).copied()
    }

    /// Largest radius the modulus is defined on.
    pub fn range(&self) -> usize {
        self.map.len().saturating_sub(1)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_monotone(&self) -> bool {
        self.map.windows(2).all(|w| w[0] <= w[1])
    }

    /// `r ↦ next(self(r))`, defined where both sides are.
    pub fn then(&self, next: &Modulus) -> Modulus {
        Modulus { map: self.map.iter().map_while(|&r| next.get(r)).collect() }
    }
}

/// A pair in `levels(radius)` whose image escapes every tested target level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub radius: usize,
    pub pair: (PointId, PointId),
    pub image: (PointId, PointId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusOutcome {
    Modulus(Modulus),
    Counterexample(Counterexample),
}

impl ModulusOutcome {
    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            ModulusOutcome::Modulus(m) => Some(m),
            ModulusOutcome::Counterexample(_) => None,
        }
    }
}

/// For each `r ≤ range`, the least `r'` with `(f × f)(levels(r)) ⊆ levels'(r')`.
pub fn coarse_modulus(
    f: &PointMap,
    src: &Filtration,
    dst: &Filtration,
    range: usize,
) -> Result<ModulusOutcome, CoarseError> {
    f.validate(src, dst)?;
    let mut map = Vec::with_capacity(range + 1);
    let mut floor = 0;
    for r in 0..=range {
        // Levels are nested, so the answer for r is at least the one for r - 1.
        let mut needed = floor;
        for (x, y) in src.level(r).pairs() {
            let (fx, fy) = (f.apply(x), f.apply(y));
            while !dst.level(needed).contains(fx, fy) {
                if needed >= dst.top() {
                    return Ok(ModulusOutcome::Counterexample(Counterexample {
                        radius: r,
                        pair: (x, y),
                        image: (fx, fy),
                    }));
                }
                needed += 1;
            }
        }
        map.push(needed);
        floor = needed;
    }
    Ok(ModulusOutcome::Modulus(Modulus { map }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymorphismReport {
    pub passed: bool,
    /// Two points with the same image.
    pub collision: Option<(PointId, PointId)>,
    /// A target point outside the image.
    pub missed: Option<PointId>,
    pub forward: Option<ModulusOutcome>,
    pub backward: Option<ModulusOutcome>,
}

/// Checks that `f` is a bijection and that `f` and `f⁻¹` both admit a
/// modulus on radii `0..=range`.
pub fn check_asymorphism(
    f: &PointMap,
    src: &Filtration,
    dst: &Filtration,
    range: usize,
) -> Result<AsymorphismReport, CoarseError> {
    f.validate(src, dst)?;
    let mut preimage: Vec<Option<PointId>> = vec![None; dst.window().len()];
    let mut collision = None;
    for x in src.window().points() {
        let slot = &mut preimage[f.apply(x)];
        match slot {
            Some(prev) if collision.is_none() => collision = Some((*prev, x)),
            Some(_) => {}
            None => *slot = Some(x),
        }
    }
    let missed = preimage.iter().position(Option::is_none);
    if collision.is_some() || missed.is_some() {
        return Ok(AsymorphismReport { passed: false, collision, missed, forward: None, backward: None });
    }
    let inverse = PointMap::new(preimage.into_iter().map(|p| p.expect("bijective")).collect());
    let forward = coarse_modulus(f, src, dst, range)?;
    let backward = coarse_modulus(&inverse, dst, src, range)?;
    let passed = forward.modulus().is_some() && backward.modulus().is_some();
    Ok(AsymorphismReport { passed, collision, missed, forward: Some(forward), backward: Some(backward) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub passed: bool,
    pub source_coverage: CoverageReport,
    pub target_coverage: CoverageReport,
    pub asymorphism: Option<AsymorphismReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub radius: Option<usize>,
    pub uncovered: Option<PointId>,
}

impl From<Coverage> for CoverageReport {
    fn from(c: Coverage) -> Self {
        match c {
            Coverage::Covered { radius } => Self { radius: Some(radius), uncovered: None },
            Coverage::Uncovered { point } => Self { radius: None, uncovered: Some(point) },
        }
    }
}

/// Checks a proposed coarse-equivalence witness: `ys` large in `src`,
/// `ys_dst` large in `dst`, and `f` (given as `f[i]` = image of `ys[i]`, in
/// `dst` ids) an asymorphism between the two subspaces.
pub fn check_coarse_equivalence_witness(
    ys: &[PointId],
    ys_dst: &[PointId],
    f: &[PointId],
    src: &Filtration,
    dst: &Filtration,
    range: usize,
) -> Result<EquivalenceReport, CoarseError> {
    if f.len() != ys.len() {
        return Err(CoarseError::MapDomain { expected: ys.len(), found: f.len() });
    }
    let source_coverage: CoverageReport = src.is_large(ys)?.into();
    let target_coverage: CoverageReport = dst.is_large(ys_dst)?.into();
    if source_coverage.radius.is_none() || target_coverage.radius.is_none() {
        return Ok(EquivalenceReport { passed: false, source_coverage, target_coverage, asymorphism: None });
    }
    let sub_src = src.restrict(ys)?;
    let sub_dst = dst.restrict(ys_dst)?;
    let mut sorted_src = ys.to_vec();
    sorted_src.sort_unstable();
    sorted_src.dedup();
    let mut sorted_dst = ys_dst.to_vec();
    sorted_dst.sort_unstable();
    sorted_dst.dedup();
    let mut images = Vec::with_capacity(sorted_src.len());
    for &y in &sorted_src {
        let i = ys.iter().position(|&p| p == y).expect("sorted from ys");
        let target = sorted_dst
            .binary_search(&f[i])
            .map_err(|_| CoarseError::UnknownPoint(f[i]))?;
        images.push(target);
    }
    let report = check_asymorphism(&PointMap::new(images), &sub_src, &sub_dst, range)?;
    Ok(EquivalenceReport {
        passed: report.passed,
        source_coverage,
        target_coverage,
        asymorphism: Some(report),
    })
}

#[cfg(test)]
mod tests {
    use super::super::metric::{metric_filtration, path};
    use super::super::window::Window;
    use super::*;

    fn symmetric_line(k: i64) -> Filtration {
        let pts: Vec<i64> = (-k..=k).collect();
        let dist: Vec<Vec<u64>> =
            pts.iter().map(|a| pts.iter().map(|b| a.abs_diff(*b)).collect()).collect();
        let window = std::sync::Arc::new(Window::new(pts.iter().map(|p| p.to_string())).unwrap());
        metric_filtration(window, &dist).unwrap()
    }

    #[test]
    fn identity_modulus() {
        let f = path(6);
        let m = coarse_modulus(&PointMap::identity(6), &f, &f, 5).unwrap();
        assert_eq!(m.modulus().unwrap().as_slice(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn doubling_map_doubles_radii() {
        let src = path(5);
        let dst = path(9);
        let double = PointMap::new((0..5).map(|i| 2 * i).collect());
        let m = coarse_modulus(&double, &src, &dst, 4).unwrap();
        assert_eq!(m.modulus().unwrap().as_slice(), &[0, 2, 4, 6, 8]);
    }

    #[test]
    fn constant_map_has_zero_modulus() {
        let f = path(6);
        let m = coarse_modulus(&PointMap::constant(6, 3), &f, &f, 5).unwrap();
        assert_eq!(m.modulus().unwrap().as_slice(), &[0; 6]);
    }

    #[test]
    fn map_into_discrete_space_has_counterexample() {
        let src = path(3);
        let dst = Filtration::discrete(Window::indexed(3));
        let out = coarse_modulus(&PointMap::identity(3), &src, &dst, 2).unwrap();
        assert_eq!(
            out,
            ModulusOutcome::Counterexample(Counterexample { radius: 1, pair: (0, 1), image: (0, 1) })
        );
    }

    #[test]
    fn reflection_is_an_asymorphism() {
        let f = symmetric_line(4);
        let flip = PointMap::new((0..9).rev().collect());
        let report = check_asymorphism(&flip, &f, &f, 8).unwrap();
        assert!(report.passed);
        assert_eq!(
            report.forward.unwrap().modulus().unwrap().as_slice(),
            (0..=8).collect::<Vec<_>>()
        );
    }

    #[test]
    fn non_injective_map_reports_collision() {
        let f = path(4);
        let report = check_asymorphism(&PointMap::new(vec![0, 1, 1, 3]), &f, &f, 3).unwrap();
        assert!(!report.passed);
        assert_eq!(report.collision, Some((1, 2)));
        assert_eq!(report.missed, Some(2));
    }

    #[test]
    fn product_with_a_point_is_asymorphic_to_the_factor() {
        let f = path(5);
        let point = Filtration::discrete(Window::indexed(1));
        let prod = f.product(&point);
        let report = check_asymorphism(&PointMap::identity(5), &f, &prod, 4).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn equivalence_witnesses() {
        let f = path(6);
        let all: Vec<_> = (0..6).collect();
        let id = check_coarse_equivalence_witness(&all, &all, &all, &f, &f, 5).unwrap();
        assert!(id.passed);

        // A bounded space and a single point.
        let bounded = Filtration::bounded(Window::indexed(5));
        let point = Filtration::discrete(Window::indexed(1));
        let r = check_coarse_equivalence_witness(&[2], &[0], &[0], &bounded, &point, 3).unwrap();
        assert!(r.passed);
        assert_eq!(r.source_coverage.radius, Some(1));

        let disc = Filtration::discrete(Window::indexed(3));
        let bad = check_coarse_equivalence_witness(&[0], &[0], &[0], &disc, &point, 1).unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.source_coverage.uncovered, Some(1));
    }

    #[test]
    fn composite_modulus_is_dominated() {
        let a = path(4);
        let b = path(7);
        let c = path(13);
        let f = PointMap::new(vec![0, 2, 4, 6]);
        let g = PointMap::new((0..7).map(|i| 2 * i).collect());
        let mf = coarse_modulus(&f, &a, &b, 3).unwrap().modulus().cloned().unwrap();
        let mg = coarse_modulus(&g, &b, &c, 6).unwrap().modulus().cloned().unwrap();
        let mgf = coarse_modulus(&f.then(&g), &a, &c, 3).unwrap().modulus().cloned().unwrap();
        let bound = mf.then(&mg);
        for r in 0..=3 {
            assert!(mgf.get(r).unwrap() <= bound.get(r).unwrap());
        }
    }
}
