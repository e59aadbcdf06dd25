use serde::Serialize;

use super::{ap_norm_tjoin, ApNormOracle, FreeCoarseConfig, FreeError};
use crate::coarse::{Filtration, PointId, Window};
use crate::group::{extend_to_hom, ApElement, ApGroup, Prime, VarietyTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionDiscrepancy {
    pub x: PointId,
    pub y: PointId,
    pub r: usize,
    pub n: usize,
    pub in_grade: bool,
    pub in_power: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairNorm {
    pub x: PointId,
    pub y: PointId,
    pub r: usize,
    pub norm: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub radii: Vec<usize>,
    pub max_n: usize,
    pub checked: u64,
    pub discrepancies: Vec<RestrictionDiscrepancy>,
    pub norms: Vec<PairNorm>,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// For every pair `(x, y)`, radius `r` and `n ≤ max_n`: `x - y` lies in the
/// grade `(n, r)` iff `(x, y) ∈ levels(r)^n`. The grade side comes from the
/// enumeration oracle, the relation side from composing entourages.
pub fn restriction_check(
    cfg: &FreeCoarseConfig,
    radii: &[usize],
    max_n: usize,
) -> Result<RestrictionReport, FreeError> {
    let points = cfg.points();
    let mut report = RestrictionReport {
        radii: radii.to_vec(),
        max_n,
        checked: 0,
        discrepancies: Vec::new(),
        norms: Vec::new(),
    };
    for &r in radii {
        let oracle = ApNormOracle::new(cfg, r)?;
        let level = cfg.space().level(r);
        let powers: Vec<_> = (0..=max_n).map(|n| level.power(n)).collect();
        for x in 0..points {
            for y in 0..points {
                let norm = oracle.norm_value(&ApElement::difference(cfg.p, x, y));
                report.norms.push(PairNorm { x, y, r, norm });
                for (n, power) in powers.iter().enumerate() {
                    let in_grade = norm.is_some_and(|m| m <= n);
                    let in_power = power.contains(x, y);
                    report.checked += 1;
                    if in_grade != in_power {
                        report.discrepancies.push(RestrictionDiscrepancy { x, y, r, n, in_grade, in_power });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub checked: u64,
    pub witness: Option<String>,
}

/// Nothing outside the augmentation kernel is a sum of differences, and no
/// `x - y` lies in a grade through a nonzero shift `iz`.
pub fn augmentation_obstruction(cfg: &FreeCoarseConfig, r: usize) -> Result<ObstructionReport, FreeError> {
    let oracle = ApNormOracle::new(cfg, r)?;
    let mut checked = 0;
    for a in ApElement::enumerate(cfg.p, cfg.points()) {
        checked += 1;
        if a.augmentation() != 0 && oracle.kernel_norm(&a).is_some() {
            return Ok(ObstructionReport {
                checked,
                witness: Some(format!("{a} has augmentation {} but is a sum of differences", a.augmentation())),
            });
        }
    }
    let z = ApElement::generator(cfg.p, cfg.z);
    for x in 0..cfg.points() {
        for y in 0..cfg.points() {
            let d = ApElement::difference(cfg.p, x, y);
            for i in 1..cfg.p.get() {
                checked += 1;
                let rest = d.sub(&z.scale(i)).expect("same modulus");
                if let Some(n) = oracle.kernel_norm(&rest) {
                    return Ok(ObstructionReport {
                        checked,
                        witness: Some(format!("x{x} - x{y} lies in Y_{n} + {i}z")),
                    });
                }
            }
        }
    }
    Ok(ObstructionReport { checked, witness: None })
}

/// Target grade `(target_n, target_r)` absorbing the image of the source
/// grade `(n, r)`: the least radius `r' ≥ r` at which every image has a
/// norm, and the least `n'` there. `None` when no radius works.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradeImage {
    pub n: usize,
    pub r: usize,
    pub members: usize,
    pub target_n: Option<usize>,
    pub target_r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalReport {
    pub passed: bool,
    pub table: Vec<GradeImage>,
    pub counterexample: Option<String>,
    pub checked: u64,
}

/// Extends `images` (the image of each source point in the target's `A(Y)`)
/// to a homomorphism `A(X) → A(Y)` and, for every source grade `(n, r)` with
/// `n ≤ max_n`, `r ≤ max_r`, finds a target grade containing its image.
/// Radii are searched upward from `r`; past the target's last level they
/// change nothing.
pub fn universal_extension_check(
    source: &FreeCoarseConfig,
    target: &FreeCoarseConfig,
    images: &[ApElement],
    max_n: usize,
    max_r: usize,
) -> Result<UniversalReport, FreeError> {
    if images.len() != source.points() {
        return Err(FreeError::ImageCount { expected: source.points(), found: images.len() });
    }
    for a in images {
        target.check_element(a)?;
    }
    let group = ApGroup { p: target.p };
    let h = extend_to_hom(&group, images.to_vec(), VarietyTag::AbelianExpP(source.p))?;
    let top = target.space().top();
    let dst: Vec<ApNormOracle> = (0..=top).map(|r| ApNormOracle::new(target, r)).collect::<Result<_, _>>()?;
    let elements: Vec<(ApElement, Vec<Option<usize>>)> = ApElement::enumerate(source.p, source.points())
        .map(|a| {
            let image = h.apply_ap(&a).expect("variety checked at extension");
            let norms = dst.iter().map(|o| o.norm_value(&image)).collect();
            (a, norms)
        })
        .collect();
    let mut table = Vec::new();
    let mut counterexample = None;
    let mut checked = 0;
    for r in 0..=max_r {
        let src = ApNormOracle::new(source, r)?;
        let source_norms: Vec<Option<usize>> = elements.iter().map(|(a, _)| src.norm_value(a)).collect();
        for n in 0..=max_n {
            let members: Vec<usize> =
                (0..elements.len()).filter(|&i| source_norms[i].is_some_and(|s| s <= n)).collect();
            checked += members.len() as u64;
            let found = (r.min(top)..=top).find_map(|t| {
                members
                    .iter()
                    .try_fold(0, |best: usize, &i| elements[i].1[t].map(|m| best.max(m)))
                    .map(|best| (best, t))
            });
            if found.is_none() && counterexample.is_none() {
                let escaping = members.iter().find(|&&i| elements[i].1[top].is_none()).expect("some image escapes");
                counterexample = Some(format!(
                    "{} in grade ({n}, {r}) maps outside every target grade",
                    elements[*escaping].0
                ));
            }
            table.push(GradeImage {
                n,
                r,
                members: members.len(),
                target_n: found.map(|f| f.0),
                target_r: found.map(|f| f.1),
            });
        }
    }
    Ok(UniversalReport { passed: counterexample.is_none(), table, counterexample, checked })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub m: usize,
    pub points: usize,
    pub full_support_norm: Option<usize>,
    pub max_norm_oracle: Option<usize>,
    pub max_norm_tjoin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Largest norm in the free group over a single point.
    pub one_point_max_norm: Option<usize>,
}

/// Norms in `A_2(X)` over bounded spaces of `2m` points, `m ≤ max_m`, and
/// over the one-point space.
pub fn boundedness_growth(max_m: usize) -> Result<GrowthTable, FreeError> {
    let p = Prime::TWO;
    let mut rows = Vec::new();
    for m in 1..=max_m {
        let points = 2 * m;
        let space = Filtration::bounded(Window::indexed(points));
        let cfg = FreeCoarseConfig::new(&space, p, 0)?;
        let full = ApElement::from_terms(p, (0..points).map(|x| (x, 1)));
        let full_support_norm = ap_norm_tjoin(&cfg, &full, 1)?.status.exact();
        let oracle = ApNormOracle::new(&cfg, 1)?;
        let max_norm_oracle = oracle.all_norms().map(|(_, n)| n).max().flatten();
        let mut max_norm_tjoin = Some(0);
        for a in ApElement::enumerate(p, points) {
            let n = ap_norm_tjoin(&cfg, &a, 1)?.status.exact();
            max_norm_tjoin = max_norm_tjoin.zip(n).map(|(a, b)| a.max(b));
        }
        rows.push(GrowthRow { m, points, full_support_norm, max_norm_oracle, max_norm_tjoin });
    }
    let one = FreeCoarseConfig::new(&Filtration::bounded(Window::indexed(1)), p, 0)?;
    let one_point_max_norm = ApNormOracle::new(&one, 1)?.all_norms().map(|(_, n)| n).max().flatten();
    Ok(GrowthTable { rows, one_point_max_norm })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallGrowthRow {
    pub n: usize,
    pub r: usize,
    /// `|Y_{n,ε_r}|`.
    pub y_count: usize,
    /// `|Y_{n,ε_r} + {0, z, …, (p-1)z}|`.
    pub grade_count: usize,
}

/// Sizes of the grades around the identity, counted element by element.
pub fn ball_growth(cfg: &FreeCoarseConfig, radii: &[usize], max_n: usize) -> Result<Vec<BallGrowthRow>, FreeError> {
    let mut rows = Vec::new();
    for &r in radii {
        let oracle = ApNormOracle::new(cfg, r)?;
        let kernel: Vec<Option<usize>> = (0..oracle.size()).map(|i| oracle.index_norm(i)).collect();
        let shifted: Vec<Option<usize>> = oracle.all_norms().map(|(_, n)| n).collect();
        for n in 0..=max_n {
            let within = |v: &[Option<usize>]| v.iter().filter(|m| m.is_some_and(|m| m <= n)).count();
            rows.push(BallGrowthRow { n, r, y_count: within(&kernel), grade_count: within(&shifted) });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::metric;

    fn cfg(space: &Filtration, p: u32) -> FreeCoarseConfig {
        FreeCoarseConfig::new(space, Prime::new(p).unwrap(), 0).unwrap()
    }

    #[test]
    fn restriction_on_the_path_gives_distances() {
        let c = cfg(&metric::path(8), 2);
        let report = restriction_check(&c, &[1], 8).unwrap();
        assert!(report.passed());
        for row in &report.norms {
            assert_eq!(row.norm, Some(row.x.abs_diff(row.y)));
        }
    }

    #[test]
    fn restriction_on_the_grid_gives_l1_distance() {
        let c = cfg(&metric::grid(3, 3), 3);
        let report = restriction_check(&c, &[1], 4).unwrap();
        assert!(report.passed());
        for row in &report.norms {
            let d = (row.x / 3).abs_diff(row.y / 3) + (row.x % 3).abs_diff(row.y % 3);
            assert_eq!(row.norm, Some(d));
        }
    }

    #[test]
    fn obstruction_holds() {
        for p in [2, 3] {
            let c = cfg(&metric::path(6), p);
            assert_eq!(augmentation_obstruction(&c, 2).unwrap().witness, None);
        }
    }

    #[test]
    fn identity_extension_keeps_grades() {
        let c = cfg(&metric::path(5), 2);
        let images: Vec<_> = (0..5).map(|x| ApElement::generator(c.p, x)).collect();
        let report = universal_extension_check(&c, &c, &images, 4, 2).unwrap();
        assert!(report.passed);
        for row in &report.table {
            assert!(row.target_n.unwrap() <= row.n);
            assert_eq!(row.target_r, Some(row.r));
        }
        let row = report.table.iter().find(|g| g.n == 3 && g.r == 1).unwrap();
        assert_eq!(row.target_n, Some(3));
    }

    #[test]
    fn constant_and_trivial_targets() {
        let src = cfg(&metric::path(6), 2);
        let one = cfg(&Filtration::bounded(Window::indexed(1)), 2);
        let images = vec![ApElement::generator(one.p, 0); 6];
        let report = universal_extension_check(&src, &one, &images, 3, 1).unwrap();
        assert!(report.table.iter().all(|g| g.target_n == Some(0)));
        let tgt = cfg(&metric::path(4), 2);
        let images = vec![ApElement::generator(tgt.p, 0); 6];
        let report = universal_extension_check(&src, &tgt, &images, 3, 1).unwrap();
        assert!(report.table.iter().all(|g| g.target_n == Some(0)));
    }

    #[test]
    fn disconnected_target_yields_counterexample() {
        let src = cfg(&metric::path(3), 2);
        let tgt = cfg(&Filtration::discrete(Window::indexed(3)), 2);
        let images: Vec<_> = (0..3).map(|x| ApElement::generator(tgt.p, x)).collect();
        let report = universal_extension_check(&src, &tgt, &images, 2, 1).unwrap();
        assert!(!report.passed);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn growth_table() {
        let table = boundedness_growth(3).unwrap();
        for row in &table.rows {
            assert_eq!(row.full_support_norm, Some(row.m));
            assert_eq!(row.max_norm_oracle, Some(row.m));
            assert_eq!(row.max_norm_tjoin, Some(row.m));
        }
        assert!(table.one_point_max_norm.unwrap() <= 1);
    }

    #[test]
    fn ball_counts() {
        let c = cfg(&metric::path(6), 2);
        let rows = ball_growth(&c, &[1], 6).unwrap();
        assert_eq!(rows[0].y_count, 1);
        assert_eq!(rows[0].grade_count, 2);
        assert!(rows.windows(2).all(|w| w[0].y_count <= w[1].y_count));
        assert_eq!(rows.last().unwrap().y_count, 32);
        assert_eq!(rows.last().unwrap().grade_count, 64);
    }

    #[test]
    fn enlarging_the_window_never_raises_a_norm() {
        let small = cfg(&metric::path(5), 2);
        let big = cfg(&metric::path(7), 2);
        let (o_small, o_big) = (ApNormOracle::new(&small, 1).unwrap(), ApNormOracle::new(&big, 1).unwrap());
        for a in ApElement::enumerate(small.p, 5) {
            assert!(o_big.norm_value(&a) <= o_small.norm_value(&a));
        }
    }

    #[test]
    fn larger_radius_never_raises_a_norm() {
        let c = cfg(&metric::grid(2, 3), 3);
        let o: Vec<_> = (0..4).map(|r| ApNormOracle::new(&c, r).unwrap()).collect();
        for a in ApElement::enumerate(c.p, 6) {
            for r in 1..4 {
                let (lo, hi) = (o[r].norm_value(&a), o[r - 1].norm_value(&a));
                assert!(hi.is_none() || lo <= hi);
            }
        }
    }
}
