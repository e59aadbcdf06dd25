use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::{ConfigError, SpaceConfig};
use super::{HarnessError, Table};
use crate::coarse::{coarse_modulus, metric, CompBound, Filtration, PointMap};
use crate::free::{
    ap_norm_tjoin, augmentation_obstruction, ball_growth, boundedness_growth, core_set, product_of,
    restriction_check, universal_extension_check, ApNormOracle, Certificate, FreeCoarseConfig, NormStatus,
    UniversalReport, WordSearcher,
};
use crate::group::{ApElement, ApGroup, FlipGroup, FreeGroup, GroupLaw, Letter, Prime, ReducedWord, VarietyTag};
use crate::ideal::{
    check_ideal_axioms, check_invariance, check_left_coarse, check_right_coarse, difference_set,
    entourage_from_ideal, extend_ideal_abelian, flip_obstruction_check, ideal_filtration, FiniteSets, FlipBase,
    GradedIdealBase, GroupWindow, PullbackBase, YBase,
};
use crate::report::CheckReport;

/// Name of the seeded generator used by the sampled suites.
pub const GENERATOR: &str = "chacha8";

/// Largest group enumerated as a window by the group-level suites.
const GROUP_WINDOW_LIMIT: usize = 4096;

pub(crate) struct Outcome {
    pub checks: Vec<CheckReport>,
    pub tables: Vec<Table>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(String::new, |n| n.to_string())
}

fn group_size(p: Prime, points: usize) -> Option<usize> {
    (p.get() as usize).checked_pow(points as u32).filter(|&s| s <= GROUP_WINDOW_LIMIT)
}

fn ap_window(p: Prime, points: usize, suite: &str) -> Result<GroupWindow<ApElement>, HarnessError> {
    if group_size(p, points).is_none() {
        return Err(ConfigError::new(
            "space",
            format!("suite {suite} enumerates A_p(X) and needs p^|X| <= {GROUP_WINDOW_LIMIT}"),
        )
        .into());
    }
    Ok(GroupWindow::new(&ApGroup { p }, ApElement::enumerate(p, points).collect())?)
}

fn grade_range(max_n: usize, max_r: usize) -> Vec<(usize, usize)> {
    (0..=max_n).flat_map(|n| (0..=max_r).map(move |r| (n, r))).collect()
}

pub(crate) fn lemma2_restriction(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let fc = cfg.free_config()?;
    let report = restriction_check(&fc, &cfg.radii, cfg.max_n)?;
    let window = fc.space().window().clone();
    let witness = report.discrepancies.first().map(|d| {
        format!(
            "{} - {} at r = {}, n = {}: grade {} but relation power {}",
            window.label(d.x),
            window.label(d.y),
            d.r,
            d.n,
            d.in_grade,
            d.in_power
        )
    });
    let range = format!(
        "exhaustive: all {} ordered pairs, r in {:?}, n <= {}, p = {}",
        fc.points() * fc.points(),
        cfg.radii,
        cfg.max_n,
        cfg.p
    );
    let check = CheckReport::from_witness("restriction", range, report.checked, witness)
        .with_details(json!({ "discrepancies": report.discrepancies.len() }));
    let rows = report
        .norms
        .iter()
        .map(|pn| {
            let a = ApElement::difference(fc.p, pn.x, pn.y);
            vec![a.render(&window), pn.r.to_string(), opt(pn.norm), opt(pn.norm), "oracle".to_owned()]
        })
        .collect();
    Ok(Outcome { checks: vec![check], tables: vec![Table::norms(rows)] })
}

/// `k` distinct points of `Z²` drawn from a square big enough to hold them
/// with room to spare.
pub fn random_l1_points(rng: &mut impl Rng, k: usize) -> Vec<[i64; 2]> {
    let side = ((3 * k) as f64).sqrt().ceil() as usize + 1;
    let mut cells = sample(rng, side * side, k).into_vec();
    cells.sort_unstable();
    cells.into_iter().map(|c| [(c / side) as i64, (c % side) as i64]).collect()
}

/// Compares the matching solver with the enumeration oracle on every
/// augmentation-zero element; returns `(checked, first mismatch)`.
pub fn compare_tjoin_with_oracle(
    fc: &FreeCoarseConfig,
    r: usize,
) -> Result<(u64, usize, Option<String>), HarnessError> {
    let oracle = ApNormOracle::new(fc, r)?;
    let window = fc.space().window().clone();
    let mut checked = 0;
    let mut mismatches = 0;
    let mut first = None;
    for a in ApElement::enumerate(fc.p, fc.points()).filter(|a| a.augmentation() == 0) {
        checked += 1;
        let want = oracle.norm_value(&a);
        let got = ap_norm_tjoin(fc, &a, r)?.status.exact();
        if want != got {
            mismatches += 1;
            first.get_or_insert_with(|| {
                format!("{} at r = {r}: oracle {:?}, tjoin {:?}", a.render(&window), want, got)
            });
        }
    }
    Ok((checked, mismatches, first))
}

pub(crate) fn oracle_vs_tjoin(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    if cfg.p != 2 {
        return Err(ConfigError::new("p", "the oracle-vs-tjoin suite needs p = 2").into());
    }
    let mut spaces: Vec<(String, Filtration)> = vec![("configured".to_owned(), cfg.filtration()?)];
    if cfg.random_sets > 0 {
        let mut g = rng(cfg.require_seed("oracle-vs-tjoin")?);
        for i in 0..cfg.random_sets {
            let pts = random_l1_points(&mut g, cfg.random_set_points);
            let f = metric::l1_points(&pts).map_err(|e| ConfigError::new("random_set_points", e.to_string()))?;
            spaces.push((format!("random-l1-{i}"), f));
        }
    }
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (name, space) in &spaces {
        let fc = FreeCoarseConfig::new(space, Prime::TWO, 0)?;
        let mut checked = 0;
        let mut witness = None;
        for &r in &cfg.radii {
            let (c, mismatches, first) = compare_tjoin_with_oracle(&fc, r)?;
            checked += c;
            rows.push(vec![name.clone(), fc.points().to_string(), r.to_string(), c.to_string(), mismatches.to_string()]);
            if witness.is_none() {
                witness = first;
            }
        }
        let range = format!(
            "exhaustive: all augmentation-0 elements of A_2(X), |X| = {}, r in {:?}",
            fc.points(),
            cfg.radii
        );
        checks.push(CheckReport::from_witness(format!("tjoin-equals-oracle/{name}"), range, checked, witness));
    }
    let table = Table::new("agreement.csv", &["space", "points", "r", "elements", "mismatches"], rows);
    Ok(Outcome { checks, tables: vec![table] })
}

pub(crate) fn ideal_axioms(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let fc = cfg.free_config()?;
    let p = fc.p;
    let window = ap_window(p, fc.points(), "ideal-axioms")?;
    let elements = window.elements().to_vec();
    let base = YBase::new(&fc)?;
    let grades = grade_range(cfg.axiom_max_n, cfg.axiom_max_r);
    let group = ApGroup { p };
    let y = check_ideal_axioms(&base, &group, &grades, &elements, true);
    let range = format!(
        "exhaustive: all {} elements, grades n <= {}, r <= {}, differences predicted at (n + n', comp(r, r'))",
        elements.len(),
        cfg.axiom_max_n,
        cfg.axiom_max_r
    );
    let mut checks = vec![CheckReport::from_witness(
        "y-base-axioms",
        range,
        y.checked,
        y.violation.as_ref().map(|v| format!("{}: {}", v.axiom, v.detail)),
    )];

    let finite = FiniteSets { p };
    let f_grades: Vec<usize> = (0..=fc.points()).collect();
    let f = check_ideal_axioms(&finite, &group, &f_grades, &elements, true);
    checks.push(CheckReport::from_witness(
        "finite-sets-axioms",
        format!("exhaustive: all {} elements, prefix subgroups F_0..F_{}", elements.len(), fc.points()),
        f.checked,
        f.violation.as_ref().map(|v| format!("{}: {}", v.axiom, v.detail)),
    ));

    let pullback = PullbackBase::new(base.clone());
    let words = FreeGroup::words_up_to(fc.points(), 2);
    let inv = check_invariance(&pullback, &FreeGroup, &grade_range(1, 1), &words, &words);
    let witness = if !inv.passed {
        inv.escape.as_ref().map(|e| format!("grade {} escapes under {}", e.grade, e.conjugator))
    } else if !inv.same_grade {
        Some("a conjugated grade left its own grade".to_owned())
    } else {
        None
    };
    checks.push(CheckReport::from_witness(
        "pullback-invariance",
        format!("words and conjugators of length <= 2 ({} each), grades n, r <= 1", words.len()),
        inv.checked,
        witness,
    ));

    let table = ball_table(&fc, &cfg.radii, cfg.max_n)?;
    Ok(Outcome { checks, tables: vec![table] })
}

/// `balls.csv`: grade sizes around the identity.
pub fn ball_table(fc: &FreeCoarseConfig, radii: &[usize], max_n: usize) -> Result<Table, HarnessError> {
    let rows = ball_growth(fc, radii, max_n)?
        .iter()
        .map(|b| vec![b.n.to_string(), b.r.to_string(), b.y_count.to_string(), b.grade_count.to_string()])
        .collect();
    Ok(Table::new("balls.csv", &["n", "r", "y_count", "grade_count"], rows))
}

pub(crate) fn augmentation(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let fc = cfg.free_config()?;
    let mut checked = 0;
    let mut witness = None;
    for &r in &cfg.radii {
        let rep = augmentation_obstruction(&fc, r)?;
        checked += rep.checked;
        if witness.is_none() {
            witness = rep.witness.map(|w| format!("r = {r}: {w}"));
        }
    }
    let range = format!(
        "exhaustive: all {}^{} elements and all shifted differences, r in {:?}",
        cfg.p,
        fc.points(),
        cfg.radii
    );
    Ok(Outcome { checks: vec![CheckReport::from_witness("augmentation-obstruction", range, checked, witness)], tables: vec![] })
}

fn flip_translators(g: &FlipGroup) -> Vec<crate::group::FlipElement> {
    let n = i64::from(g.half_width());
    let mut out = vec![g.identity(), g.phi()];
    for i in -n..=n {
        let e = g.unit(i).expect("index in the window");
        out.push(e);
        out.push(g.op(&e, &g.phi()));
    }
    out
}

pub(crate) fn coarse_group(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let fc = cfg.free_config()?;
    let p = fc.p;
    let group = ApGroup { p };
    let gw = ap_window(p, fc.points(), "coarse-group")?;
    let base = YBase::new(&fc)?;
    let chain: Vec<(usize, usize)> = (0..=cfg.coarse_levels).map(|k| (k, k)).collect();
    let mut checks = Vec::new();

    let mut checked = 0;
    let mut witness = None;
    for &g in &chain {
        let e = entourage_from_ideal(&base, g, &gw, &group);
        for x in gw.window().points() {
            checked += 1;
            let mut want: Vec<usize> = gw
                .elements()
                .iter()
                .filter(|a| base.member(a, g))
                .filter_map(|a| gw.position(&group.op(a, gw.element(x))))
                .collect();
            want.sort_unstable();
            want.dedup();
            if e.ball(x)? != want && witness.is_none() {
                witness = Some(format!("ball of {:?} at grade {g:?} is not the translate A x", gw.element(x)));
            }
        }
    }
    checks.push(CheckReport::from_witness(
        "balls-are-translates",
        format!("exhaustive: {} points, grades {:?}", gw.len(), chain),
        checked,
        witness,
    ));

    let filtration = ideal_filtration(&base, &gw, &group, &chain, CompBound::Sum)?;
    let all: Vec<usize> = gw.window().points().collect();
    for report in [
        check_left_coarse(&gw, &group, &filtration, &all, cfg.coarse_levels)?,
        check_right_coarse(&gw, &group, &filtration, &all, cfg.coarse_levels)?,
    ] {
        let witness = match (&report.witness, report.same_grade) {
            (Some(w), _) => Some(format!("{w:?}")),
            (None, false) => Some(format!("modulus {:?} exceeds the input grade", report.modulus)),
            (None, true) => None,
        };
        let side = serde_json::to_value(report.side)?;
        let name = format!("{}-coarse/abelian", side.as_str().unwrap_or("side"));
        let range = format!("all {} translators, chain {:?}", gw.len(), chain);
        checks.push(
            CheckReport::from_witness(name, range, report.translators as u64, witness)
                .with_details(serde_json::to_value(&report)?),
        );
    }

    let fg = FlipGroup::new(cfg.flip_half_width)?;
    let fbase = FlipBase::new(fg);
    let elements: Vec<_> = fg.elements().collect();
    let grades = fbase.grades();
    let inv = check_invariance(&fbase, &fg, &grades, &elements, &[fg.phi()]);
    let range = format!("exhaustive: {} elements, grades H_m for m in {:?}, conjugator φ", elements.len(), grades);
    let check = match &inv.escape {
        Some(_) => CheckReport::pass("flip-invariance-escape", range, inv.checked),
        None => CheckReport::fail("flip-invariance-escape", range, inv.checked, "every conjugated grade fit a tested grade"),
    };
    checks.push(check.with_details(serde_json::to_value(&inv.escape)?));

    // The smallest grade H_{-N} is left out of the window, so a singleton
    // supported at -N lies in no tested grade.
    let axioms = check_ideal_axioms(&fbase, &fg, &grades, &elements, false);
    checks.push(CheckReport::from_witness(
        "flip-base-axioms",
        format!("exhaustive: {} elements, grades {:?}, singletons not checked", elements.len(), grades),
        axioms.checked,
        axioms.violation.map(|v| format!("{}: {}", v.axiom, v.detail)),
    ));

    let fw = GroupWindow::new(&fg, elements)?;
    let ff = ideal_filtration(&fbase, &fw, &fg, &grades, CompBound::Max)?;
    let translators: Vec<usize> =
        flip_translators(&fg).iter().map(|t| fw.position(t).expect("translators lie in the window")).collect();
    let range = ff.top();
    let right = check_right_coarse(&fw, &fg, &ff, &translators, range)?;
    let left = check_left_coarse(&fw, &fg, &ff, &translators, range)?;
    let tested = format!("translators e, φ, e_i, e_i φ ({}), radii 0..={range}", translators.len());
    checks.push(
        CheckReport::from_witness(
            "right-coarse/flip",
            tested.clone(),
            right.translators as u64,
            (!right.passed).then(|| format!("{:?}", right.witness)),
        )
        .with_details(serde_json::to_value(&right)?),
    );
    let left_check = match &left.witness {
        Some(_) => CheckReport::pass("left-escape/flip", tested, left.translators as u64),
        None => CheckReport::fail("left-escape/flip", tested, left.translators as u64, "left translations stayed coarse"),
    };
    checks.push(left_check.with_details(serde_json::to_value(&left)?));

    let obstruction = flip_obstruction_check(&fg);
    checks.push(
        CheckReport::from_witness(
            "flip-obstruction",
            format!("exhaustive: all {} vectors of H^({})", obstruction.window_size, cfg.flip_half_width),
            obstruction.vectors_checked,
            (!obstruction.passed).then(|| format!("{obstruction:?}")),
        )
        .with_details(serde_json::to_value(&obstruction)?),
    );
    Ok(Outcome { checks, tables: vec![] })
}

pub(crate) fn example1(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let fg = FlipGroup::new(cfg.flip_half_width)?;
    let r = flip_obstruction_check(&fg);
    let check = CheckReport::from_witness(
        "split-into-h0-and-conjugate",
        format!("exhaustive: all {} vectors of H^({})", r.window_size, cfg.flip_half_width),
        r.vectors_checked,
        r.split_failure.clone().or_else(|| {
            (r.closure_size != r.window_size)
                .then(|| format!("closure has {} elements of {}", r.closure_size, r.window_size))
        }),
    )
    .with_details(serde_json::to_value(&r)?);
    Ok(Outcome { checks: vec![check], tables: vec![] })
}

pub(crate) fn prop3_extension(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let p = cfg.prime()?;
    let rank = cfg.extension_rank;
    let sub = cfg.extension_sub_rank;
    let gw = ap_window(p, rank, "prop3-extension")?;
    let group = ApGroup { p };
    let h_cfg = FreeCoarseConfig::new(&metric::path(sub), p, 0)?;
    let base = YBase::new(&h_cfg)?;
    let h_coords: Vec<usize> = (0..sub).collect();
    let ext = extend_ideal_abelian(base.clone(), &group, p, rank, &h_coords)?;
    let base_grades = grade_range(cfg.axiom_max_n, cfg.axiom_max_r);

    let mut checked = 0;
    let mut witness = None;
    for a in gw.elements() {
        for &g in &base_grades {
            checked += 1;
            let want = a.support().all(|x| x < sub) && base.member(a, g);
            if ext.member(a, (0, g)) != want && witness.is_none() {
                witness = Some(format!("{a} at {g:?}: extension {} base {want}", !want));
            }
        }
    }
    let mut checks = vec![CheckReport::from_witness(
        "restriction-at-m0",
        format!("exhaustive: all {} elements of Z_{}^{rank}, H = first {sub} coordinates, base grades n <= {}, r <= {}", gw.len(), cfg.p, cfg.axiom_max_n, cfg.axiom_max_r),
        checked,
        witness,
    )];

    let grades: Vec<(usize, (usize, usize))> =
        (0..=rank).flat_map(|m| base_grades.iter().map(move |&g| (m, g))).collect();
    let axioms = check_ideal_axioms(&ext, &group, &grades, gw.elements(), true);
    checks.push(CheckReport::from_witness(
        "extension-axioms",
        format!("exhaustive: all {} elements, grades (m, g) with m <= {rank}", gw.len()),
        axioms.checked,
        axioms.violation.map(|v| format!("{}: {}", v.axiom, v.detail)),
    ));

    let outside = ApElement::generator(p, sub.min(rank - 1));
    let coset_ok = sub == rank
        || (!ext.member(&outside, (sub, (0, 0))) && ext.member(&outside, (sub + 1, (0, 0))));
    checks.push(CheckReport::from_witness(
        "cosets-enter-grades",
        format!("x{sub} against F_{sub} and F_{}", sub + 1),
        2,
        (!coset_ok).then(|| format!("{outside} is not first absorbed by F_{}", sub + 1)),
    ));
    Ok(Outcome { checks, tables: vec![] })
}

/// A map from the source window into `A(target)`, built along a breadth-first
/// spanning forest of the radius-1 relation: roots get random images and
/// each child differs from its parent by a random target difference.
fn random_coarse_map(rng: &mut impl Rng, source: &Filtration, target: &FreeCoarseConfig) -> Vec<ApElement> {
    let steps = difference_set(target.space(), 1, target.p);
    let n = source.window().len();
    let level = source.level(1);
    let mut images: Vec<Option<ApElement>> = vec![None; n];
    for root in 0..n {
        if images[root].is_some() {
            continue;
        }
        let index = rng.gen_range(0..group_size(target.p, target.points()).unwrap_or(1));
        images[root] = Some(ApElement::decode(target.p, target.points(), index));
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if images[y].is_none() && level.contains(x, y) {
                    let step = &steps[rng.gen_range(0..steps.len())];
                    images[y] = Some(images[x].as_ref().expect("parent placed").add(step).expect("same prime"));
                    queue.push_back(y);
                }
            }
        }
    }
    images.into_iter().map(|a| a.expect("every point placed")).collect()
}

/// `A(path of target_points)` with its Y-base filtration over the chain
/// `(k, 1)`, as the codomain of sampled or supplied maps.
struct MapTarget {
    config: FreeCoarseConfig,
    window: GroupWindow<ApElement>,
    filtration: Filtration,
}

impl MapTarget {
    fn new(cfg: &SpaceConfig, p: Prime, suite: &str) -> Result<Self, HarnessError> {
        let config = FreeCoarseConfig::new(&metric::path(cfg.target_points), p, 0)?;
        let window = ap_window(p, cfg.target_points, suite)?;
        let chain: Vec<(usize, usize)> = (0..=cfg.target_points).map(|k| (k, 1)).collect();
        let filtration = ideal_filtration(&YBase::new(&config)?, &window, &ApGroup { p }, &chain, CompBound::Sum)?;
        Ok(Self { config, window, filtration })
    }

    /// The map must be coarse into the target, and its extension must send
    /// every source grade into some target grade.
    fn check(
        &self,
        cfg: &SpaceConfig,
        source: &FreeCoarseConfig,
        label: &str,
        images: &[ApElement],
        range: &str,
        rows: &mut Vec<Vec<String>>,
    ) -> Result<CheckReport, HarnessError> {
        let pm = PointMap::new(images.iter().map(|a| self.window.position(a).expect("target window is all of A")).collect());
        let modulus = coarse_modulus(&pm, source.space(), &self.filtration, cfg.map_max_r)?;
        let rendered: Vec<String> = images.iter().map(|a| a.render(self.config.space().window())).collect();
        let report = universal_extension_check(source, &self.config, images, cfg.map_max_n, cfg.map_max_r)?;
        universal_rows(label, &report, rows);
        let witness = match modulus.modulus() {
            None => Some(format!("the map itself is not coarse: {modulus:?}")),
            Some(_) => report.counterexample.clone(),
        };
        Ok(CheckReport::from_witness(format!("extension-modulus/{label}"), range, report.checked, witness)
            .with_details(json!({ "images": rendered, "map_modulus": modulus })))
    }
}

/// Checks a user-supplied map from the configured space into the target
/// `A(path)`; `images` are elements over the target's points.
pub(crate) fn check_map(cfg: &SpaceConfig, images: &[ApElement]) -> Result<Outcome, HarnessError> {
    let source = cfg.free_config()?;
    let target = MapTarget::new(cfg, source.p, "check-map")?;
    let range = format!(
        "grades n <= {}, r <= {}, all members enumerated, target A(path of {} points)",
        cfg.map_max_n, cfg.map_max_r, cfg.target_points
    );
    let mut rows = Vec::new();
    let check = target.check(cfg, &source, "map", images, &range, &mut rows)?;
    let table = Table::new("universal.csv", &["map", "n", "r", "members", "target_n", "target_r"], rows);
    Ok(Outcome { checks: vec![check], tables: vec![table] })
}

fn universal_rows(label: &str, report: &UniversalReport, rows: &mut Vec<Vec<String>>) {
    for g in &report.table {
        rows.push(vec![
            label.to_owned(),
            g.n.to_string(),
            g.r.to_string(),
            g.members.to_string(),
            opt(g.target_n),
            opt(g.target_r),
        ]);
    }
}

pub(crate) fn universal_property(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let mut g = rng(cfg.require_seed("universal-property")?);
    let source = cfg.free_config()?;
    let p = source.p;
    let target = MapTarget::new(cfg, p, "universal-property")?;
    let range = format!("grades n <= {}, r <= {}, all members enumerated", cfg.map_max_n, cfg.map_max_r);
    let mut checks = Vec::new();
    let mut rows = Vec::new();

    for i in 0..cfg.maps {
        let images = random_coarse_map(&mut g, source.space(), &target.config);
        checks.push(target.check(cfg, &source, &format!("map-{i}"), &images, &range, &mut rows)?);
    }
    let target = target.config;

    let points = source.points();
    let identity: Vec<ApElement> = (0..points).map(|x| ApElement::generator(p, x)).collect();
    let id = universal_extension_check(&source, &source, &identity, cfg.map_max_n, cfg.map_max_r)?;
    universal_rows("identity", &id, &mut rows);
    let bad = id.table.iter().find(|g| g.target_n.is_none_or(|t| t > g.n));
    checks.push(CheckReport::from_witness(
        "identity-map-modulus",
        range.clone(),
        id.checked,
        bad.map(|g| format!("grade ({}, {}) maps to {:?}", g.n, g.r, g.target_n)),
    ));

    let constant: Vec<ApElement> = vec![ApElement::generator(p, target.z); points];
    let c = universal_extension_check(&source, &target, &constant, cfg.map_max_n, cfg.map_max_r)?;
    universal_rows("constant", &c, &mut rows);
    let bad = c.table.iter().find(|g| g.target_n != Some(0));
    checks.push(CheckReport::from_witness(
        "constant-map-modulus",
        range,
        c.checked,
        bad.map(|g| format!("grade ({}, {}) maps to {:?}", g.n, g.r, g.target_n)),
    ));

    let table = Table::new("universal.csv", &["map", "n", "r", "members", "target_n", "target_r"], rows);
    Ok(Outcome { checks, tables: vec![table] })
}

pub(crate) fn remark3_growth(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let t = boundedness_growth(cfg.growth_max_m)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for row in &t.rows {
        let want = Some(row.m);
        let witness = (row.full_support_norm != want || row.max_norm_oracle != want || row.max_norm_tjoin != want)
            .then(|| format!("{row:?}"));
        checks.push(CheckReport::from_witness(
            format!("max-norm-equals-m/m={}", row.m),
            format!("exhaustive: all 2^{} elements, oracle and tjoin", row.points),
            1u64 << row.points,
            witness,
        ));
        rows.push(vec![
            row.m.to_string(),
            row.points.to_string(),
            opt(row.full_support_norm),
            opt(row.max_norm_oracle),
            opt(row.max_norm_tjoin),
        ]);
    }
    checks.push(CheckReport::from_witness(
        "one-point-norms-at-most-1",
        "exhaustive: A_2 of one point",
        2,
        (!t.one_point_max_norm.is_some_and(|n| n <= 1)).then(|| format!("max norm {:?}", t.one_point_max_norm)),
    ));
    let table = Table::new(
        "growth.csv",
        &["m", "points", "full_support_norm", "max_norm_oracle", "max_norm_tjoin"],
        rows,
    );
    Ok(Outcome { checks, tables: vec![table] })
}

/// A uniformly random reduced word whose length is uniform in `0..=max_len`.
pub fn random_word(rng: &mut impl Rng, points: usize, max_len: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..points), rng.gen_bool(0.5));
        if letters.last() != Some(&l.inv()) {
            letters.push(l);
        }
    }
    ReducedWord::from_letters(letters)
}

pub(crate) fn sandwich_bounds(cfg: &SpaceConfig) -> Result<Outcome, HarnessError> {
    let mut g = rng(cfg.require_seed("sandwich-bounds")?);
    let fc = cfg.free_config()?.with_variety(VarietyTag::AllGroups);
    let r = cfg.radii[0];
    let searcher = WordSearcher::new(&fc, r)?;
    let cores = core_set(fc.space(), r, fc.z);
    let window = fc.space().window().clone();
    let mut rows = Vec::new();
    let mut sandwich = None;
    let mut certificates = None;
    let mut certified = 0u64;
    let words: Vec<ReducedWord> =
        (0..cfg.samples).map(|_| random_word(&mut g, fc.points(), cfg.max_word_length)).collect();
    for w in &words {
        let res = searcher.bounds(w)?;
        let (lo, hi) = (res.status.lower(), res.status.upper());
        rows.push(vec![w.render(&window), r.to_string(), lo.to_string(), opt(hi), res.method.to_string()]);
        if hi.is_some_and(|h| lo > h) && sandwich.is_none() {
            sandwich = Some(format!("{}: lower {lo} > upper {hi:?}", w.render(&window)));
        }
        if let Some(Certificate::Factors(factors)) = &res.certificate {
            certified += 1;
            let ok = product_of(factors) == *w
                && Some(factors.len()) == hi
                && factors.iter().all(|f| cores.binary_search(&f.core).is_ok())
                && factors.iter().all(|f| f.conjugator.len() <= fc.max_conjugator_length);
            if !ok && certificates.is_none() {
                certificates = Some(format!("certificate for {} does not multiply back", w.render(&window)));
            }
        } else if hi.is_some() && certificates.is_none() {
            certificates = Some(format!("{} has an upper bound without a certificate", w.render(&window)));
        }
    }
    let sampled = format!(
        "{} sampled words ({GENERATOR}), length <= {}, r = {r}, L = {}, n <= {}",
        cfg.samples, cfg.max_word_length, fc.max_conjugator_length, fc.max_grade
    );
    let mut checks = vec![
        CheckReport::from_witness("lower-at-most-upper", sampled.clone(), words.len() as u64, sandwich),
        CheckReport::from_witness("certificates-remultiply", sampled, certified, certificates),
    ];

    let mut checked = 0;
    let mut witness = None;
    for (x, y) in fc.space().level(r).pairs().filter(|(x, y)| x != y) {
        checked += 1;
        let w = ReducedWord::quotient(x, y);
        let res = searcher.bounds(&w)?;
        if res.status != (NormStatus::Exact { n: 1 }) && witness.is_none() {
            witness = Some(format!("{} has {:?}", w.render(&window), res.status));
        }
    }
    let id = searcher.bounds(&ReducedWord::identity())?;
    if id.status != (NormStatus::Exact { n: 0 }) && witness.is_none() {
        witness = Some(format!("e has {:?}", id.status));
    }
    checks.push(CheckReport::from_witness(
        "generators-exact-one",
        format!("exhaustive: x y^-1 for all (x, y) in level {r} with x != y, and e"),
        checked + 1,
        witness,
    ));
    Ok(Outcome { checks, tables: vec![Table::norms(rows)] })
}
