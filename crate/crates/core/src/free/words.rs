use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{
    ap_norm_tjoin, ApNormOracle, Certificate, FreeCoarseConfig, FreeError, Method, NormResult,
};
use crate::coarse::{Filtration, PointId};
use crate::group::{abelianize, FreeGroup, GroupError, ReducedWord, VarietyTag};

/// Extra length a first factor may have beyond twice the prefix it cancels.
const SLACK: usize = 2;

/// One factor `g⁻¹ d g` of a certified factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ConjugateFactor {
    pub conjugator: ReducedWord,
    pub core: ReducedWord,
}

impl ConjugateFactor {
    pub fn value(&self) -> ReducedWord {
        self.core.conjugate_by(&self.conjugator)
    }
}

/// Multiplies the factors back together.
pub fn product_of(factors: &[ConjugateFactor]) -> ReducedWord {
    factors.iter().fold(ReducedWord::identity(), |acc, f| acc.multiply(&f.value()))
}

/// `D_ε ∪ D_ε z ∪ z⁻¹ D_ε` with `D_ε = {x y⁻¹ : (x, y) ∈ ε_r}`, sorted and
/// deduplicated. The third part makes the family closed under inverses.
pub fn core_set(space: &Filtration, r: usize, z: PointId) -> Vec<ReducedWord> {
    let zw = ReducedWord::generator(z);
    let d: Vec<ReducedWord> = space
        .level(r)
        .pairs()
        .map(|(x, y)| ReducedWord::quotient(x, y))
        .collect();
    let mut out: Vec<ReducedWord> = d
        .iter()
        .flat_map(|w| [w.clone(), w.multiply(&zw), zw.inverse().multiply(w)])
        .collect();
    out.sort();
    out.dedup();
    out
}

enum AbelianBound {
    Tjoin,
    Oracle(Box<ApNormOracle>),
    Trivial,
}

/// Bounds for the least `n` with `w ∈ P_{n,ε_r}`, where `P_{n,ε}` is the
/// product of `n` copies of the union of all conjugates of the core set.
pub struct WordSearcher<'c> {
    cfg: &'c FreeCoarseConfig,
    radius: usize,
    cores: Vec<ReducedWord>,
    classes: HashMap<ReducedWord, usize>,
    /// Conjugates `g⁻¹ d g` with `|g| ≤ L`, sorted by value.
    candidates: Vec<(ReducedWord, ConjugateFactor)>,
    abelian: AbelianBound,
}

impl<'c> WordSearcher<'c> {
    pub fn new(cfg: &'c FreeCoarseConfig, r: usize) -> Result<Self, FreeError> {
        if cfg.variety != VarietyTag::AllGroups {
            return Err(GroupError::VarietyMismatch {
                expected: VarietyTag::AllGroups.to_string(),
                found: cfg.variety.to_string(),
            }
            .into());
        }
        let cores: Vec<ReducedWord> =
            core_set(cfg.space(), r, cfg.z).into_iter().filter(|c| !c.is_identity()).collect();
        let mut classes = HashMap::new();
        for (i, c) in cores.iter().enumerate() {
            classes.entry(c.conjugacy_class_key()).or_insert(i);
        }
        let conjugators = FreeGroup::words_up_to(cfg.points(), cfg.max_conjugator_length);
        let mut seen = HashSet::new();
        let mut candidates = Vec::new();
        for g in &conjugators {
            for c in &cores {
                let value = c.conjugate_by(g);
                if seen.insert(value.clone()) {
                    candidates.push((value, ConjugateFactor { conjugator: g.clone(), core: c.clone() }));
                }
            }
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0));
        let abelian = if cfg.p.get() == 2 {
            AbelianBound::Tjoin
        } else {
            match ApNormOracle::new(cfg, r) {
                Ok(o) => AbelianBound::Oracle(Box::new(o)),
                Err(_) => AbelianBound::Trivial,
            }
        };
        Ok(Self { cfg, radius: r, cores, classes, candidates, abelian })
    }

    pub fn cores(&self) -> &[ReducedWord] {
        &self.cores
    }

    /// Norm of the abelianization: `Some(n)` is a lower bound, `None` means
    /// no grade contains the word.
    fn abelian_norm(&self, w: &ReducedWord) -> Option<usize> {
        let a = abelianize(w, self.cfg.p);
        match &self.abelian {
            AbelianBound::Tjoin => ap_norm_tjoin(self.cfg, &a, self.radius)
                .expect("p = 2 and letters in the window")
                .status
                .exact(),
            AbelianBound::Oracle(o) => o.norm_value(&a),
            AbelianBound::Trivial => Some(0),
        }
    }

    /// `u = g⁻¹ d g` for some core `d` and any `g`, with the conjugator.
    pub fn single_factor(&self, u: &ReducedWord) -> Option<ConjugateFactor> {
        let &i = self.classes.get(&u.conjugacy_class_key())?;
        let core = &self.cores[i];
        let (b, core_c) = core.cyclic_reduction();
        let (a, core_u) = u.cyclic_reduction();
        let (s, _) = (0..core_c.len().max(1))
            .map(|k| if core_c.is_empty() { (ReducedWord::identity(), core_c.clone()) } else { core_c.rotation(k) })
            .find(|(_, rot)| *rot == core_u)
            .expect("equal class keys");
        // core = b⁻¹ c b, c_u = s⁻¹ c s, u = a⁻¹ c_u a.
        let conjugator = b.inverse().multiply(&s).multiply(&a);
        let factor = ConjugateFactor { conjugator, core: core.clone() };
        debug_assert_eq!(&factor.value(), u);
        Some(factor)
    }

    /// Lower bound from the abelianization and the exact one-factor test.
    /// `None` when the abelianization lies in no grade.
    pub fn lower_bound(&self, w: &ReducedWord) -> Option<usize> {
        let mut lo = self.abelian_norm(w)?;
        if !w.is_identity() {
            lo = lo.max(1);
            if self.single_factor(w).is_none() {
                lo = lo.max(2);
            }
        }
        Some(lo)
    }

    pub fn bounds(&self, w: &ReducedWord) -> Result<NormResult, FreeError> {
        self.cfg.check_word(w)?;
        let limit = self.cfg.max_grade;
        let Some(lo) = self.lower_bound(w) else {
            return Ok(NormResult::bounds(limit + 1, None, self.radius, Method::Search));
        };
        let mut search = Search { s: self, failed: HashSet::new(), nodes: 0 };
        for k in lo..=limit {
            if let Some(factors) = search.run(w, k) {
                debug_assert_eq!(&product_of(&factors), w);
                return Ok(NormResult::bounds(lo, Some(factors.len()), self.radius, Method::Search)
                    .with_certificate(Certificate::Factors(factors)));
            }
            if search.nodes >= self.cfg.search_budget {
                break;
            }
        }
        Ok(NormResult::bounds(lo, None, self.radius, Method::Search))
    }

    /// Candidate first factors for `u`, most cancellation first.
    fn first_factors<'a>(&'a self, u: &'a ReducedWord) -> impl Iterator<Item = &'a (ReducedWord, ConjugateFactor)> + 'a {
        let letters = u.letters();
        (0..=letters.len()).rev().flat_map(move |shared| {
            let prefix = &letters[..shared];
            let start = self.candidates.partition_point(|(v, _)| v.letters() < prefix);
            self.candidates[start..]
                .iter()
                .take_while(move |(v, _)| v.has_prefix(prefix))
                .filter(move |(v, _)| {
                    let exact = v.len() == shared || letters.get(shared) != v.letters().get(shared);
                    exact && v.len() <= 2 * shared + SLACK
                })
        })
    }
}

struct Search<'s, 'c> {
    s: &'s WordSearcher<'c>,
    failed: HashSet<(ReducedWord, usize)>,
    nodes: u64,
}

impl Search<'_, '_> {
    /// A factorization of `u` into at most `k` factors.
    fn run(&mut self, u: &ReducedWord, k: usize) -> Option<Vec<ConjugateFactor>> {
        if u.is_identity() {
            return Some(Vec::new());
        }
        if k == 0 || self.nodes >= self.s.cfg.search_budget {
            return None;
        }
        self.nodes += 1;
        if let Some(f) = self.s.single_factor(u) {
            return Some(vec![f]);
        }
        if k == 1 || self.s.abelian_norm(u).is_none_or(|n| n > k) {
            return None;
        }
        let key = (u.clone(), k);
        if self.failed.contains(&key) {
            return None;
        }
        for (value, factor) in self.s.first_factors(u) {
            let rest = value.inverse().multiply(u);
            if let Some(mut tail) = self.run(&rest, k - 1) {
                tail.insert(0, factor.clone());
                return Some(tail);
            }
            if self.nodes >= self.s.cfg.search_budget {
                return None;
            }
        }
        self.failed.insert(key);
        None
    }
}

/// Interval (or exact) bounds for the norm of a free-group word.
pub fn word_norm_bounds(cfg: &FreeCoarseConfig, w: &ReducedWord, r: usize) -> Result<NormResult, FreeError> {
    WordSearcher::new(cfg, r)?.bounds(w)
}

#[cfg(test)]
mod tests {
    use super::super::NormStatus;
    use super::*;
    use crate::coarse::metric;
    use crate::group::Letter;
    use crate::group::Prime;
    use proptest::prelude::*;

    fn cfg(n: usize) -> FreeCoarseConfig {
        FreeCoarseConfig::new(&metric::path(n), Prime::TWO, 0)
            .unwrap()
            .with_variety(VarietyTag::AllGroups)
    }

    fn word(spec: &[(PointId, bool)]) -> ReducedWord {
        ReducedWord::from_letters(spec.iter().map(|&(x, i)| Letter::new(x, i)))
    }

    #[test]
    fn word_counts() {
        // 1 + 2k + 2k(2k-1) + 2k(2k-1)^2 for k = 2.
        assert_eq!(FreeGroup::words_up_to(2, 3).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn identity_and_generators() {
        let c = cfg(6);
        let s = WordSearcher::new(&c, 1).unwrap();
        assert_eq!(s.bounds(&ReducedWord::identity()).unwrap().status, NormStatus::Exact { n: 0 });
        for x in 0..5 {
            let w = ReducedWord::quotient(x, x + 1);
            assert_eq!(s.bounds(&w).unwrap().status, NormStatus::Exact { n: 1 });
            assert_eq!(s.bounds(&w.inverse()).unwrap().status, NormStatus::Exact { n: 1 });
        }
        // z and z⁻¹ are single factors.
        assert_eq!(s.bounds(&ReducedWord::generator(0)).unwrap().status, NormStatus::Exact { n: 1 });
        assert_eq!(s.bounds(&ReducedWord::generator(0).inverse()).unwrap().status, NormStatus::Exact { n: 1 });
    }

    #[test]
    fn commutator_needs_two_factors() {
        let c = cfg(6);
        let w = word(&[(0, false), (1, false), (0, true), (1, true)]);
        let r = word_norm_bounds(&c, &w, 1).unwrap();
        assert_eq!(r.status, NormStatus::Exact { n: 2 });
        let Some(Certificate::Factors(f)) = r.certificate else { panic!("no certificate") };
        assert_eq!(product_of(&f), w);
    }

    #[test]
    fn abelian_variety_is_rejected() {
        let c = FreeCoarseConfig::new(&metric::path(3), Prime::TWO, 0).unwrap();
        assert!(WordSearcher::new(&c, 1).is_err());
    }

    #[test]
    fn single_factor_recovers_conjugators() {
        let c = cfg(4);
        let s = WordSearcher::new(&c, 1).unwrap();
        let g = word(&[(3, false), (2, true), (1, false)]);
        for core in s.cores().to_vec() {
            let u = core.conjugate_by(&g);
            let f = s.single_factor(&u).expect("conjugate of a core");
            assert_eq!(f.value(), u);
        }
    }

    fn arb_word() -> impl Strategy<Value = ReducedWord> {
        proptest::collection::vec((0usize..6, any::<bool>()), 0..7)
            .prop_map(|v| ReducedWord::from_letters(v.into_iter().map(|(x, i)| Letter::new(x, i))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn sandwich_holds_and_certificates_multiply_back(w in arb_word()) {
            let c = cfg(6);
            let r = word_norm_bounds(&c, &w, 1).unwrap();
            if let Some(hi) = r.status.upper() {
                prop_assert!(r.status.lower() <= hi);
                match &r.certificate {
                    Some(Certificate::Factors(f)) => {
                        prop_assert_eq!(&product_of(f), &w);
                        prop_assert!(f.len() <= hi);
                    }
                    other => prop_assert!(false, "missing certificate {:?}", other),
                }
            }
        }
    }
}
