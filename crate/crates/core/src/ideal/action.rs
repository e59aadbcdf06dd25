use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use super::GradedIdealBase;
use crate::coarse::{coarse_modulus, CoarseError, CompBound, Entourage, Filtration, Modulus, ModulusOutcome, PointId, PointMap, Window};
use crate::group::GroupLaw;

/// A finite list of group elements used as the point window of `G` acting on
/// itself by left multiplication. Points are labelled `g0, g1, …` in list
/// order; the list must contain the identity.
#[derive(Debug, Clone)]
pub struct GroupWindow<E> {
    elements: Vec<E>,
    index: HashMap<E, PointId>,
    window: Arc<Window>,
}

impl<E: Clone + Eq + Hash + Debug> GroupWindow<E> {
    pub fn new<G: GroupLaw<Elem = E>>(group: &G, elements: Vec<E>) -> Result<Self, CoarseError> {
        let window = Arc::new(Window::new((0..elements.len()).map(|i| format!("g{i}")))?);
        let mut index = HashMap::with_capacity(elements.len());
        for (i, a) in elements.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(CoarseError::DuplicatePoint(format!("{a:?}")));
            }
        }
        if !index.contains_key(&group.identity()) {
            return Err(CoarseError::UnknownPoint(elements.len()));
        }
        Ok(Self { elements, index, window })
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, p: PointId) -> &E {
        &self.elements[p]
    }

    pub fn position(&self, a: &E) -> Option<PointId> {
        self.index.get(a).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `x ↦ f(x)` as a map of the window, if every image stays inside.
    fn translation(&self, f: impl Fn(&E) -> E) -> Option<PointMap> {
        self.elements.iter().map(|x| self.position(&f(x))).collect::<Option<Vec<_>>>().map(PointMap::new)
    }
}

/// `ε_A = {(x, a x) : x in the window, a ∈ B(grade)} ∪ Δ`, pairs leaving the
/// window dropped. The ball of `x` is `A x`.
pub fn entourage_from_ideal<B, G>(base: &B, grade: B::Grade, gw: &GroupWindow<B::Elem>, group: &G) -> Entourage
where
    B: GradedIdealBase,
    G: GroupLaw<Elem = B::Elem>,
{
    let members: Vec<&B::Elem> = gw.elements().iter().filter(|a| base.member(a, grade)).collect();
    let mut pairs = Vec::new();
    for (x, ex) in gw.elements().iter().enumerate() {
        for a in &members {
            if let Some(y) = gw.position(&group.op(a, ex)) {
                pairs.push((x, y));
            }
        }
    }
    Entourage::from_pairs(gw.window().clone(), pairs).expect("pairs come from the window")
}

/// The filtration with `levels(r) = ε_{B(chain[r])}`. `chain` must be
/// increasing in the base's grade order.
pub fn ideal_filtration<B, G>(
    base: &B,
    gw: &GroupWindow<B::Elem>,
    group: &G,
    chain: &[B::Grade],
    comp_bound: CompBound,
) -> Result<Filtration, CoarseError>
where
    B: GradedIdealBase,
    G: GroupLaw<Elem = B::Elem>,
{
    let levels: Vec<Entourage> = chain.iter().map(|&g| entourage_from_ideal(base, g, gw, group)).collect();
    let symmetric = levels.iter().all(Entourage::is_symmetric);
    Filtration::new(gw.window().clone(), levels, comp_bound, symmetric)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A translate of a level pair that escapes every level of the filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationWitness {
    pub translator: String,
    pub radius: usize,
    pub pair: (String, String),
    pub image: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarseGroupReport {
    pub side: Side,
    pub range: usize,
    pub translators: usize,
    /// Translators whose translation leaves the window; they are skipped.
    pub skipped: usize,
    /// Pointwise maximum over translators of the least radius absorbing the
    /// translated level.
    pub modulus: Option<Modulus>,
    /// `modulus(r) ≤ r` on `0..=range`: the input grade itself absorbs every
    /// translated level.
    pub same_grade: bool,
    pub witness: Option<TranslationWitness>,
    pub passed: bool,
}

fn check_translations<E, G>(
    side: Side,
    gw: &GroupWindow<E>,
    group: &G,
    filtration: &Filtration,
    translators: &[PointId],
    range: usize,
) -> Result<CoarseGroupReport, CoarseError>
where
    E: Clone + Eq + Hash + Debug,
    G: GroupLaw<Elem = E>,
{
    let mut worst = vec![0usize; range + 1];
    let mut skipped = 0;
    let mut witness = None;
    for &t in translators {
        let g = gw.element(t);
        let map = match side {
            Side::Left => gw.translation(|x| group.op(g, x)),
            Side::Right => gw.translation(|x| group.op(x, g)),
        };
        let Some(map) = map else {
            skipped += 1;
            continue;
        };
        match coarse_modulus(&map, filtration, filtration, range)? {
            ModulusOutcome::Modulus(m) => {
                for (w, &r) in worst.iter_mut().zip(m.as_slice()) {
                    *w = (*w).max(r);
                }
            }
            ModulusOutcome::Counterexample(c) => {
                let show = |p: PointId| format!("{:?}", gw.element(p));
                witness = Some(TranslationWitness {
                    translator: format!("{g:?}"),
                    radius: c.radius,
                    pair: (show(c.pair.0), show(c.pair.1)),
                    image: (show(c.image.0), show(c.image.1)),
                });
                break;
            }
        }
    }
    let modulus = witness.is_none().then(|| Modulus::from_vec(worst));
    let same_grade = modulus.as_ref().is_some_and(|m| m.as_slice().iter().enumerate().all(|(r, &s)| s <= r));
    Ok(CoarseGroupReport {
        side,
        range,
        translators: translators.len(),
        skipped,
        passed: witness.is_none() && skipped < translators.len(),
        modulus,
        same_grade,
        witness,
    })
}

/// Left translations `x ↦ g x` are uniformly coarse: `g B(x, ε) ⊆ B(g x, ε')`.
pub fn check_left_coarse<E, G>(
    gw: &GroupWindow<E>,
    group: &G,
    filtration: &Filtration,
    translators: &[PointId],
    range: usize,
) -> Result<CoarseGroupReport, CoarseError>
where
    E: Clone + Eq + Hash + Debug,
    G: GroupLaw<Elem = E>,
{
    check_translations(Side::Left, gw, group, filtration, translators, range)
}

/// Right translations `x ↦ x g` are uniformly coarse: `B(x, ε) g ⊆ B(x g, ε')`.
pub fn check_right_coarse<E, G>(
    gw: &GroupWindow<E>,
    group: &G,
    filtration: &Filtration,
    translators: &[PointId],
    range: usize,
) -> Result<CoarseGroupReport, CoarseError>
where
    E: Clone + Eq + Hash + Debug,
    G: GroupLaw<Elem = E>,
{
    check_translations(Side::Right, gw, group, filtration, translators, range)
}
