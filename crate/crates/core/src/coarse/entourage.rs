use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::window::{same_window, PointId, Window};
use super::CoarseError;

/// Dense square boolean matrix stored as packed `u64` rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitRows {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words] }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn or_row_from(&mut self, dst: usize, src: &BitRows, src_row: usize) {
        let w = self.words;
        let from = src.row(src_row);
        for (d, s) in self.bits[dst * w..(dst + 1) * w].iter_mut().zip(from) {
            *d |= *s;
        }
    }

    pub(crate) fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            })
        })
    }

    fn is_subset(&self, other: &BitRows) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A reflexive relation on a window.
#[derive(Clone, PartialEq, Eq)]
pub struct Entourage {
    window: Arc<Window>,
    rel: BitRows,
}

impl Entourage {
    /// The diagonal Δ of the window.
    pub fn diagonal(window: Arc<Window>) -> Self {
        let n = window.len();
        let mut rel = BitRows::new(n);
        for i in 0..n {
            rel.set(i, i);
        }
        Self { window, rel }
    }

    pub fn full(window: Arc<Window>) -> Self {
        Self::from_fn(window, |_, _| true)
    }

    /// Builds `{(x, y) : pred(x, y)} ∪ Δ`.
    pub fn from_fn(window: Arc<Window>, mut pred: impl FnMut(PointId, PointId) -> bool) -> Self {
        let mut e = Self::diagonal(window);
        let n = e.window.len();
        for x in 0..n {
            for y in 0..n {
                if pred(x, y) {
                    e.rel.set(x, y);
                }
            }
        }
        e
    }

    /// Builds the reflexive closure of an explicit pair list.
    pub fn from_pairs(
        window: Arc<Window>,
        pairs: impl IntoIterator<Item = (PointId, PointId)>,
    ) -> Result<Self, CoarseError> {
        let mut e = Self::diagonal(window);
        for (x, y) in pairs {
            e.window.check(x)?;
            e.window.check(y)?;
            e.rel.set(x, y);
        }
        Ok(e)
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn contains(&self, x: PointId, y: PointId) -> bool {
        self.rel.get(x, y)
    }

    /// Number of pairs, diagonal included.
    pub fn len(&self) -> usize {
        self.rel.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.window.points().flat_map(move |x| self.rel.row_iter(x).map(move |y| (x, y)))
    }

    /// `{(x, y) : ∃z (x, z) ∈ self, (z, y) ∈ other}`.
    pub fn compose(&self, other: &Entourage) -> Result<Entourage, CoarseError> {
        if !same_window(&self.window, &other.window) {
            return Err(CoarseError::WindowMismatch);
        }
        let n = self.window.len();
        let mut rel = BitRows::new(n);
        for x in 0..n {
            for z in self.rel.row_iter(x) {
                rel.or_row_from(x, &other.rel, z);
            }
        }
        Ok(Entourage { window: self.window.clone(), rel })
    }

    /// `self ∘ self ∘ ... ∘ self` (`k` factors); the zeroth power is Δ.
    pub fn power(&self, k: usize) -> Entourage {
        let mut acc = Entourage::diagonal(self.window.clone());
        for _ in 0..k {
            acc = acc.compose(self).expect("same window");
        }
        acc
    }

    pub fn inverse(&self) -> Entourage {
        let n = self.window.len();
        let mut rel = BitRows::new(n);
        for (x, y) in self.pairs() {
            rel.set(y, x);
        }
        Entourage { window: self.window.clone(), rel }
    }

    pub fn symmetrize(&self) -> Entourage {
        self.union(&self.inverse()).expect("same window")
    }

    pub fn union(&self, other: &Entourage) -> Result<Entourage, CoarseError> {
        if !same_window(&self.window, &other.window) {
            return Err(CoarseError::WindowMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.rel.bits.iter_mut().zip(&other.rel.bits) {
            *a |= *b;
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_subset(&self, other: &Entourage) -> bool {
        same_window(&self.window, &other.window) && self.rel.is_subset(&other.rel)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.window.len() * self.window.len()
    }

    /// `B(x, ε) = {y : (x, y) ∈ ε}`.
    pub fn ball(&self, x: PointId) -> Result<Vec<PointId>, CoarseError> {
        self.window.check(x)?;
        Ok(self.rel.row_iter(x).collect())
    }

    pub(crate) fn row(&self, x: PointId) -> impl Iterator<Item = PointId> + '_ {
        self.rel.row_iter(x)
    }

    /// Off-diagonal pairs as label pairs, in window order.
    pub fn to_label_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .map(|(x, y)| (self.window.label(x).to_owned(), self.window.label(y).to_owned()))
            .collect()
    }
}

impl fmt::Debug for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().filter(|(x, y)| x != y))
            .finish()
    }
}

/// Serialized as `{"points": [...], "pairs": [[x, y], ...]}` with every pair
/// listed, diagonal included.
impl Serialize for Entourage {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Entourage", 2)?;
        s.serialize_field("points", self.window.labels())?;
        s.serialize_field("pairs", &self.to_label_pairs())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(n: usize, width: usize) -> Entourage {
        Entourage::from_fn(Window::indexed(n), |x, y| x.abs_diff(y) <= width)
    }

    #[test]
    fn diagonal_is_a_two_sided_unit() {
        let d = band(6, 2);
        let delta = Entourage::diagonal(d.window().clone());
        assert_eq!(delta.compose(&d).unwrap(), d);
        assert_eq!(d.compose(&delta).unwrap(), d);
    }

    #[test]
    fn full_relation_absorbs() {
        let w = Window::indexed(5);
        let full = Entourage::full(w.clone());
        assert_eq!(full.compose(&Entourage::diagonal(w)).unwrap(), full);
    }

    #[test]
    fn composition_of_unit_bands_on_four_points() {
        // Witness enumeration: (x, y) is in the composite iff some z has
        // |x - z| <= 1 and |z - y| <= 1.
        let e = band(4, 1);
        let composed = e.compose(&e).unwrap();
        for x in 0..4usize {
            for y in 0..4usize {
                let witnessed = (0..4usize).any(|z| x.abs_diff(z) <= 1 && z.abs_diff(y) <= 1);
                assert_eq!(composed.contains(x, y), witnessed, "({x},{y})");
                assert_eq!(witnessed, x.abs_diff(y) <= 2);
            }
        }
    }

    #[test]
    fn inverse_and_symmetrize() {
        let w = Window::indexed(3);
        let e = Entourage::from_pairs(w.clone(), [(0, 1)]).unwrap();
        let inv = e.inverse();
        assert!(inv.contains(1, 0) && !inv.contains(0, 1));
        assert_eq!(inv.inverse(), e);
        let s = e.symmetrize();
        assert!(s.contains(0, 1) && s.contains(1, 0) && s.is_symmetric());
        assert_eq!(s.inverse(), s);
        assert_eq!(s.len(), 5);
        let b = band(4, 1);
        assert_eq!(b.inverse(), b);
    }

    #[test]
    fn balls() {
        let e = band(8, 2);
        assert_eq!(e.ball(3).unwrap(), vec![1, 2, 3, 4, 5]);
        let delta = Entourage::diagonal(e.window().clone());
        assert_eq!(delta.ball(6).unwrap(), vec![6]);
        assert!(matches!(e.ball(8), Err(CoarseError::UnknownPoint(8))));
    }

    #[test]
    fn window_mismatch_is_an_error() {
        let a = band(3, 1);
        let b = band(4, 1);
        assert!(matches!(a.compose(&b), Err(CoarseError::WindowMismatch)));
    }

    #[test]
    fn bit_rows_past_one_word() {
        let e = band(130, 70);
        assert!(e.contains(0, 70) && !e.contains(0, 71));
        assert!(e.contains(129, 59) && !e.contains(129, 58));
        assert_eq!(e.ball(0).unwrap().len(), 71);
        assert!(e.compose(&e).unwrap().is_full());
    }

    #[test]
    fn serializes_as_pair_list() {
        let w = Window::indexed(2);
        let e = Entourage::from_pairs(w, [(0, 1)]).unwrap();
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"points": ["x0", "x1"], "pairs": [["x0","x0"],["x0","x1"],["x1","x1"]]})
        );
    }
}
