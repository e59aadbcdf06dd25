use std::fmt;

use serde_json::Value;

use super::{ApElement, GroupLaw, Prime};
use crate::coarse::{PointId, Window};

/// A generator `x` or its inverse `x⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub point: PointId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(point: PointId, inverse: bool) -> Self {
        Self { point, inverse }
    }

    pub fn inv(self) -> Self {
        Self { point: self.point, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.point == other.point && self.inverse != other.inverse
    }
}

/// A freely reduced word over `X ∪ X⁻¹`; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(x: PointId) -> Self {
        Self { letters: vec![Letter::new(x, false)] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Self { letters: out }
    }

    /// `x y⁻¹`.
    pub fn quotient(x: PointId, y: PointId) -> Self {
        Self::from_letters([Letter::new(x, false), Letter::new(y, true)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &ReducedWord) -> ReducedWord {
        // Cancel across the seam only; both halves are already reduced.
        let mut k = 0;
        while k < self.len().min(other.len())
            && self.letters[self.len() - 1 - k].cancels(other.letters[k])
        {
            k += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * k);
        letters.extend_from_slice(&self.letters[..self.len() - k]);
        letters.extend_from_slice(&other.letters[k..]);
        ReducedWord { letters }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &ReducedWord) -> ReducedWord {
        g.inverse().multiply(self).multiply(g)
    }

    /// Splits `self = g⁻¹ core g` with `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (ReducedWord, ReducedWord) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].cancels(self.letters[n - 1 - k]) {
            k += 1;
        }
        let core = ReducedWord { letters: self.letters[k..n - k].to_vec() };
        let g = ReducedWord { letters: self.letters[n - k..].to_vec() };
        (g, core)
    }

    /// `rotation(i) = a⁻¹ self a` for `a = self[..i]`; for a cyclically reduced
    /// word this is the cyclic shift starting at letter `i`.
    pub fn rotation(&self, i: usize) -> (ReducedWord, ReducedWord) {
        let a = ReducedWord { letters: self.letters[..i].to_vec() };
        let mut letters = self.letters[i..].to_vec();
        letters.extend_from_slice(&self.letters[..i]);
        (a, ReducedWord { letters })
    }

    /// Lexicographically least cyclic shift of the cyclic reduction: two words
    /// are conjugate iff these agree.
    pub fn conjugacy_class_key(&self) -> ReducedWord {
        let (_, core) = self.cyclic_reduction();
        (0..core.len().max(1))
            .map(|i| if core.is_empty() { core.clone() } else { core.rotation(i).1 })
            .min()
            .expect("at least one rotation")
    }

    pub fn has_prefix(&self, prefix: &[Letter]) -> bool {
        self.letters.starts_with(prefix)
    }

    pub fn render(&self, window: &Window) -> String {
        self.render_with(|x| window.label(x).to_owned())
    }

    fn render_with(&self, label: impl Fn(PointId) -> String) -> String {
        if self.letters.is_empty() {
            return "e".to_owned();
        }
        self.letters
            .iter()
            .map(|l| if l.inverse { format!("{}^-1", label(l.point)) } else { label(l.point) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Letter list, e.g. `["x0", "x1^-1"]`.
    pub fn to_json(&self, window: &Window) -> Value {
        Value::Array(
            self.letters
                .iter()
                .map(|l| {
                    let label = window.label(l.point);
                    Value::from(if l.inverse { format!("{label}^-1") } else { label.to_owned() })
                })
                .collect(),
        )
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|x| format!("x{x}")))
    }
}

/// Serialized as a letter list over `x{id}` names.
impl serde::Serialize for ReducedWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.letters.iter().map(|l| {
            if l.inverse {
                format!("x{}^-1", l.point)
            } else {
                format!("x{}", l.point)
            }
        }))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The free group on the window's points.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroup;

impl FreeGroup {
    /// Every reduced word of length at most `len` over `points` generators,
    /// shortest first.
    pub fn words_up_to(points: usize, len: usize) -> Vec<ReducedWord> {
        let mut out = vec![ReducedWord::identity()];
        let mut frontier = vec![ReducedWord::identity()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &frontier {
                for x in 0..points {
                    for inverse in [false, true] {
                        let l = Letter::new(x, inverse);
                        if w.letters().last() == Some(&l.inv()) {
                            continue;
                        }
                        next.push(ReducedWord::from_letters(w.letters().iter().copied().chain([l])));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl GroupLaw for FreeGroup {
    type Elem = ReducedWord;

    fn identity(&self) -> ReducedWord {
        ReducedWord::identity()
    }

    fn op(&self, a: &ReducedWord, b: &ReducedWord) -> ReducedWord {
        a.multiply(b)
    }

    fn inv(&self, a: &ReducedWord) -> ReducedWord {
        a.inverse()
    }
}

/// Exponent sums mod `p`: the homomorphism `F(X) → A(X)` extending `id_X`.
pub fn abelianize(w: &ReducedWord, p: Prime) -> ApElement {
    ApElement::from_terms(
        p,
        w.letters.iter().map(|l| (l.point, if l.inverse { -1 } else { 1 })),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(spec: &[(PointId, bool)]) -> ReducedWord {
        ReducedWord::from_letters(spec.iter().map(|&(x, i)| Letter::new(x, i)))
    }

    /// Reduces by repeatedly deleting the leftmost or rightmost cancelling
    /// pair; used to check that the result does not depend on the order.
    fn reduce_leftmost(mut v: Vec<Letter>) -> Vec<Letter> {
        while let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i].cancels(v[i + 1])) {
            v.drain(i..i + 2);
        }
        v
    }

    fn reduce_rightmost(mut v: Vec<Letter>) -> Vec<Letter> {
        while let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i].cancels(v[i + 1])) {
            v.drain(i..i + 2);
        }
        v
    }

    #[test]
    fn inverse_cancels() {
        let u = w(&[(0, false), (1, true), (2, false)]);
        assert!(u.multiply(&u.inverse()).is_identity());
        assert!(u.inverse().multiply(&u).is_identity());
    }

    #[test]
    fn one_cancellation() {
        let xy = w(&[(0, false), (1, false)]);
        let yinv_z = w(&[(1, true), (2, false)]);
        assert_eq!(xy.multiply(&yinv_z), w(&[(0, false), (2, false)]));
    }

    #[test]
    fn abelianize_examples() {
        let p = Prime::TWO;
        assert!(abelianize(&ReducedWord::identity(), p).is_zero());
        let comm = w(&[(0, false), (1, false), (0, true), (1, true)]);
        assert!(abelianize(&comm, p).is_zero());
        let xyx = w(&[(0, false), (1, false), (0, false)]);
        assert_eq!(abelianize(&xyx, p), ApElement::generator(p, 1));
    }

    #[test]
    fn cyclic_reduction_and_rotation() {
        let core = w(&[(0, false), (1, true), (2, false)]);
        let g = w(&[(3, false), (4, true)]);
        let conj = core.conjugate_by(&g);
        let (g2, core2) = conj.cyclic_reduction();
        assert_eq!(core2, core);
        assert_eq!(core2.conjugate_by(&g2), conj);
        for i in 0..core.len() {
            let (a, rot) = core.rotation(i);
            assert_eq!(core.conjugate_by(&a), rot);
        }
        assert_eq!(conj.conjugacy_class_key(), core.conjugacy_class_key());
        assert_eq!(ReducedWord::identity().cyclic_reduction().1, ReducedWord::identity());
        let single = ReducedWord::generator(5);
        assert_eq!(single.cyclic_reduction().1, single);
    }

    fn arb_letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec((0usize..3, any::<bool>()), 0..max_len)
            .prop_map(|v| v.into_iter().map(|(x, i)| Letter::new(x, i)).collect())
    }

    proptest! {
        #[test]
        fn reduction_is_confluent(letters in arb_letters(12)) {
            let r = ReducedWord::from_letters(letters.clone());
            let left = reduce_leftmost(letters.clone());
            let right = reduce_rightmost(letters);
            prop_assert_eq!(r.letters(), left.as_slice());
            prop_assert_eq!(r.letters(), right.as_slice());
        }

        #[test]
        fn free_group_laws(a in arb_letters(8), b in arb_letters(8), c in arb_letters(8)) {
            let (a, b, c) = (
                ReducedWord::from_letters(a),
                ReducedWord::from_letters(b),
                ReducedWord::from_letters(c),
            );
            prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
            prop_assert_eq!(a.multiply(&b).inverse(), b.inverse().multiply(&a.inverse()));
            let p = Prime::new(3).unwrap();
            prop_assert_eq!(
                abelianize(&a.multiply(&b), p),
                abelianize(&a, p).add(&abelianize(&b, p)).unwrap()
            );
        }

        #[test]
        fn conjugacy_key_is_a_class_invariant(a in arb_letters(8), g in arb_letters(5)) {
            let a = ReducedWord::from_letters(a);
            let g = ReducedWord::from_letters(g);
            prop_assert_eq!(a.conjugate_by(&g).conjugacy_class_key(), a.conjugacy_class_key());
        }
    }
}
