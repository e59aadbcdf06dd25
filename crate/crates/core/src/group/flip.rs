use std::fmt;

use super::{GroupError, GroupLaw};

/// An element `(v, a)` of `H ⋊ ⟨φ⟩`, where `H` is the group of finitely
/// supported `Z_2`-vectors indexed by `Z` (truncated to `-N..=N`) and `φ`
/// reflects indices, `φ(v)_n = v_{-n}`.
///
/// Bit `i + N` of `bits` holds coordinate `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlipElement {
    half_width: u32,
    bits: u128,
    flip: bool,
}

impl FlipElement {
    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    pub fn is_flip(&self) -> bool {
        self.flip
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// Indices carrying a 1, ascending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        let n = i64::from(self.half_width);
        (0..=2 * n).filter(move |k| self.bits >> k & 1 == 1).map(move |k| k - n)
    }

    /// The vector part as an element of `H`.
    pub fn vector_part(&self) -> FlipElement {
        FlipElement { flip: false, ..*self }
    }
}

impl fmt::Debug for FlipElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support().map(|i| format!("e{i}")).collect();
        let v = if support.is_empty() { "0".to_owned() } else { support.join("+") };
        write!(f, "({v}, {})", if self.flip { "φ" } else { "id" })
    }
}

/// The truncated group `H^{(N)} ⋊ ⟨φ⟩` of order `2^{2N+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipGroup {
    half_width: u32,
}

impl FlipGroup {
    pub fn new(half_width: u32) -> Result<Self, GroupError> {
        if half_width > 63 {
            return Err(GroupError::FlipWindowTooWide(half_width));
        }
        Ok(Self { half_width })
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    fn mask(&self) -> u128 {
        (1u128 << (2 * self.half_width + 1)) - 1
    }

    pub fn element(&self, support: &[i64], flip: bool) -> Result<FlipElement, GroupError> {
        let n = i64::from(self.half_width);
        let mut bits = 0u128;
        for &i in support {
            if i.abs() > n {
                return Err(GroupError::FlipOverflow { index: i, half_width: self.half_width });
            }
            bits ^= 1 << (i + n);
        }
        Ok(FlipElement { half_width: self.half_width, bits, flip })
    }

    pub fn from_bits(&self, bits: u128, flip: bool) -> FlipElement {
        FlipElement { half_width: self.half_width, bits: bits & self.mask(), flip }
    }

    /// The unit vector `e_i`.
    pub fn unit(&self, i: i64) -> Result<FlipElement, GroupError> {
        self.element(&[i], false)
    }

    /// `(0, φ)`.
    pub fn phi(&self) -> FlipElement {
        FlipElement { half_width: self.half_width, bits: 0, flip: true }
    }

    /// Index reflection on the vector bits.
    fn reflect(&self, bits: u128) -> u128 {
        let width = 2 * self.half_width + 1;
        bits.reverse_bits() >> (128 - width)
    }

    pub fn check(&self, a: &FlipElement) -> Result<(), GroupError> {
        if a.half_width == self.half_width {
            Ok(())
        } else {
            Err(GroupError::FlipWindowMismatch(self.half_width, a.half_width))
        }
    }

    /// `(v₁, a₁)(v₂, a₂) = (v₁ + φ^{a₁}(v₂), a₁a₂)`.
    pub fn multiply(&self, a: &FlipElement, b: &FlipElement) -> Result<FlipElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        let moved = if a.flip { self.reflect(b.bits) } else { b.bits };
        Ok(FlipElement { half_width: self.half_width, bits: a.bits ^ moved, flip: a.flip ^ b.flip })
    }

    /// Every element of `H^{(N)}`.
    pub fn vectors(&self) -> impl Iterator<Item = FlipElement> + '_ {
        (0..=self.mask()).map(move |bits| self.from_bits(bits, false))
    }

    /// Every element of the group, vectors first.
    pub fn elements(&self) -> impl Iterator<Item = FlipElement> + '_ {
        [false, true]
            .into_iter()
            .flat_map(move |flip| (0..=self.mask()).map(move |bits| self.from_bits(bits, flip)))
    }
}

impl GroupLaw for FlipGroup {
    type Elem = FlipElement;

    fn identity(&self) -> FlipElement {
        self.from_bits(0, false)
    }

    fn op(&self, a: &FlipElement, b: &FlipElement) -> FlipElement {
        self.multiply(a, b).expect("elements of one flip window")
    }

    /// `(v, a)⁻¹ = (φ^a(v), a)` since `φ` is an involution and `H` has exponent 2.
    fn inv(&self, a: &FlipElement) -> FlipElement {
        let bits = if a.flip { self.reflect(a.bits) } else { a.bits };
        FlipElement { bits, ..*a }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g4() -> FlipGroup {
        FlipGroup::new(4).unwrap()
    }

    #[test]
    fn vectors_add() {
        let g = g4();
        let v = g.element(&[-1, 2], false).unwrap();
        let w = g.element(&[2, 3], false).unwrap();
        assert_eq!(g.op(&v, &w), g.element(&[-1, 3], false).unwrap());
    }

    #[test]
    fn phi_has_order_two() {
        let g = g4();
        assert_eq!(g.op(&g.phi(), &g.phi()), g.identity());
    }

    #[test]
    fn conjugation_by_phi_reflects() {
        let g = g4();
        let e3 = g.unit(3).unwrap();
        let c = g.op(&g.op(&g.phi(), &e3), &g.phi());
        assert_eq!(c, g.unit(-3).unwrap());
        assert_eq!(g.conjugate(&e3, &g.phi()), g.unit(-3).unwrap());
    }

    #[test]
    fn overflow_and_mismatch() {
        let g = g4();
        assert_eq!(g.unit(5), Err(GroupError::FlipOverflow { index: 5, half_width: 4 }));
        let other = FlipGroup::new(3).unwrap().identity();
        assert_eq!(g.multiply(&g.identity(), &other), Err(GroupError::FlipWindowMismatch(4, 3)));
        assert!(FlipGroup::new(64).is_err());
    }

    #[test]
    fn counts() {
        let g = g4();
        assert_eq!(g.vectors().count(), 512);
        assert_eq!(g.elements().count(), 1024);
    }

    fn arb(g: FlipGroup) -> impl Strategy<Value = FlipElement> {
        (0u128..(1 << 9), any::<bool>()).prop_map(move |(b, f)| g.from_bits(b, f))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb(g4()), b in arb(g4()), c in arb(g4())) {
            let g = g4();
            prop_assert_eq!(g.op(&g.op(&a, &b), &c), g.op(&a, &g.op(&b, &c)));
            prop_assert_eq!(g.op(&a, &g.inv(&a)), g.identity());
            prop_assert_eq!(g.op(&g.inv(&a), &a), g.identity());
        }

        #[test]
        fn square_of_flip_element_is_phi_fixed(bits in 0u128..(1 << 9)) {
            let g = g4();
            let x = g.from_bits(bits, true);
            let sq = g.op(&x, &x);
            prop_assert!(!sq.is_flip());
            let v = g.from_bits(bits, false);
            let phi_v = g.conjugate(&v, &g.phi());
            prop_assert_eq!(sq, g.op(&v, &phi_v));
            prop_assert_eq!(g.conjugate(&sq, &g.phi()), sq);
        }
    }
}
