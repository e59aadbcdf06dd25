use super::{ApElement, GroupError, GroupLaw, ReducedWord, VarietyTag};

/// The homomorphism out of the free object of a variety determined by the
/// images of the generators.
#[derive(Debug, Clone)]
pub struct Homomorphism<'g, G: GroupLaw> {
    target: &'g G,
    images: Vec<G::Elem>,
    variety: VarietyTag,
}

/// Extends `images[x]` (the image of generator `x`) to a homomorphism.
///
/// For `AbelianExpP(p)` the images must commute pairwise and have exponent
/// dividing `p`; this is checked on the generator images, which is enough
/// for the generated subgroup to lie in the variety.
pub fn extend_to_hom<G: GroupLaw>(
    target: &G,
    images: Vec<G::Elem>,
    variety: VarietyTag,
) -> Result<Homomorphism<'_, G>, GroupError> {
    if let VarietyTag::AbelianExpP(p) = variety {
        let e = target.identity();
        for (x, img) in images.iter().enumerate() {
            if target.pow(img, u64::from(p.get())) != e {
                return Err(GroupError::ExponentViolation { point: x, p: p.get() });
            }
        }
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if target.op(&images[a], &images[b]) != target.op(&images[b], &images[a]) {
                    return Err(GroupError::NonCommuting { a, b });
                }
            }
        }
    }
    Ok(Homomorphism { target, images, variety })
}

impl<G: GroupLaw> Homomorphism<'_, G> {
    pub fn image_of_generator(&self, x: usize) -> &G::Elem {
        &self.images[x]
    }

    pub fn variety(&self) -> VarietyTag {
        self.variety
    }

    /// `h(Σ mₓ x) = Σ mₓ f(x)`; only defined out of `A(X)`.
    pub fn apply_ap(&self, a: &ApElement) -> Result<G::Elem, GroupError> {
        match self.variety {
            VarietyTag::AbelianExpP(p) if p == a.modulus() => {}
            other => {
                return Err(GroupError::VarietyMismatch {
                    expected: other.to_string(),
                    found: VarietyTag::AbelianExpP(a.modulus()).to_string(),
                })
            }
        }
        let mut acc = self.target.identity();
        for &(x, m) in a.terms() {
            let img = self.images.get(x).ok_or(GroupError::ImageCount {
                expected: x + 1,
                found: self.images.len(),
            })?;
            acc = self.target.op(&acc, &self.target.pow(img, u64::from(m)));
        }
        Ok(acc)
    }

    /// Product of letter images. Defined for every variety, since `F(X)`
    /// surjects onto each free object.
    pub fn apply_word(&self, w: &ReducedWord) -> Result<G::Elem, GroupError> {
        let mut acc = self.target.identity();
        for l in w.letters() {
            let img = self.images.get(l.point).ok_or(GroupError::ImageCount {
                expected: l.point + 1,
                found: self.images.len(),
            })?;
            let factor = if l.inverse { self.target.inv(img) } else { img.clone() };
            acc = self.target.op(&acc, &factor);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{abelianize, ApGroup, FlipGroup, FreeGroup, Letter, Prime, TrivialGroup};
    use super::*;
    use proptest::prelude::*;

    const P2: Prime = Prime::TWO;

    fn gens(n: usize) -> Vec<ApElement> {
        (0..n).map(|x| ApElement::generator(P2, x)).collect()
    }

    #[test]
    fn identity_images_give_identity_hom() {
        let g = ApGroup { p: P2 };
        let h = extend_to_hom(&g, gens(4), VarietyTag::AbelianExpP(P2)).unwrap();
        for a in ApElement::enumerate(P2, 4) {
            assert_eq!(h.apply_ap(&a).unwrap(), a);
        }
    }

    #[test]
    fn constant_identity_images_give_trivial_hom() {
        let g = ApGroup { p: P2 };
        let h = extend_to_hom(&g, vec![g.identity(); 4], VarietyTag::AbelianExpP(P2)).unwrap();
        assert!(ApElement::enumerate(P2, 4).all(|a| h.apply_ap(&a).unwrap().is_zero()));
        let t = extend_to_hom(&TrivialGroup, vec![(); 3], VarietyTag::AllGroups).unwrap();
        assert_eq!(t.apply_word(&ReducedWord::quotient(0, 2)), Ok(()));
    }

    #[test]
    fn exponent_and_commutation_are_checked() {
        let g3 = ApGroup { p: Prime::new(3).unwrap() };
        let bad = vec![ApElement::generator(g3.p, 0)];
        assert_eq!(
            extend_to_hom(&g3, bad, VarietyTag::AbelianExpP(P2)).unwrap_err(),
            GroupError::ExponentViolation { point: 0, p: 2 }
        );
        let flip = FlipGroup::new(2).unwrap();
        let images = vec![flip.phi(), flip.unit(1).unwrap()];
        assert_eq!(
            extend_to_hom(&flip, images, VarietyTag::AbelianExpP(P2)).unwrap_err(),
            GroupError::NonCommuting { a: 0, b: 1 }
        );
    }

    #[test]
    fn ap_application_requires_the_abelian_variety() {
        let h = extend_to_hom(&FreeGroup, vec![ReducedWord::generator(0)], VarietyTag::AllGroups).unwrap();
        assert!(matches!(h.apply_ap(&ApElement::generator(P2, 0)), Err(GroupError::VarietyMismatch { .. })));
    }

    fn arb_word(n: usize, len: usize) -> impl Strategy<Value = ReducedWord> {
        proptest::collection::vec((0..n, any::<bool>()), 0..len).prop_map(|v| {
            ReducedWord::from_letters(v.into_iter().map(|(x, i)| Letter::new(x, i)))
        })
    }

    proptest! {
        #[test]
        fn id_into_ap_is_abelianization(w in arb_word(5, 10)) {
            let g = ApGroup { p: P2 };
            let h = extend_to_hom(&g, gens(5), VarietyTag::AllGroups).unwrap();
            prop_assert_eq!(h.apply_word(&w).unwrap(), abelianize(&w, P2));
        }

        #[test]
        fn extension_is_a_homomorphism(
            u in arb_word(3, 8),
            v in arb_word(3, 8),
            imgs in proptest::collection::vec((0u128..32, any::<bool>()), 3),
        ) {
            let flip = FlipGroup::new(2).unwrap();
            let images: Vec<_> = imgs.iter().map(|&(b, f)| flip.from_bits(b, f)).collect();
            let h = extend_to_hom(&flip, images.clone(), VarietyTag::AllGroups).unwrap();
            let uv = u.multiply(&v);
            prop_assert_eq!(
                h.apply_word(&uv).unwrap(),
                flip.op(&h.apply_word(&u).unwrap(), &h.apply_word(&v).unwrap())
            );
            for (x, img) in images.iter().enumerate() {
                prop_assert_eq!(&h.apply_word(&ReducedWord::generator(x)).unwrap(), img);
            }
        }

        #[test]
        fn ap_extension_is_a_homomorphism(
            a in proptest::collection::vec(0i64..3, 4),
            b in proptest::collection::vec(0i64..3, 4),
            imgs in proptest::collection::vec(proptest::collection::vec(0i64..3, 3), 4),
        ) {
            let p = Prime::new(3).unwrap();
            let g = ApGroup { p };
            let images: Vec<_> = imgs.into_iter().map(|c| ApElement::from_terms(p, c.into_iter().enumerate())).collect();
            let h = extend_to_hom(&g, images, VarietyTag::AbelianExpP(p)).unwrap();
            let a = ApElement::from_terms(p, a.into_iter().enumerate());
            let b = ApElement::from_terms(p, b.into_iter().enumerate());
            prop_assert_eq!(
                h.apply_ap(&a.add(&b).unwrap()).unwrap(),
                h.apply_ap(&a).unwrap().add(&h.apply_ap(&b).unwrap()).unwrap()
            );
        }
    }
}
