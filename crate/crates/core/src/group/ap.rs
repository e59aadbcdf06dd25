use std::cmp::Ordering;
use std::fmt;

use serde_json::{Map, Value};

use super::{GroupError, GroupLaw, Prime};
use crate::coarse::{PointId, Window};

/// An element `m₁x₁ + ... + m_kx_k` of the free abelian group of exponent `p`,
/// kept in canonical form: terms sorted by point, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApElement {
    p: Prime,
    terms: Vec<(PointId, u32)>,
}

impl ApElement {
    pub fn zero(p: Prime) -> Self {
        Self { p, terms: Vec::new() }
    }

    pub fn generator(p: Prime, x: PointId) -> Self {
        Self { p, terms: vec![(x, 1)] }
    }

    /// Sums arbitrary integer coefficients into canonical form.
    pub fn from_terms(p: Prime, terms: impl IntoIterator<Item = (PointId, i64)>) -> Self {
        let modulus = i64::from(p.get());
        let mut raw: Vec<(PointId, i64)> = terms.into_iter().collect();
        raw.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(PointId, u32)> = Vec::with_capacity(raw.len());
        for (x, m) in raw {
            let m = m.rem_euclid(modulus) as u32;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = (last.1 + m) % p.get(),
                _ => out.push((x, m)),
            }
        }
        out.retain(|t| t.1 != 0);
        Self { p, terms: out }
    }

    /// `x - y`.
    pub fn difference(p: Prime, x: PointId, y: PointId) -> Self {
        Self::from_terms(p, [(x, 1), (y, -1)])
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &[(PointId, u32)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = PointId> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn coefficient(&self, x: PointId) -> u32 {
        self.terms
            .binary_search_by_key(&x, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Number of points in the support.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients mod `p`; its kernel is the augmentation subgroup.
    pub fn augmentation(&self) -> u32 {
        self.terms.iter().fold(0, |acc, t| (acc + t.1) % self.p.get())
    }

    fn check_modulus(&self, other: &Self) -> Result<(), GroupError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(GroupError::ModulusMismatch(self.p.get(), other.p.get()))
        }
    }

    /// Merge of two canonical term lists with `self + k·other`.
    fn axpy(&self, k: u32, other: &Self) -> Self {
        let p = self.p.get();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (x, m) = match ord {
                Ordering::Less => {
                    i += 1;
                    self.terms[i - 1]
                }
                Ordering::Greater => {
                    j += 1;
                    let (x, m) = other.terms[j - 1];
                    (x, (k * m) % p)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    let (x, a) = self.terms[i - 1];
                    (x, (a + k * other.terms[j - 1].1) % p)
                }
            };
            if m != 0 {
                out.push((x, m));
            }
        }
        Self { p: self.p, terms: out }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        self.check_modulus(other)?;
        Ok(self.axpy(1, other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.check_modulus(other)?;
        Ok(self.axpy(self.p.get() - 1, other))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p.get() - 1)
    }

    pub fn scale(&self, k: u32) -> Self {
        let p = self.p.get();
        let k = k % p;
        let terms = if k == 0 {
            Vec::new()
        } else {
            self.terms.iter().map(|&(x, m)| (x, m * k % p)).collect()
        };
        Self { p: self.p, terms }
    }

    /// Dense index `Σ m_x p^x` over a window of `n` points.
    pub fn encode(&self, n: usize) -> usize {
        let p = self.p.get() as usize;
        self.terms.iter().fold(0, |acc, &(x, m)| {
            debug_assert!(x < n, "point {x} outside a window of {n}");
            acc + m as usize * p.pow(x as u32)
        })
    }

    pub fn decode(p: Prime, n: usize, mut index: usize) -> Self {
        let q = p.get() as usize;
        let mut terms = Vec::new();
        for x in 0..n {
            let m = index % q;
            index /= q;
            if m != 0 {
                terms.push((x, m as u32));
            }
        }
        Self { p, terms }
    }

    /// Every element over a window of `n` points, in index order.
    pub fn enumerate(p: Prime, n: usize) -> impl Iterator<Item = Self> {
        let size = (p.get() as usize).pow(n as u32);
        (0..size).map(move |i| Self::decode(p, n, i))
    }

    /// Human-readable form using window labels, e.g. `x0+2x3`; `0` for zero.
    pub fn render(&self, window: &Window) -> String {
        self.render_with(|x| window.label(x).to_owned())
    }

    fn render_with(&self, label: impl Fn(PointId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|&(x, m)| if m == 1 { label(x) } else { format!("{m}{}", label(x)) })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// `{label: coefficient}`.
    pub fn to_json(&self, window: &Window) -> Value {
        let map: Map<String, Value> = self
            .terms
            .iter()
            .map(|&(x, m)| (window.label(x).to_owned(), Value::from(m)))
            .collect();
        Value::Object(map)
    }
}

impl fmt::Debug for ApElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.render_with(|x| format!("x{x}")), self.p.get())
    }
}

impl fmt::Display for ApElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|x| format!("x{x}")))
    }
}

/// `A(X)` for a fixed prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApGroup {
    pub p: Prime,
}

impl GroupLaw for ApGroup {
    type Elem = ApElement;

    fn identity(&self) -> ApElement {
        ApElement::zero(self.p)
    }

    fn op(&self, a: &ApElement, b: &ApElement) -> ApElement {
        a.add(b).expect("elements of one group")
    }

    fn inv(&self, a: &ApElement) -> ApElement {
        a.neg()
    }

    fn is_abelian(&self) -> bool {
        true
    }
}
