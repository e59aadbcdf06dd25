use std::collections::HashMap;
use std::sync::Arc;

use super::CoarseError;

/// Index of a point inside its [`Window`].
pub type PointId = usize;

/// A finite, ordered sample of a (possibly infinite) coarse space.
///
/// Points are identified by their position; labels are the human-readable
/// names used by the parsers and in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    labels: Vec<String>,
    index: HashMap<String, PointId>,
}

impl Window {
    pub fn new<I, S>(labels: I) -> Result<Self, CoarseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(CoarseError::EmptyWindow);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(CoarseError::DuplicatePoint(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// `x0, x1, ..., x{n-1}`.
    pub fn indexed(n: usize) -> Arc<Self> {
        assert!(n > 0, "a window needs at least one point");
        Arc::new(Self::new((0..n).map(|i| format!("x{i}"))).expect("generated labels are distinct"))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<PointId> {
        self.index.get(label).copied()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.labels.len()
    }

    pub fn contains(&self, p: PointId) -> bool {
        p < self.labels.len()
    }

    pub(crate) fn check(&self, p: PointId) -> Result<(), CoarseError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CoarseError::UnknownPoint(p))
        }
    }
}

pub(crate) fn same_window(a: &Arc<Window>, b: &Arc<Window>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
