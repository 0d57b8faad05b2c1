use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::TimeValue;

/// A volley of rising edges: the tropical vector.
///
/// The length is fixed at construction; elements can be read but the
/// vector cannot grow or shrink.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Wavefront(Vec<TimeValue>);

impl Wavefront {
    pub fn new(elements: Vec<TimeValue>) -> Self {
        Wavefront(elements)
    }

    /// Every element at `INF` (the tropical zero vector).
    pub fn infinite(len: usize) -> Self {
        Wavefront(vec![TimeValue::Infinity; len])
    }

    pub fn splat(len: usize, value: TimeValue) -> Self {
        Wavefront(vec![value; len])
    }

    /// Tropical one-hot: `0` at `index`, `INF` elsewhere.
    pub fn one_hot(len: usize, index: usize) -> Self {
        let mut v = vec![TimeValue::Infinity; len];
        v[index] = TimeValue::ZERO;
        Wavefront(v)
    }

    /// Convenience constructor from optional ticks (`None` is `INF`).
    pub fn from_ticks<I>(ticks: I) -> Self
    where
        I: IntoIterator<Item = Option<u64>>,
    {
        ticks
            .into_iter()
            .map(|t| t.map_or(TimeValue::Infinity, TimeValue::Finite))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TimeValue> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[TimeValue] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<TimeValue> {
        self.0
    }

    /// Indices of the finite elements.
    pub fn finite_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_finite())
            .map(|(i, _)| i)
    }

    pub fn count_finite(&self) -> usize {
        self.finite_indices().count()
    }

    pub fn map(&self, f: impl FnMut(TimeValue) -> TimeValue) -> Wavefront {
        self.0.iter().copied().map(f).collect()
    }
}

impl Index<usize> for Wavefront {
    type Output = TimeValue;

    fn index(&self, index: usize) -> &TimeValue {
        &self.0[index]
    }
}

impl FromIterator<TimeValue> for Wavefront {
    fn from_iter<I: IntoIterator<Item = TimeValue>>(iter: I) -> Self {
        Wavefront(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Wavefront {
    type Item = &'a TimeValue;
    type IntoIter = std::slice::Iter<'a, TimeValue>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl From<Vec<TimeValue>> for Wavefront {
    fn from(v: Vec<TimeValue>) -> Self {
        Wavefront(v)
    }
}

impl fmt::Debug for Wavefront {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Wavefront {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Shorthand for literal wavefronts in tests and examples: `wf![3, inf, 0]`.
#[macro_export]
macro_rules! wf {
    (@elem inf) => { $crate::tropical::TimeValue::Infinity };
    (@elem $e:expr) => { $crate::tropical::TimeValue::Finite($e) };
    ($($e:tt),* $(,)?) => {
        $crate::tropical::Wavefront::new(vec![$($crate::wf!(@elem $e)),*])
    };
}
