use std::fmt;

use serde::{Deserialize, Serialize};

use super::{TimeValue, Wavefront};
use crate::error::{Error, Result};

/// Square matrix of arrival times, stored row-major.
///
/// Entry `(j, i)` is the delay of the edge `i -> j`: column `i` lists the
/// outward connections of node `i`, so a one-hot input at `i` selects that
/// column under [`vmm`](super::vmm).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<TimeValue>>", into = "Vec<Vec<TimeValue>>")]
pub struct TropicalMatrix {
    n: usize,
    entries: Vec<TimeValue>,
}

impl TropicalMatrix {
    /// The tropical zero matrix (no edges).
    pub fn infinite(n: usize) -> Self {
        TropicalMatrix {
            n,
            entries: vec![TimeValue::Infinity; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<TimeValue>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(TropicalMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> TimeValue {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: TimeValue) {
        self.entries[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> Wavefront {
        self.entries[row * self.n..(row + 1) * self.n].to_vec().into()
    }

    pub fn column(&self, col: usize) -> Wavefront {
        (0..self.n).map(|r| self.get(r, col)).collect()
    }

    pub fn set_column(&mut self, col: usize, values: &Wavefront) {
        for (r, v) in values.iter().enumerate() {
            self.set(r, col, *v);
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[TimeValue]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn entries(&self) -> impl Iterator<Item = TimeValue> + '_ {
        self.entries.iter().copied()
    }

    /// Copy into the top-left corner of a larger all-`INF` matrix.
    pub fn padded(&self, n: usize) -> TropicalMatrix {
        assert!(n >= self.n);
        let mut out = TropicalMatrix::infinite(n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    /// Top-left `n x n` block.
    pub fn truncated(&self, n: usize) -> TropicalMatrix {
        assert!(n <= self.n);
        let mut out = TropicalMatrix::infinite(n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<TimeValue>>> for TropicalMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<TimeValue>>) -> Result<Self> {
        TropicalMatrix::from_rows(rows)
    }
}

impl From<TropicalMatrix> for Vec<Vec<TimeValue>> {
    fn from(m: TropicalMatrix) -> Self {
        m.rows().take(m.n).map(<[TimeValue]>::to_vec).collect()
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}
