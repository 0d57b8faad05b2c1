//! Stateless race-logic primitives.
//!
//! Everything here is a pure function of its inputs. Except for
//! [`binarize`] and [`normalize`], every operation commutes with a uniform
//! time shift of its inputs, which is what makes it implementable without
//! memory.

use serde::{Deserialize, Serialize};

use super::{TimeValue, TropicalMatrix, Wavefront};
use crate::error::{Error, Result};

/// How an inhibit gate resolves an inhibitor and data edge arriving on the same tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    /// A simultaneous inhibitor blocks the data edge.
    #[default]
    StrictBlock,
    /// A simultaneous data edge passes.
    PassOnTie,
}

/// Tropical addition: first arrival.
pub fn t_add(a: TimeValue, b: TimeValue) -> TimeValue {
    a.min(b)
}

/// Tropical multiplication: delay one edge by the other.
///
/// Panics if the tick counter overflows `u64`; range limits of the modeled
/// memory are enforced separately at write time.
pub fn t_mul(a: TimeValue, b: TimeValue) -> TimeValue {
    a.checked_delay(b).expect("tick counter overflow")
}

/// Last arrival.
pub fn t_max(a: TimeValue, b: TimeValue) -> TimeValue {
    a.max(b)
}

/// `inhibitor ⊣ data`: data passes only if it beats the inhibitor.
pub fn t_inhibit(inhibitor: TimeValue, data: TimeValue, tie: TieMode) -> TimeValue {
    let passes = match tie {
        TieMode::StrictBlock => data < inhibitor,
        TieMode::PassOnTie => data <= inhibitor,
    };
    if passes {
        data
    } else {
        TimeValue::Infinity
    }
}

/// Windowed coincidence detector: `[ε ⊗ (a ⊕ b)] ⊣ (a ⊕′ b)`.
///
/// Returns the later arrival when both edges land within `epsilon` ticks of
/// each other, else `INF`. `epsilon` must be at least 1.
pub fn coincidence(a: TimeValue, b: TimeValue, epsilon: u64) -> Result<TimeValue> {
    if epsilon == 0 {
        return Err(Error::InvalidEpsilon);
    }
    let window = t_mul(TimeValue::Finite(epsilon), t_add(a, b));
    Ok(t_inhibit(window, t_max(a, b), TieMode::StrictBlock))
}

/// Element-wise two-operand operations available in the arithmetic unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EwOp {
    Min,
    Max,
    /// The left operand inhibits the right.
    Inhibit,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn ew(op: EwOp, u: &Wavefront, v: &Wavefront, tie: TieMode) -> Result<Wavefront> {
    check_len(u.len(), v.len())?;
    let f = |(&a, &b): (&TimeValue, &TimeValue)| match op {
        EwOp::Min => t_add(a, b),
        EwOp::Max => t_max(a, b),
        EwOp::Inhibit => t_inhibit(a, b, tie),
    };
    Ok(u.iter().zip(v.iter()).map(f).collect())
}

pub fn ew_coincidence(u: &Wavefront, v: &Wavefront, epsilon: u64) -> Result<Wavefront> {
    check_len(u.len(), v.len())?;
    u.iter()
        .zip(v.iter())
        .map(|(&a, &b)| coincidence(a, b, epsilon))
        .collect()
}

/// Element-wise tropical product of two wavefronts.
pub fn ew_mul(u: &Wavefront, v: &Wavefront) -> Result<Wavefront> {
    check_len(u.len(), v.len())?;
    Ok(u.iter().zip(v.iter()).map(|(&a, &b)| t_mul(a, b)).collect())
}

/// Delay every element by a constant.
pub fn scale(c: TimeValue, x: &Wavefront) -> Wavefront {
    x.map(|t| t_mul(c, t))
}

/// Tropical matrix-vector product, `y_j = min_i (A[j][i] + x_i)`.
pub fn vmm(a: &TropicalMatrix, x: &Wavefront) -> Result<Wavefront> {
    check_len(a.n(), x.len())?;
    let y = a
        .rows()
        .take(a.n())
        .map(|row| {
            row.iter()
                .zip(x.iter())
                .fold(TimeValue::Infinity, |acc, (&w, &xi)| t_add(acc, t_mul(w, xi)))
        })
        .collect();
    Ok(y)
}

/// Keep only the first arrival, carrying its time; ties go to the lowest index.
pub fn argmin_onehot(x: &Wavefront) -> Wavefront {
    let mut out = Wavefront::infinite(x.len()).into_vec();
    let winner = x
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_finite())
        .min_by_key(|&(i, &t)| (t, i));
    if let Some((i, &t)) = winner {
        out[i] = t;
    }
    out.into()
}

/// Push every finite element out to `t_max`, leaving `INF` alone.
pub fn binarize(x: &Wavefront, t_max_value: TimeValue) -> Result<Wavefront> {
    if t_max_value.is_infinite() {
        return Err(Error::InvalidArgument("binarize needs a finite t_max".into()));
    }
    if let Some(&bad) = x.iter().find(|&&t| t.is_finite() && t > t_max_value) {
        return Err(Error::RangeViolation {
            value: bad,
            t_max: t_max_value,
        });
    }
    Ok(x.map(|t| t_max(t_max_value, t)))
}

/// A wavefront with its temporal origin moved to its first arrival.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedWavefront {
    pub shape: Wavefront,
    /// The subtracted norm; `0` for an all-`INF` input.
    pub constant: TimeValue,
}

impl NormalizedWavefront {
    /// Undo the normalization.
    pub fn denormalize(&self) -> Wavefront {
        scale(self.constant, &self.shape)
    }
}

pub fn normalize(x: &Wavefront) -> NormalizedWavefront {
    match min_reduce(x) {
        TimeValue::Finite(norm) => NormalizedWavefront {
            shape: x.map(|t| t.advance_origin(norm)),
            constant: TimeValue::Finite(norm),
        },
        TimeValue::Infinity => NormalizedWavefront {
            shape: x.clone(),
            constant: TimeValue::ZERO,
        },
    }
}

pub fn min_reduce(x: &Wavefront) -> TimeValue {
    x.iter().copied().fold(TimeValue::Infinity, t_add)
}

/// Last arrival of the volley. An empty wavefront reduces to `INF`.
pub fn max_reduce(x: &Wavefront) -> TimeValue {
    if x.is_empty() {
        return TimeValue::Infinity;
    }
    x.iter().copied().fold(TimeValue::ZERO, t_max)
}
