//! Temporal wavefront memory: vector registers and matrix banks with a
//! finite dynamic range.
//!
//! Registers play back exactly what was captured. The clock line of the
//! array subtracts the read dead time, so it never shows up in the model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::{normalize, TimeValue, TropicalMatrix, Wavefront};

/// What a write does with a finite value beyond `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowPolicy {
    #[default]
    Strict,
    SaturateToInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeConfig {
    pub bits: u32,
    #[serde(default)]
    pub overflow_policy: OverflowPolicy,
}

impl Default for RangeConfig {
    fn default() -> Self {
        RangeConfig {
            bits: 5,
            overflow_policy: OverflowPolicy::Strict,
        }
    }
}

impl RangeConfig {
    pub fn new(bits: u32) -> Result<Self> {
        let cfg = RangeConfig {
            bits,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_policy(mut self, policy: OverflowPolicy) -> Self {
        self.overflow_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if (1..=63).contains(&self.bits) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "bit width must be in 1..=63, got {}",
                self.bits
            )))
        }
    }

    pub fn t_max_ticks(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    pub fn t_max(&self) -> TimeValue {
        TimeValue::Finite(self.t_max_ticks())
    }

    /// Range-check a wavefront for storage. Returns the stored value and the
    /// number of elements that saturated.
    pub fn clip(&self, w: &Wavefront) -> Result<(Wavefront, usize)> {
        let t_max = self.t_max();
        let mut overflows = 0;
        let mut out = Vec::with_capacity(w.len());
        for &t in w {
            if t.is_finite() && t > t_max {
                match self.overflow_policy {
                    OverflowPolicy::Strict => return Err(Error::RangeViolation { value: t, t_max }),
                    OverflowPolicy::SaturateToInfinity => {
                        overflows += 1;
                        out.push(TimeValue::Infinity);
                    }
                }
            } else {
                out.push(t);
            }
        }
        Ok((out.into(), overflows))
    }
}

/// Side effects of a register write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WriteOutcome {
    /// Norm constant emitted by a projective write.
    pub norm_constant: Option<TimeValue>,
    pub overflow_events: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorRegister {
    name: String,
    width: usize,
    contents: Option<Wavefront>,
    norm_constant: TimeValue,
}

impl VectorRegister {
    pub fn new(name: impl Into<String>, width: usize) -> Self {
        VectorRegister {
            name: name.into(),
            width,
            contents: None,
            norm_constant: TimeValue::ZERO,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Norm constant recorded by the last write (`0` unless it was projective).
    pub fn norm_constant(&self) -> TimeValue {
        self.norm_constant
    }

    pub fn is_initialized(&self) -> bool {
        self.contents.is_some()
    }

    /// Reallocate with a new width; contents are discarded.
    pub fn resize(&mut self, width: usize) {
        self.width = width;
        self.contents = None;
        self.norm_constant = TimeValue::ZERO;
    }

    fn check_width(&self, w: &Wavefront) -> Result<()> {
        if w.len() == self.width {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.width,
                found: w.len(),
            })
        }
    }

    /// Capture `w` as-is (`:=`).
    pub fn write_direct(&mut self, w: &Wavefront, range: &RangeConfig) -> Result<WriteOutcome> {
        self.check_width(w)?;
        let (stored, overflow_events) = range.clip(w)?;
        self.contents = Some(stored);
        self.norm_constant = TimeValue::ZERO;
        Ok(WriteOutcome {
            norm_constant: None,
            overflow_events,
        })
    }

    /// Capture the normalized shape of `w` (`:≅`), with the first arrival
    /// standing in for the clock line. Only the shape is range-checked.
    pub fn write_projective(&mut self, w: &Wavefront, range: &RangeConfig) -> Result<WriteOutcome> {
        self.check_width(w)?;
        let normalized = normalize(w);
        let (stored, overflow_events) = range.clip(&normalized.shape)?;
        self.contents = Some(stored);
        self.norm_constant = normalized.constant;
        Ok(WriteOutcome {
            norm_constant: Some(normalized.constant),
            overflow_events,
        })
    }

    pub fn read(&self) -> Result<&Wavefront> {
        self.contents
            .as_ref()
            .ok_or_else(|| Error::UninitializedRegister(self.name.clone()))
    }
}

/// A crossbar of delay cells holding a tropical matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixBank {
    name: String,
    entries: TropicalMatrix,
}

impl MatrixBank {
    /// A fresh bank holds the tropical zero matrix.
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        MatrixBank {
            name: name.into(),
            entries: TropicalMatrix::infinite(n),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &TropicalMatrix {
        &self.entries
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                found,
            })
        }
    }

    /// Program every cell. Returns the number of saturated cells.
    pub fn program(&mut self, a: &TropicalMatrix, range: &RangeConfig) -> Result<usize> {
        self.check_len(a.n())?;
        let mut programmed = a.clone();
        let mut overflows = 0;
        for c in 0..a.n() {
            let (col, o) = range.clip(&a.column(c))?;
            programmed.set_column(c, &col);
            overflows += o;
        }
        self.entries = programmed;
        Ok(overflows)
    }

    /// Replace the column selected by a one-hot with `w`. An all-`INF`
    /// selector leaves the bank unchanged. Returns saturated cell count.
    pub fn write_column(
        &mut self,
        onehot: &Wavefront,
        w: &Wavefront,
        range: &RangeConfig,
    ) -> Result<usize> {
        self.check_len(onehot.len())?;
        self.check_len(w.len())?;
        let finite = onehot.count_finite();
        if finite > 1 {
            return Err(Error::NotOneHot { finite });
        }
        match onehot.finite_indices().next() {
            Some(col) => {
                let (stored, overflows) = range.clip(w)?;
                self.entries.set_column(col, &stored);
                Ok(overflows)
            }
            None => Ok(0),
        }
    }

    /// Erase (set to `INF`) every row whose mask element is `0`. Returns the
    /// number of rows erased.
    pub fn inhibit_rows(&mut self, mask: &Wavefront) -> Result<usize> {
        self.check_len(mask.len())?;
        if let Some((index, &value)) = mask
            .iter()
            .enumerate()
            .find(|(_, t)| !matches!(t, TimeValue::Infinity | TimeValue::Finite(0)))
        {
            return Err(Error::NotBinary { index, value });
        }
        let mut erased = 0;
        for row in mask.finite_indices() {
            for c in 0..self.n() {
                self.entries.set(row, c, TimeValue::Infinity);
            }
            erased += 1;
        }
        Ok(erased)
    }
}
