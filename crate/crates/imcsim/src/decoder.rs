//! Thermometer digitization of the settled RBL voltage.
//!
//! One comparator per ladder gap, references sorted high to low, so a valid
//! readout is always a run of 0s (voltage below reference) followed by 1s:
//! the number of 0s is the MAC count. A 1 above a 0 means comparator offsets
//! broke the ordering; that pattern carries no count and decodes to an error
//! rather than a guess.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Comparator reference bank; `thresholds[0]` is the highest reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdBank {
    thresholds: Vec<f64>,
    offsets: Vec<f64>,
}

impl ThresholdBank {
    /// Builds a bank with zero offsets; references must strictly decrease.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::ConfigInvalid("threshold bank must not be empty".into()));
        }
        if let Some(bad) = thresholds.iter().find(|t| !t.is_finite()) {
            return Err(Error::ConfigInvalid(format!("non-finite threshold {bad}")));
        }
        for (i, pair) in thresholds.windows(2).enumerate() {
            if pair[1] >= pair[0] {
                return Err(Error::NonMonotoneLadder { index: i + 1 });
            }
        }
        let offsets = vec![0.0; thresholds.len()];
        Ok(Self { thresholds, offsets })
    }

    /// Replaces the per-comparator additive offsets.
    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Result<Self> {
        if offsets.len() != self.thresholds.len() {
            return Err(Error::ConfigInvalid(format!(
                "expected {} offsets, got {}",
                self.thresholds.len(),
                offsets.len()
            )));
        }
        if let Some(bad) = offsets.iter().find(|o| !o.is_finite()) {
            return Err(Error::ConfigInvalid(format!("non-finite offset {bad}")));
        }
        self.offsets = offsets;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Raw comparator readout: bit i fires iff `v` exceeds reference i plus
    /// its offset.
    pub fn compare(&self, v: f64) -> ThermometerCode {
        let bits = self
            .thresholds
            .iter()
            .zip(&self.offsets)
            .map(|(t, o)| v > t + o)
            .collect();
        ThermometerCode::from_bits(bits)
    }

    /// Comparator readout with additional per-trial offsets on top of the
    /// bank's own.
    pub fn compare_with_extra_offsets(&self, v: f64, extra: &[f64]) -> Result<ThermometerCode> {
        if extra.len() != self.thresholds.len() {
            return Err(Error::ConfigInvalid(format!(
                "expected {} extra offsets, got {}",
                self.thresholds.len(),
                extra.len()
            )));
        }
        let bits = self
            .thresholds
            .iter()
            .zip(&self.offsets)
            .zip(extra)
            .map(|((t, o), e)| v > t + o + e)
            .collect();
        Ok(ThermometerCode::from_bits(bits))
    }

    /// Full digitization: compare, then count.
    pub fn decode(&self, v: f64) -> Result<usize> {
        self.compare(v).to_count()
    }
}

/// Midpoint references between adjacent ladder levels, one per gap.
pub fn derive_thresholds(ladder: &[f64]) -> Result<ThresholdBank> {
    if ladder.len() < 2 {
        return Err(Error::ConfigInvalid(format!(
            "threshold derivation needs at least 2 ladder levels, got {}",
            ladder.len()
        )));
    }
    for (i, pair) in ladder.windows(2).enumerate() {
        if pair[1] >= pair[0] {
            return Err(Error::NonMonotoneLadder { index: i + 1 });
        }
    }
    // Midpoints inherit strict ordering, and each sits strictly inside its gap.
    let thresholds = ladder.windows(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect();
    ThresholdBank::new(thresholds)
}

/// Comparator output vector; bit 0 belongs to the highest reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThermometerCode {
    bits: Vec<bool>,
}

impl ThermometerCode {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Count encoded by a valid zeros-then-ones pattern; anything else is a
    /// bubble.
    pub fn to_count(&self) -> Result<usize> {
        let zeros = self.bits.iter().take_while(|b| !**b).count();
        if self.bits[zeros..].iter().all(|b| *b) {
            Ok(zeros)
        } else {
            Err(Error::Bubble { code: self.to_string() })
        }
    }
}

impl fmt::Display for ThermometerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.bits {
            f.write_str(if *bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ThermometerCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::ConfigInvalid(format!(
                    "thermometer code may contain only '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Self::from_bits)
    }
}
