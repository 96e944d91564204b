//! Bit-accurate model of the 8T cell array.
//!
//! Writes go through the write port one row at a time; reads go through the
//! separate read port, where any subset of read word lines may assert at
//! once. Each column tracks whether its read bit line has been precharged
//! since the last evaluation: evaluating twice without a precharge is a
//! protocol violation, not a smaller number, so the model makes it an error.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Array dimensions; the reference design is 8x8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrayConfig {
    pub rows: usize,
    pub cols: usize,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self { rows: 8, cols: 8 }
    }
}

impl ArrayConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::ConfigInvalid(format!(
                "array needs at least 1 row and 1 column, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

/// Fixed-width bit sequence; index 0 is the top row / leftmost character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Parses a string of '0'/'1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::ConfigInvalid("bit word must not be empty".into()));
        }
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::ConfigInvalid(format!(
                    "bit word may contain only '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Self)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Bitwise AND of equal-length words.
    pub fn and(&self, other: &BitWord) -> Result<BitWord> {
        if self.len() != other.len() {
            return Err(Error::WordLengthMismatch { got: other.len(), expected: self.len() });
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| *a && *b).collect()))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.0 {
            f.write_str(if *bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Read-word-line activation mask; bit i drives the RWL of row i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RwlPattern(BitWord);

impl RwlPattern {
    pub fn new(mask: BitWord) -> Self {
        Self(mask)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mask(&self) -> &[bool] {
        self.0.bits()
    }
}

impl From<BitWord> for RwlPattern {
    fn from(word: BitWord) -> Self {
        Self::new(word)
    }
}

/// 3-to-8 row decoder: address becomes a one-hot RWL drive.
pub fn decode_address(addr: usize) -> Result<[bool; 8]> {
    if addr > 7 {
        return Err(Error::AddressOutOfRange { addr, limit: 7 });
    }
    let mut onehot = [false; 8];
    onehot[addr] = true;
    Ok(onehot)
}

/// Cell array with per-column precharge bookkeeping.
#[derive(Debug, Clone)]
pub struct CellArray {
    config: ArrayConfig,
    bits: Vec<bool>,        // row-major, rows * cols
    precharged: Vec<bool>,  // one flag per column
}

impl CellArray {
    /// Fresh array: all cells 0, every column precharged.
    pub fn new(config: ArrayConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            bits: vec![false; config.rows * config.cols],
            precharged: vec![true; config.cols],
        })
    }

    pub fn config(&self) -> ArrayConfig {
        self.config
    }

    pub fn rows(&self) -> usize {
        self.config.rows
    }

    pub fn cols(&self) -> usize {
        self.config.cols
    }

    fn index(&self, row: usize, col: usize) -> Result<usize> {
        if row >= self.config.rows {
            return Err(Error::AddressOutOfRange { addr: row, limit: self.config.rows - 1 });
        }
        if col >= self.config.cols {
            return Err(Error::AddressOutOfRange { addr: col, limit: self.config.cols - 1 });
        }
        Ok(row * self.config.cols + col)
    }

    /// Write-port store; read-path state is untouched.
    pub fn write_bit(&mut self, row: usize, col: usize, bit: bool) -> Result<()> {
        let i = self.index(row, col)?;
        self.bits[i] = bit;
        Ok(())
    }

    /// Read-port view of one cell (no RBL involved, non-destructive).
    pub fn read_bit(&self, row: usize, col: usize) -> Result<bool> {
        let i = self.index(row, col)?;
        Ok(self.bits[i])
    }

    /// Stores a full column word top to bottom; returns write cycles spent,
    /// one per row.
    pub fn load_column_word(&mut self, col: usize, word: &BitWord) -> Result<usize> {
        if word.len() != self.config.rows {
            return Err(Error::WordLengthMismatch { got: word.len(), expected: self.config.rows });
        }
        for (row, bit) in word.bits().iter().enumerate() {
            self.write_bit(row, col, *bit)?;
        }
        Ok(self.config.rows)
    }

    /// Current content of one column, top to bottom.
    pub fn column_word(&self, col: usize) -> Result<BitWord> {
        if col >= self.config.cols {
            return Err(Error::AddressOutOfRange { addr: col, limit: self.config.cols - 1 });
        }
        let bits = (0..self.config.rows)
            .map(|row| self.bits[row * self.config.cols + col])
            .collect();
        Ok(BitWord::from_bits(bits))
    }

    /// Recharges one column's RBL to the rail.
    pub fn precharge_column(&mut self, col: usize) -> Result<()> {
        if col >= self.config.cols {
            return Err(Error::AddressOutOfRange { addr: col, limit: self.config.cols - 1 });
        }
        self.precharged[col] = true;
        Ok(())
    }

    /// Recharges every column.
    pub fn precharge_all(&mut self) {
        self.precharged.fill(true);
    }

    pub fn is_precharged(&self, col: usize) -> Result<bool> {
        if col >= self.config.cols {
            return Err(Error::AddressOutOfRange { addr: col, limit: self.config.cols - 1 });
        }
        Ok(self.precharged[col])
    }

    /// Evaluates one column: counts selected 1-cells and consumes the
    /// column's precharge.
    pub fn evaluate_column(&mut self, pattern: &RwlPattern, col: usize) -> Result<usize> {
        if col >= self.config.cols {
            return Err(Error::AddressOutOfRange { addr: col, limit: self.config.cols - 1 });
        }
        if pattern.len() != self.config.rows {
            return Err(Error::WordLengthMismatch {
                got: pattern.len(),
                expected: self.config.rows,
            });
        }
        if !self.precharged[col] {
            return Err(Error::NotPrecharged { col });
        }
        self.precharged[col] = false;
        let count = pattern
            .mask()
            .iter()
            .enumerate()
            .filter(|(row, rwl)| **rwl && self.bits[row * self.config.cols + col])
            .count();
        Ok(count)
    }

    /// Evaluates every column under one shared RWL pattern.
    ///
    /// All columns must be precharged before any precharge is consumed, so a
    /// failed call leaves the array state untouched.
    pub fn active_counts(&mut self, pattern: &RwlPattern) -> Result<Vec<usize>> {
        if pattern.len() != self.config.rows {
            return Err(Error::WordLengthMismatch {
                got: pattern.len(),
                expected: self.config.rows,
            });
        }
        if let Some(col) = self.precharged.iter().position(|p| !p) {
            return Err(Error::NotPrecharged { col });
        }
        let counts = (0..self.config.cols)
            .map(|col| {
                self.precharged[col] = false;
                pattern
                    .mask()
                    .iter()
                    .enumerate()
                    .filter(|(row, rwl)| **rwl && self.bits[row * self.config.cols + col])
                    .count()
            })
            .collect();
        Ok(counts)
    }
}
