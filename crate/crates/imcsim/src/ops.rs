//! Operation pipeline: MAC, the Boolean layer, and the 1-bit adder.
//!
//! Everything here is one primitive wearing different masks. A MAC stores
//! operand B down a column, precharges, asserts A on the read word lines,
//! and decodes the settled voltage. The Boolean layer is the same evaluation
//! with both operand bits stored in rows 0 and 1 and both RWLs asserted:
//! count 2 is AND, count 0 is NOR, count 1 is XOR, and one evaluation yields
//! every derived function at once. Sum and carry of the adder are XOR and
//! AND read out of the same window.

use std::fmt;
use std::str::FromStr;

use crate::analog::{
    fit_discharge_model, fitted_ladder, model_voltage, AnalogParams, CalibrationTable,
};
use crate::array::{ArrayConfig, BitWord, CellArray, RwlPattern};
use crate::decoder::{derive_thresholds, ThermometerCode, ThresholdBank};
use crate::error::{Error, Result};
use crate::metrics::{parametric_energy_fj, Mode, LOGIC_COUNT_LIMIT};

/// One column evaluation, fully observed.
#[derive(Debug, Clone, PartialEq)]
pub struct MacResult {
    /// Active count popcount(A AND B) the column actually produced.
    pub count: usize,
    /// Settled RBL voltage, volts.
    pub v_rbl: f64,
    /// Comparator readout of that voltage.
    pub code: ThermometerCode,
    /// Per-operation energy, femtojoules.
    pub energy_fj: f64,
}

/// Boolean functions the count 0..=2 window encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicOp {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
}

impl LogicOp {
    pub const ALL: [LogicOp; 6] =
        [LogicOp::And, LogicOp::Nand, LogicOp::Or, LogicOp::Nor, LogicOp::Xor, LogicOp::Xnor];
}

impl fmt::Display for LogicOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicOp::And => "and",
            LogicOp::Nand => "nand",
            LogicOp::Or => "or",
            LogicOp::Nor => "nor",
            LogicOp::Xor => "xor",
            LogicOp::Xnor => "xnor",
        })
    }
}

impl FromStr for LogicOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "and" => Ok(LogicOp::And),
            "nand" => Ok(LogicOp::Nand),
            "or" => Ok(LogicOp::Or),
            "nor" => Ok(LogicOp::Nor),
            "xor" => Ok(LogicOp::Xor),
            "xnor" => Ok(LogicOp::Xnor),
            other => Err(Error::ConfigInvalid(format!(
                "op must be one of and/nand/or/nor/xor/xnor, got {other:?}"
            ))),
        }
    }
}

/// Every Boolean interpretation of one count, read out together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogicVerdict {
    pub and: bool,
    pub nand: bool,
    pub or: bool,
    pub nor: bool,
    pub xor: bool,
    pub xnor: bool,
    pub sum: bool,
    pub carry: bool,
}

impl LogicVerdict {
    /// Maps a two-operand count to all derived functions.
    ///
    /// Counts above 2 cannot arise from two operand rows; seeing one means
    /// the model is corrupted, so it is an error rather than a clamp.
    pub fn from_count(count: usize) -> Result<Self> {
        if count > LOGIC_COUNT_LIMIT {
            return Err(Error::CountOutOfRange { count, limit: LOGIC_COUNT_LIMIT });
        }
        let and = count == 2;
        let nor = count == 0;
        let xor = count == 1;
        Ok(Self {
            and,
            nand: !and,
            or: !nor,
            nor,
            xor,
            xnor: !xor,
            sum: xor,
            carry: and,
        })
    }

    pub fn op_bit(&self, op: LogicOp) -> bool {
        match op {
            LogicOp::And => self.and,
            LogicOp::Nand => self.nand,
            LogicOp::Or => self.or,
            LogicOp::Nor => self.nor,
            LogicOp::Xor => self.xor,
            LogicOp::Xnor => self.xnor,
        }
    }
}

/// Calibrated pipeline front end: array in, counts through the ladder and
/// comparator bank, observables out.
#[derive(Debug, Clone)]
pub struct Engine {
    table: CalibrationTable,
    params: AnalogParams,
    bank: ThresholdBank,
    mode: Mode,
}

impl Engine {
    /// Builds an engine, fitting the discharge model if `params` lacks one.
    ///
    /// The comparator bank defaults to midpoints of the active ladder:
    /// calibrated points in table mode, fitted points in parametric mode.
    pub fn new(table: CalibrationTable, params: AnalogParams, mode: Mode) -> Result<Self> {
        let params = if params.fit.is_some() {
            params.validate()?;
            params
        } else {
            fit_discharge_model(&table, &params)?
        };
        let ladder = match mode {
            Mode::Table => table.voltages().to_vec(),
            Mode::Parametric => fitted_ladder(&params, table.max_count())?,
        };
        let bank = derive_thresholds(&ladder)?;
        Ok(Self { table, params, bank, mode })
    }

    /// Reference calibration at default electrical parameters.
    pub fn reference(mode: Mode) -> Result<Self> {
        Self::new(CalibrationTable::reference(), AnalogParams::default(), mode)
    }

    /// Swaps in an explicit comparator bank; must cover every ladder gap.
    pub fn with_threshold_bank(mut self, bank: ThresholdBank) -> Result<Self> {
        if bank.len() != self.table.max_count() {
            return Err(Error::ConfigInvalid(format!(
                "bank has {} comparators but the ladder has {} gaps",
                bank.len(),
                self.table.max_count()
            )));
        }
        self.bank = bank;
        Ok(self)
    }

    pub fn table(&self) -> &CalibrationTable {
        &self.table
    }

    pub fn params(&self) -> &AnalogParams {
        &self.params
    }

    pub fn bank(&self) -> &ThresholdBank {
        &self.bank
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Nominal RBL voltage a count settles to in the active mode.
    pub fn voltage_for_count(&self, count: usize) -> Result<f64> {
        match self.mode {
            Mode::Table => self.table.voltage(count),
            Mode::Parametric => {
                if count > self.table.max_count() {
                    return Err(Error::CountOutOfRange { count, limit: self.table.max_count() });
                }
                model_voltage(count, &self.params, None)
            }
        }
    }

    /// Per-operation energy for a count that settled at `v_rbl`.
    pub fn energy_for(&self, count: usize, v_rbl: f64) -> Result<f64> {
        match self.mode {
            Mode::Table => self.table.energy_fj(count),
            Mode::Parametric => Ok(parametric_energy_fj(v_rbl, &self.params)),
        }
    }

    /// Runs the analog back half on a physical count.
    fn measure(&self, count: usize) -> Result<MacResult> {
        let v_rbl = self.voltage_for_count(count)?;
        let code = self.bank.compare(v_rbl);
        let energy_fj = self.energy_for(count, v_rbl)?;
        Ok(MacResult { count, v_rbl, code, energy_fj })
    }

    /// Full single-column MAC: store B, precharge, assert A, decode.
    pub fn mac_column(
        &self,
        array: &mut CellArray,
        col: usize,
        a: &BitWord,
        b: &BitWord,
    ) -> Result<MacResult> {
        array.load_column_word(col, b)?;
        array.precharge_column(col)?;
        let count = array.evaluate_column(&RwlPattern::new(a.clone()), col)?;
        self.measure(count)
    }

    /// MAC across the whole array: per-column B words, one shared A.
    pub fn mac_parallel(
        &self,
        array: &mut CellArray,
        a: &BitWord,
        b_cols: &[BitWord],
    ) -> Result<Vec<MacResult>> {
        if b_cols.len() != array.cols() {
            return Err(Error::WordLengthMismatch { got: b_cols.len(), expected: array.cols() });
        }
        for (col, b) in b_cols.iter().enumerate() {
            array.load_column_word(col, b)?;
        }
        self.evaluate_resident(array, a)
    }

    /// Evaluates data already resident in the array: precharge and one
    /// shared window, no write cycles.
    pub fn evaluate_resident(&self, array: &mut CellArray, a: &BitWord) -> Result<Vec<MacResult>> {
        array.precharge_all();
        let counts = array.active_counts(&RwlPattern::new(a.clone()))?;
        counts.into_iter().map(|count| self.measure(count)).collect()
    }

    /// One Boolean evaluation: both operand bits stored, both RWLs up.
    pub fn logic_eval(&self, a_bit: bool, b_bit: bool) -> Result<(MacResult, LogicVerdict)> {
        let mut array = CellArray::new(ArrayConfig { rows: 2, cols: 1 })?;
        array.write_bit(0, 0, a_bit)?;
        array.write_bit(1, 0, b_bit)?;
        array.precharge_column(0)?;
        let count = array.evaluate_column(&RwlPattern::new(BitWord::ones(2)), 0)?;
        let verdict = LogicVerdict::from_count(count)?;
        Ok((self.measure(count)?, verdict))
    }

    /// Boolean verdicts only.
    pub fn logic_pair(&self, a_bit: bool, b_bit: bool) -> Result<LogicVerdict> {
        Ok(self.logic_eval(a_bit, b_bit)?.1)
    }

    /// Bitwise Boolean layer over equal-length words, one column per bit
    /// position, all columns evaluated in a single shared window.
    pub fn logic_word_eval(
        &self,
        a: &BitWord,
        b: &BitWord,
    ) -> Result<Vec<(MacResult, LogicVerdict)>> {
        if a.len() != b.len() {
            return Err(Error::WordLengthMismatch { got: b.len(), expected: a.len() });
        }
        let mut array = CellArray::new(ArrayConfig { rows: 2, cols: a.len() })?;
        for i in 0..a.len() {
            array.write_bit(0, i, a.bit(i))?;
            array.write_bit(1, i, b.bit(i))?;
        }
        array.precharge_all();
        let counts = array.active_counts(&RwlPattern::new(BitWord::ones(2)))?;
        counts
            .into_iter()
            .map(|count| Ok((self.measure(count)?, LogicVerdict::from_count(count)?)))
            .collect()
    }

    /// One Boolean function over two words.
    pub fn logic_word(&self, a: &BitWord, b: &BitWord, op: LogicOp) -> Result<BitWord> {
        let bits = self
            .logic_word_eval(a, b)?
            .iter()
            .map(|(_, verdict)| verdict.op_bit(op))
            .collect();
        Ok(BitWord::from_bits(bits))
    }

    /// Half adder from the same window: returns (sum, carry).
    pub fn add_1bit(&self, a_bit: bool, b_bit: bool) -> Result<(bool, bool)> {
        let verdict = self.logic_pair(a_bit, b_bit)?;
        Ok((verdict.sum, verdict.carry))
    }
}
