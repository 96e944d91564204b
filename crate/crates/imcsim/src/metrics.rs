//! Energy, latency, and throughput accounting.
//!
//! Table mode reads the calibrated energy ladder and is authoritative;
//! parametric mode charges the RBL swing through `C * VDD * (VDD - v_final)`
//! and is an approximation (it books the full precharge recovery, not the
//! measured per-operation draw), so results carry the mode as a flag.

use std::fmt;
use std::str::FromStr;

use crate::analog::{AnalogParams, CalibrationTable};
use crate::error::{Error, Result};

/// Largest count the Boolean layer may see (two operand rows).
pub const LOGIC_COUNT_LIMIT: usize = 2;
/// Published energy efficiency of the full-word MAC, femtojoules per bit.
pub const REFERENCE_ENERGY_PER_BIT_FJ: f64 = 56.56;
/// Published clock frequency, hertz; one period is 7.0 ns.
pub const REFERENCE_CLOCK_HZ: f64 = 142.85e6;
/// Published throughput figure, operations per second.
pub const REFERENCE_THROUGHPUT_OPS: f64 = 15.8e6;

/// Energy/voltage source selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Calibrated ladder lookup (authoritative).
    Table,
    /// Charge-transfer computation from the discharge model (approximate).
    Parametric,
}

impl Mode {
    pub fn is_approximate(&self) -> bool {
        matches!(self, Mode::Parametric)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Table => "table",
            Mode::Parametric => "parametric",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Mode::Table),
            "parametric" => Ok(Mode::Parametric),
            other => Err(Error::ConfigInvalid(format!(
                "mode must be 'table' or 'parametric', got {other:?}"
            ))),
        }
    }
}

/// Cycle-level timing of one MAC operation.
///
/// Writes and the precharge each take one clock; the evaluation window fits
/// inside the final cycle, so latency is `(write_cycles + precharge_cycles)
/// * clock_period`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingModel {
    /// Clock period, seconds.
    pub clock_period: f64,
    /// Operand-load cycles; 0 models back-to-back evaluation of resident data.
    pub write_cycles: usize,
    /// RBL recovery cycles before evaluation.
    pub precharge_cycles: usize,
    /// RWL assertion window inside the final cycle, seconds.
    pub eval_window: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        Self {
            clock_period: 7.0e-9,
            write_cycles: 8,
            precharge_cycles: 1,
            eval_window: 0.7e-9,
        }
    }
}

impl TimingModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.clock_period > 0.0 && self.clock_period.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "clock period must be positive, got {}",
                self.clock_period
            )));
        }
        if !(self.eval_window > 0.0 && self.eval_window <= self.clock_period) {
            return Err(Error::ConfigInvalid(format!(
                "eval window {} must fit inside one clock period {}",
                self.eval_window, self.clock_period
            )));
        }
        if self.write_cycles + self.precharge_cycles == 0 {
            return Err(Error::ConfigInvalid(
                "operation needs at least one cycle".into(),
            ));
        }
        Ok(())
    }
}

/// End-to-end latency of one operation, seconds.
pub fn operation_latency(timing: &TimingModel) -> f64 {
    (timing.write_cycles + timing.precharge_cycles) as f64 * timing.clock_period
}

/// Sustained rate at one operation per latency, operations per second.
pub fn throughput(timing: &TimingModel) -> f64 {
    1.0 / operation_latency(timing)
}

/// Energy booked against the RBL swing down to `v_final`, femtojoules.
pub fn parametric_energy_fj(v_final: f64, params: &AnalogParams) -> f64 {
    params.c_rbl * params.vdd * (params.vdd - v_final) * 1e15
}

/// Per-operation energy at a MAC count, femtojoules.
///
/// Parametric mode evaluates the charge transfer at the table's calibrated
/// voltage for that count.
pub fn energy_of_count(
    count: usize,
    table: &CalibrationTable,
    mode: Mode,
    params: &AnalogParams,
) -> Result<f64> {
    match mode {
        Mode::Table => table.energy_fj(count),
        Mode::Parametric => Ok(parametric_energy_fj(table.voltage(count)?, params)),
    }
}

/// Per-operation energy of a Boolean-layer evaluation, femtojoules.
///
/// The Boolean layer is the count 0..=2 corner of the same ladder, so this
/// is a table lookup with a tighter count limit.
pub fn energy_of_logic(count: usize, table: &CalibrationTable) -> Result<f64> {
    if count > LOGIC_COUNT_LIMIT {
        return Err(Error::CountOutOfRange { count, limit: LOGIC_COUNT_LIMIT });
    }
    table.energy_fj(count)
}

/// Total energy split over the bits it processed.
pub fn energy_per_bit(total_fj: f64, bits: usize) -> f64 {
    debug_assert!(bits >= 1);
    total_fj / bits as f64
}

/// Energy summary with the approximation flag attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub total_fj: f64,
    pub per_bit_fj: f64,
    pub mode: Mode,
}

impl EnergyReport {
    pub fn new(total_fj: f64, bits: usize, mode: Mode) -> Self {
        Self { total_fj, per_bit_fj: energy_per_bit(total_fj, bits), mode }
    }

    pub fn is_approximate(&self) -> bool {
        self.mode.is_approximate()
    }
}

/// Full ladder report as CSV: `count,v_mV,energy_fJ,latency_ns,throughput_Mops`.
///
/// Table mode lists the calibrated points; parametric mode lists the fitted
/// voltages and their charge-transfer energies.
pub fn report_csv(
    table: &CalibrationTable,
    params: &AnalogParams,
    timing: &TimingModel,
    mode: Mode,
) -> Result<String> {
    timing.validate()?;
    let latency_ns = operation_latency(timing) * 1e9;
    let throughput_mops = throughput(timing) / 1e6;
    let mut out = String::from("count,v_mV,energy_fJ,latency_ns,throughput_Mops\n");
    for count in 0..=table.max_count() {
        let (v, energy) = match mode {
            Mode::Table => (table.voltage(count)?, table.energy_fj(count)?),
            Mode::Parametric => {
                let v = crate::analog::model_voltage(count, params, None)?;
                (v, parametric_energy_fj(v, params))
            }
        };
        out.push_str(&format!(
            "{count},{:.3},{:.3},{:.3},{:.3}\n",
            v * 1e3,
            energy,
            latency_ns,
            throughput_mops
        ));
    }
    Ok(out)
}
