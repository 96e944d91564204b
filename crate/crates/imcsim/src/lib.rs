//! Behavioral simulator for a charge-domain in-memory-computing SRAM array.
//!
//! An 8T bitcell separates the write port (WL/BL pair) from the read port
//! (RWL/RBL), so a whole column can be read concurrently without disturbing
//! stored data. When several read word lines assert in one evaluation window,
//! every selected cell that stores a 1 sinks charge from the shared,
//! precharged read bit line. The settled RBL voltage is therefore a monotone
//! function of popcount(A AND B): a multiply-accumulate computed in the
//! charge domain. A thermometer comparator bank digitizes that voltage back
//! into a count, and counts 0..=2 double as the truth table for the Boolean
//! layer (AND/NOR/XOR and friends) plus a 1-bit adder.
//!
//! The crate models that pipeline behaviorally: bit-accurate array state,
//! a calibrated voltage/energy ladder, a log-domain quadratic discharge fit
//! for configurations off the calibration grid, thermometer decode with
//! per-comparator offsets, latency/energy accounting, and Monte Carlo
//! mismatch analysis. It simulates electrical behavior at the transfer-curve
//! level; it is not a circuit simulator.

pub mod analog;
pub mod array;
pub mod decoder;
pub mod error;
pub mod files;
pub mod metrics;
pub mod montecarlo;
pub mod ops;

pub use error::{Error, Result};
