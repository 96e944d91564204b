//! On-disk formats: calibration ladders, threshold banks, array images,
//! fitted parameters, and Monte Carlo CSV exports.
//!
//! Ladder files are structured text with named integer arrays, voltages in
//! millivolts and energies in tenths of a femtojoule; `#` starts a comment.
//! Integer quantization is part of the format: values round to the nearest
//! step on save, so a table whose energies are not multiples of 0.1 fJ will
//! not round-trip bit for bit. Array images are plain '0'/'1' character
//! grids, one row per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analog::{AnalogParams, CalibrationTable};
use crate::array::{ArrayConfig, CellArray};
use crate::decoder::ThresholdBank;
use crate::error::{Error, Result};
use crate::montecarlo::{Histogram, TrialRecord};

/// Named integer arrays parsed line by line; each allowed key at most once.
fn parse_named_arrays(text: &str, allowed: &[&str]) -> Result<Vec<(String, Vec<i64>)>> {
    let mut arrays: Vec<(String, Vec<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let (name, rest) = line.split_once(':').ok_or_else(|| {
            Error::ConfigInvalid(format!("line {lineno}: expected 'name: values', got {line:?}"))
        })?;
        let name = name.trim();
        if !allowed.contains(&name) {
            return Err(Error::ConfigInvalid(format!(
                "line {lineno}: unknown array {name:?}, expected one of {allowed:?}"
            )));
        }
        if arrays.iter().any(|(seen, _)| seen == name) {
            return Err(Error::ConfigInvalid(format!("line {lineno}: duplicate array {name:?}")));
        }
        let values = rest
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| {
                    Error::ConfigInvalid(format!(
                        "line {lineno}: invalid integer {tok:?} in {name}"
                    ))
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        if values.is_empty() {
            return Err(Error::ConfigInvalid(format!("line {lineno}: array {name:?} is empty")));
        }
        arrays.push((name.to_string(), values));
    }
    Ok(arrays)
}

fn take_array(arrays: &[(String, Vec<i64>)], name: &str) -> Result<Vec<i64>> {
    arrays
        .iter()
        .find(|(seen, _)| seen == name)
        .map(|(_, values)| values.clone())
        .ok_or_else(|| Error::ConfigInvalid(format!("missing array {name:?}")))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::FileFormat {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::FileFormat {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn at_path<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        err @ Error::FileFormat { .. } => err,
        other => Error::FileFormat { path: path.display().to_string(), detail: other.to_string() },
    })
}

fn join_ints(values: impl Iterator<Item = i64>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses a calibration ladder from structured text.
pub fn parse_calibration(text: &str) -> Result<CalibrationTable> {
    let arrays = parse_named_arrays(text, &["voltage_mV", "energy_fJ"])?;
    let volts: Vec<f64> =
        take_array(&arrays, "voltage_mV")?.iter().map(|mv| *mv as f64 / 1e3).collect();
    let energies: Vec<f64> =
        take_array(&arrays, "energy_fJ")?.iter().map(|tenths| *tenths as f64 / 10.0).collect();
    CalibrationTable::new(volts, energies)
}

/// Formats a calibration ladder; quantizes to the integer file units.
pub fn format_calibration(table: &CalibrationTable) -> String {
    let mut out = String::from(
        "# calibration ladder; voltage_mV in millivolts, energy_fJ in tenths of a femtojoule\n",
    );
    let _ = writeln!(
        out,
        "voltage_mV: {}",
        join_ints(table.voltages().iter().map(|v| (v * 1e3).round() as i64))
    );
    let _ = writeln!(
        out,
        "energy_fJ: {}",
        join_ints(table.energies_fj().iter().map(|e| (e * 10.0).round() as i64))
    );
    out
}

pub fn load_calibration(path: &Path) -> Result<CalibrationTable> {
    let text = read_file(path)?;
    at_path(path, parse_calibration(&text))
}

pub fn save_calibration(path: &Path, table: &CalibrationTable) -> Result<()> {
    write_file(path, &format_calibration(table))
}

/// Parses a comparator reference bank from structured text.
pub fn parse_thresholds(text: &str) -> Result<ThresholdBank> {
    let arrays = parse_named_arrays(text, &["threshold_mV"])?;
    let thresholds: Vec<f64> =
        take_array(&arrays, "threshold_mV")?.iter().map(|mv| *mv as f64 / 1e3).collect();
    ThresholdBank::new(thresholds)
}

/// Formats a threshold bank; quantizes to whole millivolts.
pub fn format_thresholds(bank: &ThresholdBank) -> String {
    let mut out = String::from("# comparator references; threshold_mV in millivolts\n");
    let _ = writeln!(
        out,
        "threshold_mV: {}",
        join_ints(bank.thresholds().iter().map(|t| (t * 1e3).round() as i64))
    );
    out
}

pub fn load_thresholds(path: &Path) -> Result<ThresholdBank> {
    let text = read_file(path)?;
    at_path(path, parse_thresholds(&text))
}

pub fn save_thresholds(path: &Path, bank: &ThresholdBank) -> Result<()> {
    write_file(path, &format_thresholds(bank))
}

/// Parses an array image; dimensions come from the grid itself.
pub fn parse_array_image(text: &str) -> Result<CellArray> {
    let rows: Vec<&str> = text.lines().filter(|line| !line.trim().is_empty()).collect();
    if rows.is_empty() {
        return Err(Error::ConfigInvalid("array image is empty".into()));
    }
    let cols = rows[0].trim().len();
    let mut array = CellArray::new(ArrayConfig { rows: rows.len(), cols })?;
    for (r, raw) in rows.iter().enumerate() {
        let line = raw.trim();
        if line.len() != cols {
            return Err(Error::ConfigInvalid(format!(
                "line {}: row has {} cells, expected {cols}",
                r + 1,
                line.len()
            )));
        }
        for (c, ch) in line.chars().enumerate() {
            let bit = match ch {
                '0' => false,
                '1' => true,
                other => {
                    return Err(Error::ConfigInvalid(format!(
                        "line {}: array image may contain only '0' and '1', found {other:?}",
                        r + 1
                    )))
                }
            };
            array.write_bit(r, c, bit)?;
        }
    }
    Ok(array)
}

/// Formats an array image as '0'/'1' lines, row 0 first.
pub fn format_array_image(array: &CellArray) -> String {
    let mut out = String::new();
    for row in 0..array.rows() {
        for col in 0..array.cols() {
            out.push(if array.read_bit(row, col).expect("in range") { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn load_array_image(path: &Path) -> Result<CellArray> {
    let text = read_file(path)?;
    at_path(path, parse_array_image(&text))
}

pub fn save_array_image(path: &Path, array: &CellArray) -> Result<()> {
    write_file(path, &format_array_image(array))
}

/// Formats fitted model parameters as `key: value` lines.
pub fn format_fit_params(params: &AnalogParams, max_residual_mv: f64) -> Result<String> {
    let fit = params.fit.ok_or(Error::ModelUnfitted)?;
    let mut out = String::from("# fitted discharge model: v(n) = vdd * exp(-(a*n^2 + b*n + c))\n");
    let _ = writeln!(out, "vdd_mV: {}", (params.vdd * 1e3).round() as i64);
    let _ = writeln!(out, "c_rbl_fF: {}", (params.c_rbl * 1e15).round() as i64);
    let _ = writeln!(out, "t_eval_ps: {}", (params.t_eval * 1e12).round() as i64);
    let _ = writeln!(out, "leak_drop_mV: {}", (params.leak_drop * 1e3).round() as i64);
    let _ = writeln!(out, "fit_a: {:.12e}", fit.a);
    let _ = writeln!(out, "fit_b: {:.12e}", fit.b);
    let _ = writeln!(out, "fit_c: {:.12e}", fit.c);
    let _ = writeln!(out, "max_residual_mV: {max_residual_mv:.3}");
    Ok(out)
}

pub fn save_fit_params(path: &Path, params: &AnalogParams, max_residual_mv: f64) -> Result<()> {
    let content = at_path(path, format_fit_params(params, max_residual_mv))?;
    write_file(path, &content)
}

/// Histogram as CSV: `bin_low_fJ,bin_high_fJ,count`.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("bin_low_fJ,bin_high_fJ,count\n");
    for (i, count) in hist.counts.iter().enumerate() {
        let _ = writeln!(out, "{:.3},{:.3},{count}", hist.edges[i], hist.edges[i + 1]);
    }
    out
}

/// Trial dump as CSV: `trial,v_rbl_mV,decoded,energy_fJ`; bubbles print as
/// the word `bubble`.
pub fn trials_csv(trials: &[TrialRecord]) -> String {
    let mut out = String::from("trial,v_rbl_mV,decoded,energy_fJ\n");
    for record in trials {
        let decoded = match record.decoded {
            Some(count) => count.to_string(),
            None => "bubble".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{:.3},{decoded},{:.3}",
            record.trial,
            record.v_rbl * 1e3,
            record.energy_fj
        );
    }
    out
}
