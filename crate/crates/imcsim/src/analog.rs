//! Charge-sharing analog model of the read bit line.
//!
//! One evaluation discharges the precharged RBL through every selected cell
//! that stores a 1, so the settled voltage depends only on the active count
//! `n = popcount(A AND B)`. The reference ladder pins the nine calibrated
//! operating points of an 8-row column; the fitted model
//! `v(n) = vdd * exp(-(a*n^2 + b*n + c))` interpolates between them and
//! extrapolates to other column heights via capacitive rescaling of the
//! exponent.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Default supply and precharge rail, volts.
pub const DEFAULT_VDD: f64 = 1.8;
/// Default RBL load capacitance of an 8-row column, farads.
pub const DEFAULT_C_RBL: f64 = 200e-15;
/// Default RWL activation window, seconds.
pub const DEFAULT_T_EVAL: f64 = 0.7e-9;
/// Largest per-point deviation a fit may leave against its table, volts.
pub const FIT_RESIDUAL_BOUND: f64 = 0.020;

/// Calibrated RBL voltage per MAC count 0..=8 for the reference 8-row column, volts.
pub const REFERENCE_VOLTAGES: [f64; 9] = [
    1.758, 1.528, 1.308, 1.096, 0.895, 0.712, 0.552, 0.418, 0.310,
];

/// Calibrated per-operation RBL energy per MAC count 0..=8, femtojoules.
pub const REFERENCE_ENERGIES_FJ: [f64; 9] = [
    5.369, 119.3, 212.7, 288.5, 347.9, 391.6, 421.5, 440.7, 452.2,
];

/// Coefficients of the log-domain discharge exponent `a*n^2 + b*n + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DischargeFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DischargeFit {
    /// Exponent value at effective count `n`.
    fn exponent(&self, n: f64) -> f64 {
        (self.a * n + self.b) * n + self.c
    }
}

/// Electrical parameters of the read path.
#[derive(Debug, Clone)]
pub struct AnalogParams {
    /// Supply and precharge rail, volts.
    pub vdd: f64,
    /// RBL load capacitance, farads.
    pub c_rbl: f64,
    /// RWL activation window, seconds.
    pub t_eval: f64,
    /// Installed discharge fit; `None` until [`fit_discharge_model`] runs.
    pub fit: Option<DischargeFit>,
    /// Count-0 rail droop `vdd - v[0]` from leakage within the window, volts.
    pub leak_drop: f64,
}

impl Default for AnalogParams {
    fn default() -> Self {
        Self {
            vdd: DEFAULT_VDD,
            c_rbl: DEFAULT_C_RBL,
            t_eval: DEFAULT_T_EVAL,
            fit: None,
            leak_drop: DEFAULT_VDD - REFERENCE_VOLTAGES[0],
        }
    }
}

impl AnalogParams {
    /// Rejects non-physical parameter values.
    pub fn validate(&self) -> Result<()> {
        if !(self.vdd > 0.0 && self.vdd.is_finite()) {
            return Err(Error::ConfigInvalid(format!("vdd must be positive, got {}", self.vdd)));
        }
        if !(self.c_rbl > 0.0 && self.c_rbl.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "c_rbl must be positive, got {}",
                self.c_rbl
            )));
        }
        if !(self.t_eval > 0.0 && self.t_eval.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "t_eval must be positive, got {}",
                self.t_eval
            )));
        }
        Ok(())
    }
}

/// Rail voltage the precharge circuit leaves on the RBL.
pub fn precharge(params: &AnalogParams) -> f64 {
    params.vdd
}

/// Measured voltage and energy ladders indexed by MAC count.
///
/// Voltage is strictly decreasing and energy strictly increasing in count;
/// both arrays share one length, so `max_count() = len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTable {
    voltage_by_count: Vec<f64>,
    energy_by_count: Vec<f64>,
}

impl CalibrationTable {
    /// Builds a table from matching ladders, validating both monotonicities.
    pub fn new(voltage_by_count: Vec<f64>, energy_by_count: Vec<f64>) -> Result<Self> {
        if voltage_by_count.len() < 2 {
            return Err(Error::ConfigInvalid(format!(
                "calibration table needs at least 2 points, got {}",
                voltage_by_count.len()
            )));
        }
        if voltage_by_count.len() != energy_by_count.len() {
            return Err(Error::ConfigInvalid(format!(
                "voltage ladder has {} points but energy ladder has {}",
                voltage_by_count.len(),
                energy_by_count.len()
            )));
        }
        if let Some(bad) = voltage_by_count.iter().find(|v| !v.is_finite()) {
            return Err(Error::ConfigInvalid(format!("non-finite voltage {bad} in ladder")));
        }
        if let Some(bad) = energy_by_count.iter().find(|e| !e.is_finite()) {
            return Err(Error::ConfigInvalid(format!("non-finite energy {bad} in ladder")));
        }
        for (i, pair) in voltage_by_count.windows(2).enumerate() {
            if pair[1] >= pair[0] {
                return Err(Error::NonMonotoneLadder { index: i + 1 });
            }
        }
        for (i, pair) in energy_by_count.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::ConfigInvalid(format!(
                    "energy ladder not strictly increasing at index {}",
                    i + 1
                )));
            }
        }
        Ok(Self { voltage_by_count, energy_by_count })
    }

    /// The built-in reference calibration of the 8-row column.
    pub fn reference() -> Self {
        Self {
            voltage_by_count: REFERENCE_VOLTAGES.to_vec(),
            energy_by_count: REFERENCE_ENERGIES_FJ.to_vec(),
        }
    }

    /// Largest count the table covers.
    pub fn max_count(&self) -> usize {
        self.voltage_by_count.len() - 1
    }

    /// Calibrated RBL voltage at `count`, volts.
    pub fn voltage(&self, count: usize) -> Result<f64> {
        self.voltage_by_count
            .get(count)
            .copied()
            .ok_or(Error::CountOutOfRange { count, limit: self.max_count() })
    }

    /// Calibrated per-operation energy at `count`, femtojoules.
    pub fn energy_fj(&self, count: usize) -> Result<f64> {
        self.energy_by_count
            .get(count)
            .copied()
            .ok_or(Error::CountOutOfRange { count, limit: self.max_count() })
    }

    pub fn voltages(&self) -> &[f64] {
        &self.voltage_by_count
    }

    pub fn energies_fj(&self) -> &[f64] {
        &self.energy_by_count
    }
}

/// Affine column-capacitance model `C(rows) = c_fixed + rows * c_per_row`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceModel {
    /// Row-independent wiring and driver load, farads.
    pub c_fixed: f64,
    /// Per-cell drain load added by each row, farads.
    pub c_per_row: f64,
}

impl Default for CapacitanceModel {
    // Defaults reproduce the reference 200 fF at 8 rows.
    fn default() -> Self {
        Self { c_fixed: 40e-15, c_per_row: 20e-15 }
    }
}

impl CapacitanceModel {
    /// Total RBL load of a `rows`-cell column, farads.
    pub fn capacitance_for_rows(&self, rows: usize) -> f64 {
        self.c_fixed + rows as f64 * self.c_per_row
    }
}

/// Fits the log-domain quadratic to a table's voltage ladder.
///
/// Linear least squares on `y_n = ln(vdd / v_n)` against `[n^2, n, 1]`, so
/// the fit never iterates and cannot diverge numerically; `FitDiverged`
/// covers degenerate inputs and residuals beyond [`FIT_RESIDUAL_BOUND`].
/// Returns a copy of `params` with the fit installed and `leak_drop`
/// refreshed from the table's count-0 point.
pub fn fit_discharge_model(table: &CalibrationTable, params: &AnalogParams) -> Result<AnalogParams> {
    params.validate()?;
    let volts = table.voltages();
    if volts.len() < 4 {
        return Err(Error::FitDiverged(format!(
            "need at least 4 calibration points for 3 coefficients, got {}",
            volts.len()
        )));
    }
    if let Some(bad) = volts.iter().find(|v| **v <= 0.0) {
        return Err(Error::FitDiverged(format!("non-positive calibration voltage {bad}")));
    }

    // Normal equations of the 3-parameter system; 3x3 stays well conditioned
    // for any realistic row count.
    let mut s = [0.0f64; 5]; // sums of n^0 .. n^4
    let mut t = [0.0f64; 3]; // sums of y * n^0 .. y * n^2
    for (count, v) in volts.iter().enumerate() {
        let n = count as f64;
        let y = (params.vdd / v).ln();
        let powers = [1.0, n, n * n, n * n * n, n * n * n * n];
        for (acc, p) in s.iter_mut().zip(powers) {
            *acc += p;
        }
        for (acc, p) in t.iter_mut().zip(powers) {
            *acc += y * p;
        }
    }
    let m = Matrix3::new(s[4], s[3], s[2], s[3], s[2], s[1], s[2], s[1], s[0]);
    let rhs = Vector3::new(t[2], t[1], t[0]);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::FitDiverged("singular normal equations".into()))?;
    let fit = DischargeFit { a: sol[0], b: sol[1], c: sol[2] };

    let fitted = AnalogParams {
        fit: Some(fit),
        leak_drop: params.vdd - volts[0],
        ..params.clone()
    };

    let ladder = fitted_ladder(&fitted, table.max_count())?;
    for (i, pair) in ladder.windows(2).enumerate() {
        if pair[1] >= pair[0] {
            return Err(Error::NonMonotoneFit { lo: i, hi: i + 1 });
        }
    }
    for (count, (have, want)) in ladder.iter().zip(volts).enumerate() {
        let residual = (have - want).abs();
        if residual > FIT_RESIDUAL_BOUND {
            return Err(Error::FitDiverged(format!(
                "residual {:.1} mV at count {count} exceeds {:.0} mV bound",
                residual * 1e3,
                FIT_RESIDUAL_BOUND * 1e3
            )));
        }
    }
    Ok(fitted)
}

/// Model voltage at a possibly fractional effective count.
///
/// Mismatch analysis lands here: cell-strength factors sum to a non-integer
/// `n_eff`, and the transfer curve is evaluated at that point. Output clamps
/// to `[0, vdd]`.
pub fn model_voltage_effective(n_eff: f64, params: &AnalogParams) -> Result<f64> {
    let fit = params.fit.ok_or(Error::ModelUnfitted)?;
    if !(n_eff >= 0.0 && n_eff.is_finite()) {
        return Err(Error::ConfigInvalid(format!("effective count must be finite and >= 0, got {n_eff}")));
    }
    Ok((params.vdd * (-fit.exponent(n_eff)).exp()).clamp(0.0, params.vdd))
}

/// Model voltage at integer `count`, with optional per-cell strength factors.
///
/// `mismatch` supplies one relative discharge strength per active cell
/// (nominal 1.0, each > 0); its sum replaces the integer count. All factors
/// at exactly 1.0 reproduce the unperturbed voltage bit for bit.
pub fn model_voltage(count: usize, params: &AnalogParams, mismatch: Option<&[f64]>) -> Result<f64> {
    let n_eff = match mismatch {
        None => count as f64,
        Some(factors) => {
            if factors.len() != count {
                return Err(Error::ConfigInvalid(format!(
                    "expected {count} strength factors, got {}",
                    factors.len()
                )));
            }
            if let Some(bad) = factors.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
                return Err(Error::ConfigInvalid(format!(
                    "strength factors must be positive and finite, got {bad}"
                )));
            }
            factors.iter().sum()
        }
    };
    model_voltage_effective(n_eff, params)
}

/// Model voltage ladder for counts `0..=max_count`.
pub fn fitted_ladder(params: &AnalogParams, max_count: usize) -> Result<Vec<f64>> {
    (0..=max_count).map(|n| model_voltage(n, params, None)).collect()
}

/// Predicts the voltage ladder of a `rows`-cell column.
///
/// Charge conservation scales the discharge exponent by the capacitance
/// ratio `C(reference rows) / C(rows)`: a heavier bit line moves less per
/// active cell. The reference row count is the table's `max_count()`.
pub fn rescale_ladder(
    table: &CalibrationTable,
    rows: usize,
    cap: &CapacitanceModel,
    params: &AnalogParams,
) -> Result<Vec<f64>> {
    let fit = params.fit.ok_or(Error::ModelUnfitted)?;
    if rows < 2 {
        return Err(Error::ConfigInvalid(format!("rescale needs at least 2 rows, got {rows}")));
    }
    let c_ref = cap.capacitance_for_rows(table.max_count());
    let c_target = cap.capacitance_for_rows(rows);
    if !(c_ref > 0.0 && c_target > 0.0) {
        return Err(Error::ConfigInvalid(
            "capacitance model must be positive at both row counts".into(),
        ));
    }
    let scale = c_ref / c_target;
    let ladder: Vec<f64> = (0..=rows)
        .map(|n| (params.vdd * (-scale * fit.exponent(n as f64)).exp()).clamp(0.0, params.vdd))
        .collect();
    for (i, pair) in ladder.windows(2).enumerate() {
        if pair[1] >= pair[0] {
            return Err(Error::NonMonotoneFit { lo: i, hi: i + 1 });
        }
    }
    Ok(ladder)
}

/// Smallest adjacent gap in a descending ladder, or `None` below 2 points.
pub fn min_spacing(ladder: &[f64]) -> Option<f64> {
    ladder
        .windows(2)
        .map(|pair| pair[0] - pair[1])
        .min_by(|x, y| x.partial_cmp(y).expect("finite ladder"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fitted_reference() -> AnalogParams {
        fit_discharge_model(&CalibrationTable::reference(), &AnalogParams::default()).unwrap()
    }

    #[test]
    fn reference_table_round_trips_exact_values() {
        let table = CalibrationTable::reference();
        assert_eq!(table.max_count(), 8);
        assert_eq!(table.voltage(0).unwrap(), 1.758);
        assert_eq!(table.voltage(4).unwrap(), 0.895);
        assert_eq!(table.voltage(8).unwrap(), 0.310);
        assert_eq!(table.energy_fj(0).unwrap(), 5.369);
        assert_eq!(table.energy_fj(8).unwrap(), 452.2);
    }

    #[test]
    fn count_past_table_end_is_rejected() {
        let table = CalibrationTable::reference();
        assert!(matches!(
            table.voltage(9),
            Err(Error::CountOutOfRange { count: 9, limit: 8 })
        ));
        assert!(matches!(table.energy_fj(100), Err(Error::CountOutOfRange { .. })));
    }

    #[test]
    fn table_validation_rejects_bad_ladders() {
        let volts = REFERENCE_VOLTAGES.to_vec();
        let energies = REFERENCE_ENERGIES_FJ.to_vec();

        let mut shuffled = volts.clone();
        shuffled.swap(2, 3);
        assert!(matches!(
            CalibrationTable::new(shuffled, energies.clone()),
            Err(Error::NonMonotoneLadder { index: 3 })
        ));

        let mut flat_energy = energies.clone();
        flat_energy[5] = flat_energy[4];
        assert!(matches!(
            CalibrationTable::new(volts.clone(), flat_energy),
            Err(Error::ConfigInvalid(_))
        ));

        assert!(matches!(
            CalibrationTable::new(volts.clone(), energies[..8].to_vec()),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            CalibrationTable::new(vec![1.8], vec![1.0]),
            Err(Error::ConfigInvalid(_))
        ));
    }

    #[test]
    fn default_params_match_reference_operating_point() {
        let params = AnalogParams::default();
        assert_eq!(params.vdd, 1.8);
        assert_eq!(params.c_rbl, 200e-15);
        assert_eq!(params.t_eval, 0.7e-9);
        assert!(params.fit.is_none());
        assert_relative_eq!(params.leak_drop, 0.042, max_relative = 1e-12);
        assert_eq!(precharge(&params), 1.8);
        params.validate().unwrap();
    }

    #[test]
    fn params_validation_rejects_nonphysical_values() {
        let params = AnalogParams { vdd: 0.0, ..AnalogParams::default() };
        assert!(matches!(params.validate(), Err(Error::ConfigInvalid(_))));
        let params = AnalogParams { c_rbl: -1e-15, ..AnalogParams::default() };
        assert!(matches!(params.validate(), Err(Error::ConfigInvalid(_))));
        let params = AnalogParams { t_eval: f64::NAN, ..AnalogParams::default() };
        assert!(matches!(params.validate(), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn reference_fit_reproduces_known_coefficients() {
        let params = fitted_reference();
        let fit = params.fit.unwrap();
        assert_relative_eq!(fit.a, 0.012006389716, max_relative = 1e-9);
        assert_relative_eq!(fit.b, 0.120397169977, max_relative = 1e-9);
        assert_relative_eq!(fit.c, 0.027383157809, max_relative = 1e-9);
        assert_relative_eq!(params.leak_drop, 0.042, max_relative = 1e-12);
    }

    #[test]
    fn reference_fit_residuals_stay_within_bound() {
        let params = fitted_reference();
        let mut max_residual = 0.0f64;
        for (count, want) in REFERENCE_VOLTAGES.iter().enumerate() {
            let have = model_voltage(count, &params, None).unwrap();
            max_residual = max_residual.max((have - want).abs());
        }
        assert!(max_residual <= FIT_RESIDUAL_BOUND);
        // Worst point is count 0 at 6.62 mV.
        assert!(max_residual > 6.5e-3 && max_residual < 6.7e-3, "max residual {max_residual}");
    }

    #[test]
    fn reference_fit_ladder_is_monotone_with_reference_spacing() {
        let params = fitted_reference();
        let ladder = fitted_ladder(&params, 8).unwrap();
        for pair in ladder.windows(2) {
            let delta = pair[0] - pair[1];
            assert!(delta > 0.0);
            assert!((0.100..=0.250).contains(&delta), "fitted delta {delta}");
        }
        for pair in REFERENCE_VOLTAGES.windows(2) {
            let delta = pair[0] - pair[1];
            assert!((0.100..=0.250).contains(&delta), "table delta {delta}");
        }
        assert_relative_eq!(min_spacing(&ladder).unwrap(), 0.108663, max_relative = 1e-4);
    }

    #[test]
    fn synthetic_exponential_recovers_pure_linear_exponent() {
        // v(n) = 1.8 * 0.9^n has exponent b*n with b = -ln 0.9 and a = c = 0.
        let volts: Vec<f64> = (0..=8).map(|n| 1.8 * 0.9f64.powi(n)).collect();
        let energies: Vec<f64> = (0..=8).map(|n| n as f64).collect();
        let table = CalibrationTable::new(volts, energies).unwrap();
        let params = fit_discharge_model(&table, &AnalogParams::default()).unwrap();
        let fit = params.fit.unwrap();
        assert!(fit.a.abs() < 1e-8, "a = {}", fit.a);
        assert_relative_eq!(fit.b, -(0.9f64.ln()), max_relative = 1e-8);
        assert!(fit.c.abs() < 1e-8, "c = {}", fit.c);
    }

    #[test]
    fn fit_rejects_underdetermined_or_nonpositive_tables() {
        let table = CalibrationTable::new(vec![1.8, 1.5, 1.2], vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            fit_discharge_model(&table, &AnalogParams::default()),
            Err(Error::FitDiverged(_))
        ));
    }

    #[test]
    fn fit_rejects_table_outside_residual_bound() {
        // A ladder with a 300 mV kink no quadratic exponent can absorb.
        let volts = vec![1.758, 1.528, 1.308, 0.796, 0.895 - 0.2, 0.612, 0.452, 0.316, 0.210];
        let mut sorted = volts.clone();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let energies: Vec<f64> = (0..=8).map(|n| n as f64).collect();
        let table = CalibrationTable::new(sorted, energies).unwrap();
        match fit_discharge_model(&table, &AnalogParams::default()) {
            Err(Error::FitDiverged(msg)) => assert!(msg.contains("residual"), "msg: {msg}"),
            other => panic!("expected residual failure, got {other:?}"),
        }
    }

    #[test]
    fn model_voltage_requires_fit_and_valid_factors() {
        let unfitted = AnalogParams::default();
        assert!(matches!(model_voltage(3, &unfitted, None), Err(Error::ModelUnfitted)));

        let params = fitted_reference();
        assert!(matches!(
            model_voltage(3, &params, Some(&[1.0, 1.0])),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            model_voltage(2, &params, Some(&[1.0, -0.5])),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            model_voltage_effective(f64::NAN, &params),
            Err(Error::ConfigInvalid(_))
        ));
    }

    #[test]
    fn unit_strength_factors_are_bit_exact_neutral() {
        let params = fitted_reference();
        for count in 0..=8usize {
            let factors = vec![1.0; count];
            let plain = model_voltage(count, &params, None).unwrap();
            let factored = model_voltage(count, &params, Some(&factors)).unwrap();
            assert_eq!(plain.to_bits(), factored.to_bits());
        }
    }

    #[test]
    fn model_voltage_clamps_into_rail_range() {
        let params = fitted_reference();
        let deep = model_voltage_effective(1000.0, &params).unwrap();
        assert!((0.0..=1.8).contains(&deep));
        let shallow = model_voltage_effective(0.0, &params).unwrap();
        assert!(shallow <= 1.8);
    }

    #[test]
    fn capacitance_model_hits_reference_load_at_8_rows() {
        let cap = CapacitanceModel::default();
        assert_relative_eq!(cap.capacitance_for_rows(8), 200e-15, max_relative = 1e-12);
        assert_relative_eq!(cap.capacitance_for_rows(4), 120e-15, max_relative = 1e-12);
        assert_relative_eq!(cap.capacitance_for_rows(16), 360e-15, max_relative = 1e-12);
    }

    #[test]
    fn rescaled_ladders_match_oracle_spacings() {
        let table = CalibrationTable::reference();
        let params = fitted_reference();
        let cap = CapacitanceModel::default();

        // Unit scale at the reference height reproduces the fitted ladder bit
        // for bit.
        let at_8 = rescale_ladder(&table, 8, &cap, &params).unwrap();
        let fitted = fitted_ladder(&params, 8).unwrap();
        for (a, b) in at_8.iter().zip(&fitted) {
            assert_eq!(a.to_bits(), b.to_bits());
        }

        let min_mv = |rows: usize| {
            let ladder = rescale_ladder(&table, rows, &cap, &params).unwrap();
            assert_eq!(ladder.len(), rows + 1);
            min_spacing(&ladder).unwrap() * 1e3
        };
        assert_relative_eq!(min_mv(4), 227.157, max_relative = 1e-4);
        assert_relative_eq!(min_mv(8), 108.663, max_relative = 1e-4);
        assert_relative_eq!(min_mv(16), 34.697, max_relative = 1e-4);
        assert_relative_eq!(min_mv(32), 4.548, max_relative = 1e-3);
    }

    #[test]
    fn heavier_bit_line_compresses_low_count_gaps() {
        let table = CalibrationTable::reference();
        let params = fitted_reference();
        // Pure per-row model: 16 rows doubles the reference load, 4 halves it.
        let cap = CapacitanceModel { c_fixed: 0.0, c_per_row: 25e-15 };
        assert_relative_eq!(cap.capacitance_for_rows(8), 200e-15, max_relative = 1e-12);

        let base = rescale_ladder(&table, 8, &cap, &params).unwrap();
        let doubled = rescale_ladder(&table, 16, &cap, &params).unwrap();
        let halved = rescale_ladder(&table, 4, &cap, &params).unwrap();
        for count in 0..4 {
            let base_gap = base[count] - base[count + 1];
            assert!(doubled[count] - doubled[count + 1] < base_gap);
            assert!(halved[count] - halved[count + 1] > base_gap);
        }
    }

    #[test]
    fn rescale_rejects_unfitted_degenerate_or_inverted_models() {
        let table = CalibrationTable::reference();
        let cap = CapacitanceModel::default();
        assert!(matches!(
            rescale_ladder(&table, 16, &cap, &AnalogParams::default()),
            Err(Error::ModelUnfitted)
        ));

        let params = fitted_reference();
        assert!(matches!(
            rescale_ladder(&table, 1, &cap, &params),
            Err(Error::ConfigInvalid(_))
        ));

        let mut inverted = params;
        inverted.fit = Some(DischargeFit { a: 0.0, b: -0.1, c: 0.0 });
        assert!(matches!(
            rescale_ladder(&table, 8, &cap, &inverted),
            Err(Error::NonMonotoneFit { .. })
        ));
    }

    #[test]
    fn min_spacing_handles_short_ladders() {
        assert_eq!(min_spacing(&[]), None);
        assert_eq!(min_spacing(&[1.8]), None);
        assert_eq!(min_spacing(&[1.8, 1.5, 1.45]), Some(0.050000000000000044));
    }
}
