//! End-to-end runs through files, fitting, evaluation, and analysis.

use imcsim::analog::{AnalogParams, CalibrationTable};
use imcsim::array::{ArrayConfig, BitWord, CellArray};
use imcsim::files;
use imcsim::metrics::{report_csv, Mode, TimingModel};
use imcsim::montecarlo::{decode_error_curve, run_trials, McConfig};
use imcsim::ops::Engine;

#[test]
fn calibration_file_drives_the_full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let calib_path = dir.path().join("calibration.txt");
    let thresh_path = dir.path().join("thresholds.txt");
    files::save_calibration(&calib_path, &CalibrationTable::reference()).unwrap();

    let table = files::load_calibration(&calib_path).unwrap();
    let engine = Engine::new(table, AnalogParams::default(), Mode::Table).unwrap();
    files::save_thresholds(&thresh_path, engine.bank()).unwrap();

    // MAC over every column at once; B words chosen so column c holds count c.
    let a = BitWord::ones(8);
    let b_cols: Vec<BitWord> = (0..8)
        .map(|c| BitWord::from_bits((0..8).map(|r| r < c).collect()))
        .collect();
    let mut array = CellArray::new(ArrayConfig::default()).unwrap();
    let results = engine.mac_parallel(&mut array, &a, &b_cols).unwrap();
    for (col, r) in results.iter().enumerate() {
        assert_eq!(r.count, col);
        assert_eq!(r.v_rbl, engine.table().voltage(col).unwrap());
    }

    // The saved thresholds quantize to whole millivolts, well inside the
    // worst-case 54 mV margin, so the reloaded bank classifies every
    // reference level identically.
    let bank = files::load_thresholds(&thresh_path).unwrap();
    for (i, (got, want)) in
        bank.thresholds().iter().zip(engine.bank().thresholds()).enumerate()
    {
        // Exactly half a millivolt when the midpoint sits on the 0.5 mV
        // grid (996 vs 995.5), plus representation noise.
        assert!((got - want).abs() <= 0.5e-3 + 1e-12, "threshold {i} off the mV grid");
    }
    let rebuilt = engine.clone().with_threshold_bank(bank).unwrap();
    let code = rebuilt.bank().compare(results[5].v_rbl);
    assert_eq!(code.to_count().unwrap(), 5);

    // Monte Carlo on the same engine, then both CSV exports parse back
    // structurally: one line per bin / per trial plus a header.
    let config = McConfig { n_trials: 64, sigma_cell: 0.05, sigma_comp: 0.01, ..Default::default() };
    let run = run_trials(&config, &engine, 8).unwrap();
    let hist = files::histogram_csv(&run.stats.histogram);
    assert_eq!(hist.lines().count(), run.stats.histogram.counts.len() + 1);
    assert!(hist.starts_with("bin_low_fJ,bin_high_fJ,count\n"));
    let trials = files::trials_csv(&run.trials);
    assert_eq!(trials.lines().count(), 64 + 1);
    assert!(trials.starts_with("trial,v_rbl_mV,decoded,energy_fJ\n"));

    // Error curve from the same seed is monotone and anchored at zero.
    let sigmas = [0.0, 0.02, 0.05, 0.1];
    let curve = decode_error_curve(&config, &engine, 4, &sigmas).unwrap();
    assert_eq!(curve[0].1, 0.0);
    assert!(curve.windows(2).all(|w| w[0].1 <= w[1].1));

    let report = report_csv(engine.table(), engine.params(), &TimingModel::default(), Mode::Table)
        .unwrap();
    assert_eq!(report.lines().count(), 10);
    assert!(report.contains("8,310.000,452.200,63.000,15.873"));
}

#[test]
fn resident_array_images_round_trip_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.txt");

    let mut array = CellArray::new(ArrayConfig { rows: 4, cols: 6 }).unwrap();
    for col in 0..6 {
        for row in 0..4 {
            array.write_bit(row, col, (row + col) % 3 != 0).unwrap();
        }
    }
    files::save_array_image(&path, &array).unwrap();
    let mut reloaded = files::load_array_image(&path).unwrap();
    assert_eq!(reloaded.rows(), 4);
    assert_eq!(reloaded.cols(), 6);
    for col in 0..6 {
        for row in 0..4 {
            assert_eq!(reloaded.read_bit(row, col).unwrap(), array.read_bit(row, col).unwrap());
        }
    }

    // Resident evaluation against a software popcount of the masked column.
    let engine = Engine::reference(Mode::Table).unwrap();
    let a = BitWord::parse("1011").unwrap();
    let results = engine.evaluate_resident(&mut reloaded, &a).unwrap();
    for (col, r) in results.iter().enumerate() {
        let want = (0..4)
            .filter(|&row| a.bit(row) && array.read_bit(row, col).unwrap())
            .count();
        assert_eq!(r.count, want);
    }
}
