//! Property-based invariants spanning the whole pipeline.

use imcsim::analog::{
    fit_discharge_model, model_voltage_effective, AnalogParams, CalibrationTable,
    REFERENCE_VOLTAGES,
};
use imcsim::array::{ArrayConfig, BitWord, CellArray};
use imcsim::decoder::derive_thresholds;
use imcsim::files::{format_calibration, parse_calibration};
use imcsim::metrics::{operation_latency, throughput, Mode, TimingModel};
use imcsim::montecarlo::{run_trials, McConfig};
use imcsim::ops::{Engine, LogicOp};
use proptest::prelude::*;

fn bit_word(len: usize) -> impl Strategy<Value = BitWord> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitWord::from_bits)
}

fn word_pair() -> impl Strategy<Value = (BitWord, BitWord)> {
    (1usize..=16).prop_flat_map(|len| (bit_word(len), bit_word(len)))
}

fn table_engine() -> Engine {
    Engine::reference(Mode::Table).unwrap()
}

proptest! {
    #[test]
    fn mac_count_is_popcount_of_the_and(a in bit_word(8), b in bit_word(8)) {
        let engine = table_engine();
        let mut array = CellArray::new(ArrayConfig::default()).unwrap();
        let result = engine.mac_column(&mut array, 0, &a, &b).unwrap();
        prop_assert_eq!(result.count, a.and(&b).unwrap().popcount());
        // The comparator readout agrees with the physical count.
        prop_assert_eq!(result.code.to_count().unwrap(), result.count);
    }

    #[test]
    fn logic_words_match_software_oracles((a, b) in word_pair()) {
        let engine = table_engine();
        for op in LogicOp::ALL {
            let word = engine.logic_word(&a, &b, op).unwrap();
            for i in 0..a.len() {
                let (x, y) = (a.bit(i), b.bit(i));
                let want = match op {
                    LogicOp::And => x && y,
                    LogicOp::Nand => !(x && y),
                    LogicOp::Or => x || y,
                    LogicOp::Nor => !(x || y),
                    LogicOp::Xor => x != y,
                    LogicOp::Xnor => x == y,
                };
                prop_assert_eq!(word.bit(i), want);
            }
        }
    }

    #[test]
    fn half_add_matches_xor_and_carry(a in any::<bool>(), b in any::<bool>()) {
        let engine = table_engine();
        prop_assert_eq!(engine.add_1bit(a, b).unwrap(), (a != b, a && b));
    }

    #[test]
    fn decode_is_monotone_in_voltage(v1 in 0.0f64..1.8, v2 in 0.0f64..1.8) {
        let bank = derive_thresholds(&REFERENCE_VOLTAGES).unwrap();
        let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
        // Lower voltage means more discharge paths, so at least as high a count.
        prop_assert!(bank.decode(lo).unwrap() >= bank.decode(hi).unwrap());
    }

    #[test]
    fn zero_offset_banks_never_bubble(v in -1.0f64..3.0) {
        let bank = derive_thresholds(&REFERENCE_VOLTAGES).unwrap();
        prop_assert!(bank.compare(v).to_count().is_ok());
    }

    #[test]
    fn arbitrary_monotone_ladders_round_trip_through_decode(
        deltas in prop::collection::vec(0.01f64..0.3, 2..=16)
    ) {
        let mut level = 1.9f64;
        let mut ladder = vec![level];
        for d in &deltas {
            level -= d;
            ladder.push(level);
        }
        let bank = derive_thresholds(&ladder).unwrap();
        for (count, v) in ladder.iter().enumerate() {
            prop_assert_eq!(bank.decode(*v).unwrap(), count);
        }
    }

    #[test]
    fn model_voltage_is_clamped_and_monotone(n1 in 0.0f64..64.0, n2 in 0.0f64..64.0) {
        let params =
            fit_discharge_model(&CalibrationTable::reference(), &AnalogParams::default()).unwrap();
        let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
        let v_lo = model_voltage_effective(lo, &params).unwrap();
        let v_hi = model_voltage_effective(hi, &params).unwrap();
        prop_assert!((0.0..=1.8).contains(&v_lo));
        prop_assert!((0.0..=1.8).contains(&v_hi));
        prop_assert!(v_lo >= v_hi);
    }

    #[test]
    fn write_sequences_match_a_shadow_model(
        ops in prop::collection::vec((0usize..8, 0usize..8, any::<bool>()), 0..64)
    ) {
        let mut array = CellArray::new(ArrayConfig::default()).unwrap();
        let mut shadow = [[false; 8]; 8];
        for (row, col, bit) in &ops {
            array.write_bit(*row, *col, *bit).unwrap();
            shadow[*row][*col] = *bit;
        }
        for (row, shadow_row) in shadow.iter().enumerate() {
            for (col, want) in shadow_row.iter().enumerate() {
                prop_assert_eq!(array.read_bit(row, col).unwrap(), *want);
            }
        }
    }

    #[test]
    fn histogram_mass_equals_trial_count(
        sigma in 0.0f64..0.3,
        bins in 1usize..24,
        seed in any::<u64>(),
        count in 0usize..=8,
    ) {
        let config = McConfig {
            n_trials: 50,
            sigma_energy: sigma,
            hist_bins: bins,
            seed,
            ..Default::default()
        };
        let run = run_trials(&config, &table_engine(), count).unwrap();
        prop_assert_eq!(run.stats.histogram.counts.iter().sum::<usize>(), 50);
        prop_assert!(run.stats.mean_fj.is_finite());
        prop_assert!(run.stats.std_fj >= 0.0);
    }

    #[test]
    fn throughput_inverts_latency_within_one_ulp(
        clock_ps in 100u32..100_000,
        writes in 0usize..64,
        precharges in 1usize..4,
    ) {
        let timing = TimingModel {
            clock_period: clock_ps as f64 * 1e-12,
            write_cycles: writes,
            precharge_cycles: precharges,
            eval_window: clock_ps as f64 * 1e-13,
        };
        timing.validate().unwrap();
        let product = throughput(&timing) * operation_latency(&timing);
        prop_assert!((product - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn integer_grid_calibrations_round_trip_bit_exact(
        (v_deltas, e_deltas) in (2usize..=12).prop_flat_map(|n| (
            prop::collection::vec(1i64..=150, n),
            prop::collection::vec(1i64..=500, n),
        ))
    ) {
        let mut mv = 1900i64;
        let mut tenths = 10i64;
        let (mut volts, mut energies) = (vec![mv as f64 / 1e3], vec![tenths as f64 / 10.0]);
        for (dv, de) in v_deltas.iter().zip(&e_deltas) {
            mv -= dv;
            tenths += de;
            volts.push(mv as f64 / 1e3);
            energies.push(tenths as f64 / 10.0);
        }
        let table = CalibrationTable::new(volts, energies).unwrap();
        let reloaded = parse_calibration(&format_calibration(&table)).unwrap();
        prop_assert_eq!(reloaded.voltages(), table.voltages());
        prop_assert_eq!(reloaded.energies_fj(), table.energies_fj());
    }

    #[test]
    fn bit_words_round_trip_through_strings(bits in prop::collection::vec(any::<bool>(), 1..32)) {
        let word = BitWord::from_bits(bits);
        let reparsed = BitWord::parse(&word.to_string()).unwrap();
        prop_assert_eq!(reparsed, word);
    }
}
