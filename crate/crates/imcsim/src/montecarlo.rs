//! Monte Carlo mismatch analysis of the MAC pipeline.
//!
//! Three noise knobs: relative cell-strength spread (moves the settled
//! voltage through the fitted transfer curve), comparator offset spread
//! (moves decisions), and relative energy spread (table mode only;
//! parametric energy inherits its noise from the voltage). Every trial owns
//! a counter-derived RNG stream, so trial t's randomness is a pure function
//! of (seed, t): results never depend on evaluation order, and a run is
//! reproducible bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::analog::model_voltage_effective;
use crate::error::{Error, Result};
use crate::metrics::{parametric_energy_fj, Mode};
use crate::ops::Engine;

pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_HIST_BINS: usize = 20;
/// Reference Monte Carlo energy statistics at the full-word operating point.
pub const REFERENCE_MC_MEAN_FJ: f64 = 437.0;
pub const REFERENCE_MC_STD_FJ: f64 = 48.72;

/// Noise configuration of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_trials: usize,
    /// Relative cell-strength spread (nominal 1.0).
    pub sigma_cell: f64,
    /// Comparator offset spread, volts.
    pub sigma_comp: f64,
    /// Relative per-operation energy spread, table mode.
    pub sigma_energy: f64,
    /// Table-mode energy mean override, femtojoules; `None` reads the ladder.
    pub energy_mean_fj: Option<f64>,
    pub seed: u64,
    pub hist_bins: usize,
}

impl Default for McConfig {
    // sigma_energy defaults to the reference run's relative spread.
    fn default() -> Self {
        Self {
            n_trials: DEFAULT_TRIALS,
            sigma_cell: 0.0,
            sigma_comp: 0.0,
            sigma_energy: REFERENCE_MC_STD_FJ / REFERENCE_MC_MEAN_FJ,
            energy_mean_fj: None,
            seed: DEFAULT_SEED,
            hist_bins: DEFAULT_HIST_BINS,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::ConfigInvalid("n_trials must be at least 1".into()));
        }
        if self.hist_bins == 0 {
            return Err(Error::ConfigInvalid("hist_bins must be at least 1".into()));
        }
        for (name, sigma) in [
            ("sigma_cell", self.sigma_cell),
            ("sigma_comp", self.sigma_comp),
            ("sigma_energy", self.sigma_energy),
        ] {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::ConfigInvalid(format!(
                    "{name} must be finite and >= 0, got {sigma}"
                )));
            }
        }
        if let Some(mean) = self.energy_mean_fj {
            if !(mean > 0.0 && mean.is_finite()) {
                return Err(Error::ConfigInvalid(format!(
                    "energy mean must be positive, got {mean}"
                )));
            }
        }
        Ok(())
    }
}

/// One trial's observables.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Settled RBL voltage under this trial's cell mismatch, volts.
    pub v_rbl: f64,
    /// Decoded count; `None` when the comparator readout had a bubble.
    pub decoded: Option<usize>,
    pub energy_fj: f64,
}

/// Equal-width energy histogram; `edges.len() == counts.len() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn build(values: &[f64], bins: usize) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            // Degenerate spread collapses to a single zero-width bin.
            return Self { edges: vec![lo, hi], counts: vec![values.len()] };
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0usize; bins];
        for v in values {
            let bin = (((v - lo) / width) as usize).min(bins - 1);
            counts[bin] += 1;
        }
        Self { edges, counts }
    }
}

/// Aggregate statistics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct McStats {
    pub n_trials: usize,
    pub mean_fj: f64,
    /// Sample standard deviation (n - 1 normalization).
    pub std_fj: f64,
    /// Fraction of trials that decoded to anything but the true count.
    pub decode_error_rate: f64,
    pub histogram: Histogram,
}

/// A full run: aggregate statistics plus every trial.
#[derive(Debug, Clone, PartialEq)]
pub struct McRun {
    pub stats: McStats,
    pub trials: Vec<TrialRecord>,
}

/// Draws `n` standard normals from the trial stream.
fn standard_normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// RNG for trial `t`: one ChaCha stream per trial off the shared seed.
fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

/// Computes trial `t` in isolation; draw order per trial is fixed as
/// strengths, then comparator offsets, then the table-mode energy draw.
fn run_trial(config: &McConfig, engine: &Engine, count: usize, t: usize) -> Result<TrialRecord> {
    let mut rng = trial_rng(config.seed, t);

    // Zero sigma scales every draw to exactly its nominal value, so the
    // degenerate configuration is bit-exact, not just close.
    let n_eff: f64 = standard_normals(&mut rng, count)
        .iter()
        .map(|z| (1.0 + config.sigma_cell * z).max(0.0))
        .sum();
    let v_rbl = model_voltage_effective(n_eff, engine.params())?;

    let offset_z = standard_normals(&mut rng, engine.bank().len());
    let offsets: Vec<f64> = offset_z.iter().map(|z| config.sigma_comp * z).collect();
    let decoded = engine
        .bank()
        .compare_with_extra_offsets(v_rbl, &offsets)?
        .to_count()
        .ok();

    let energy_fj = match engine.mode() {
        Mode::Table => {
            let mean = match config.energy_mean_fj {
                Some(mean) => mean,
                None => engine.table().energy_fj(count)?,
            };
            let z: f64 = StandardNormal.sample(&mut rng);
            mean + config.sigma_energy * mean * z
        }
        Mode::Parametric => parametric_energy_fj(v_rbl, engine.params()),
    };

    Ok(TrialRecord { trial: t, v_rbl, decoded, energy_fj })
}

/// Runs the Monte Carlo analysis of one MAC count.
pub fn run_trials(config: &McConfig, engine: &Engine, count: usize) -> Result<McRun> {
    config.validate()?;
    if count > engine.table().max_count() {
        return Err(Error::CountOutOfRange { count, limit: engine.table().max_count() });
    }

    let trials: Vec<TrialRecord> = (0..config.n_trials)
        .map(|t| run_trial(config, engine, count, t))
        .collect::<Result<_>>()?;

    let n = trials.len();
    let energies: Vec<f64> = trials.iter().map(|r| r.energy_fj).collect();
    // Centered mean: exact when every trial is identical (zero-sigma runs
    // must collapse to the table value bit for bit), more accurate otherwise.
    let pivot = energies[0];
    let mean_fj = pivot + energies.iter().map(|e| e - pivot).sum::<f64>() / n as f64;
    let std_fj = if n > 1 {
        (energies.iter().map(|e| (e - mean_fj).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let errors = trials.iter().filter(|r| r.decoded != Some(count)).count();
    let stats = McStats {
        n_trials: n,
        mean_fj,
        std_fj,
        decode_error_rate: errors as f64 / n as f64,
        histogram: Histogram::build(&energies, config.hist_bins),
    };
    Ok(McRun { stats, trials })
}

/// Decode-error rate as a function of comparator offset spread.
///
/// Cell mismatch is frozen at nominal so the curve isolates the comparator
/// knob. Common random numbers across the sigma grid: trial t draws its
/// offset directions once and every sigma scales them, so each comparator
/// decision flips at most once along the grid and the curve is exactly
/// monotone, not just statistically so.
pub fn decode_error_curve(
    config: &McConfig,
    engine: &Engine,
    count: usize,
    sigmas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    config.validate()?;
    if let Some(bad) = sigmas.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return Err(Error::ConfigInvalid(format!(
            "sigma grid must be finite and >= 0, got {bad}"
        )));
    }
    let v_nom = engine.voltage_for_count(count)?;

    let offset_z: Vec<Vec<f64>> = (0..config.n_trials)
        .map(|t| standard_normals(&mut trial_rng(config.seed, t), engine.bank().len()))
        .collect();

    sigmas
        .iter()
        .map(|sigma| {
            let mut errors = 0usize;
            for z in &offset_z {
                let offsets: Vec<f64> = z.iter().map(|zi| sigma * zi).collect();
                let decoded = engine
                    .bank()
                    .compare_with_extra_offsets(v_nom, &offsets)?
                    .to_count()
                    .ok();
                if decoded != Some(count) {
                    errors += 1;
                }
            }
            Ok((*sigma, errors as f64 / config.n_trials as f64))
        })
        .collect()
}
