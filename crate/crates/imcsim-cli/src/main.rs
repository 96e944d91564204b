//! Command-line front end over the `imcsim` library.
//!
//! Every subcommand prints its results to stdout; `--out` additionally
//! writes the CSV body to a file. All numeric output is formatted with
//! fixed precision so identical inputs produce byte-identical output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use imcsim::analog::{
    fit_discharge_model, fitted_ladder, min_spacing, rescale_ladder, AnalogParams,
    CalibrationTable, CapacitanceModel,
};
use imcsim::array::{ArrayConfig, BitWord, CellArray};
use imcsim::decoder::derive_thresholds;
use imcsim::files;
use imcsim::metrics::{
    energy_of_count, energy_per_bit, operation_latency, report_csv, throughput, Mode,
    TimingModel, REFERENCE_ENERGY_PER_BIT_FJ,
};
use imcsim::montecarlo::{run_trials, McConfig};
use imcsim::ops::{Engine, LogicOp};

#[derive(Parser)]
#[command(name = "imcsim", version, about = "Charge-domain in-memory-computing array simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply-accumulate columns: counts, read-line voltages, codes, energy.
    Mac(MacArgs),
    /// Bitwise Boolean operation decoded from the MAC count.
    Logic(LogicArgs),
    /// One-bit half add from a single evaluation (sum = XOR, carry = AND).
    Add(AddArgs),
    /// Monte Carlo over cell-strength, comparator, and energy variation.
    Mc(McArgs),
    /// Rescale the discharge ladder across array heights and check spacing.
    SweepRows(SweepArgs),
    /// Fit the discharge model and write fit parameters plus thresholds.
    Calibrate(CalibrateArgs),
    /// Per-count energy, latency, and throughput summary.
    Report(ReportArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Electrical model: `table` (calibrated points) or `parametric` (fitted curve).
    #[arg(long, default_value = "table")]
    mode: String,
    /// Calibration table file; defaults to the built-in reference ladder.
    #[arg(long)]
    calib: Option<PathBuf>,
    /// Comparator threshold file; defaults to ladder midpoints.
    #[arg(long)]
    thresholds: Option<PathBuf>,
}

impl ModelArgs {
    fn engine(&self) -> Result<Engine> {
        let mode: Mode = self.mode.parse()?;
        let mut engine = Engine::new(load_or_reference(&self.calib)?, AnalogParams::default(), mode)?;
        if let Some(path) = &self.thresholds {
            engine = engine.with_threshold_bank(files::load_thresholds(path)?)?;
        }
        Ok(engine)
    }
}

#[derive(Args)]
struct MacArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Activation word driven on the read word-lines, one bit per row.
    #[arg(long)]
    a: String,
    /// Stored word(s), one per column, comma separated.
    #[arg(long, conflicts_with = "load_array")]
    b: Option<String>,
    /// Evaluate an array image file in place (no write cycles).
    #[arg(long)]
    load_array: Option<PathBuf>,
    /// Array height when loading `--b` words.
    #[arg(long, default_value_t = 8)]
    rows: usize,
    /// Array width; defaults to the number of `--b` words.
    #[arg(long)]
    cols: Option<usize>,
    /// Also write the per-column CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LogicArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// One of and, nand, or, nor, xor, xnor.
    #[arg(long)]
    op: String,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Also write the per-bit CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AddArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Single operand bit, 0 or 1.
    #[arg(long)]
    a: String,
    /// Single operand bit, 0 or 1.
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// MAC count under test.
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative cell-strength sigma.
    #[arg(long, default_value_t = 0.0)]
    sigma_cell: f64,
    /// Comparator offset sigma in millivolts.
    #[arg(long, default_value_t = 0.0)]
    sigma_comp: f64,
    /// Relative energy sigma; defaults to the reference spread.
    #[arg(long)]
    sigma_energy: Option<f64>,
    /// Energy mean override in femtojoules.
    #[arg(long)]
    mean_fj: Option<f64>,
    /// Histogram bin count.
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Write the energy histogram CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every trial record as CSV here.
    #[arg(long)]
    dump_trials: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Array heights to rescale the ladder for.
    #[arg(long, value_delimiter = ',', default_values_t = vec![4, 8, 16, 32])]
    rows: Vec<usize>,
    /// Minimum acceptable level spacing in millivolts.
    #[arg(long, default_value_t = 100.0)]
    floor_mv: f64,
    /// Fixed RBL capacitance in femtofarads.
    #[arg(long, default_value_t = 40.0)]
    c_fixed_ff: f64,
    /// Per-row RBL capacitance in femtofarads.
    #[arg(long, default_value_t = 20.0)]
    c_per_row_ff: f64,
    /// Calibration table file; defaults to the built-in reference ladder.
    #[arg(long)]
    calib: Option<PathBuf>,
    /// Also write the ladder CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Calibration table file; defaults to the built-in reference ladder.
    #[arg(long)]
    calib: Option<PathBuf>,
    #[arg(long, default_value = "fitted_params.txt")]
    out_params: PathBuf,
    #[arg(long, default_value = "thresholds.txt")]
    out_thresholds: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Also write the report CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mac(args) => cmd_mac(args),
        Command::Logic(args) => cmd_logic(args),
        Command::Add(args) => cmd_add(args),
        Command::Mc(args) => cmd_mc(args),
        Command::SweepRows(args) => cmd_sweep(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn load_or_reference(calib: &Option<PathBuf>) -> Result<CalibrationTable> {
    Ok(match calib {
        Some(path) => files::load_calibration(path)?,
        None => CalibrationTable::reference(),
    })
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn approx_tag(mode: Mode) -> &'static str {
    if mode.is_approximate() {
        " (approximation)"
    } else {
        ""
    }
}

fn parse_bit(s: &str) -> Result<bool> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => bail!("operand bit must be 0 or 1, got {s:?}"),
    }
}

fn cmd_mac(args: MacArgs) -> Result<()> {
    let engine = args.model.engine()?;
    let a = BitWord::parse(&args.a)?;
    let (results, rows, write_cycles) = if let Some(path) = &args.load_array {
        let mut array = files::load_array_image(path)?;
        let rows = array.rows();
        (engine.evaluate_resident(&mut array, &a)?, rows, 0)
    } else {
        let Some(b_raw) = &args.b else {
            bail!("one of --b or --load-array is required");
        };
        let words = b_raw
            .split(',')
            .map(|w| Ok(BitWord::parse(w.trim())?))
            .collect::<Result<Vec<_>>>()?;
        let cols = args.cols.unwrap_or(words.len());
        if words.len() != cols {
            bail!("got {} B words for {cols} columns", words.len());
        }
        let mut array = CellArray::new(ArrayConfig { rows: args.rows, cols })?;
        let results = engine.mac_parallel(&mut array, &a, &words)?;
        (results, args.rows, args.rows)
    };

    let timing = TimingModel { write_cycles, ..TimingModel::default() };
    timing.validate()?;
    let latency_ns = operation_latency(&timing) * 1e9;
    let mops = throughput(&timing) / 1e6;

    println!("mode: {}{}", engine.mode(), approx_tag(engine.mode()));
    let mut csv = String::from("col,count,v_mV,code,energy_fJ,latency_ns,throughput_Mops\n");
    for (col, r) in results.iter().enumerate() {
        csv.push_str(&format!(
            "{col},{},{:.3},{},{:.3},{latency_ns:.3},{mops:.3}\n",
            r.count,
            r.v_rbl * 1e3,
            r.code,
            r.energy_fj
        ));
    }
    print!("{csv}");
    let total: f64 = results.iter().map(|r| r.energy_fj).sum();
    println!(
        "total_fJ: {total:.3}  per_bit_fJ: {:.3}",
        energy_per_bit(total, results.len() * rows)
    );
    write_out(&args.out, &csv)
}

fn cmd_logic(args: LogicArgs) -> Result<()> {
    let engine = args.model.engine()?;
    let op: LogicOp = args.op.parse()?;
    let a = BitWord::parse(&args.a)?;
    let b = BitWord::parse(&args.b)?;
    let evals = engine.logic_word_eval(&a, &b)?;
    let result = BitWord::from_bits(evals.iter().map(|(_, v)| v.op_bit(op)).collect());

    println!("op: {op}");
    println!("a:      {a}");
    println!("b:      {b}");
    println!("result: {result}");
    let mut csv = String::from("bit,a,b,count,v_mV,out,energy_fJ\n");
    for (i, (mac, verdict)) in evals.iter().enumerate() {
        csv.push_str(&format!(
            "{i},{},{},{},{:.3},{},{:.3}\n",
            a.bit(i) as u8,
            b.bit(i) as u8,
            mac.count,
            mac.v_rbl * 1e3,
            verdict.op_bit(op) as u8,
            mac.energy_fj
        ));
    }
    print!("{csv}");
    write_out(&args.out, &csv)
}

fn cmd_add(args: AddArgs) -> Result<()> {
    let engine = args.model.engine()?;
    let a = parse_bit(&args.a)?;
    let b = parse_bit(&args.b)?;
    let (mac, verdict) = engine.logic_eval(a, b)?;
    println!("a: {}  b: {}", a as u8, b as u8);
    println!("sum: {}  carry: {}", verdict.sum as u8, verdict.carry as u8);
    println!(
        "count: {}  v_mV: {:.3}  energy_fJ: {:.3}",
        mac.count,
        mac.v_rbl * 1e3,
        mac.energy_fj
    );
    Ok(())
}

fn cmd_mc(args: McArgs) -> Result<()> {
    let engine = args.model.engine()?;
    let mut config = McConfig {
        n_trials: args.trials,
        sigma_cell: args.sigma_cell,
        sigma_comp: args.sigma_comp / 1e3,
        energy_mean_fj: args.mean_fj,
        seed: args.seed,
        hist_bins: args.bins,
        ..McConfig::default()
    };
    if let Some(sigma) = args.sigma_energy {
        config.sigma_energy = sigma;
    }
    let run = run_trials(&config, &engine, args.count)?;

    println!("count: {}  trials: {}  seed: {}", args.count, config.n_trials, config.seed);
    println!("mode: {}{}", engine.mode(), approx_tag(engine.mode()));
    println!("mean_fJ: {:.3}  std_fJ: {:.3}", run.stats.mean_fj, run.stats.std_fj);
    println!("decode_error_rate: {:.3}", run.stats.decode_error_rate);
    write_out(&args.out, &files::histogram_csv(&run.stats.histogram))?;
    write_out(&args.dump_trials, &files::trials_csv(&run.trials))
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let table = load_or_reference(&args.calib)?;
    let params = fit_discharge_model(&table, &AnalogParams::default())?;
    let cap = CapacitanceModel {
        c_fixed: args.c_fixed_ff * 1e-15,
        c_per_row: args.c_per_row_ff * 1e-15,
    };

    let mut csv = String::from("rows,count,v_mV,threshold_mV,min_spacing_mV,below_floor\n");
    let mut summary = String::new();
    for &rows in &args.rows {
        let ladder = rescale_ladder(&table, rows, &cap, &params)?;
        let bank = derive_thresholds(&ladder)?;
        let spacing_mv =
            min_spacing(&ladder).context("ladder too short for a spacing")? * 1e3;
        let below = spacing_mv < args.floor_mv;
        for (count, v) in ladder.iter().enumerate() {
            let threshold = if count < bank.len() {
                format!("{:.3}", bank.thresholds()[count] * 1e3)
            } else {
                String::new()
            };
            csv.push_str(&format!(
                "{rows},{count},{:.3},{threshold},{spacing_mv:.3},{}\n",
                v * 1e3,
                below as u8
            ));
        }
        summary.push_str(&format!(
            "rows {rows}: min_spacing_mV {spacing_mv:.3}{}\n",
            if below { format!("  BELOW FLOOR ({} mV)", args.floor_mv) } else { String::new() }
        ));
    }
    print!("{csv}{summary}");
    write_out(&args.out, &csv)
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<()> {
    let table = load_or_reference(&args.calib)?;
    let params = fit_discharge_model(&table, &AnalogParams::default())?;
    let ladder = fitted_ladder(&params, table.max_count())?;
    let max_residual_mv = ladder
        .iter()
        .zip(table.voltages())
        .map(|(fit, meas)| (fit - meas).abs())
        .fold(0.0, f64::max)
        * 1e3;
    let fit = params.fit.as_ref().expect("fit installed by fit_discharge_model");

    println!("fit_a: {:.12e}", fit.a);
    println!("fit_b: {:.12e}", fit.b);
    println!("fit_c: {:.12e}", fit.c);
    println!("max_residual_mV: {max_residual_mv:.3}");
    files::save_fit_params(&args.out_params, &params, max_residual_mv)?;
    files::save_thresholds(&args.out_thresholds, &derive_thresholds(table.voltages())?)?;
    println!("wrote {}", args.out_params.display());
    println!("wrote {}", args.out_thresholds.display());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let engine = args.model.engine()?;
    let timing = TimingModel::default();
    let csv = report_csv(engine.table(), engine.params(), &timing, engine.mode())?;
    print!("{csv}");

    let full = engine.table().max_count();
    let total = energy_of_count(full, engine.table(), engine.mode(), engine.params())?;
    println!(
        "energy_per_bit_fJ: {:.3}{}",
        energy_per_bit(total, full),
        approx_tag(engine.mode())
    );
    let table_per_bit = energy_per_bit(engine.table().energy_fj(full)?, full);
    let deviation =
        (REFERENCE_ENERGY_PER_BIT_FJ - table_per_bit).abs() / REFERENCE_ENERGY_PER_BIT_FJ * 100.0;
    println!(
        "reference_energy_per_bit_fJ: {REFERENCE_ENERGY_PER_BIT_FJ}  (table-mode deviation {deviation:.2}%)"
    );
    println!(
        "clock_MHz: {:.3}  latency_ns: {:.3}  throughput_Mops: {:.3}",
        1.0 / timing.clock_period / 1e6,
        operation_latency(&timing) * 1e9,
        throughput(&timing) / 1e6
    );
    write_out(&args.out, &csv)
}
