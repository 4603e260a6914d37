use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use fdasim::analysis::{evaluate_raster, find_focus, PatternMode, RasterGrid};
use fdasim::checks::run_checks;
use fdasim::config::{parse_config_with_overrides, ParsedConfig, RunConfig};
use fdasim::export::{export_csv, export_image, format_sig9, CsvScale};
use fdasim::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fdasim",
    version,
    about = "Range-angle beampatterns of FDAs and pulsed phased arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override a config value, e.g. `--set grid.n_range=256`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "pgm", "both"])]
    format: Option<String>,
    /// Pattern mode; inferred from the config when omitted.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one raster and write CSV/PGM plus a focus report.
    Snapshot {
        #[command(flatten)]
        common: Common,
        /// Snapshot time, with optional unit suffix (e.g. `0.05ms`).
        #[arg(long)]
        time: Option<String>,
    },
    /// Evaluate one raster per time and write numbered outputs.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Snapshot times; repeat the flag or separate with commas.
        #[arg(long, required = true, value_delimiter = ',')]
        time: Vec<String>,
    },
    /// Evaluate two modes on the same grid and report their largest difference.
    Compare {
        #[command(flatten)]
        common: Common,
        mode_a: String,
        mode_b: String,
        #[arg(long)]
        time: Option<String>,
        /// Fail (exit 3) when max|a - b| exceeds this fraction of the weight sum.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run the built-in randomized property suite.
    Check {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

enum Failure {
    Config(Error),
    Io(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e),
            other => Failure::Config(other),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CHECK)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Snapshot { common, time } => {
            let parsed = load(&common, time.as_deref())?;
            let raster = raster_for(&parsed.config, None)?;
            write_outputs(&parsed.config, &raster, &parsed.config.output.prefix)?;
            println!("{}", focus_line(&raster));
        }
        Command::Sweep { common, time } => {
            for (k, t) in time.iter().enumerate() {
                let parsed = load(&common, Some(t))?;
                let raster = raster_for(&parsed.config, None)?;
                let stem = format!("{}_{k:03}", parsed.config.output.prefix);
                write_outputs(&parsed.config, &raster, &stem)?;
                println!("{}", focus_line(&raster));
            }
        }
        Command::Compare {
            common,
            mode_a,
            mode_b,
            time,
            tolerance,
        } => {
            let parsed = load(&common, time.as_deref())?;
            let a = raster_for(&parsed.config, Some(parse_mode(&mode_a)?))?;
            let b = raster_for(&parsed.config, Some(parse_mode(&mode_b)?))?;
            let diff = a.max_abs_diff(&b)?;
            let sum = parsed.config.build_array()?.weight_sum();
            let rel = diff / sum;
            println!(
                "mode_a={} mode_b={} max_abs_diff={} sum_weights={} rel_diff={}",
                a.mode,
                b.mode,
                format_sig9(diff),
                format_sig9(sum),
                format_sig9(rel)
            );
            if let Some(tol) = tolerance {
                if rel.is_nan() || rel > tol {
                    return Err(Failure::Check(format!(
                        "relative difference {rel:.3e} exceeds tolerance {tol:.3e}"
                    )));
                }
            }
        }
        Command::Check { seed, trials } => {
            let results = run_checks(seed, trials);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(Failure::Check(format!(
                    "{failed} of {} checks failed",
                    results.len()
                )));
            }
        }
    }
    Ok(())
}

fn parse_mode(s: &str) -> Result<PatternMode, Failure> {
    s.parse::<PatternMode>().map_err(Failure::Config)
}

fn load(common: &Common, time: Option<&str>) -> Result<ParsedConfig, Failure> {
    let text = std::fs::read_to_string(&common.config).map_err(|e| {
        Failure::Config(Error::Io {
            path: common.config.display().to_string(),
            message: e.to_string(),
        })
    })?;
    let mut overrides = common.set.clone();
    if let Some(dir) = &common.out_dir {
        overrides.push(format!("output.out_dir={}", dir.display()));
    }
    if let Some(f) = &common.format {
        overrides.push(format!("output.format={f}"));
    }
    if let Some(m) = &common.mode {
        overrides.push(format!("grid.mode={m}"));
    }
    if let Some(t) = time {
        overrides.push(format!("grid.time={t}"));
    }
    let parsed = parse_config_with_overrides(&text, &overrides)?;
    for line in &parsed.provenance {
        info!("{line}");
    }
    Ok(parsed)
}

fn raster_for(config: &RunConfig, mode: Option<PatternMode>) -> Result<RasterGrid, Failure> {
    let cfg = config.build_array()?;
    let env = config.build_env()?;
    let pulse = config.pulse_option();
    let mode = match mode {
        Some(m) => m,
        None => config.resolved_mode()?,
    };
    Ok(evaluate_raster(
        &cfg,
        &env,
        pulse.as_ref(),
        mode,
        &config.grid,
    )?)
}

fn write_outputs(config: &RunConfig, raster: &RasterGrid, stem: &str) -> Result<(), Failure> {
    let out = &config.output;
    std::fs::create_dir_all(&out.out_dir).map_err(|e| {
        Failure::Io(Error::Io {
            path: out.out_dir.display().to_string(),
            message: e.to_string(),
        })
    })?;
    if out.format.wants_csv() {
        let scale = if out.csv_db {
            CsvScale::Db {
                floor_db: out.db_floor,
            }
        } else {
            CsvScale::Linear
        };
        let path = out_path(&out.out_dir, stem, "csv");
        export_csv(raster, scale, &path)?;
        info!("wrote {}", path.display());
    }
    if out.format.wants_pgm() {
        let path = out_path(&out.out_dir, stem, "pgm");
        export_image(raster, out.db_floor, &path)?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn out_path(dir: &Path, stem: &str, ext: &str) -> PathBuf {
    dir.join(format!("{stem}.{ext}"))
}

fn focus_line(raster: &RasterGrid) -> String {
    let head = format!("t_s={} mode={}", format_sig9(raster.spec.t_s), raster.mode);
    match find_focus(raster) {
        Ok(f) => format!(
            "{head} peak_r_m={} peak_theta_deg={} peak_mag={} range_extent_m={} range_center_m={} theta_extent_deg={}",
            format_sig9(f.peak_r_m),
            format_sig9(f.peak_theta_rad.to_degrees()),
            format_sig9(f.peak_mag),
            format_sig9(f.range_extent_m),
            format_sig9(f.range_center_m),
            format_sig9(f.theta_extent_rad.to_degrees()),
        ),
        Err(_) => format!("{head} focus=none"),
    }
}
