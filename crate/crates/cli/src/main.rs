use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hwz_core::metrics::{self, format_value};
use hwz_core::rate::{self, RateTarget, TargetStatus};
use hwz_core::transform::{self, registry};
use hwz_core::{pgm, pipeline, sweep, Error, MetricsReport, Mode, Pipeline, ThresholdPolicy, TransformSpec};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hwz",
    version,
    about = "Haar wavelet compression for grayscale PGM images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM image into an .hwz stream
    Compress(CompressArgs),
    /// Rebuild a PGM image from an .hwz stream
    Decompress {
        input: PathBuf,
        output: PathBuf,
        /// Write ASCII (P2) instead of binary (P5)
        #[arg(long)]
        ascii: bool,
    },
    /// Compare two images (MSE, PSNR, energy retained)
    Metrics {
        reference: PathBuf,
        test: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Check that lossless compression reproduces the image exactly
    Verify {
        input: PathBuf,
        #[command(flatten)]
        transform: TransformArgs,
    },
    /// Sweep epsilon for hard and soft thresholding plus the universal point
    Analyze {
        input: PathBuf,
        /// Comma-separated list or lo:hi:step range
        #[arg(long)]
        eps: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        transform: TransformArgs,
    },
}

#[derive(Args)]
struct TransformArgs {
    /// Decomposition: standard or pyramid
    #[arg(long)]
    mode: Option<String>,
    /// Pyramid depth (defaults to 1)
    #[arg(long)]
    levels: Option<u32>,
}

impl TransformArgs {
    fn spec(&self) -> Result<Option<TransformSpec>, Error> {
        let Some(name) = &self.mode else {
            return match self.levels {
                Some(levels) => Ok(Some(TransformSpec::pyramid(levels))),
                None => Ok(None),
            };
        };
        Ok(Some(match name.parse::<Mode>()? {
            Mode::Standard => TransformSpec::STANDARD,
            Mode::Pyramid => TransformSpec::pyramid(self.levels.unwrap_or(1)),
        }))
    }
}

#[derive(Args)]
#[group(id = "policy", multiple = false)]
struct PolicyArgs {
    #[arg(long, value_name = "E", group = "policy")]
    hard: Option<f64>,
    #[arg(long, value_name = "E", group = "policy")]
    soft: Option<f64>,
    #[arg(long, group = "policy")]
    universal: bool,
    #[arg(long = "target-cr", value_name = "X", group = "policy")]
    target_cr: Option<f64>,
    #[arg(long = "target-psnr", value_name = "Y", group = "policy")]
    target_psnr: Option<f64>,
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    transform: TransformArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    /// PSNR tolerance in dB for --target-psnr
    #[arg(long, value_name = "T", default_value_t = 0.5, requires = "target_psnr")]
    tol: f64,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidThreshold(_)
        | Error::InvalidTarget(_)
        | Error::InvalidSweep(_)
        | Error::UnknownStrategy { .. }
        | Error::LevelTooDeep { .. }
        | Error::ZeroLevels
        | Error::InsufficientCoefficients(_)
        | Error::InvalidEnv(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

fn print_report(out: &mut impl Write, epsilon: f64, report: &MetricsReport) -> io::Result<()> {
    writeln!(out, "epsilon: {}", format_value(epsilon))?;
    writeln!(out, "nnz_original: {}", report.nnz_original)?;
    writeln!(out, "nnz_thresholded: {}", report.nnz_thresholded)?;
    writeln!(out, "cr: {}", format_value(report.cr))?;
    writeln!(out, "mse: {}", format_value(report.mse))?;
    writeln!(out, "psnr_db: {}", format_value(report.psnr_db))?;
    writeln!(
        out,
        "energy_retained_pct: {}",
        format_value(report.energy_retained_pct)
    )
}

fn compress(args: &CompressArgs) -> Result<(), Error> {
    let image = pgm::read_pgm(&args.input)?;
    let spec = args.transform.spec()?.unwrap_or_default();
    let p = &args.policy;
    let (compressed, status) = if let Some(target) = p.target_cr {
        let s = rate::solve(&image, spec, RateTarget::CompressionRatio(target))?;
        (s.compressed, Some(s.status))
    } else if let Some(db) = p.target_psnr {
        let s = rate::solve(
            &image,
            spec,
            RateTarget::Psnr {
                db,
                tolerance_db: args.tol,
            },
        )?;
        (s.compressed, Some(s.status))
    } else {
        let policy = match (p.hard, p.soft, p.universal) {
            (_, Some(e), _) => ThresholdPolicy::Soft(e),
            (_, _, true) => ThresholdPolicy::Universal,
            (e, ..) => ThresholdPolicy::Hard(e.unwrap_or(0.0)),
        };
        let pipeline = Pipeline::new(&image, spec)?;
        (pipeline.run(&*policy.build()?)?, None)
    };
    fs::write(&args.output, compressed.encode()?)?;

    let mut out = io::stdout().lock();
    writeln!(out, "mode: {}", spec.mode)?;
    writeln!(out, "method: {}", compressed.header.threshold_method)?;
    print_report(&mut out, compressed.header.epsilon, &compressed.report)?;
    match status {
        Some(TargetStatus::Unreachable) => writeln!(out, "target: unreachable")?,
        Some(TargetStatus::Overshoot) => writeln!(out, "target: overshoot")?,
        Some(TargetStatus::Met) => writeln!(out, "target: met")?,
        None => {}
    }
    Ok(())
}

fn metrics_cmd(reference: &PathBuf, test: &PathBuf, csv: bool) -> Result<(), Error> {
    let a = pgm::read_pgm(reference)?;
    let b = pgm::read_pgm(test)?;
    let mse = metrics::mse(&a, &b)?;
    let psnr = metrics::psnr_from_mse(mse);
    let energy = match metrics::energy_retained(&a, &b) {
        Ok(e) => format_value(e),
        Err(Error::DegenerateReference) => "nan".to_string(),
        Err(e) => return Err(e),
    };
    let mut out = io::stdout().lock();
    if csv {
        writeln!(out, "mse,psnr_db,energy_retained_pct")?;
        writeln!(out, "{},{},{energy}", format_value(mse), format_value(psnr))?;
    } else {
        writeln!(out, "mse: {}", format_value(mse))?;
        writeln!(out, "psnr_db: {}", format_value(psnr))?;
        writeln!(out, "energy_retained_pct: {energy}")?;
    }
    Ok(())
}

/// Returns whether every checked decomposition reproduced the input.
fn verify(input: &PathBuf, transform: &TransformArgs) -> Result<bool, Error> {
    let image = pgm::read_pgm(input)?;
    let specs = match transform.spec()? {
        Some(spec) => vec![spec],
        None => {
            let (padded, _) = pgm::pad_to_pow2(&image);
            let depth = transform::max_levels(padded.rows(), padded.cols());
            registry::entries()
                .iter()
                .filter_map(|e| match e.mode {
                    Mode::Standard => Some(TransformSpec::STANDARD),
                    Mode::Pyramid => (depth > 0).then(|| TransformSpec::pyramid(depth)),
                })
                .collect()
        }
    };
    let mut out = io::stdout().lock();
    let mut all_ok = true;
    for spec in specs {
        let bytes = Pipeline::new(&image, spec)?.run_hard(0.0)?.encode()?;
        let back = pipeline::decompress(&bytes)?;
        let ok = back == image;
        all_ok &= ok;
        let label = match spec.mode {
            Mode::Standard => spec.mode.to_string(),
            Mode::Pyramid => format!("{} (levels {})", spec.mode, spec.levels),
        };
        writeln!(out, "{}: {label}", if ok { "PASS" } else { "FAIL" })?;
    }
    Ok(all_ok)
}

fn analyze(input: &PathBuf, eps: &str, out: &PathBuf, transform: &TransformArgs) -> Result<(), Error> {
    let image = pgm::read_pgm(input)?;
    let epsilons = sweep::parse_epsilons(eps)?;
    let report = sweep::analyze(&image, transform.spec()?.unwrap_or_default(), &epsilons)?;
    report.write_csv(fs::File::create(out)?)?;
    println!("wrote {} rows to {}", report.rows.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    hwz_core::init_threads_from_env()?;
    match cli.command {
        Command::Compress(args) => compress(&args)?,
        Command::Decompress { input, output, ascii } => {
            let image = pipeline::decompress(&fs::read(&input)?)?;
            pgm::write_pgm(&image, &output, !ascii)?;
        }
        Command::Metrics { reference, test, csv } => metrics_cmd(&reference, &test, csv)?,
        Command::Verify { input, transform } => {
            if !verify(&input, &transform)? {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        Command::Analyze {
            input,
            eps,
            out,
            transform,
        } => analyze(&input, &eps, &out, &transform)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
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
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hwz: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
