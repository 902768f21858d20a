//! Command-line front end. Every subcommand parses its flags, calls one
//! library function and prints the result.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::arith::{self, BinaryOp};
use crate::dimension::{dimension_from_scale, scale_from_dimension, ArityN, Dimension};
use crate::error::{Error, Result};
use crate::estimation::{estimate_dimension_with, verify_operator_geometrically_with, CountMethod};
use crate::geometry::{construct_prefractal, lacunarity_bounds, CantorParams};
use crate::io::{
    emit_operator_grid, export_intervals, format_significant, import_intervals, render_stages_svg,
    IntervalFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polyadic-cantor",
    version,
    about = "Fractal-dimension arithmetic for polyadic Cantor sets",
    allow_negative_numbers = true
)]
struct Cli {
    /// Significant digits for printed values.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Similarity dimension of (N, gamma).
    Dim {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Scale factor of (N, D).
    Scale {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
    },
    /// Apply a binary operator.
    Op {
        #[arg(value_enum)]
        op: OpArg,
        #[command(flatten)]
        operands: Operands,
    },
    /// Integer power of a dimension.
    Pow {
        #[arg(long, allow_negative_numbers = true)]
        da: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Derivative dD/dgamma.
    Ddgamma {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Lacunarity bounds eps_min, eps_reg, eps_max.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Construct a stage-S pre-fractal.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        stage: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting estimate for an exported interval set.
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Box sizes; defaults to gamma^1..gamma^S when the file has parameters.
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = MethodArg::Cover)]
        method: MethodArg,
        /// Input format; inferred from the extension when omitted.
        #[arg(long, value_enum)]
        format: Option<DataFormat>,
    },
    /// Check an operator against box counting on the constructed set.
    Verify {
        #[arg(long, value_enum)]
        op: OpArg,
        #[command(flatten)]
        operands: Operands,
        #[arg(long, default_value_t = 6)]
        stage: u32,
        /// Relative tolerance on the estimated dimension.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Cover)]
        method: MethodArg,
    },
    /// Sample an operator on an R x R grid and write CSV.
    Grid {
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        res: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Operands {
    #[arg(long, allow_negative_numbers = true)]
    da: f64,
    #[arg(long, allow_negative_numbers = true)]
    db: f64,
    #[arg(long)]
    n: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OpArg {
    Add,
    Sub,
    Mul,
    Div,
}

impl From<OpArg> for BinaryOp {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::Add => BinaryOp::Add,
            OpArg::Sub => BinaryOp::Sub,
            OpArg::Mul => BinaryOp::Mul,
            OpArg::Div => BinaryOp::Div,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Cover,
    Grid,
    GridAvg,
}

impl From<MethodArg> for CountMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cover => CountMethod::MinimalCover,
            MethodArg::Grid => CountMethod::Grid,
            MethodArg::GridAvg => CountMethod::GridAveraged,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let rendered = e.render().to_string();
                let _ = write!(stderr, "{rendered}");
                if !rendered.contains("Usage:") {
                    let _ = writeln!(stderr, "\n{}", Cli::command().render_usage());
                }
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn dim(v: f64) -> Result<Dimension> {
    Dimension::new(v)
}

fn open_sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn input_format(path: &Path, explicit: Option<DataFormat>) -> Result<IntervalFormat> {
    match explicit {
        Some(DataFormat::Json) => Ok(IntervalFormat::Json),
        Some(DataFormat::Csv) => Ok(IntervalFormat::Csv),
        None => IntervalFormat::from_path(path).ok_or_else(|| {
            Error::Domain(format!(
                "cannot infer format of {}; pass --format json|csv",
                path.display()
            ))
        }),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let p = usize::from(cli.precision);
    let fmt = |x: f64| format_significant(x, p);

    match &cli.command {
        Command::Dim { n, gamma } => {
            let d = dimension_from_scale(ArityN::new(*n)?, *gamma)?;
            writeln!(out, "D = {}", fmt(d.get()))?;
        }
        Command::Scale { n, d } => {
            let s = scale_from_dimension(ArityN::new(*n)?, dim(*d)?);
            writeln!(out, "gamma = {}", fmt(s.gamma))?;
            if s.underflow {
                writeln!(
                    out,
                    "note: gamma underflows binary64 (ln gamma = {}), reported as 0",
                    fmt(s.ln_gamma)
                )?;
            }
        }
        Command::Op { op, operands } => {
            let r = arith::apply(
                (*op).into(),
                dim(operands.da)?,
                dim(operands.db)?,
                ArityN::new(operands.n)?,
            )?;
            write_op_result(out, &r, &fmt)?;
        }
        Command::Pow { da, k, n } => {
            let r = arith::int_pow(dim(*da)?, *k, ArityN::new(*n)?)?;
            write_op_result(out, &r, &fmt)?;
        }
        Command::Ddgamma { n, gamma } => {
            let v = arith::d_dimension_d_scale(ArityN::new(*n)?, *gamma)?;
            writeln!(out, "dD/dgamma = {}", fmt(v))?;
        }
        Command::Bounds { n, gamma } => {
            let b = lacunarity_bounds(ArityN::new(*n)?, *gamma)?;
            writeln!(
                out,
                "eps_min={} eps_reg={} eps_max={}",
                fmt(b.eps_min),
                fmt(b.eps_reg),
                fmt(b.eps_max)
            )?;
        }
        Command::Construct {
            n,
            gamma,
            eps,
            stage,
            format,
            out: path,
        } => {
            let params = CantorParams::new(ArityN::new(*n)?, *gamma, *eps, *stage)?;
            let mut sink = open_sink(path, out)?;
            match format {
                OutFormat::Svg => sink.write_all(render_stages_svg(&params, *stage)?.as_bytes())?,
                OutFormat::Json => export_intervals(
                    &construct_prefractal(&params)?,
                    IntervalFormat::Json,
                    &mut sink,
                )?,
                OutFormat::Csv => export_intervals(
                    &construct_prefractal(&params)?,
                    IntervalFormat::Csv,
                    &mut sink,
                )?,
            }
            sink.flush()?;
        }
        Command::Estimate {
            input,
            deltas,
            method,
            format,
        } => {
            let fmt_in = input_format(input, *format)?;
            let set = import_intervals(BufReader::new(File::open(input)?), fmt_in)?;
            let e = estimate_dimension_with(&set, deltas.as_deref(), (*method).into())?;
            writeln!(out, "d_hat = {}", fmt(e.d_hat))?;
            writeln!(out, "stderr = {}", fmt(e.stderr))?;
        }
        Command::Verify {
            op,
            operands,
            stage,
            tol,
            method,
        } => {
            let report = verify_operator_geometrically_with(
                (*op).into(),
                dim(operands.da)?,
                dim(operands.db)?,
                ArityN::new(operands.n)?,
                *stage,
                *tol,
                (*method).into(),
            )?;
            writeln!(out, "{report}")?;
            if !report.passed() && !report.is_unverifiable() {
                return Ok(EXIT_DOMAIN);
            }
        }
        Command::Grid {
            op,
            res,
            n,
            out: path,
        } => {
            let sheet = emit_operator_grid((*op).into(), *res, ArityN::new(*n)?)?;
            let mut sink = open_sink(path, out)?;
            sheet.write_csv(&mut sink)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_op_result(
    out: &mut dyn Write,
    r: &arith::OpResult,
    fmt: &dyn Fn(f64) -> String,
) -> Result<()> {
    writeln!(out, "D_C = {}", fmt(r.d.get()))?;
    writeln!(out, "gamma_C = {}", fmt(r.gamma))?;
    if r.underflow {
        writeln!(out, "note: gamma_C underflows binary64, reported as 0")?;
    }
    Ok(())
}
