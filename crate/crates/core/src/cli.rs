//! The `extraconn` command-line tool.
//!
//! Exit codes: 0 success, 1 domain or I/O error, 2 usage error,
//! 3 verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::concentration::{
    breakpoints, concentration_report, lambda_at, lambda_profile, ratio_table, table2_breakpoints,
    RatioRow, XiProfile,
};
use crate::error::Error;
use crate::extremal::{xi, Family};
use crate::graph::GraphSpec;
use crate::oracle::{
    sample_cuts, xi_bruteforce_all, OracleConfig, SampleConfig, MAX_EXHAUSTIVE_DIM, MAX_SAMPLE_DIM,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "extraconn",
    version,
    about = "Extra edge-connectivity of (enhanced) hypercubes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print xi_m.
    Xi(PointArgs),
    /// Print ex_m.
    Ex(PointArgs),
    /// Print lambda_h.
    Lambda(LambdaArgs),
    /// Write the xi / lambda profile for 1 <= h <= 2^(n-1).
    Profile(ProfileArgs),
    /// Print the breakpoint sequence m_{n,r}.
    Breakpoints(DimArgs),
    /// Check the concentration interval and print its report.
    Concentration(DimArgs),
    /// Write the g(n), R(n) table.
    Ratio(RatioArgs),
    /// Write the adjacency matrix as a plain PBM bitmap.
    Bitmap(BitmapArgs),
    /// Compare closed forms against the exhaustive or sampled oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyFlag {
    /// Plain hypercube Q_n.
    Qn,
    /// Folded hypercube FQ_n (k = 1).
    Fqn,
    /// Enhanced hypercube Q_{n,2}.
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Pbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Exact,
    Sample,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, conflicts_with = "k")]
    pub family: Option<FamilyFlag>,
    /// Complement parameter of Q_{n,k}.
    #[arg(long)]
    pub k: Option<u32>,
}

impl GraphArgs {
    fn spec(&self) -> Result<GraphSpec, Error> {
        let k = match (self.family, self.k) {
            (_, Some(k)) => Some(k),
            (Some(FamilyFlag::Fqn), None) => Some(1),
            (Some(FamilyFlag::Q2), None) => Some(2),
            (Some(FamilyFlag::Qn), None) | (None, None) => None,
        };
        GraphSpec::new(self.n, k)
    }

    fn family(&self) -> Result<Family, Error> {
        Family::from_spec(self.spec()?)
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub h: u64,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long = "n-min")]
    pub n_min: u32,
    #[arg(long = "n-max")]
    pub n_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BitmapArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pbm")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: VerifyMode,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Why a command failed, mapped onto an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Error(String),
    Verify(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Error(_) => EXIT_ERROR,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Error(m) | Failure::Verify(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification { .. } => Failure::Verify(e.to_string()),
            _ => Failure::Error(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Xi(a) => {
            let value = xi(a.graph.family()?, a.m)?;
            writeln!(out, "{value}")?;
        }
        Command::Ex(a) => {
            let value = a.graph.family()?.ex(a.m)?;
            writeln!(out, "{value}")?;
        }
        Command::Lambda(a) => {
            let value = lambda_at(a.graph.family()?, a.h)?;
            writeln!(out, "{value}")?;
        }
        Command::Profile(a) => cmd_profile(&a, out)?,
        Command::Breakpoints(a) => {
            let bps = if a.n >= 9 {
                breakpoints(a.n)?
            } else {
                table2_breakpoints(a.n)?
            };
            writeln!(out, "{}", join(&bps.values))?;
        }
        Command::Concentration(a) => cmd_concentration(a.n, out)?,
        Command::Ratio(a) => cmd_ratio(&a, out)?,
        Command::Bitmap(a) => cmd_bitmap(&a, out)?,
        Command::Verify(a) => cmd_verify(&a, out)?,
    }
    Ok(())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs `write` against the file at `path`, or against `out` when absent.
fn with_output(
    path: Option<&Path>,
    out: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CmdResult {
    match path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Error(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => write(out)?,
    }
    Ok(())
}

fn text_format(format: OutputFormat, command: &str) -> Result<OutputFormat, Failure> {
    if format == OutputFormat::Pbm {
        return Err(Failure::Usage(format!(
            "--format pbm is only valid for bitmap, not {command}"
        )));
    }
    Ok(format)
}

#[derive(Serialize)]
struct ProfileRow {
    h: u64,
    xi: u32,
    lambda: u32,
    optimal: bool,
}

/// CSV form of a profile: header `h,xi,lambda,optimal`, one row per `h`.
pub fn write_profile_csv(profile: &XiProfile, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "h,xi,lambda,optimal")?;
    for (h, x, l) in profile.rows() {
        writeln!(w, "{h},{x},{l},{}", u8::from(x == l))?;
    }
    Ok(())
}

fn cmd_profile(a: &ProfileArgs, out: &mut dyn Write) -> CmdResult {
    let format = text_format(a.format, "profile")?;
    let profile = lambda_profile(a.graph.family()?)?;
    with_output(a.out.as_deref(), out, |w| match format {
        OutputFormat::Json => {
            let rows: Vec<_> = profile
                .rows()
                .map(|(h, xi, lambda)| ProfileRow {
                    h,
                    xi,
                    lambda,
                    optimal: xi == lambda,
                })
                .collect();
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)
        }
        _ => write_profile_csv(&profile, w),
    })
}

fn cmd_concentration(n: u32, out: &mut dyn Write) -> CmdResult {
    if n < 9 {
        return Err(Failure::Error(format!(
            "concentration needs n >= 9, got {n}; for 4 <= n <= 8 run `breakpoints --n {n}` for the tabulated values"
        )));
    }
    let r = concentration_report(n)?;
    writeln!(out, "n: {}", r.n)?;
    writeln!(out, "h_min: {}", r.h_min)?;
    writeln!(out, "h_max: {}", r.h_max)?;
    writeln!(out, "constant: {}", r.constant)?;
    writeln!(out, "breakpoints: {}", join(&r.breakpoints))?;
    writeln!(out, "optimal_h: {}", join(&r.optimal_h))?;
    writeln!(
        out,
        "tightness: lambda_{} = {} (gap {})",
        r.tightness.h, r.tightness.lambda, r.tightness.gap
    )?;
    writeln!(out, "status: PASS")?;
    Ok(())
}

/// CSV form of the ratio table: header `n,g,R_percent`.
pub fn write_ratio_csv(rows: &[RatioRow], w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "n,g,R_percent")?;
    for row in rows {
        writeln!(w, "{},{},{}", row.n, row.g, row.r_percent)?;
    }
    Ok(())
}

fn cmd_ratio(a: &RatioArgs, out: &mut dyn Write) -> CmdResult {
    let format = text_format(a.format, "ratio")?;
    let rows = ratio_table(a.n_min, a.n_max)?;
    with_output(a.out.as_deref(), out, |w| match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)
        }
        _ => write_ratio_csv(&rows, w),
    })
}

fn cmd_bitmap(a: &BitmapArgs, out: &mut dyn Write) -> CmdResult {
    if a.format != OutputFormat::Pbm {
        return Err(Failure::Usage("bitmap only supports --format pbm".into()));
    }
    let spec = a.graph.spec()?;
    if !(2..=crate::graph::MAX_BITMAP_DIM).contains(&spec.n()) {
        return Err(Failure::Error(format!(
            "bitmap needs 2 <= n <= {}, got {}",
            crate::graph::MAX_BITMAP_DIM,
            spec.n()
        )));
    }
    let bitmap = spec.adjacency_bitmap()?;
    with_output(a.out.as_deref(), out, |w| bitmap.write_pbm(w))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let spec = a.graph.spec()?;
    let family = Family::from_spec(spec)?;
    match a.mode {
        VerifyMode::Exact => verify_exact(spec, family, out),
        VerifyMode::Sample => verify_sample(spec, family, a, out),
    }
}

fn verify_exact(spec: GraphSpec, family: Family, out: &mut dyn Write) -> CmdResult {
    if spec.n() > MAX_EXHAUSTIVE_DIM {
        return Err(Failure::Error(format!(
            "exact mode needs n <= {MAX_EXHAUSTIVE_DIM}, got {}",
            spec.n()
        )));
    }
    let config = OracleConfig::from_env()?;
    let half = family.half();
    let oracle = xi_bruteforce_all(spec, half, config)?;
    let profile = lambda_profile(family)?;
    let mut lambda_oracle: Vec<u64> = oracle.iter().map(|r| r.xi_exact).collect();
    for i in (0..lambda_oracle.len().saturating_sub(1)).rev() {
        lambda_oracle[i] = lambda_oracle[i].min(lambda_oracle[i + 1]);
    }
    let mut passed = 0;
    for (r, &lambda) in oracle.iter().zip(&lambda_oracle) {
        let xi_formula = u64::from(profile.xi(r.m));
        let lambda_formula = u64::from(profile.lambda(r.m));
        let ok = xi_formula == r.xi_exact && lambda_formula == lambda;
        passed += usize::from(ok);
        writeln!(
            out,
            "m={} xi_oracle={} xi_formula={} lambda_oracle={} lambda_formula={} {}",
            r.m,
            r.xi_exact,
            xi_formula,
            lambda,
            lambda_formula,
            if ok { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(out, "{passed}/{half} PASS")?;
    if passed as u64 != half {
        return Err(Failure::Verify(format!(
            "{} of {half} values disagree",
            half - passed as u64
        )));
    }
    Ok(())
}

fn verify_sample(
    spec: GraphSpec,
    family: Family,
    a: &VerifyArgs,
    out: &mut dyn Write,
) -> CmdResult {
    if spec.n() > MAX_SAMPLE_DIM {
        return Err(Failure::Error(format!(
            "sample mode needs n <= {MAX_SAMPLE_DIM}, got {}",
            spec.n()
        )));
    }
    let mut drawn = 0u64;
    let mut violations = 0u64;
    for s in sample_cuts(spec, SampleConfig::new(a.samples, a.seed))? {
        drawn += 1;
        if u128::from(s.cut_size) < xi(family, s.h)? {
            violations += 1;
            writeln!(out, "violation: h={} cut={}", s.h, s.cut_size)?;
        }
    }
    writeln!(out, "samples: {drawn}")?;
    writeln!(out, "violations: {violations}")?;
    if violations > 0 {
        return Err(Failure::Verify(format!(
            "{violations} samples fall below xi_h"
        )));
    }
    Ok(())
}
