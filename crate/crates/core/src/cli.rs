//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! evaluation error, 2 no matching root in the shell demo, 64 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::closedform::{assemble_r1, assemble_r2, ExpEiForm, QuantumNumbers};
use crate::error::Error;
use crate::export::{form_csv_rows, form_json, form_latex, CSV_HEADER};
use crate::numeval::{eval_form, EvalMethod};
use crate::oracle::golden::{compare_entry, parse_golden_json};
use crate::oracle::pv::phi2_agreement_check;
use crate::oracle::symbolic::sample_radii;
use crate::oracle::{
    first_integral_closed_form_check, golden_table, numeric_residual_check, ode_residual_symbolic,
    p2_consistency_check, pole_split_identity_check, wronskian_symbolic, GoldenEntry,
    VerificationReport,
};
use crate::shellmatch::{match_shell, piecewise_wavefunction, MatchResult, ShellConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NO_ROOT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "coulomb-irregular", version, about = "Closed-form regular and irregular hydrogenic radial solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Laurent coefficients of one solution.
    Coeffs(CoeffsArgs),
    /// Evaluate a solution on a radial grid.
    Eval(EvalArgs),
    /// Run verification checks for every level up to --nmax.
    Verify(VerifyArgs),
    /// Coefficients for every level up to --nmax.
    Table(TableArgs),
    /// Shell matching demo.
    Shell(ShellArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "R1", alias = "r1")]
    R1,
    #[value(name = "R2", alias = "r2")]
    R2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Golden,
    Ode,
    Wronskian,
    P2,
    Pv,
    NumericResidual,
}

const ALL_CHECKS: [Check; 6] = [
    Check::Golden,
    Check::Ode,
    Check::Wronskian,
    Check::P2,
    Check::Pv,
    Check::NumericResidual,
];

#[derive(Args, Debug)]
struct Level {
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[command(flatten)]
    level: Level,
    #[arg(long, value_enum, default_value = "R2")]
    which: Which,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    level: Level,
    #[arg(long, value_enum, default_value = "R2")]
    which: Which,
    /// `start:stop:count`, inclusive of both ends.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Grid,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    nmax: u32,
    /// Comma-separated subset; all checks when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<Check>,
    #[arg(long)]
    parallel: bool,
    /// JSON array of reference entries replacing the built-in table.
    #[arg(long)]
    golden_file: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    nmax: u32,
    #[arg(long, value_enum, default_value = "R2")]
    which: Which,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ShellArgs {
    #[command(flatten)]
    level: Level,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// `min:max`
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    b_range: (f64, f64),
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Optional `start:stop:count` grid for the piecewise wavefunction.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Grid {
    start: f64,
    stop: f64,
    count: usize,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("{s:?} is not a number"))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err("expected start:stop:count".into());
    };
    let grid = Grid {
        start: parse_float(start)?,
        stop: parse_float(stop)?,
        count: count
            .trim()
            .parse()
            .map_err(|_| format!("{count:?} is not a point count"))?,
    };
    if !(grid.start > 0.0) || !grid.stop.is_finite() {
        return Err("grid must start at a positive radius".into());
    }
    if grid.count > 1 && !(grid.stop > grid.start) {
        return Err("grid must be increasing".into());
    }
    Ok(grid)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected min:max")?;
    let (lo, hi) = (parse_float(lo)?, parse_float(hi)?);
    if !(hi > lo) {
        return Err(format!("need min < max, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Error carrying the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidQuantumNumbers { .. }
            | Error::Domain(_)
            | Error::InvalidInput(_)
            | Error::InvalidShellConfig(_) => EXIT_USAGE,
            Error::NoRootInRange { .. } => EXIT_NO_ROOT,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("output error: {e}"))
    }
}

type CliResult = Result<i32, Failure>;

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::usage(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn level(l: &Level) -> Result<QuantumNumbers, Failure> {
    Ok(QuantumNumbers::new(l.n, l.l)?)
}

fn assemble(which: Which, qn: &QuantumNumbers) -> ExpEiForm {
    match which {
        Which::R1 => assemble_r1(qn),
        Which::R2 => assemble_r2(qn),
    }
}

fn latex_label(which: Which, qn: &QuantumNumbers) -> String {
    let idx = match which {
        Which::R1 => 1,
        Which::R2 => 2,
    };
    format!("R_{{{idx}}}({},{},r)", qn.n(), qn.l())
}

fn write_json(w: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

fn cmd_coeffs(args: &CoeffsArgs) -> CliResult {
    let qn = level(&args.level)?;
    let form = assemble(args.which, &qn);
    let mut w = open_output(&args.output.out)?;
    match args.output.format {
        Format::Json => write_json(&mut *w, &Value::Object(form_json(&form)))?,
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for row in form_csv_rows(&form) {
                writeln!(w, "{row}")?;
            }
        }
        Format::Latex => writeln!(w, "{}", form_latex(&latex_label(args.which, &qn), &form))?,
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn method_name(m: EvalMethod) -> &'static str {
    match m {
        EvalMethod::Series => "series",
        EvalMethod::Asymptotic => "asymptotic",
        EvalMethod::Elementary => "elementary",
    }
}

fn cmd_eval(args: &EvalArgs) -> CliResult {
    if args.output.format == Format::Latex {
        return Err(Failure::usage("latex output is only available for coefficient tables"));
    }
    let qn = level(&args.level)?;
    let form = assemble(args.which, &qn);
    let rows = args
        .grid
        .points()
        .into_iter()
        .map(|r| eval_form(&form, r).map(|e| (r, e)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut w = open_output(&args.output.out)?;
    match args.output.format {
        Format::Csv => {
            writeln!(w, "r,value,est_rel_error,method")?;
            for (r, e) in &rows {
                writeln!(
                    w,
                    "{r:.17e},{:.17e},{:.3e},{}",
                    e.value,
                    e.est_rel_error,
                    method_name(e.method)
                )?;
            }
        }
        _ => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(r, e)| {
                    json!({
                        "r": r,
                        "value": e.value,
                        "est_rel_error": e.est_rel_error,
                        "method": method_name(e.method),
                    })
                })
                .collect();
            write_json(&mut *w, &Value::Array(rows))?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn table_forms(nmax: u32, which: Which) -> Vec<(QuantumNumbers, ExpEiForm)> {
    QuantumNumbers::enumerate(nmax)
        .map(|qn| (qn, assemble(which, &qn)))
        .collect()
}

fn cmd_table(args: &TableArgs) -> CliResult {
    if args.nmax == 0 {
        return Err(Failure::usage("--nmax must be at least 1"));
    }
    let forms = table_forms(args.nmax, args.which);
    let mut w = open_output(&args.output.out)?;
    match args.output.format {
        Format::Json => {
            let entries: Vec<Value> = forms
                .iter()
                .map(|(qn, f)| {
                    let mut m = Map::new();
                    m.insert("n".into(), json!(qn.n()));
                    m.insert("l".into(), json!(qn.l()));
                    m.extend(form_json(f));
                    Value::Object(m)
                })
                .collect();
            write_json(&mut *w, &Value::Array(entries))?;
        }
        Format::Csv => {
            writeln!(w, "n,l,{CSV_HEADER}")?;
            for (qn, f) in &forms {
                for row in form_csv_rows(f) {
                    writeln!(w, "{},{},{row}", qn.n(), qn.l())?;
                }
            }
        }
        Format::Latex => {
            for (qn, f) in &forms {
                writeln!(w, "\\[\n{}\n\\]\n", form_latex(&latex_label(args.which, qn), f))?;
            }
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// Every check for one level, in a fixed order.
fn level_reports(qn: &QuantumNumbers, checks: &[Check], golden: &[GoldenEntry]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let (n_bar, m) = (qn.n_r(), qn.m());
    for check in checks {
        match check {
            Check::Golden => out.extend(golden.iter().filter(|e| e.qn == *qn).map(compare_entry)),
            Check::Ode => {
                out.push(ode_residual_symbolic(&assemble_r1(qn), qn).named("ode-r1"));
                out.push(ode_residual_symbolic(&assemble_r2(qn), qn).named("ode-r2"));
            }
            Check::Wronskian => out.push(wronskian_symbolic(qn).1),
            Check::P2 => out.push(p2_consistency_check(n_bar, m)),
            Check::Pv => {
                if n_bar + m <= 8 {
                    let xs = [0.5, 1.0, 2.0];
                    out.push(phi2_agreement_check(n_bar, m, &xs, 1e-8));
                    out.push(pole_split_identity_check(n_bar, m, &xs));
                }
                if n_bar + m <= 10 {
                    out.push(first_integral_closed_form_check(n_bar, m));
                }
            }
            Check::NumericResidual => {
                let radii = sample_radii(qn, 8);
                out.push(numeric_residual_check(&assemble_r1(qn), qn, &radii, 1e-9).named("numeric-residual-r1"));
                out.push(numeric_residual_check(&assemble_r2(qn), qn, &radii, 1e-9).named("numeric-residual-r2"));
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn residual_text(r: &VerificationReport) -> String {
    match r.residual_norm {
        crate::oracle::Residual::ExactZero => "exact-zero".to_string(),
        crate::oracle::Residual::Norm(v) => format!("{v:.3e}"),
    }
}

struct ReportSink {
    w: Box<dyn Write>,
    format: Format,
    written: usize,
    failed: Vec<String>,
}

impl ReportSink {
    fn start(&mut self) -> io::Result<()> {
        match self.format {
            Format::Csv => writeln!(self.w, "subject,check,passed,residual,tolerance,details"),
            _ => write!(self.w, "["),
        }
    }

    fn push(&mut self, r: &VerificationReport) -> io::Result<()> {
        if !r.passed {
            self.failed.push(format!("{} [{}]: {}", r.check_name, r.subject, r.details));
        }
        match self.format {
            Format::Csv => writeln!(
                self.w,
                "{},{},{},{},{},{}",
                csv_field(&r.subject.to_string()),
                r.check_name,
                r.passed,
                residual_text(r),
                r.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
                csv_field(&r.details)
            )?,
            _ => {
                let sep = if self.written == 0 { "\n  " } else { ",\n  " };
                write!(self.w, "{sep}{}", serde_json::to_string(r).map_err(io::Error::other)?)?;
            }
        }
        self.written += 1;
        self.w.flush()
    }

    fn finish(&mut self) -> io::Result<()> {
        if self.format != Format::Csv {
            writeln!(self.w, "{}]", if self.written == 0 { "" } else { "\n" })?;
        }
        self.w.flush()
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    if args.nmax == 0 {
        return Err(Failure::usage("--nmax must be at least 1"));
    }
    if args.output.format == Format::Latex {
        return Err(Failure::usage("latex output is only available for coefficient tables"));
    }
    let checks: Vec<Check> = if args.checks.is_empty() {
        ALL_CHECKS.to_vec()
    } else {
        ALL_CHECKS.iter().copied().filter(|c| args.checks.contains(c)).collect()
    };
    let golden = match &args.golden_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_golden_json(&text)?
        }
        None => golden_table(),
    };
    let levels: Vec<QuantumNumbers> = QuantumNumbers::enumerate(args.nmax).collect();
    let mut sink = ReportSink {
        w: open_output(&args.output.out)?,
        format: args.output.format,
        written: 0,
        failed: Vec::new(),
    };
    sink.start()?;
    if args.parallel {
        // Workers finish out of order; buffer and emit in level order.
        let (tx, rx) = mpsc::channel();
        let mut pending: Vec<Option<Vec<VerificationReport>>> = vec![None; levels.len()];
        let mut next = 0;
        std::thread::scope(|scope| -> io::Result<()> {
            let levels = &levels;
            let checks = &checks;
            let golden = &golden;
            scope.spawn(move || {
                levels.par_iter().enumerate().for_each_with(tx, |tx, (i, qn)| {
                    let _ = tx.send((i, level_reports(qn, checks, golden)));
                });
            });
            for (i, reports) in rx {
                pending[i] = Some(reports);
                while let Some(Some(ready)) = pending.get_mut(next).map(Option::take) {
                    for r in &ready {
                        sink.push(r)?;
                    }
                    next += 1;
                }
            }
            Ok(())
        })?;
    } else {
        for qn in &levels {
            for r in level_reports(qn, &checks, &golden) {
                sink.push(&r)?;
            }
        }
    }
    sink.finish()?;
    eprintln!("{} checks, {} failed", sink.written, sink.failed.len());
    for f in &sink.failed {
        eprintln!("FAILED {f}");
    }
    Ok(if sink.failed.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn match_json(config: &ShellConfig, m: &MatchResult) -> Value {
    json!({
        "n": config.qn.n(),
        "l": config.qn.l(),
        "a": config.a,
        "b_range": [config.b_range.0, config.b_range.1],
        "grid_step": config.grid_step,
        "b_star": m.b_star,
        "c1": m.c1,
        "c2": m.c2,
        "mismatch": m.mismatch,
        "inner_continuity": m.inner_continuity,
        "outer_continuity": m.outer_continuity,
    })
}

fn cmd_shell(args: &ShellArgs) -> CliResult {
    if args.output.format == Format::Latex {
        return Err(Failure::usage("latex output is only available for coefficient tables"));
    }
    let config = ShellConfig {
        qn: level(&args.level)?,
        a: args.a,
        b_range: args.b_range,
        grid_step: args.step,
    };
    config.validate()?;
    let result = match match_shell(&config) {
        Ok(m) => m,
        Err(Error::NoRootInRange { b_min, b_max, scanned }) => {
            eprintln!("no root of the outer mismatch in [{b_min}, {b_max}]; scanned:");
            eprintln!("b,mismatch");
            for (b, f) in scanned {
                eprintln!("{b:.17e},{f:.17e}");
            }
            return Ok(EXIT_NO_ROOT);
        }
        Err(e) => return Err(e.into()),
    };
    let wave = match &args.grid {
        Some(g) => Some(piecewise_wavefunction(&config, &result, &g.points())?),
        None => None,
    };
    let mut w = open_output(&args.output.out)?;
    match args.output.format {
        Format::Csv => {
            writeln!(w, "b_star,c1,c2,mismatch,inner_continuity,outer_continuity")?;
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.3e},{:.3e},{:.3e}",
                result.b_star,
                result.c1,
                result.c2,
                result.mismatch,
                result.inner_continuity,
                result.outer_continuity
            )?;
            if let Some(wave) = &wave {
                writeln!(w, "\nr,psi")?;
                for (r, v) in wave {
                    writeln!(w, "{r:.17e},{v:.17e}")?;
                }
            }
        }
        _ => {
            let mut v = match_json(&config, &result);
            if let Some(wave) = &wave {
                v["wavefunction"] = json!(wave.iter().map(|(r, p)| json!({"r": r, "psi": p})).collect::<Vec<_>>());
            }
            write_json(&mut *w, &v)?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
        Command::Shell(a) => cmd_shell(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("1:2:3").unwrap();
        assert_eq!(g.points(), vec![1.0, 1.5, 2.0]);
        assert!(parse_grid("1:2:0").unwrap().points().is_empty());
        assert!(parse_grid("0:2:3").is_err());
        assert!(parse_grid("2:1:3").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.5:1.5").unwrap(), (0.5, 1.5));
        assert!(parse_range("1.5:0.5").is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, \"b\""), "\"a, \"\"b\"\"\"");
    }
}
