//! Command-line front end.
//!
//! Exit codes: 0 ok, 2 usage, 3 file I/O or malformed table, 4 engine
//! disagreement, 5 count too large to render.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{classify, count_balanced, count_monochromatic, CountError};
use crate::fmt::g17;
use crate::oracle::{CombineOp, OracleError, OracleKind, OracleSpec, TruthTable};
use crate::simulator::{
    amplitudes_direct, amplitudes_fwht, sample_outcomes, statevector_run, SimError, Spectrum,
    ENGINE_TOLERANCE, STATEVECTOR_MAX_WIDTH,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;
pub const EXIT_SIZE_CAP: u8 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "djdecide",
    version,
    about = "Deutsch-Jozsa decider at desk scale"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Output amplitudes as CSV (`z,amplitude,probability`).
    Spectrum {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_enum, default_value_t = Engine::Fwht)]
        engine: Engine,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verdict against the constant/balanced promise.
    Classify {
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Count balanced and monochromatic indicator functions.
    Count {
        #[arg(long)]
        n: u32,
    },
    /// Sample measurement outcomes of the query register.
    Sample {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_enum, default_value_t = Engine::Fwht)]
        engine: Engine,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        /// Sampler seed; defaults to `--seed`.
        #[arg(long)]
        shot_seed: Option<u64>,
    },
    /// Write `f.dat` (x, f(x)) and `psi.dat` (z, probability).
    EmitFigure {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_enum, default_value_t = Engine::Fwht)]
        engine: Engine,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Direct,
    Fwht,
    Statevector,
    /// Run all three and require entrywise agreement.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpArg {
    And,
    Or,
    Xor,
    Not,
}

impl From<OpArg> for CombineOp {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::And => CombineOp::And,
            OpArg::Or => CombineOp::Or,
            OpArg::Xor => CombineOp::Xor,
            OpArg::Not => CombineOp::Not,
        }
    }
}

/// Oracle selection: exactly one kind flag or `--input`.
#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Query width.
    #[arg(long)]
    pub n: Option<u32>,
    /// f(x) = c.
    #[arg(long)]
    pub constant: bool,
    /// f(x) = c XOR x_m.
    #[arg(long)]
    pub periodic: bool,
    /// f(x) = k.x XOR c.
    #[arg(long)]
    pub mono: bool,
    /// Seeded random balanced table.
    #[arg(long)]
    pub random_balanced: bool,
    /// Layer n of the perfect-squares language.
    #[arg(long)]
    pub perfect_square: bool,
    /// Truth-table file (`n=<width>` line, then 2^n bits).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Bit address for `--periodic` (period 2^(m+1))
    #[arg(long)]
    pub m: Option<u32>,
    /// Mask for `--mono`, as an integer (bit 0 = x_0)
    #[arg(long)]
    pub k: Option<u64>,
    /// XOR constant, 0 or 1
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub c: u8,
    /// Seed for `--random-balanced`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Combine the selected oracle with `--with` (or complement it).
    #[arg(long, value_enum)]
    pub combine: Option<OpArg>,
    /// Second operand for `--combine`, as a truth-table file.
    #[arg(long = "with")]
    pub with: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Disagreement(f64),
    SizeCap(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Disagreement(_) => EXIT_DISAGREEMENT,
            CliError::SizeCap(_) => EXIT_SIZE_CAP,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::SizeCap(m) => m.clone(),
            CliError::Disagreement(d) => {
                format!(
                    "engines disagree: max deviation {} exceeds {}",
                    g17(*d),
                    g17(ENGINE_TOLERANCE)
                )
            }
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Bit(_) | OracleError::OperandCount { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl OracleArgs {
    /// Validated symbolic recipe for the selected oracle.
    pub fn to_spec(&self) -> Result<OracleSpec, CliError> {
        let kinds = [
            self.constant,
            self.periodic,
            self.mono,
            self.random_balanced,
            self.perfect_square,
            self.input.is_some(),
        ];
        let selected = kinds.iter().filter(|&&b| b).count();
        if selected != 1 {
            return Err(CliError::Usage(format!(
                "exactly one oracle source required (--constant, --periodic, --mono, \
                 --random-balanced, --perfect-square or --input), got {selected}"
            )));
        }
        let c = self.c == 1;

        let base = if let Some(path) = &self.input {
            let spec = OracleSpec::from_file(path)?;
            if let Some(n) = self.n {
                if n != spec.width() {
                    return Err(CliError::Usage(format!(
                        "--n {n} does not match width {} of {}",
                        spec.width(),
                        path.display()
                    )));
                }
            }
            spec
        } else {
            let n = self
                .n
                .ok_or_else(|| CliError::Usage("--n is required".to_string()))?;
            let kind = if self.constant {
                OracleKind::Constant { c }
            } else if self.periodic {
                let m = self
                    .m
                    .ok_or_else(|| CliError::Usage("--periodic requires --m".to_string()))?;
                OracleKind::BinaryPeriodic { m, c }
            } else if self.mono {
                let k = self
                    .k
                    .ok_or_else(|| CliError::Usage("--mono requires --k".to_string()))?;
                let k = u32::try_from(k)
                    .map_err(|_| CliError::Usage(format!("--k {k} does not fit in {n} bits")))?;
                OracleKind::Monochromatic { k, c }
            } else if self.random_balanced {
                OracleKind::RandomBalanced { seed: self.seed }
            } else {
                OracleKind::PerfectSquareLayer
            };
            OracleSpec::new(n, kind)?
        };

        match (self.combine, &self.with) {
            (None, None) => Ok(base),
            (None, Some(_)) => Err(CliError::Usage("--with requires --combine".to_string())),
            (Some(op), with) => {
                let op = CombineOp::from(op);
                let right = with
                    .as_ref()
                    .map(|p| OracleSpec::from_file(p).map(Box::new))
                    .transpose()?;
                let width = base.width();
                Ok(OracleSpec::new(
                    width,
                    OracleKind::Combine {
                        op,
                        left: Box::new(base),
                        right,
                    },
                )?)
            }
        }
    }
}

/// Spectrum from the chosen engine; `All` returns the FWHT result after
/// checking agreement, together with the maximum deviation.
pub fn compute_spectrum(
    table: &TruthTable,
    engine: Engine,
) -> Result<(Spectrum, Option<f64>), CliError> {
    match engine {
        Engine::Direct => Ok((amplitudes_direct(table)?, None)),
        Engine::Fwht => Ok((amplitudes_fwht(table)?, None)),
        Engine::Statevector => Ok((statevector_run(table)?.spectrum, None)),
        Engine::All => {
            if table.width() > STATEVECTOR_MAX_WIDTH {
                return Err(CliError::Usage(format!(
                    "--engine all requires n <= {STATEVECTOR_MAX_WIDTH}"
                )));
            }
            let fwht = amplitudes_fwht(table)?;
            let direct = amplitudes_direct(table)?;
            let sv = statevector_run(table)?.spectrum;
            let deviation = fwht
                .max_deviation(&direct)
                .max(fwht.max_deviation(&sv))
                .max(direct.max_deviation(&sv));
            Ok((fwht, Some(deviation)))
        }
    }
}

fn check_agreement(deviation: Option<f64>, err: &mut dyn Write) -> Result<(), CliError> {
    if let Some(d) = deviation {
        let _ = writeln!(err, "max_deviation={}", g17(d));
        if d.is_nan() || d > ENGINE_TOLERANCE {
            return Err(CliError::Disagreement(d));
        }
    }
    Ok(())
}

fn header(spec: &OracleSpec, columns: &str) -> String {
    format!(
        "# n={}\n# oracle={}\n# columns: {columns}\n",
        spec.width(),
        spec.describe()
    )
}

/// `f.dat` body: one `x f(x)` row per input.
pub fn indicator_data(spec: &OracleSpec, table: &TruthTable) -> String {
    let mut out = header(spec, "x f(x)");
    for (x, &b) in table.bits().iter().enumerate() {
        out.push_str(&format!("{x} {}\n", b as u8));
    }
    out
}

/// `psi.dat` body: one `z probability` row per outcome.
pub fn probability_data(spec: &OracleSpec, spectrum: &Spectrum) -> String {
    let mut out = header(spec, "z probability");
    for (z, p) in spectrum.probabilities().into_iter().enumerate() {
        out.push_str(&format!("{z} {}\n", g17(p)));
    }
    out
}

fn write_out(path: Option<&Path>, body: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| io_err(p, e)),
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            oracle,
            engine,
            output,
        } => {
            let table = oracle.to_spec()?.build()?;
            let (spectrum, deviation) = compute_spectrum(&table, engine)?;
            check_agreement(deviation, err)?;
            write_out(output.as_deref(), &spectrum.to_csv(), out)
        }
        Command::Classify { oracle } => {
            let table = oracle.to_spec()?.build()?;
            write_out(None, &classify(&table).report(), out)
        }
        Command::Count { n } => {
            let balanced = count_balanced(n).map_err(|e| match e {
                CountError::WidthOutOfRange(_) => CliError::Usage(e.to_string()),
                CountError::RenderCap { .. } => CliError::SizeCap(e.to_string()),
            })?;
            let mono = count_monochromatic(n).map_err(|e| CliError::Usage(e.to_string()))?;
            write_out(
                None,
                &format!("balanced={balanced}\nmonochromatic={mono}\n"),
                out,
            )
        }
        Command::Sample {
            oracle,
            engine,
            shots,
            shot_seed,
        } => {
            if shots == 0 {
                return Err(CliError::Usage("--shots must be at least 1".to_string()));
            }
            let table = oracle.to_spec()?.build()?;
            let (spectrum, deviation) = compute_spectrum(&table, engine)?;
            check_agreement(deviation, err)?;
            let histogram = sample_outcomes(&spectrum, shots, shot_seed.unwrap_or(oracle.seed))?;
            let body: String = histogram
                .iter()
                .map(|(z, count)| format!("{z} {count}\n"))
                .collect();
            write_out(None, &body, out)
        }
        Command::EmitFigure {
            oracle,
            engine,
            out_dir,
        } => {
            let spec = oracle.to_spec()?;
            let table = spec.build()?;
            let (spectrum, deviation) = compute_spectrum(&table, engine)?;
            check_agreement(deviation, err)?;
            fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
            let f_path = out_dir.join("f.dat");
            let psi_path = out_dir.join("psi.dat");
            write_out(Some(&f_path), &indicator_data(&spec, &table), out)?;
            write_out(Some(&psi_path), &probability_data(&spec, &spectrum), out)
        }
    }
}

/// Parses `args` (program name first) and runs the command against the
/// given streams, returning the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("djdecide").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn oracle_selection_rules() {
        let (code, _, err) = run_capture(&["classify", "--n", "4"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) =
            run_capture(&["classify", "--n", "4", "--constant", "--mono", "--k", "1"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--constant"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--periodic"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--periodic", "--m", "4"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--mono", "--k", "16"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--constant", "--c", "2"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "25", "--constant"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK, "{out}");
    }

    #[test]
    fn classify_constant() {
        let (code, out, _) = run_capture(&["classify", "--n", "4", "--constant", "--c", "1"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "verdict=Constant(1)\nones_count=16\nline z=0 p=1\n");
    }

    #[test]
    fn perfect_square_layer_flag() {
        let (_, out, _) = run_capture(&["classify", "--n", "9", "--perfect-square"]);
        assert!(out.starts_with("verdict=Constant(1)\n"));
        let (_, out, _) = run_capture(&["classify", "--n", "5", "--perfect-square"]);
        assert!(out.starts_with("verdict=Constant(0)\n"));
    }

    #[test]
    fn count_outputs_and_cap() {
        assert_eq!(
            run_capture(&["count", "--n", "4"]).1,
            "balanced=12870\nmonochromatic=15\n"
        );
        assert_eq!(
            run_capture(&["count", "--n", "1"]).1,
            "balanced=2\nmonochromatic=1\n"
        );
        assert_eq!(
            run_capture(&["count", "--n", "2"]).1,
            "balanced=6\nmonochromatic=3\n"
        );
        assert_eq!(run_capture(&["count", "--n", "22"]).0, EXIT_SIZE_CAP);
        assert_eq!(run_capture(&["count", "--n", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn engine_width_limits() {
        let (code, _, _) = run_capture(&["spectrum", "--n", "13", "--constant", "--engine", "all"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) =
            run_capture(&["spectrum", "--n", "15", "--constant", "--engine", "direct"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out, _) = run_capture(&["spectrum", "--n", "15", "--constant"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("z,amplitude,probability\n0,1,1\n1,0,0\n"));
    }

    #[test]
    fn agreement_gate() {
        let mut sink = Vec::new();
        assert!(check_agreement(Some(0.0), &mut sink).is_ok());
        assert!(check_agreement(Some(ENGINE_TOLERANCE), &mut sink).is_ok());
        let e = check_agreement(Some(2e-12), &mut sink).unwrap_err();
        assert_eq!(e.code(), EXIT_DISAGREEMENT);
        assert_eq!(
            check_agreement(Some(f64::NAN), &mut sink)
                .unwrap_err()
                .code(),
            EXIT_DISAGREEMENT
        );
        assert!(check_agreement(None, &mut sink).is_ok());
    }

    #[test]
    fn sample_rejects_zero_shots() {
        let (code, _, _) = run_capture(&["sample", "--n", "4", "--constant", "--shots", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn combine_flags() {
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("p1.tt");
        crate::oracle::save_truth_table(
            &crate::oracle::make_binary_periodic(4, 1, false).unwrap(),
            &p1,
        )
        .unwrap();
        let p1s = p1.to_str().unwrap();
        let (code, out, err) = run_capture(&[
            "classify",
            "--n",
            "4",
            "--periodic",
            "--m",
            "0",
            "--combine",
            "xor",
            "--with",
            p1s,
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.starts_with("verdict=Monochromatic k=3 c=0\n"), "{out}");
        let (_, out, _) = run_capture(&[
            "classify",
            "--n",
            "4",
            "--mono",
            "--k",
            "5",
            "--combine",
            "not",
        ]);
        assert!(out.starts_with("verdict=Monochromatic k=5 c=1\n"), "{out}");
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--constant", "--combine", "and"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["classify", "--n", "4", "--constant", "--with", p1s]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&[
            "classify",
            "--n",
            "3",
            "--constant",
            "--combine",
            "or",
            "--with",
            p1s,
        ]);
        assert_eq!(code, EXIT_USAGE);
    }
}
