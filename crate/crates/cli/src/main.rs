//! `gaussfock`: load, transform and check Gaussian states from JSON files.
//!
//! Every invocation prints one JSON report on stdout. Exit codes: 0 when all
//! verdicts pass, 1 when a mathematical check fails, 2 on input or usage errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussfock::oracle::{self, FockBasis, DEFAULT_MEM_CAP};
use gaussfock::symplectic::{self, is_symplectic};
use gaussfock::{Complex64, GaussianState, RealBlockOperator, TailModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use report::{CliError, Report};

#[derive(Parser)]
#[command(name = "gaussfock", version, about = "Quantum Gaussian states on countably many modes")]
struct Cli {
    /// Seed for randomized sample generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three admissibility conditions.
    Validate { state: PathBuf },
    /// Williamson normal form of the covariance block.
    Williamson { state: PathBuf },
    /// Largest density-matrix eigenvalues.
    Spectrum {
        state: PathBuf,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Write the covariance as the midpoint of two pure-state covariances.
    Decompose { state: PathBuf },
    /// Conjugate by the Weyl operator W(α).
    Displace {
        state: PathBuf,
        /// JSON list of [re, im] pairs, one per mode.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Conjugate by the Shale unitary of a symplectic map.
    Conjugate {
        state: PathBuf,
        /// JSON file with the 2n×2n matrix as an array of rows.
        #[arg(long)]
        symplectic: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tensor product of two states.
    Tensor {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduced state on a subset of block modes.
    Marginal {
        state: PathBuf,
        /// Comma-separated mode indices, e.g. 0,2.
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Beam-splitter mixing of two mean-zero states.
    Mix {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pure state on twice the modes with the input as marginal.
    Purify {
        state: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Truncated Fock-space checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Tail model utilities.
    #[command(subcommand)]
    Tail(TailCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare the characteristic function with the truncated density matrix.
    VerifyCf {
        state: PathBuf,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Sample points satisfy |z| ≤ radius.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Check the Weyl relation on random pairs.
    VerifyWeyl {
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        modes: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

#[derive(Subcommand)]
enum TailCommand {
    /// Summability verdicts for a tail model.
    Classify { tail: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let report = match run(cli) {
        Ok(report) => report,
        Err(err) => Report::failure(&name, err),
    };
    report.emit()
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Williamson { .. } => "williamson",
        Command::Spectrum { .. } => "spectrum",
        Command::Decompose { .. } => "decompose",
        Command::Displace { .. } => "displace",
        Command::Conjugate { .. } => "conjugate",
        Command::Tensor { .. } => "tensor",
        Command::Marginal { .. } => "marginal",
        Command::Mix { .. } => "mix",
        Command::Purify { .. } => "purify",
        Command::Oracle(OracleCommand::VerifyCf { .. }) => "oracle verify-cf",
        Command::Oracle(OracleCommand::VerifyWeyl { .. }) => "oracle verify-weyl",
        Command::Tail(TailCommand::Classify { .. }) => "tail classify",
    }
    .to_string()
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let name = command_name(&cli.command);
    let seed = cli.seed;
    match cli.command {
        Command::Validate { state } => {
            let s: GaussianState = load(&state)?;
            let v = s.validate()?;
            Ok(Report::new(&name, json!({ "state": state }), to_value(&v), v.verdict))
        }
        Command::Williamson { state } => {
            let s: GaussianState = load(&state)?;
            let w = symplectic::williamson(s.covariance())?;
            let result = json!({
                "L": w.symplectic.to_rows(),
                "d": w.spectrum,
                "symplectic_residual": w.symplectic_residual,
                "reconstruction_residual": w.reconstruction_residual,
            });
            Ok(Report::new(&name, json!({ "state": state }), result, true))
        }
        Command::Spectrum { state, top } => {
            let s: GaussianState = load(&state)?;
            let entries = s.spectrum(top)?;
            let total: f64 = entries.iter().map(|e| e.value).sum();
            let result = json!({ "entries": entries, "sum": total });
            Ok(Report::new(&name, json!({ "state": state, "top": top }), result, true))
        }
        Command::Decompose { state } => {
            let s: GaussianState = load(&state)?;
            let pair = s.extreme_decompose()?;
            let scale = s.covariance().matrix().abs().max().max(1.0);
            let residual = pair.midpoint().max_abs_diff(s.covariance());
            let n_ok = is_symplectic(&pair.first, 1e-9 * scale);
            let m_ok = is_symplectic(&pair.second, 1e-9 * scale);
            let pass = residual <= 1e-9 * scale && n_ok && m_ok;
            let result = json!({
                "N": pair.first.to_rows(),
                "M": pair.second.to_rows(),
                "reconstruction_residual": residual,
                "N_symplectic": n_ok,
                "M_symplectic": m_ok,
            });
            Ok(Report::new(&name, json!({ "state": state }), result, pass))
        }
        Command::Displace { state, alpha, output } => {
            let s: GaussianState = load(&state)?;
            let alpha = parse_complex_list(&alpha)?;
            let out = s.displace(&alpha)?;
            let pairs: Vec<[f64; 2]> = alpha.iter().map(|a| [a.re, a.im]).collect();
            state_report(&name, json!({ "state": state, "alpha": pairs }), &out, output.as_deref())
        }
        Command::Conjugate { state, symplectic, output } => {
            let s: GaussianState = load(&state)?;
            let l: RealBlockOperator = load(&symplectic)?;
            let out = s.shale_conjugate(&l)?;
            state_report(&name, json!({ "state": state, "symplectic": symplectic }), &out, output.as_deref())
        }
        Command::Tensor { first, second, output } => {
            let a: GaussianState = load(&first)?;
            let b: GaussianState = load(&second)?;
            let out = a.tensor(&b)?;
            state_report(&name, json!({ "first": first, "second": second }), &out, output.as_deref())
        }
        Command::Marginal { state, modes, output } => {
            let s: GaussianState = load(&state)?;
            let out = s.marginal(&modes)?;
            state_report(&name, json!({ "state": state, "modes": modes }), &out, output.as_deref())
        }
        Command::Mix { first, second, theta, output } => {
            let a: GaussianState = load(&first)?;
            let b: GaussianState = load(&second)?;
            let out = a.beam_splitter_mix(&b, theta)?;
            let inputs = json!({ "first": first, "second": second, "theta": theta });
            state_report(&name, inputs, &out, output.as_deref())
        }
        Command::Purify { state, output } => {
            let s: GaussianState = load(&state)?;
            let out = s.purify()?;
            let pure = out.is_pure(1e-8)?;
            let n = s.modes();
            let first: Vec<usize> = (0..n).collect();
            let gap = if n == 0 {
                0.0
            } else {
                out.marginal(&first)?.covariance().max_abs_diff(s.covariance())
            };
            let mut report = state_report(&name, json!({ "state": state }), &out, output.as_deref())?;
            report.extend(json!({ "is_pure": pure, "marginal_residual": gap }));
            report.pass = pure && gap <= 1e-9 * s.covariance().matrix().abs().max().max(1.0);
            Ok(report)
        }
        Command::Oracle(OracleCommand::VerifyCf { state, cutoff, samples, tol, radius }) => {
            let s: GaussianState = load(&state)?;
            let basis = FockBasis::with_cap(vec![cutoff; s.modes()], mem_cap()?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points = oracle::random_points(&mut rng, s.modes(), samples, radius);
            let r = oracle::verify_gaussian(&s, &basis, &points, tol)?;
            let inputs = json!({
                "state": state, "cutoff": cutoff, "samples": samples,
                "tol": tol, "radius": radius, "seed": seed,
            });
            Ok(Report::new(&name, inputs, to_value(&r), r.pass))
        }
        Command::Oracle(OracleCommand::VerifyWeyl { cutoff, tol, modes, pairs, radius }) => {
            let basis = FockBasis::with_cap(vec![cutoff; modes], mem_cap()?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = oracle::random_points(&mut rng, modes, pairs, radius);
            let g = oracle::random_points(&mut rng, modes, pairs, radius);
            let pairs_list: Vec<_> = f.into_iter().zip(g).collect();
            let r = oracle::verify_weyl(&basis, &pairs_list, tol)?;
            let inputs = json!({
                "cutoff": cutoff, "tol": tol, "modes": modes,
                "pairs": pairs, "radius": radius, "seed": seed,
            });
            Ok(Report::new(&name, inputs, to_value(&r), r.pass))
        }
        Command::Tail(TailCommand::Classify { tail }) => {
            let t: TailModel = load(&tail)?;
            let class = t.classify();
            let d: Vec<f64> = (1..=5).map(|j| t.d(j)).collect::<Result<_, _>>()?;
            let (s1, s2) = t.partial_sums(1000);
            let result = json!({
                "tail": t,
                "classification": class,
                "d_first": d,
                "partial_sums_1000": { "excess": s1, "excess_squared": s2 },
            });
            let pass = class.cond1_uncertainty && class.cond2_hilbert_schmidt && class.cond3_trace_class;
            Ok(Report::new(&name, json!({ "tail": tail }), result, pass))
        }
    }
}

fn state_report(name: &str, inputs: Value, state: &GaussianState, output: Option<&Path>) -> Result<Report, CliError> {
    let value = to_value(state);
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&value).expect("state serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let mut result = json!({ "state": value });
    if let Some(path) = output {
        result["written_to"] = json!(path);
    }
    Ok(Report::new(name, inputs, result, true))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("--alpha: {e}")))?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

fn mem_cap() -> Result<usize, CliError> {
    match std::env::var("GAUSSFOCK_MEM_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("GAUSSFOCK_MEM_CAP={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MEM_CAP),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}
