//! Argument definitions and the `run` entry point.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use renyi_converse_core::converse::TheoremId;

use crate::commands;
use crate::error::CliError;
use crate::output::{CheckRecord, ConfrontRecord, Format, Sink};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "renyi-converse", version, about = "Rényi entropies, RREE estimates and strong-converse bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the input state comes from. Without `--state` or `--preset`, a
/// random state is drawn from `--seed`.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// JSON state file
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    pub state: Option<PathBuf>,
    /// Named state: bell, phi(K), ghz(n), werner(p), schmidt(p1,...,pk)
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Register sizes of the random state, labelled A, B, R, X4, ...
    #[arg(long, default_value = "2x2")]
    pub dims: String,
    /// Rank of the random state; 1 gives a pure state
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, env = "RENYI_CONVERSE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write results here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Schumacher,
    Concentrate,
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|_| format!("expected one of merge_ent, merge_cc, concentrate, schumacher; got `{s}`"))
}

/// Resource sizes in bits. `--rate R` stands for `n·R` bits of the
/// theorem's resource (`logK` for merge_ent, with `logL = 0`).
#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    /// Per-copy rate grid
    #[arg(long)]
    pub rate: Option<String>,
    /// Entanglement consumed by merging, in bits (merge_ent)
    #[arg(long = "logK", value_name = "GRID")]
    pub log_k: Option<String>,
    /// Entanglement returned by merging (merge_ent) or target size (concentrate)
    #[arg(long = "logL", value_name = "GRID")]
    pub log_l: Option<String>,
    /// Classical communication, in bits (merge_cc)
    #[arg(long = "logX", value_name = "GRID")]
    pub log_x: Option<String>,
    /// Compressed size, in qubits (schumacher)
    #[arg(long = "logB", value_name = "GRID")]
    pub log_b: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rényi entropy of a register, coherent information and relative entropy
    Entropy {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Register(s) to keep, comma separated
        #[arg(long, default_value = "A")]
        register: String,
        /// Second argument of the relative entropy, as a state file
        #[arg(long, value_name = "FILE", conflicts_with = "sigma_preset")]
        sigma_state: Option<PathBuf>,
        /// Second argument of the relative entropy, as a preset
        #[arg(long, value_name = "NAME")]
        sigma_preset: Option<String>,
    },
    /// Analytic RREE bounds and a numerical upper estimate
    Rree {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "2")]
        alpha: String,
        /// Registers on the A side, comma separated
        #[arg(long, default_value = "A")]
        split: String,
        /// Product terms in the separable witness
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        max_iters: usize,
        /// Write the separable witness of every order to this JSON file
        #[arg(long, value_name = "PATH")]
        witness_out: Option<PathBuf>,
    },
    /// Strong-converse log-fidelity bounds over an (n, rate, alpha) grid
    Converse {
        #[arg(value_parser = parse_theorem)]
        theorem: TheoremId,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "1")]
        n: String,
        #[arg(long, conflicts_with = "optimize_alpha")]
        alpha: Option<String>,
        /// Pick the order giving the strongest bound at each point
        #[arg(long)]
        optimize_alpha: bool,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Exact protocol simulation over an (n, rate) grid
    Simulate {
        #[arg(value_enum)]
        protocol: ProtocolArg,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: String,
        #[arg(long)]
        rate: String,
        /// Also compute the channel fidelity densely (Schumacher, dⁿ ≤ 64)
        #[arg(long)]
        exact: bool,
    },
    /// Achieved fidelity against the converse bound at the same resource size
    Confront {
        #[arg(value_parser = parse_theorem)]
        theorem: TheoremId,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: String,
        #[arg(long)]
        rate: String,
        /// Fixed order; optimized per point when absent
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Randomized audits of the inequalities behind the bounds
    Check {
        /// Checks to run; all of them when empty
        ids: Vec<String>,
        #[command(flatten)]
        common: CommonArgs,
        /// Trials per check, overriding each check's default
        #[arg(long)]
        trials: Option<usize>,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Entropy { common, .. }
            | Command::Rree { common, .. }
            | Command::Converse { common, .. }
            | Command::Simulate { common, .. }
            | Command::Confront { common, .. }
            | Command::Check { common, .. } => common,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code: 0 success, 1 usage error, 2 failed check or bound
/// violation, 3 numerical or output error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.exit_code() == 0 {
                let _ = stdout.write_all(text.as_bytes());
                0
            } else {
                let _ = stderr.write_all(text.as_bytes());
                1
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let common = command.common().clone();
    let pool = parallel::pool(common.jobs);
    let sink = Sink { format: common.format, path: common.out.clone() };
    let seed = common.seed;
    match command {
        Command::Entropy { state, alpha, register, sigma_state, sigma_preset, .. } => {
            let records = commands::entropy(&pool, &state, seed, &alpha, &register, sigma_state, sigma_preset)?;
            sink.emit(&records, stdout)
        }
        Command::Rree { state, alpha, split, terms, restarts, max_iters, witness_out, .. } => {
            let opts = commands::RreeOptions { terms, restarts, max_iters, witness_out };
            let records = commands::rree(&pool, &state, seed, &alpha, &split, &opts)?;
            sink.emit(&records, stdout)
        }
        Command::Converse { theorem, state, n, alpha, optimize_alpha, rates, .. } => {
            let records = commands::converse(&pool, theorem, &state, seed, &n, alpha.as_deref(), optimize_alpha, &rates)?;
            sink.emit(&records, stdout)
        }
        Command::Simulate { protocol, state, n, rate, exact, .. } => {
            let records = commands::simulate(&pool, protocol, &state, seed, &n, &rate, exact)?;
            sink.emit(&records, stdout)
        }
        Command::Confront { theorem, state, n, rate, alpha, .. } => {
            let report = commands::confront(&pool, theorem, &state, seed, &n, &rate, alpha)?;
            let records: Vec<ConfrontRecord> = report.rows.iter().map(Into::into).collect();
            sink.emit(&records, stdout)?;
            write!(stderr, "{report}")?;
            report.check()?;
            Ok(())
        }
        Command::Check { ids, trials, .. } => {
            let reports = commands::check(&pool, &ids, trials, seed)?;
            let records: Vec<CheckRecord> = reports.iter().map(Into::into).collect();
            sink.emit(&records, stdout)?;
            commands::write_check_summary(&reports, stderr)?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.ok()).map(|r| r.check_id.name()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed(format!("checks failed: {}", failed.join(", "))))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("renyi-converse").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(text: &str) -> Vec<Value> {
        serde_json::from_str::<Vec<Value>>(text).unwrap()
    }

        #[test]
    fn entropy_of_a_schmidt_preset() {
        let (code, out, _) = call(&["entropy", "--preset", "schmidt(0.9,0.1)", "--alpha", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.286304"), "{out}");
    }

        #[test]
    fn rree_collapses_on_a_bell_pair() {
        let (code, out, _) = call(&["rree", "--preset", "phi(2)", "--alpha", "2"]);
        assert_eq!(code, 0);
        let row = &json(&out)[0];
        assert!((row["lower"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!((row["analytic_upper"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!((row["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    }

        #[test]
    fn relative_entropy_and_infinite_orders() {
        let (code, out, _) =
            call(&["entropy", "--preset", "werner(0.5)", "--register", "A,B", "--sigma-preset", "bell", "--alpha", "0.5,2,inf"]);
        assert_eq!(code, 0, "{out}");
        let rows = json(&out);
        assert_eq!(rows[1]["relative_entropy"], "inf");
        assert!(rows[2].get("relative_entropy").is_none());
        assert!(rows[0].get("coherent_info_ab").is_none());
    }

        #[test]
    fn converse_csv_header_is_stable() {
        let (code, out, _) = call(&[
            "converse", "schumacher", "--preset", "schmidt(0.9,0.1)", "--n", "10:30:10", "--rate", "0.3", "--alpha", "0.6,0.8",
            "--format", "csv",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "theorem,alpha,n,rate,exponent_per_copy,log_F_bound,vacuous");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("schumacher,0.6,10,0.3,"));
    }

        #[test]
    fn simulate_csv_header_is_stable() {
        let (code, out, _) =
            call(&["simulate", "concentrate", "--preset", "schmidt(0.8,0.2)", "--n", "20", "--rate", "0.5", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), "protocol,n,rate,log_size,eta,fidelity_lower,fidelity_exact,success_prob");
    }

        #[test]
    fn merging_from_log_flags() {
        let (code, out, _) = call(&["converse", "merge-ent", "--dims", "2x2x2", "--logK", "4", "--logL", "1", "--n", "4", "--alpha", "2"]);
        assert_eq!(code, 0, "{out}");
        let row = &json(&out)[0];
        assert_eq!(row["rate"].as_f64().unwrap(), 0.75);
        assert_eq!(row["rate_params"]["logK"].as_f64().unwrap(), 4.0);
    }

        #[test]
    fn usage_errors_name_the_flag() {
        for (args, flag) in [
            (vec!["entropy", "--alpha", "1:0:1"], "--alpha"),
            (vec!["entropy", "--preset", "phi(x)"], "--preset"),
            (vec!["converse", "schumacher", "--rate", "0.3"], "--alpha"),
            (vec!["converse", "schumacher", "--alpha", "0.7", "--logK", "3"], "--logK"),
            (vec!["converse", "concentrate", "--rank", "2", "--alpha", "2", "--rate", "0.5"], "--state/--preset"),
            (vec!["simulate", "schumacher", "--n", "8", "--rate", "0.5", "--exact"], "--n"),
            (vec!["converse", "schumacher", "--alpha", "1.5", "--rate", "0.5"], "--alpha"),
            (vec!["check", "nope"], "check"),
        ] {
            let (code, _, err) = call(&args);
            assert_eq!(code, 1, "{args:?}: {err}");
            assert!(err.contains(flag) && err.contains("fix:"), "{args:?}: {err}");
        }
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["entropy", "--preset", "bell", "--state", "x.json"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

        #[test]
    fn numerical_failures_exit_three() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"dims":[{"label":"A","dim":2}],"matrix":[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#).unwrap();
        let (code, _, err) = call(&["entropy", "--state", path.to_str().unwrap()]);
        assert_eq!(code, 3, "{err}");
    }

        #[test]
    fn check_runs_and_reports() {
        let (code, out, err) = call(&["check", "--trials", "4"]);
        assert_eq!(code, 0, "{err}");
        let reports = json(&out);
        assert_eq!(reports.len(), 10);
        assert!(reports.iter().all(|r| r["ok"] == true));
        assert!(err.contains("harness_selftest"));
    }

        #[test]
    fn out_flag_writes_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let witness = dir.path().join("sep.json");
        let (code, out, _) = call(&[
            "rree", "--preset", "werner(0.2)", "--alpha", "1.5", "--restarts", "2", "--max-iters", "40",
            "--out", path.to_str().unwrap(), "--witness-out", witness.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        assert_eq!(json(&std::fs::read_to_string(&path).unwrap()).len(), 1);
        let w = json(&std::fs::read_to_string(&witness).unwrap());
        assert!(!w[0]["terms"].as_array().unwrap().is_empty());
    }

    #[test]
    fn seed_comes_from_the_environment() {
        // the only test that sets this variable
        std::env::set_var("RENYI_CONVERSE_SEED", "7");
        let cli = Cli::try_parse_from(["renyi-converse", "entropy"]);
        std::env::remove_var("RENYI_CONVERSE_SEED");
        assert_eq!(cli.unwrap().command.common().seed, 7);
        let explicit = Cli::try_parse_from(["renyi-converse", "entropy", "--seed", "9"]).unwrap();
        assert_eq!(explicit.command.common().seed, 9);
    }

    #[test]
    fn failed_checks_exit_two() {
        let (code, out, err) = call(&["check", "harness_selftest", "--trials", "0"]);
        assert_eq!(code, 2);
        assert!(out.contains("\"ok\": false") && err.contains("harness_selftest"));
    }
}
