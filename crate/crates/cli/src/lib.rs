//! Command-line front end for `cone-quantile-core`.
//!
//! Every run prints (or writes) one JSON document `{"config", "results"}`.
//! Exit codes: 0 success, 1 failed selftest, 2 malformed input, 3 numerical
//! failure (degenerate cone, unsupported dimension).

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::commands::{QuantileArgs, SimulateArgs};
use crate::config::{Cli, Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, to_json, Envelope};

/// Caps the worker threads used by parallel loops.
pub const THREADS_ENV: &str = "CONE_QUANTILE_THREADS";

fn threads() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::input(THREADS_ENV, format!("expected a positive integer, got {s:?}"))),
        },
    }
}

/// Bytes for stdout, plus the error to report after writing them.
type Outcome = (Vec<u8>, Option<CliError>);

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let bytes = match &cli.command {
        Command::Cdf { model, points, out } => commands::cdf(cli, model, points, out.as_ref()),
        Command::Depth { data, points, out } => commands::depth(cli, data, points, out.as_ref()),
        Command::Quantile {
            model,
            levels,
            bbox,
            svg,
            json,
        } => commands::quantile(
            cli,
            QuantileArgs {
                model,
                levels,
                bbox: bbox.as_deref(),
                svg: svg.as_ref(),
                json: json.as_ref(),
            },
        ),
        Command::Closure { model, generators, out } => commands::closure(cli, model, generators, out.as_ref()),
        Command::Rank { model, d1, d2, out } => commands::rank(cli, model, d1, d2, out.as_ref()),
        Command::Simulate {
            model,
            test_set,
            n,
            seed,
            trace,
            out,
        } => commands::simulate(
            cli,
            SimulateArgs {
                model,
                test_set,
                n: *n,
                seed: *seed,
                trace: trace.as_ref(),
                out: out.as_ref(),
            },
        ),
        Command::Selftest { seed, out } => {
            let mut config = RunConfig::new("selftest", cli)?;
            config.seed = Some(*seed);
            config.output("out", out.as_ref());
            let checks = selftest::run(cli.resolution, cli.grid, *seed)?;
            let bytes = emit(to_json(&Envelope { config: &config, results: &checks })?, out.as_ref())?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            let error = (failed > 0).then_some(CliError::SelfTest {
                failed,
                total: checks.len(),
            });
            return Ok((bytes, error));
        }
    }?;
    Ok((bytes, None))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = threads().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::input(THREADS_ENV, e.to_string()))?;
        pool.install(|| dispatch(&cli))
    });
    let (bytes, error) = match result {
        Ok(outcome) => outcome,
        Err(e) => (Vec::new(), Some(e)),
    };
    if let Err(e) = stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: <stdout>: {e}");
        return 2;
    }
    match error {
        None => 0,
        Some(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
