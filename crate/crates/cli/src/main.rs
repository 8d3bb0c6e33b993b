//! `symdyn`: batch driver for the symbolic dynamics workbench.
//!
//! Every run prints one JSON report on stdout holding the crate version,
//! the full experiment config and the result. With `--out DIR` the report
//! goes to `DIR/report.json` as well, next to pattern artifacts and a
//! separate `timing.json`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use commands::*;

/// Worker-count override for the parallel sweeps.
const WORKERS_ENV: &str = "SYMDYN_WORKERS";

const EXIT_PASS: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "symdyn", version, about = "Two-dimensional symbolic dynamics workbench")]
struct Cli {
    /// Directory for the report, timing and pattern artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Count margin-extendable n×n patterns of a shift.
    BlockCount(BlockCountArgs),
    /// Build a standard-block family and write it as an archive.
    DeepBuild(DeepBuildArgs),
    /// Decide whether a pattern occurs in an archived family's closure.
    DeepMember(DeepMemberArgs),
    /// Rebuild an archived family and compare it bit for bit.
    #[command(alias = "verify-archive")]
    DeepVerify(DeepVerifyArgs),
    /// Build the recursive lex-first square P_k of a nearest-neighbor shift.
    LowcfgBuild(LowcfgBuildArgs),
    /// Describe random subpatterns of P_k and rebuild them from the descriptions.
    LowcfgRoundtrip(LowcfgRoundtripArgs),
    /// Exact time-bounded complexity of a bit string.
    KcExact(KcExactArgs),
    /// Lexicographically first incompressible n×n binary matrix.
    KcIncompressible(KcIncompressibleArgs),
    /// Check the epitome property for every n×n pattern.
    EpitomeVerify(EpitomeVerifyArgs),
    /// Check that border rings of a nearest-neighbor cover pin down an epitome.
    BorderConsistency(BorderArgs),
    /// Encode a pattern against the dictionary of admissible k×k blocks.
    TwoPartCode(TwoPartArgs),
    /// Print a pattern file as a grid.
    Render(RenderArgs),
}

/// Result of one command.
pub struct Outcome {
    pub pass: bool,
    pub result: Value,
    /// File name under `--out` and its contents.
    pub artifacts: Vec<(String, String)>,
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{WORKERS_ENV} must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(command: &Command, out: Option<&std::path::Path>) -> symdyn::Result<Outcome> {
    match command {
        Command::BlockCount(a) => block_count(a),
        Command::DeepBuild(a) => deep_build(a, out),
        Command::DeepMember(a) => deep_member(a),
        Command::DeepVerify(a) => deep_verify(a),
        Command::LowcfgBuild(a) => lowcfg_build(a),
        Command::LowcfgRoundtrip(a) => lowcfg_roundtrip(a),
        Command::KcExact(a) => kc_exact(a),
        Command::KcIncompressible(a) => kc_incompressible(a),
        Command::EpitomeVerify(a) => epitome_verify(a),
        Command::BorderConsistency(a) => border_consistency(a),
        Command::TwoPartCode(a) => two_part(a),
        Command::Render(_) => unreachable!("render prints directly"),
    }
}

fn write_outputs(out: &PathBuf, report: &str, outcome: &Outcome, timing: &Value) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.json"), report)?;
    std::fs::write(out.join("timing.json"), serde_json::to_string_pretty(timing)? + "\n")?;
    for (name, contents) in &outcome.artifacts {
        let path = out.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, contents)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Command::Render(a) = &cli.command {
        // plain grid output, no report
        return match commands::render_text(a) {
            Ok(text) => {
                print!("{text}");
                ExitCode::from(EXIT_PASS)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        };
    }

    let started = Instant::now();
    let outcome = match run(&cli.command, cli.out.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                symdyn::Error::Infeasible(_) => EXIT_INFEASIBLE,
                symdyn::Error::Verification(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            };
            return ExitCode::from(code);
        }
    };
    let mut config = serde_json::to_value(&cli.command).expect("config serializes");
    config["out"] = json!(cli.out);
    let report = json!({
        "version": symdyn::VERSION,
        "config": config,
        "pass": outcome.pass,
        "result": outcome.result,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    print!("{text}");
    let timing = json!({ "elapsed_ms": started.elapsed().as_millis() as u64 });
    if let Some(out) = &cli.out {
        if let Err(e) = write_outputs(out, &text, &outcome, &timing) {
            eprintln!("error: writing {}: {e}", out.display());
            return ExitCode::from(EXIT_USAGE);
        }
    } else {
        eprintln!("elapsed: {} ms", timing["elapsed_ms"]);
    }
    ExitCode::from(if outcome.pass { EXIT_PASS } else { EXIT_FAIL })
}
