//! Command-line front end: JSON bodies in, CSV tables, SVG portraits and run
//! manifests out.
//!
//! Exit codes: 0 success, 1 usage or I/O failure, 2 malformed JSON, 3 invalid
//! body, 4 polygon required, 5 separatrix reached without a policy, 6 `H ≤ 0`.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;
pub mod svg;
pub mod verify;

use std::io::Write;
use std::time::Instant;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Streams;
use crate::error::{CliError, Result};
use crate::io::{load_body, read_json};
use crate::manifest::RunManifest;

/// Parses `args` (without the program name), runs, and returns the exit code.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("convex-trig".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli, args, &mut Streams { stdout, stderr }) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and writes its manifest.
pub fn execute(cli: &Cli, args: &[String], s: &mut Streams) -> Result<()> {
    let g = &cli.global;
    let tol = g.tolerances();
    let clock = Instant::now();
    let (outcome, parameters) = match &cli.command {
        Command::Trig(a) => (commands::trig(a, &tol, s)?, serde_json::to_value(a)),
        Command::PolygonTables(a) => (commands::polygon_tables(a, &tol, s)?, serde_json::to_value(a)),
        Command::Polar(a) => (commands::polar(a, &tol, s)?, serde_json::to_value(a)),
        Command::Area(a) => (commands::area(a, &tol, s)?, serde_json::to_value(a)),
        Command::Pendulum(a) => (commands::pendulum(a, &tol, s)?, serde_json::to_value(a)),
        Command::Portrait(a) => (commands::portrait(a, &tol, s)?, serde_json::to_value(a)),
        Command::Extremal(a) => (commands::extremal(a, &tol, s)?, serde_json::to_value(a)),
        Command::Verify(a) => (commands::verify(a, &tol, g.seed, s)?, serde_json::to_value(a)),
        Command::Replay(a) => return replay(&a.manifest, s),
    };
    let manifest = RunManifest {
        tool: "convex-trig".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        args: args.to_vec(),
        body: outcome.body,
        parameters: serde_json::json!({
            "global": g,
            "command": parameters.expect("arguments serialize"),
        }),
        tolerances: (&tol).into(),
        seed: g.seed,
        outputs: outcome.outputs,
        duration_seconds: clock.elapsed().as_secs_f64(),
    };
    manifest.write(g.manifest_dir.as_deref())?;
    Ok(())
}

fn body_path(cmd: &Command) -> Option<&std::path::Path> {
    Some(match cmd {
        Command::Trig(a) => &a.body,
        Command::PolygonTables(a) | Command::Polar(a) => &a.body,
        Command::Area(a) => &a.body,
        Command::Pendulum(a) => &a.body,
        Command::Portrait(a) => &a.body,
        Command::Extremal(a) => &a.body,
        Command::Verify(a) => &a.body,
        Command::Replay(_) => return None,
    })
}

fn replay(path: &std::path::Path, s: &mut Streams) -> Result<()> {
    let m: RunManifest = read_json(path)?;
    let cli = Cli::try_parse_from(std::iter::once("convex-trig".to_string()).chain(m.args.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {e}")))?;
    let Some(body) = body_path(&cli.command) else {
        return Err(CliError::Usage("a manifest cannot replay another replay".into()));
    };
    let (current, _) = load_body(body, &cli.global.tolerances())?;
    if m.body.as_ref().is_some_and(|b| *b != current) {
        return Err(CliError::Usage(format!("{} changed since the manifest was written", body.display())));
    }
    execute(&cli, &m.args, s)
}
