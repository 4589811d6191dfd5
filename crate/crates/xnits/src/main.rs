use std::path::PathBuf;
use std::process::ExitCode;

use xnits::cli::{check_case, run_case, run_convergence, run_sweep, StudyConfig};
use xnits::Error;

const USAGE: &str =
    "usage: xnits <run|sweep|conv> <config> [--out DIR] [--seed N] [--quiet] [--check]";

struct Args {
    command: String,
    config: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    quiet: bool,
    check: bool,
}

fn parse_args() -> Result<Args, String> {
    let mut it = std::env::args().skip(1);
    let command = it.next().ok_or(USAGE)?;
    if command == "--help" || command == "-h" {
        return Err(USAGE.to_string());
    }
    let config = PathBuf::from(it.next().ok_or(USAGE)?);
    let mut args = Args {
        command,
        config,
        out: None,
        seed: None,
        quiet: false,
        check: false,
    };
    while let Some(flag) = it.next() {
        match flag.as_str() {
            "--out" => args.out = Some(PathBuf::from(it.next().ok_or("--out needs a value")?)),
            "--seed" => {
                args.seed = Some(
                    it.next()
                        .ok_or("--seed needs a value")?
                        .parse()
                        .map_err(|_| "--seed needs an integer".to_string())?,
                )
            }
            "--quiet" => args.quiet = true,
            "--check" => args.check = true,
            other => return Err(format!("unknown flag `{other}`\n{USAGE}")),
        }
    }
    Ok(args)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::MeshFormat(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match StudyConfig::parse_file(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.quiet = args.quiet;

    let result = match args.command.as_str() {
        "run" => run_case(&cfg),
        "sweep" => run_sweep(&cfg),
        "conv" => run_convergence(&cfg),
        other => {
            eprintln!("unknown command `{other}`\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code_for(&e));
    }
    if args.check {
        match check_case(&cfg) {
            Ok(true) => {
                if !cfg.quiet {
                    println!("check: ok");
                }
            }
            Ok(false) => {
                eprintln!("check: FAILED for the configured case");
                return ExitCode::from(4);
            }
            Err(e) => {
                eprintln!("check errored: {e}");
                return ExitCode::from(4);
            }
        }
    }
    ExitCode::SUCCESS
}
