use std::path::{Path, PathBuf};
use std::process::ExitCode;

use spin_stirling::config::{apply_overrides, parse_config, render_config, CliCommand, RunConfig};
use spin_stirling::error::Error;
use spin_stirling::runner::{run, RunOutput};

const USAGE: &str = "usage: spin-stirling <spectrum|cycle|sweep|power> \
[--config <path>] [--out <path>] [--set key=value ...]

Computes level spectra, quasistatic Stirling-cycle work and efficiency,
angle sweeps, and finite-time protocol traces with a power estimate for a
dipolar-coupled two-spin working medium. Results are CSV on stdout or at
--out; the effective configuration is echoed to stderr.";

/// Exit codes: 1 config/usage, 2 domain, 3 I/O.
enum CliError {
    Usage(String),
    Config(Error),
    Domain(Error),
    Io(String, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io(..) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("{m}\n\n{USAGE}"),
            CliError::Config(e) => e.to_string(),
            CliError::Domain(e) => e.to_string(),
            CliError::Io(path, e) => format!("{path}: {e}"),
        }
    }
}

fn classify(e: Error) -> CliError {
    match e {
        Error::ParseError { .. } | Error::ValidationError(_) => CliError::Config(e),
        other => CliError::Domain(other),
    }
}

struct Args {
    command: CliCommand,
    config_path: Option<PathBuf>,
    out: Option<String>,
    sets: Vec<(String, String)>,
    help: bool,
}

fn parse_args(argv: &[String]) -> Result<Args, CliError> {
    let mut command = None;
    let mut config_path = None;
    let mut out = None;
    let mut sets = Vec::new();
    let mut help = false;

    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--help" | "-h" => help = true,
            "--config" => {
                let path = it
                    .next()
                    .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
                config_path = Some(PathBuf::from(path));
            }
            "--out" => {
                let path = it
                    .next()
                    .ok_or_else(|| CliError::Usage("--out needs a path".into()))?;
                out = Some(path.clone());
            }
            "--set" => {
                let pair = it
                    .next()
                    .ok_or_else(|| CliError::Usage("--set needs key=value".into()))?;
                let Some((k, v)) = pair.split_once('=') else {
                    return Err(CliError::Usage(format!(
                        "--set needs key=value, got \"{pair}\""
                    )));
                };
                sets.push((k.trim().to_string(), v.trim().to_string()));
            }
            other if other.starts_with('-') => {
                return Err(CliError::Usage(format!("unknown flag \"{other}\"")));
            }
            positional => {
                if command.is_some() {
                    return Err(CliError::Usage(format!(
                        "unexpected extra argument \"{positional}\""
                    )));
                }
                command =
                    Some(CliCommand::parse(positional).ok_or_else(|| {
                        CliError::Usage(format!("unknown command \"{positional}\""))
                    })?);
            }
        }
    }

    if help {
        return Ok(Args {
            command: command.unwrap_or(CliCommand::Cycle),
            config_path,
            out,
            sets,
            help,
        });
    }
    let command = command.ok_or_else(|| CliError::Usage("missing command".into()))?;
    Ok(Args {
        command,
        config_path,
        out,
        sets,
        help,
    })
}

fn build_config(args: &Args) -> Result<RunConfig, CliError> {
    let text = match &args.config_path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e))?,
        None => String::new(),
    };
    let mut config = parse_config(&text).map_err(classify)?;
    apply_overrides(&mut config, &args.sets).map_err(classify)?;
    // the command line wins over both the file and --set
    config.command = args.command;
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    Ok(config)
}

/// power writes two tables; the summary goes next to the main file.
fn summary_path(main: &Path) -> PathBuf {
    let stem = main
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let name = match main.extension() {
        Some(ext) => format!("{stem}_summary.{}", ext.to_string_lossy()),
        None => format!("{stem}_summary"),
    };
    main.with_file_name(name)
}

fn emit(output: &RunOutput, out: &Option<String>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let main = Path::new(path);
            std::fs::write(main, output.main.render())
                .map_err(|e| CliError::Io(main.display().to_string(), e))?;
            if let Some(summary) = &output.summary {
                let path = summary_path(main);
                std::fs::write(&path, summary.render())
                    .map_err(|e| CliError::Io(path.display().to_string(), e))?;
            }
        }
        None => {
            print!("{}", output.main.render());
            if let Some(summary) = &output.summary {
                println!();
                print!("{}", summary.render());
            }
        }
    }
    Ok(())
}

fn run_cli(argv: &[String]) -> Result<(), CliError> {
    let args = parse_args(argv)?;
    if args.help {
        println!("{USAGE}");
        return Ok(());
    }
    let config = build_config(&args)?;
    eprint!("{}", render_config(&config));
    let output = run(&config).map_err(classify)?;
    emit(&output, &config.out)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run_cli(&argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
