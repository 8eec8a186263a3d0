//! Command-line front end for the pathway simulator.
//!
//! Exit codes: 0 success (machine accepted / validation clean), 1 runtime
//! error (I/O, config, undefined transition), 2 ran fine but did not accept
//! (or validation found problems), 64 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use lemniscal::moore::mlp::{pathway_machine, PathwayState, PathwaySymbol};
use lemniscal::moore::text::{parse_text, to_text_machine};
use lemniscal::session::run_session;
use lemniscal::trace::{write_csv, write_jsonl};
use lemniscal::{parse_config, receptors};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_ACCEPTED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "lemniscal",
    version,
    about = "Simulator of the body discriminative-touch and proprioception pathway",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drive the built-in pathway machine directly
    Machine {
        #[command(subcommand)]
        command: MachineCommand,
    },
    /// Run an end-to-end simulation from a config file and emit a trace
    Simulate(SimulateArgs),
    /// Print the somatosensory receptor catalog
    Catalog,
    /// Check a machine definition file (or the built-in machine) for problems
    Validate {
        /// Machine file in the plain-text format; omit for the built-in machine
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MachineCommand {
    /// Feed a comma-separated symbol sequence (d1..d10) to the machine
    Run {
        /// Symbols, e.g. "d2,d4,d6,d8"
        symbols: String,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// Configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Trace format
    #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
    format: TraceFormat,
    /// Trace output path; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config tick budget
    #[arg(long = "max-ticks")]
    max_ticks: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Csv,
    Jsonl,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let code = match cli.command {
        Command::Machine {
            command: MachineCommand::Run { symbols },
        } => machine_run(&symbols),
        Command::Simulate(args) => simulate(&args),
        Command::Catalog => catalog(),
        Command::Validate { file } => validate(file.as_deref()),
    };
    ExitCode::from(code)
}

fn io_failure(err: &io::Error) -> u8 {
    let _ = writeln!(io::stderr(), "lemniscal: {err}");
    EXIT_ERROR
}

fn machine_run(symbols: &str) -> u8 {
    let mut parsed = Vec::new();
    for token in symbols.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match PathwaySymbol::from_str(token) {
            Ok(symbol) => parsed.push(symbol),
            Err(err) => {
                eprintln!("lemniscal: {err}; expected d1..d10");
                return EXIT_USAGE;
            }
        }
    }

    let machine = pathway_machine();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut state = machine.initial;
    for symbol in &parsed {
        match machine.step(&state, symbol) {
            Ok(step) => {
                let line = writeln!(
                    out,
                    "{state} {symbol} -> {} {}",
                    step.next_state, step.emitted
                );
                if let Err(err) = line {
                    return io_failure(&err);
                }
                state = step.next_state;
            }
            Err(err) => {
                eprintln!("lemniscal: {err}");
                return EXIT_ERROR;
            }
        }
    }

    if state == PathwayState::Receiving {
        EXIT_OK
    } else {
        EXIT_NOT_ACCEPTED
    }
}

fn simulate(args: &SimulateArgs) -> u8 {
    let text = match fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("lemniscal: cannot read {}: {err}", args.config.display());
            return EXIT_ERROR;
        }
    };
    let mut config = match parse_config(&text) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("lemniscal: {}: {err}", args.config.display());
            return EXIT_ERROR;
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(max_ticks) = args.max_ticks {
        config.max_ticks = max_ticks;
    }
    if config.max_ticks < 1 {
        eprintln!("lemniscal: max_ticks must be at least 1");
        return EXIT_ERROR;
    }

    let trace = match run_session(&config) {
        Ok(trace) => trace,
        Err(err) => {
            eprintln!("lemniscal: {err}");
            return EXIT_ERROR;
        }
    };

    let header = config.trace_header();
    let mut bytes = Vec::new();
    let written = match args.format {
        TraceFormat::Csv => write_csv(&trace.rows, &mut bytes),
        TraceFormat::Jsonl => write_jsonl(&header, &trace.rows, &mut bytes),
    };
    if let Err(err) = written {
        eprintln!("lemniscal: {err}");
        return EXIT_ERROR;
    }

    let summary = format!(
        "ticks={} final_state={} accepted={}",
        trace.rows.len(),
        trace.final_state,
        trace.accepted
    );
    match &args.out {
        Some(path) => {
            if let Err(err) = fs::write(path, &bytes) {
                eprintln!("lemniscal: cannot write {}: {err}", path.display());
                return EXIT_ERROR;
            }
            let stdout = io::stdout();
            if let Err(err) = writeln!(stdout.lock(), "{summary}") {
                return io_failure(&err);
            }
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Err(err) = lock.write_all(&bytes).and_then(|()| lock.flush()) {
                return io_failure(&err);
            }
            eprintln!("{summary}");
        }
    }

    if trace.accepted {
        EXIT_OK
    } else {
        EXIT_NOT_ACCEPTED
    }
}

fn catalog() -> u8 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let print = (|| -> io::Result<()> {
        writeln!(
            out,
            "{:<20} {:<50} {:<30} {:<45} {:<10} band",
            "name", "structure", "sensation", "signals", "adaptation"
        )?;
        for spec in receptors::catalog() {
            let band = match spec.band_hz {
                Some((low, high)) => format!("{low:.0}-{high:.0} Hz"),
                None => "-".to_string(),
            };
            writeln!(
                out,
                "{:<20} {:<50} {:<30} {:<45} {:<10} {band}",
                spec.name, spec.structure, spec.sensation, spec.signals, spec.adaptation
            )?;
        }
        Ok(())
    })();
    match print {
        Ok(()) => EXIT_OK,
        Err(err) => io_failure(&err),
    }
}

fn validate(file: Option<&std::path::Path>) -> u8 {
    let (label, machine) = match file {
        None => ("built-in".to_string(), to_text_machine(&pathway_machine())),
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(text) => text,
                Err(err) => {
                    eprintln!("lemniscal: cannot read {}: {err}", path.display());
                    return EXIT_ERROR;
                }
            };
            match parse_text(&text) {
                Ok(machine) => (path.display().to_string(), machine),
                Err(err) => {
                    eprintln!("lemniscal: {}: {err}", path.display());
                    return EXIT_ERROR;
                }
            }
        }
    };

    let diagnostics = machine.validate();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if diagnostics.is_empty() {
        let line = writeln!(
            out,
            "{label}: ok ({} states, {} transitions)",
            machine.states.len(),
            machine.transitions.len()
        );
        match line {
            Ok(()) => EXIT_OK,
            Err(err) => io_failure(&err),
        }
    } else {
        for diagnostic in &diagnostics {
            if let Err(err) = writeln!(out, "{label}: {diagnostic}") {
                return io_failure(&err);
            }
        }
        EXIT_NOT_ACCEPTED
    }
}
