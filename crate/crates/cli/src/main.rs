use std::path::PathBuf;
use std::process::ExitCode;

use blockcoh::powers::PowerOptions;
use blockcoh_cli::commands::{self, Power};
use blockcoh_cli::{demo, CliError, Report};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blockcoh", version, about = "Block coherence: measures, conversions, gates and powers")]
struct Cli {
    /// Print one JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    structure: PathBuf,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, env = "BLOCKCOH_SEED", default_value_t = 0)]
    seed: u64,
}

impl PowerArgs {
    fn options(&self) -> PowerOptions {
        PowerOptions {
            restarts: self.restarts,
            seed: self.seed,
            ..PowerOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Block coherence of a pure state or density matrix.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// The state file holds {"density": ...} instead of amplitudes.
        #[arg(long)]
        density: bool,
    },
    /// Build and verify a block-incoherent conversion between pure states.
    Convert {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// Write the Kraus operators of the conversion channel here.
        #[arg(long)]
        emit_kraus: Option<PathBuf>,
    },
    /// Completeness and block-incoherence of a Kraus channel.
    CheckChannel {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Block-cohering power.
    Bcp(PowerArgs),
    /// Block-decohering power.
    Bdp(PowerArgs),
    /// Run the gate protocol with a maximally coherent ancilla.
    Gate {
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Enumerate block structures with blocks of size at most k and probe C_k.
    Kcoh {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "BLOCKCOH_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Reproduce the worked examples as a pass/fail table.
    Demo {
        #[arg(long, env = "BLOCKCOH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let report: Report = match cli.command {
        Command::Measure {
            state,
            structure,
            density,
        } => commands::measure(&state, &structure, density)?,
        Command::Convert {
            from,
            to,
            structure,
            emit_kraus,
        } => commands::convert(&from, &to, &structure, emit_kraus.as_deref())?,
        Command::CheckChannel { channel, structure } => commands::check_channel(&channel, &structure)?,
        Command::Bcp(a) => commands::power(Power::Cohering, &a.channel, &a.structure, &a.options())?,
        Command::Bdp(a) => commands::power(Power::Decohering, &a.channel, &a.structure, &a.options())?,
        Command::Gate {
            unitary,
            structure,
            state,
        } => commands::gate(&unitary, &structure, &state)?,
        Command::Kcoh { d, k, trials, seed } => commands::kcoh(d, k, trials, seed)?,
        Command::Demo { seed, restarts } => {
            let checks = demo::run(seed, restarts)?;
            let table = demo::render(&checks, cli.json);
            let failed = checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                print!("{table}");
                return Err(CliError::DemoFailed { failed });
            }
            return Ok(table);
        }
    };
    Ok(report.render(cli.json))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
