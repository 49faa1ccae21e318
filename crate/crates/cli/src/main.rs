use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use slicetower_cli::commands::{self, Format, Level, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "slicetower", version, about = "Slice towers of S^n ∧ HZ over cyclic p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TowerFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Text,
    Json,
}

impl From<TowerFormat> for Format {
    fn from(f: TowerFormat) -> Self {
        match f {
            TowerFormat::Text => Format::Text,
            TowerFormat::Json => Format::Json,
            TowerFormat::Latex => Format::Latex,
        }
    }
}

impl From<DataFormat> for Format {
    fn from(f: DataFormat) -> Self {
        match f {
            DataFormat::Text => Format::Text,
            DataFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the slice tower of S^n ∧ HZ over C_{p^k}.
    Tower {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: TowerFormat,
        /// Check every slice with the homology oracle; exit 1 on failure.
        #[arg(long)]
        verify: bool,
    },
    /// Verify every slice of the towers for a range of n.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// `A..B` (inclusive) or a single degree
        #[arg(long, env = "SLICETOWER_VERIFY_N", default_value = "3..12")]
        n: String,
        #[arg(long, value_enum, default_value = "text")]
        format: DataFormat,
    },
    /// Bredon homology of a representation sphere with Mackey coefficients.
    Homology {
        /// e.g. "3+2L1+L0", "5rho-1", "-(rho)", "V(1,1)@n=7"
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
        /// Z, Z*, Z(i,j) or B(i,j)
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// top, all, or a level m for the orbit G/C_{p^m}
        #[arg(long, default_value = "top", value_parser = commands::parse_level)]
        level: Level,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: DataFormat,
    },
    /// Show a Mackey functor as a Lewis diagram.
    Mackey {
        /// Z, Z*, Z(i,j) or B(i,j)
        #[arg(long)]
        show: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: DataFormat,
    },
}

fn run(cli: Cli) -> commands::CmdResult {
    match cli.command {
        Command::Tower { p, k, n, format, verify } => commands::cmd_tower(p, k, n, format.into(), verify),
        Command::Verify { p, k, n, format } => commands::cmd_verify(p, k, commands::parse_range(&n)?, format.into()),
        Command::Homology { rep, coeff, degree, level, p, k, format } => {
            commands::cmd_homology(&rep, &coeff, degree, level, p, k, format.into())
        }
        Command::Mackey { show, p, k, format } => commands::cmd_mackey(&show, p, k, format.into()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
