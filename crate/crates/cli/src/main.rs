mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "quatlat", version, about = "Quaternion orders, E8 lattices and Hamiltonian binary forms")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for `table` (default: available parallelism)
    #[arg(long, global = true, env = "QUATLAT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order data: discriminant, maximality, different, units
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Build E8-isometric O-lattices and the witness form for γ₂(O)
    Gamma2 {
        #[command(flatten)]
        source: OrderSource,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        /// Named λ of the preset (e.g. l1); default: all named ones, or a searched λ
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Class counts t(d) and t_dnp(d) for admissible d ≤ dmax, as CSV
    Table {
        #[arg(long)]
        dmax: u64,
        /// Append the Deuring check column for prime d
        #[arg(long)]
        deuring: bool,
    },
    /// The five equivalent principality conditions
    Theorem25 {
        #[command(flatten)]
        source: OrderSource,
        /// Order pulled back from class IDX of S(D) (see `ternary classes`)
        #[arg(long, num_args = 2, value_names = ["D", "IDX"], conflicts_with_all = ["preset", "order_file"])]
        from_ternary: Option<Vec<u64>>,
    },
    /// Ternary lattice classes
    Ternary {
        #[command(subcommand)]
        command: TernaryCommand,
    },
}

#[derive(Subcommand, Debug)]
enum OrderCommand {
    Info {
        #[command(flatten)]
        source: OrderSource,
    },
}

#[derive(Subcommand, Debug)]
enum TernaryCommand {
    /// Representatives of S(d) with genus symbols and minima
    Classes {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct OrderSource {
    /// Built-in order: hurwitz, d3, d5, d7, d11-a, d11-b, d13
    #[arg(long)]
    pub preset: Option<String>,
    /// Order file in the preset TOML format
    #[arg(long, conflicts_with = "preset")]
    pub order_file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Lambda,
    Glue,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let result = match &cli.command {
        Command::Order {
            command: OrderCommand::Info { source },
        } => commands::order_info(source),
        Command::Gamma2 { source, route, lambda } => commands::gamma2(source, *route, lambda.as_deref()),
        Command::Table { dmax, deuring } => commands::table(*dmax, *deuring, cli.jobs),
        Command::Theorem25 { source, from_ternary } => commands::theorem25(source, from_ternary.as_deref()),
        Command::Ternary {
            command: TernaryCommand::Classes { d },
        } => commands::ternary_classes(*d),
    };
    let mut out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let csv = out.csv.take();
    let report = RunReport::new(echo.join(" "), out, start.elapsed());
    let text = if cli.json {
        report.to_json() + "\n"
    } else if let Some(csv) = csv {
        csv
    } else {
        report.to_text()
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("check failed: {f}");
        }
        ExitCode::from(1)
    }
}

fn exit_code(e: &quatlat::Error) -> u8 {
    use quatlat::Error::*;
    match e {
        Parse(_) | InvalidArgument(_) | Indefinite { .. } | RankDeficient | NoUnit | NotIntegral(_) | NotClosed(_)
        | NotMaximal { .. } | Dimension(_) => 2,
        _ => 1,
    }
}
