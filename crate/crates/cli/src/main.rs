//! `regret`: solve games with CFR, find dominated strategies and actions,
//! and run round-robin tournaments.

mod commands;
mod config;
mod error;
mod output;
mod spec;

use clap::{Parser, Subcommand};

use commands::{BestResponseArgs, CceArgs, DominanceArgs, ExportArgs, SolveArgs, TournamentArgs};

#[derive(Parser)]
#[command(name = "regret", version, about = "Regret minimization and dominance experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run vanilla or External Sampling CFR and write checkpoints and diagnostics.
    Solve(SolveArgs),
    /// Iteratively remove dominated strategies or actions.
    Dominance(DominanceArgs),
    /// Round-robin tournament with total bankroll and instant runoff scoring.
    Tournament(TournamentArgs),
    /// Best responses and Nash gap of a strategy profile.
    Bestresponse(BestResponseArgs),
    /// Check a correlated device for coarse correlated equilibrium.
    Ccecheck(CceArgs),
    /// Write a game in the JSON interchange format.
    ExportGame(ExportArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Dominance(a) => commands::dominance(a),
        Command::Tournament(a) => commands::tournament(a),
        Command::Bestresponse(a) => commands::best_response(a),
        Command::Ccecheck(a) => commands::cce_check(a),
        Command::ExportGame(a) => commands::export(a),
    };
    if let Err(err) = result {
        eprintln!("regret: {err}");
        std::process::exit(err.exit_code());
    }
}
