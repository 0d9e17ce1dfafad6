mod args;
mod artifacts;
mod commands;

use clap::Parser;

fn main() {
    let cli = args::Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: args::Cli) -> cellsync_core::Result<()> {
    match cli.command {
        args::Command::Synth(a) => commands::synth::run(&a),
        args::Command::Sync(a) => commands::sync::run(&a),
        args::Command::Screen(a) => commands::screen::run(&a),
        args::Command::Regress(a) => commands::regress::run(&a),
        args::Command::Report(a) => commands::report::run(&a),
    }
}
