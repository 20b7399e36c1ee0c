use clap::Parser;

fn main() {
    let cli = crosslearn::cli::Cli::parse();
    if let Err(e) = crosslearn::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
