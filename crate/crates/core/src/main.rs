use clap::Parser;

fn main() {
    let cli = biorank::cli::Cli::parse();
    if let Err(e) = biorank::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
