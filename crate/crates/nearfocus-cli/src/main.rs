use clap::Parser;

fn main() {
    let cli = nearfocus_cli::Cli::parse();
    if let Err(e) = nearfocus_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
