use clap::Parser;
use lpm_cli::{run, Args};

fn main() {
    let args = Args::parse();
    if let Err(e) = run(&args) {
        eprintln!("lpm: {e}");
        std::process::exit(e.exit_code());
    }
}
