use clap::Parser;

use besovkit_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("besovkit: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
