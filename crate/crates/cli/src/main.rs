use clap::Parser;

use cyclofermat_cli::schema::Status;
use cyclofermat_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let out = execute(&cli);
    if cli.json {
        println!("{}", out.json);
    } else if out.status == Status::Error {
        eprintln!("error: {}", out.text);
    } else {
        println!("{}", out.text);
    }
    std::process::exit(out.status.exit_code());
}
