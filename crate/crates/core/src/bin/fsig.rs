use clap::Parser;

use fsig::cli::{execute, Args};

fn main() {
    let args = Args::parse();
    let run = execute(&args);
    print!("{}", run.stdout);
    eprint!("{}", run.stderr);
    std::process::exit(run.code);
}
