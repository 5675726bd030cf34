use clap::Parser;
use gitmilnor_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (_, output, code) = run(&cli);
    if code == 2 {
        eprintln!("{output}");
    } else {
        println!("{output}");
    }
    std::process::exit(code);
}
