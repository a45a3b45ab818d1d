use std::io::Write;

use clap::Parser;
use fedder_cli::{run, Cli, CliInvocation, SEED_ENV};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    let json = cli.json;
    let env_seed = std::env::var(SEED_ENV).ok();
    let inv = match CliInvocation::new(argv, cli, env_seed.as_deref()) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            std::process::exit(e.kind.status());
        }
    };
    let outcome = run(&inv, &|msg| eprintln!("{msg}"));
    if let Some(e) = &outcome.error {
        eprintln!("{}", e.diagnostic());
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout(json).as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.status);
}
