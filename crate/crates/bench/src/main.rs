use std::process::ExitCode;

use clap::Parser;
use site_bench::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let site_bench::Error::Invalid(issues) = &e {
                for issue in issues {
                    eprintln!("  [{}] {}", issue.code, issue.message);
                }
            }
            ExitCode::from(1)
        }
    }
}
