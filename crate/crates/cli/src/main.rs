use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let opts = vqueue::Options::parse();
    match vqueue::run(&opts) {
        Ok(summary) => {
            for f in summary.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("vqueue: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
