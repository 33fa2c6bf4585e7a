use clap::Parser;
use hcfold_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
        }
        Err(e) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
            }
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
