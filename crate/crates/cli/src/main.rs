use clap::Parser;

fn main() {
    let cli = jlt_cli::Cli::parse();
    match jlt_cli::run(cli) {
        Ok(code) => std::process::exit(code as i32),
        Err(e) => {
            eprintln!("jlt: {e}");
            std::process::exit(e.code as i32);
        }
    }
}
