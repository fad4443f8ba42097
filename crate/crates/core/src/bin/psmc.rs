use clap::Parser;

fn main() {
    let cli = psmc::cli::Cli::parse();
    let code = psmc::cli::run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
