use clap::Parser;

fn main() {
    let cli = gch::cli::Cli::parse();
    let code = gch::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
