use clap::Parser;

fn main() {
    let cli = attractorlab::cli::Cli::parse();
    std::process::exit(attractorlab::cli::run(cli));
}
