use clap::Parser;

fn main() {
    env_logger::init();
    let cli = wavegate_cli::Cli::parse();
    let code = wavegate_cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
