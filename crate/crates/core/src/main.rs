use clap::Parser;

use iqisec::cli::{run, Flags};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let flags = Flags::parse();
    std::process::exit(run(&flags));
}
