// SPDX-License-Identifier: MIT OR Apache-2.0

use clap::Parser;

fn main() {
    let cli = entcpd::cli::Cli::parse();
    if let Err(err) = entcpd::cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
