use std::process::exit;

fn main() {
    exit(mobbo::cli::run_from(std::env::args_os()));
}
