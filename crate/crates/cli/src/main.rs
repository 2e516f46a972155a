fn main() {
    std::process::exit(repotopics_cli::run::run(std::env::args_os()));
}
