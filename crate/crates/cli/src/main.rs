fn main() {
    std::process::exit(qthreshold_cli::run(std::env::args_os()));
}
