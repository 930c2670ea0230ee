fn main() {
    std::process::exit(hugoniot_bayes::cli::main_with_args(std::env::args_os()));
}
