fn main() {
    std::process::exit(risbeam::run::main_with_args(std::env::args_os()));
}
