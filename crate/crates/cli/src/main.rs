fn main() {
    std::process::exit(floquet_pt_cli::run(std::env::args_os()));
}
