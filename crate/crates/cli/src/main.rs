fn main() {
    std::process::exit(seqshare_cli::main_with_args(std::env::args_os()));
}
