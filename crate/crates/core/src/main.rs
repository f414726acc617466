fn main() {
    std::process::exit(spath_tdi::cli::main());
}
