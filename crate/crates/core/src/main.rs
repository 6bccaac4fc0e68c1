fn main() {
    std::process::exit(qcss::cli::run());
}
