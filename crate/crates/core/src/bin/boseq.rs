fn main() -> std::process::ExitCode {
    boseq::cli::main()
}
