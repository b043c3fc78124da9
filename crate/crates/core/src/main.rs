fn main() -> std::process::ExitCode {
    t20predict::cli::main()
}
