fn main() -> std::process::ExitCode {
    qroute::cli::main()
}
