fn main() -> std::process::ExitCode {
    lrmc::cli::main()
}
