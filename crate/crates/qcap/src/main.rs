fn main() -> std::process::ExitCode {
    qcap::cli::main()
}
