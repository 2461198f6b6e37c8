fn main() -> std::process::ExitCode {
    ecclab::cli::main_entry()
}
