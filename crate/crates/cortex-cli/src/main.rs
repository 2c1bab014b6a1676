fn main() -> std::process::ExitCode {
    cortex_cli::app::main_entry()
}
