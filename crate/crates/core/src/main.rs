use std::process::ExitCode;

fn main() -> ExitCode {
    proxyrank::cli::main()
}
