use std::io::Write;

fn main() {
    let (code, report) = geomforge::cli::run(std::env::args_os());
    if let Some(report) = report {
        let _ = writeln!(std::io::stdout(), "{}", geomforge::cli::render(&report));
    }
    std::process::exit(code);
}
