use std::io::Write;

fn main() {
    let inv = sbp_cli::run(std::env::args_os());
    // write errors (closed pipe) are not worth a panic
    let _ = std::io::stdout().write_all(inv.stdout.as_bytes());
    let _ = std::io::stderr().write_all(inv.stderr.as_bytes());
    std::process::exit(inv.code);
}
