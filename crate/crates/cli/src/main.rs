use std::io::Write;

fn main() {
    let verdict = probconf::run(std::env::args_os());
    std::io::stdout().write_all(verdict.stdout.as_bytes()).expect("stdout");
    std::io::stderr().write_all(verdict.stderr.as_bytes()).expect("stderr");
    std::process::exit(verdict.code);
}
