use std::io;

fn main() {
    let code = renyi_converse_std::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
