use std::io::Write;

fn main() {
    let result = finsite_cli::run(std::env::args_os());
    if result.code == 2 {
        eprint!("{}", result.output);
    } else {
        print!("{}", result.output);
        let _ = std::io::stdout().flush();
    }
    std::process::exit(result.code);
}
