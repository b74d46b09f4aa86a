use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = String::new();
    let mut err = String::new();
    // the contract is exit codes 0/1/2, never a panic escaping to the shell
    let code = std::panic::catch_unwind(move || {
        let mut out_inner = String::new();
        let mut err_inner = String::new();
        let code = rootfield::cli::run(&args, &mut out_inner, &mut err_inner);
        (code, out_inner, err_inner)
    });
    let code = match code {
        Ok((code, o, e)) => {
            out = o;
            err = e;
            code
        }
        Err(_) => {
            err.push_str("internal error\n");
            1
        }
    };
    print!("{out}");
    eprint!("{err}");
    ExitCode::from(code as u8)
}
