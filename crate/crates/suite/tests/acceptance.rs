//! Runs every check of the verification suite, one line each.
//! Exits nonzero if any check fails.

use std::process::ExitCode;

use psa_core::verify::{run_check, VerifyOptions, CHECKS};

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = 0;
    for name in CHECKS {
        match run_check(name, &opts) {
            Ok(r) => {
                let status = if r.passed { "pass" } else { "FAIL" };
                println!("criterion {:>2} {:<9} {status}  {}  [{:.2}s]", r.id, r.name, r.summary, r.elapsed.as_secs_f64());
                failed += usize::from(!r.passed);
            }
            Err(e) => {
                println!("criterion    {name:<9} FAIL  error: {e}");
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria passed", CHECKS.len() - failed, CHECKS.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
