//! Prints one line per reproduction check and fails on any unexpected result.

use std::process::ExitCode;

use twk_core::checks::{run_check, CheckOptions, Status, CHECK_COUNT};

fn main() -> ExitCode {
    let options = CheckOptions::default();
    let mut unexpected = 0;
    for id in 1..=CHECK_COUNT {
        let report = match run_check(id, &options) {
            Ok(r) => r,
            Err(e) => {
                println!("[ERROR] {id:>2}: {e}");
                unexpected += 1;
                continue;
            }
        };
        println!("{report}");
        // The L_{n,k} DFA recognises a different language than the two-way
        // machine it is paired with; the check must keep reporting that.
        let ok = match id {
            5 => report.status == Status::Fail && report.detail.contains("not equivalent"),
            _ => report.status != Status::Fail,
        };
        if !ok {
            println!("       ^ unexpected");
            unexpected += 1;
        }
    }
    println!("acceptance: {unexpected} unexpected result(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
