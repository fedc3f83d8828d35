//! Acceptance criteria 1 to 11, one line each. Exits non-zero if any fails.

use mobjlab::sweep::{run_criterion, SweepConfig, CRITERIA};

fn main() {
    let cfg = SweepConfig::default();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        match run_criterion(id, &cfg) {
            Ok(outcome) => {
                println!("{}", outcome.line());
                if !outcome.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2} ERROR {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
