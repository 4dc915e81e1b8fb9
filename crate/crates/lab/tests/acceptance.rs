//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p dgbo-lab --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use dgbo_lab::criteria;

fn main() -> ExitCode {
    let mut failures = 0;
    for id in 1..=10u8 {
        let start = Instant::now();
        let c = criteria::run(id);
        let status = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failures += 1;
        }
        let detail = c
            .headline()
            .map(|k| format!("{} = {:.4e} ({})", k.name, k.value, k.limit))
            .unwrap_or_default();
        println!("{status} {:>2}. {} [{:.1}s]: {detail}", c.id, c.title, start.elapsed().as_secs_f64());
        for k in &c.checks {
            let mark = if k.passed { "ok  " } else { "FAIL" };
            println!("       {mark} {} = {:.4e} ({})", k.name, k.value, k.limit);
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
