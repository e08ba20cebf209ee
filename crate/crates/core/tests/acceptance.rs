//! One line per acceptance criterion, plus a negative control that must fail.

use std::process::ExitCode;
use std::time::Instant;

use smoothlearn::games::{builtin, NormalFormGame};
use smoothlearn::harness::{rpoa_goldens, Suite};

/// Full-suite budget: twice the 1.24 s measured for the test profile on a single core.
const BUDGET_SECONDS: f64 = 2.5;

/// The dominance game with the row player's payoff at (row 1, col 1) raised from 0 to 1.5.
fn tampered_dominance() -> NormalFormGame {
    let dom = builtin("dominance").unwrap().game;
    let mut utilities = vec![dom.utilities(0).to_vec(), dom.utilities(1).to_vec()];
    utilities[0][0] = 1.5;
    NormalFormGame::new(vec![2, 2], utilities).unwrap()
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suite = Suite::new();
    let mut failed = 0;
    for id in Suite::ids() {
        let report = suite.run(id);
        println!("{report}");
        failed += usize::from(!report.passed);
    }

    let elapsed = start.elapsed().as_secs_f64();
    let on_time = elapsed <= BUDGET_SECONDS;
    println!(
        "[{}] suite runtime {elapsed:.2}s (≤ {BUDGET_SECONDS}s)",
        if on_time { "PASS" } else { "FAIL" }
    );
    failed += usize::from(!on_time);

    let control = rpoa_goldens(&tampered_dominance());
    let caught = !control.passed;
    println!(
        "[{}] negative control: tampered dominance game must fail criterion 3 ({})",
        if caught { "PASS" } else { "FAIL" },
        control.detail
    );
    failed += usize::from(!caught);

    println!("{} checks, {failed} failed", Suite::ids().count() + 2);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
