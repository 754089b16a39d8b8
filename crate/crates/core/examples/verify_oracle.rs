// Checks the engine against the decoded brute-force oracles on a seeded
// random corpus, then shows that a broken freq rule is caught.

use rle_acs::sigma::FreqRule;
use rle_acs::verify::run_verification;
use rle_acs::EngineOptions;

pub fn run() -> rle_acs::Result<()> {
    let report = run_verification(7, 200, 400, EngineOptions::default())?;
    println!("correct engine: {report}");

    let broken = EngineOptions {
        freq_rule: FreqRule::Min,
    };
    let report = run_verification(7, 200, 400, broken)?;
    println!("freq = min over children: {report}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
