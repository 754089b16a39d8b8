// Runs far too long to decode: the cost depends only on the run count.

use std::time::Instant;

use rle_acs::bench::{unary_closed_form, unary_pair};
use rle_acs::rle::Alphabet;
use rle_acs::{acs, dist, LogBase, RleSeq, Run};

pub fn run() -> rle_acs::Result<()> {
    let (x, y) = unary_pair(1_000_000_000, 1_000_000);
    let t = Instant::now();
    let r = acs(&x, &y)?;
    println!(
        "ACS((a,1e9), (a,1e6)) = {} in {:?}, closed form {}",
        r,
        t.elapsed(),
        unary_closed_form(1_000_000_000, 1_000_000)
    );

    let sym = Alphabet::symbol;
    let big = |name: &str, runs: &[(u8, u64)]| {
        RleSeq::from_runs(name, runs.iter().map(|&(c, n)| Run::new(sym(c), n))).map(|(s, _)| s)
    };
    let x = big(
        "x",
        &[(b'a', 1 << 40), (b'b', 3), (b'a', 1 << 35), (b'c', 1 << 20)],
    )?;
    let y = big(
        "y",
        &[(b'c', 1 << 30), (b'a', 1 << 36), (b'b', 5), (b'a', 7)],
    )?;
    let t = Instant::now();
    let d = dist(&x, &y, LogBase::E)?;
    println!("ACS(X,Y) = {}", d.acs_xy);
    println!("ACS(Y,X) = {}", d.acs_yx);
    println!("Dist = {:.3e} in {:?}", d.dist, t.elapsed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
