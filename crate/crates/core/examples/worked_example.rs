// ACS and distance for X = aab, Y = ab, with the per-position match lengths.

use rle_acs::{acs, dist, encode_bytes, AcsEngine, LogBase};

pub fn run() -> rle_acs::Result<()> {
    let x = encode_bytes(b"aab", "x")?;
    let y = encode_bytes(b"ab", "y")?;
    println!("{x}\n{y}");

    let engine = AcsEngine::new(&x, &y)?;
    println!(
        "L per position: {:?}",
        engine.compute_l_per_position(1 << 20)?
    );
    println!("A per run:      {:?}", engine.run_sums()?);

    let xy = acs(&x, &y)?;
    let yx = acs(&y, &x)?;
    println!("ACS(X,Y) = {} = {}", xy.ratio(), xy.value());
    println!("ACS(Y,X) = {} = {}", yx.ratio(), yx.value());

    let d = dist(&x, &y, LogBase::E)?;
    println!("Dist = {:.9}", d.dist);
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
