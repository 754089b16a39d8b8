// Small versions of the timing sweeps: doubling the run count, then
// stretching every run while the run count stays fixed.

use rle_acs::bench::{decoupling_sweep, doubling_sweep, render_table};

pub fn run() -> rle_acs::Result<()> {
    let sizes = [1024, 2048, 4096, 8192];
    println!("# runs doubling");
    print!("{}", render_table(&doubling_sweep(&sizes, 3, 1)?));
    println!("\n# N = 4096, run lengths scaled");
    print!(
        "{}",
        render_table(&decoupling_sweep(4096, &[1, 100, 10_000, 1_000_000], 3, 1)?)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
