// Dumps the sorted run-start suffixes and every annotated σ-trie.

use rle_acs::rle::Alphabet;
use rle_acs::{encode_bytes, AcsEngine};

pub fn run() -> rle_acs::Result<()> {
    let x = encode_bytes(b"aabbbab", "x")?;
    let y = encode_bytes(b"abbaab", "y")?;
    let engine = AcsEngine::new(&x, &y)?;

    println!("# suffix order");
    print!("{}", engine.trie().order.to_tsv());
    for (symbol, trie) in &engine.forest().tries {
        println!(
            "\n# trie for {} (maxRun in y = {})",
            Alphabet::render(*symbol),
            engine.maxrun().get(*symbol)
        );
        print!("{}", trie.to_tsv());
    }
    println!("\nA per run: {:?}", engine.run_sums()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
