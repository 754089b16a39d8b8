// Pairwise distance matrix over a handful of sequences, as PHYLIP and TSV.

use rle_acs::{distance_matrix, encode_bytes, LogBase};

pub fn run() -> rle_acs::Result<()> {
    let inputs: [(&str, &[u8]); 4] = [
        ("alpha", b"ACCGTTTAGGA"),
        ("beta", b"ACCGTTAAGGA"),
        ("gamma", b"TTTTGGGCCAA"),
        ("delta", b"ACCGTTTAGGC"),
    ];
    let seqs = inputs
        .iter()
        .map(|(name, text)| encode_bytes(text, *name))
        .collect::<rle_acs::Result<Vec<_>>>()?;
    let m = distance_matrix(&seqs, LogBase::Two, 0)?;
    print!("{}", m.to_phylip(false)?);
    println!();
    print!("{}", m.to_tsv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
