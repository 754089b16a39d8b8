// Encoding, decoding and the two record formats.

use std::io::Cursor;

use rle_acs::rle::{decode_bytes, MAX_DECODED_LEN};
use rle_acs::{encode_bytes, parse_fasta, parse_rle_text};

pub fn run() -> rle_acs::Result<()> {
    let seq = encode_bytes(b"aaabbbbcaa", "s")?;
    println!("{seq}");
    println!("runs = {}, length = {}", seq.run_count(), seq.text_length());
    let back = decode_bytes(&seq, MAX_DECODED_LEN)?;
    println!("decoded = {}", String::from_utf8_lossy(&back));

    // adjacent equal symbols are merged, with a warning
    let parsed = parse_rle_text(Cursor::new(">big\na1000000000 b3 b4\n>tiny\nc1\n"))?;
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    for r in &parsed.records {
        println!("{r}  ({} symbols)", r.text_length());
    }

    let fasta = parse_fasta(Cursor::new(">g1 sample\nACGT\nTTTA\n>g2\nAAAACCCC\n"))?;
    for r in &fasta {
        println!("{r}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rle_acs::Result<()> {
    run()
}
