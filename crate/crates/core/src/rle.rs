//! Run-length encoded sequences, the symbol alphabet, and the two text input
//! formats (`>name` records of `<symbol><count>` tokens, and FASTA).
//!
//! Every [`RleSeq`] carries a trailing sentinel run of length 1. The sentinel
//! symbol orders below every alphabet symbol, and the two sequences of a pair
//! always get distinct sentinels (see [`Sentinel`]), so no two suffixes of a
//! pair are ever equal.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Largest supported decoded length of a single sequence.
pub const MAX_DECODED_LEN: u64 = 1 << 62;

/// Internal symbol id. Ids `0` and `1` are reserved for the sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn is_sentinel(self) -> bool {
        self.0 < Alphabet::FIRST_ID
    }
}

/// Which terminator a sequence carries inside a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sentinel {
    First,
    Second,
}

impl Sentinel {
    pub fn symbol(self) -> Symbol {
        match self {
            Sentinel::First => Symbol(0),
            Sentinel::Second => Symbol(1),
        }
    }
}

/// Fixed byte alphabet: byte `b` maps to id `b + 2`, which keeps byte order and
/// leaves ids 0 and 1 to the sentinels.
#[derive(Debug, Clone, Copy, Default)]
pub struct Alphabet;

impl Alphabet {
    pub const FIRST_ID: u32 = 2;

    pub fn symbol(byte: u8) -> Symbol {
        Symbol(byte as u32 + Self::FIRST_ID)
    }

    /// The byte a symbol was mapped from; `None` for sentinels and ids outside
    /// the byte range.
    pub fn byte(symbol: Symbol) -> Option<u8> {
        symbol
            .0
            .checked_sub(Self::FIRST_ID)
            .and_then(|b| u8::try_from(b).ok())
    }

    pub fn render(symbol: Symbol) -> char {
        match symbol {
            Symbol(0) => '⊥',
            Symbol(1) => '⊤',
            s => Self::byte(s).map(char::from).unwrap_or('?'),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub symbol: Symbol,
    pub length: u64,
}

impl Run {
    pub fn new(symbol: Symbol, length: u64) -> Self {
        Run { symbol, length }
    }
}

/// A named run-length encoded sequence. The last run is always the sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleSeq {
    name: String,
    runs: Vec<Run>,
    decoded_length: u64,
}

impl RleSeq {
    /// Builds a sequence from body runs (no sentinel). Adjacent runs with equal
    /// symbols are merged; the number of merges performed is returned alongside.
    pub fn from_runs(
        name: impl Into<String>,
        body: impl IntoIterator<Item = Run>,
    ) -> Result<(Self, usize)> {
        let mut runs: Vec<Run> = Vec::new();
        let mut merged = 0;
        let mut total: u64 = 0;
        for (position, run) in body.into_iter().enumerate() {
            if run.symbol.is_sentinel() {
                return Err(Error::ReservedSymbol { position });
            }
            if run.length == 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("run {position} has length 0"),
                });
            }
            total = total
                .checked_add(run.length)
                .filter(|&t| t < MAX_DECODED_LEN)
                .ok_or(Error::LengthOverflow)?;
            match runs.last_mut() {
                Some(last) if last.symbol == run.symbol => {
                    last.length += run.length;
                    merged += 1;
                }
                _ => runs.push(run),
            }
        }
        if runs.is_empty() {
            return Err(Error::EmptySequence);
        }
        runs.push(Run::new(Sentinel::First.symbol(), 1));
        let seq = RleSeq {
            name: name.into(),
            runs,
            decoded_length: total + 1,
        };
        Ok((seq, merged))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// All runs, sentinel included.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Runs without the sentinel.
    pub fn body(&self) -> &[Run] {
        &self.runs[..self.runs.len() - 1]
    }

    /// Number of real runs (x′ for the query sequence).
    pub fn run_count(&self) -> usize {
        self.runs.len() - 1
    }

    /// Decoded length including the sentinel.
    pub fn decoded_length(&self) -> u64 {
        self.decoded_length
    }

    /// Decoded length of the body (x for the query sequence).
    pub fn text_length(&self) -> u64 {
        self.decoded_length - 1
    }

    pub fn sentinel(&self) -> Symbol {
        self.runs[self.runs.len() - 1].symbol
    }

    /// Returns a copy terminated by the given sentinel.
    pub fn with_sentinel(&self, sentinel: Sentinel) -> RleSeq {
        let mut seq = self.clone();
        let last = seq.runs.len() - 1;
        seq.runs[last].symbol = sentinel.symbol();
        seq
    }

    /// The body in the RLE text format, e.g. `a12 b3 a1`.
    pub fn to_rle_text(&self) -> String {
        let mut out = String::new();
        for (k, run) in self.body().iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push(Alphabet::render(run.symbol));
            out.push_str(&run.length.to_string());
        }
        out
    }
}

impl fmt::Display for RleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, ">{}\n{}", self.name, self.to_rle_text())
    }
}

/// Run-length encodes `text` and appends the sentinel.
pub fn encode(text: &[Symbol], name: impl Into<String>) -> Result<RleSeq> {
    if text.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut runs: Vec<Run> = Vec::new();
    for (position, &symbol) in text.iter().enumerate() {
        if symbol.is_sentinel() {
            return Err(Error::ReservedSymbol { position });
        }
        match runs.last_mut() {
            Some(last) if last.symbol == symbol => last.length += 1,
            _ => runs.push(Run::new(symbol, 1)),
        }
    }
    RleSeq::from_runs(name, runs).map(|(seq, _)| seq)
}

pub fn encode_bytes(text: &[u8], name: impl Into<String>) -> Result<RleSeq> {
    let symbols: Vec<Symbol> = text.iter().map(|&b| Alphabet::symbol(b)).collect();
    encode(&symbols, name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentinelMode {
    Strip,
    Keep,
}

/// Expands a sequence. Fails when the output would exceed `limit` symbols.
pub fn decode(seq: &RleSeq, mode: SentinelMode, limit: u64) -> Result<Vec<Symbol>> {
    let (runs, length) = match mode {
        SentinelMode::Strip => (seq.body(), seq.text_length()),
        SentinelMode::Keep => (seq.runs(), seq.decoded_length()),
    };
    if length > limit {
        return Err(Error::DecodeTooLarge { length, limit });
    }
    let mut out = Vec::with_capacity(length as usize);
    for run in runs {
        out.extend(std::iter::repeat_n(run.symbol, run.length as usize));
    }
    Ok(out)
}

/// Decodes the body back to bytes.
pub fn decode_bytes(seq: &RleSeq, limit: u64) -> Result<Vec<u8>> {
    Ok(decode(seq, SentinelMode::Strip, limit)?
        .into_iter()
        .map(|s| Alphabet::byte(s).unwrap_or(b'?'))
        .collect())
}

/// A non-fatal note produced while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub records: Vec<RleSeq>,
    pub warnings: Vec<ParseWarning>,
}

struct Record {
    name: String,
    line: usize,
    body: Vec<(usize, String)>,
}

fn split_records(reader: impl BufRead) -> Result<Vec<Record>> {
    let mut records: Vec<Record> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if let Some(header) = trimmed.strip_prefix('>') {
            let name = header.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "record header without a name".into(),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name));
            }
            records.push(Record {
                name,
                line: lineno,
                body: Vec::new(),
            });
        } else if !trimmed.is_empty() {
            match records.last_mut() {
                Some(rec) => rec.body.push((lineno, trimmed.to_string())),
                None => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "data before the first '>' header".into(),
                    })
                }
            }
        }
    }
    Ok(records)
}

fn parse_token(token: &str, line: usize) -> Result<Run> {
    let mut chars = token.chars();
    let symbol = chars.next().expect("tokens are non-empty");
    if !symbol.is_ascii_graphic() || symbol.is_ascii_digit() {
        return Err(Error::Parse {
            line,
            message: format!("invalid symbol in token {token:?}"),
        });
    }
    let count = chars.as_str();
    let length: u64 = count.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid count in token {token:?}"),
    })?;
    if length == 0 {
        return Err(Error::Parse {
            line,
            message: format!("count must be at least 1 in token {token:?}"),
        });
    }
    Ok(Run::new(Alphabet::symbol(symbol as u8), length))
}

/// Parses the RLE text format. Equal-symbol neighbours are merged and reported
/// as warnings.
pub fn parse_rle_text(reader: impl BufRead) -> Result<Parsed> {
    let mut parsed = Parsed::default();
    for rec in split_records(reader)? {
        let mut runs = Vec::new();
        for (line, text) in &rec.body {
            for token in text.split_whitespace() {
                runs.push(parse_token(token, *line)?);
            }
        }
        if runs.is_empty() {
            return Err(Error::EmptyRecord(rec.name));
        }
        let (seq, merged) = RleSeq::from_runs(rec.name.clone(), runs).map_err(|e| match e {
            Error::LengthOverflow => Error::Parse {
                line: rec.line,
                message: format!("record {} exceeds the maximum decoded length", rec.name),
            },
            other => other,
        })?;
        if merged > 0 {
            parsed.warnings.push(ParseWarning {
                line: rec.line,
                message: format!(
                    "record {}: merged {merged} adjacent run(s) with equal symbols",
                    rec.name
                ),
            });
        }
        parsed.records.push(seq);
    }
    Ok(parsed)
}

/// Parses FASTA; sequence lines of a record are concatenated.
pub fn parse_fasta(reader: impl BufRead) -> Result<Vec<RleSeq>> {
    let mut out = Vec::new();
    for rec in split_records(reader)? {
        let text: Vec<u8> = rec
            .body
            .iter()
            .flat_map(|(_, l)| l.bytes())
            .filter(|b| !b.is_ascii_whitespace())
            .collect();
        if text.is_empty() {
            return Err(Error::EmptyRecord(rec.name));
        }
        out.push(encode_bytes(&text, rec.name)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(c: char) -> Symbol {
        Alphabet::symbol(c as u8)
    }

    fn runs_of(seq: &RleSeq) -> Vec<(char, u64)> {
        seq.runs()
            .iter()
            .map(|r| (Alphabet::render(r.symbol), r.length))
            .collect()
    }

    #[test]
    fn encode_examples() {
        let s = encode_bytes(b"aab", "s").unwrap();
        assert_eq!(runs_of(&s), vec![('a', 2), ('b', 1), ('⊥', 1)]);
        assert_eq!(s.decoded_length(), 4);
        assert_eq!(s.text_length(), 3);
        assert_eq!(s.run_count(), 2);

        let s = encode_bytes(b"abc", "s").unwrap();
        assert_eq!(runs_of(&s), vec![('a', 1), ('b', 1), ('c', 1), ('⊥', 1)]);

        let s = encode_bytes(b"aaaa", "s").unwrap();
        assert_eq!(runs_of(&s), vec![('a', 4), ('⊥', 1)]);
    }

    #[test]
    fn encode_errors() {
        assert!(matches!(encode(&[], "e"), Err(Error::EmptySequence)));
        assert!(matches!(
            encode(&[sym('a'), Symbol(1)], "e"),
            Err(Error::ReservedSymbol { position: 1 })
        ));
    }

    #[test]
    fn decode_examples() {
        let seq = |runs: &[(char, u64)]| {
            RleSeq::from_runs("d", runs.iter().map(|&(c, n)| Run::new(sym(c), n)))
                .unwrap()
                .0
        };
        assert_eq!(
            decode_bytes(&seq(&[('a', 2), ('b', 1)]), 100).unwrap(),
            b"aab"
        );
        assert_eq!(decode_bytes(&seq(&[('a', 1)]), 100).unwrap(), b"a");
        assert_eq!(
            decode_bytes(&seq(&[('b', 3), ('a', 2)]), 100).unwrap(),
            b"bbbaa"
        );
        let kept = decode(&seq(&[('a', 1)]), SentinelMode::Keep, 100).unwrap();
        assert_eq!(kept, vec![sym('a'), Symbol(0)]);
        assert!(matches!(
            decode_bytes(&seq(&[('a', 1000)]), 10),
            Err(Error::DecodeTooLarge {
                length: 1000,
                limit: 10
            })
        ));
    }

    #[test]
    fn length_cap() {
        let runs = [
            Run::new(sym('a'), MAX_DECODED_LEN - 2),
            Run::new(sym('b'), 1),
        ];
        assert!(RleSeq::from_runs("ok", runs).is_ok());
        let runs = [
            Run::new(sym('a'), MAX_DECODED_LEN - 1),
            Run::new(sym('b'), 1),
        ];
        assert!(matches!(
            RleSeq::from_runs("big", runs),
            Err(Error::LengthOverflow)
        ));
    }

    #[test]
    fn sentinels_order_below_alphabet() {
        for b in 0..=255u8 {
            assert!(Symbol(0) < Alphabet::symbol(b));
            assert!(Symbol(1) < Alphabet::symbol(b));
        }
        assert_ne!(Sentinel::First.symbol(), Sentinel::Second.symbol());
        let s = encode_bytes(b"ab", "s")
            .unwrap()
            .with_sentinel(Sentinel::Second);
        assert_eq!(s.sentinel(), Symbol(1));
    }

    #[test]
    fn rle_text_examples() {
        let p = parse_rle_text(">s1\na2 b1".as_bytes()).unwrap();
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.records[0].name(), "s1");
        assert_eq!(runs_of(&p.records[0]), vec![('a', 2), ('b', 1), ('⊥', 1)]);
        assert!(p.warnings.is_empty());

        let p = parse_rle_text(">s1\na2 a3".as_bytes()).unwrap();
        assert_eq!(runs_of(&p.records[0]), vec![('a', 5), ('⊥', 1)]);
        assert_eq!(p.warnings.len(), 1);

        match parse_rle_text(">s1\na0".as_bytes()) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rle_text_errors() {
        for bad in [
            ">s\nax",
            ">s\na-1",
            ">s\n3a",
            ">s\na",
            "a1",
            ">s\na99999999999999999999",
        ] {
            assert!(
                matches!(parse_rle_text(bad.as_bytes()), Err(Error::Parse { .. })),
                "{bad:?} should fail to parse"
            );
        }
        assert!(matches!(
            parse_rle_text(">s\na1\n>s\nb1".as_bytes()),
            Err(Error::DuplicateName(n)) if n == "s"
        ));
        assert!(matches!(
            parse_rle_text(">s\n\n>t\na1".as_bytes()),
            Err(Error::EmptyRecord(n)) if n == "s"
        ));
    }

    #[test]
    fn rle_text_multiline_and_round_trip() {
        let p = parse_rle_text(">s1 description\na12 b3\n a1\n>s2\nc4".as_bytes()).unwrap();
        assert_eq!(p.records[0].to_rle_text(), "a12 b3 a1");
        assert_eq!(p.records[1].name(), "s2");
        let again = parse_rle_text(p.records[0].to_string().as_bytes()).unwrap();
        assert_eq!(again.records[0], p.records[0]);
    }

    #[test]
    fn fasta_examples() {
        let r = parse_fasta(">r\nAAB".as_bytes()).unwrap();
        assert_eq!(runs_of(&r[0]), vec![('A', 2), ('B', 1), ('⊥', 1)]);
        let r = parse_fasta(">r\nAA\nB".as_bytes()).unwrap();
        assert_eq!(runs_of(&r[0]), vec![('A', 2), ('B', 1), ('⊥', 1)]);
        match parse_fasta(">r\n".as_bytes()) {
            Err(e @ Error::EmptyRecord(_)) => assert_eq!(e.to_string(), "empty record r"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_fasta(">r\nA\n>r\nC".as_bytes()),
            Err(Error::DuplicateName(_))
        ));
    }
}
