//! The 47-symbol text alphabet and block codec.
//!
//! Residues 0..25 are 'A'..'Z', 26..35 are '0'..'9', 36 is '>', and
//! 37..46 are `< ? @ ! # $ % & * +` in that order. Short final blocks are
//! padded with '+' (residue 46); the pad count travels in the message
//! envelope so decryption strips exactly what was added.

use crate::error::{Error, Result};

/// Residue used to pad the final short block ('+').
pub const PAD_RESIDUE: u64 = 46;

const SYMBOLS: [char; 47] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L', 'M', 'N', 'O', 'P', 'Q', 'R',
    'S', 'T', 'U', 'V', 'W', 'X', 'Y', 'Z', '0', '1', '2', '3', '4', '5', '6', '7', '8', '9',
    '>', '<', '?', '@', '!', '#', '$', '%', '&', '*', '+',
];

/// Fixed bijection between the 47 symbols and residues modulo 47.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SymbolCodec;

impl SymbolCodec {
    /// Number of symbols; also the only modulus text mode supports.
    pub fn modulus(&self) -> u64 {
        SYMBOLS.len() as u64
    }

    pub fn residue(&self, symbol: char) -> Option<u64> {
        match symbol {
            'A'..='Z' => Some(symbol as u64 - 'A' as u64),
            '0'..='9' => Some(26 + symbol as u64 - '0' as u64),
            _ => SYMBOLS[36..]
                .iter()
                .position(|&s| s == symbol)
                .map(|i| 36 + i as u64),
        }
    }

    pub fn symbol(&self, residue: u64) -> Option<char> {
        SYMBOLS.get(usize::try_from(residue).ok()?).copied()
    }
}

/// Encode text into residue blocks of length `block_len`, uppercasing ASCII
/// letters first and padding the final short block with '+'.
///
/// Returns the blocks and the number of pad residues appended (always less
/// than `block_len`; zero for the empty string, which yields no blocks).
pub fn encode_text(
    text: &str,
    codec: &SymbolCodec,
    block_len: usize,
) -> Result<(Vec<Vec<u64>>, usize)> {
    assert!(block_len > 0, "block length must be positive");
    let mut residues = Vec::with_capacity(text.chars().count());
    for (position, ch) in text.chars().enumerate() {
        let upper = ch.to_ascii_uppercase();
        let r = codec
            .residue(upper)
            .ok_or(Error::UnsupportedSymbol { symbol: ch, position })?;
        residues.push(r);
    }
    let pad_count = match residues.len() % block_len {
        0 => 0,
        rem => block_len - rem,
    };
    residues.extend(std::iter::repeat(PAD_RESIDUE).take(pad_count));
    let blocks = residues.chunks(block_len).map(|b| b.to_vec()).collect();
    Ok((blocks, pad_count))
}

/// Decode residue blocks back into text, stripping `pad_count` trailing pad
/// symbols.
pub fn decode_blocks(
    blocks: &[Vec<u64>],
    pad_count: usize,
    codec: &SymbolCodec,
) -> Result<String> {
    let mut out = String::new();
    let total: usize = blocks.iter().map(Vec::len).sum();
    for (i, &r) in blocks.iter().flatten().enumerate() {
        if i >= total - pad_count {
            break;
        }
        let ch = codec.symbol(r).ok_or(Error::EntryOutOfRange {
            entry: r,
            modulus: codec.modulus(),
        })?;
        out.push(ch);
    }
    Ok(out)
}
