//! Shared inputs for the criterion benches.

use grig_core::{OmegaSeq, Word};

/// A deterministic batch of reduced words of length `len`.
pub fn word_batch(len: usize, count: usize) -> Vec<Word> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    (0..count)
        .map(|_| {
            let raw: String = (0..len)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (b'a' + (state % 4) as u8) as char
                })
                .collect();
            Word::parse(&raw).expect("letters a-d")
        })
        .collect()
}

pub fn first_grigorchuk() -> OmegaSeq {
    OmegaSeq::periodic(&[0, 1, 2])
}
