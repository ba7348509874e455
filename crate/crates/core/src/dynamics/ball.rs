use alloc::vec::Vec;

use crate::word::{Letter, Word};
use crate::Error;

/// Default cap on the number of enumerated words.
pub const DEFAULT_WORD_CAP: usize = 10_000_000;

/// Number of freely reduced words of length ≤ `max_len` on `rank` generators:
/// `1 + Σ_{k=1..L} 2r(2r−1)^{k−1}`. Saturates at `u128::MAX`.
pub fn ball_size(rank: usize, max_len: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let r = rank as u128;
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * r;
    for _ in 0..max_len {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(2 * r - 1);
    }
    total
}

/// All freely reduced words of length ≤ `max_len`, each once, in shortlex
/// order.
pub fn enumerate_reduced_words(rank: usize, max_len: usize, cap: usize) -> Result<Vec<Word>, Error> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1"));
    }
    let size = ball_size(rank, max_len);
    if size > cap as u128 {
        return Err(Error::BudgetExceeded { what: "reduced words", cap });
    }
    let mut out = Vec::with_capacity(size as usize);
    out.push(Word::empty());
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = out.len();
        // Extending each word of the previous level on the right, in letter
        // order, keeps every level lexicographically sorted.
        for i in level_start..level_end {
            for key in 0..2 * rank {
                let letter = Letter::from_rank_key(key);
                if out[i].letters().last() == Some(&letter.inverted()) {
                    continue;
                }
                let next = out[i].push(letter);
                out.push(next);
            }
        }
        level_start = level_end;
    }
    Ok(out)
}
