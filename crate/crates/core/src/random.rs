//! Random generators for property checks and fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::enumerate::letters_within;
use crate::word::{Ctx, Letter, Word};

/// A uniformly chosen nonidentity letter, exponents in `[-2, 2]` for `Z` factors.
pub fn random_letter<R: Rng>(ctx: &Ctx, rng: &mut R) -> Letter {
    *letters_within(ctx, 2)
        .choose(rng)
        .expect("every factor is nontrivial")
}

/// A reduced word of length uniform in `0..=max_len`.
pub fn random_word<R: Rng>(ctx: &Ctx, rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let pool = letters_within(ctx, 2);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = *pool.choose(rng).expect("every factor is nontrivial");
        if letters.last().is_some_and(|p| p.factor == l.factor) {
            continue;
        }
        letters.push(l);
    }
    Word::from_reduced(ctx, letters)
}

/// A cyclically reduced word of length in `2..=max_len`, if `max_len ≥ 2`.
pub fn random_cyclic_word<R: Rng>(ctx: &Ctx, rng: &mut R, max_len: usize) -> Option<Word> {
    if max_len < 2 || ctx.len() < 2 {
        return None;
    }
    loop {
        let w = random_word(ctx, rng, max_len);
        if w.is_cyclically_reduced() {
            return Some(w);
        }
    }
}
