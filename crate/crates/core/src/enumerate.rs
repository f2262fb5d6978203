//! Enumeration of bounded reduced words.

use crate::word::{least_rotation, Ctx, Letter, Word, WordBounds};

/// Every nonidentity letter of every factor, exponents bounded in `Z` factors.
pub fn letters_within(ctx: &Ctx, max_exp: i64) -> Vec<Letter> {
    let mut out = Vec::new();
    for (f, spec) in ctx.factors().iter().enumerate() {
        match spec.order() {
            crate::word::Order::Finite(n) => {
                out.extend((1..n as i64).map(|e| Letter::new(f, e)));
            }
            crate::word::Order::Infinite => {
                for e in 1..=max_exp {
                    out.push(Letter::new(f, -e));
                    out.push(Letter::new(f, e));
                }
            }
        }
    }
    out.sort();
    out
}

/// All reduced words within `bounds`, in shortlex order.
pub fn words_within(ctx: &Ctx, bounds: WordBounds) -> Vec<Word> {
    words_filtered(ctx, bounds, |_| true)
}

/// Reduced words within `bounds` whose last letter satisfies `last_ok`
/// (the empty word is always included).
pub fn words_filtered(
    ctx: &Ctx,
    bounds: WordBounds,
    last_ok: impl Fn(&Letter) -> bool,
) -> Vec<Word> {
    let alphabet = letters_within(ctx, bounds.max_exp);
    let mut out = vec![Word::identity(ctx)];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..bounds.max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                if w.last().is_some_and(|p| p.factor == l.factor) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(
            next.iter()
                .filter(|v| last_ok(v.last().unwrap()))
                .map(|v| Word::from_reduced(ctx, v.clone())),
        );
        layer = next;
    }
    out
}

/// Cyclically reduced words of length `2..=max_len` within bounds, one per
/// rotation class (the least rotation).
pub fn cyclic_words_within(ctx: &Ctx, bounds: WordBounds) -> Vec<Word> {
    let mut out: Vec<Word> = words_within(ctx, bounds)
        .into_iter()
        .filter(|w| {
            w.len() >= 2 && w.is_cyclically_reduced() && least_rotation(w.letters()) == w.letters()
        })
        .collect();
    out.sort();
    out
}

/// Cyclically reduced least-rotation words of length `2..=max_len` whose
/// exponent sum in factor `f` equals `target[f]` wherever that is `Some`.
pub fn cyclic_words_with_sums(ctx: &Ctx, bounds: WordBounds, target: &[Option<i64>]) -> Vec<Word> {
    let alphabet = letters_within(ctx, bounds.max_exp);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut sums = vec![0i64; ctx.len()];
    fn rec(
        ctx: &Ctx,
        bounds: WordBounds,
        target: &[Option<i64>],
        alphabet: &[Letter],
        cur: &mut Vec<Letter>,
        sums: &mut Vec<i64>,
        out: &mut Vec<Word>,
    ) {
        let remaining = (bounds.max_len - cur.len()) as i64 * bounds.max_exp;
        let reachable = target
            .iter()
            .zip(sums.iter())
            .all(|(t, s)| t.is_none_or(|t| (t - s).abs() <= remaining));
        if !reachable {
            return;
        }
        if cur.len() >= 2
            && cur[0].factor != cur[cur.len() - 1].factor
            && target
                .iter()
                .zip(sums.iter())
                .all(|(t, s)| t.is_none_or(|t| t == *s))
            && least_rotation(cur) == *cur
        {
            out.push(Word::from_reduced(ctx, cur.clone()));
        }
        if cur.len() == bounds.max_len {
            return;
        }
        for &l in alphabet {
            if cur.last().is_some_and(|p| p.factor == l.factor) {
                continue;
            }
            cur.push(l);
            sums[l.factor] += l.exp;
            rec(ctx, bounds, target, alphabet, cur, sums, out);
            sums[l.factor] -= l.exp;
            cur.pop();
        }
    }
    rec(
        ctx, bounds, target, &alphabet, &mut cur, &mut sums, &mut out,
    );
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Context;

    #[test]
    fn counts_match_closed_form() {
        // Z*Z, |exp| <= 2: 4 choices per letter, factors alternate
        let ctx = Context::parse("Z,Z").unwrap();
        let ws = words_within(&ctx, WordBounds::radius(2));
        // 1 + 8 + 8*4
        assert_eq!(ws.len(), 1 + 8 + 32);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));

        let d = Context::parse("Z2,Z2").unwrap();
        assert_eq!(words_within(&d, WordBounds::radius(4)).len(), 1 + 2 * 4);
    }

    #[test]
    fn cyclic_classes() {
        let ctx = Context::parse("Z2,Z2").unwrap();
        let cs = cyclic_words_within(&ctx, WordBounds::radius(4));
        let shown: Vec<String> = cs.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["a b", "a b a b"]);
    }

    #[test]
    fn sum_constrained_classes_match_filter() {
        let ctx = Context::parse("Z,Z3").unwrap();
        let bounds = WordBounds::radius(4);
        let target = [Some(2), None];
        let mut expect: Vec<Word> = cyclic_words_within(&ctx, bounds)
            .into_iter()
            .filter(|w| w.exponent_sums()[0] == 2)
            .collect();
        expect.sort();
        assert_eq!(cyclic_words_with_sums(&ctx, bounds, &target), expect);
        assert!(!expect.is_empty());
    }
}
