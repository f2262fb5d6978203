//! Conjugators, centralizers and roots in a free product of cyclic groups.

use crate::word::{rotation_offset, Order, Word, WordBounds};

/// Some `g` with `g · u · g⁻¹ = v`, if `u` and `v` are conjugate.
pub fn find_conjugator(u: &Word, v: &Word) -> Option<Word> {
    let cu = u.cyclic_reduce();
    let cv = v.cyclic_reduce();
    if cu.core.len() != cv.core.len() {
        return None;
    }
    let rot = if cu.core.len() <= 1 {
        if cu.core != cv.core {
            return None;
        }
        Word::identity(u.context())
    } else {
        let k = rotation_offset(cu.core.letters(), cv.core.letters())?;
        // core_v = P⁻¹ core_u P with P the length-k prefix of core_u
        Word::from_reduced(u.context(), cu.core.letters()[..k].to_vec()).inverse()
    };
    Some(
        cv.conjugator
            .mul_unchecked(&rot)
            .mul_unchecked(&cu.conjugator.inverse()),
    )
}

/// The centralizer of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Centralizer {
    /// The element is trivial.
    Everything,
    /// A cyclic subgroup generated by `generator`.
    Cyclic { generator: Word, order: Order },
}

/// Shortest `p` with `core = p^k` (for a cyclically reduced `core`).
pub fn primitive_root(core: &Word) -> (Word, usize) {
    let l = core.letters();
    let n = l.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| l[i] == l[i - p]) {
            return (Word::from_reduced(core.context(), l[..p].to_vec()), n / p);
        }
    }
    (core.clone(), 1)
}

pub fn centralizer(u: &Word) -> Centralizer {
    let c = u.cyclic_reduce();
    let ctx = u.context();
    match c.core.letters() {
        [] => Centralizer::Everything,
        [l] => {
            let gen = Word::letter(ctx, l.factor, 1).expect("valid factor");
            Centralizer::Cyclic {
                generator: gen.conjugated_by_left(&c.conjugator),
                order: ctx.factor(l.factor).order(),
            }
        }
        _ => {
            let (root, _) = primitive_root(&c.core);
            Centralizer::Cyclic {
                generator: root.conjugated_by_left(&c.conjugator),
                order: Order::Infinite,
            }
        }
    }
}

fn exp_mass(w: &Word) -> i64 {
    w.letters().iter().map(|l| l.exp.abs()).sum()
}

/// Every `g` within `bounds` such that `g · u · g⁻¹ = v`, in shortlex order.
///
/// When `u` is trivial only the identity is returned (every word would do).
pub fn conjugators_within(u: &Word, v: &Word, bounds: WordBounds) -> Vec<Word> {
    let Some(g0) = find_conjugator(u, v) else {
        return Vec::new();
    };
    let mut out: Vec<Word> = match centralizer(u) {
        Centralizer::Everything => vec![Word::identity(u.context())],
        Centralizer::Cyclic { generator, order } => {
            let js: Vec<i64> = match order {
                Order::Finite(n) => (0..n as i64).collect(),
                Order::Infinite => {
                    let gc = generator.cyclic_reduce();
                    let window = if gc.core.len() >= 2 {
                        (bounds.max_len + g0.len() + 2 * gc.conjugator.len() + 2) / gc.core.len()
                            + 1
                    } else {
                        (bounds.max_exp + exp_mass(&g0) + 2 * exp_mass(&gc.conjugator) + 1) as usize
                    } as i64;
                    (-window..=window).collect()
                }
            };
            js.into_iter()
                .map(|j| g0.mul_unchecked(&generator.pow(j)))
                .filter(|g| g.within(bounds))
                .collect()
        }
    };
    out.sort();
    out.dedup();
    out
}

/// The shortlex-least conjugator within bounds.
pub fn least_conjugator_within(u: &Word, v: &Word, bounds: WordBounds) -> Option<Word> {
    conjugators_within(u, v, bounds).into_iter().next()
}
