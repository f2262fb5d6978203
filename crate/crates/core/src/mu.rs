//! The embedding of a multi-factor free product into a two-factor one.
//!
//! The target is `A * B` where `A` is the source free product itself, kept
//! opaque, and `B` is free on one generator `b_α` per source factor. A letter
//! `g` of factor `α` maps to `b_α⁻¹ g b_α`.

use std::fmt;
use std::sync::Arc;

use crate::word::{Context, Ctx, FactorSpec, Letter, Order, Word};

/// The target free product `A * B`.
#[derive(Debug, PartialEq, Eq)]
pub struct MuContext {
    source: Ctx,
    free: Ctx,
}

impl MuContext {
    pub fn new(source: &Ctx) -> Arc<MuContext> {
        let free = Context::new(
            vec![FactorSpec::infinite(); source.len()],
            source.names().iter().map(|n| format!("b_{n}")).collect(),
        )
        .expect("source names are valid identifiers");
        Arc::new(MuContext {
            source: source.clone(),
            free,
        })
    }

    pub fn source(&self) -> &Ctx {
        &self.source
    }

    /// The free group `B`.
    pub fn free(&self) -> &Ctx {
        &self.free
    }
}

/// A letter of `A * B`: a nonidentity element of one of the two factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MuLetter {
    A(Word),
    B(Word),
}

impl MuLetter {
    fn side(&self) -> u8 {
        match self {
            MuLetter::A(_) => 0,
            MuLetter::B(_) => 1,
        }
    }

    fn element(&self) -> &Word {
        match self {
            MuLetter::A(w) | MuLetter::B(w) => w,
        }
    }

    fn with(&self, w: Word) -> MuLetter {
        match self {
            MuLetter::A(_) => MuLetter::A(w),
            MuLetter::B(_) => MuLetter::B(w),
        }
    }

    pub fn order(&self) -> Order {
        match self {
            MuLetter::A(w) => w.order(),
            MuLetter::B(_) => Order::Infinite,
        }
    }
}

/// A reduced word over `A * B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuWord {
    ctx: Arc<MuContext>,
    letters: Vec<MuLetter>,
}

fn push(stack: &mut Vec<MuLetter>, l: MuLetter) {
    if l.element().is_empty() {
        return;
    }
    if let Some(top) = stack.last_mut() {
        if top.side() == l.side() {
            let merged = top.element().mul_unchecked(l.element());
            if merged.is_empty() {
                stack.pop();
            } else {
                *top = top.with(merged);
            }
            return;
        }
    }
    stack.push(l);
}

impl MuWord {
    pub fn normalize(ctx: &Arc<MuContext>, raw: impl IntoIterator<Item = MuLetter>) -> MuWord {
        let mut stack = Vec::new();
        for l in raw {
            push(&mut stack, l);
        }
        MuWord {
            ctx: ctx.clone(),
            letters: stack,
        }
    }

    pub fn letters(&self) -> &[MuLetter] {
        &self.letters
    }

    /// Length in letters of `A * B`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length counting each `A` letter once and each `b` generator occurrence once.
    pub fn symbol_len(&self) -> usize {
        self.letters
            .iter()
            .map(|l| match l {
                MuLetter::A(_) => 1,
                MuLetter::B(w) => w.len(),
            })
            .sum()
    }

    pub fn multiply(&self, other: &MuWord) -> MuWord {
        MuWord::normalize(
            &self.ctx,
            self.letters.iter().chain(&other.letters).cloned(),
        )
    }

    pub fn inverse(&self) -> MuWord {
        MuWord {
            ctx: self.ctx.clone(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| l.with(l.element().inverse()))
                .collect(),
        }
    }

    /// Nonidentity letters with neighbours in distinct factors.
    pub fn is_reduced(&self) -> bool {
        self.letters.iter().all(|l| !l.element().is_empty())
            && self.letters.windows(2).all(|p| p[0].side() != p[1].side())
    }

    /// Cyclically reduced conjugate.
    pub fn cyclic_core(&self) -> MuWord {
        let l = &self.letters;
        if l.len() <= 1 {
            return self.clone();
        }
        let (mut i, mut j) = (0usize, l.len() - 1);
        while i < j && l[i].side() == l[j].side() {
            let merged = l[j].element().mul_unchecked(l[i].element());
            if merged.is_empty() {
                i += 1;
                j -= 1;
                continue;
            }
            let mut core = l[i + 1..j].to_vec();
            core.push(l[i].with(merged));
            return MuWord {
                ctx: self.ctx.clone(),
                letters: core,
            };
        }
        MuWord {
            ctx: self.ctx.clone(),
            letters: l[i..=j].to_vec(),
        }
    }

    /// Whether the element is conjugate into `A ∪ B`.
    pub fn is_conjugate_into_factor(&self) -> bool {
        self.cyclic_core().len() <= 1
    }

    /// Finite orders among the letters of the cyclic core, with multiplicity, ascending.
    pub fn finite_letter_orders(&self) -> Vec<u64> {
        finite_sorted(self.cyclic_core().letters.iter().map(MuLetter::order))
    }
}

/// Finite orders among the letters of the cyclic core of `u`, with
/// multiplicity, ascending.
pub fn finite_letter_orders(u: &Word) -> Vec<u64> {
    let core = u.cyclic_reduce().core;
    let ctx = u.context();
    finite_sorted(
        core.letters()
            .iter()
            .map(|l| ctx.factor(l.factor).element_order(l.exp)),
    )
}

fn finite_sorted(orders: impl Iterator<Item = Order>) -> Vec<u64> {
    let mut out: Vec<u64> = orders
        .filter_map(|o| match o {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        })
        .collect();
    out.sort_unstable();
    out
}

/// `μ(u)`: each letter `g ∈ G_α` becomes `b_α⁻¹ g b_α`.
pub fn embed_mu(u: &Word) -> MuWord {
    let ctx = MuContext::new(u.context());
    embed_mu_in(&ctx, u)
}

pub fn embed_mu_in(ctx: &Arc<MuContext>, u: &Word) -> MuWord {
    let mut raw = Vec::with_capacity(3 * u.len());
    for &l in u.letters() {
        let b = Word::normalize(&ctx.free, [Letter::new(l.factor, 1)]).unwrap();
        raw.push(MuLetter::B(b.inverse()));
        raw.push(MuLetter::A(Word::from_reduced(&ctx.source, vec![l])));
        raw.push(MuLetter::B(b));
    }
    MuWord::normalize(ctx, raw)
}

impl fmt::Display for MuWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                MuLetter::A(w) => format!("[{w}]"),
                MuLetter::B(w) => w.to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_image() {
        let ctx = Context::parse("Z,Z,Z3").unwrap();
        let g = Word::parse(&ctx, "a^2").unwrap();
        let m = embed_mu(&g);
        assert_eq!(m.to_string(), "b_a^-1 [a^2] b_a");
        assert!(embed_mu(&Word::identity(&ctx)).is_empty());
    }

    #[test]
    fn two_letter_image_is_reduced() {
        let ctx = Context::parse("Z,Z").unwrap();
        let gh = Word::parse(&ctx, "a b").unwrap();
        let m = embed_mu(&gh);
        assert!(m.is_reduced());
        assert_eq!(m.to_string(), "b_a^-1 [a] b_a b_b^-1 [b] b_b");
        // five letters of A*B, six generator symbols
        assert_eq!(m.len(), 5);
        assert_eq!(m.symbol_len(), 6);
    }

    #[test]
    fn homomorphism_on_products() {
        let ctx = Context::parse("Z,Z3,Z").unwrap();
        let mctx = MuContext::new(&ctx);
        let u = Word::parse(&ctx, "a b c^-1").unwrap();
        let v = Word::parse(&ctx, "c b^2 a").unwrap();
        let lhs = embed_mu_in(&mctx, &u.multiply(&v).unwrap());
        let rhs = embed_mu_in(&mctx, &u).multiply(&embed_mu_in(&mctx, &v));
        assert_eq!(lhs, rhs);
        assert!(embed_mu_in(&mctx, &u)
            .multiply(&embed_mu_in(&mctx, &u).inverse())
            .is_empty());
    }
}
