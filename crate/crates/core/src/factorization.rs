//! Mixed commutator factorizations, quasiperiodic factorizations and the
//! bounded searches that produce them.
//!
//! Search results are bounds, not exact invariants: a mixed witness of score
//! `s` shows `mg(w) <= s`, a quasiperiodic witness of score `r` shows
//! `pos(w) >= r`. "Absent" means no witness exists whose component words
//! have length at most `radius` and exponents (in `Z` factors) at most
//! `radius` in absolute value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conjugacy::conjugators_within;
use crate::enumerate::{cyclic_words_with_sums, letters_within, words_within};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::word::{
    commutator_unchecked, is_conjugate_unchecked, reduce_sums, same_ctx, Context, Ctx, Letter,
    Order, Word, WordBounds,
};

/// `w = [x_1, y_1] … [x_k, y_k] · s_1 d_1 s_1⁻¹ … s_ℓ d_ℓ s_ℓ⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedFactorization {
    ctx: Ctx,
    commutators: Vec<(Word, Word)>,
    conjugated_letters: Vec<(Word, Letter)>,
}

impl MixedFactorization {
    pub fn new(
        ctx: &Ctx,
        commutators: Vec<(Word, Word)>,
        conjugated_letters: Vec<(Word, Letter)>,
    ) -> Result<Self> {
        for (x, y) in &commutators {
            if !same_ctx(ctx, x.context()) || !same_ctx(ctx, y.context()) {
                return Err(Error::ContextMismatch);
            }
        }
        for (s, d) in &conjugated_letters {
            if !same_ctx(ctx, s.context()) {
                return Err(Error::ContextMismatch);
            }
            check_letter(ctx, *d)?;
        }
        Ok(MixedFactorization {
            ctx: ctx.clone(),
            commutators,
            conjugated_letters,
        })
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn commutators(&self) -> &[(Word, Word)] {
        &self.commutators
    }

    pub fn conjugated_letters(&self) -> &[(Word, Letter)] {
        &self.conjugated_letters
    }

    pub fn k(&self) -> usize {
        self.commutators.len()
    }

    pub fn l(&self) -> usize {
        self.conjugated_letters.len()
    }

    /// `2k + ℓ`.
    pub fn score(&self) -> u32 {
        (2 * self.k() + self.l()) as u32
    }

    /// Total letter length of all component words.
    pub fn total_len(&self) -> usize {
        self.commutators
            .iter()
            .map(|(x, y)| x.len() + y.len())
            .chain(self.conjugated_letters.iter().map(|(s, _)| s.len()))
            .sum()
    }

    pub fn evaluate(&self) -> Result<Word> {
        let mut acc = Word::identity(&self.ctx);
        for (x, y) in &self.commutators {
            acc = acc.mul_unchecked(&commutator_unchecked(x, y));
        }
        for (s, d) in &self.conjugated_letters {
            check_letter(&self.ctx, *d)?;
            acc = acc.mul_unchecked(&conj_letter(&self.ctx, s, *d));
        }
        Ok(acc)
    }

    pub fn to_repr(&self) -> MixedRepr {
        MixedRepr {
            factors: self.ctx.spec_string(),
            commutators: self
                .commutators
                .iter()
                .map(|(x, y)| [x.to_string(), y.to_string()])
                .collect(),
            conjugated_letters: self
                .conjugated_letters
                .iter()
                .map(|(s, d)| [s.to_string(), letter_word(&self.ctx, *d).to_string()])
                .collect(),
            k: self.k(),
            l: self.l(),
            score: self.score(),
        }
    }

    pub fn from_repr(repr: &MixedRepr) -> Result<Self> {
        let ctx = Context::parse(&repr.factors)?;
        let commutators = repr
            .commutators
            .iter()
            .map(|[x, y]| Ok((Word::parse(&ctx, x)?, Word::parse(&ctx, y)?)))
            .collect::<Result<Vec<_>>>()?;
        let conjugated_letters = repr
            .conjugated_letters
            .iter()
            .map(|[s, d]| {
                let d = Word::parse(&ctx, d)?;
                match d.letters() {
                    [l] => Ok((Word::parse(&ctx, s)?, *l)),
                    _ => Err(Error::InvalidWitness(format!(
                        "`{d}` is not a single nonidentity letter"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        MixedFactorization::new(&ctx, commutators, conjugated_letters)
    }
}

/// Serialized form of a [`MixedFactorization`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedRepr {
    pub factors: String,
    pub commutators: Vec<[String; 2]>,
    pub conjugated_letters: Vec<[String; 2]>,
    #[serde(default)]
    pub k: usize,
    #[serde(default)]
    pub l: usize,
    #[serde(default)]
    pub score: u32,
}

impl fmt::Display for MixedFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .commutators
            .iter()
            .map(|(x, y)| format!("[{x}, {y}]"))
            .collect();
        parts.extend(
            self.conjugated_letters
                .iter()
                .map(|(s, d)| format!("<{s} | {}>", letter_word(&self.ctx, *d))),
        );
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" * "))
    }
}

fn check_letter(ctx: &Ctx, d: Letter) -> Result<()> {
    if d.factor >= ctx.len() {
        return Err(Error::InvalidFactor {
            index: d.factor,
            count: ctx.len(),
        });
    }
    if ctx.factor(d.factor).canonical_exponent(d.exp) != Some(d.exp) {
        return Err(Error::InvalidWitness(format!(
            "conjugated letter {}^{} is the identity or not canonical",
            ctx.name(d.factor),
            d.exp
        )));
    }
    Ok(())
}

fn letter_word(ctx: &Ctx, d: Letter) -> Word {
    Word::from_reduced(ctx, vec![d])
}

fn conj_letter(ctx: &Ctx, s: &Word, d: Letter) -> Word {
    letter_word(ctx, d).conjugated_by_left(s)
}

/// `w = (s_1 h s_1⁻¹)^{n_1} … (s_m h s_m⁻¹)^{n_m}` with `h` not conjugate into a factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiperiodicFactorization {
    base: Word,
    conjugators: Vec<Word>,
    exponents: Vec<u32>,
}

impl QuasiperiodicFactorization {
    pub fn new(base: Word, conjugators: Vec<Word>, exponents: Vec<u32>) -> Result<Self> {
        if conjugators.is_empty() || conjugators.len() != exponents.len() {
            return Err(Error::InvalidWitness(
                "need m >= 1 conjugators and one exponent per conjugator".into(),
            ));
        }
        if exponents.contains(&0) {
            return Err(Error::InvalidWitness("exponents must be positive".into()));
        }
        if base.conjugate_into_factor().is_some() {
            return Err(Error::InvalidWitness(format!(
                "base `{base}` is conjugate into a free factor"
            )));
        }
        if conjugators
            .iter()
            .any(|s| !same_ctx(s.context(), base.context()))
        {
            return Err(Error::ContextMismatch);
        }
        Ok(QuasiperiodicFactorization {
            base,
            conjugators,
            exponents,
        })
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn m(&self) -> usize {
        self.exponents.len()
    }

    /// `Σ (n_j − 1)`.
    pub fn score(&self) -> u32 {
        self.exponents.iter().map(|n| n - 1).sum()
    }

    pub fn total_len(&self) -> usize {
        self.base.len() + self.conjugators.iter().map(Word::len).sum::<usize>()
    }

    /// The factors `h_j = s_j h s_j⁻¹`.
    pub fn factors(&self) -> Vec<(Word, u32)> {
        self.conjugators
            .iter()
            .zip(&self.exponents)
            .map(|(s, &n)| (self.base.conjugated_by_left(s), n))
            .collect()
    }

    pub fn evaluate(&self) -> Result<Word> {
        if self.base.conjugate_into_factor().is_some() {
            return Err(Error::InvalidWitness(
                "base is conjugate into a factor".into(),
            ));
        }
        Ok(self
            .factors()
            .iter()
            .fold(Word::identity(self.base.context()), |acc, (h, n)| {
                acc.mul_unchecked(&h.pow(*n as i64))
            }))
    }

    pub fn to_repr(&self) -> QuasiRepr {
        QuasiRepr {
            factors: self.base.context().spec_string(),
            base: self.base.to_string(),
            conjugators: self.conjugators.iter().map(Word::to_string).collect(),
            exponents: self.exponents.clone(),
            score: self.score(),
        }
    }

    pub fn from_repr(repr: &QuasiRepr) -> Result<Self> {
        let ctx = Context::parse(&repr.factors)?;
        let base = Word::parse(&ctx, &repr.base)?;
        let conjugators = repr
            .conjugators
            .iter()
            .map(|s| Word::parse(&ctx, s))
            .collect::<Result<Vec<_>>>()?;
        QuasiperiodicFactorization::new(base, conjugators, repr.exponents.clone())
    }
}

/// Serialized form of a [`QuasiperiodicFactorization`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiRepr {
    pub factors: String,
    pub base: String,
    pub conjugators: Vec<String>,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub score: u32,
}

impl fmt::Display for QuasiperiodicFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .conjugators
            .iter()
            .zip(&self.exponents)
            .map(|(s, n)| format!("<{s} | {}>^{n}", self.base))
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

// ---------------------------------------------------------------------------
// Theorem instances

/// Both sides of `c_1…c_k d_1…d_ℓ = h_1^{n_1}…h_m^{n_m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremInstance {
    pub lhs: MixedFactorization,
    pub rhs: Vec<(Word, u32)>,
}

impl TheoremInstance {
    pub fn new(lhs: MixedFactorization, rhs: Vec<(Word, u32)>) -> Result<Self> {
        if rhs
            .iter()
            .any(|(h, _)| !same_ctx(h.context(), lhs.context()))
        {
            return Err(Error::ContextMismatch);
        }
        if rhs.iter().any(|(_, n)| *n == 0) {
            return Err(Error::InvalidWitness("exponents must be positive".into()));
        }
        Ok(TheoremInstance { lhs, rhs })
    }

    pub fn from_quasiperiodic(
        lhs: MixedFactorization,
        q: &QuasiperiodicFactorization,
    ) -> Result<Self> {
        TheoremInstance::new(lhs, q.factors())
    }

    pub fn rhs_value(&self) -> Word {
        self.rhs
            .iter()
            .fold(Word::identity(self.lhs.context()), |acc, (h, n)| {
                acc.mul_unchecked(&h.pow(*n as i64))
            })
    }

    pub fn rhs_score(&self) -> u32 {
        self.rhs.iter().map(|(_, n)| n - 1).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// Every letter of a cyclically reduced conjugate of `h_1` has order > Σ n_j.
    pub torsion_ok: bool,
    /// No `h_j` is conjugate into a free factor.
    pub not_conjugate_into_factor: bool,
    /// All `h_j` are conjugate to each other.
    pub mutually_conjugate: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.torsion_ok && self.not_conjugate_into_factor && self.mutually_conjugate
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub equality_holds: bool,
    pub lhs_value: String,
    pub rhs_value: String,
    pub hypotheses: Hypotheses,
    pub lhs_score: u32,
    pub rhs_score: u32,
    /// `rhs_score <= lhs_score - 2`.
    pub inequality_holds: bool,
    /// Equality and every hypothesis hold, so the inequality is asserted.
    pub theorem_applies: bool,
}

impl VerdictReport {
    /// False only when the theorem applies and its inequality fails.
    pub fn consistent(&self) -> bool {
        !self.theorem_applies || self.inequality_holds
    }
}

pub fn verify_theorem_instance(t: &TheoremInstance) -> VerdictReport {
    let lhs = t.lhs.evaluate();
    let rhs = t.rhs_value();
    let equality_holds = lhs.as_ref().is_ok_and(|l| *l == rhs);
    let sum_n: u64 = t.rhs.iter().map(|(_, n)| *n as u64).sum();
    let not_conjugate_into_factor = !t.rhs.is_empty()
        && t.rhs
            .iter()
            .all(|(h, _)| h.conjugate_into_factor().is_none());
    let mutually_conjugate = t
        .rhs
        .windows(2)
        .all(|p| is_conjugate_unchecked(&p[0].0, &p[1].0));
    let torsion_ok = t.rhs.first().is_some_and(|(h, _)| {
        h.letter_orders().iter().all(|o| match o {
            Order::Infinite => true,
            Order::Finite(n) => *n > sum_n,
        })
    });
    let hypotheses = Hypotheses {
        torsion_ok,
        not_conjugate_into_factor,
        mutually_conjugate,
    };
    let lhs_score = t.lhs.score();
    let rhs_score = t.rhs_score();
    let inequality_holds = rhs_score as i64 <= lhs_score as i64 - 2;
    VerdictReport {
        equality_holds,
        lhs_value: lhs.map(|w| w.to_string()).unwrap_or_else(|e| e.to_string()),
        rhs_value: rhs.to_string(),
        hypotheses,
        lhs_score,
        rhs_score,
        inequality_holds,
        theorem_applies: equality_holds && hypotheses.all(),
    }
}

// ---------------------------------------------------------------------------
// Mixed genus: certified lower bound

/// Largest core length handled by the exhaustive single-face diagram count.
pub const LOWER_BOUND_MAX_CORE: usize = 18;

/// A lower bound on `mg(w)`.
///
/// For two-factor contexts this is the least extended genus `2 − χ + r₀`
/// over every reduced closed diagram with a single face labelled by the
/// cyclic core of `w`, found by enumerating all orientable side pairings of
/// that face. Any mixed factorization of score `s` yields such a diagram of
/// extended genus at most `s`. Outside that range it falls back to the
/// trivial bound from the length of the cyclic core.
pub fn mixed_genus_lower_bound(w: &Word) -> u32 {
    let core = w.cyclic_reduce().core;
    match core.len() {
        0 => return 0,
        1 => return 1,
        _ => {}
    }
    if w.context().len() != 2 || core.len() > LOWER_BOUND_MAX_CORE {
        return 2;
    }
    let (eg, _) = best_single_face_pairing(&core);
    eg
}

/// Least extended genus over single-face diagrams labelled by `core`,
/// with a pairing realizing it (`pairing[i]` is the dart glued to dart `i`).
pub(crate) fn best_single_face_pairing(core: &Word) -> (u32, Vec<usize>) {
    let letters = core.letters();
    let len = letters.len();
    let ctx = core.context();
    let mut pairing = vec![usize::MAX; len];
    let mut best = (u32::MAX, Vec::new());
    // dart i is the side ending at the corner labelled letters[i];
    // sides i, j can be glued when the vertex types match at both ends
    let compatible = |i: usize, j: usize| {
        let prev = |x: usize| (x + len - 1) % len;
        letters[i].factor == letters[prev(j)].factor && letters[prev(i)].factor == letters[j].factor
    };
    fn rec(
        pairing: &mut Vec<usize>,
        letters: &[Letter],
        ctx: &Ctx,
        compatible: &dyn Fn(usize, usize) -> bool,
        best: &mut (u32, Vec<usize>),
    ) {
        let Some(i) = pairing.iter().position(|&p| p == usize::MAX) else {
            let eg = single_face_eg(pairing, letters, ctx);
            if eg < best.0 {
                *best = (eg, pairing.clone());
            }
            return;
        };
        for j in i + 1..pairing.len() {
            if pairing[j] == usize::MAX && compatible(i, j) {
                pairing[i] = j;
                pairing[j] = i;
                rec(pairing, letters, ctx, compatible, best);
                pairing[i] = usize::MAX;
                pairing[j] = usize::MAX;
            }
        }
    }
    rec(&mut pairing, letters, ctx, &compatible, &mut best);
    best
}

fn single_face_eg(pairing: &[usize], letters: &[Letter], ctx: &Ctx) -> u32 {
    let len = letters.len();
    let mut seen = vec![false; len];
    let mut vertices = 0u32;
    let mut irregular = 0u32;
    for start in 0..len {
        if seen[start] {
            continue;
        }
        vertices += 1;
        let mut sum = 0i64;
        let mut d = start;
        let factor = letters[start].factor;
        while !seen[d] {
            seen[d] = true;
            sum += letters[d].exp;
            // rotation: incoming dart d is followed by alpha(next(d))
            d = pairing[(d + 1) % len];
        }
        if ctx.factor(factor).canonical_exponent(sum).is_some() {
            irregular += 1;
        }
    }
    let edges = (len / 2) as i64;
    let chi = vertices as i64 - edges + 1;
    (2 - chi + irregular as i64) as u32
}

// ---------------------------------------------------------------------------
// Mixed genus: bounded witness search

/// Options shared by the bounded searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub execution: Execution,
    /// Skip scores below [`mixed_genus_lower_bound`].
    pub use_lower_bound: bool,
    /// Largest number of factors `m` tried by the quasiperiodic search;
    /// `None` means `cap + 2`.
    pub max_factors: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            execution: Execution::default(),
            use_lower_bound: true,
            max_factors: None,
        }
    }
}

#[derive(Clone, Debug)]
enum Component {
    Comm(Word, Word),
    Conj(Word, Letter),
}

impl Component {
    fn len(&self) -> usize {
        match self {
            Component::Comm(x, y) => x.len() + y.len(),
            Component::Conj(s, _) => s.len(),
        }
    }
}

/// A candidate component with its precomputed inverse value.
struct Choice {
    comp: Component,
    len: usize,
    inv: Word,
}

/// Candidate components whose total length fits one budget level.
struct Tables {
    budget: usize,
    words: Vec<Word>,
    /// `words` split by length.
    by_len: Vec<Vec<Word>>,
    /// Nontrivial commutators, sorted by length.
    comms: Vec<Choice>,
}

struct MixedSearcher {
    ctx: Ctx,
    radius: usize,
    letters: Vec<Letter>,
}

type Hit = (usize, String, Vec<Component>);

impl MixedSearcher {
    fn new(ctx: &Ctx, radius: usize) -> Self {
        MixedSearcher {
            ctx: ctx.clone(),
            radius,
            letters: letters_within(ctx, radius as i64),
        }
    }

    fn bounds_with(&self, budget: usize) -> WordBounds {
        WordBounds {
            max_len: budget.min(self.radius),
            max_exp: self.radius as i64,
        }
    }

    fn tables(&self, budget: usize, need_comms: bool) -> Tables {
        let bounds = self.bounds_with(budget);
        let words = words_within(&self.ctx, bounds);
        let mut comms = Vec::new();
        if need_comms {
            for x in words.iter().filter(|x| !x.is_empty()) {
                for y in words
                    .iter()
                    .filter(|y| !y.is_empty() && x.len() + y.len() <= budget)
                {
                    let v = commutator_unchecked(x, y);
                    if !v.is_empty() {
                        comms.push(Choice {
                            comp: Component::Comm(x.clone(), y.clone()),
                            len: x.len() + y.len(),
                            inv: v.inverse(),
                        });
                    }
                }
            }
            comms.sort_by_key(|c| c.len);
        }
        let mut by_len = vec![Vec::new(); bounds.max_len + 1];
        for w in &words {
            by_len[w.len()].push(w.clone());
        }
        Tables {
            budget,
            words,
            by_len,
            comms,
        }
    }

    /// Cheap necessary conditions for `rest` to be a product of `kr`
    /// nontrivial commutators and `lr` conjugated letters of total length `budget`.
    fn feasible(&self, rest: &Word, kr: usize, lr: usize, budget: usize) -> bool {
        if kr + lr == 0 {
            return rest.is_empty();
        }
        if rest.len() > 2 * budget + lr || 2 * kr > budget {
            return false;
        }
        let mut needed = 0usize;
        for (f, s) in rest.exponent_sums().iter().enumerate() {
            if *s == 0 {
                continue;
            }
            needed += if self.ctx.factor(f).is_finite() {
                1
            } else {
                (s.unsigned_abs() as usize).div_ceil(self.radius.max(1))
            };
        }
        needed <= lr
    }

    /// Conjugated letters `c = s d s⁻¹` with `|s| <= budget` for which
    /// `c⁻¹ · rest` can still be written with `lr_after` letters and the
    /// remaining budget, paired with that quotient.
    ///
    /// Short quotients force `s` to begin with a prefix of `rest`, so `s` is
    /// generated as such a prefix followed by an unconstrained tail.
    fn conj_choices(
        &self,
        t: &Tables,
        rest: &Word,
        budget: usize,
        lr_after: usize,
    ) -> Vec<(Component, Word)> {
        let r = rest.letters();
        let cap = budget.min(self.radius);
        let mut out = Vec::new();
        for len in 0..=cap {
            let limit = 2 * (budget - len) + lr_after;
            // quotient length >= 2len + |r| - 2j when j < len letters cancel
            let need = (4 * len + r.len()).saturating_sub(2 * budget + lr_after);
            let j_min = need.div_ceil(2).min(len);
            let j_max = len.min(r.len());
            // j == len lets cancellation run on into d, so it is always tried
            let js = (j_min..=j_max).chain((j_min > j_max && len <= r.len()).then_some(len));
            for j in js {
                if r[..j].iter().any(|l| {
                    !self.ctx.factor(l.factor).is_finite() && l.exp.abs() > self.radius as i64
                }) {
                    break;
                }
                for tail in &t.by_len[len - j] {
                    let tl = tail.letters();
                    if let Some(first) = tl.first() {
                        if j > 0 && r[j - 1].factor == first.factor {
                            continue;
                        }
                        if j < r.len() && r[j] == *first {
                            continue;
                        }
                    }
                    let mut letters = r[..j].to_vec();
                    letters.extend_from_slice(tl);
                    let s = Word::from_reduced(&self.ctx, letters);
                    for &d in &self.letters {
                        if s.last().is_some_and(|l| l.factor == d.factor) {
                            continue;
                        }
                        let next = conj_letter(&self.ctx, &s, d).inverse().mul_unchecked(rest);
                        if next.len() <= limit {
                            out.push((Component::Conj(s.clone(), d), next));
                        }
                    }
                }
            }
        }
        out
    }

    /// The lexicographically least final component equal to `rest`.
    fn solve_last(
        &self,
        t: &Tables,
        is_comm: bool,
        rest: &Word,
        budget: usize,
    ) -> Option<Component> {
        if is_comm {
            if rest.is_empty() || rest.exponent_sums().iter().any(|&e| e != 0) {
                return None;
            }
            let mut best: Option<(String, Component)> = None;
            for x in t.words.iter().filter(|x| !x.is_empty() && x.len() < budget) {
                let target = x.mul_unchecked(rest);
                if target.cyclic_reduce().core.len() != x.cyclic_reduce().core.len() {
                    continue;
                }
                for g in conjugators_within(x, &target, self.bounds_with(budget - x.len())) {
                    let c = Component::Comm(x.clone(), g.inverse());
                    let key = component_string(&self.ctx, &c);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((key, c));
                    }
                }
            }
            best.map(|(_, c)| c)
        } else {
            let core = rest.cyclic_reduce().core;
            let [d] = core.letters() else {
                return None;
            };
            if !self.ctx.factor(d.factor).is_finite() && d.exp.abs() > self.radius as i64 {
                return None;
            }
            let s = conjugators_within(&core, rest, self.bounds_with(budget))
                .into_iter()
                .find(|s| s.last().is_none_or(|l| l.factor != d.factor))?;
            Some(Component::Conj(s, *d))
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        t: &Tables,
        k: usize,
        l: usize,
        prefix: &mut Vec<Component>,
        rest: &Word,
        budget: usize,
        best: &mut Option<Hit>,
    ) {
        let idx = prefix.len();
        let kr = k.saturating_sub(idx);
        let lr = l - idx.saturating_sub(k);
        if !self.feasible(rest, kr, lr, budget) {
            return;
        }
        let is_comm = idx < k;
        if idx + 1 == k + l {
            if let Some(c) = self.solve_last(t, is_comm, rest, budget) {
                prefix.push(c);
                self.record(prefix, best);
                prefix.pop();
            }
            return;
        }
        if is_comm {
            for c in t.comms.iter().take_while(|c| c.len <= budget) {
                let next = c.inv.mul_unchecked(rest);
                prefix.push(c.comp.clone());
                self.dfs(t, k, l, prefix, &next, budget - c.len, best);
                prefix.pop();
            }
        } else {
            for (c, next) in self.conj_choices(t, rest, budget, lr - 1) {
                let used = c.len();
                prefix.push(c);
                self.dfs(t, k, l, prefix, &next, budget - used, best);
                prefix.pop();
            }
        }
    }

    fn record(&self, comps: &[Component], best: &mut Option<Hit>) {
        let len: usize = comps.iter().map(Component::len).sum();
        let key = comps
            .iter()
            .map(|c| component_string(&self.ctx, c))
            .collect::<Vec<_>>()
            .join(" * ");
        if best
            .as_ref()
            .is_none_or(|(bl, bk, _)| (len, &key) < (*bl, bk))
        {
            *best = Some((len, key, comps.to_vec()));
        }
    }

    fn search_shape(
        &self,
        t: &Tables,
        w: &Word,
        k: usize,
        l: usize,
        exec: Execution,
    ) -> Option<Hit> {
        let budget = t.budget;
        if k + l == 0 {
            return w.is_empty().then(|| (0, String::new(), Vec::new()));
        }
        if !self.feasible(w, k, l, budget) {
            return None;
        }
        if k + l == 1 {
            let mut best = None;
            self.dfs(t, k, l, &mut Vec::new(), w, budget, &mut best);
            return best;
        }
        let first: Vec<(Component, Word)> = if k > 0 {
            t.comms
                .iter()
                .take_while(|c| c.len <= budget)
                .map(|c| (c.comp.clone(), c.inv.mul_unchecked(w)))
                .collect()
        } else {
            self.conj_choices(t, w, budget, l - 1)
        };
        let hits = par::filter_map(exec, &first, |(c, next)| {
            let mut prefix = vec![c.clone()];
            let mut best = None;
            self.dfs(t, k, l, &mut prefix, next, budget - c.len(), &mut best);
            best
        });
        hits.into_iter()
            .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
    }

    fn to_witness(&self, comps: Vec<Component>) -> MixedFactorization {
        let mut commutators = Vec::new();
        let mut conjugated = Vec::new();
        for c in comps {
            match c {
                Component::Comm(x, y) => commutators.push((x, y)),
                Component::Conj(s, d) => conjugated.push((s, d)),
            }
        }
        MixedFactorization::new(&self.ctx, commutators, conjugated).expect("searched witness")
    }
}

fn component_string(ctx: &Ctx, c: &Component) -> String {
    match c {
        Component::Comm(x, y) => format!("[{x}, {y}]"),
        Component::Conj(s, d) => format!("<{s} | {}>", letter_word(ctx, *d)),
    }
}

/// Outcome of a mixed genus search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSearchOutcome {
    pub score: u32,
    pub witness: MixedFactorization,
    /// The score the search started from.
    pub lower_bound: u32,
}

/// Least score `<= cap` of a mixed factorization of `w` within `radius`.
pub fn mixed_genus_upper(w: &Word, radius: usize, cap: u32) -> Option<(u32, MixedFactorization)> {
    mixed_genus_search(w, radius, cap, SearchOptions::default()).map(|o| (o.score, o.witness))
}

/// How [`mixed_witness_for`] obtained each component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSources {
    pub searched: usize,
    pub letters: usize,
}

/// A mixed factorization of `q.evaluate()`, assembled from one for each
/// power `hⁿ` of the cyclic core. Powers of length at most `max_len` are
/// searched within `radius` and `cap`; the others, and those with no hit,
/// are written letter by letter.
pub fn mixed_witness_for(
    q: &QuasiperiodicFactorization,
    max_len: usize,
    radius: usize,
    cap: u32,
    opts: SearchOptions,
) -> Result<(MixedFactorization, WitnessSources)> {
    let ctx = q.base().context().clone();
    let core = q.base().cyclic_reduce();
    let mut sources = WitnessSources::default();
    let mut commutators = Vec::new();
    let mut letters = Vec::new();
    // Value of the letters collected so far; later commutators are moved
    // in front of them by conjugating with it.
    let mut tail = Word::identity(&ctx);
    for (s, &n) in q.conjugators().iter().zip(q.exponents()) {
        let power = core.core.pow(n as i64);
        let found = if power.len() <= max_len {
            mixed_genus_search(&power, radius, cap, opts)
        } else {
            None
        };
        let part = match found {
            Some(o) => {
                sources.searched += 1;
                o.witness
            }
            None => {
                sources.letters += 1;
                let one = Word::identity(&ctx);
                MixedFactorization::new(
                    &ctx,
                    vec![],
                    power.letters().iter().map(|&l| (one.clone(), l)).collect(),
                )?
            }
        };
        let g = s.mul_unchecked(&core.conjugator);
        for (x, y) in part.commutators() {
            let shift = tail.mul_unchecked(&g);
            commutators.push((x.conjugated_by_left(&shift), y.conjugated_by_left(&shift)));
        }
        for (t, d) in part.conjugated_letters() {
            let t = g.mul_unchecked(t);
            tail = tail.mul_unchecked(&conj_letter(&ctx, &t, *d));
            letters.push((t, *d));
        }
    }
    let mixed = MixedFactorization::new(&ctx, commutators, letters)?;
    if mixed.evaluate()? != q.evaluate()? {
        return Err(Error::Invariant(
            "assembled witness has the wrong value".into(),
        ));
    }
    Ok((mixed, sources))
}

/// Iterative deepening over score, then over total witness length.
///
/// Among witnesses of least score and least total length the one with the
/// lexicographically least serialization is returned.
pub fn mixed_genus_search(
    w: &Word,
    radius: usize,
    cap: u32,
    opts: SearchOptions,
) -> Option<MixedSearchOutcome> {
    let lower_bound = if opts.use_lower_bound {
        mixed_genus_lower_bound(w)
    } else {
        0
    };
    let searcher = MixedSearcher::new(w.context(), radius);
    for score in lower_bound..=cap {
        let shapes: Vec<(usize, usize)> = (0..=score as usize / 2)
            .map(|k| (k, score as usize - 2 * k))
            .collect();
        let max_budget = shapes
            .iter()
            .map(|&(k, l)| 2 * k * radius + l * radius)
            .max()
            .unwrap_or(0);
        let live: Vec<(usize, usize)> = shapes
            .into_iter()
            .filter(|&(k, l)| searcher.feasible(w, k, l, max_budget))
            .collect();
        if live.is_empty() {
            continue;
        }
        let need_comms = live.iter().any(|&(k, _)| k > 0);
        for budget in 0..=max_budget {
            let tables = searcher.tables(budget, need_comms);
            let best = live
                .iter()
                .filter_map(|&(k, l)| searcher.search_shape(&tables, w, k, l, opts.execution))
                .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            if let Some((_, _, comps)) = best {
                let witness = searcher.to_witness(comps);
                debug_assert_eq!(witness.evaluate().ok().as_ref(), Some(w));
                return Some(MixedSearchOutcome {
                    score,
                    witness,
                    lower_bound,
                });
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Quasiperiodicity: bounded witness search

/// Greatest score `<= cap` of a quasiperiodic factorization of `w` within `radius`.
pub fn quasiperiodicity_lower(
    w: &Word,
    radius: usize,
    cap: u32,
) -> Option<(u32, QuasiperiodicFactorization)> {
    quasiperiodicity_search(w, radius, cap, SearchOptions::default())
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

pub fn quasiperiodicity_search(
    w: &Word,
    radius: usize,
    cap: u32,
    opts: SearchOptions,
) -> Option<(u32, QuasiperiodicFactorization)> {
    let ctx = w.context();
    let bounds = WordBounds::radius(radius);
    let target_sums = w.exponent_sums();
    let max_factors = opts.max_factors.unwrap_or(cap as usize + 2).max(1);
    let mut conjugators: Option<Vec<Word>> = None;

    for score in (0..=cap).rev() {
        let mut jobs: Vec<(Word, Vec<u32>)> = Vec::new();
        for m in 1..=max_factors {
            let total = score as usize + m;
            let Some(base_sums) = base_sum_constraint(ctx, &target_sums, total) else {
                continue;
            };
            let live: Vec<Word> = cyclic_words_with_sums(ctx, bounds, &base_sums)
                .into_iter()
                .filter(|h| {
                    let mut sums: Vec<i64> =
                        h.exponent_sums().iter().map(|s| s * total as i64).collect();
                    reduce_sums(ctx, &mut sums);
                    sums == target_sums && h.conjugate_into_factor().is_none()
                })
                .collect();
            for comp in compositions(total, m) {
                for h in &live {
                    jobs.push((h.clone(), comp.clone()));
                }
            }
        }
        if jobs.iter().any(|(_, c)| c.len() > 1) && conjugators.is_none() {
            conjugators = Some(words_within(ctx, bounds));
        }
        let conj: &[Word] = conjugators.as_deref().unwrap_or(&[]);
        let hits = par::filter_map(opts.execution, &jobs, |(h, comp)| {
            let powers: Vec<Word> = comp.iter().map(|&n| h.pow(n as i64)).collect();
            let mut best: Option<(usize, String, QuasiperiodicFactorization)> = None;
            let mut chosen = Vec::new();
            quasi_dfs(w, h, comp, &powers, conj, bounds, &mut chosen, w, &mut best);
            best
        });
        if let Some((_, _, q)) = hits
            .into_iter()
            .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        {
            return Some((score, q));
        }
    }
    None
}

/// Exponent sums forced on a base `h` with `e(w) = total · e(h)`:
/// exact in `Z` factors, unconstrained here in finite ones. `None` when
/// some `Z` sum is not divisible by `total`.
fn base_sum_constraint(ctx: &Ctx, target: &[i64], total: usize) -> Option<Vec<Option<i64>>> {
    target
        .iter()
        .enumerate()
        .map(|(f, &e)| {
            if ctx.factor(f).is_finite() {
                Some(None)
            } else if e % total as i64 == 0 {
                Some(Some(e / total as i64))
            } else {
                None
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn quasi_dfs(
    w: &Word,
    base: &Word,
    exps: &[u32],
    powers: &[Word],
    conjugators: &[Word],
    bounds: WordBounds,
    chosen: &mut Vec<Word>,
    rest: &Word,
    best: &mut Option<(usize, String, QuasiperiodicFactorization)>,
) {
    let idx = chosen.len();
    let remaining_max: usize = powers[idx..]
        .iter()
        .map(|p| p.len() + 2 * bounds.max_len)
        .sum();
    if rest.len() > remaining_max {
        return;
    }
    if idx + 1 == exps.len() {
        for t in conjugators_within(&powers[idx], rest, bounds) {
            chosen.push(t);
            let q = QuasiperiodicFactorization::new(base.clone(), chosen.clone(), exps.to_vec())
                .expect("valid by construction");
            debug_assert_eq!(q.evaluate().ok().as_ref(), Some(w));
            let key = (q.total_len(), q.to_string());
            if best
                .as_ref()
                .is_none_or(|(l, k, _)| (key.0, &key.1) < (*l, k))
            {
                *best = Some((key.0, key.1, q));
            }
            chosen.pop();
        }
        return;
    }
    for s in conjugators {
        let factor = powers[idx].conjugated_by_left(s);
        let next = factor.inverse().mul_unchecked(rest);
        chosen.push(s.clone());
        quasi_dfs(
            w,
            base,
            exps,
            powers,
            conjugators,
            bounds,
            chosen,
            &next,
            best,
        );
        chosen.pop();
    }
}

// ---------------------------------------------------------------------------
// Roots and commutators

/// Every `z` within `radius` with `zⁿ = w`, in shortlex order.
pub fn search_roots(w: &Word, n: u32, radius: usize, exec: Execution) -> Vec<Word> {
    let ctx = w.context();
    let target = w.exponent_sums();
    let candidates = words_within(ctx, WordBounds::radius(radius));
    par::filter_map(exec, &candidates, |z| {
        let mut sums: Vec<i64> = z.exponent_sums().iter().map(|s| s * n as i64).collect();
        reduce_sums(ctx, &mut sums);
        (sums == target && z.pow(n as i64) == *w).then(|| z.clone())
    })
}

/// The shortlex-least `z` within `radius` with `zⁿ = w`.
pub fn search_root(w: &Word, n: u32, radius: usize) -> Option<Word> {
    search_roots(w, n, radius, Execution::default())
        .into_iter()
        .next()
}

/// Some `(x, y)` with `[x, y] = w` and both within `radius`.
///
/// The returned pair minimizes `|x| + |y|`, then `x`, then `y` in shortlex order.
pub fn find_commutator_witness(w: &Word, radius: usize) -> Option<(Word, Word)> {
    find_commutator_witness_with(w, radius, Execution::default())
}

pub fn find_commutator_witness_with(
    w: &Word,
    radius: usize,
    exec: Execution,
) -> Option<(Word, Word)> {
    if w.exponent_sums().iter().any(|&s| s != 0) {
        return None;
    }
    let ctx = w.context();
    let bounds = WordBounds::radius(radius);
    if w.is_empty() {
        return Some((Word::identity(ctx), Word::identity(ctx)));
    }
    let xs = words_within(ctx, bounds);
    par::min_some(exec, &xs, |x| {
        if x.is_empty() {
            return None;
        }
        let target = x.mul_unchecked(w);
        conjugators_within(x, &target, bounds)
            .into_iter()
            .map(|g| g.inverse())
            .filter(|y| y.within(bounds))
            .map(|y| (x.len() + y.len(), x.clone(), y))
            .min()
    })
    .map(|(_, x, y)| (x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Ctx {
        Context::parse("Z,Z").unwrap()
    }

    fn w(ctx: &Ctx, s: &str) -> Word {
        Word::parse(ctx, s).unwrap()
    }

    fn culler(ctx: &Ctx) -> MixedFactorization {
        MixedFactorization::new(
            ctx,
            vec![
                (w(ctx, "a^-1 b a"), w(ctx, "a^-2 b a b^-1")),
                (w(ctx, "b a b^-1"), w(ctx, "b^2")),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_mixed_examples() {
        let ctx = zz();
        let f = MixedFactorization::new(&ctx, vec![(w(&ctx, "a"), w(&ctx, "b"))], vec![]).unwrap();
        assert_eq!(f.evaluate().unwrap().to_string(), "a^-1 b^-1 a b");
        let f = MixedFactorization::new(
            &ctx,
            vec![],
            vec![
                (Word::identity(&ctx), Letter::new(0, 1)),
                (Word::identity(&ctx), Letter::new(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(f.evaluate().unwrap(), w(&ctx, "a b"));
        let c = Word::commutator(&w(&ctx, "a"), &w(&ctx, "b")).unwrap();
        assert_eq!(culler(&ctx).evaluate().unwrap(), c.pow(3));
    }

    #[test]
    fn identity_letter_is_rejected() {
        let ctx = zz();
        let err = MixedFactorization::new(
            &ctx,
            vec![],
            vec![(Word::identity(&ctx), Letter::new(0, 0))],
        );
        assert!(matches!(err, Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn evaluate_quasiperiodic_examples() {
        let ctx = zz();
        let ab = w(&ctx, "a b");
        let e = Word::identity(&ctx);
        let q = QuasiperiodicFactorization::new(ab.clone(), vec![e.clone()], vec![3]).unwrap();
        assert_eq!(q.evaluate().unwrap(), ab.pow(3));
        let q = QuasiperiodicFactorization::new(ab.clone(), vec![e.clone(), e.clone()], vec![4, 2])
            .unwrap();
        assert_eq!(q.evaluate().unwrap(), ab.pow(6));
        assert_eq!(q.score(), 4);
        assert!(QuasiperiodicFactorization::new(w(&ctx, "b a b^-1"), vec![e], vec![1]).is_err());
    }

    #[test]
    fn repr_round_trip() {
        let ctx = zz();
        let f = culler(&ctx);
        let back = MixedFactorization::from_repr(&f.to_repr()).unwrap();
        assert_eq!(back.evaluate().unwrap(), f.evaluate().unwrap());
        assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn mixed_genus_small_examples() {
        let ctx = zz();
        let (s, f) = mixed_genus_upper(&w(&ctx, "a"), 1, 3).unwrap();
        assert_eq!((s, f.k(), f.l()), (1, 0, 1));
        let c = w(&ctx, "a^-1 b^-1 a b");
        let (s, f) = mixed_genus_upper(&c, 1, 2).unwrap();
        assert_eq!(s, 2);
        assert_eq!(f.evaluate().unwrap(), c);
        assert_eq!(mixed_genus_upper(&Word::identity(&ctx), 0, 0).unwrap().0, 0);
    }

    #[test]
    fn unseeded_search_agrees_on_commutator() {
        let ctx = zz();
        let c = w(&ctx, "a^-1 b^-1 a b");
        let opts = SearchOptions {
            execution: Execution::Sequential,
            use_lower_bound: false,
            max_factors: None,
        };
        let out = mixed_genus_search(&c, 2, 3, opts).unwrap();
        assert_eq!(out.score, 2);
        assert_eq!(out.lower_bound, 0);
    }

    #[test]
    fn lower_bound_examples() {
        let ctx = zz();
        assert_eq!(mixed_genus_lower_bound(&Word::identity(&ctx)), 0);
        assert_eq!(mixed_genus_lower_bound(&w(&ctx, "b a^3 b^-1")), 1);
        assert_eq!(mixed_genus_lower_bound(&w(&ctx, "a^-1 b^-1 a b")), 2);
        for n in 1..=5 {
            assert_eq!(
                mixed_genus_lower_bound(&w(&ctx, "a b").pow(n)),
                n as u32 + 1
            );
        }
        // Fig. 1 word: regular vertices exist once a and b have order 3
        let z3 = Context::parse("Z3,Z3").unwrap();
        assert_eq!(mixed_genus_lower_bound(&w(&z3, "a b").pow(3)), 2);
    }

    #[test]
    fn quasiperiodicity_examples() {
        let ctx = zz();
        let u = w(&ctx, "a b");
        let (s, q) = quasiperiodicity_lower(&u.pow(3), 2, 4).unwrap();
        assert_eq!(s, 2);
        assert_eq!(q.evaluate().unwrap(), u.pow(3));

        let v = u.conjugate(&w(&ctx, "a")).unwrap();
        let target = u.pow(4).multiply(&v.pow(2)).unwrap();
        let (s, q) = quasiperiodicity_lower(&target, 2, 4).unwrap();
        assert!(s >= 4);
        assert_eq!(q.evaluate().unwrap(), target);

        let target = u
            .pow(3)
            .multiply(&v)
            .unwrap()
            .multiply(&u)
            .unwrap()
            .multiply(&v)
            .unwrap();
        let (s, q) = quasiperiodicity_lower(&target, 2, 3).unwrap();
        assert!(s >= 3);
        assert_eq!(q.evaluate().unwrap(), target);
    }

    #[test]
    fn root_examples() {
        let ctx = zz();
        let ab = w(&ctx, "a b");
        assert_eq!(search_root(&ab.pow(6), 3, 4).unwrap(), ab.pow(2));
        let c = w(&ctx, "a^-1 b^-1 a b");
        assert!(search_root(&c, 2, 4).is_none());
        assert!(search_root(&Word::identity(&ctx), 5, 2).unwrap().is_empty());
    }

    #[test]
    fn commutator_examples() {
        let ctx = zz();
        let c = w(&ctx, "a^-1 b^-1 a b");
        assert_eq!(
            find_commutator_witness(&c, 1).unwrap(),
            (w(&ctx, "a"), w(&ctx, "b"))
        );
        assert!(find_commutator_witness(&w(&ctx, "a"), 4).is_none());
        let z3 = Context::parse("Z3,Z3").unwrap();
        let target = w(&z3, "a b").pow(3);
        let (x, y) = find_commutator_witness(&target, 6).unwrap();
        assert_eq!(Word::commutator(&x, &y).unwrap(), target);
    }

    #[test]
    fn verdict_examples() {
        let ctx = zz();
        let c = w(&ctx, "a^-1 b^-1 a b");
        let t = TheoremInstance::new(culler(&ctx), vec![(c, 3)]).unwrap();
        let r = verify_theorem_instance(&t);
        assert!(r.equality_holds && r.theorem_applies && r.inequality_holds);
        assert_eq!((r.lhs_score, r.rhs_score), (4, 2));

        let d = Context::parse("c=Z2,d=Z2").unwrap();
        let cd = Word::commutator(&w(&d, "c"), &w(&d, "d")).unwrap();
        let (x, y) = find_commutator_witness(&cd.pow(2), 6).unwrap();
        let lhs = MixedFactorization::new(&d, vec![(x, y)], vec![]).unwrap();
        let t = TheoremInstance::new(lhs, vec![(cd, 2)]).unwrap();
        let r = verify_theorem_instance(&t);
        assert!(r.equality_holds);
        assert!(!r.hypotheses.torsion_ok);
        assert!(!r.theorem_applies);
        assert!(!r.inequality_holds);
        assert!(r.consistent());
    }

    #[test]
    fn guided_conjugates_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let ctx = Context::parse("Z,Z3").unwrap();
        let searcher = MixedSearcher::new(&ctx, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let alphabet = letters_within(&ctx, 3);
        for _ in 0..60 {
            let len = rng.gen_range(0..7);
            let rest = Word::normalize(
                &ctx,
                (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]),
            )
            .unwrap();
            let budget = rng.gen_range(0..4);
            let lr_after = rng.gen_range(0..3);
            let t = searcher.tables(budget, false);
            let mut got: Vec<String> = searcher
                .conj_choices(&t, &rest, budget, lr_after)
                .iter()
                .map(|(c, _)| component_string(&ctx, c))
                .collect();
            let mut want = Vec::new();
            for s in &t.words {
                for &d in &searcher.letters {
                    if s.last().is_some_and(|l| l.factor == d.factor) {
                        continue;
                    }
                    let next = conj_letter(&ctx, s, d).inverse().mul_unchecked(&rest);
                    if next.len() <= 2 * (budget - s.len()) + lr_after {
                        want.push(component_string(&ctx, &Component::Conj(s.clone(), d)));
                    }
                }
            }
            got.sort();
            want.sort();
            assert_eq!(got, want, "rest {rest} budget {budget} lr {lr_after}");
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(6, 3).len(), 10);
        assert_eq!(compositions(2, 3).len(), 0);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    }
}
