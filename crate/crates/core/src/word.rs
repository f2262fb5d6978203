//! Reduced words over a free product of cyclic groups.
//!
//! Every factor is either infinite cyclic (`Z`) or finite cyclic (`Zn`). A
//! [`Word`] is always stored in reduced normal form, so structural equality
//! coincides with equality in the group.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of a group element or of a cyclic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// A cyclic free factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSpec {
    order: Order,
}

impl FactorSpec {
    pub fn infinite() -> Self {
        FactorSpec {
            order: Order::Infinite,
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidContext(format!(
                "finite factor order must be at least 2, got {n}"
            )));
        }
        Ok(FactorSpec {
            order: Order::Finite(n),
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.order, Order::Finite(_))
    }

    /// Canonical exponent, or `None` for the identity.
    pub fn canonical_exponent(&self, exp: i64) -> Option<i64> {
        let e = match self.order {
            Order::Finite(n) => exp.rem_euclid(n as i64),
            Order::Infinite => exp,
        };
        (e != 0).then_some(e)
    }

    /// Order of `g^exp` where `g` generates this factor.
    pub fn element_order(&self, exp: i64) -> Order {
        match self.order {
            Order::Infinite => Order::Infinite,
            Order::Finite(n) => {
                let g = gcd(n, exp.unsigned_abs() % n);
                Order::Finite(n / if g == 0 { n } else { g })
            }
        }
    }

    fn label(&self) -> String {
        match self.order {
            Order::Infinite => "Z".to_string(),
            Order::Finite(n) => format!("Z{n}"),
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Index of a free factor inside its [`Context`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorId(pub usize);

/// The ambient free product: an ordered list of cyclic factors with names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    factors: Vec<FactorSpec>,
    names: Vec<String>,
}

pub type Ctx = Arc<Context>;

fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}")
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Context {
    pub fn new(factors: Vec<FactorSpec>, names: Vec<String>) -> Result<Ctx> {
        if factors.len() < 2 {
            return Err(Error::InvalidContext(
                "a free product needs at least two factors".into(),
            ));
        }
        if names.len() != factors.len() {
            return Err(Error::InvalidContext("one name per factor".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::InvalidContext(format!("bad factor name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidContext(format!(
                    "duplicate factor name `{n}`"
                )));
            }
        }
        Ok(Arc::new(Context { factors, names }))
    }

    /// Factors named `a`, `b`, `c`, ... in order.
    pub fn with_default_names(factors: Vec<FactorSpec>) -> Result<Ctx> {
        let names = (0..factors.len()).map(default_name).collect();
        Context::new(factors, names)
    }

    /// Free group of the given rank, viewed as a free product of copies of `Z`.
    pub fn free(rank: usize) -> Result<Ctx> {
        Context::with_default_names(vec![FactorSpec::infinite(); rank])
    }

    /// Parses `Z,Z`, `Z3,Z5` or `c=Z2,d=Z2`.
    pub fn parse(text: &str) -> Result<Ctx> {
        let mut factors = Vec::new();
        let mut names = Vec::new();
        let mut offset = 0;
        for (i, raw) in text.split(',').enumerate() {
            let pos = offset + (raw.len() - raw.trim_start().len());
            offset += raw.len() + 1;
            let item = raw.trim();
            let (name, spec) = match item.split_once('=') {
                Some((n, s)) => (n.trim().to_string(), s.trim()),
                None => (default_name(i), item),
            };
            let factor = if spec == "Z" {
                FactorSpec::infinite()
            } else if let Some(digits) = spec.strip_prefix('Z') {
                let n: u64 = digits
                    .parse()
                    .map_err(|_| Error::parse(pos, format!("bad factor `{spec}`")))?;
                FactorSpec::cyclic(n).map_err(|e| Error::parse(pos, e.to_string()))?
            } else {
                return Err(Error::parse(pos, format!("bad factor `{spec}`")));
            };
            factors.push(factor);
            names.push(name);
        }
        Context::new(factors, names)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, id: usize) -> &FactorSpec {
        &self.factors[id]
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.factors.iter().all(|f| !f.is_finite())
    }

    /// The `--factors` string that parses back to this context.
    pub fn spec_string(&self) -> String {
        self.factors
            .iter()
            .zip(&self.names)
            .map(|(f, n)| format!("{n}={}", f.label()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// A nonidentity element `g^exp` of the factor `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub factor: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(factor: usize, exp: i64) -> Self {
        Letter { factor, exp }
    }

    pub fn inverse_raw(self) -> Self {
        Letter {
            factor: self.factor,
            exp: -self.exp,
        }
    }
}

/// An element of the free product, in reduced form.
#[derive(Clone)]
pub struct Word {
    ctx: Ctx,
    letters: Vec<Letter>,
}

pub(crate) fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Appends `letter` to a reduced stack, merging and cancelling as needed.
fn push_reduced(ctx: &Context, stack: &mut Vec<Letter>, letter: Letter) {
    let spec = &ctx.factors[letter.factor];
    let Some(exp) = spec.canonical_exponent(letter.exp) else {
        return;
    };
    if let Some(top) = stack.last_mut() {
        if top.factor == letter.factor {
            match spec.canonical_exponent(top.exp + exp) {
                Some(e) => top.exp = e,
                None => {
                    stack.pop();
                }
            }
            return;
        }
    }
    stack.push(Letter::new(letter.factor, exp));
}

impl Word {
    pub fn identity(ctx: &Ctx) -> Word {
        Word {
            ctx: ctx.clone(),
            letters: Vec::new(),
        }
    }

    /// Reduces an arbitrary letter sequence to normal form.
    pub fn normalize(ctx: &Ctx, raw: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut stack = Vec::new();
        for l in raw {
            if l.factor >= ctx.len() {
                return Err(Error::InvalidFactor {
                    index: l.factor,
                    count: ctx.len(),
                });
            }
            push_reduced(ctx, &mut stack, l);
        }
        Ok(Word {
            ctx: ctx.clone(),
            letters: stack,
        })
    }

    /// Single-letter word `g_factor^exp` (possibly the identity).
    pub fn letter(ctx: &Ctx, factor: usize, exp: i64) -> Result<Word> {
        Word::normalize(ctx, [Letter::new(factor, exp)])
    }

    pub(crate) fn from_reduced(ctx: &Ctx, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0].factor != w[1].factor));
        Word {
            ctx: ctx.clone(),
            letters,
        }
    }

    /// Parses whitespace-separated `name` / `name^k` tokens.
    pub fn parse(ctx: &Ctx, text: &str) -> Result<Word> {
        let mut raw = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            let token = &text[start..i];
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e.parse().map_err(|_| {
                        Error::parse(start + n.len() + 1, format!("bad exponent `{e}`"))
                    })?;
                    if exp == 0 {
                        return Err(Error::parse(
                            start + n.len() + 1,
                            "exponent must be nonzero",
                        ));
                    }
                    (n, exp)
                }
                None => (token, 1),
            };
            let factor = ctx
                .lookup(name)
                .ok_or_else(|| Error::parse(start, format!("unknown generator `{name}`")))?;
            raw.push(Letter::new(factor, exp));
        }
        Word::normalize(ctx, raw)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_ctx(&self, other: &Word) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut stack = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&self.ctx, &mut stack, l);
        }
        Word {
            ctx: self.ctx.clone(),
            letters: stack,
        }
    }

    pub fn inverse(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| {
                let e = self.ctx.factors[l.factor]
                    .canonical_exponent(-l.exp)
                    .expect("inverse of a nonidentity letter");
                Letter::new(l.factor, e)
            })
            .collect();
        Word {
            ctx: self.ctx.clone(),
            letters,
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity(&self.ctx);
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        acc
    }

    /// `s⁻¹ · self · s`.
    pub fn conjugate(&self, s: &Word) -> Result<Word> {
        self.check_ctx(s)?;
        Ok(s.inverse().mul_unchecked(self).mul_unchecked(s))
    }

    /// `s · self · s⁻¹`.
    pub(crate) fn conjugated_by_left(&self, s: &Word) -> Word {
        s.mul_unchecked(self).mul_unchecked(&s.inverse())
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &Word, y: &Word) -> Result<Word> {
        x.check_ctx(y)?;
        Ok(commutator_unchecked(x, y))
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced (or of length at most one).
    pub fn cyclic_reduce(&self) -> CyclicCore {
        let l = &self.letters;
        if l.len() <= 1 {
            return CyclicCore {
                core: self.clone(),
                conjugator: Word::identity(&self.ctx),
            };
        }
        let (mut i, mut j) = (0usize, l.len() - 1);
        while i < j && l[i].factor == l[j].factor {
            let spec = &self.ctx.factors[l[i].factor];
            if spec.canonical_exponent(l[i].exp + l[j].exp).is_none() {
                i += 1;
                j -= 1;
                continue;
            }
            // x M y  =  x (M y x) x⁻¹ with y x a single letter
            let merged = Letter::new(
                l[i].factor,
                spec.canonical_exponent(l[i].exp + l[j].exp).unwrap(),
            );
            let mut core = l[i + 1..j].to_vec();
            core.push(merged);
            return CyclicCore {
                core: Word::from_reduced(&self.ctx, core),
                conjugator: Word::from_reduced(&self.ctx, l[..=i].to_vec()),
            };
        }
        CyclicCore {
            core: Word::from_reduced(&self.ctx, l[i..=j].to_vec()),
            conjugator: Word::from_reduced(&self.ctx, l[..i].to_vec()),
        }
    }

    /// Whether `self` is nonempty and `self²` is reduced.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.len() >= 2 && a.factor != b.factor,
            _ => false,
        }
    }

    pub fn is_conjugate(&self, other: &Word) -> Result<bool> {
        self.check_ctx(other)?;
        Ok(is_conjugate_unchecked(self, other))
    }

    /// Which factor (if any) the element is conjugate into.
    pub fn conjugate_into_factor(&self) -> Option<FactorClass> {
        let core = self.cyclic_reduce().core;
        match core.letters.as_slice() {
            [] => Some(FactorClass::Identity),
            [l] => Some(FactorClass::Factor(FactorId(l.factor))),
            _ => None,
        }
    }

    /// Orders of the letters of the cyclic core.
    pub fn letter_orders(&self) -> BTreeSet<Order> {
        self.cyclic_reduce()
            .core
            .letters
            .iter()
            .map(|l| self.ctx.factors[l.factor].element_order(l.exp))
            .collect()
    }

    /// Per-factor exponent sums, reduced modulo finite factor orders.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.ctx.len()];
        for l in &self.letters {
            sums[l.factor] += l.exp;
        }
        reduce_sums(&self.ctx, &mut sums);
        sums
    }

    /// Least rotation of the cyclic core; equal for conjugate elements.
    pub fn conjugacy_key(&self) -> Vec<Letter> {
        let core = self.cyclic_reduce().core;
        least_rotation(&core.letters)
    }

    /// Order of the element in the free product.
    pub fn order(&self) -> Order {
        let core = self.cyclic_reduce().core;
        match core.letters.as_slice() {
            [] => Order::Finite(1),
            [l] => self.ctx.factors[l.factor].element_order(l.exp),
            _ => Order::Infinite,
        }
    }

    /// Whether every component fits the search bounds.
    pub fn within(&self, bounds: WordBounds) -> bool {
        self.len() <= bounds.max_len
            && self
                .letters
                .iter()
                .all(|l| self.ctx.factors[l.factor].is_finite() || l.exp.abs() <= bounds.max_exp)
    }

    /// Largest absolute exponent over letters in infinite factors.
    pub fn max_infinite_exp(&self) -> i64 {
        self.letters
            .iter()
            .filter(|l| !self.ctx.factors[l.factor].is_finite())
            .map(|l| l.exp.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Letter-sequence comparison used for deterministic tie-breaking.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

pub(crate) fn reduce_sums(ctx: &Context, sums: &mut [i64]) {
    for (i, s) in sums.iter_mut().enumerate() {
        if let Order::Finite(n) = ctx.factors[i].order {
            *s = s.rem_euclid(n as i64);
        }
    }
}

pub(crate) fn commutator_unchecked(x: &Word, y: &Word) -> Word {
    x.inverse()
        .mul_unchecked(&y.inverse())
        .mul_unchecked(x)
        .mul_unchecked(y)
}

pub(crate) fn is_conjugate_unchecked(u: &Word, v: &Word) -> bool {
    let a = u.cyclic_reduce().core;
    let b = v.cyclic_reduce().core;
    if a.len() != b.len() {
        return false;
    }
    if a.len() <= 1 {
        return a.letters == b.letters;
    }
    rotation_offset(&a.letters, &b.letters).is_some()
}

/// Smallest `k` with `b == a[k..] ++ a[..k]`.
pub(crate) fn rotation_offset<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0);
    }
    (0..a.len()).find(|&k| a[k..].iter().chain(&a[..k]).zip(b).all(|(x, y)| x == y))
}

pub(crate) fn least_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    (0..s.len().max(1))
        .map(|k| {
            if s.is_empty() {
                Vec::new()
            } else {
                s[k..].iter().chain(&s[..k]).cloned().collect::<Vec<_>>()
            }
        })
        .min()
        .unwrap_or_default()
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_ctx(&self.ctx, &other.ctx)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self.ctx.name(l.factor);
            if l.exp == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Result of [`Word::cyclic_reduce`]: `original = conjugator · core · conjugator⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCore {
    pub core: Word,
    pub conjugator: Word,
}

/// Outcome of [`Word::conjugate_into_factor`] when the answer is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorClass {
    Identity,
    Factor(FactorId),
}

/// Bounds on a single component word: length and |exponent| in `Z` factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordBounds {
    pub max_len: usize,
    pub max_exp: i64,
}

impl WordBounds {
    /// The standard bounds for a search radius: length and exponents at most `radius`.
    pub fn radius(radius: usize) -> Self {
        WordBounds {
            max_len: radius,
            max_exp: radius as i64,
        }
    }
}
