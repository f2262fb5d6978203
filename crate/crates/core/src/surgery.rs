//! From a factorization to a reduced closed diagram.
//!
//! The seed is a single polygon `H` read off the identity
//! `(Π sᵢuᵢsᵢ⁻¹)⁻¹ · Π[vᵢ,tᵢ] · Π sⱼdⱼsⱼ⁻¹ = 1`. Gluing its sides and capping the
//! leftover boundary yields a closed diagram of extended genus `2k + ℓ`, which
//! is then reduced by spur removal, folding and cutting.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{validate_diagram, LabeledDiagram, Side, Tau};
use crate::error::{Error, Result};
use crate::factorization::{MixedFactorization, MixedRepr};
use crate::map::{ClosedMap, Dart};
use crate::word::{same_ctx, Ctx, Letter, Word};

/// `w₀ = s₁u₁s₁⁻¹ ⋯ s_m u_m s_m⁻¹` together with a mixed factorization of `w₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedInput {
    u_list: Vec<Word>,
    s_list: Vec<Word>,
    mixed: MixedFactorization,
}

impl SeedInput {
    pub fn new(u_list: Vec<Word>, s_list: Vec<Word>, mixed: MixedFactorization) -> Result<Self> {
        let ctx = mixed.context().clone();
        if ctx.len() != 2 {
            return Err(Error::InvalidSeed(
                "seed input needs a two-factor context".into(),
            ));
        }
        if u_list.is_empty() {
            return Err(Error::InvalidSeed("at least one word u is required".into()));
        }
        if u_list.len() != s_list.len() {
            return Err(Error::InvalidSeed(format!(
                "{} words u but {} conjugators",
                u_list.len(),
                s_list.len()
            )));
        }
        if u_list
            .iter()
            .chain(&s_list)
            .any(|w| !same_ctx(w.context(), &ctx))
        {
            return Err(Error::ContextMismatch);
        }
        for (i, u) in u_list.iter().enumerate() {
            if !u.is_cyclically_reduced() {
                return Err(Error::InvalidSeed(format!(
                    "u{} = {u} is not cyclically reduced",
                    i + 1
                )));
            }
        }
        let input = SeedInput {
            u_list,
            s_list,
            mixed,
        };
        let lhs = input.product();
        let rhs = input.mixed.evaluate()?;
        if lhs != rhs {
            return Err(Error::InvalidSeed(format!(
                "conjugates multiply to {lhs} but the factorization evaluates to {rhs}"
            )));
        }
        Ok(input)
    }

    pub fn context(&self) -> &Ctx {
        self.mixed.context()
    }

    pub fn u_list(&self) -> &[Word] {
        &self.u_list
    }

    pub fn s_list(&self) -> &[Word] {
        &self.s_list
    }

    pub fn mixed(&self) -> &MixedFactorization {
        &self.mixed
    }

    /// `Π sᵢuᵢsᵢ⁻¹`.
    pub fn product(&self) -> Word {
        self.u_list
            .iter()
            .zip(&self.s_list)
            .fold(Word::identity(self.context()), |acc, (u, s)| {
                acc.mul_unchecked(&u.conjugated_by_left(s))
            })
    }

    /// `2k + ℓ` of the factorization.
    pub fn genus_bound(&self) -> i64 {
        2 * self.mixed.k() as i64 + self.mixed.l() as i64
    }

    pub fn to_repr(&self) -> SeedRepr {
        SeedRepr {
            u_list: self.u_list.iter().map(Word::to_string).collect(),
            s_list: self.s_list.iter().map(Word::to_string).collect(),
            mixed: self.mixed.to_repr(),
        }
    }

    pub fn from_repr(repr: &SeedRepr) -> Result<Self> {
        let mixed = MixedFactorization::from_repr(&repr.mixed)?;
        let ctx = mixed.context().clone();
        let parse = |xs: &[String]| -> Result<Vec<Word>> {
            xs.iter().map(|x| Word::parse(&ctx, x)).collect()
        };
        SeedInput::new(parse(&repr.u_list)?, parse(&repr.s_list)?, mixed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("seed serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SeedRepr =
            serde_json::from_str(text).map_err(|e| crate::error::json_error(text, &e))?;
        SeedInput::from_repr(&repr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRepr {
    pub u_list: Vec<String>,
    pub s_list: Vec<String>,
    pub mixed: MixedRepr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Identification,
    Cap,
    Spur,
    Fold,
    CutAndCap,
}

/// One surgery step. Measures are absent while the surface still has boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryStep {
    pub case: StepKind,
    pub tau_before: Option<Tau>,
    pub tau_after: Option<Tau>,
    pub eg_before: Option<i64>,
    pub eg_after: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryTrace {
    pub steps: Vec<SurgeryStep>,
}

impl SurgeryTrace {
    /// Number of spur, fold and cut steps.
    pub fn reduction_steps(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| {
                matches!(
                    s.case,
                    StepKind::Spur | StepKind::Fold | StepKind::CutAndCap
                )
            })
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Mutable dart structure. `side[e]` is the type of the head of `e`.
#[derive(Clone, Debug)]
struct Work {
    ctx: Ctx,
    alpha: Vec<Dart>,
    next: Vec<Dart>,
    phi: Vec<Word>,
    side: Vec<Side>,
    boundary: Vec<bool>,
    alive: Vec<bool>,
}

impl Work {
    fn from_diagram(d: &LabeledDiagram) -> Work {
        let m = d.map();
        let n = m.dart_count();
        let boundary = (0..n).map(|e| d.is_boundary_face(m.face_of(e))).collect();
        Work {
            ctx: d.context().clone(),
            alpha: m.alphas().to_vec(),
            next: (0..n).map(|e| m.next(e)).collect(),
            phi: d.phis().to_vec(),
            side: (0..n).map(|e| d.theta(m.head(e))).collect(),
            boundary,
            alive: vec![true; n],
        }
    }

    fn prev(&self, e: Dart) -> Dart {
        let mut x = e;
        while self.next[x] != e {
            x = self.next[x];
        }
        x
    }

    fn remove(&mut self, e: Dart) {
        self.alive[e] = false;
    }

    /// Identifies the edge of `x` with the reverse of the edge of `y`; both
    /// must currently border the boundary.
    fn glue(&mut self, x: Dart, y: Dart) -> Result<()> {
        let (ox, oy) = (self.alpha[x], self.alpha[y]);
        if !self.boundary[ox]
            || !self.boundary[oy]
            || ox == oy
            || self.boundary[x]
            || self.boundary[y]
        {
            return Err(Error::Invariant(format!(
                "darts {x} and {y} cannot be glued"
            )));
        }
        let (px, nx) = (self.prev(ox), self.next[ox]);
        let (py, ny) = (self.prev(oy), self.next[oy]);
        self.remove(ox);
        self.remove(oy);
        self.alpha[x] = y;
        self.alpha[y] = x;
        if nx == oy && ny == ox {
        } else if nx == oy {
            self.next[px] = ny;
        } else if ny == ox {
            self.next[py] = nx;
        } else {
            self.next[px] = ny;
            self.next[py] = nx;
        }
        Ok(())
    }

    /// Compacts the live darts into a diagram; also returns the old id of each new dart.
    fn to_diagram(&self) -> Result<(LabeledDiagram, Vec<Dart>)> {
        let old: Vec<Dart> = (0..self.alpha.len()).filter(|&e| self.alive[e]).collect();
        let mut new_id = vec![usize::MAX; self.alpha.len()];
        for (i, &e) in old.iter().enumerate() {
            new_id[e] = i;
        }
        let lookup = |e: Dart| -> Result<Dart> {
            match new_id[e] {
                usize::MAX => Err(Error::Invariant(format!("dangling reference to dart {e}"))),
                i => Ok(i),
            }
        };
        let mut alpha = Vec::with_capacity(old.len());
        let mut sigma = Vec::with_capacity(old.len());
        for &e in &old {
            alpha.push(lookup(self.alpha[e])?);
            sigma.push(lookup(self.alpha[self.next[e]])?);
        }
        let map = ClosedMap::from_permutations(alpha, sigma)?;
        let mut theta = Vec::with_capacity(map.vertex_count());
        for v in 0..map.vertex_count() {
            let darts = map.vertex(v);
            let side = self.side[old[darts[0]]];
            if darts.iter().any(|&e| self.side[old[e]] != side) {
                return Err(Error::Invariant(format!(
                    "vertex {v} has corners of both types"
                )));
            }
            theta.push(side);
        }
        let mut boundary = BTreeSet::new();
        for (f, cycle) in map.faces().iter().enumerate() {
            let b = self.boundary[old[cycle[0]]];
            if cycle.iter().any(|&e| self.boundary[old[e]] != b) {
                return Err(Error::Invariant(format!("face {f} is partly boundary")));
            }
            if b {
                boundary.insert(f);
            }
        }
        let phi = old.iter().map(|&e| self.phi[e].clone()).collect();
        let d = LabeledDiagram::new(&self.ctx, map, theta, phi, boundary)?;
        Ok((d, old))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Segment {
    S(usize),
    UInv(usize),
    SInv(usize),
    VInv(usize),
    TInv(usize),
    V(usize),
    T(usize),
    D(usize),
}

/// The seed polygon with the location of each labelled path.
struct Seed {
    work: Work,
    /// `H` darts of each path, in order along `∂H`.
    paths: Vec<(Segment, Vec<Dart>)>,
}

impl Seed {
    fn path(&self, s: Segment) -> &[Dart] {
        &self
            .paths
            .iter()
            .find(|(t, _)| *t == s)
            .expect("segment laid out")
            .1
    }
}

fn letter_side(l: &Letter) -> Side {
    Side::from_factor(l.factor)
}

/// `s` with a trailing letter from the factor of `d` absorbed into `d`.
fn canonical_conjugator(s: &Word, d: &Letter) -> Word {
    match s.last() {
        Some(l) if l.factor == d.factor => {
            Word::from_reduced(s.context(), s.letters()[..s.len() - 1].to_vec())
        }
        _ => s.clone(),
    }
}

fn seed_segments(input: &SeedInput) -> Vec<(Segment, Vec<Letter>, bool)> {
    let mut out = Vec::new();
    for i in (0..input.u_list.len()).rev() {
        let s = &input.s_list[i];
        out.push((Segment::S(i), s.letters().to_vec(), true));
        out.push((
            Segment::UInv(i),
            input.u_list[i].inverse().letters().to_vec(),
            false,
        ));
        out.push((Segment::SInv(i), s.inverse().letters().to_vec(), false));
    }
    for (i, (v, t)) in input.mixed.commutators().iter().enumerate() {
        out.push((Segment::VInv(i), v.inverse().letters().to_vec(), false));
        out.push((Segment::TInv(i), t.inverse().letters().to_vec(), false));
        out.push((Segment::V(i), v.letters().to_vec(), true));
        out.push((Segment::T(i), t.letters().to_vec(), true));
    }
    for (j, (s, d)) in input.mixed.conjugated_letters().iter().enumerate() {
        let s = canonical_conjugator(s, d);
        let mut letters = s.letters().to_vec();
        letters.push(*d);
        letters.extend(s.inverse().letters());
        out.push((Segment::D(j), letters, true));
    }
    out
}

fn lay_out(input: &SeedInput) -> Seed {
    let ctx = input.context().clone();
    let one = Word::identity(&ctx);
    // vertices of ∂H in order, with type and corner label
    let mut verts: Vec<(Side, Word)> = Vec::new();
    let mut ranges = Vec::new();
    for (seg, letters, positive) in seed_segments(input) {
        let (start, end) = match (letters.first(), letters.last()) {
            (Some(a), Some(b)) => (letter_side(a).other(), letter_side(b).other()),
            _ if positive => (Side::A, Side::B),
            _ => (Side::B, Side::A),
        };
        if let Some((last, _)) = verts.last() {
            let last = *last;
            verts.push((last.other(), one.clone()));
            if last != start {
                verts.push((last, one.clone()));
            }
        }
        let first = verts.len();
        verts.push((start, one.clone()));
        for l in &letters {
            verts.push((letter_side(l), Word::from_reduced(&ctx, vec![*l])));
        }
        verts.push((end, one.clone()));
        ranges.push((seg, first, letters.len() + 1));
    }
    // closing spacer back to the first vertex
    let (first_side, last_side) = (verts[0].0, verts[verts.len() - 1].0);
    verts.push((last_side.other(), one.clone()));
    if last_side != first_side {
        verts.push((last_side, one.clone()));
    }
    let n = verts.len();
    // H dart h_i = 2i runs from vertex i to vertex i+1; its reverse 2i+1 borders the outside
    let mut work = Work {
        ctx: ctx.clone(),
        alpha: vec![0; 2 * n],
        next: vec![0; 2 * n],
        phi: vec![one; 2 * n],
        side: vec![Side::A; 2 * n],
        boundary: vec![false; 2 * n],
        alive: vec![true; 2 * n],
    };
    for i in 0..n {
        let (h, o) = (2 * i, 2 * i + 1);
        let j = (i + 1) % n;
        work.alpha[h] = o;
        work.alpha[o] = h;
        work.next[h] = 2 * j;
        work.next[o] = 2 * ((i + n - 1) % n) + 1;
        work.phi[h] = verts[j].1.clone();
        work.side[h] = verts[j].0;
        work.side[o] = verts[i].0;
        work.boundary[o] = true;
    }
    let paths = ranges
        .into_iter()
        .map(|(seg, first, len)| (seg, (first..first + len).map(|i| 2 * i).collect()))
        .collect();
    Seed { work, paths }
}

/// The seed diagram `Δ₀`: one interior face `H` and one boundary face.
pub fn build_seed_diagram(input: &SeedInput) -> Result<LabeledDiagram> {
    let d = lay_out(input).work.to_diagram()?.0;
    check_valid(&d)?;
    Ok(d)
}

fn check_valid(d: &LabeledDiagram) -> Result<()> {
    match validate_diagram(d).first() {
        None => Ok(()),
        Some(v) => Err(Error::Invariant(format!("diagram condition fails: {v:?}"))),
    }
}

/// Glues `p` to the reverse of `q`.
fn glue_paths(work: &mut Work, p: &[Dart], q: &[Dart]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Invariant(format!(
            "paths of lengths {} and {} cannot be identified",
            p.len(),
            q.len()
        )));
    }
    for (j, &x) in p.iter().enumerate().rev() {
        work.glue(x, q[q.len() - 1 - j])?;
    }
    Ok(())
}

/// Performs the identifications on the seed and caps every boundary cycle.
fn identify_and_cap(input: &SeedInput, trace: &mut SurgeryTrace) -> Result<LabeledDiagram> {
    let seed = lay_out(input);
    let mut work = seed.work.clone();
    let ident = |trace: &mut SurgeryTrace| {
        trace.steps.push(SurgeryStep {
            case: StepKind::Identification,
            tau_before: None,
            tau_after: None,
            eg_before: None,
            eg_after: None,
        })
    };
    for j in 0..input.mixed.l() {
        let p = seed.path(Segment::D(j));
        let half = p.len() / 2;
        glue_paths(&mut work, &p[..half], &p[half..])?;
    }
    ident(trace);
    for i in 0..input.u_list.len() {
        glue_paths(
            &mut work,
            seed.path(Segment::S(i)),
            seed.path(Segment::SInv(i)),
        )?;
    }
    ident(trace);
    for i in 0..input.mixed.k() {
        glue_paths(
            &mut work,
            seed.path(Segment::VInv(i)),
            seed.path(Segment::V(i)),
        )?;
        glue_paths(
            &mut work,
            seed.path(Segment::TInv(i)),
            seed.path(Segment::T(i)),
        )?;
    }
    ident(trace);
    // a boundary dart 2x+1 faces the corner of H keyed by h_{x-1}
    let n = work.alpha.len() / 2;
    let open: Vec<Dart> = (0..work.alpha.len())
        .filter(|&o| work.alive[o] && work.boundary[o])
        .collect();
    for o in open {
        let x = o / 2;
        work.phi[o] = work.phi[2 * ((x + n - 1) % n)].inverse();
        work.boundary[o] = false;
    }
    let d = work.to_diagram()?.0;
    check_valid(&d)?;
    trace.steps.push(SurgeryStep {
        case: StepKind::Cap,
        tau_before: None,
        tau_after: Some(d.tau()),
        eg_before: None,
        eg_after: Some(d.extended_genus()?),
    });
    Ok(d)
}

/// The closed diagram `Δ₄`.
pub fn perform_identifications(d0: &LabeledDiagram, input: &SeedInput) -> Result<LabeledDiagram> {
    let expected = build_seed_diagram(input)?;
    if d0 != &expected {
        return Err(Error::InvalidDiagram(
            "seed diagram does not match the input".into(),
        ));
    }
    identify_and_cap(input, &mut SurgeryTrace::default())
}

/// Every component has a face whose label is `≡₁` some `uᵢ`.
pub fn check_property_p(d: &LabeledDiagram, u_list: &[Word]) -> bool {
    let m = d.map();
    d.map().components().iter().all(|c| {
        c.darts.iter().any(|&e| {
            let f = m.face_of(e);
            m.face(f)[0] == e
                && !d.is_boundary_face(f)
                && d.face_corner_labels(f).is_ok_and(|labels| {
                    u_list.iter().any(|u| crate::diagram::equiv_one(&labels, u))
                })
        })
    })
}

/// Whether the `uᵢ` can be assigned to pairwise distinct faces with `≡₁` labels.
pub fn match_faces(d: &LabeledDiagram, u_list: &[Word]) -> bool {
    let labels: Vec<Vec<Word>> = (0..d.map().face_count())
        .filter(|&f| !d.is_boundary_face(f))
        .filter_map(|f| d.face_corner_labels(f).ok())
        .collect();
    let adj: Vec<Vec<usize>> = u_list
        .iter()
        .map(|u| {
            (0..labels.len())
                .filter(|&f| crate::diagram::equiv_one(&labels[f], u))
                .collect()
        })
        .collect();
    let mut owner = vec![usize::MAX; labels.len()];
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &f in &adj[i] {
            if !std::mem::replace(&mut seen[f], true)
                && (owner[f] == usize::MAX || augment(owner[f], adj, owner, seen))
            {
                owner[f] = i;
                return true;
            }
        }
        false
    }
    (0..u_list.len()).all(|i| augment(i, &adj, &mut owner, &mut vec![false; labels.len()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Case {
    Spur,
    Fold,
    Cut,
}

/// The identity corner to treat next, if any.
fn select_corner(d: &LabeledDiagram) -> Option<(Case, Dart)> {
    let m = d.map();
    (0..m.dart_count())
        .filter(|&e| d.phi(e).is_empty())
        .map(|e| {
            let f = m.next(e);
            let case = if f == m.alpha(e) {
                Case::Spur
            } else if m.tail(e) != m.head(f) {
                Case::Fold
            } else {
                Case::Cut
            };
            (case, m.face_of(e), e)
        })
        .min()
        .map(|(case, _, e)| (case, e))
}

fn apply_case(d: &LabeledDiagram, case: Case, e: Dart, u_list: &[Word]) -> Result<LabeledDiagram> {
    let m = d.map();
    let mut work = Work::from_diagram(d);
    let f = m.next(e);
    match case {
        Case::Spur | Case::Fold => {
            if case == Case::Spur && m.degree(m.tail(e)) == 1 {
                return Err(Error::Invariant(format!(
                    "edge of dart {e} is an isolated bigon sphere"
                )));
            }
            let p = m.prev(e);
            work.next[p] = m.next(f);
            work.phi[p] = d.phi(p).mul_unchecked(d.phi(f));
            if case == Case::Fold {
                let (ae, af) = (m.alpha(e), m.alpha(f));
                work.alpha[ae] = af;
                work.alpha[af] = ae;
            }
            work.remove(e);
            work.remove(f);
            Ok(work.to_diagram()?.0)
        }
        Case::Cut => {
            let (ae, af) = (m.alpha(e), m.alpha(f));
            work.alpha[e] = f;
            work.alpha[f] = e;
            work.alpha[ae] = af;
            work.alpha[af] = ae;
            let cut = work.to_diagram()?.0;
            let cm = cut.map();
            let mut trivial = Vec::new();
            for c in cm.components() {
                let all_one = c.darts.iter().all(|&x| {
                    let face = cm.face_of(x);
                    cut.face_label(face).is_ok_and(|w| w.is_empty())
                });
                if all_one {
                    trivial.push(c);
                }
            }
            if trivial.len() > 1 {
                return Err(Error::Invariant(format!(
                    "cut produced {} components with trivial faces",
                    trivial.len()
                )));
            }
            let Some(c) = trivial.pop() else {
                return Ok(cut);
            };
            if c.euler_characteristic() == 2 {
                let irregular = cut.irregular_vertices();
                let r = c
                    .darts
                    .iter()
                    .filter(|&&x| cm.vertex_rep(cm.head(x)) == x && irregular.contains(&cm.head(x)))
                    .count();
                if r == 1 {
                    return Err(Error::Invariant(format!(
                        "pruned sphere has exactly one irregular vertex: {}",
                        cut.to_json()
                    )));
                }
            }
            let mut work = Work::from_diagram(&cut);
            for &x in &c.darts {
                work.remove(x);
            }
            let pruned = work.to_diagram()?.0;
            if !check_property_p(&pruned, u_list) {
                return Err(Error::Invariant("pruning removed a labelled face".into()));
            }
            Ok(pruned)
        }
    }
}

/// Reduces a closed diagram with property (P), checking every step.
pub fn reduce_diagram(
    d: &LabeledDiagram,
    u_list: &[Word],
) -> Result<(LabeledDiagram, SurgeryTrace)> {
    let mut trace = SurgeryTrace::default();
    let d = reduce_into(d, u_list, &mut trace)?;
    Ok((d, trace))
}

fn reduce_into(
    d: &LabeledDiagram,
    u_list: &[Word],
    trace: &mut SurgeryTrace,
) -> Result<LabeledDiagram> {
    if !d.is_closed() {
        return Err(Error::InvalidDiagram(
            "reduction needs a closed diagram".into(),
        ));
    }
    check_valid(d)?;
    if !check_property_p(d, u_list) {
        return Err(Error::Invariant("property (P) fails on the input".into()));
    }
    let matched = match_faces(d, u_list);
    let watchdog = d.map().edge_count() * (2 * u_list.len() + d.r0() + 2);
    let mut cur = d.clone();
    let mut steps = 0;
    while let Some((case, e)) = select_corner(&cur) {
        steps += 1;
        if steps > watchdog {
            return Err(Error::Invariant(format!(
                "reduction exceeded {watchdog} steps"
            )));
        }
        let next = apply_case(&cur, case, e, u_list)?;
        let (tb, ta) = (cur.tau(), next.tau());
        let (gb, ga) = (cur.extended_genus()?, next.extended_genus()?);
        trace.steps.push(SurgeryStep {
            case: match case {
                Case::Spur => StepKind::Spur,
                Case::Fold => StepKind::Fold,
                Case::Cut => StepKind::CutAndCap,
            },
            tau_before: Some(tb),
            tau_after: Some(ta),
            eg_before: Some(gb),
            eg_after: Some(ga),
        });
        if ta >= tb {
            return Err(Error::Invariant(format!(
                "tau did not decrease: {tb:?} -> {ta:?}"
            )));
        }
        if ga > gb {
            return Err(Error::Invariant(format!(
                "extended genus grew from {gb} to {ga}"
            )));
        }
        check_valid(&next)?;
        if !check_property_p(&next, u_list) {
            return Err(Error::Invariant("property (P) lost".into()));
        }
        if matched && !match_faces(&next, u_list) {
            return Err(Error::Invariant(
                "a face labelled by some u was lost".into(),
            ));
        }
        cur = next;
    }
    Ok(cur)
}

/// Result of the full construction.
#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub diagram: LabeledDiagram,
    pub extended_genus: i64,
    pub trace: SurgeryTrace,
}

/// Seed, identifications, cap and reduction, with the final count of faces checked.
pub fn lemma1_pipeline(input: &SeedInput) -> Result<PipelineOutcome> {
    let mut trace = SurgeryTrace::default();
    let d4 = identify_and_cap(input, &mut trace)?;
    let eg4 = d4.extended_genus()?;
    if eg4 != input.genus_bound() || d4.euler_characteristic() != 2 - 2 * input.mixed.k() as i64 {
        return Err(Error::Invariant(format!(
            "closed seed has eg {eg4} and chi {}, expected {} and {}",
            d4.euler_characteristic(),
            input.genus_bound(),
            2 - 2 * input.mixed.k() as i64
        )));
    }
    let d = reduce_into(&d4, &input.u_list, &mut trace)?;
    if !d.is_reduced() {
        return Err(Error::Invariant("reduction stopped early".into()));
    }
    if d.map().face_count() != input.u_list.len() || !match_faces(&d, &input.u_list) {
        return Err(Error::Invariant(format!(
            "reduced diagram has {} faces for {} words",
            d.map().face_count(),
            input.u_list.len()
        )));
    }
    let eg = d.extended_genus()?;
    if eg > eg4 {
        return Err(Error::Invariant(format!("eg {eg} exceeds {eg4}")));
    }
    Ok(PipelineOutcome {
        diagram: d,
        extended_genus: eg,
        trace,
    })
}

/// A valid seed input over `ctx` whose words all have length at most `max_len`,
/// built from a factorization with `k ≤ max_k`, `ℓ ≤ max_l` and `m ≤ max_m`.
pub fn random_seed_input<R: rand::Rng>(
    ctx: &Ctx,
    rng: &mut R,
    max_k: usize,
    max_l: usize,
    max_m: usize,
    max_len: usize,
) -> SeedInput {
    use crate::random::random_word;
    loop {
        let k = rng.gen_range(0..=max_k);
        let l = rng.gen_range(0..=max_l);
        if k + l == 0 {
            continue;
        }
        let comms = (0..k)
            .map(|_| {
                (
                    random_word(ctx, rng, max_len),
                    random_word(ctx, rng, max_len),
                )
            })
            .collect();
        let letters = (0..l)
            .map(|_| {
                let s = random_word(ctx, rng, max_len);
                (s, crate::random::random_letter(ctx, rng))
            })
            .collect();
        let Ok(mixed) = MixedFactorization::new(ctx, comms, letters) else {
            continue;
        };
        let w0 = mixed.evaluate().expect("components share the context");
        let m = rng.gen_range(1..=max_m);
        let mut u_list = Vec::new();
        let mut s_list = Vec::new();
        let mut rest = w0;
        for _ in 1..m {
            let Some(u) = crate::random::random_cyclic_word(ctx, rng, max_len.max(2)) else {
                break;
            };
            let s = random_word(ctx, rng, max_len);
            rest = u.conjugated_by_left(&s).inverse().mul_unchecked(&rest);
            u_list.push(u);
            s_list.push(s);
        }
        let core = rest.cyclic_reduce();
        if !core.core.is_cyclically_reduced() {
            continue;
        }
        u_list.push(core.core);
        s_list.push(core.conjugator);
        if let Ok(input) = SeedInput::new(u_list, s_list, mixed) {
            return input;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::build_map;
    use crate::word::Context;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zz() -> Ctx {
        Context::parse("Z,Z").unwrap()
    }

    fn w(ctx: &Ctx, s: &str) -> Word {
        Word::parse(ctx, s).unwrap()
    }

    fn torus_input(ctx: &Ctx) -> SeedInput {
        let mixed = MixedFactorization::new(ctx, vec![(w(ctx, "a"), w(ctx, "b"))], vec![]).unwrap();
        SeedInput::new(
            vec![w(ctx, "a^-1 b^-1 a b")],
            vec![Word::identity(ctx)],
            mixed,
        )
        .unwrap()
    }

    fn letter_input(ctx: &Ctx) -> SeedInput {
        let one = Word::identity(ctx);
        let mixed = MixedFactorization::new(
            ctx,
            vec![],
            vec![
                (one.clone(), Letter::new(0, 1)),
                (one.clone(), Letter::new(1, 1)),
            ],
        )
        .unwrap();
        SeedInput::new(vec![w(ctx, "a b")], vec![one], mixed).unwrap()
    }

    fn sphere_input(ctx: &Ctx) -> SeedInput {
        let one = Word::identity(ctx);
        let mixed =
            MixedFactorization::new(ctx, vec![], vec![(one.clone(), Letter::new(0, 1))]).unwrap();
        let u1 = w(ctx, "b a b^-1 a^-1");
        let rest = u1.inverse().multiply(&w(ctx, "a")).unwrap().cyclic_reduce();
        SeedInput::new(vec![u1, rest.core], vec![one, rest.conjugator], mixed).unwrap()
    }

    #[test]
    fn seed_polygon_is_valid() {
        let ctx = zz();
        for input in [letter_input(&ctx), torus_input(&ctx), sphere_input(&ctx)] {
            let d0 = build_seed_diagram(&input).unwrap();
            assert!(validate_diagram(&d0).is_empty());
            assert_eq!(d0.map().face_count(), 2);
            assert_eq!(d0.boundary().len(), 1);
            assert_eq!(d0.euler_characteristic(), 1);
        }
        // ab · a spacer · p(a) · spacer · p(b) · spacer
        let d0 = build_seed_diagram(&letter_input(&ctx)).unwrap();
        let h = d0.interior_faces()[0];
        let labels = d0.face_corner_labels(h).unwrap();
        let kept: Vec<String> = labels
            .iter()
            .filter(|x| !x.is_empty())
            .map(Word::to_string)
            .collect();
        assert_eq!(kept, ["b^-1", "a^-1", "a", "b"]);
    }

    #[test]
    fn seed_rejects_bad_input() {
        let ctx = zz();
        let one = Word::identity(&ctx);
        let mixed =
            MixedFactorization::new(&ctx, vec![(w(&ctx, "a"), w(&ctx, "b"))], vec![]).unwrap();
        let err = SeedInput::new(vec![w(&ctx, "b a b")], vec![one.clone()], mixed.clone());
        assert!(matches!(err, Err(Error::InvalidSeed(_))));
        let err = SeedInput::new(vec![w(&ctx, "a b")], vec![one], mixed);
        assert!(matches!(err, Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn closed_seed_counts() {
        let ctx = zz();
        for (input, chi, r0, eg) in [
            (sphere_input(&ctx), 2, 1, 1),
            (torus_input(&ctx), 0, 0, 2),
            (letter_input(&ctx), 2, 2, 2),
        ] {
            let d0 = build_seed_diagram(&input).unwrap();
            let d4 = perform_identifications(&d0, &input).unwrap();
            assert!(d4.is_closed());
            assert!(validate_diagram(&d4).is_empty());
            assert_eq!(d4.euler_characteristic(), chi);
            assert_eq!(d4.r0(), r0);
            assert_eq!(d4.extended_genus().unwrap(), eg);
            assert!(check_property_p(&d4, input.u_list()));
            assert!(match_faces(&d4, input.u_list()));
            assert_eq!(d4.map().face_count(), input.u_list().len() + 2);
        }
    }

    #[test]
    fn pipeline_examples() {
        let ctx = zz();
        for input in [sphere_input(&ctx), torus_input(&ctx), letter_input(&ctx)] {
            let out = lemma1_pipeline(&input).unwrap();
            assert!(out.diagram.is_reduced());
            assert!(out.extended_genus <= input.genus_bound());
            assert_eq!(out.diagram.map().face_count(), input.u_list().len());
            for s in out.trace.steps.iter().filter(|s| s.tau_before.is_some()) {
                assert!(s.tau_after < s.tau_before);
                assert!(s.eg_after <= s.eg_before);
            }
        }
        assert!(lemma1_pipeline(&torus_input(&ctx)).unwrap().extended_genus <= 2);
    }

    fn spur_diagram(ctx: &Ctx) -> LabeledDiagram {
        let map = build_map(&[vec![0, 3], vec![1], vec![2]], &[(0, 1), (2, 3)]).unwrap();
        let theta = (0..3)
            .map(|v| {
                if map.vertex_rep(v) == 0 {
                    Side::B
                } else {
                    Side::A
                }
            })
            .collect();
        let one = Word::identity(ctx);
        let phi = vec![w(ctx, "b"), w(ctx, "a"), one.clone(), one];
        LabeledDiagram::new(ctx, map, theta, phi, BTreeSet::new()).unwrap()
    }

    #[test]
    fn single_spur_fires_once() {
        let ctx = zz();
        let d = spur_diagram(&ctx);
        let u = [w(&ctx, "a b")];
        assert!(check_property_p(&d, &u));
        let (r, trace) = reduce_diagram(&d, &u).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].case, StepKind::Spur);
        assert_eq!(r.map().edge_count(), d.map().edge_count() - 1);
        assert!(r.is_reduced());
    }

    #[test]
    fn reduced_input_is_untouched() {
        let ctx = Context::parse("Z3,Z3").unwrap();
        let d = crate::diagram::fig1_diagram(&ctx).unwrap();
        let u = [d.face_label(0).unwrap()];
        let (r, trace) = reduce_diagram(&d, &u).unwrap();
        assert_eq!(r, d);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn property_p_detects_trivial_component() {
        let ctx = zz();
        let map = build_map(&[vec![0], vec![1]], &[(0, 1)]).unwrap();
        let one = Word::identity(&ctx);
        let d = LabeledDiagram::new(
            &ctx,
            map,
            vec![Side::A, Side::B],
            vec![one.clone(), one],
            BTreeSet::new(),
        )
        .unwrap();
        assert!(!check_property_p(&d, &[w(&ctx, "a b")]));
    }

    #[test]
    fn seed_json_round_trip() {
        let ctx = zz();
        let input = sphere_input(&ctx);
        let back = SeedInput::from_json(&input.to_json()).unwrap();
        assert_eq!(back, input);
        assert!(matches!(
            SeedInput::from_json("{"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn random_pipelines() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["Z,Z", "Z2,Z3", "Z3,Z3", "Z,Z4"] {
            let ctx = Context::parse(spec).unwrap();
            for _ in 0..60 {
                let input = random_seed_input(&ctx, &mut rng, 2, 2, 2, 3);
                let out =
                    lemma1_pipeline(&input).unwrap_or_else(|e| panic!("{e}\n{}", input.to_json()));
                assert!(out.extended_genus <= input.genus_bound());
            }
        }
    }
}
