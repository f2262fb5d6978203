//! Labelled diagrams over a two-factor free product `A * B`.
//!
//! A corner is named by its incoming dart `e`: it sits between `e` and
//! `next(e)` at the head of `e`. Labels of corners in boundary faces are
//! ignored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ClosedMap, Dart};
use crate::word::{rotation_offset, Context, Ctx, Letter, Word};

/// Which factor a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn factor(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub fn from_factor(f: usize) -> Side {
        if f == 0 {
            Side::A
        } else {
            Side::B
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A map together with the faces excluded from the 2-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapWithBoundary {
    pub map: ClosedMap,
    pub boundary: BTreeSet<usize>,
}

/// `(−χ, r₀, |Δ(1)|)`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tau {
    pub neg_chi: i64,
    pub r0: usize,
    pub edge_count: usize,
}

pub fn compare_tau(a: &Tau, b: &Tau) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// An edge joins two vertices of the same type.
    D1 { dart: Dart },
    /// A corner label lies outside the factor of its vertex.
    D2 { corner: Dart },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDiagram {
    ctx: Ctx,
    surface: MapWithBoundary,
    theta: Vec<Side>,
    phi: Vec<Word>,
}

impl LabeledDiagram {
    /// `theta` is indexed by vertex id, `phi` by the incoming dart of each corner.
    pub fn new(
        ctx: &Ctx,
        map: ClosedMap,
        theta: Vec<Side>,
        phi: Vec<Word>,
        boundary: BTreeSet<usize>,
    ) -> Result<Self> {
        if ctx.len() != 2 {
            return Err(Error::InvalidDiagram(
                "diagrams live over a two-factor context".into(),
            ));
        }
        if theta.len() != map.vertex_count() {
            return Err(Error::InvalidDiagram(format!(
                "theta has {} entries for {} vertices",
                theta.len(),
                map.vertex_count()
            )));
        }
        if phi.len() != map.dart_count() {
            return Err(Error::InvalidDiagram(format!(
                "phi has {} entries for {} corners",
                phi.len(),
                map.dart_count()
            )));
        }
        if phi.iter().any(|w| !crate::word::same_ctx(w.context(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        if let Some(f) = boundary.iter().find(|&&f| f >= map.face_count()) {
            return Err(Error::InvalidDiagram(format!(
                "boundary face {f} does not exist"
            )));
        }
        Ok(LabeledDiagram {
            ctx: ctx.clone(),
            surface: MapWithBoundary { map, boundary },
            theta,
            phi,
        })
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn map(&self) -> &ClosedMap {
        &self.surface.map
    }

    pub fn surface(&self) -> &MapWithBoundary {
        &self.surface
    }

    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.surface.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.surface.boundary.is_empty()
    }

    pub fn theta(&self, v: usize) -> Side {
        self.theta[v]
    }

    pub fn thetas(&self) -> &[Side] {
        &self.theta
    }

    /// Label of the corner whose incoming dart is `e`.
    pub fn phi(&self, e: Dart) -> &Word {
        &self.phi[e]
    }

    pub fn phis(&self) -> &[Word] {
        &self.phi
    }

    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.surface.boundary.contains(&f)
    }

    pub fn is_interior_corner(&self, e: Dart) -> bool {
        !self.is_boundary_face(self.map().face_of(e))
    }

    pub fn interior_faces(&self) -> Vec<usize> {
        (0..self.map().face_count())
            .filter(|f| !self.is_boundary_face(*f))
            .collect()
    }

    /// A vertex is interior when none of its corners lies in a boundary face.
    pub fn is_interior_vertex(&self, v: usize) -> bool {
        self.map()
            .vertex(v)
            .iter()
            .all(|&e| self.is_interior_corner(e))
    }

    /// `V − E + F` with boundary faces excluded from `F`.
    pub fn euler_characteristic(&self) -> i64 {
        let m = self.map();
        m.vertex_count() as i64 - m.edge_count() as i64 + self.interior_faces().len() as i64
    }

    /// Corner labels around a face, starting at its least dart.
    pub fn face_corner_labels(&self, f: usize) -> Result<Vec<Word>> {
        if f >= self.map().face_count() {
            return Err(Error::InvalidDiagram(format!("face {f} does not exist")));
        }
        if self.is_boundary_face(f) {
            return Err(Error::InvalidDiagram(format!(
                "face {f} is a boundary face"
            )));
        }
        Ok(self
            .map()
            .face(f)
            .iter()
            .map(|&e| self.phi[e].clone())
            .collect())
    }

    /// `φ(∂F)`, defined up to rotation; read from the least dart.
    pub fn face_label(&self, f: usize) -> Result<Word> {
        let labels = self.face_corner_labels(f)?;
        Ok(labels
            .iter()
            .fold(Word::identity(&self.ctx), |acc, l| acc.mul_unchecked(l)))
    }

    /// Product of the corner labels at an interior vertex, taken clockwise.
    pub fn vertex_label(&self, v: usize) -> Result<Word> {
        if v >= self.map().vertex_count() {
            return Err(Error::InvalidDiagram(format!("vertex {v} does not exist")));
        }
        if !self.is_interior_vertex(v) {
            return Err(Error::InvalidDiagram(format!(
                "vertex {v} lies on the boundary"
            )));
        }
        Ok(self
            .map()
            .vertex(v)
            .iter()
            .rev()
            .fold(Word::identity(&self.ctx), |acc, &e| {
                acc.mul_unchecked(&self.phi[e])
            }))
    }

    /// Interior vertices with nontrivial label.
    pub fn irregular_vertices(&self) -> BTreeSet<usize> {
        (0..self.map().vertex_count())
            .filter(|&v| self.is_interior_vertex(v))
            .filter(|&v| self.vertex_label(v).is_ok_and(|w| !w.is_empty()))
            .collect()
    }

    pub fn r0(&self) -> usize {
        self.irregular_vertices().len()
    }

    /// No interior corner is labelled by the identity.
    pub fn is_reduced(&self) -> bool {
        (0..self.map().dart_count())
            .filter(|&e| self.is_interior_corner(e))
            .all(|e| !self.phi[e].is_empty())
    }

    /// `2 − χ + r₀`.
    pub fn extended_genus(&self) -> Result<i64> {
        if !self.is_closed() {
            return Err(Error::InvalidDiagram(
                "extended genus needs a closed diagram".into(),
            ));
        }
        Ok(2 - self.euler_characteristic() + self.r0() as i64)
    }

    pub fn tau(&self) -> Tau {
        Tau {
            neg_chi: -self.euler_characteristic(),
            r0: self.r0(),
            edge_count: self.map().edge_count(),
        }
    }

    /// The diagram on the oppositely oriented surface; face labels invert.
    pub fn mirror(&self) -> LabeledDiagram {
        let m = self.map();
        let mirrored = m.mirror();
        let mut phi = vec![Word::identity(&self.ctx); m.dart_count()];
        for e in 0..m.dart_count() {
            phi[m.sigma(e)] = self.phi[e].inverse();
        }
        // vertex orbits and their least darts are unchanged
        let theta = (0..mirrored.vertex_count())
            .map(|v| self.theta[m.head(mirrored.vertex_rep(v))])
            .collect();
        let boundary = self
            .surface
            .boundary
            .iter()
            .map(|&f| mirrored.face_of(m.alpha(m.face(f)[0])))
            .collect();
        LabeledDiagram::new(&self.ctx, mirrored, theta, phi, boundary).expect("mirror is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("diagram serializes")
    }

    pub fn to_repr(&self) -> DiagramRepr {
        let m = self.map();
        DiagramRepr {
            factors: self.ctx.spec_string(),
            darts: m.dart_count(),
            alpha: (0..m.dart_count())
                .filter(|&e| e < m.alpha(e))
                .map(|e| [e, m.alpha(e)])
                .collect(),
            sigma: m.vertices().to_vec(),
            theta: (0..m.vertex_count())
                .map(|v| (m.vertex_rep(v).to_string(), self.theta[v]))
                .collect(),
            phi: self
                .phi
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_empty())
                .map(|(e, w)| (e.to_string(), w.to_string()))
                .collect(),
            boundary: self.surface.boundary.iter().copied().collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: DiagramRepr =
            serde_json::from_str(text).map_err(|e| crate::error::json_error(text, &e))?;
        LabeledDiagram::from_repr(&repr)
    }

    pub fn from_repr(repr: &DiagramRepr) -> Result<Self> {
        let ctx = Context::parse(&repr.factors)?;
        if 2 * repr.alpha.len() != repr.darts {
            return Err(Error::InvalidDiagram(format!(
                "{} alpha pairs for {} darts",
                repr.alpha.len(),
                repr.darts
            )));
        }
        let pairs: Vec<(Dart, Dart)> = repr.alpha.iter().map(|p| (p[0], p[1])).collect();
        let map = crate::map::build_map(&repr.sigma, &pairs)?;
        let mut theta = vec![None; map.vertex_count()];
        for (key, side) in &repr.theta {
            let d = parse_dart(key, repr.darts)?;
            let v = map.head(d);
            if map.vertex_rep(v) != d {
                return Err(Error::InvalidDiagram(format!(
                    "theta key {d} is not the least dart of its vertex"
                )));
            }
            theta[v] = Some(*side);
        }
        let theta = theta
            .into_iter()
            .enumerate()
            .map(|(v, s)| {
                s.ok_or_else(|| {
                    Error::InvalidDiagram(format!("vertex {} has no theta", map.vertex_rep(v)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut phi = vec![Word::identity(&ctx); repr.darts];
        for (key, token) in &repr.phi {
            phi[parse_dart(key, repr.darts)?] = Word::parse(&ctx, token)?;
        }
        LabeledDiagram::new(
            &ctx,
            map,
            theta,
            phi,
            repr.boundary.iter().copied().collect(),
        )
    }

    /// Graphviz rendering: vertices carry θ, edges carry the labels of the
    /// corners at their two ends.
    pub fn to_dot(&self) -> String {
        let m = self.map();
        let mut out = String::from("graph diagram {\n");
        for v in 0..m.vertex_count() {
            let _ = writeln!(
                out,
                "  v{} [label=\"{:?}{}\"];",
                m.vertex_rep(v),
                self.theta[v],
                m.vertex_rep(v)
            );
        }
        for e in (0..m.dart_count()).filter(|&e| e < m.alpha(e)) {
            let a = m.alpha(e);
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"{}\", headlabel=\"{}\", taillabel=\"{}\"];",
                m.vertex_rep(m.tail(e)),
                m.vertex_rep(m.head(e)),
                e,
                self.phi[e],
                self.phi[a]
            );
        }
        out.push_str("}\n");
        out
    }
}

fn parse_dart(key: &str, n: usize) -> Result<Dart> {
    let d: Dart = key
        .parse()
        .map_err(|_| Error::InvalidDiagram(format!("`{key}` is not a dart id")))?;
    if d >= n {
        return Err(Error::InvalidDiagram(format!(
            "dart {d} out of range 0..{n}"
        )));
    }
    Ok(d)
}

/// Serialized diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRepr {
    pub factors: String,
    pub darts: usize,
    /// Each edge as its two darts.
    pub alpha: Vec<[Dart; 2]>,
    /// Counterclockwise dart cycles around each vertex.
    pub sigma: Vec<Vec<Dart>>,
    /// Keyed by the least dart of each vertex.
    pub theta: BTreeMap<String, Side>,
    /// Nonidentity corner labels keyed by incoming dart.
    #[serde(default)]
    pub phi: BTreeMap<String, String>,
    #[serde(default)]
    pub boundary: Vec<usize>,
}

pub fn validate_diagram(d: &LabeledDiagram) -> Vec<Violation> {
    let m = d.map();
    let mut out = Vec::new();
    for e in (0..m.dart_count()).filter(|&e| e < m.alpha(e)) {
        if d.theta[m.head(e)] == d.theta[m.tail(e)] {
            out.push(Violation::D1 { dart: e });
        }
    }
    for e in 0..m.dart_count() {
        if !d.is_interior_corner(e) {
            continue;
        }
        let side = d.theta[m.head(e)];
        let ok = match d.phi[e].letters() {
            [] => true,
            [l] => l.factor == side.factor(),
            _ => false,
        };
        if !ok {
            out.push(Violation::D2 { corner: e });
        }
    }
    out
}

pub fn face_label(d: &LabeledDiagram, f: usize) -> Result<Word> {
    d.face_label(f)
}

pub fn vertex_label(d: &LabeledDiagram, v: usize) -> Result<Word> {
    d.vertex_label(v)
}

pub fn irregular_vertices(d: &LabeledDiagram) -> BTreeSet<usize> {
    d.irregular_vertices()
}

pub fn r0(d: &LabeledDiagram) -> usize {
    d.r0()
}

pub fn is_reduced(d: &LabeledDiagram) -> bool {
    d.is_reduced()
}

pub fn extended_genus(d: &LabeledDiagram) -> Result<i64> {
    d.extended_genus()
}

pub fn tau(d: &LabeledDiagram) -> Tau {
    d.tau()
}

/// `labels ≡₁ u`: deleting identity labels leaves a rotation of the letters of `u`.
pub fn equiv_one(labels: &[Word], u: &Word) -> bool {
    let kept: Option<Vec<Letter>> = labels
        .iter()
        .filter(|w| !w.is_empty())
        .map(|w| match w.letters() {
            [l] => Some(*l),
            _ => None,
        })
        .collect();
    kept.is_some_and(|k| rotation_offset(&k, u.letters()).is_some())
}

/// The Fig. 1 diagram: a torus with two vertices, three edges and one face
/// whose corners at the `A` vertex read `a` and at the `B` vertex read `b`.
pub fn fig1_diagram(ctx: &Ctx) -> Result<LabeledDiagram> {
    let map = crate::map::build_map(&[vec![0, 2, 4], vec![1, 3, 5]], &[(0, 1), (2, 3), (4, 5)])?;
    let a = Word::letter(ctx, 0, 1)?;
    let b = Word::letter(ctx, 1, 1)?;
    // dart 2i runs from A to B, so even darts end at B
    let theta = (0..map.vertex_count())
        .map(|v| {
            if map.vertex_rep(v) % 2 == 0 {
                Side::B
            } else {
                Side::A
            }
        })
        .collect();
    let phi = (0..6)
        .map(|e| if e % 2 == 0 { b.clone() } else { a.clone() })
        .collect();
    LabeledDiagram::new(ctx, map, theta, phi, BTreeSet::new())
}
