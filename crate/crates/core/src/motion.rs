//! Discrete car motions on closed maps and their complete collisions.
//!
//! Cars move one edge per unit of time along face boundaries. At an integer
//! time a car sits at the corner named by a dart `e` of its face; during the
//! following unit interval it traverses `next(e)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{LabeledDiagram, Side};
use crate::error::{Error, Result};
use crate::map::{ClosedMap, Dart};
use crate::par::{self, Execution};
use crate::word::{gcd, Letter, Word};

/// Cars on one face: car `j` starts at position `offset + j·T` of the face cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceMotion {
    pub cars: usize,
    pub offset: usize,
    pub length: usize,
}

impl FaceMotion {
    /// Time for a car to reach the start of the next car.
    pub fn period(&self) -> usize {
        self.length / self.cars
    }
}

/// Equally spaced unit-speed cars on every face, indexed by face id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarMotion {
    faces: Vec<FaceMotion>,
}

impl CarMotion {
    pub fn faces(&self) -> &[FaceMotion] {
        &self.faces
    }

    pub fn car_count(&self) -> usize {
        self.faces.iter().map(|f| f.cars).sum()
    }

    /// Least common multiple of the face periods.
    pub fn global_period(&self) -> u64 {
        self.faces.iter().fold(1u64, |acc, f| {
            let p = f.period() as u64;
            acc / gcd(acc, p) * p
        })
    }

    /// Face-cycle index of the corner holding car `j` of face `f` at time `t`.
    pub fn position(&self, f: usize, j: usize, t: u64) -> usize {
        let fm = &self.faces[f];
        let start = fm.offset + j * fm.period();
        ((start as u64 + t) % fm.length as u64) as usize
    }

    /// Checks that shifting time by `T` moves every car onto the next one and
    /// that the arcs covered over `[0, T]` partition each face.
    pub fn verify(&self, m: &ClosedMap) -> Result<()> {
        if self.faces.len() != m.face_count() {
            return Err(Error::InvalidMotion(format!(
                "motion covers {} faces of {}",
                self.faces.len(),
                m.face_count()
            )));
        }
        for (f, fm) in self.faces.iter().enumerate() {
            if fm.length != m.face(f).len() || fm.cars == 0 || fm.length % fm.cars != 0 {
                return Err(Error::InvalidMotion(format!(
                    "face {f} has an inadmissible car count"
                )));
            }
            let period = fm.period() as u64;
            for j in 0..fm.cars {
                for t in 0..self.global_period() {
                    if self.position(f, j, t + period) != self.position(f, (j + 1) % fm.cars, t) {
                        return Err(Error::InvalidMotion(format!(
                            "car {j} of face {f} breaks periodicity"
                        )));
                    }
                }
            }
            let mut covered = vec![false; fm.length];
            for j in 0..fm.cars {
                for t in 0..period {
                    let e = (self.position(f, j, t) + 1) % fm.length;
                    if std::mem::replace(&mut covered[e], true) {
                        return Err(Error::InvalidMotion(format!("arcs of face {f} overlap")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `cars[f]` equally spaced cars on face `f`, the first one at the face's least dart.
pub fn uniform_motion(m: &ClosedMap, cars: &[usize]) -> Result<CarMotion> {
    uniform_motion_with_offsets(m, cars, &vec![0; cars.len()])
}

pub fn uniform_motion_with_offsets(
    m: &ClosedMap,
    cars: &[usize],
    offsets: &[usize],
) -> Result<CarMotion> {
    if cars.len() != m.face_count() || offsets.len() != m.face_count() {
        return Err(Error::InvalidMotion(format!(
            "expected car counts for {} faces",
            m.face_count()
        )));
    }
    let mut faces = Vec::with_capacity(cars.len());
    for (f, (&d, &o)) in cars.iter().zip(offsets).enumerate() {
        let length = m.face(f).len();
        if d == 0 || !length.is_multiple_of(d) {
            return Err(Error::InvalidMotion(format!(
                "{d} cars do not divide face {f} of length {length}"
            )));
        }
        faces.push(FaceMotion {
            cars: d,
            offset: o % length,
            length,
        });
    }
    Ok(CarMotion { faces })
}

/// `u` rotated to read `a₁b₁⋯a_r b_r`.
fn alternating_form(u: &Word) -> Result<Vec<Letter>> {
    let l = u.letters();
    if l.is_empty()
        || !l.len().is_multiple_of(2)
        || !u.is_cyclically_reduced()
        || u.context().len() != 2
    {
        return Err(Error::InvalidMotion(format!(
            "{u} is not an alternating word of even length"
        )));
    }
    let mut out = l.to_vec();
    if out[0].factor != Side::A.factor() {
        out.rotate_left(1);
    }
    Ok(out)
}

/// `n[f]` cars on face `f`, whose label must be `u^{n[f]}` up to rotation,
/// seated at the corners labelled by the last letter `b_r`.
pub fn standard_motion(d: &LabeledDiagram, u: &Word, n: &[usize]) -> Result<CarMotion> {
    let form = alternating_form(u)?;
    let m = d.map();
    if n.len() != m.face_count() {
        return Err(Error::InvalidMotion(format!(
            "expected exponents for {} faces",
            m.face_count()
        )));
    }
    let period = form.len();
    let mut faces = Vec::with_capacity(n.len());
    for (f, &nf) in n.iter().enumerate() {
        let labels = d.face_corner_labels(f)?;
        let letters: Option<Vec<Letter>> = labels
            .iter()
            .map(|w| match w.letters() {
                [l] => Some(*l),
                _ => None,
            })
            .collect();
        let target: Vec<Letter> = form.iter().copied().cycle().take(period * nf).collect();
        let offset = letters
            .filter(|l| l.len() == target.len() && nf > 0)
            .and_then(|l| (0..l.len()).find(|&k| l[k..].iter().chain(&l[..k]).eq(target.iter())))
            .ok_or_else(|| {
                Error::InvalidMotion(format!("face {f} is not labelled by ({u})^{nf}"))
            })?;
        faces.push(FaceMotion {
            cars: nf,
            offset: (offset + period - 1) % labels.len(),
            length: labels.len(),
        });
    }
    Ok(CarMotion { faces })
}

/// Whether a standard motion keeps all cars on corners with one common label
/// index into `u`, on `B` vertices at even times and `A` vertices at odd times.
pub fn standard_motion_in_step(d: &LabeledDiagram, u: &Word, motion: &CarMotion) -> Result<bool> {
    let form = alternating_form(u)?;
    let m = d.map();
    for t in 0..motion.global_period() {
        let want = if t % 2 == 0 { Side::B } else { Side::A };
        let letter = form[((form.len() as u64 - 1 + t) % form.len() as u64) as usize];
        for (f, fm) in motion.faces.iter().enumerate() {
            for j in 0..fm.cars {
                let e = m.face(f)[motion.position(f, j, t)];
                if d.theta(m.head(e)) != want || d.phi(e).letters() != [letter] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Vertex,
    EdgeInterior,
}

/// A point of complete collision. `location` is a vertex id or the least dart
/// of an edge; `time` is the first integer time, or the start of the first
/// unit interval, at which the collision happens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionPoint {
    pub kind: PointKind,
    pub location: usize,
    pub time: u64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub points: Vec<CollisionPoint>,
    pub vertex_points: usize,
    pub edge_points: usize,
    pub period: u64,
}

impl CollisionReport {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All points of complete collision over one global period.
pub fn simulate(m: &ClosedMap, motion: &CarMotion) -> CollisionReport {
    let period = motion.global_period();
    let mut vertex_time: Vec<Option<u64>> = vec![None; m.vertex_count()];
    let mut edge_time: Vec<Option<u64>> = vec![None; m.dart_count()];
    let mut count = vec![0usize; m.vertex_count()];
    let mut moving = vec![false; m.dart_count()];
    for t in 0..period {
        count.iter_mut().for_each(|c| *c = 0);
        moving.iter_mut().for_each(|x| *x = false);
        for (f, fm) in motion.faces.iter().enumerate() {
            let cycle = m.face(f);
            for j in 0..fm.cars {
                let p = motion.position(f, j, t);
                count[m.head(cycle[p])] += 1;
                moving[cycle[(p + 1) % cycle.len()]] = true;
            }
        }
        for v in 0..m.vertex_count() {
            if vertex_time[v].is_none() && count[v] == m.degree(v) {
                vertex_time[v] = Some(t);
            }
        }
        for e in 0..m.dart_count() {
            let a = m.alpha(e);
            if e < a && moving[e] && moving[a] && edge_time[e].is_none() {
                edge_time[e] = Some(t);
            }
        }
    }
    let mut points = Vec::new();
    for (v, t) in vertex_time.iter().enumerate() {
        if let Some(t) = t {
            points.push(CollisionPoint {
                kind: PointKind::Vertex,
                location: v,
                time: *t,
                multiplicity: m.degree(v),
            });
        }
    }
    for (e, t) in edge_time.iter().enumerate() {
        if let Some(t) = t {
            points.push(CollisionPoint {
                kind: PointKind::EdgeInterior,
                location: e,
                time: *t,
                multiplicity: 2,
            });
        }
    }
    let vertex_points = points
        .iter()
        .filter(|p| p.kind == PointKind::Vertex)
        .count();
    CollisionReport {
        edge_points: points.len() - vertex_points,
        vertex_points,
        points,
        period,
    }
}

/// Collision count against the lower bound `χ + Σ(d_F − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Check {
    pub holds: bool,
    pub collisions: usize,
    pub bound: i64,
    pub margin: i64,
}

pub fn lemma2_bound(m: &ClosedMap, motion: &CarMotion) -> i64 {
    m.euler_characteristic() + motion.faces.iter().map(|f| f.cars as i64 - 1).sum::<i64>()
}

pub fn check_lemma2(m: &ClosedMap, motion: &CarMotion) -> Lemma2Check {
    let collisions = simulate(m, motion).len();
    let bound = lemma2_bound(m, motion);
    let margin = collisions as i64 - bound;
    Lemma2Check {
        holds: margin >= 0,
        collisions,
        bound,
        margin,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionBreakdown {
    pub regular_vertex: usize,
    pub irregular_vertex: usize,
    pub edge_interior: usize,
}

/// Splits the collision points of a motion on `d` by where they occur.
pub fn classify_collisions(d: &LabeledDiagram, report: &CollisionReport) -> CollisionBreakdown {
    let irregular = d.irregular_vertices();
    let mut out = CollisionBreakdown::default();
    for p in &report.points {
        match p.kind {
            PointKind::EdgeInterior => out.edge_interior += 1,
            PointKind::Vertex if irregular.contains(&p.location) => out.irregular_vertex += 1,
            PointKind::Vertex => out.regular_vertex += 1,
        }
    }
    out
}

/// A uniformly random map on `2·edges` darts.
pub fn random_map<R: Rng>(rng: &mut R, edges: usize) -> ClosedMap {
    let n = 2 * edges;
    let mut darts: Vec<Dart> = (0..n).collect();
    darts.shuffle(rng);
    let mut alpha = vec![0; n];
    for p in darts.chunks(2) {
        alpha[p[0]] = p[1];
        alpha[p[1]] = p[0];
    }
    let mut sigma: Vec<Dart> = (0..n).collect();
    sigma.shuffle(rng);
    ClosedMap::from_permutations(alpha, sigma).expect("random permutations form a map")
}

/// Uniformly random admissible car counts and offsets.
pub fn random_motion<R: Rng>(rng: &mut R, m: &ClosedMap) -> CarMotion {
    let faces = m
        .faces()
        .iter()
        .map(|cycle| {
            let length = cycle.len();
            let divisors: Vec<usize> = (1..=length).filter(|d| length % d == 0).collect();
            FaceMotion {
                cars: *divisors.choose(rng).expect("1 divides every length"),
                offset: rng.gen_range(0..length),
                length,
            }
        })
        .collect();
    CarMotion { faces }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub trial: u64,
    pub alpha: Vec<Dart>,
    pub sigma: Vec<Dart>,
    pub motion: CarMotion,
    pub check: Lemma2Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub trials: u64,
    pub seed: u64,
    pub max_edges: usize,
    /// Trials with some face carrying more than one car.
    pub nontrivial: u64,
    pub min_margin: i64,
    pub failures: Vec<FuzzFailure>,
}

/// Random maps with `1..=max_edges` edges and random admissible motions;
/// trial `i` uses stream `i` of a ChaCha generator seeded with `seed`.
pub fn fuzz(max_edges: usize, trials: u64, seed: u64, exec: Execution) -> FuzzSummary {
    let results = par::map_range(exec, trials as usize, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let edges = rng.gen_range(1..=max_edges.max(1));
        let m = random_map(&mut rng, edges);
        let motion = random_motion(&mut rng, &m);
        let check = check_lemma2(&m, &motion);
        let nontrivial = motion.faces.iter().any(|f| f.cars > 1);
        (i as u64, m, motion, check, nontrivial)
    });
    let mut summary = FuzzSummary {
        trials,
        seed,
        max_edges,
        nontrivial: 0,
        min_margin: i64::MAX,
        failures: Vec::new(),
    };
    for (trial, m, motion, check, nontrivial) in results {
        summary.nontrivial += nontrivial as u64;
        summary.min_margin = summary.min_margin.min(check.margin);
        if !check.holds {
            summary.failures.push(FuzzFailure {
                trial,
                alpha: m.alphas().to_vec(),
                sigma: m.sigmas().to_vec(),
                motion,
                check,
            });
        }
    }
    summary
}

/// The collision argument replayed on a concrete instance.
#[derive(Clone, Debug)]
pub struct TheoremReplay {
    pub diagram: LabeledDiagram,
    pub motion: CarMotion,
    pub report: CollisionReport,
    pub breakdown: CollisionBreakdown,
    pub lemma2: Lemma2Check,
    /// `Σ (n_j − 1)`.
    pub pos: i64,
    pub extended_genus: i64,
    /// Every letter of the base has order above `Σ n_j`.
    pub torsion_ok: bool,
}

impl TheoremReplay {
    /// The inequalities the argument derives, given the torsion hypothesis.
    pub fn consistent(&self) -> bool {
        let m = self.diagram.map();
        let chain = self.pos <= self.extended_genus - 2
            && self.diagram.r0() as i64 >= m.euler_characteristic() + self.pos;
        self.lemma2.holds
            && self.breakdown.edge_interior == 0
            && (!self.torsion_ok || (self.breakdown.regular_vertex == 0 && chain))
    }
}

/// Builds the reduced diagram for `w = Π s_j h^{n_j} s_j⁻¹` from a mixed
/// factorization of `w`, runs the standard motion on it and collects collisions.
pub fn replay_theorem(
    q: &crate::factorization::QuasiperiodicFactorization,
    mixed: &crate::factorization::MixedFactorization,
) -> Result<TheoremReplay> {
    let core = q.base().cyclic_reduce();
    let u_list = q
        .exponents()
        .iter()
        .map(|&n| core.core.pow(n as i64))
        .collect();
    let s_list = q
        .conjugators()
        .iter()
        .map(|s| s.mul_unchecked(&core.conjugator))
        .collect();
    let input = crate::surgery::SeedInput::new(u_list, s_list, mixed.clone())?;
    let out = crate::surgery::lemma1_pipeline(&input)?;
    let d = out.diagram;
    let n: Vec<usize> = d
        .map()
        .faces()
        .iter()
        .map(|c| c.len() / core.core.len())
        .collect();
    let motion = standard_motion(&d, &core.core, &n)?;
    motion.verify(d.map())?;
    if !standard_motion_in_step(&d, &core.core, &motion)? {
        return Err(Error::Invariant("standard motion lost step".into()));
    }
    let report = simulate(d.map(), &motion);
    let breakdown = classify_collisions(&d, &report);
    let lemma2 = check_lemma2(d.map(), &motion);
    let total: u64 = q.exponents().iter().map(|&n| n as u64).sum();
    let torsion_ok = core.core.letter_orders().iter().all(|o| match o {
        crate::word::Order::Finite(k) => *k > total,
        crate::word::Order::Infinite => true,
    });
    Ok(TheoremReplay {
        pos: q.score() as i64,
        extended_genus: out.extended_genus,
        diagram: d,
        motion,
        report,
        breakdown,
        lemma2,
        torsion_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fig1_diagram;
    use crate::map::build_map;
    use crate::word::Context;

    #[test]
    fn uniform_motion_examples() {
        let sphere = build_map(&[vec![0], vec![1]], &[(0, 1)]).unwrap();
        let one = uniform_motion(&sphere, &[1]).unwrap();
        one.verify(&sphere).unwrap();
        assert_eq!(one.global_period(), 2);

        let ctx = Context::parse("Z3,Z3").unwrap();
        let fig1 = fig1_diagram(&ctx).unwrap();
        let three = uniform_motion(fig1.map(), &[3]).unwrap();
        three.verify(fig1.map()).unwrap();
        assert_eq!(three.faces()[0].period(), 2);
        assert_eq!(three.car_count(), 3);

        let pentagon = build_map(
            &[vec![0, 3], vec![2, 5], vec![4, 7], vec![6, 9], vec![8, 1]],
            &[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)],
        )
        .unwrap();
        let f = (0..pentagon.face_count())
            .find(|&f| pentagon.face(f).len() == 5)
            .unwrap();
        let mut cars = vec![1; pentagon.face_count()];
        cars[f] = 2;
        assert!(matches!(
            uniform_motion(&pentagon, &cars),
            Err(Error::InvalidMotion(_))
        ));
    }

    #[test]
    fn single_edge_sphere_collides_at_both_ends() {
        let m = build_map(&[vec![0], vec![1]], &[(0, 1)]).unwrap();
        let r = simulate(&m, &uniform_motion(&m, &[1]).unwrap());
        assert_eq!(r.vertex_points, 2);
        assert_eq!(r.edge_points, 0);
        assert!(check_lemma2(&m, &uniform_motion(&m, &[1]).unwrap()).holds);
    }

    #[test]
    fn loop_collides_at_vertex_and_edge() {
        // a loop: one vertex of degree 2 and two faces of length 1
        let m = build_map(&[vec![0, 1]], &[(0, 1)]).unwrap();
        let motion = uniform_motion(&m, &[1, 1]).unwrap();
        let r = simulate(&m, &motion);
        // both cars sit at the vertex at every integer time and cross the loop in opposite directions
        assert_eq!(r.vertex_points, 1);
        assert_eq!(r.edge_points, 1);
    }

    #[test]
    fn path_sphere_collides_only_at_leaves() {
        let m = build_map(&[vec![0, 3], vec![1], vec![2]], &[(0, 1), (2, 3)]).unwrap();
        let r = simulate(&m, &uniform_motion(&m, &[1]).unwrap());
        assert_eq!(r.vertex_points, 2);
        assert!(r.points.iter().all(|p| m.degree(p.location) == 1));
        let two = uniform_motion(&m, &[2]).unwrap();
        assert!(check_lemma2(&m, &two).holds);
    }

    #[test]
    fn fig1_standard_motion() {
        for (n, regular, irregular) in [(3, 2, 0), (7, 0, 2)] {
            let ctx = Context::parse(&format!("Z{n},Z{n}")).unwrap();
            let d = fig1_diagram(&ctx).unwrap();
            let ab = Word::parse(&ctx, "a b").unwrap();
            let motion = standard_motion(&d, &ab, &[3]).unwrap();
            motion.verify(d.map()).unwrap();
            assert_eq!(motion.faces()[0].period(), 2);
            assert!(standard_motion_in_step(&d, &ab, &motion).unwrap());
            let report = simulate(d.map(), &motion);
            let check = check_lemma2(d.map(), &motion);
            assert!(check.holds);
            assert_eq!(check.bound, 2);
            let b = classify_collisions(&d, &report);
            assert_eq!(b.edge_interior, 0);
            assert_eq!((b.regular_vertex, b.irregular_vertex), (regular, irregular));
        }
    }

    #[test]
    fn standard_motion_rejects_odd_words() {
        let ctx = Context::parse("Z3,Z3").unwrap();
        let d = fig1_diagram(&ctx).unwrap();
        let aba = Word::parse(&ctx, "a b a").unwrap();
        assert!(matches!(
            standard_motion(&d, &aba, &[3]),
            Err(Error::InvalidMotion(_))
        ));
        let ab2 = Word::parse(&ctx, "a b^2").unwrap();
        assert!(standard_motion(&d, &ab2, &[3]).is_err());
    }

    #[test]
    fn lemma2_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m1 = random_map(&mut rng, 5);
            let m2 = random_map(&mut rng, 4);
            let (x1, x2) = (random_motion(&mut rng, &m1), random_motion(&mut rng, &m2));
            let u = m1.disjoint_union(&m2);
            let mut faces = vec![
                FaceMotion {
                    cars: 0,
                    offset: 0,
                    length: 0
                };
                u.face_count()
            ];
            for (f, fm) in x1.faces().iter().enumerate() {
                faces[u.face_of(m1.face(f)[0])] = *fm;
            }
            for (f, fm) in x2.faces().iter().enumerate() {
                faces[u.face_of(m2.face(f)[0] + m1.dart_count())] = *fm;
            }
            let xu = CarMotion { faces };
            xu.verify(&u).unwrap();
            assert_eq!(
                lemma2_bound(&u, &xu),
                lemma2_bound(&m1, &x1) + lemma2_bound(&m2, &x2)
            );
            assert_eq!(
                simulate(&u, &xu).len(),
                simulate(&m1, &x1).len() + simulate(&m2, &x2).len()
            );
        }
    }

    #[test]
    fn replay_on_cube_of_ab() {
        use crate::factorization::{mixed_genus_upper, QuasiperiodicFactorization};
        let ctx = Context::parse("Z,Z").unwrap();
        let ab = Word::parse(&ctx, "a b").unwrap();
        let q = QuasiperiodicFactorization::new(ab.clone(), vec![Word::identity(&ctx)], vec![3])
            .unwrap();
        let (mg, mixed) = mixed_genus_upper(&ab.pow(3), 6, 6).unwrap();
        let r = replay_theorem(&q, &mixed).unwrap();
        assert!(r.torsion_ok);
        assert!(r.consistent());
        assert_eq!(r.pos, 2);
        assert!(r.extended_genus <= mg as i64);
        assert_eq!(r.breakdown.regular_vertex, 0);
    }

    #[test]
    fn small_fuzz_campaign() {
        let s = fuzz(8, 300, 1, Execution::Parallel);
        assert!(s.failures.is_empty(), "{:?}", s.failures.first());
        assert!(s.nontrivial > 0);
        assert_eq!(s, fuzz(8, 300, 1, Execution::Sequential));
    }
}
