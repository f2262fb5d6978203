//! Closed combinatorial maps on oriented surfaces, given as rotation systems.
//!
//! Darts are directed edge sides. `alpha` pairs each dart with its reverse,
//! `sigma` rotates darts counterclockwise around their head vertex, and the
//! face successor is `next(e) = alpha(sigma(e))` (sigma, then alpha).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dart ids are `0..2E`.
pub type Dart = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedMap {
    alpha: Vec<Dart>,
    sigma: Vec<Dart>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    vertices: Vec<Vec<Dart>>,
    faces: Vec<Vec<Dart>>,
}

/// Per-component counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapComponent {
    pub darts: Vec<Dart>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl MapComponent {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }
}

fn check_permutation(p: &[Dart], what: &str) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidMap(format!("{what} is not a permutation")));
        }
    }
    Ok(())
}

/// Orbits of `p`, each starting at its least element, ordered by that element.
fn orbits(p: &[Dart]) -> (Vec<Vec<Dart>>, Vec<usize>) {
    let mut id = vec![usize::MAX; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if id[start] != usize::MAX {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while id[x] == usize::MAX {
            id[x] = out.len();
            cyc.push(x);
            x = p[x];
        }
        out.push(cyc);
    }
    (out, id)
}

/// Builds a map from sigma cycles and alpha pairs.
pub fn build_map(sigma_cycles: &[Vec<Dart>], alpha_pairs: &[(Dart, Dart)]) -> Result<ClosedMap> {
    let n = 2 * alpha_pairs.len();
    let mut alpha = vec![usize::MAX; n];
    for &(x, y) in alpha_pairs {
        if x == y {
            return Err(Error::InvalidMap(format!("alpha fixes dart {x}")));
        }
        for d in [x, y] {
            if d >= n {
                return Err(Error::InvalidMap(format!("dart {d} out of range 0..{n}")));
            }
            if alpha[d] != usize::MAX {
                return Err(Error::InvalidMap(format!("dart {d} paired twice")));
            }
        }
        alpha[x] = y;
        alpha[y] = x;
    }
    let mut sigma = vec![usize::MAX; n];
    for cyc in sigma_cycles {
        for (i, &d) in cyc.iter().enumerate() {
            if d >= n || sigma[d] != usize::MAX {
                return Err(Error::InvalidMap(format!(
                    "sigma cycles do not form a permutation (dart {d})"
                )));
            }
            sigma[d] = cyc[(i + 1) % cyc.len()];
        }
    }
    if let Some(d) = sigma.iter().position(|&x| x == usize::MAX) {
        return Err(Error::InvalidMap(format!("dart {d} missing from sigma")));
    }
    ClosedMap::from_permutations(alpha, sigma)
}

impl ClosedMap {
    pub fn from_permutations(alpha: Vec<Dart>, sigma: Vec<Dart>) -> Result<ClosedMap> {
        if alpha.len() != sigma.len() {
            return Err(Error::InvalidMap("alpha and sigma sizes differ".into()));
        }
        if !alpha.len().is_multiple_of(2) {
            return Err(Error::InvalidMap("odd number of darts".into()));
        }
        check_permutation(&alpha, "alpha")?;
        check_permutation(&sigma, "sigma")?;
        for (d, &a) in alpha.iter().enumerate() {
            if a == d {
                return Err(Error::InvalidMap(format!("alpha fixes dart {d}")));
            }
            if alpha[a] != d {
                return Err(Error::InvalidMap("alpha is not an involution".into()));
            }
        }
        let next: Vec<Dart> = sigma.iter().map(|&s| alpha[s]).collect();
        let mut prev = vec![0; next.len()];
        for (d, &n) in next.iter().enumerate() {
            prev[n] = d;
        }
        let (vertices, vertex_of) = orbits(&sigma);
        let (faces, face_of) = orbits(&next);
        let map = ClosedMap {
            alpha,
            sigma,
            next,
            prev,
            vertex_of,
            face_of,
            vertices,
            faces,
        };
        for c in map.components() {
            let chi = c.euler_characteristic();
            if chi > 2 || chi % 2 != 0 {
                return Err(Error::InvalidMap(format!(
                    "component with Euler characteristic {chi}"
                )));
            }
        }
        Ok(map)
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn alpha(&self, e: Dart) -> Dart {
        self.alpha[e]
    }

    pub fn sigma(&self, e: Dart) -> Dart {
        self.sigma[e]
    }

    pub fn alphas(&self) -> &[Dart] {
        &self.alpha
    }

    pub fn sigmas(&self) -> &[Dart] {
        &self.sigma
    }

    /// Face successor of `e`.
    pub fn next(&self, e: Dart) -> Dart {
        self.next[e]
    }

    pub fn prev(&self, e: Dart) -> Dart {
        self.prev[e]
    }

    /// Vertex id of the head of `e`.
    pub fn head(&self, e: Dart) -> usize {
        self.vertex_of[e]
    }

    /// Vertex id of the tail of `e`.
    pub fn tail(&self, e: Dart) -> usize {
        self.vertex_of[self.alpha[e]]
    }

    pub fn face_of(&self, e: Dart) -> usize {
        self.face_of[e]
    }

    /// Boundary cycle of a face, starting at its least dart.
    pub fn face(&self, f: usize) -> &[Dart] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    /// Darts with head at vertex `v`, in counterclockwise order from the least.
    pub fn vertex(&self, v: usize) -> &[Dart] {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vec<Dart>] {
        &self.vertices
    }

    /// Vertex degree.
    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].len()
    }

    /// Least dart of the vertex, a stable name across relabelings.
    pub fn vertex_rep(&self, v: usize) -> Dart {
        self.vertices[v][0]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Connected components, ordered by least dart.
    pub fn components(&self) -> Vec<MapComponent> {
        let n = self.dart_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut darts = Vec::new();
            comp[start] = id;
            while let Some(d) = stack.pop() {
                darts.push(d);
                for x in [self.alpha[d], self.sigma[d]] {
                    if comp[x] == usize::MAX {
                        comp[x] = id;
                        stack.push(x);
                    }
                }
            }
            darts.sort_unstable();
            let vertices = darts
                .iter()
                .filter(|&&d| self.vertex_rep(self.head(d)) == d)
                .count();
            let faces = darts
                .iter()
                .filter(|&&d| self.faces[self.face_of[d]][0] == d)
                .count();
            out.push(MapComponent {
                edges: darts.len() / 2,
                darts,
                vertices,
                faces,
            });
        }
        out
    }

    /// Euler characteristic of each component.
    pub fn component_characteristics(&self) -> Vec<i64> {
        self.components()
            .iter()
            .map(MapComponent::euler_characteristic)
            .collect()
    }

    /// Disjoint union; darts of `other` are shifted by `self.dart_count()`.
    pub fn disjoint_union(&self, other: &ClosedMap) -> ClosedMap {
        let k = self.dart_count();
        let alpha = self
            .alpha
            .iter()
            .copied()
            .chain(other.alpha.iter().map(|d| d + k))
            .collect();
        let sigma = self
            .sigma
            .iter()
            .copied()
            .chain(other.sigma.iter().map(|d| d + k))
            .collect();
        ClosedMap::from_permutations(alpha, sigma).expect("union of valid maps")
    }

    /// The same map on the oppositely oriented surface.
    pub fn mirror(&self) -> ClosedMap {
        let mut inv = vec![0; self.sigma.len()];
        for (d, &s) in self.sigma.iter().enumerate() {
            inv[s] = d;
        }
        ClosedMap::from_permutations(self.alpha.clone(), inv).expect("mirror of valid map")
    }
}

/// Serialized map; a diagram file also parses as one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRepr {
    pub darts: usize,
    pub alpha: Vec<[Dart; 2]>,
    pub sigma: Vec<Vec<Dart>>,
}

impl ClosedMap {
    pub fn to_repr(&self) -> MapRepr {
        MapRepr {
            darts: self.dart_count(),
            alpha: (0..self.dart_count())
                .filter(|&e| e < self.alpha[e])
                .map(|e| [e, self.alpha[e]])
                .collect(),
            sigma: self.vertices.clone(),
        }
    }

    pub fn from_repr(repr: &MapRepr) -> Result<ClosedMap> {
        if 2 * repr.alpha.len() != repr.darts {
            return Err(Error::InvalidMap(format!(
                "{} alpha pairs for {} darts",
                repr.alpha.len(),
                repr.darts
            )));
        }
        let pairs: Vec<(Dart, Dart)> = repr.alpha.iter().map(|p| (p[0], p[1])).collect();
        build_map(&repr.sigma, &pairs)
    }

    pub fn from_json(text: &str) -> Result<ClosedMap> {
        let repr: MapRepr =
            serde_json::from_str(text).map_err(|e| crate::error::json_error(text, &e))?;
        ClosedMap::from_repr(&repr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("map serializes")
    }
}
