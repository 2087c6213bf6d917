//! Shared combinatorial types: arrangement graphs, rotation systems, faces and
//! the decomposed arrangement structure.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum vertex degree of an arrangement graph.
pub const MAX_DEGREE: usize = 4;

/// Undirected simple graph with dense vertex ids `0..n`.
///
/// Serialized as `{"n": <int>, "edges": [[u, v], ...]}`. Edge ids are the
/// positions in `edges`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// First structural problem found by [`ArrangementGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("edge {edge} references vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("multi-edge: {{{u},{v}}} listed more than once")]
    MultiEdge { u: usize, v: usize },
    #[error("degree > 4: vertex {vertex} has degree {degree}")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("graph is disconnected: vertex {vertex} unreachable from vertex 0")]
    Disconnected { vertex: usize },
}

impl ArrangementGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { n, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Sorted neighbor lists. Assumes ids are in range.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Incident edge ids per vertex, in edge-id order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        inc
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Checks simplicity, the degree bound, id range and connectivity, in
    /// that order, and reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Violation::VertexOutOfRange { edge: e, vertex, n });
                }
            }
            if u == v {
                return Err(Violation::SelfLoop { edge: e, vertex: u });
            }
        }
        let mut keys: Vec<(usize, usize)> =
            self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Violation::MultiEdge { u: w[0].0, v: w[0].1 });
        }
        if let Some((vertex, &degree)) = self
            .degrees()
            .iter()
            .enumerate()
            .find(|(_, &d)| d > MAX_DEGREE)
        {
            return Err(Violation::DegreeTooHigh { vertex, degree });
        }
        if n > 0 {
            let adj = self.adjacency();
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(vertex) = seen.iter().position(|&s| !s) {
                return Err(Violation::Disconnected { vertex });
            }
        }
        Ok(())
    }
}

/// Structural error in a rotation system.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("rotation has {got} vertices, expected {expected}")]
    VertexCount { got: usize, expected: usize },
    #[error("edge {edge} appears {count} times in the rotation of vertex {vertex}")]
    EdgeMultiplicity { vertex: usize, edge: usize, count: usize },
    #[error("edge {edge} is listed at vertex {vertex}, which is not one of its endpoints")]
    NotIncident { vertex: usize, edge: usize },
    #[error("edge id {edge} out of range")]
    EdgeOutOfRange { edge: usize },
}

/// Cyclic order of incident edge ids around each vertex of a (multi)graph.
///
/// Faces are traced by arriving at `v` along edge `e` and leaving along the
/// edge that follows `e` in the rotation at `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub endpoints: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Every edge must appear exactly once at each of its endpoints.
    pub fn check(&self) -> Result<(), RotationError> {
        let m = self.endpoints.len();
        let mut seen = vec![[0usize; 2]; m];
        for (v, cycle) in self.rotation.iter().enumerate() {
            for &e in cycle {
                if e >= m {
                    return Err(RotationError::EdgeOutOfRange { edge: e });
                }
                let (a, b) = self.endpoints[e];
                if a == v {
                    seen[e][0] += 1;
                } else if b == v {
                    seen[e][1] += 1;
                } else {
                    return Err(RotationError::NotIncident { vertex: v, edge: e });
                }
            }
        }
        for (e, counts) in seen.iter().enumerate() {
            let (a, b) = self.endpoints[e];
            for (side, &vertex) in [a, b].iter().enumerate() {
                if vertex >= self.rotation.len() {
                    return Err(RotationError::VertexCount {
                        got: self.rotation.len(),
                        expected: vertex + 1,
                    });
                }
                if counts[side] != 1 {
                    return Err(RotationError::EdgeMultiplicity {
                        vertex,
                        edge: e,
                        count: counts[side],
                    });
                }
            }
        }
        Ok(())
    }

    /// Mirror image: every cyclic order reversed.
    pub fn reflected(&self) -> RotationSystem {
        RotationSystem {
            endpoints: self.endpoints.clone(),
            rotation: self
                .rotation
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Walks every dart once and returns the face cycles as vertex sequences.
    pub fn faces(&self) -> Result<Vec<Vec<usize>>, RotationError> {
        self.check()?;
        let m = self.endpoints.len();
        // position of each edge in each endpoint's rotation
        let mut pos = vec![[usize::MAX; 2]; m];
        for (v, cycle) in self.rotation.iter().enumerate() {
            for (i, &e) in cycle.iter().enumerate() {
                let side = usize::from(self.endpoints[e].0 != v);
                pos[e][side] = i;
            }
        }
        // dart 2e goes endpoints[e].0 -> .1, dart 2e+1 the reverse
        let mut used = vec![false; 2 * m];
        let mut faces = Vec::new();
        for start in 0..2 * m {
            if used[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut dart = start;
            while !used[dart] {
                used[dart] = true;
                let e = dart / 2;
                let (a, b) = self.endpoints[e];
                let (tail, head, head_side) = if dart % 2 == 0 { (a, b, 1) } else { (b, a, 0) };
                face.push(tail);
                let cycle = &self.rotation[head];
                let next_e = cycle[(pos[e][head_side] + 1) % cycle.len()];
                dart = if self.endpoints[next_e].0 == head {
                    2 * next_e
                } else {
                    2 * next_e + 1
                };
            }
            faces.push(face);
        }
        Ok(faces)
    }
}

/// Face cycles of a rotation system (each a cyclic vertex sequence).
pub fn faces_of(rotation: &RotationSystem) -> Result<Vec<Vec<usize>>, RotationError> {
    rotation.faces()
}

/// Canonical form of a cyclic vertex sequence: the lexicographically least
/// rotation over both traversal directions.
pub fn canonical_face(face: &[usize]) -> Vec<usize> {
    let k = face.len();
    let mut best: Option<Vec<usize>> = None;
    let reversed: Vec<usize> = face.iter().rev().copied().collect();
    let min = face.iter().copied().min();
    for seq in [face, reversed.as_slice()] {
        for start in 0..k {
            if Some(seq[start]) != min {
                continue;
            }
            let cand: Vec<usize> = (0..k).map(|i| seq[(start + i) % k]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Canonical faces, sorted; a multiset suitable for equality tests.
pub fn canonical_face_set(faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = faces.iter().map(|f| canonical_face(f)).collect();
    out.sort();
    out
}

/// One pseudoline as the ordered list of crossings along it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pseudoline {
    pub id: usize,
    pub crossings: Vec<usize>,
}

/// Where a vertex sits on its two pseudolines: `(line, index)` pairs with the
/// smaller line id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Membership {
    pub a: usize,
    pub index_a: usize,
    pub b: usize,
    pub index_b: usize,
}

impl Membership {
    pub fn lines(&self) -> (usize, usize) {
        (self.a, self.b)
    }
}

/// One end of a pseudoline at the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathEnd {
    pub line: usize,
    /// True for the end before `crossings[0]`.
    pub at_start: bool,
}

/// A recognized arrangement: its canonical embedding and its pseudolines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementStructure {
    pub graph: ArrangementGraph,
    pub rotation: RotationSystem,
    pub pseudolines: Vec<Pseudoline>,
    pub membership: Vec<Membership>,
    /// Circular order of the 2ℓ pseudoline ends around the point at infinity.
    pub infinity_order: Vec<PathEnd>,
}

/// Inconsistency detected when assembling an [`ArrangementStructure`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("vertex {0} lies on {1} pseudolines, expected 2")]
    VertexLineCount(usize, usize),
    #[error("pseudolines {0} and {1} share {2} vertices, expected 1")]
    PairShare(usize, usize, usize),
    #[error("vertex count {n} is not l(l-1)/2 for l = {l}")]
    VertexCount { n: usize, l: usize },
    #[error("pseudoline ids must be 0..l in order")]
    LineIds,
    #[error("infinity order must list each pseudoline end exactly once")]
    InfinityOrder,
    #[error("vertex id {0} out of range")]
    VertexRange(usize),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

impl ArrangementStructure {
    /// Assembles a structure and derives the membership index, checking the
    /// vertex/pair invariants.
    pub fn new(
        graph: ArrangementGraph,
        rotation: RotationSystem,
        pseudolines: Vec<Pseudoline>,
        infinity_order: Vec<PathEnd>,
    ) -> Result<Self, StructureError> {
        let l = pseudolines.len();
        let n = graph.n;
        if n != l * l.saturating_sub(1) / 2 {
            return Err(StructureError::VertexCount { n, l });
        }
        if pseudolines.iter().enumerate().any(|(i, p)| p.id != i) {
            return Err(StructureError::LineIds);
        }
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for p in &pseudolines {
            for (i, &v) in p.crossings.iter().enumerate() {
                if v >= n {
                    return Err(StructureError::VertexRange(v));
                }
                slots[v].push((p.id, i));
            }
        }
        let mut membership = Vec::with_capacity(n);
        for (v, s) in slots.iter().enumerate() {
            if s.len() != 2 || s[0].0 == s[1].0 {
                return Err(StructureError::VertexLineCount(v, s.len()));
            }
            let (x, y) = if s[0].0 < s[1].0 { (s[0], s[1]) } else { (s[1], s[0]) };
            membership.push(Membership {
                a: x.0,
                index_a: x.1,
                b: y.0,
                index_b: y.1,
            });
        }
        let mut share = vec![0usize; l * l];
        for m in &membership {
            share[m.a * l + m.b] += 1;
        }
        for a in 0..l {
            for b in a + 1..l {
                if share[a * l + b] != 1 {
                    return Err(StructureError::PairShare(a, b, share[a * l + b]));
                }
            }
        }
        let mut ends = vec![[0usize; 2]; l];
        for end in &infinity_order {
            if end.line >= l {
                return Err(StructureError::InfinityOrder);
            }
            ends[end.line][usize::from(end.at_start)] += 1;
        }
        if infinity_order.len() != 2 * l || ends.iter().any(|c| *c != [1, 1]) {
            return Err(StructureError::InfinityOrder);
        }
        rotation.check()?;
        Ok(Self {
            graph,
            rotation,
            pseudolines,
            membership,
            infinity_order,
        })
    }

    /// Number of pseudolines ℓ.
    pub fn l(&self) -> usize {
        self.pseudolines.len()
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.rotation
            .faces()
            .expect("structure rotation validated at construction")
    }

    /// For every vertex, the unordered pair of pseudolines through it.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        self.membership.iter().map(Membership::lines).collect()
    }
}

/// Wire form of a structure.
#[derive(Serialize, Deserialize)]
struct StructureJson {
    l: usize,
    pseudolines: Vec<Vec<usize>>,
    rotation: Vec<Vec<usize>>,
    graph: ArrangementGraph,
    /// `[line, 1]` for the start end, `[line, 0]` for the far end.
    infinity: Vec<(usize, u8)>,
}

impl Serialize for ArrangementStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StructureJson {
            l: self.l(),
            pseudolines: self.pseudolines.iter().map(|p| p.crossings.clone()).collect(),
            rotation: self.rotation.rotation.clone(),
            graph: self.graph.clone(),
            infinity: self
                .infinity_order
                .iter()
                .map(|e| (e.line, u8::from(e.at_start)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ArrangementStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = StructureJson::deserialize(deserializer)?;
        if raw.l != raw.pseudolines.len() {
            return Err(serde::de::Error::custom("l does not match pseudoline count"));
        }
        let rotation = RotationSystem {
            endpoints: raw.graph.edges.clone(),
            rotation: raw.rotation,
        };
        let pseudolines = raw
            .pseudolines
            .into_iter()
            .enumerate()
            .map(|(id, crossings)| Pseudoline { id, crossings })
            .collect();
        let infinity = raw
            .infinity
            .into_iter()
            .map(|(line, s)| PathEnd {
                line,
                at_start: s != 0,
            })
            .collect();
        ArrangementStructure::new(raw.graph, rotation, pseudolines, infinity)
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ArrangementGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n, self.edges.len())
    }
}
