//! Linear-time recognition of simple pseudoline arrangement graphs.
//!
//! The input is augmented with a vertex at infinity joined to every vertex of
//! degree below four (twice to degree-two vertices), embedded, and split into
//! paths that continue straight through every vertex. The paths are accepted
//! as pseudolines when none is a closed cycle, none crosses itself, there are
//! ℓ of them for ℓ(ℓ-1)/2 vertices, and no two of them meet twice.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ArrangementGraph, ArrangementStructure, PathEnd, Pseudoline, RotationSystem, Violation,
};
use crate::planar::{planar_embed, EmbedError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RejectionCode {
    NotPlanar,
    BadDegree,
    PathIsCycle,
    PathSelfCrosses,
    WrongVertexCount,
    PairMultiCross,
    Disconnected,
    TooSmall,
    /// Self-loops, repeated edges or out-of-range ids.
    InvalidGraph,
}

impl fmt::Display for RejectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("UNKNOWN"))
    }
}

/// Why a graph is not a simple pseudoline arrangement graph, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{code}: {detail}")]
pub struct Rejection {
    pub code: RejectionCode,
    pub detail: String,
}

impl Rejection {
    fn new(code: RejectionCode, detail: impl Into<String>) -> Self {
        Self {
            code,
            detail: detail.into(),
        }
    }
}

impl From<Violation> for Rejection {
    fn from(v: Violation) -> Self {
        let code = match v {
            Violation::DegreeTooHigh { .. } => RejectionCode::BadDegree,
            Violation::Disconnected { .. } => RejectionCode::Disconnected,
            _ => RejectionCode::InvalidGraph,
        };
        Rejection::new(code, v.to_string())
    }
}

/// Elementary step counts of one recognition run, planarity excluded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecognizeStats {
    pub augment: u64,
    pub decompose: u64,
    pub checks: u64,
}

impl RecognizeStats {
    pub fn total(&self) -> u64 {
        self.augment + self.decompose + self.checks
    }
}

/// The base graph plus the vertex at infinity.
///
/// Edge ids `0..m` are the base edges; id `m + k` is augmentation edge `k`,
/// joining `augmentation[k]` to `infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraph {
    pub base: ArrangementGraph,
    pub infinity: usize,
    pub augmentation: Vec<usize>,
    pub rotation: Option<RotationSystem>,
}

impl AugmentedGraph {
    /// Joins the new vertex `n` to each vertex of degree `d < 4` by `4 - d`
    /// edges. Callers reject degrees below two beforehand.
    pub fn new(base: &ArrangementGraph) -> Self {
        let mut augmentation = Vec::new();
        for (v, d) in base.degrees().into_iter().enumerate() {
            for _ in d..4 {
                augmentation.push(v);
            }
        }
        Self {
            base: base.clone(),
            infinity: base.n,
            augmentation,
            rotation: None,
        }
    }

    pub fn endpoints(&self) -> Vec<(usize, usize)> {
        let mut e = self.base.edges.clone();
        e.extend(self.augmentation.iter().map(|&v| (v, self.infinity)));
        e
    }

    pub fn is_augmentation(&self, e: usize) -> bool {
        e >= self.base.edges.len()
    }

    /// Embeds the augmented graph and fixes its reflection: at the lowest-id
    /// vertex of base degree at least three, the base edge after its
    /// lowest-id base edge must lead to a smaller neighbor than the base edge
    /// before it.
    pub fn embed(&mut self) -> Result<&RotationSystem, Rejection> {
        let mut rot = planar_embed(self.base.n + 1, &self.endpoints()).map_err(|e| match e {
            EmbedError::NotPlanar => Rejection::new(
                RejectionCode::NotPlanar,
                "graph plus a vertex at infinity has no planar embedding",
            ),
            other => Rejection::new(RejectionCode::InvalidGraph, other.to_string()),
        })?;
        let m = self.base.edges.len();
        let pivot = (0..self.base.n).find(|&v| rot.rotation[v].iter().filter(|&&e| e < m).count() >= 3);
        if let Some(v) = pivot {
            let base: Vec<usize> = rot.rotation[v].iter().copied().filter(|&e| e < m).collect();
            let start = base
                .iter()
                .enumerate()
                .min_by_key(|&(_, &e)| e)
                .map(|(i, _)| i)
                .expect("pivot has base edges");
            let k = base.len();
            let succ = rot.other_end(base[(start + 1) % k], v);
            let pred = rot.other_end(base[(start + k - 1) % k], v);
            if succ > pred {
                rot = rot.reflected();
            }
        }
        self.rotation = Some(rot);
        Ok(self.rotation.as_ref().expect("just set"))
    }
}

/// Pseudoline paths found in an embedded augmented graph, with the circular
/// order of their ends at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub pseudolines: Vec<Pseudoline>,
    pub infinity_order: Vec<PathEnd>,
}

/// Splits the embedded augmented graph into paths through opposite edges and
/// checks that they are cycle-free and never cross themselves.
pub fn path_decompose(aug: &AugmentedGraph) -> Result<PathDecomposition, Rejection> {
    let mut stats = RecognizeStats::default();
    decompose(aug, &mut stats)
}

fn decompose(aug: &AugmentedGraph, stats: &mut RecognizeStats) -> Result<PathDecomposition, Rejection> {
    let rot = aug
        .rotation
        .as_ref()
        .expect("path_decompose requires an embedded augmented graph");
    let n = aug.base.n;
    let m = aug.base.edges.len();
    let total = rot.edge_count();
    for v in 0..n {
        if rot.rotation[v].len() != 4 {
            return Err(Rejection::new(
                RejectionCode::BadDegree,
                format!("vertex {v} has augmented degree {}", rot.rotation[v].len()),
            ));
        }
    }
    // slot of each edge at each of its endpoints
    let mut slot = vec![[0usize; 2]; total];
    for (v, cycle) in rot.rotation.iter().enumerate() {
        for (i, &e) in cycle.iter().enumerate() {
            stats.decompose += 1;
            slot[e][usize::from(rot.endpoints[e].0 != v)] = i;
        }
    }
    let opposite = |v: usize, e: usize| -> usize {
        let i = slot[e][usize::from(rot.endpoints[e].0 != v)];
        rot.rotation[v][(i + 2) % 4]
    };

    let mut at_infinity = rot.rotation[aug.infinity].clone();
    if let Some(start) = at_infinity.iter().enumerate().min_by_key(|&(_, &e)| e).map(|(i, _)| i) {
        at_infinity.rotate_left(start);
    }

    let mut label = vec![usize::MAX; total];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut infinity_order = Vec::with_capacity(at_infinity.len());
    for &a in &at_infinity {
        stats.decompose += 1;
        if label[a] != usize::MAX {
            infinity_order.push(PathEnd {
                line: label[a],
                at_start: false,
            });
            continue;
        }
        let id = paths.len();
        let mut path = Vec::new();
        let mut e = a;
        let mut x = rot.other_end(a, aug.infinity);
        loop {
            stats.decompose += 1;
            label[e] = id;
            path.push(x);
            let next = opposite(x, e);
            if aug.is_augmentation(next) {
                label[next] = id;
                break;
            }
            e = next;
            x = rot.other_end(next, x);
        }
        paths.push(path);
        infinity_order.push(PathEnd {
            line: id,
            at_start: true,
        });
    }

    if let Some(start) = (0..m).find(|&e| label[e] == usize::MAX) {
        // closed component never reaching infinity
        let mut cycle = Vec::new();
        let mut e = start;
        let mut x = rot.endpoints[start].1;
        loop {
            stats.checks += 1;
            cycle.push(x);
            e = opposite(x, e);
            x = rot.other_end(e, x);
            if e == start {
                break;
            }
        }
        return Err(Rejection::new(
            RejectionCode::PathIsCycle,
            format!("opposite-edge walk closes into cycle {cycle:?} avoiding infinity"),
        ));
    }
    for v in 0..n {
        stats.checks += 1;
        let r = &rot.rotation[v];
        if label[r[0]] == label[r[1]] {
            return Err(Rejection::new(
                RejectionCode::PathSelfCrosses,
                format!("path {} crosses itself at vertex {v}", label[r[0]]),
            ));
        }
    }
    Ok(PathDecomposition {
        pseudolines: paths
            .into_iter()
            .enumerate()
            .map(|(id, crossings)| Pseudoline { id, crossings })
            .collect(),
        infinity_order,
    })
}

/// Bucket-sorts the pseudoline pair of every vertex and reports the first
/// pair met at two vertices.
pub fn find_repeated_pair(
    l: usize,
    pairs: &[(usize, usize)],
    stats: &mut RecognizeStats,
) -> Option<(usize, usize, usize, usize)> {
    // two passes of counting sort: by second line, then stably by first
    let mut by_b: Vec<Vec<usize>> = vec![Vec::new(); l];
    for (v, &(_, b)) in pairs.iter().enumerate() {
        stats.checks += 1;
        by_b[b].push(v);
    }
    let mut by_a: Vec<Vec<usize>> = vec![Vec::new(); l];
    for bucket in &by_b {
        for &v in bucket {
            stats.checks += 1;
            by_a[pairs[v].0].push(v);
        }
    }
    for bucket in &by_a {
        for w in bucket.windows(2) {
            stats.checks += 1;
            if pairs[w[0]] == pairs[w[1]] {
                let (a, b) = pairs[w[0]];
                return Some((a, b, w[0], w[1]));
            }
        }
    }
    None
}

/// Recognizes `g` and returns its pseudoline decomposition and canonical
/// embedding, or the first failed check.
pub fn recognize(g: &ArrangementGraph) -> Result<ArrangementStructure, Rejection> {
    recognize_with_stats(g).map(|(s, _)| s)
}

/// Like [`recognize`], also returning elementary step counts.
pub fn recognize_with_stats(
    g: &ArrangementGraph,
) -> Result<(ArrangementStructure, RecognizeStats), Rejection> {
    let mut stats = RecognizeStats::default();
    g.validate()?;
    if g.n < 3 {
        return Err(Rejection::new(
            RejectionCode::TooSmall,
            format!("{} vertices; at least three pseudolines (3 vertices) required", g.n),
        ));
    }
    let degrees = g.degrees();
    stats.augment += g.n as u64 + g.edges.len() as u64;
    if let Some(v) = degrees.iter().position(|&d| d < 2) {
        return Err(Rejection::new(
            RejectionCode::BadDegree,
            format!("vertex {v} has degree {} < 2", degrees[v]),
        ));
    }
    let mut aug = AugmentedGraph::new(g);
    stats.augment += aug.augmentation.len() as u64;
    aug.embed()?;
    let PathDecomposition {
        pseudolines,
        infinity_order,
    } = decompose(&aug, &mut stats)?;

    let l = pseudolines.len();
    if g.n != l * l.saturating_sub(1) / 2 {
        return Err(Rejection::new(
            RejectionCode::WrongVertexCount,
            format!("{} vertices but {l} paths; expected {}", g.n, l * l.saturating_sub(1) / 2),
        ));
    }
    let mut pairs = vec![(usize::MAX, usize::MAX); g.n];
    for p in &pseudolines {
        for &v in &p.crossings {
            stats.checks += 1;
            let slot = &mut pairs[v];
            if slot.0 == usize::MAX {
                slot.0 = p.id;
            } else {
                *slot = (slot.0.min(p.id), slot.0.max(p.id));
            }
        }
    }
    if let Some((a, b, v, w)) = find_repeated_pair(l, &pairs, &mut stats) {
        return Err(Rejection::new(
            RejectionCode::PairMultiCross,
            format!("paths {a} and {b} cross at both vertex {v} and vertex {w}"),
        ));
    }

    let full = aug.rotation.as_ref().expect("embedded");
    let m = g.edges.len();
    let rotation = RotationSystem {
        endpoints: g.edges.clone(),
        rotation: full.rotation[..g.n]
            .iter()
            .map(|c| c.iter().copied().filter(|&e| e < m).collect())
            .collect(),
    };
    stats.checks += 4 * g.n as u64;
    let structure = ArrangementStructure::new(g.clone(), rotation, pseudolines, infinity_order)
        .map_err(|e| Rejection::new(RejectionCode::PairMultiCross, e.to_string()))?;
    Ok((structure, stats))
}
