//! Instance generators: random line arrangements in general position,
//! random wiring diagrams, stacked diagrams, and the graph of a diagram.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so a given
//! `(operation, parameters, seed)` always produces the same output.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ArrangementGraph, ArrangementStructure, PathEnd, Pseudoline, RotationSystem};
use crate::wiring::{level_stats, Crossing, WiringDiagram, WiringError};

pub const DEFAULT_COEFFICIENT_RANGE: i64 = 1_000_000;
pub const REDRAW_BUDGET: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least {min} lines, got {got}")]
    TooFewLines { min: usize, got: usize },
    #[error("could not place line {line} in general position after {budget} draws")]
    BudgetExhausted { line: usize, budget: usize },
    #[error("coefficient range must be positive")]
    BadRange,
    #[error("crossing vertex ids are not a permutation of 0..{0}")]
    VertexIds(usize),
    #[error(transparent)]
    Wiring(#[from] WiringError),
}

/// The line `a·x + b·y = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Line {
    pub fn is_parallel(&self, o: &Line) -> bool {
        i128::from(self.a) * i128::from(o.b) == i128::from(o.a) * i128::from(self.b)
    }

    /// Intersection point as `(x_num, y_num, den)` with `den > 0`.
    pub fn meet(&self, o: &Line) -> Option<(i128, i128, i128)> {
        let (a1, b1, c1) = (i128::from(self.a), i128::from(self.b), i128::from(self.c));
        let (a2, b2, c2) = (i128::from(o.a), i128::from(o.b), i128::from(o.c));
        let den = a1 * b2 - a2 * b1;
        if den == 0 {
            return None;
        }
        let x = c1 * b2 - c2 * b1;
        let y = a1 * c2 - a2 * c1;
        Some(if den < 0 { (-x, -y, -den) } else { (x, y, den) })
    }
}

/// True when the three lines pass through a common point.
pub fn concurrent(p: &Line, q: &Line, r: &Line) -> bool {
    let m = |l: &Line| [i128::from(l.a), i128::from(l.b), i128::from(l.c)];
    let (x, y, z) = (m(p), m(q), m(r));
    let det = x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0])
        + x[2] * (y[0] * z[1] - y[1] * z[0]);
    det == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSet {
    pub lines: Vec<Line>,
    pub seed: u64,
}

/// A random line arrangement together with its graph and ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedArrangement {
    pub lines: LineSet,
    pub graph: ArrangementGraph,
    /// Vertex positions on the unit circle in random order.
    pub layout: Vec<[f64; 2]>,
    /// Crossings along each line, in the line's direction `(b, -a)`.
    pub pseudolines: Vec<Vec<usize>>,
    /// The two lines through each vertex, smaller id first.
    pub pairs: Vec<(usize, usize)>,
}

pub fn random_lines(l: usize, seed: u64) -> Result<GeneratedArrangement, GenerateError> {
    random_lines_in_range(l, seed, DEFAULT_COEFFICIENT_RANGE)
}

/// Like [`random_lines`] with coefficients drawn from `[-range, range]`.
pub fn random_lines_in_range(l: usize, seed: u64, range: i64) -> Result<GeneratedArrangement, GenerateError> {
    if l < 3 {
        return Err(GenerateError::TooFewLines { min: 3, got: l });
    }
    if range <= 0 {
        return Err(GenerateError::BadRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<Line> = Vec::with_capacity(l);
    for k in 0..l {
        let mut placed = false;
        for _ in 0..REDRAW_BUDGET {
            let cand = Line {
                a: rng.random_range(-range..=range),
                b: rng.random_range(-range..=range),
                c: rng.random_range(-range..=range),
            };
            if cand.a == 0 && cand.b == 0 {
                continue;
            }
            if lines.iter().any(|o| o.is_parallel(&cand)) {
                continue;
            }
            let degenerate = (0..lines.len())
                .any(|i| (i + 1..lines.len()).any(|j| concurrent(&lines[i], &lines[j], &cand)));
            if !degenerate {
                lines.push(cand);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GenerateError::BudgetExhausted {
                line: k,
                budget: REDRAW_BUDGET,
            });
        }
    }

    let n = l * (l - 1) / 2;
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let mut pairs = vec![(0, 0); n];
    let mut points = vec![(0i128, 0i128, 1i128); n];
    let mut on_line: Vec<Vec<usize>> = vec![Vec::with_capacity(l - 1); l];
    let mut k = 0;
    for i in 0..l {
        for j in i + 1..l {
            let v = ids[k];
            k += 1;
            pairs[v] = (i, j);
            points[v] = lines[i].meet(&lines[j]).expect("lines are not parallel");
            on_line[i].push(v);
            on_line[j].push(v);
        }
    }
    for (i, verts) in on_line.iter_mut().enumerate() {
        let (a, b) = (i128::from(lines[i].a), i128::from(lines[i].b));
        // parameter along (b, -a) is (x·b - y·a) / den
        verts.sort_by(|&u, &v| {
            let (xu, yu, du) = points[u];
            let (xv, yv, dv) = points[v];
            ((xu * b - yu * a) * dv).cmp(&((xv * b - yv * a) * du))
        });
    }
    let mut edges = Vec::with_capacity(l * (l - 2));
    for verts in &on_line {
        for w in verts.windows(2) {
            edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut layout = vec![[0.0; 2]; n];
    for (slot, &v) in order.iter().enumerate() {
        let angle = std::f64::consts::TAU * slot as f64 / n as f64;
        layout[v] = [angle.cos(), angle.sin()];
    }

    Ok(GeneratedArrangement {
        lines: LineSet { lines, seed },
        graph: ArrangementGraph::new(n, edges),
        layout,
        pseudolines: on_line,
        pairs,
    })
}

/// Level `i` of the puzzle uses `i + 3` lines.
pub fn planarity_level(i: usize, seed: u64) -> Result<GeneratedArrangement, GenerateError> {
    if i == 0 {
        return Err(GenerateError::TooFewLines { min: 4, got: 3 });
    }
    random_lines(i + 3, seed)
}

/// Random simple wiring diagram: swap a uniformly chosen adjacent pair that
/// has not crossed yet until the order is reversed. Vertex ids follow
/// crossing order.
pub fn random_wiring(l: usize, seed: u64) -> Result<WiringDiagram, GenerateError> {
    if l < 2 {
        return Err(GenerateError::TooFewLines { min: 2, got: l });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracks: Vec<usize> = (0..l).collect();
    let total = l * (l - 1) / 2;
    let mut crossings = Vec::with_capacity(total);
    let mut open = Vec::with_capacity(l);
    for vertex in 0..total {
        // starting from the identity, a pair is uncrossed while still in order
        open.clear();
        open.extend((0..l - 1).filter(|&t| tracks[t] < tracks[t + 1]));
        assert!(!open.is_empty(), "uncrossed adjacent pair exists before reversal");
        let t = open[rng.random_range(0..open.len())];
        tracks.swap(t, t + 1);
        crossings.push(Crossing { vertex, level: t + 1 });
    }
    Ok(WiringDiagram {
        l,
        initial: (0..l).collect(),
        crossings,
        cut: None,
    })
}

/// `d1` below `d2`, followed by a grid crossing every wire of `d2` with every
/// wire of `d1`. Vertex ids are renumbered in crossing order.
pub fn stacked(d1: &WiringDiagram, d2: &WiringDiagram) -> WiringDiagram {
    let (l1, l2) = (d1.l, d2.l);
    let mut initial = d1.initial.clone();
    initial.extend(d2.initial.iter().map(|&p| p + l1));
    let mut levels: Vec<usize> = d1.crossings.iter().map(|c| c.level).collect();
    levels.extend(d2.crossings.iter().map(|c| c.level + l1));
    for k in 0..l2 {
        levels.extend((k + 1..=l1 + k).rev());
    }
    WiringDiagram {
        l: l1 + l2,
        initial,
        crossings: levels
            .into_iter()
            .enumerate()
            .map(|(vertex, level)| Crossing { vertex, level })
            .collect(),
        cut: None,
    }
}

/// Best of `tries` random diagrams by level complexity (first one on ties).
pub fn max_kappa_wiring(l: usize, seed: u64, tries: usize) -> Result<WiringDiagram, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, WiringDiagram)> = None;
    for _ in 0..tries.max(1) {
        let d = random_wiring(l, rng.next_u64())?;
        let k = level_stats(&d).kappa;
        if best.as_ref().is_none_or(|(bk, _)| k > *bk) {
            best = Some((k, d));
        }
    }
    Ok(best.expect("at least one try").1)
}

/// The arrangement graph of a diagram and a structure whose rotation is the
/// diagram's own planar embedding.
///
/// Ends at infinity are listed counterclockwise as drawn: right ends bottom to
/// top, then left ends top to bottom, so cut `ℓ` reproduces the diagram.
pub fn graph_of(d: &WiringDiagram) -> Result<(ArrangementGraph, ArrangementStructure), GenerateError> {
    d.validate()?;
    let l = d.l;
    let n = d.crossings.len();
    let mut seen = vec![false; n];
    for c in &d.crossings {
        if c.vertex >= n || std::mem::replace(&mut seen[c.vertex], true) {
            return Err(GenerateError::VertexIds(n));
        }
    }
    let swaps = d.swapped_pairs()?;
    let mut seq: Vec<Vec<usize>> = vec![Vec::with_capacity(l.saturating_sub(1)); l];
    // (rising line, index on it, falling line, index on it)
    let mut at = vec![(0, 0, 0, 0); n];
    for (c, &(low, high)) in d.crossings.iter().zip(&swaps) {
        at[c.vertex] = (low, seq[low].len(), high, seq[high].len());
        seq[low].push(c.vertex);
        seq[high].push(c.vertex);
    }
    let mut edges = Vec::with_capacity(n * 2);
    let mut edge_after: Vec<Vec<usize>> = Vec::with_capacity(l);
    for s in &seq {
        let mut ids = Vec::with_capacity(s.len().saturating_sub(1));
        for w in s.windows(2) {
            ids.push(edges.len());
            edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
        edge_after.push(ids);
    }
    let after = |p: usize, i: usize| edge_after[p].get(i).copied();
    let before = |p: usize, i: usize| i.checked_sub(1).map(|j| edge_after[p][j]);
    let rotation: Vec<Vec<usize>> = at
        .iter()
        .map(|&(up, iu, down, id)| {
            [after(up, iu), before(down, id), before(up, iu), after(down, id)]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();

    let mut infinity: Vec<PathEnd> = d
        .final_tracks()
        .into_iter()
        .map(|line| PathEnd { line, at_start: false })
        .collect();
    infinity.extend(d.initial.iter().rev().map(|&line| PathEnd { line, at_start: true }));

    let graph = ArrangementGraph::new(n, edges);
    let rot = RotationSystem {
        endpoints: graph.edges.clone(),
        rotation,
    };
    let pseudolines = seq
        .into_iter()
        .enumerate()
        .map(|(id, crossings)| Pseudoline { id, crossings })
        .collect();
    let structure = ArrangementStructure::new(graph.clone(), rot, pseudolines, infinity)
        .expect("a valid diagram yields a valid structure");
    Ok((graph, structure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonical_face_set;
    use crate::recognize::{recognize, RejectionCode};
    use crate::wiring::{build_wiring, choose_cut};

    #[test]
    fn line_counts() {
        for (l, n, m) in [(3, 3, 3), (4, 6, 8), (7, 21, 35)] {
            let g = random_lines(l, 42).unwrap();
            assert_eq!((g.graph.n, g.graph.edge_count()), (n, m));
            assert!(g.pseudolines.iter().all(|p| p.len() == l - 1));
        }
    }

    #[test]
    fn planarity_level_sizes() {
        assert_eq!(planarity_level(1, 3).unwrap().graph.n, 6);
        assert_eq!(planarity_level(4, 3).unwrap().graph.n, 21);
        assert_eq!(planarity_level(2, 9).unwrap(), planarity_level(2, 9).unwrap());
        assert!(planarity_level(0, 1).is_err());
    }

    #[test]
    fn exact_predicates() {
        let x = Line { a: 0, b: 1, c: 0 };
        let y = Line { a: 1, b: 0, c: 0 };
        let diag = Line { a: 1, b: -1, c: 0 };
        let off = Line { a: 1, b: -1, c: 1 };
        assert!(concurrent(&x, &y, &diag));
        assert!(!concurrent(&x, &y, &off));
        assert!(diag.is_parallel(&off));
        assert_eq!(x.meet(&y), Some((0, 0, 1)));
        let big = Line { a: 999_999, b: -1_000_000, c: 1_000_000 };
        let big2 = Line { a: -1_000_000, b: 999_998, c: -999_999 };
        let (px, py, d) = big.meet(&big2).unwrap();
        assert!(d > 0);
        // the point satisfies both equations exactly
        for l in [big, big2] {
            assert_eq!(i128::from(l.a) * px + i128::from(l.b) * py, i128::from(l.c) * d);
        }
    }

    #[test]
    fn tiny_range_exhausts_budget() {
        // only four directions exist with coefficients in {-1, 0, 1}
        assert!(matches!(
            random_lines_in_range(6, 1, 1),
            Err(GenerateError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn layout_on_unit_circle() {
        let g = random_lines(5, 8).unwrap();
        for [x, y] in &g.layout {
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_wiring_small() {
        let d = random_wiring(2, 0).unwrap();
        assert_eq!(d.crossings, vec![Crossing { vertex: 0, level: 1 }]);
        for seed in 0..10 {
            let d = random_wiring(3, seed).unwrap();
            let levels: Vec<usize> = d.crossings.iter().map(|c| c.level).collect();
            assert!(levels == [1, 2, 1] || levels == [2, 1, 2]);
        }
        for seed in 0..20 {
            random_wiring(9, seed).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn stacked_counts() {
        let a = random_wiring(2, 1).unwrap();
        let b = random_wiring(2, 2).unwrap();
        let s = stacked(&a, &b);
        assert_eq!(s.l, 4);
        assert_eq!(s.crossings.len(), 6);
        s.validate().unwrap();
        let a = max_kappa_wiring(5, 3, 10).unwrap();
        let b = max_kappa_wiring(4, 4, 10).unwrap();
        let s = stacked(&a, &b);
        s.validate().unwrap();
        let k = level_stats(&s).kappa;
        assert!(k >= level_stats(&a).kappa && k >= level_stats(&b).kappa);
    }

    #[test]
    fn graph_of_small_diagrams() {
        let (g, _) = graph_of(&random_wiring(2, 0).unwrap()).unwrap();
        assert_eq!((g.n, g.edge_count()), (1, 0));
        assert_eq!(recognize(&g).unwrap_err().code, RejectionCode::TooSmall);
        let (g, s) = graph_of(&random_wiring(3, 0).unwrap()).unwrap();
        assert_eq!((g.n, g.edge_count()), (3, 3));
        assert_eq!(s.faces().len(), 2);
    }

    #[test]
    fn graph_of_cut_l_reproduces_diagram() {
        for seed in 0..10 {
            let d = random_wiring(6, seed).unwrap();
            let (_, s) = graph_of(&d).unwrap();
            let rebuilt = build_wiring(&choose_cut(&s, 6).unwrap()).unwrap();
            let levels = |w: &WiringDiagram| -> Vec<(usize, usize)> {
                let mut v: Vec<_> = w.crossings.iter().map(|c| (c.vertex, c.level)).collect();
                v.sort();
                v
            };
            assert_eq!(levels(&rebuilt), levels(&d));
            assert_eq!(rebuilt.initial, d.initial);
        }
    }

    #[test]
    fn recognizer_matches_diagram_embedding() {
        for seed in 0..10 {
            let (g, s) = graph_of(&random_wiring(7, seed).unwrap()).unwrap();
            let r = recognize(&g).unwrap();
            assert_eq!(r.l(), 7);
            assert_eq!(canonical_face_set(&r.faces()), canonical_face_set(&s.faces()));
        }
    }
}
