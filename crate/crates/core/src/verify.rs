//! Brute-force oracles: exact straight-line planarity, face-set comparison
//! and exhaustive cycle enumeration on small graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{canonical_face_set, ArrangementGraph};

pub const CYCLE_ENUMERATION_LIMIT: usize = 15;

/// Everything wrong with a straight-line drawing. Empty iff planar.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossingReport {
    /// Edge pairs that touch anywhere other than a shared endpoint.
    pub crossings: Vec<(usize, usize)>,
    /// Vertices lying in the open interior of a non-incident edge.
    pub vertex_on_edge: Vec<(usize, usize)>,
    /// Distinct vertices drawn at the same point.
    pub coincident: Vec<(usize, usize)>,
}

impl CrossingReport {
    pub fn is_planar(&self) -> bool {
        self.crossings.is_empty() && self.vertex_on_edge.is_empty() && self.coincident.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.crossings.len() + self.vertex_on_edge.len() + self.coincident.len()
    }
}

type Pt = [i64; 2];

fn orient(p: Pt, q: Pt, r: Pt) -> i128 {
    let (px, py) = (i128::from(p[0]), i128::from(p[1]));
    (i128::from(q[0]) - px) * (i128::from(r[1]) - py) - (i128::from(q[1]) - py) * (i128::from(r[0]) - px)
}

fn sign(x: i128) -> i8 {
    x.signum() as i8
}

/// `p` is within the bounding box of `a`-`b` (meaningful when collinear).
fn in_box(p: Pt, a: Pt, b: Pt) -> bool {
    (a[0].min(b[0])..=a[0].max(b[0])).contains(&p[0]) && (a[1].min(b[1])..=a[1].max(b[1])).contains(&p[1])
}

/// Closed segments `a`-`b` and `c`-`d` share at least one point.
pub fn segments_touch(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    let (o1, o2) = (sign(orient(a, b, c)), sign(orient(a, b, d)));
    let (o3, o4) = (sign(orient(c, d, a)), sign(orient(c, d, b)));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && in_box(c, a, b))
        || (o2 == 0 && in_box(d, a, b))
        || (o3 == 0 && in_box(a, c, d))
        || (o4 == 0 && in_box(b, c, d))
}

/// `p` lies on segment `a`-`b` strictly between its endpoints.
pub fn in_open_segment(p: Pt, a: Pt, b: Pt) -> bool {
    orient(a, b, p) == 0 && in_box(p, a, b) && p != a && p != b
}

/// Exact pairwise test of a straight-line drawing.
pub fn straightline_planar(positions: &[Pt], edges: &[(usize, usize)]) -> CrossingReport {
    let mut report = CrossingReport::default();
    let n = positions.len();
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by_key(|&v| positions[v]);
    for w in 0..n {
        for &u in sorted[w + 1..].iter().take_while(|&&u| positions[u] == positions[sorted[w]]) {
            let v = sorted[w];
            report.coincident.push((v.min(u), v.max(u)));
        }
    }
    report.coincident.sort_unstable();

    for (e, &(a, b)) in edges.iter().enumerate() {
        let (pa, pb) = (positions[a], positions[b]);
        for (v, &p) in positions.iter().enumerate() {
            if v != a && v != b && in_open_segment(p, pa, pb) {
                report.vertex_on_edge.push((v, e));
            }
        }
        for (f, &(c, d)) in edges.iter().enumerate().skip(e + 1) {
            let (pc, pd) = (positions[c], positions[d]);
            let shared = [a, b].iter().filter(|&&x| x == c || x == d).count();
            let bad = match shared {
                0 => segments_touch(pa, pb, pc, pd),
                1 => {
                    let s = if a == c || a == d { a } else { b };
                    let x = if s == a { pb } else { pa };
                    let y = if s == c { pd } else { pc };
                    let ps = positions[s];
                    // overlap along a common ray from the shared endpoint
                    orient(ps, x, y) == 0
                        && (i128::from(x[0] - ps[0]) * i128::from(y[0] - ps[0])
                            + i128::from(x[1] - ps[1]) * i128::from(y[1] - ps[1]))
                            > 0
                }
                _ => true,
            };
            if bad {
                report.crossings.push((e, f));
            }
        }
    }
    report
}

/// Face sets equal up to a global reflection of the embedding.
pub fn same_face_set(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let ca = canonical_face_set(a);
    if ca == canonical_face_set(b) {
        return true;
    }
    let reflected: Vec<Vec<usize>> = b.iter().map(|f| f.iter().rev().copied().collect()).collect();
    ca == canonical_face_set(&reflected)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cycle enumeration limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

/// Every simple cycle through `v` of length at most `max_len`, each listed
/// once starting at `v`, in the direction whose second vertex is smaller
/// than its last.
pub fn enumerate_cycles_through(
    g: &ArrangementGraph,
    v: usize,
    max_len: usize,
) -> Result<Vec<Vec<usize>>, OracleError> {
    if g.n > CYCLE_ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            n: g.n,
            limit: CYCLE_ENUMERATION_LIMIT,
        });
    }
    if v >= g.n {
        return Err(OracleError::BadVertex(v));
    }
    let adj = g.adjacency();
    let mut out = Vec::new();
    let mut path = vec![v];
    let mut on_path = vec![false; g.n];
    on_path[v] = true;
    extend(&adj, max_len, &mut path, &mut on_path, &mut out);
    Ok(out)
}

fn extend(
    adj: &[Vec<usize>],
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("path starts at v");
    for &w in &adj[last] {
        if w == path[0] {
            if path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            }
        } else if !on_path[w] && path.len() < max_len {
            on_path[w] = true;
            path.push(w);
            extend(adj, max_len, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}
