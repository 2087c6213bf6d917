//! Greedy embedding by ear decomposition.
//!
//! Start from a shortest cycle through one vertex, then repeatedly glue an
//! ear onto the embedded disk. For each pair `u`, `v` of consecutive
//! attachment vertices (boundary vertices with unembedded edges), `P` is the
//! boundary path between them and `S` a shortest path of unembedded edges
//! whose interior stays off the boundary. The ear taken is the pair with the
//! shortest cycle `P ∪ S`; the first such pair, walking the boundary from the
//! smallest attachment vertex, wins ties.
//!
//! Taking an arbitrary consecutive pair is not enough: when `P` runs along the
//! unbounded face, or a shorter detour around the disk exists, `P ∪ S` need
//! not be a face.
//!
//! Ties are broken by smallest vertex id throughout.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{faces_of, ArrangementGraph, RotationSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("no cycle passes through vertex {0}")]
    NoCycle(usize),
    #[error("boundary has unused edges but no pair of attachment vertices")]
    NoAttachmentPair,
    #[error("no path of unused edges joins {0} and {1}")]
    NoPath(usize, usize),
    #[error("ear from {0} to {1} revisits the boundary")]
    NonSimpleBoundary(usize, usize),
    #[error("edges remain that never touch the embedded part")]
    Unreachable,
    #[error("faces do not define a rotation system: {0}")]
    Rotation(String),
}

/// A minimum-length cycle through `v`, starting at `v`.
pub fn shortest_cycle_through(g: &ArrangementGraph, v: usize) -> Result<Vec<usize>, GreedyError> {
    if v >= g.n {
        return Err(GreedyError::BadVertex(v));
    }
    let adj = g.adjacency();
    let mut dist = vec![usize::MAX; g.n];
    let mut parent = vec![usize::MAX; g.n];
    let mut branch = vec![usize::MAX; g.n];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = x;
                branch[y] = if x == v { y } else { branch[x] };
                queue.push_back(y);
            }
        }
    }
    let mut best: Option<(usize, usize, usize)> = None;
    for &(a, b) in &g.edges {
        if a == v || b == v || dist[a] == usize::MAX || branch[a] == branch[b] {
            continue;
        }
        let key = (dist[a] + dist[b] + 1, a.min(b), a.max(b));
        if best.is_none_or(|k| key < k) {
            best = Some(key);
        }
    }
    let (_, a, b) = best.ok_or(GreedyError::NoCycle(v))?;
    let chain = |mut x: usize| {
        let mut out = Vec::new();
        while x != v {
            out.push(x);
            x = parent[x];
        }
        out
    };
    let mut cycle = vec![v];
    cycle.extend(chain(a).into_iter().rev());
    cycle.extend(chain(b));
    Ok(cycle)
}

/// One ear: boundary path `p` and new path `s`, both running from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarStep {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
}

impl EarStep {
    /// The cycle `P ∪ S`, oriented along `S` then back along `P`.
    pub fn face(&self) -> Vec<usize> {
        let mut f = self.s.clone();
        f.extend(self.p[1..self.p.len() - 1].iter().rev());
        f
    }
}

/// The embedded disk built so far.
#[derive(Debug, Clone)]
pub struct PartialEmbedding {
    pub used: Vec<bool>,
    /// Boundary cycle, oriented like the faces inside it.
    pub boundary: Vec<usize>,
    /// Bounded faces, each oriented like the boundary.
    pub faces: Vec<Vec<usize>>,
    pub ears: Vec<EarStep>,
    edge_id: HashMap<(usize, usize), usize>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEmbedding {
    pub fn new(g: &ArrangementGraph, cycle: Vec<usize>) -> Self {
        let edge_id = g
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| ((a.min(b), a.max(b)), e))
            .collect();
        let mut state = PartialEmbedding {
            used: vec![false; g.edge_count()],
            boundary: cycle.clone(),
            faces: vec![cycle.clone()],
            ears: Vec::new(),
            edge_id,
            incidence: g.incidence(),
        };
        for i in 0..cycle.len() {
            state.mark(cycle[i], cycle[(i + 1) % cycle.len()]);
        }
        state
    }

    fn mark(&mut self, a: usize, b: usize) {
        let e = self.edge_id[&(a.min(b), a.max(b))];
        self.used[e] = true;
    }

    pub fn is_complete(&self) -> bool {
        self.used.iter().all(|&u| u)
    }

    fn is_attachment(&self, x: usize) -> bool {
        self.incidence[x].iter().any(|&e| !self.used[e])
    }

    /// Replaces the boundary path `P` of `ear` by `S`.
    pub fn add_ear(&mut self, ear: EarStep) -> Result<(), GreedyError> {
        let k = self.boundary.len();
        let start = self
            .boundary
            .iter()
            .position(|&x| x == ear.u)
            .ok_or(GreedyError::NonSimpleBoundary(ear.u, ear.v))?;
        let mut next = ear.s.clone();
        next.extend((ear.p.len()..k).map(|i| self.boundary[(start + i) % k]));
        let mut seen = vec![false; self.incidence.len()];
        if next.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
            return Err(GreedyError::NonSimpleBoundary(ear.u, ear.v));
        }
        for w in ear.s.windows(2) {
            self.mark(w[0], w[1]);
        }
        self.faces.push(ear.face());
        self.boundary = next;
        self.ears.push(ear);
        Ok(())
    }
}

/// The next ear, or `None` once every edge is embedded.
pub fn next_ear(g: &ArrangementGraph, state: &PartialEmbedding) -> Result<Option<EarStep>, GreedyError> {
    if state.is_complete() {
        return Ok(None);
    }
    let b = &state.boundary;
    let k = b.len();
    let first = (0..k)
        .filter(|&i| state.is_attachment(b[i]))
        .min_by_key(|&i| b[i])
        .ok_or(GreedyError::Unreachable)?;
    // consecutive attachment vertices in boundary order from `first`
    let stops: Vec<usize> = (0..k)
        .map(|j| (first + j) % k)
        .filter(|&i| state.is_attachment(b[i]))
        .collect();
    if stops.len() < 2 {
        return Err(GreedyError::NoAttachmentPair);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for (e, &(a, c)) in g.edges.iter().enumerate() {
        if !state.used[e] {
            adj[a].push(c);
            adj[c].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut on_boundary = vec![false; g.n];
    for &x in b {
        on_boundary[x] = true;
    }
    let mut last = None;
    let mut best: Option<EarStep> = None;
    for i in 0..stops.len() {
        let (from, to) = (stops[i], stops[(i + 1) % stops.len()]);
        let step = (to + k - from) % k;
        let p: Vec<usize> = (0..=step).map(|j| b[(from + j) % k]).collect();
        let (u, v) = (p[0], p[step]);
        match shortest_ear_path(&adj, &on_boundary, u, v) {
            Some(s) => {
                if best.as_ref().is_none_or(|e| p.len() + s.len() < e.p.len() + e.s.len()) {
                    best = Some(EarStep { u, v, p, s });
                }
            }
            None => last = Some(GreedyError::NoPath(u, v)),
        }
    }
    match best {
        Some(ear) => Ok(Some(ear)),
        None => Err(last.unwrap_or(GreedyError::NoAttachmentPair)),
    }
}

/// Breadth-first shortest path from `u` to `v`, neighbors tried in id order.
/// `None` when there is none or its interior touches the boundary.
fn shortest_ear_path(adj: &[Vec<usize>], on_boundary: &[bool], u: usize, v: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[u] = u;
    let mut queue = VecDeque::from([u]);
    'search: while let Some(x) = queue.pop_front() {
        if x != u && on_boundary[x] {
            continue;
        }
        for &y in &adj[x] {
            if parent[y] != usize::MAX {
                continue;
            }
            parent[y] = x;
            if y == v {
                break 'search;
            }
            queue.push_back(y);
        }
    }
    if parent[v] == usize::MAX {
        return None;
    }
    let mut s = vec![v];
    while *s.last()? != u {
        s.push(parent[*s.last()?]);
    }
    s.reverse();
    if s[1..s.len() - 1].iter().any(|&x| on_boundary[x]) {
        return None;
    }
    Some(s)
}

/// Output of [`solve`]: the embedding and how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub rotation: RotationSystem,
    pub initial_cycle: Vec<usize>,
    pub ears: Vec<EarStep>,
    /// Bounded faces in the order they were added, then the outer face.
    pub faces: Vec<Vec<usize>>,
}

impl GreedyResult {
    pub fn plan(&self) -> SolvePlan {
        SolvePlan {
            initial_cycle: self.initial_cycle.clone(),
            ears: self.ears.clone(),
        }
    }
}

/// `{"initialCycle": [...], "ears": [{"u", "v", "P", "S"}, ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolvePlan {
    pub initial_cycle: Vec<usize>,
    pub ears: Vec<EarStep>,
}

pub fn solve(g: &ArrangementGraph, start: Option<usize>) -> Result<GreedyResult, GreedyError> {
    let v = start.unwrap_or(0);
    let cycle = shortest_cycle_through(g, v)?;
    let mut state = PartialEmbedding::new(g, cycle.clone());
    while let Some(ear) = next_ear(g, &state)? {
        state.add_ear(ear)?;
    }
    let mut faces = state.faces;
    faces.push(state.boundary.iter().rev().copied().collect());
    let rotation = rotation_from_faces(g, &faces)?;
    Ok(GreedyResult {
        rotation,
        initial_cycle: cycle,
        ears: state.ears,
        faces,
    })
}

/// Rebuilds the rotation whose face walk yields `faces`: walking `a → b → c`
/// means the edge to `c` follows the edge to `a` around `b`.
pub fn rotation_from_faces(g: &ArrangementGraph, faces: &[Vec<usize>]) -> Result<RotationSystem, GreedyError> {
    let edge_id: HashMap<(usize, usize), usize> = g
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| ((a.min(b), a.max(b)), e))
        .collect();
    let id = |a: usize, b: usize| {
        edge_id
            .get(&(a.min(b), a.max(b)))
            .copied()
            .ok_or_else(|| GreedyError::Rotation(format!("{a}-{b} is not an edge")))
    };
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); g.n];
    for f in faces {
        let k = f.len();
        for i in 0..k {
            let (a, b, c) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            if succ[b].insert(id(a, b)?, id(b, c)?).is_some() {
                return Err(GreedyError::Rotation(format!("dart {a}->{b} used twice")));
            }
        }
    }
    let inc = g.incidence();
    let mut rotation = Vec::with_capacity(g.n);
    for (x, edges) in inc.iter().enumerate() {
        let Some(&first) = edges.iter().min() else {
            rotation.push(Vec::new());
            continue;
        };
        let mut cyc = vec![first];
        let mut e = first;
        while let Some(&next) = succ[x].get(&e) {
            if next == first {
                break;
            }
            cyc.push(next);
            e = next;
        }
        if cyc.len() != edges.len() {
            return Err(GreedyError::Rotation(format!("vertex {x} is not a single wheel")));
        }
        rotation.push(cyc);
    }
    let rot = RotationSystem {
        endpoints: g.edges.clone(),
        rotation,
    };
    faces_of(&rot).map_err(|e| GreedyError::Rotation(e.to_string()))?;
    Ok(rot)
}
