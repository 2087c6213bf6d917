//! Planarity testing and combinatorial embedding.
//!
//! Implements the left-right planarity criterion (de Fraysseix–Rosenstiehl,
//! in the formulation of Brandes) with its embedding phase. All depth-first
//! searches are iterative so deep inputs do not exhaust the call stack.

use thiserror::Error;

use crate::model::RotationSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("graph is not planar")]
    NotPlanar,
    #[error("self-loop on edge {0}")]
    SelfLoop(usize),
    #[error("edge {edge} references vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
}

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    const EMPTY: Interval = Interval {
        low: None,
        high: None,
    };

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Frame {
    v: usize,
    i: usize,
    after_child: bool,
}

struct LrState<'a> {
    endpoints: &'a [(usize, usize)],
    incidence: Vec<Vec<usize>>,
    oriented: Vec<bool>,
    tail: Vec<usize>,
    head: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,
    out_edges: Vec<Vec<usize>>,
    roots: Vec<usize>,
    reference: Vec<Option<usize>>,
    side: Vec<i64>,
    lowpt_edge: Vec<usize>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
    // half-edge 2e leaves tail[e], 2e+1 leaves head[e]
    cw: Vec<usize>,
    ccw: Vec<usize>,
    first: Vec<usize>,
    left_ref: Vec<usize>,
    right_ref: Vec<usize>,
}

impl<'a> LrState<'a> {
    fn new(n: usize, endpoints: &'a [(usize, usize)]) -> Self {
        let m = endpoints.len();
        let mut incidence = vec![Vec::new(); n];
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            incidence[u].push(e);
            incidence[v].push(e);
        }
        Self {
            endpoints,
            incidence,
            oriented: vec![false; m],
            tail: vec![NONE; m],
            head: vec![NONE; m],
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting_depth: vec![0; m],
            out_edges: vec![Vec::new(); n],
            roots: Vec::new(),
            reference: vec![None; m],
            side: vec![1; m],
            lowpt_edge: vec![NONE; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
            cw: vec![NONE; 2 * m],
            ccw: vec![NONE; 2 * m],
            first: vec![NONE; n],
            left_ref: vec![NONE; n],
            right_ref: vec![NONE; n],
        }
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn orient(&mut self, root: usize) {
        self.height[root] = 0;
        self.roots.push(root);
        let mut frames: Vec<(usize, usize, Option<usize>)> = vec![(root, 0, None)];
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            if let Some(e) = top.2.take() {
                self.finish_orient(v, e);
            }
            if top.1 == self.incidence[v].len() {
                frames.pop();
                continue;
            }
            let e = self.incidence[v][top.1];
            top.1 += 1;
            if self.oriented[e] {
                continue;
            }
            let w = self.other(e, v);
            self.oriented[e] = true;
            self.tail[e] = v;
            self.head[e] = w;
            self.out_edges[v].push(e);
            self.lowpt[e] = self.height[v];
            self.lowpt2[e] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(e);
                self.height[w] = self.height[v] + 1;
                top.2 = Some(e);
                frames.push((w, 0, None));
            } else {
                self.lowpt[e] = self.height[w];
                self.finish_orient(v, e);
            }
        }
    }

    fn finish_orient(&mut self, v: usize, vw: usize) {
        self.nesting_depth[vw] = 2 * self.lowpt[vw] as i64;
        if self.lowpt2[vw] < self.height[v] {
            // chordal
            self.nesting_depth[vw] += 1;
        }
        if let Some(e) = self.parent_edge[v] {
            if self.lowpt[vw] < self.lowpt[e] {
                self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                self.lowpt[e] = self.lowpt[vw];
            } else if self.lowpt[vw] > self.lowpt[e] {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
            } else {
                self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
            }
        }
    }

    fn conflicting(&self, interval: &Interval, b: usize) -> bool {
        match interval.high {
            Some(h) if !interval.is_empty() => self.lowpt[h] > self.lowpt[b],
            _ => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn test(&mut self, root: usize) -> bool {
        let mut frames = vec![Frame {
            v: root,
            i: 0,
            after_child: false,
        }];
        while let Some(top) = frames.last_mut() {
            let v = top.v;
            let parent = self.parent_edge[v];
            if top.i == self.out_edges[v].len() {
                frames.pop();
                if let Some(e) = parent {
                    self.remove_back_edges(e);
                }
                if let Some(up) = frames.last_mut() {
                    up.after_child = true;
                }
                continue;
            }
            let ei = self.out_edges[v][top.i];
            if !top.after_child {
                self.stack_bottom[ei] = self.stack.len();
                let w = self.head[ei];
                if self.parent_edge[w] == Some(ei) {
                    frames.push(Frame {
                        v: w,
                        i: 0,
                        after_child: false,
                    });
                    continue;
                }
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::EMPTY,
                    right: Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                });
            }
            top.after_child = false;
            let index = top.i;
            top.i += 1;
            // integrate new return edges
            if self.lowpt[ei] < self.height[v] {
                let e = parent.expect("only the root lacks a parent edge and it has height 0");
                if index == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair {
            left: Interval::EMPTY,
            right: Interval::EMPTY,
        };
        // merge return edges of ei into p.right
        while let Some(mut q) = self.stack.pop() {
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("non-empty interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.reference[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[q_low] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        // merge conflicting return edges of earlier siblings into p.left
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("peeked");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.reference[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.reference[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        // drop entire conflict pairs returning to u
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().expect("peeked");
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            // trim left interval
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.reference[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.reference[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            // trim right interval
            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.reference[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.reference[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        // side of e is the side of a highest return edge
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                self.reference[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = vec![e];
        while let Some(r) = self.reference[*chain.last().expect("non-empty")] {
            chain.push(r);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.reference[a] = None;
        }
        self.side[e]
    }

    fn half(&self, e: usize, from: usize) -> usize {
        if self.tail[e] == from {
            2 * e
        } else {
            2 * e + 1
        }
    }

    fn add_half_cw(&mut self, v: usize, h: usize, reference: usize) {
        if reference == NONE {
            self.cw[h] = h;
            self.ccw[h] = h;
            self.first[v] = h;
            return;
        }
        let after = self.cw[reference];
        self.cw[reference] = h;
        self.cw[h] = after;
        self.ccw[h] = reference;
        self.ccw[after] = h;
    }

    fn add_half_ccw(&mut self, v: usize, h: usize, reference: usize) {
        if reference == NONE {
            self.add_half_cw(v, h, NONE);
            return;
        }
        let before = self.ccw[reference];
        self.add_half_cw(v, h, before);
        if reference == self.first[v] {
            self.first[v] = h;
        }
    }

    fn embed(&mut self, root: usize) {
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            if top.1 == self.out_edges[v].len() {
                frames.pop();
                continue;
            }
            let ei = self.out_edges[v][top.1];
            top.1 += 1;
            let w = self.head[ei];
            let hw = self.half(ei, w);
            if self.parent_edge[w] == Some(ei) {
                let first = self.first[w];
                self.add_half_ccw(w, hw, first);
                let hv = self.half(ei, v);
                self.left_ref[v] = hv;
                self.right_ref[v] = hv;
                frames.push((w, 0));
            } else if self.side[ei] == 1 {
                let r = self.right_ref[w];
                self.add_half_cw(w, hw, r);
            } else {
                let l = self.left_ref[w];
                self.add_half_ccw(w, hw, l);
                self.left_ref[w] = hw;
            }
        }
    }

    fn run(mut self) -> Result<Vec<Vec<usize>>, EmbedError> {
        let n = self.height.len();
        let m = self.endpoints.len();
        if n > 2 && m > 3 * n - 6 {
            return Err(EmbedError::NotPlanar);
        }
        for v in 0..n {
            if self.height[v] == NONE {
                self.orient(v);
            }
        }
        for v in 0..n {
            let mut out = std::mem::take(&mut self.out_edges[v]);
            out.sort_by_key(|&e| self.nesting_depth[e]);
            self.out_edges[v] = out;
        }
        for r in self.roots.clone() {
            if !self.test(r) {
                return Err(EmbedError::NotPlanar);
            }
        }
        for e in 0..m {
            let s = self.sign(e);
            self.nesting_depth[e] *= s;
        }
        for v in 0..n {
            let mut out = std::mem::take(&mut self.out_edges[v]);
            out.sort_by_key(|&e| self.nesting_depth[e]);
            let mut prev = NONE;
            for &e in &out {
                let h = 2 * e;
                self.add_half_cw(v, h, prev);
                prev = h;
            }
            self.out_edges[v] = out;
        }
        for r in self.roots.clone() {
            self.embed(r);
        }
        let mut rotation = Vec::with_capacity(n);
        for v in 0..n {
            let mut cycle = Vec::new();
            let start = self.first[v];
            if start != NONE {
                let mut h = start;
                loop {
                    cycle.push(h / 2);
                    h = self.cw[h];
                    if h == start {
                        break;
                    }
                }
            }
            rotation.push(cycle);
        }
        Ok(rotation)
    }
}

fn check_input(n: usize, edges: &[(usize, usize)]) -> Result<(), EmbedError> {
    for (e, &(u, v)) in edges.iter().enumerate() {
        for vertex in [u, v] {
            if vertex >= n {
                return Err(EmbedError::VertexOutOfRange { edge: e, vertex, n });
            }
        }
        if u == v {
            return Err(EmbedError::SelfLoop(e));
        }
    }
    Ok(())
}

/// Embeds a simple graph; the rotation lists edge ids.
///
/// Parallel edges must not be present; use [`planar_embed`] for multigraphs.
pub fn embed_simple(n: usize, edges: &[(usize, usize)]) -> Result<RotationSystem, EmbedError> {
    check_input(n, edges)?;
    let rotation = LrState::new(n, edges).run()?;
    Ok(RotationSystem {
        endpoints: edges.to_vec(),
        rotation,
    })
}

/// Embeds a loopless multigraph.
///
/// Every repeated copy of a parallel edge is subdivided by a dummy vertex so
/// the simple-graph procedure applies; the dummies are contracted away again
/// in the returned rotation.
pub fn planar_embed(n: usize, edges: &[(usize, usize)]) -> Result<RotationSystem, EmbedError> {
    check_input(n, edges)?;
    let mut keys: Vec<((usize, usize), usize)> = edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| ((u.min(v), u.max(v)), e))
        .collect();
    keys.sort_unstable();
    let mut subdivide = vec![false; edges.len()];
    for w in keys.windows(2) {
        if w[0].0 == w[1].0 {
            subdivide[w[1].1] = true;
        }
    }
    if !subdivide.iter().any(|&s| s) {
        return embed_simple(n, edges);
    }
    // simple edge list: original edges keep their id when not subdivided;
    // a subdivided edge e becomes (u, d) with id e and (d, v) with a new id
    let mut simple = edges.to_vec();
    let mut total = n;
    let mut origin_of_extra = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if subdivide[e] {
            let d = total;
            total += 1;
            simple[e] = (u, d);
            origin_of_extra.push(e);
            simple.push((d, v));
        }
    }
    let sub = embed_simple(total, &simple)?;
    let mut contracted = vec![Vec::new(); n];
    for (v, cycle) in sub.rotation.iter().take(n).enumerate() {
        contracted[v] = cycle
            .iter()
            .map(|&se| {
                if se < edges.len() {
                    se
                } else {
                    // the (d, v) half of a subdivided edge
                    origin_of_extra[se - edges.len()]
                }
            })
            .collect();
    }
    Ok(RotationSystem {
        endpoints: edges.to_vec(),
        rotation: contracted,
    })
}

/// True when a rotation of a graph with `components` non-trivial connected
/// components has the face count of a sphere embedding.
pub fn is_genus_zero(rotation: &RotationSystem, components: usize) -> bool {
    let isolated = rotation.rotation.iter().filter(|c| c.is_empty()).count();
    let n = rotation.vertex_count() - isolated;
    let m = rotation.edge_count();
    match rotation.faces() {
        Ok(faces) => faces.len() + n == m + 2 * components,
        Err(_) => false,
    }
}
