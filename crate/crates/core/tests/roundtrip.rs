use std::collections::HashMap;

use arrangeline_core::model::{canonical_face_set, ArrangementGraph};
use arrangeline_core::recognize::{recognize_with_stats, RejectionCode};
use arrangeline_core::wiring::Crossing;
use arrangeline_core::{
    graph_of, max_kappa_wiring, random_lines, random_wiring, recognize, stacked, ArrangementStructure, WiringDiagram,
};

/// Recognized pseudolines are the generator's lines up to renaming.
fn assert_same_lines(s: &ArrangementStructure, truth: &[Vec<usize>]) {
    let key = |v: &[usize]| {
        let mut k = v.to_vec();
        k.sort_unstable();
        k
    };
    let by_set: HashMap<Vec<usize>, usize> = truth.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
    let mut hit = vec![false; truth.len()];
    for p in &s.pseudolines {
        let i = by_set[&key(&p.crossings)];
        assert!(!std::mem::replace(&mut hit[i], true));
        let mut rev = p.crossings.clone();
        rev.reverse();
        assert!(p.crossings == truth[i] || rev == truth[i], "crossing order differs on line {i}");
    }
}

#[test]
fn random_lines_round_trip() {
    for l in 3..=16 {
        for seed in 0..8 {
            let arr = random_lines(l, seed).unwrap();
            let s = recognize(&arr.graph).unwrap_or_else(|e| panic!("l={l} seed={seed}: {e}"));
            assert_eq!(s.l(), l);
            assert_same_lines(&s, &arr.pseudolines);
            assert_eq!(s.graph.edge_count(), l * (l - 2));
        }
    }
}

#[test]
fn wiring_round_trips() {
    for l in 3..=14 {
        for seed in 0..6 {
            let d = random_wiring(l, seed).unwrap();
            let (g, truth) = graph_of(&d).unwrap();
            let s = recognize(&g).unwrap();
            assert_eq!(s.l(), l);
            let lines: Vec<Vec<usize>> = truth.pseudolines.iter().map(|p| p.crossings.clone()).collect();
            assert_same_lines(&s, &lines);
            assert_eq!(canonical_face_set(&s.faces()), canonical_face_set(&truth.faces()));
        }
    }
}

#[test]
fn stacked_round_trips() {
    for (a, b) in [(2, 2), (3, 4), (5, 5), (6, 3)] {
        let d = stacked(&max_kappa_wiring(a, 1, 5).unwrap(), &max_kappa_wiring(b, 2, 5).unwrap());
        let (g, _) = graph_of(&d).unwrap();
        assert_eq!(recognize(&g).unwrap().l(), a + b);
    }
}

#[test]
fn structure_json_round_trip() {
    let s = recognize(&random_lines(6, 4).unwrap().graph).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: ArrangementStructure = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
}

#[test]
fn recognition_is_deterministic_under_relabeling_of_edges() {
    let arr = random_lines(8, 3).unwrap();
    let mut edges = arr.graph.edges.clone();
    edges.reverse();
    let flipped: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (b, a)).collect();
    let a = recognize(&arr.graph).unwrap();
    let b = recognize(&ArrangementGraph::new(arr.graph.n, flipped)).unwrap();
    assert_eq!(canonical_face_set(&a.faces()), canonical_face_set(&b.faces()));
}

/// Every single-edge deletion or non-edge insertion is rejected.
fn assert_mutations_rejected(g: &ArrangementGraph) -> usize {
    let mut count = 0;
    for skip in 0..g.edges.len() {
        let mut edges = g.edges.clone();
        edges.remove(skip);
        let r = recognize(&ArrangementGraph::new(g.n, edges));
        assert!(r.is_err(), "deleting edge {skip} still accepted");
        count += 1;
    }
    for u in 0..g.n {
        for v in u + 1..g.n {
            if g.has_edge(u, v) {
                continue;
            }
            let mut edges = g.edges.clone();
            edges.push((u, v));
            assert!(recognize(&ArrangementGraph::new(g.n, edges)).is_err(), "adding {u}-{v} accepted");
            count += 1;
        }
    }
    count
}

#[test]
fn mutations_rejected_exhaustively() {
    for l in [4, 5] {
        for seed in 0..10 {
            let arr = random_lines(l, seed).unwrap();
            let n = l * (l - 1) / 2;
            // every vertex pair is either deleted or inserted once
            assert_eq!(assert_mutations_rejected(&arr.graph), n * (n - 1) / 2);
        }
    }
    for seed in 0..10 {
        let (g, _) = graph_of(&random_wiring(5, seed).unwrap()).unwrap();
        assert_mutations_rejected(&g);
    }
}

/// Graph of an arbitrary swap sequence, without checking that it is a
/// simple wiring diagram.
fn graph_of_levels(l: usize, levels: &[usize]) -> Option<ArrangementGraph> {
    let mut tracks: Vec<usize> = (0..l).collect();
    let mut seq: Vec<Vec<usize>> = vec![Vec::new(); l];
    for (v, &lv) in levels.iter().enumerate() {
        seq[tracks[lv - 1]].push(v);
        seq[tracks[lv]].push(v);
        tracks.swap(lv - 1, lv);
    }
    let mut edges = Vec::new();
    for s in &seq {
        for w in s.windows(2) {
            edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let g = ArrangementGraph::new(levels.len(), edges);
    g.validate().ok().map(|_| g)
}

#[test]
fn double_crossing_pair_detected() {
    // scan every swap sequence of the right length on four wires
    let mut codes = HashMap::new();
    let mut levels = [1usize; 6];
    loop {
        if let Some(g) = graph_of_levels(4, &levels) {
            let code = match recognize(&g) {
                Ok(_) => None,
                Err(e) => Some(e.code),
            };
            *codes.entry(code).or_insert(0) += 1;
        }
        let mut i = 0;
        while i < 6 && levels[i] == 3 {
            levels[i] = 1;
            i += 1;
        }
        if i == 6 {
            break;
        }
        levels[i] += 1;
    }
    assert!(codes.contains_key(&None));
    assert!(codes.contains_key(&Some(RejectionCode::PairMultiCross)), "{codes:?}");
}

#[test]
fn operation_counts_grow_linearly() {
    let mut ratios = Vec::new();
    for l in (10..=60).step_by(10) {
        let arr = random_lines(l, 5).unwrap();
        let (_, stats) = recognize_with_stats(&arr.graph).unwrap();
        ratios.push(stats.total() as f64 / arr.graph.n as f64);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    assert!(hi / lo < 1.5, "work per vertex varies too much: {ratios:?}");
}

#[test]
fn diagrams_keep_vertex_ids() {
    let d = WiringDiagram {
        l: 3,
        initial: vec![2, 0, 1],
        crossings: vec![
            Crossing { vertex: 2, level: 2 },
            Crossing { vertex: 0, level: 1 },
            Crossing { vertex: 1, level: 2 },
        ],
        cut: None,
    };
    let (g, s) = graph_of(&d).unwrap();
    assert_eq!(g.n, 3);
    assert_eq!(s.pseudolines[0].crossings, vec![2, 1]);
}
