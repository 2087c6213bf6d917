//! Wiring diagrams: choosing a sweep origin at infinity, simulating the sweep
//! and measuring level complexity.
//!
//! Instead of a topological sweep the diagram is built by repeatedly
//! performing a *ready* crossing: two pseudolines on adjacent tracks whose
//! next pending crossings coincide. The level of every crossing depends only
//! on the chosen bottom face, so any ready order yields the same levels.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ArrangementStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WiringError {
    #[error("cut {cut} out of range 0..{ends}")]
    CutOutOfRange { cut: usize, ends: usize },
    #[error("invalid cut {cut}: pseudoline {line} appears twice in the window")]
    InvalidCut { cut: usize, line: usize },
    #[error("sweep stuck after {emitted} of {total} crossings")]
    Stuck { emitted: usize, total: usize },
    #[error("crossing {index} has level {level} outside 1..{l}")]
    LevelOutOfRange { index: usize, level: usize, l: usize },
    #[error("initial tracks are not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("pseudolines {0} and {1} cross more than once")]
    RepeatedPair(usize, usize),
    #[error("diagram has {got} crossings, expected {expected}")]
    CrossingCount { got: usize, expected: usize },
    #[error("final permutation is not the reversal of the initial one")]
    NotReversed,
}

/// A crossing of the diagram, at `level` i (between tracks i and i+1,
/// 1-based from the bottom).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub vertex: usize,
    pub level: usize,
}

impl Serialize for Crossing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.vertex, self.level).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Crossing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (vertex, level) = <(usize, usize)>::deserialize(d)?;
        Ok(Crossing { vertex, level })
    }
}

/// Serialized as `{"l": ℓ, "initial": [...], "crossings": [[v, level], ...]}`;
/// `initial[t]` is the pseudoline on track `t + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDiagram {
    pub l: usize,
    pub initial: Vec<usize>,
    pub crossings: Vec<Crossing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<usize>,
}

impl WiringDiagram {
    /// Replays the swaps and returns, for each crossing, the pseudolines
    /// `(lower, upper)` occupying its two tracks just before it.
    pub fn swapped_pairs(&self) -> Result<Vec<(usize, usize)>, WiringError> {
        let l = self.l;
        let mut seen = vec![false; l];
        if self.initial.len() != l {
            return Err(WiringError::BadPermutation(l));
        }
        for &p in &self.initial {
            if p >= l || std::mem::replace(&mut seen[p], true) {
                return Err(WiringError::BadPermutation(l));
            }
        }
        let mut tracks = self.initial.clone();
        let mut out = Vec::with_capacity(self.crossings.len());
        for (index, c) in self.crossings.iter().enumerate() {
            if c.level == 0 || c.level >= l {
                return Err(WiringError::LevelOutOfRange {
                    index,
                    level: c.level,
                    l,
                });
            }
            let t = c.level - 1;
            out.push((tracks[t], tracks[t + 1]));
            tracks.swap(t, t + 1);
        }
        Ok(out)
    }

    pub fn final_tracks(&self) -> Vec<usize> {
        let mut tracks = self.initial.clone();
        for c in &self.crossings {
            if (1..self.l).contains(&c.level) {
                tracks.swap(c.level - 1, c.level);
            }
        }
        tracks
    }

    /// Every pair swaps exactly once and the final order is reversed.
    pub fn validate(&self) -> Result<(), WiringError> {
        let l = self.l;
        let pairs = self.swapped_pairs()?;
        let expected = l * l.saturating_sub(1) / 2;
        let mut crossed = vec![false; l * l];
        for &(a, b) in &pairs {
            let (a, b) = (a.min(b), a.max(b));
            if std::mem::replace(&mut crossed[a * l + b], true) {
                return Err(WiringError::RepeatedPair(a, b));
            }
        }
        if pairs.len() != expected {
            return Err(WiringError::CrossingCount {
                got: pairs.len(),
                expected,
            });
        }
        let mut reversed = self.initial.clone();
        reversed.reverse();
        if self.final_tracks() != reversed {
            return Err(WiringError::NotReversed);
        }
        Ok(())
    }
}

/// Pseudolines oriented away from a chosen window of ends at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedStructure {
    pub l: usize,
    /// `initial[t]` is the pseudoline starting on track `t + 1`.
    pub initial: Vec<usize>,
    /// Crossings of each pseudoline in sweep direction.
    pub order: Vec<Vec<usize>>,
    pub cut: usize,
}

/// Orients every pseudoline from its end inside the window of ℓ consecutive
/// ends starting at `cut`; window position `j` starts on track `ℓ - j`.
pub fn choose_cut(structure: &ArrangementStructure, cut: usize) -> Result<OrientedStructure, WiringError> {
    let l = structure.l();
    let ends = &structure.infinity_order;
    if cut >= ends.len() {
        return Err(WiringError::CutOutOfRange {
            cut,
            ends: ends.len(),
        });
    }
    let mut initial = vec![usize::MAX; l];
    let mut from_start = vec![None; l];
    for j in 0..l {
        let end = ends[(cut + j) % ends.len()];
        if from_start[end.line].is_some() {
            return Err(WiringError::InvalidCut { cut, line: end.line });
        }
        from_start[end.line] = Some(end.at_start);
        initial[l - 1 - j] = end.line;
    }
    let order = structure
        .pseudolines
        .iter()
        .map(|p| {
            if from_start[p.id] == Some(true) {
                p.crossings.clone()
            } else {
                p.crossings.iter().rev().copied().collect()
            }
        })
        .collect();
    Ok(OrientedStructure {
        l,
        initial,
        order,
        cut,
    })
}

/// Cut indices whose window holds every pseudoline once.
pub fn valid_cuts(structure: &ArrangementStructure) -> Vec<usize> {
    (0..structure.infinity_order.len())
        .filter(|&c| choose_cut(structure, c).is_ok())
        .collect()
}

/// Which ready crossing the sweep performs next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    SmallestTrack,
    Random(u64),
}

/// Sweeps with the smallest-track rule.
pub fn build_wiring(oriented: &OrientedStructure) -> Result<WiringDiagram, WiringError> {
    build_wiring_with(oriented, TieBreak::SmallestTrack)
}

pub fn build_wiring_with(oriented: &OrientedStructure, tie: TieBreak) -> Result<WiringDiagram, WiringError> {
    let l = oriented.l;
    let order = &oriented.order;
    let total: usize = order.iter().map(Vec::len).sum::<usize>() / 2;
    let mut tracks = oriented.initial.clone();
    let mut next = vec![0usize; l];
    let mut rng = match tie {
        TieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::SmallestTrack => None,
    };

    let pending = |line: usize, next: &[usize]| order[line].get(next[line]).copied();
    let is_ready = |t: usize, tracks: &[usize], next: &[usize]| -> bool {
        match (pending(tracks[t], next), pending(tracks[t + 1], next)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    };

    let mut ready: BTreeSet<usize> = (0..l.saturating_sub(1))
        .filter(|&t| is_ready(t, &tracks, &next))
        .collect();
    let mut crossings = Vec::with_capacity(total);
    while crossings.len() < total {
        let t = match rng.as_mut() {
            None => ready.first().copied(),
            Some(r) if !ready.is_empty() => {
                let k = r.random_range(0..ready.len());
                ready.iter().nth(k).copied()
            }
            Some(_) => None,
        };
        let Some(t) = t else {
            return Err(WiringError::Stuck {
                emitted: crossings.len(),
                total,
            });
        };
        let (a, b) = (tracks[t], tracks[t + 1]);
        let vertex = order[a][next[a]];
        crossings.push(Crossing { vertex, level: t + 1 });
        tracks.swap(t, t + 1);
        next[a] += 1;
        next[b] += 1;
        for u in t.saturating_sub(1)..=(t + 1).min(l.saturating_sub(2)) {
            if is_ready(u, &tracks, &next) {
                ready.insert(u);
            } else {
                ready.remove(&u);
            }
        }
    }
    Ok(WiringDiagram {
        l,
        initial: oriented.initial.clone(),
        crossings,
        cut: Some(oriented.cut),
    })
}

/// Diagram from the smallest valid cut.
pub fn default_wiring(structure: &ArrangementStructure) -> Result<WiringDiagram, WiringError> {
    let ends = structure.infinity_order.len();
    let mut last = WiringError::CutOutOfRange { cut: 0, ends };
    for cut in 0..ends {
        match choose_cut(structure, cut) {
            Ok(o) => return build_wiring(&o),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Level sizes `|L(1)|..|L(ℓ-1)|` and their maximum κ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub sizes: Vec<usize>,
    pub kappa: usize,
}

pub fn level_stats(d: &WiringDiagram) -> LevelStats {
    let mut sizes = vec![0; d.l.saturating_sub(1)];
    for c in &d.crossings {
        sizes[c.level - 1] += 1;
    }
    let kappa = sizes.iter().copied().max().unwrap_or(0);
    LevelStats { sizes, kappa }
}
