//! Universal point sets for arrangement drawings.
//!
//! Row `i` (1-based) of an `s × W` grid keeps its `min(ℓ·ξ_i, W)` leftmost
//! points, where `ξ_i = i XOR (i - 1)`. A grid drawing with rows of sizes
//! `n_1..n_{ℓ-1}` is mapped row by row onto increasing point-set rows chosen
//! by greedy matching of `⌈n_i / ℓ⌉` against the ξ sequence.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridDrawing;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "code", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UpsError {
    #[error("need at least 3 lines, got {l}")]
    TooSmall { l: usize },
    #[error("width cap {cap} is smaller than l = {l}")]
    CapTooSmall { cap: u64, l: usize },
    #[error("drawing row {row} has {size} vertices, more than the width cap {cap}")]
    WidthExceeded { row: usize, size: usize, cap: u64 },
    #[error("only {matched} of {total} rows matched within {s} point-set rows")]
    NoMatch { matched: usize, total: usize, s: usize },
    #[error("drawing has height {height}, expected {expected}")]
    HeightMismatch { height: i64, expected: usize },
}

pub fn xi(i: u64) -> u64 {
    assert!(i >= 1, "xi is defined for i >= 1");
    i ^ (i - 1)
}

/// `ξ_1 + ... + ξ_s`.
pub fn xi_prefix_sum(s: u64) -> u64 {
    (1..=s).map(xi).sum()
}

/// Point-set rows needed for ℓ lines: `⌈3(ℓ-1)/2⌉`.
pub fn row_count(l: usize) -> usize {
    (3 * l.saturating_sub(1)).div_ceil(2)
}

/// `⌈2·ℓ^(4/3)⌉`, the smallest `W` with `W³ ≥ 8ℓ⁴`.
pub fn default_width_cap(l: usize) -> u64 {
    let target = 8 * (l as u128).pow(4);
    let mut w = (2.0 * (l as f64).powf(4.0 / 3.0)).floor() as u128;
    w = w.saturating_sub(2);
    while w.pow(3) < target {
        w += 1;
    }
    w as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UniversalPointSet {
    pub l: usize,
    pub s: usize,
    pub width_cap: u64,
    /// Points in each row, bottom to top.
    pub row_counts: Vec<u64>,
}

impl UniversalPointSet {
    pub fn total_points(&self) -> u64 {
        self.row_counts.iter().sum()
    }

    /// Whether `[x, y]` (0-based column and row) belongs to the set.
    pub fn contains(&self, [x, y]: [i64; 2]) -> bool {
        x >= 0 && y >= 0 && (y as usize) < self.s && (x as u64) < self.row_counts[y as usize]
    }

    /// `ℓ(s log₂ s + s)`.
    pub fn size_bound(&self) -> f64 {
        let s = self.s as f64;
        self.l as f64 * (s * s.log2() + s)
    }
}

pub fn universal_points(l: usize, width_cap: Option<u64>) -> Result<UniversalPointSet, UpsError> {
    if l < 3 {
        return Err(UpsError::TooSmall { l });
    }
    let cap = width_cap.unwrap_or_else(|| default_width_cap(l));
    if cap < l as u64 {
        return Err(UpsError::CapTooSmall { cap, l });
    }
    let s = row_count(l);
    let row_counts = (1..=s as u64).map(|i| (l as u64 * xi(i)).min(cap)).collect();
    Ok(UniversalPointSet {
        l,
        s,
        width_cap: cap,
        row_counts,
    })
}

/// Drawing row `i` goes to point-set row `rows[i]` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowMatch {
    pub alphas: Vec<u64>,
    pub rows: Vec<usize>,
}

/// Greedy leftmost matching of `alphas` into `ξ_1..ξ_s`.
pub fn match_rows(alphas: &[u64], s: usize) -> Result<RowMatch, UpsError> {
    let mut rows = Vec::with_capacity(alphas.len());
    for i in 1..=s {
        if rows.len() == alphas.len() {
            break;
        }
        if xi(i as u64) >= alphas[rows.len()] {
            rows.push(i);
        }
    }
    if rows.len() < alphas.len() {
        return Err(UpsError::NoMatch {
            matched: rows.len(),
            total: alphas.len(),
            s,
        });
    }
    Ok(RowMatch {
        alphas: alphas.to_vec(),
        rows,
    })
}

/// `⌈n_i / ℓ⌉` for every drawing row.
pub fn alphas(drawing: &GridDrawing, l: usize) -> Vec<u64> {
    drawing
        .row_sizes()
        .into_iter()
        .map(|n| (n as u64).div_ceil(l as u64))
        .collect()
}

/// Maps the drawing onto the point set, packing each row to the left.
pub fn embed_on(drawing: &GridDrawing, ups: &UniversalPointSet) -> Result<(GridDrawing, RowMatch), UpsError> {
    let l = ups.l;
    if drawing.height != (l - 1) as i64 {
        return Err(UpsError::HeightMismatch {
            height: drawing.height,
            expected: l - 1,
        });
    }
    let sizes = drawing.row_sizes();
    if let Some((row, &size)) = sizes.iter().enumerate().find(|(_, &n)| n as u64 > ups.width_cap) {
        return Err(UpsError::WidthExceeded {
            row,
            size,
            cap: ups.width_cap,
        });
    }
    let m = match_rows(&alphas(drawing, l), ups.s)?;

    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (v, p) in drawing.positions.iter().enumerate() {
        by_row[p[1] as usize].push(v);
    }
    let mut positions = vec![[0i64; 2]; drawing.positions.len()];
    let mut width = 0;
    for (row, verts) in by_row.iter_mut().enumerate() {
        verts.sort_by_key(|&v| drawing.positions[v][0]);
        let y = (m.rows[row] - 1) as i64;
        for (x, &v) in verts.iter().enumerate() {
            positions[v] = [x as i64, y];
        }
        width = width.max(verts.len() as i64);
    }
    Ok((
        GridDrawing {
            width,
            height: ups.s as i64,
            positions,
            edges: drawing.edges.clone(),
        },
        m,
    ))
}

/// Scatter plot of the point set, row 1 at the bottom.
pub fn to_svg(ups: &UniversalPointSet, scale: u32) -> String {
    let s = f64::from(scale.max(1));
    let cols = ups.row_counts.iter().copied().max().unwrap_or(0);
    let (w, h) = (cols as f64 * s, ups.s as f64 * s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}"><g fill="#333">"##
    );
    for (row, &count) in ups.row_counts.iter().enumerate() {
        let cy = ((ups.s - 1 - row) as f64 + 0.5) * s;
        for x in 0..count {
            let cx = (x as f64 + 0.5) * s;
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="{}"/>"#, s / 8.0);
        }
    }
    out.push_str("</g></svg>\n");
    out
}
