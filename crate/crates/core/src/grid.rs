//! Grid drawings from wiring diagrams: crossing `v` on level `j` that is the
//! `k`-th crossing of its level goes to column `k - 1`, row `j - 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::ArrangementStructure;
use crate::verify::{straightline_planar, CrossingReport};
use crate::wiring::{build_wiring, choose_cut, level_stats, WiringDiagram, WiringError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrawError {
    #[error("diagram has {got} crossings but the graph has {n} vertices")]
    VertexMismatch { got: usize, n: usize },
    #[error("vertex {0} is missing from the diagram or appears twice")]
    BadVertex(usize),
    #[error(transparent)]
    Wiring(#[from] WiringError),
}

/// Integer straight-line drawing. `positions[v] = [x, y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDrawing {
    pub width: i64,
    pub height: i64,
    pub positions: Vec<[i64; 2]>,
    pub edges: Vec<(usize, usize)>,
}

impl GridDrawing {
    pub fn check(&self) -> CrossingReport {
        straightline_planar(&self.positions, &self.edges)
    }

    /// Number of vertices in each row, bottom to top.
    pub fn row_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.height.max(0) as usize];
        for p in &self.positions {
            sizes[p[1] as usize] += 1;
        }
        sizes
    }

    /// Multiplies every x coordinate by `factor`.
    pub fn stretch(&self, factor: i64) -> GridDrawing {
        GridDrawing {
            width: if self.width == 0 { 0 } else { (self.width - 1) * factor + 1 },
            height: self.height,
            positions: self.positions.iter().map(|&[x, y]| [x * factor, y]).collect(),
            edges: self.edges.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DrawingJson {
    width: i64,
    height: i64,
    positions: BTreeMap<String, [i64; 2]>,
    edges: Vec<(usize, usize)>,
}

impl Serialize for GridDrawing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Positions<'a>(&'a [[i64; 2]]);
        impl Serialize for Positions<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (v, p) in self.0.iter().enumerate() {
                    map.serialize_entry(&v.to_string(), p)?;
                }
                map.end()
            }
        }
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GridDrawing", 4)?;
        st.serialize_field("width", &self.width)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("positions", &Positions(&self.positions))?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GridDrawing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = DrawingJson::deserialize(d)?;
        let n = raw.positions.len();
        let mut positions = vec![None; n];
        for (k, p) in raw.positions {
            let v: usize = k.parse().map_err(|_| D::Error::custom(format!("bad vertex key {k:?}")))?;
            if v >= n || positions[v].replace(p).is_some() {
                return Err(D::Error::custom("vertex keys must be 0..n"));
            }
        }
        let positions: Vec<[i64; 2]> = positions.into_iter().map(|p| p.expect("dense keys")).collect();
        if raw.edges.iter().any(|&(u, v)| u >= n || v >= n) {
            return Err(D::Error::custom("edge endpoint out of range"));
        }
        Ok(GridDrawing {
            width: raw.width,
            height: raw.height,
            positions,
            edges: raw.edges,
        })
    }
}

pub fn draw(structure: &ArrangementStructure, diagram: &WiringDiagram) -> Result<GridDrawing, DrawError> {
    let n = structure.graph.n;
    if diagram.crossings.len() != n {
        return Err(DrawError::VertexMismatch {
            got: diagram.crossings.len(),
            n,
        });
    }
    let l = diagram.l;
    let mut next_column = vec![0i64; l.saturating_sub(1)];
    let mut positions = vec![None; n];
    for c in &diagram.crossings {
        if c.level == 0 || c.level >= l {
            return Err(WiringError::LevelOutOfRange {
                index: c.vertex,
                level: c.level,
                l,
            }
            .into());
        }
        let row = c.level - 1;
        if c.vertex >= n || positions[c.vertex].is_some() {
            return Err(DrawError::BadVertex(c.vertex));
        }
        positions[c.vertex] = Some([next_column[row], row as i64]);
        next_column[row] += 1;
    }
    let positions = positions
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or(DrawError::BadVertex(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let width = next_column.iter().copied().max().unwrap_or(0);
    Ok(GridDrawing {
        width,
        height: l.saturating_sub(1) as i64,
        positions,
        edges: structure.graph.edges.clone(),
    })
}

/// Narrowest drawing over all valid cuts (smallest cut on ties), with the
/// diagram that produced it.
pub fn draw_optimized(structure: &ArrangementStructure) -> Result<(GridDrawing, WiringDiagram), DrawError> {
    let ends = structure.infinity_order.len();
    let mut best: Option<(usize, WiringDiagram)> = None;
    let mut last_err = WiringError::CutOutOfRange { cut: 0, ends };
    for cut in 0..ends {
        let oriented = match choose_cut(structure, cut) {
            Ok(o) => o,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let d = build_wiring(&oriented)?;
        let k = level_stats(&d).kappa;
        if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
            best = Some((k, d));
        }
    }
    let (_, d) = best.ok_or(last_err)?;
    Ok((draw(structure, &d)?, d))
}

/// SVG with row 0 at the bottom, every vertex centered in its cell.
pub fn to_svg(drawing: &GridDrawing, scale: u32) -> String {
    let s = f64::from(scale.max(1));
    let (w, h) = (drawing.width as f64 * s, drawing.height as f64 * s);
    let center = |[x, y]: [i64; 2]| ((x as f64 + 0.5) * s, ((drawing.height - 1 - y) as f64 + 0.5) * s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#
    );
    let _ = writeln!(out, r##"<g stroke="#333" stroke-width="{}">"##, s / 20.0);
    for &(u, v) in &drawing.edges {
        let (x1, y1) = center(drawing.positions[u]);
        let (x2, y2) = center(drawing.positions[v]);
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="#c33">"##);
    for &p in &drawing.positions {
        let (cx, cy) = center(p);
        let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="{}"/>"#, s / 8.0);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
