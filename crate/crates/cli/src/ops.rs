//! Operations shared by the command line and the HTTP service. Every function
//! is a pure function of its arguments.

use std::collections::BTreeMap;
use std::fmt;

use arrangeline_core::generate::GenerateError;
use arrangeline_core::upset::{alphas, UpsError};
use arrangeline_core::{
    build_wiring, choose_cut, default_wiring, draw_optimized, embed_on, level_stats, planarity_level, random_lines,
    recognize, solve, straightline_planar, universal_points, valid_cuts, ArrangementGraph, ArrangementStructure,
    CrossingReport, GridDrawing, RowMatch, SolvePlan, UniversalPointSet, WiringDiagram, WiringError,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Client coordinates are multiplied by `2^SNAP_BITS` and rounded before the
/// exact crossing test.
pub const SNAP_BITS: u32 = 20;
pub const MAX_STRETCH: i64 = 1 << 20;
/// Largest accepted absolute client coordinate.
pub const MAX_COORDINATE: f64 = (1u64 << 42) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Malformed input or bad parameters.
    Input(ApiError),
    /// Well-formed input rejected by a domain check.
    Rejected(ApiError),
    /// An invariant that should hold did not.
    Internal(ApiError),
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Failure::Input(ApiError {
            code: code.into(),
            message: message.into(),
            witness: None,
        })
    }

    fn rejected(code: impl Into<String>, message: impl Into<String>, witness: Option<Value>) -> Self {
        Failure::Rejected(ApiError {
            code: code.into(),
            message: message.into(),
            witness,
        })
    }

    pub fn internal(code: &str, message: impl Into<String>) -> Self {
        Failure::Internal(ApiError {
            code: code.into(),
            message: message.into(),
            witness: None,
        })
    }

    pub fn error(&self) -> &ApiError {
        match self {
            Failure::Input(e) | Failure::Rejected(e) | Failure::Internal(e) => e,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.error();
        write!(f, "{}: {}", e.code, e.message)
    }
}

impl std::error::Error for Failure {}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::input("MALFORMED_JSON", e.to_string()))
}

fn upset_failure(e: UpsError) -> Failure {
    let witness = serde_json::to_value(&e).ok();
    match e {
        UpsError::TooSmall { .. } | UpsError::CapTooSmall { .. } => Failure::Input(ApiError {
            code: "BAD_PARAMETER".into(),
            message: e.to_string(),
            witness,
        }),
        _ => {
            let code = witness
                .as_ref()
                .and_then(|w| w["code"].as_str())
                .unwrap_or("NO_MATCH")
                .to_string();
            Failure::rejected(code, e.to_string(), witness)
        }
    }
}

fn generate_failure(e: GenerateError) -> Failure {
    match e {
        GenerateError::TooFewLines { .. } | GenerateError::BadRange => Failure::input("BAD_PARAMETER", e.to_string()),
        _ => Failure::rejected("GENERATOR_FAILED", e.to_string(), None),
    }
}

/// A generated instance: graph, tangled circular layout and the lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generated {
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub seed: u64,
    pub graph: ArrangementGraph,
    pub layout: Vec<[f64; 2]>,
    pub lines: Vec<[i64; 3]>,
}

/// Exactly one of `lines` and `level` must be given.
pub fn generate(lines: Option<usize>, level: Option<usize>, seed: u64) -> Result<Generated, Failure> {
    let arr = match (lines, level) {
        (Some(l), None) => random_lines(l, seed),
        (None, Some(i)) => planarity_level(i, seed),
        _ => return Err(Failure::input("BAD_PARAMETER", "give exactly one of lines and level")),
    }
    .map_err(generate_failure)?;
    Ok(Generated {
        l: arr.lines.lines.len(),
        level,
        seed,
        graph: arr.graph,
        layout: arr.layout,
        lines: arr.lines.lines.iter().map(|x| [x.a, x.b, x.c]).collect(),
    })
}

pub fn recognize_graph(g: &ArrangementGraph) -> Result<ArrangementStructure, Failure> {
    recognize(g).map_err(|r| {
        let witness = serde_json::to_value(&r).ok();
        Failure::rejected(r.code.to_string(), r.detail, witness)
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DrawOptions {
    #[serde(default)]
    pub optimize_cuts: bool,
    #[serde(default)]
    pub cut: Option<usize>,
    #[serde(default)]
    pub stretch: Option<i64>,
}

fn wiring_failure(e: WiringError) -> Failure {
    match e {
        WiringError::CutOutOfRange { .. } => Failure::input("BAD_PARAMETER", e.to_string()),
        WiringError::InvalidCut { .. } => Failure::rejected("INVALID_CUT", e.to_string(), None),
        _ => Failure::internal("WIRING_FAILED", e.to_string()),
    }
}

/// Grid drawing and the wiring diagram it came from.
pub fn draw_graph(g: &ArrangementGraph, opts: DrawOptions) -> Result<(GridDrawing, WiringDiagram), Failure> {
    let s = recognize_graph(g)?;
    draw_structure(&s, opts)
}

pub fn draw_structure(s: &ArrangementStructure, opts: DrawOptions) -> Result<(GridDrawing, WiringDiagram), Failure> {
    if opts.optimize_cuts && opts.cut.is_some() {
        return Err(Failure::input("BAD_PARAMETER", "a fixed cut cannot be combined with cut optimization"));
    }
    let (drawing, diagram) = if opts.optimize_cuts {
        draw_optimized(s).map_err(|e| Failure::internal("DRAW_FAILED", e.to_string()))?
    } else {
        let d = match opts.cut {
            Some(c) => build_wiring(&choose_cut(s, c).map_err(wiring_failure)?).map_err(wiring_failure)?,
            None => default_wiring(s).map_err(wiring_failure)?,
        };
        let drawing = arrangeline_core::draw(s, &d).map_err(|e| Failure::internal("DRAW_FAILED", e.to_string()))?;
        (drawing, d)
    };
    match opts.stretch {
        None | Some(1) => Ok((drawing, diagram)),
        Some(f) if (1..=MAX_STRETCH).contains(&f) => Ok((drawing.stretch(f), diagram)),
        Some(f) => Err(Failure::input(
            "BAD_PARAMETER",
            format!("stretch factor {f} must be between 1 and {MAX_STRETCH}"),
        )),
    }
}

pub fn upset(l: usize, cap: Option<u64>) -> Result<UniversalPointSet, Failure> {
    universal_points(l, cap).map_err(upset_failure)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Embedded {
    pub point_set: UniversalPointSet,
    pub drawing: GridDrawing,
    pub matching: RowMatch,
}

/// Draws `g` and moves the drawing onto the universal point set for its ℓ.
pub fn embed_graph(g: &ArrangementGraph, cap: Option<u64>, opts: DrawOptions) -> Result<Embedded, Failure> {
    let s = recognize_graph(g)?;
    let (drawing, _) = draw_structure(&s, DrawOptions { stretch: None, ..opts })?;
    let ups = upset(s.l(), cap)?;
    let (on, matching) = embed_on(&drawing, &ups).map_err(upset_failure)?;
    Ok(Embedded {
        point_set: ups,
        drawing: on,
        matching,
    })
}

pub fn solve_plan(g: &ArrangementGraph, start: Option<usize>) -> Result<SolvePlan, Failure> {
    if let Some(v) = start {
        if v >= g.n {
            return Err(Failure::input("BAD_PARAMETER", format!("start vertex {v} out of range")));
        }
    }
    recognize_graph(g)?;
    let r = solve(g, start).map_err(|e| Failure::internal("SOLVER_FAILED", e.to_string()))?;
    Ok(r.plan())
}

pub fn stats(g: &ArrangementGraph) -> Result<Value, Failure> {
    let s = recognize_graph(g)?;
    let (plain, d) = draw_structure(&s, DrawOptions::default())?;
    let (best, best_d) = draw_structure(
        &s,
        DrawOptions {
            optimize_cuts: true,
            ..Default::default()
        },
    )?;
    let lv = level_stats(&d);
    let l = s.l();
    Ok(json!({
        "l": l,
        "n": g.n,
        "m": g.edges.len(),
        "faces": s.faces().len(),
        "validCuts": valid_cuts(&s),
        "defaultCut": d.cut,
        "levelSizes": lv.sizes,
        "kappa": lv.kappa,
        "width": plain.width,
        "height": plain.height,
        "optimizedCut": best_d.cut,
        "optimizedWidth": best.width,
        "alphaSum": alphas(&plain, l).iter().sum::<u64>(),
        "rows": arrangeline_core::upset::row_count(l),
        "widthPerL43": plain.width as f64 / (l as f64).powf(4.0 / 3.0),
        "areaPerN76": (plain.width * plain.height) as f64 / (g.n as f64).powf(7.0 / 6.0),
    }))
}

pub fn verify_drawing(d: &GridDrawing) -> CrossingReport {
    d.check()
}

/// Client positions, either an array indexed by vertex or a map keyed by the
/// decimal vertex id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Positions {
    List(Vec<[f64; 2]>),
    Map(BTreeMap<String, [f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRequest {
    pub positions: Positions,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResponse {
    #[serde(flatten)]
    pub report: CrossingReport,
    pub planar: bool,
    pub snap: u64,
}

/// `round(x * 2^SNAP_BITS)`, halves away from zero.
pub fn snap(x: f64) -> Result<i64, Failure> {
    if !x.is_finite() || x.abs() >= MAX_COORDINATE {
        return Err(Failure::input("BAD_COORDINATE", format!("coordinate {x} is not finite or too large")));
    }
    Ok((x * f64::from(1u32 << SNAP_BITS)).round() as i64)
}

pub fn check(req: &CheckRequest) -> Result<CheckResponse, Failure> {
    let raw: Vec<[f64; 2]> = match &req.positions {
        Positions::List(v) => v.clone(),
        Positions::Map(m) => {
            let mut out = vec![None; m.len()];
            for (k, &p) in m {
                let i: usize = k
                    .parse()
                    .map_err(|_| Failure::input("MALFORMED_JSON", format!("position key {k:?} is not a vertex id")))?;
                let slot = out
                    .get_mut(i)
                    .ok_or_else(|| Failure::input("MALFORMED_JSON", format!("vertex ids must be 0..{}", m.len())))?;
                *slot = Some(p);
            }
            out.into_iter().map(|p| p.expect("keys are distinct and dense")).collect()
        }
    };
    let mut pts = Vec::with_capacity(raw.len());
    for [x, y] in raw {
        pts.push([snap(x)?, snap(y)?]);
    }
    for &(u, v) in &req.edges {
        if u >= pts.len() || v >= pts.len() || u == v {
            return Err(Failure::input("MALFORMED_JSON", format!("edge ({u}, {v}) is not between two vertices")));
        }
    }
    let report = straightline_planar(&pts, &req.edges);
    Ok(CheckResponse {
        planar: report.is_planar(),
        report,
        snap: 1 << SNAP_BITS,
    })
}
