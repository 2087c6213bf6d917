//! Pseudoline arrangement graphs: recognition, wiring diagrams, grid
//! drawings, universal point sets and greedy ear-decomposition embedding.
//!
//! ```
//! use arrangeline_core::{random_lines, recognize, default_wiring, draw};
//!
//! let arr = random_lines(7, 1).unwrap();
//! let s = recognize(&arr.graph).unwrap();
//! let d = draw(&s, &default_wiring(&s).unwrap()).unwrap();
//! assert_eq!(d.height, 6);
//! assert!(d.check().is_planar());
//! ```

pub mod generate;
pub mod greedy;
pub mod grid;
pub mod model;
pub mod planar;
pub mod recognize;
pub mod upset;
pub mod verify;
pub mod wiring;

pub use generate::{
    graph_of, max_kappa_wiring, planarity_level, random_lines, random_wiring, stacked, GenerateError,
    GeneratedArrangement, Line, LineSet,
};
pub use greedy::{shortest_cycle_through, solve, EarStep, GreedyError, GreedyResult, SolvePlan};
pub use grid::{draw, draw_optimized, to_svg, DrawError, GridDrawing};
pub use model::{
    canonical_face_set, faces_of, ArrangementGraph, ArrangementStructure, PathEnd, Pseudoline, RotationSystem,
    Violation,
};
pub use recognize::{recognize, Rejection, RejectionCode};
pub use upset::{embed_on, match_rows, universal_points, xi, xi_prefix_sum, RowMatch, UniversalPointSet, UpsError};
pub use verify::{enumerate_cycles_through, same_face_set, straightline_planar, CrossingReport};
pub use wiring::{
    build_wiring, choose_cut, default_wiring, level_stats, valid_cuts, LevelStats, TieBreak, WiringDiagram,
    WiringError,
};
