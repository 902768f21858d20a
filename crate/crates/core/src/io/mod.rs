//! Serialization of interval sets and operator grids, and SVG rendering.

pub mod grid;
pub mod intervals;
pub mod numfmt;
pub mod svg;

pub use grid::{emit_operator_grid, GridCell, GridSheet};
pub use intervals::{
    export_intervals, export_intervals_to_string, import_intervals, import_intervals_from_str,
    IntervalFormat,
};
pub use numfmt::{format_exact, format_significant};
pub use svg::{render_stages_svg, render_stages_svg_with_cap};
