//! Arithmetic of fractal dimension for symmetric polyadic Cantor sets.
//!
//! * [`dimension`]: the `D ↔ γ` duality for a fixed number of copies `N`.
//! * [`arith`]: the operators ⊕ ⊖ ⊗ ⊘, integer powers and `dD/dγ`.
//! * [`geometry`]: stage-`S` pre-fractals and lacunarity bounds.
//! * [`estimation`]: box-counting estimates used to check the algebra on
//!   actual sets.
//! * [`io`]: JSON/CSV interval exports, operator grids and SVG renderings.
//! * [`cli`]: the `polyadic-cantor` command line.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod io;

pub use arith::{
    add, check_gamma_consistency, check_pow_consistency, d_dimension_d_scale, div, int_pow, mul,
    sub, BinaryOp, OpResult,
};
pub use dimension::{
    dimension_from_scale, scale_from_dimension, validate_spec, ArityN, Dimension, FractalSpec,
    ScaleFactor, ValidationReport, Violation,
};
pub use error::{DomainCondition, Error, OpDomainError, OpTag, Result};
pub use estimation::{
    box_count, cover_count, estimate_dimension, estimate_dimension_with, mean_box_count,
    verify_operator_geometrically, verify_operator_geometrically_with, CountMethod,
    DimensionEstimate, VerificationOutcome, VerificationReport,
};
pub use geometry::{
    construct_prefractal, gap_widths, lacunarity_bounds, stage_one_offsets, CantorParams, Interval,
    IntervalSet, LacunarityBounds,
};
