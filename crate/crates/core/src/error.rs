use std::fmt;

use thiserror::Error;

/// Operators of the dimension algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpTag {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl OpTag {
    pub fn name(self) -> &'static str {
        match self {
            OpTag::Add => "add",
            OpTag::Sub => "sub",
            OpTag::Mul => "mul",
            OpTag::Div => "div",
            OpTag::Pow => "pow",
        }
    }
}

impl fmt::Display for OpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Machine-readable form of a violated operator validity condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainCondition {
    /// `D_A < D_B/(1+D_B)`, i.e. `γ_A < γ_B/N`.
    SubBelowHarmonicBound,
    /// `D_A <= D_B`.
    DivNotAboveDivisor,
    /// `D_A > 0` for division.
    DivNonZeroDividend,
    /// `0^(0)` of the void set.
    PowZeroOfVoid,
}

impl DomainCondition {
    pub fn code(self) -> &'static str {
        match self {
            DomainCondition::SubBelowHarmonicBound => "sub_below_harmonic_bound",
            DomainCondition::DivNotAboveDivisor => "div_not_above_divisor",
            DomainCondition::DivNonZeroDividend => "div_nonzero_dividend",
            DomainCondition::PowZeroOfVoid => "pow_zero_of_void",
        }
    }
}

impl fmt::Display for DomainCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainCondition::SubBelowHarmonicBound => "subtraction requires D_A < D_B/(1+D_B)",
            DomainCondition::DivNotAboveDivisor => "division requires D_A <= D_B",
            DomainCondition::DivNonZeroDividend => "division requires D_A > 0",
            DomainCondition::PowZeroOfVoid => "integer power 0 of the void set is undefined",
        })
    }
}

/// An operator was applied outside its geometric validity domain.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{condition} (op={op}, lhs={lhs}, rhs={rhs})")]
pub struct OpDomainError {
    pub op: OpTag,
    pub lhs: f64,
    /// Second operand; the exponent for [`OpTag::Pow`].
    pub rhs: f64,
    pub condition: DomainCondition,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    OpDomain(#[from] OpDomainError),

    #[error("scale factor underflows binary64 (D = {dimension}, N = {n})")]
    Underflow { n: u32, dimension: f64 },

    #[error("interval length {length:e} is below the resolvable limit {limit:e}")]
    BelowResolution { length: f64, limit: f64 },

    #[error("{requested} intervals exceed the cap of {cap}")]
    CapExceeded { requested: u128, cap: usize },

    #[error("fit is degenerate: all box counts are equal")]
    FitDegenerate,

    #[error("parse error at line {line}, field {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
