//! Similarity dimension of polyadic Cantor sets and its inverse.
//!
//! A family member is fixed by the number of copies `N` and the scale
//! factor `γ`; its similarity dimension is `D = ln N / ln(1/γ)`. The two
//! degenerate members are kept as ordinary values: the void set `Z`
//! (`γ = 0`, `D = 0`) and the unit segment `U` (`γ = 1/N`, `D = 1`).

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance used for equality of dimension values.
pub const TOLERANCE: f64 = 1e-12;

/// Number of self-similar copies per construction step. Always `>= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArityN(u32);

impl ArityN {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "arity N must be at least 2, got {n}"
            )));
        }
        Ok(ArityN(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// `γ_max = 1/N`, the scale factor of the unit segment.
    pub fn max_scale(self) -> f64 {
        1.0 / self.as_f64()
    }

    pub fn ln(self) -> f64 {
        self.as_f64().ln()
    }
}

impl fmt::Display for ArityN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A similarity dimension in the closed interval `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dimension(f64);

impl Dimension {
    /// Dimension of the void set `Z`.
    pub const VOID: Dimension = Dimension(0.0);
    /// Dimension of the unit segment `U`.
    pub const UNIT: Dimension = Dimension(1.0);

    pub fn new(d: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::domain(format!(
                "dimension must lie in [0, 1], got {d}"
            )));
        }
        Ok(Dimension(d))
    }

    /// Clamps rounding excursions of closed-form results back into `[0, 1]`.
    pub(crate) fn saturating(d: f64) -> Self {
        debug_assert!(!d.is_nan());
        Dimension(d.clamp(0.0, 1.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_void(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_unit(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Dimension> for f64 {
    fn from(d: Dimension) -> f64 {
        d.0
    }
}

/// A materialized scale factor.
///
/// `ln_gamma` is kept alongside `gamma` so callers can keep working in
/// log-space after `gamma` itself has underflowed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactor {
    pub gamma: f64,
    pub ln_gamma: f64,
    /// Set when `ln_gamma` is finite but `gamma` is below the smallest
    /// positive binary64 value and was reported as 0.
    pub underflow: bool,
}

/// `D = ln N / ln(1/γ)`.
pub fn dimension_from_scale(n: ArityN, gamma: f64) -> Result<Dimension> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!(
            "scale factor must be >= 0, got {gamma}"
        )));
    }
    let max = n.max_scale();
    if gamma > max {
        return Err(Error::domain(format!(
            "scale factor {gamma} exceeds 1/N = {max} for N = {n}"
        )));
    }
    if gamma == 0.0 {
        return Ok(Dimension::VOID);
    }
    if gamma == max {
        return Ok(Dimension::UNIT);
    }
    Ok(Dimension::saturating(n.ln() / -gamma.ln()))
}

/// `γ = N^(-1/D)`, evaluated as `exp(-ln N / D)`.
pub fn scale_from_dimension(n: ArityN, d: Dimension) -> ScaleFactor {
    if d.is_void() {
        return ScaleFactor {
            gamma: 0.0,
            ln_gamma: f64::NEG_INFINITY,
            underflow: false,
        };
    }
    if d.is_unit() {
        return ScaleFactor {
            gamma: n.max_scale(),
            ln_gamma: -n.ln(),
            underflow: false,
        };
    }
    let ln_gamma = -n.ln() / d.get();
    let gamma = ln_gamma.exp();
    ScaleFactor {
        gamma,
        ln_gamma,
        underflow: gamma == 0.0,
    }
}

/// A concrete `(N, γ)` family member with its cached dimension.
///
/// Fields are public so that externally supplied records can be checked
/// with [`validate_spec`]; [`FractalSpec::new`] always yields a valid one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalSpec {
    pub n: u32,
    pub gamma: f64,
    pub d: f64,
}

impl FractalSpec {
    pub fn new(n: ArityN, gamma: f64) -> Result<Self> {
        let d = dimension_from_scale(n, gamma)?;
        Ok(FractalSpec {
            n: n.get(),
            gamma,
            d: d.get(),
        })
    }

    pub fn from_dimension(n: ArityN, d: Dimension) -> Result<Self> {
        let scale = scale_from_dimension(n, d);
        if scale.underflow {
            return Err(Error::Underflow {
                n: n.get(),
                dimension: d.get(),
            });
        }
        Ok(FractalSpec {
            n: n.get(),
            gamma: scale.gamma,
            d: d.get(),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        validate_spec(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ArityTooSmall { n: u32 },
    GammaNegative { gamma: f64 },
    GammaAboveMax { gamma: f64, max: f64 },
    DimensionOutOfRange { d: f64 },
    Inconsistent { d: f64, expected: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArityTooSmall { n } => write!(f, "N >= 2 (got {n})"),
            Violation::GammaNegative { gamma } => write!(f, "gamma < 0 (got {gamma})"),
            Violation::GammaAboveMax { gamma, max } => {
                write!(f, "gamma > 1/N (got {gamma}, 1/N = {max})")
            }
            Violation::DimensionOutOfRange { d } => write!(f, "D outside [0, 1] (got {d})"),
            Violation::Inconsistent { d, expected } => {
                write!(
                    f,
                    "D inconsistent with gamma (got {d}, expected {expected})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violated invariant of `spec`; an empty report means valid.
pub fn validate_spec(spec: &FractalSpec) -> ValidationReport {
    let mut violations = Vec::new();

    if !(0.0..=1.0).contains(&spec.d) {
        violations.push(Violation::DimensionOutOfRange { d: spec.d });
    }
    let n = match ArityN::new(spec.n) {
        Ok(n) => n,
        Err(_) => {
            violations.push(Violation::ArityTooSmall { n: spec.n });
            return ValidationReport { violations };
        }
    };
    if spec.gamma.is_nan() || spec.gamma < 0.0 {
        violations.push(Violation::GammaNegative { gamma: spec.gamma });
    } else if spec.gamma > n.max_scale() {
        violations.push(Violation::GammaAboveMax {
            gamma: spec.gamma,
            max: n.max_scale(),
        });
    } else if let Ok(expected) = dimension_from_scale(n, spec.gamma) {
        if !((spec.d - expected.get()).abs() <= TOLERANCE) {
            violations.push(Violation::Inconsistent {
                d: spec.d,
                expected: expected.get(),
            });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u32) -> ArityN {
        ArityN::new(v).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert!((dimension_from_scale(n(3), 1.0 / 9.0).unwrap().get() - 0.5).abs() <= TOLERANCE);
        assert_eq!(dimension_from_scale(n(2), 0.5).unwrap(), Dimension::UNIT);
        // ln 5 / ln 10
        let d = dimension_from_scale(n(5), 0.1).unwrap().get();
        assert!((d - 0.698_970_004_336_018_8).abs() <= TOLERANCE);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn inverse_examples() {
        let g = scale_from_dimension(n(3), Dimension::new(0.5).unwrap());
        assert!((g.gamma - 1.0 / 9.0).abs() <= TOLERANCE);
        assert_eq!(scale_from_dimension(n(4), Dimension::UNIT).gamma, 0.25);
        let g = scale_from_dimension(n(2), Dimension::new(0.301_029_995_66).unwrap());
        assert!((g.gamma - 0.1).abs() <= 1e-10);
    }

    #[test]
    fn boundaries_are_exact() {
        for v in 2..=12 {
            assert_eq!(dimension_from_scale(n(v), 0.0).unwrap().get(), 0.0);
            assert_eq!(
                dimension_from_scale(n(v), 1.0 / f64::from(v))
                    .unwrap()
                    .get(),
                1.0
            );
        }
        let z = scale_from_dimension(n(7), Dimension::VOID);
        assert_eq!(z.gamma, 0.0);
        assert!(!z.underflow);
    }

    #[test]
    fn domain_errors() {
        assert!(dimension_from_scale(n(5), 0.25).is_err());
        assert!(dimension_from_scale(n(5), -0.01).is_err());
        assert!(dimension_from_scale(n(5), f64::NAN).is_err());
        assert!(Dimension::new(1.01).is_err());
        assert!(Dimension::new(-1e-300).is_err());
        assert!(ArityN::new(1).is_err());
        assert!(ArityN::new(0).is_err());
    }

    #[test]
    fn underflow_is_flagged_not_raised() {
        // 2^(-1/0.001) = 2^-1000 is representable; 2^(-1/0.0005) is not.
        let ok = scale_from_dimension(n(2), Dimension::new(0.001).unwrap());
        assert!(!ok.underflow && ok.gamma > 0.0);
        let under = scale_from_dimension(n(2), Dimension::new(0.0005).unwrap());
        assert!(under.underflow);
        assert_eq!(under.gamma, 0.0);
        assert!((under.ln_gamma + 2000.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn validation_reports() {
        let s = FractalSpec {
            n: 5,
            gamma: 0.1,
            d: 5f64.ln() / 10f64.ln(),
        };
        assert!(validate_spec(&s).is_valid());

        let s = FractalSpec {
            n: 5,
            gamma: 0.25,
            d: 0.3,
        };
        let r = validate_spec(&s);
        assert!(matches!(
            r.violations[..],
            [Violation::GammaAboveMax { .. }]
        ));
        assert!(r.violations[0].to_string().starts_with("gamma > 1/N"));

        let void = FractalSpec {
            n: 2,
            gamma: 0.0,
            d: 0.0,
        };
        assert!(validate_spec(&void).is_valid());

        let bad = FractalSpec {
            n: 1,
            gamma: 0.5,
            d: 2.0,
        };
        assert_eq!(validate_spec(&bad).violations.len(), 2);

        let off = FractalSpec {
            n: 3,
            gamma: 1.0 / 9.0,
            d: 0.5 + 1e-9,
        };
        assert!(matches!(
            validate_spec(&off).violations[..],
            [Violation::Inconsistent { .. }]
        ));
        assert!(FractalSpec::new(n(3), 1.0 / 9.0)
            .unwrap()
            .validate()
            .is_valid());
    }

    proptest! {
        #[test]
        fn round_trip(nv in 2u32..=12, d in 0.01f64..=1.0) {
            let n = n(nv);
            let g = scale_from_dimension(n, Dimension::new(d).unwrap());
            prop_assert!(!g.underflow);
            let back = dimension_from_scale(n, g.gamma).unwrap().get();
            prop_assert!((back - d).abs() <= TOLERANCE);
        }

        #[test]
        fn strictly_increasing_in_gamma(nv in 2u32..=12, a in 0.0001f64..0.9999, b in 0.0001f64..0.9999) {
            prop_assume!(a != b);
            let n = n(nv);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let max = n.max_scale();
            let (glo, ghi) = (lo * max, hi * max);
            prop_assume!(ghi > glo * (1.0 + 1e-9));
            let dlo = dimension_from_scale(n, glo).unwrap().get();
            let dhi = dimension_from_scale(n, ghi).unwrap().get();
            prop_assert!(dlo < dhi);
        }
    }
}
