//! Operator algebra on similarity dimensions.
//!
//! Every binary operator is defined twice: by a closed form on dimensions
//! and by a rule on scale factors. The closed form is what the operators
//! return; [`check_gamma_consistency`] recomputes the result through the
//! scale-factor rule so the two can be compared.
//!
//! | op  | D-space                 | γ-space            |
//! |-----|-------------------------|--------------------|
//! | ⊕   | `a·b/(a+b)`             | `γ_A·γ_B`          |
//! | ⊖   | `a·b/(b−a)`             | `γ_A/γ_B`          |
//! | ⊗   | `a·b`                   | `γ_A^(1/D_B)`      |
//! | ⊘   | `a/b`                   | `γ_A^(D_B)`        |
//! | `^k`| `a^k`                   | `γ_A^(1/D_A^(k−1))`|

use std::fmt;
use std::str::FromStr;

use crate::dimension::{scale_from_dimension, ArityN, Dimension};
use crate::error::{DomainCondition, Error, OpDomainError, OpTag, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 4] = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div];

    pub fn tag(self) -> OpTag {
        match self {
            BinaryOp::Add => OpTag::Add,
            BinaryOp::Sub => OpTag::Sub,
            BinaryOp::Mul => OpTag::Mul,
            BinaryOp::Div => OpTag::Div,
        }
    }

    pub fn name(self) -> &'static str {
        self.tag().name()
    }
}

impl fmt::Display for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BinaryOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(BinaryOp::Add),
            "sub" => Ok(BinaryOp::Sub),
            "mul" => Ok(BinaryOp::Mul),
            "div" => Ok(BinaryOp::Div),
            other => Err(Error::domain(format!(
                "unknown operator {other:?}, expected add, sub, mul or div"
            ))),
        }
    }
}

/// Result of an operator: the new dimension and its scale factor for the
/// shared arity `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpResult {
    pub d: Dimension,
    pub gamma: f64,
    /// `gamma` underflowed binary64 and is reported as 0.
    pub underflow: bool,
}

impl OpResult {
    fn materialize(d: Dimension, n: ArityN) -> Self {
        let scale = scale_from_dimension(n, d);
        OpResult {
            d,
            gamma: scale.gamma,
            underflow: scale.underflow,
        }
    }
}

fn op_error(op: OpTag, a: f64, b: f64, condition: DomainCondition) -> OpDomainError {
    OpDomainError {
        op,
        lhs: a,
        rhs: b,
        condition,
    }
}

pub(crate) fn add_d(a: Dimension, b: Dimension) -> Dimension {
    let (a, b) = (a.get(), b.get());
    if a == 0.0 || b == 0.0 {
        return Dimension::VOID;
    }
    Dimension::saturating(a * b / (a + b))
}

pub(crate) fn sub_d(a: Dimension, b: Dimension) -> std::result::Result<Dimension, OpDomainError> {
    let (a, b) = (a.get(), b.get());
    // Z absorbs from either side.
    if a == 0.0 || b == 0.0 {
        return Ok(Dimension::VOID);
    }
    if !(a < b / (1.0 + b)) {
        return Err(op_error(
            OpTag::Sub,
            a,
            b,
            DomainCondition::SubBelowHarmonicBound,
        ));
    }
    Ok(Dimension::saturating(a * b / (b - a)))
}

pub(crate) fn mul_d(a: Dimension, b: Dimension) -> Dimension {
    Dimension::saturating(a.get() * b.get())
}

pub(crate) fn div_d(a: Dimension, b: Dimension) -> std::result::Result<Dimension, OpDomainError> {
    let (a, b) = (a.get(), b.get());
    if a == 0.0 {
        return Err(op_error(
            OpTag::Div,
            a,
            b,
            DomainCondition::DivNonZeroDividend,
        ));
    }
    if a > b {
        return Err(op_error(
            OpTag::Div,
            a,
            b,
            DomainCondition::DivNotAboveDivisor,
        ));
    }
    Ok(Dimension::saturating(a / b))
}

pub(crate) fn pow_d(a: Dimension, k: u32) -> std::result::Result<Dimension, OpDomainError> {
    if k == 0 {
        if a.is_void() {
            return Err(op_error(
                OpTag::Pow,
                0.0,
                0.0,
                DomainCondition::PowZeroOfVoid,
            ));
        }
        return Ok(Dimension::UNIT);
    }
    let d = match i32::try_from(k) {
        Ok(k) => a.get().powi(k),
        Err(_) => a.get().powf(f64::from(k)),
    };
    Ok(Dimension::saturating(d))
}

/// `D_A ⊕ D_B = D_A·D_B/(D_A+D_B)`; total on `[0,1]²`, with `Z` absorbing.
pub fn add(a: Dimension, b: Dimension, n: ArityN) -> OpResult {
    OpResult::materialize(add_d(a, b), n)
}

/// `D_A ⊖ D_B = D_A·D_B/(D_B−D_A)`, defined for `D_A < D_B/(1+D_B)`.
pub fn sub(a: Dimension, b: Dimension, n: ArityN) -> std::result::Result<OpResult, OpDomainError> {
    Ok(OpResult::materialize(sub_d(a, b)?, n))
}

/// `D_A ⊗ D_B = D_A·D_B`; `U` is the unit element.
pub fn mul(a: Dimension, b: Dimension, n: ArityN) -> OpResult {
    OpResult::materialize(mul_d(a, b), n)
}

/// `D_A ⊘ D_B = D_A/D_B`, defined for `0 < D_A <= D_B`. `a ⊘ a` is `U`.
pub fn div(a: Dimension, b: Dimension, n: ArityN) -> std::result::Result<OpResult, OpDomainError> {
    Ok(OpResult::materialize(div_d(a, b)?, n))
}

/// `D_A^(k)`; `k = 0` yields `U` except for the void set.
pub fn int_pow(a: Dimension, k: u32, n: ArityN) -> std::result::Result<OpResult, OpDomainError> {
    Ok(OpResult::materialize(pow_d(a, k)?, n))
}

pub fn apply(
    op: BinaryOp,
    a: Dimension,
    b: Dimension,
    n: ArityN,
) -> std::result::Result<OpResult, OpDomainError> {
    match op {
        BinaryOp::Add => Ok(add(a, b, n)),
        BinaryOp::Sub => sub(a, b, n),
        BinaryOp::Mul => Ok(mul(a, b, n)),
        BinaryOp::Div => div(a, b, n),
    }
}

/// `dD/dγ = ln N / (γ ln²γ)`, positive on the open interval `0 < γ < 1/N`.
pub fn d_dimension_d_scale(n: ArityN, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < n.max_scale()) {
        return Err(Error::domain(format!(
            "derivative requires 0 < gamma < 1/N = {}, got {gamma}",
            n.max_scale()
        )));
    }
    let ln_gamma = gamma.ln();
    Ok(n.ln() / (gamma * ln_gamma * ln_gamma))
}

fn scale_or_underflow(n: ArityN, d: Dimension) -> Result<f64> {
    let s = scale_from_dimension(n, d);
    if s.underflow {
        return Err(Error::Underflow {
            n: n.get(),
            dimension: d.get(),
        });
    }
    Ok(s.gamma)
}

fn dimension_of_gamma(n: ArityN, gamma_c: f64, expected: Dimension) -> Result<f64> {
    if gamma_c == 0.0 {
        if expected.is_void() {
            return Ok(0.0);
        }
        return Err(Error::Underflow {
            n: n.get(),
            dimension: expected.get(),
        });
    }
    // No range check: a boundary result may land an ulp above 1/N.
    Ok(n.ln() / -gamma_c.ln())
}

/// Recomputes `op(a, b)` from the scale-factor rule and returns the absolute
/// difference to the closed-form dimension.
pub fn check_gamma_consistency(op: BinaryOp, a: Dimension, b: Dimension, n: ArityN) -> Result<f64> {
    let direct = apply(op, a, b, n)?.d;
    let ga = scale_or_underflow(n, a)?;
    let gb = scale_or_underflow(n, b)?;
    let gamma_c = match op {
        BinaryOp::Add => ga * gb,
        BinaryOp::Sub => {
            if a.is_void() || b.is_void() {
                0.0
            } else {
                ga / gb
            }
        }
        BinaryOp::Mul => {
            if b.is_void() {
                0.0
            } else {
                ga.powf(1.0 / b.get())
            }
        }
        BinaryOp::Div => ga.powf(b.get()),
    };
    let via_gamma = dimension_of_gamma(n, gamma_c, direct)?;
    Ok((direct.get() - via_gamma).abs())
}

/// Same as [`check_gamma_consistency`] for the integer power.
pub fn check_pow_consistency(a: Dimension, k: u32, n: ArityN) -> Result<f64> {
    let direct = int_pow(a, k, n)?.d;
    let ga = scale_or_underflow(n, a)?;
    let gamma_c = if a.is_void() {
        0.0
    } else {
        // 1/D_A^(k-1), with k = 0 giving D_A.
        let exponent = a.get().powi(1 - i32::try_from(k).unwrap_or(i32::MAX));
        ga.powf(exponent)
    };
    let via_gamma = dimension_of_gamma(n, gamma_c, direct)?;
    Ok((direct.get() - via_gamma).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::{dimension_from_scale, TOLERANCE};
    use proptest::prelude::*;

    fn d(v: f64) -> Dimension {
        Dimension::new(v).unwrap()
    }

    fn n(v: u32) -> ArityN {
        ArityN::new(v).unwrap()
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= TOLERANCE
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn add_examples() {
        assert!(close(add(d(1.0), d(1.0), n(2)).d.get(), 0.5));
        assert!(close(add(d(0.6), d(0.6), n(2)).d.get(), 0.3));
        assert_eq!(add(d(0.37), Dimension::VOID, n(2)).d, Dimension::VOID);
        assert_eq!(
            add(Dimension::VOID, Dimension::VOID, n(2)).d,
            Dimension::VOID
        );

        let r = add(d(0.301_029_995_66), d(0.301_029_995_66), n(2));
        assert!((r.d.get() - 0.150_514_997_83).abs() <= TOLERANCE);
        assert!((r.gamma - 0.01).abs() <= 1e-11);
        // gamma-route oracle: gamma_A = gamma_B = 0.1 exactly
        let oracle = dimension_from_scale(n(2), 0.1 * 0.1).unwrap().get();
        assert!((oracle - 2f64.ln() / 100f64.ln()).abs() <= TOLERANCE);
    }

    #[test]
    fn sub_examples() {
        let r = sub(d(0.2), d(0.5), n(2)).unwrap();
        assert!(close(r.d.get(), 1.0 / 3.0));
        assert!(close(add(r.d, d(0.5), n(2)).d.get(), 0.2));
        assert_eq!(
            sub(Dimension::VOID, d(0.7), n(2)).unwrap().d,
            Dimension::VOID
        );
        assert_eq!(
            sub(d(0.7), Dimension::VOID, n(2)).unwrap().d,
            Dimension::VOID
        );

        let err = sub(d(0.4), d(0.5), n(2)).unwrap_err();
        assert_eq!(err.op, OpTag::Sub);
        assert_eq!(err.condition, DomainCondition::SubBelowHarmonicBound);
        assert!(err
            .to_string()
            .contains("subtraction requires D_A < D_B/(1+D_B)"));
    }

    #[test]
    fn sub_boundary_fails_closed() {
        // D_B = 1/3 puts the bound at 1/4
        let b = 1.0 / 3.0;
        let bound = b / (1.0 + b);
        assert!(sub(d(bound), d(b), n(3)).is_err());
        let below = f64::from_bits(bound.to_bits() - 1);
        let r = sub(d(below), d(b), n(3)).unwrap();
        assert!(r.d.get() <= 1.0);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(d(0.5), d(0.5), n(2)).d.get(), 0.25);
        assert_eq!(mul(d(0.42), Dimension::UNIT, n(3)).d.get(), 0.42);
        assert_eq!(mul(d(0.42), Dimension::VOID, n(3)).d, Dimension::VOID);
        assert_eq!(mul(d(0.42), Dimension::VOID, n(3)).gamma, 0.0);
    }

    #[test]
    fn div_examples() {
        let r = div(d(0.25), d(0.5), n(2)).unwrap();
        assert_eq!(r.d.get(), 0.5);
        assert!(close(r.gamma, 0.25));
        // gamma route: gamma_A = 2^-4, gamma_C = gamma_A^0.5
        assert!(close(2f64.powi(-4).powf(0.5), 0.25));

        assert_eq!(div(d(0.42), Dimension::UNIT, n(2)).unwrap().d.get(), 0.42);
        let u = div(d(0.5), d(0.5), n(2)).unwrap();
        assert_eq!(u.d, Dimension::UNIT);
        assert_eq!(u.gamma, 0.5);

        assert_eq!(
            div(d(0.6), d(0.5), n(2)).unwrap_err().condition,
            DomainCondition::DivNotAboveDivisor
        );
        assert_eq!(
            div(Dimension::VOID, d(0.5), n(2)).unwrap_err().condition,
            DomainCondition::DivNonZeroDividend
        );
        assert!(div(d(0.5), Dimension::VOID, n(2)).is_err());
        assert!(div(Dimension::VOID, Dimension::VOID, n(2)).is_err());
    }

    #[test]
    fn pow_examples() {
        assert!(close(int_pow(d(0.5), 3, n(2)).unwrap().d.get(), 0.125));
        assert_eq!(int_pow(d(0.7), 1, n(2)).unwrap().d.get(), 0.7);
        assert_eq!(int_pow(d(0.9), 0, n(2)).unwrap().d, Dimension::UNIT);
        assert_eq!(
            int_pow(Dimension::VOID, 3, n(2)).unwrap().d,
            Dimension::VOID
        );
        assert_eq!(
            int_pow(Dimension::VOID, 0, n(2)).unwrap_err().condition,
            DomainCondition::PowZeroOfVoid
        );
    }

    #[test]
    fn derivative_examples() {
        let v = d_dimension_d_scale(n(2), 0.25).unwrap();
        assert!((v - 1.0 / 2f64.ln()).abs() <= 1e-12);
        assert!(d_dimension_d_scale(n(3), 1.0 / 9.0).unwrap() > 0.0);

        // central-difference oracle on D(gamma) = ln5 / ln(1/gamma)
        let f = |g: f64| 5f64.ln() / -g.ln();
        let h = 1e-7 * 0.1;
        let fd = (f(0.1 + h) - f(0.1 - h)) / (2.0 * h);
        let v = d_dimension_d_scale(n(5), 0.1).unwrap();
        assert!(((v - fd) / fd).abs() <= 1e-6);
        assert!((v - 3.035_588_158_990_25).abs() <= 1e-9);

        assert!(d_dimension_d_scale(n(5), 0.0).is_err());
        assert!(d_dimension_d_scale(n(5), 0.2).is_err());
        assert!(d_dimension_d_scale(n(5), -0.1).is_err());
    }

    #[test]
    fn consistency_examples() {
        assert!(check_gamma_consistency(BinaryOp::Add, d(0.5), d(0.5), n(3)).unwrap() <= TOLERANCE);
        assert!(check_gamma_consistency(BinaryOp::Mul, d(0.3), d(0.7), n(4)).unwrap() <= TOLERANCE);
        assert!(check_gamma_consistency(BinaryOp::Sub, d(0.2), d(0.5), n(2)).unwrap() <= TOLERANCE);
        assert!(check_gamma_consistency(BinaryOp::Div, d(0.5), d(0.5), n(7)).unwrap() <= TOLERANCE);
        assert!(matches!(
            check_gamma_consistency(BinaryOp::Sub, d(0.4), d(0.5), n(2)),
            Err(Error::OpDomain(_))
        ));
        assert!(matches!(
            check_gamma_consistency(BinaryOp::Mul, d(0.001), d(0.5), n(2)),
            Err(Error::Underflow { .. })
        ));
        for k in 0..=8 {
            assert!(check_pow_consistency(d(0.8), k, n(3)).unwrap() <= TOLERANCE);
        }
    }

    #[test]
    fn non_commutative_witnesses() {
        // sub(0.2, 0.5) is defined; sub(0.5, 0.2) is not.
        assert!(sub(d(0.2), d(0.5), n(2)).is_ok());
        assert!(sub(d(0.5), d(0.2), n(2)).is_err());
        assert!(div(d(0.25), d(0.5), n(2)).is_ok());
        assert!(div(d(0.5), d(0.25), n(2)).is_err());
    }

    #[test]
    fn parse_op_names() {
        for op in BinaryOp::ALL {
            assert_eq!(op.name().parse::<BinaryOp>().unwrap(), op);
        }
        assert!("pow".parse::<BinaryOp>().is_err());
    }

    fn unit_open() -> impl Strategy<Value = f64> {
        0.001f64..1.0
    }

    proptest! {
        #[test]
        fn add_and_mul_commute_exactly(a in unit_open(), b in unit_open()) {
            let nn = n(3);
            prop_assert_eq!(add(d(a), d(b), nn), add(d(b), d(a), nn));
            prop_assert_eq!(mul(d(a), d(b), nn), mul(d(b), d(a), nn));
        }

        #[test]
        fn no_additive_identity(a in 0.0001f64..=1.0, y in 0.0f64..=1.0) {
            prop_assert!(add(d(a), d(y), n(2)).d.get() < a);
        }

        #[test]
        fn pow_is_mul_chain(a in 0.0f64..=1.0, k in 1u32..=8) {
            let mut chain = d(a);
            for _ in 1..k {
                chain = mul(chain, d(a), n(2)).d;
            }
            prop_assert!(close(int_pow(d(a), k, n(2)).unwrap().d.get(), chain.get()));
        }

        #[test]
        fn result_gamma_matches_dimension(a in 0.05f64..1.0, b in 0.05f64..1.0, nv in 2u32..9) {
            let nn = n(nv);
            for op in BinaryOp::ALL {
                if let Ok(r) = apply(op, d(a), d(b), nn) {
                    if r.underflow {
                        continue;
                    }
                    let back = dimension_from_scale(nn, r.gamma).unwrap().get();
                    prop_assert!(close(back, r.d.get()));
                }
            }
        }
    }
}
