//! Symmetric polyadic Cantor pre-fractals.
//!
//! Stage 1 places `N` copies of length `γ` in the unit interval. For even
//! `N` two blocks of `N/2` copies sit flush against the two ends; for odd
//! `N` one more copy is centered. Copies inside a block are separated by
//! `ε`. Every later stage repeats the layout inside each copy.

use crate::dimension::ArityN;
use crate::error::{Error, Result};

/// Default upper bound on the number of intervals in a constructed set.
pub const DEFAULT_INTERVAL_CAP: usize = 10_000_000;

/// Shortest interval length that binary64 positions in `[0, 1]` resolve
/// with enough headroom for the invariants below.
pub const MIN_RESOLVABLE_LENGTH: f64 = 1e-12;

/// Rounding slack for touching endpoints (`ε = 0` or `ε = ε_max`).
pub const TOUCH_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LacunarityBounds {
    pub eps_min: f64,
    pub eps_reg: f64,
    pub eps_max: f64,
}

fn check_gamma(n: ArityN, gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < n.max_scale()) {
        return Err(Error::domain(format!(
            "construction requires 0 < gamma < 1/N = {}, got {gamma}",
            n.max_scale()
        )));
    }
    Ok(())
}

/// `ε_min = 0`, `ε_reg = (1−Nγ)/(N−1)`, and `ε_max = (1−Nγ)/(N−2)` for even
/// `N` or `(1−Nγ)/(N−3)` for odd `N`. Only defined for `N >= 4`.
pub fn lacunarity_bounds(n: ArityN, gamma: f64) -> Result<LacunarityBounds> {
    if n.get() < 4 {
        return Err(Error::domain(format!(
            "lacunarity bounds need N >= 4 (epsilon plays no role for N = {n})"
        )));
    }
    check_gamma(n, gamma)?;
    let nf = n.as_f64();
    let budget = 1.0 - nf * gamma;
    let eps_max = if n.get().is_multiple_of(2) {
        budget / (nf - 2.0)
    } else {
        budget / (nf - 3.0)
    };
    Ok(LacunarityBounds {
        eps_min: 0.0,
        eps_reg: budget / (nf - 1.0),
        eps_max,
    })
}

/// Relative slack above `ε_max` absorbed as rounding of the bound itself
/// (e.g. `ε = 0.1` against a computed `ε_max = 0.09999999999999998`).
const EPS_MAX_SLACK: f64 = 1e-12;

/// Validates `epsilon` and returns the value to build with: inputs within
/// rounding of `ε_max` are clamped onto it.
fn check_epsilon(n: ArityN, gamma: f64, epsilon: f64) -> Result<f64> {
    if n.get() < 4 {
        if epsilon != 0.0 {
            return Err(Error::domain(format!(
                "epsilon must be 0 for N = {n}, got {epsilon}"
            )));
        }
        return Ok(0.0);
    }
    let bounds = lacunarity_bounds(n, gamma)?;
    if !(epsilon >= 0.0 && epsilon <= bounds.eps_max * (1.0 + EPS_MAX_SLACK)) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, eps_max = {}], got {epsilon}",
            bounds.eps_max
        )));
    }
    Ok(epsilon.min(bounds.eps_max))
}

/// Left endpoints of the `N` stage-1 copies, ascending.
pub fn stage_one_offsets(n: ArityN, gamma: f64, epsilon: f64) -> Result<Vec<f64>> {
    check_gamma(n, gamma)?;
    let epsilon = check_epsilon(n, gamma, epsilon)?;
    let half = (n.get() / 2) as usize;
    let pitch = gamma + epsilon;
    let left: Vec<f64> = (0..half).map(|i| i as f64 * pitch).collect();
    let mut offsets = Vec::with_capacity(n.get() as usize);
    offsets.extend_from_slice(&left);
    if n.get() % 2 == 1 {
        offsets.push((1.0 - gamma) / 2.0);
    }
    offsets.extend(left.iter().rev().map(|x| 1.0 - gamma - x));
    Ok(offsets)
}

/// `(N, γ, ε, S)`: everything needed to build a stage-`S` pre-fractal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorParams {
    n: ArityN,
    gamma: f64,
    epsilon: f64,
    stage: u32,
}

impl CantorParams {
    pub fn new(n: ArityN, gamma: f64, epsilon: f64, stage: u32) -> Result<Self> {
        check_gamma(n, gamma)?;
        let epsilon = check_epsilon(n, gamma, epsilon)?;
        Ok(CantorParams {
            n,
            gamma,
            epsilon,
            stage,
        })
    }

    /// Most regular layout: `ε = ε_reg` for `N >= 4`, `ε = 0` otherwise.
    pub fn regular(n: ArityN, gamma: f64, stage: u32) -> Result<Self> {
        let epsilon = if n.get() >= 4 {
            lacunarity_bounds(n, gamma)?.eps_reg
        } else {
            0.0
        };
        Self::new(n, gamma, epsilon, stage)
    }

    pub fn n(&self) -> ArityN {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn with_stage(self, stage: u32) -> Self {
        CantorParams { stage, ..self }
    }

    /// `N^S`, or `None` if it does not fit in 128 bits.
    pub fn interval_count(&self) -> Option<u128> {
        u128::from(self.n.get()).checked_pow(self.stage)
    }

    pub fn interval_length(&self) -> f64 {
        self.gamma.powi(self.stage as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(0.0 <= start && start < end && end <= 1.0) {
            return Err(Error::Invariant(format!(
                "interval [{start}, {end}] must satisfy 0 <= start < end <= 1"
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Sorted, pairwise disjoint closed subintervals of `[0, 1]`, optionally
/// tagged with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
    params: Option<CantorParams>,
}

impl IntervalSet {
    /// Validates all invariants before returning.
    pub fn new(intervals: Vec<Interval>, params: Option<CantorParams>) -> Result<Self> {
        let set = IntervalSet { intervals, params };
        set.check_invariants()?;
        Ok(set)
    }

    pub fn empty() -> Self {
        IntervalSet {
            intervals: Vec::new(),
            params: None,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn params(&self) -> Option<&CantorParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn check_invariants(&self) -> Result<()> {
        for (i, iv) in self.intervals.iter().enumerate() {
            if !(0.0 <= iv.start && iv.start < iv.end && iv.end <= 1.0) {
                return Err(Error::Invariant(format!(
                    "interval {i} [{}, {}] is not a proper subinterval of [0, 1]",
                    iv.start, iv.end
                )));
            }
        }
        for (i, pair) in self.intervals.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if !(b.start > a.start) {
                return Err(Error::Invariant(format!(
                    "intervals {i} and {} are not sorted by start",
                    i + 1
                )));
            }
            if b.start < a.end - TOUCH_TOLERANCE {
                return Err(Error::Invariant(format!(
                    "intervals {i} [{}, {}] and {} [{}, {}] overlap",
                    a.start,
                    a.end,
                    i + 1,
                    b.start,
                    b.end
                )));
            }
        }
        if let Some(p) = &self.params {
            self.check_against_params(p)?;
        }
        Ok(())
    }

    fn check_against_params(&self, p: &CantorParams) -> Result<()> {
        let expected = p.interval_count();
        if expected != Some(self.intervals.len() as u128) {
            return Err(Error::Invariant(format!(
                "expected N^S = {} intervals, found {}",
                expected.map_or("overflow".to_string(), |c| c.to_string()),
                self.intervals.len()
            )));
        }
        let len = p.interval_length();
        if let Some((i, iv)) = self
            .intervals
            .iter()
            .enumerate()
            .find(|(_, iv)| !((iv.length() - len).abs() <= 1e-12))
        {
            return Err(Error::Invariant(format!(
                "interval {i} has length {}, expected gamma^S = {len}",
                iv.length()
            )));
        }
        let measure = (p.n().as_f64() * p.gamma()).powi(p.stage() as i32);
        if !((self.total_measure() - measure).abs() <= 1e-9) {
            return Err(Error::Invariant(format!(
                "total measure {} differs from (N gamma)^S = {measure}",
                self.total_measure()
            )));
        }
        let count = self.intervals.len();
        for i in 0..count {
            let mirror = &self.intervals[count - 1 - i];
            if !((self.intervals[i].start + mirror.end - 1.0).abs() <= 1e-12) {
                return Err(Error::Invariant(format!(
                    "interval {i} is not mirror-symmetric about 0.5"
                )));
            }
        }
        Ok(())
    }
}

/// Builds the stage-`S` set with the default interval cap.
pub fn construct_prefractal(params: &CantorParams) -> Result<IntervalSet> {
    construct_prefractal_with_cap(params, DEFAULT_INTERVAL_CAP)
}

/// Builds the stage-`S` set. The start of interval `i` is
/// `Σ_s o(i_s)·γ^(s−1)` over the base-`N` digits of `i` (most significant
/// digit = stage 1), so rounding error does not grow with `S`.
pub fn construct_prefractal_with_cap(params: &CantorParams, cap: usize) -> Result<IntervalSet> {
    let count = match params.interval_count() {
        Some(c) if c <= cap as u128 => c as usize,
        other => {
            return Err(Error::CapExceeded {
                requested: other.unwrap_or(u128::MAX),
                cap,
            })
        }
    };
    let length = params.interval_length();
    if length < MIN_RESOLVABLE_LENGTH {
        return Err(Error::BelowResolution {
            length,
            limit: MIN_RESOLVABLE_LENGTH,
        });
    }

    let n = params.n().get() as usize;
    let stage = params.stage() as usize;
    let offsets = stage_one_offsets(params.n(), params.gamma(), params.epsilon())?;
    let powers: Vec<f64> = (0..stage).map(|s| params.gamma().powi(s as i32)).collect();

    let mut intervals = Vec::with_capacity(count);
    let mut digits = vec![0usize; stage];
    for index in 0..count {
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        // Smallest terms first. Folding from +0.0 keeps stage 0 at +0.0;
        // an empty f64 sum is -0.0.
        let start = (0..stage)
            .rev()
            .map(|s| offsets[digits[s]] * powers[s])
            .fold(0.0, |acc, t| acc + t);
        intervals.push(Interval {
            start,
            end: (start + length).min(1.0),
        });
    }
    IntervalSet::new(intervals, Some(*params))
}

/// Widths of the gaps between consecutive intervals, in order. Touching
/// neighbours contribute a 0 entry. Uncovered slack at either end of
/// `[0, 1]` is included when present.
pub fn gap_widths(set: &IntervalSet) -> Vec<f64> {
    let ivs = set.intervals();
    let mut gaps = Vec::with_capacity(ivs.len() + 1);
    let (Some(first), Some(last)) = (ivs.first(), ivs.last()) else {
        return gaps;
    };
    if first.start > TOUCH_TOLERANCE {
        gaps.push(first.start);
    }
    gaps.extend(ivs.windows(2).map(|w| (w[1].start - w[0].end).max(0.0)));
    if 1.0 - last.end > TOUCH_TOLERANCE {
        gaps.push(1.0 - last.end);
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u32) -> ArityN {
        ArityN::new(v).unwrap()
    }

    fn stage_one(nv: u32, gamma: f64, eps: f64) -> IntervalSet {
        construct_prefractal(&CantorParams::new(n(nv), gamma, eps, 1).unwrap()).unwrap()
    }

    #[test]
    fn stage_zero_is_positive_zero() {
        let set = construct_prefractal(&CantorParams::new(n(7), 0.09, 0.05, 0).unwrap()).unwrap();
        assert_eq!(set.intervals()[0].start.to_bits(), 0.0f64.to_bits());
        assert_eq!(set.intervals()[0].end, 1.0);
    }

    #[test]
    fn bounds_examples() {
        let b = lacunarity_bounds(n(4), 0.2).unwrap();
        assert_eq!(b.eps_min, 0.0);
        assert!((b.eps_reg - 0.2 / 3.0).abs() <= 1e-12);
        assert!((b.eps_max - 0.1).abs() <= 1e-12);

        let b = lacunarity_bounds(n(5), 0.1).unwrap();
        assert!((b.eps_reg - 0.125).abs() <= 1e-12);
        assert!((b.eps_max - 0.25).abs() <= 1e-12);

        assert!(lacunarity_bounds(n(4), 0.25).is_err());
        assert!(lacunarity_bounds(n(2), 0.1).is_err());
        assert!(lacunarity_bounds(n(3), 0.1).is_err());
    }

    #[test]
    fn bounds_are_ordered() {
        for nv in 4..=12 {
            for k in 1..20 {
                let gamma = k as f64 / 20.0 / nv as f64;
                let b = lacunarity_bounds(n(nv), gamma).unwrap();
                assert!(0.0 == b.eps_min && b.eps_min < b.eps_reg && b.eps_reg < b.eps_max);
            }
        }
    }

    #[test]
    fn even_eps_max_joins_central_wells() {
        let set = stage_one(4, 0.2, 0.1);
        let gaps = gap_widths(&set);
        assert_eq!(gaps.len(), 3);
        assert!(gaps[1].abs() <= 1e-12);
        assert!((gaps[0] - 0.1).abs() <= 1e-12 && (gaps[2] - 0.1).abs() <= 1e-12);
    }

    #[test]
    fn odd_eps_zero_flanking_gaps() {
        let set = stage_one(5, 0.1, 0.0);
        let gaps = gap_widths(&set);
        assert_eq!(gaps.len(), 4);
        assert_eq!(gaps[0], 0.0);
        assert_eq!(gaps[3], 0.0);
        assert!((gaps[1] - 0.25).abs() <= 1e-12 && (gaps[2] - 0.25).abs() <= 1e-12);
        let positive: Vec<f64> = gaps.into_iter().filter(|g| *g > 1e-12).collect();
        assert_eq!(positive.len(), 2);
    }

    #[test]
    fn regular_gaps_are_equal() {
        let eps = lacunarity_bounds(n(4), 0.2).unwrap().eps_reg;
        assert!((eps - 1.0 / 15.0).abs() <= 1e-12);
        for g in gap_widths(&stage_one(4, 0.2, eps)) {
            assert!((g - 1.0 / 15.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn odd_eps_max_gap_count() {
        // Odd N at eps_max: N - 3 gaps of width eps_max, two zero flanking gaps.
        for nv in [5u32, 7, 9] {
            let gamma = 0.5 / nv as f64;
            let b = lacunarity_bounds(n(nv), gamma).unwrap();
            let gaps = gap_widths(&stage_one(nv, gamma, b.eps_max));
            let wide = gaps
                .iter()
                .filter(|g| (*g - b.eps_max).abs() <= 1e-12)
                .count();
            let zero = gaps.iter().filter(|g| g.abs() <= 1e-12).count();
            assert_eq!(wide, nv as usize - 3);
            assert_eq!(zero, 2);
        }
    }

    #[test]
    fn offsets_layout() {
        let o = stage_one_offsets(n(2), 1.0 / 3.0, 0.0).unwrap();
        assert_eq!(o[0], 0.0);
        assert!((o[1] - 2.0 / 3.0).abs() <= 1e-15);
        let o = stage_one_offsets(n(5), 0.1, 0.05).unwrap();
        assert_eq!(o.len(), 5);
        assert_eq!(o[0], 0.0);
        assert!((o[2] - 0.45).abs() <= 1e-15);
        assert!((o[4] - 0.9).abs() <= 1e-15);
        assert!(o.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn epsilon_validation() {
        assert!(stage_one_offsets(n(4), 0.2, 0.1 + 1e-9).is_err());
        let b = lacunarity_bounds(n(4), 0.2).unwrap();
        let p = CantorParams::new(n(4), 0.2, 0.1, 1).unwrap();
        assert_eq!(p.epsilon(), b.eps_max);
        assert!(stage_one_offsets(n(4), 0.2, -1e-9).is_err());
        assert!(stage_one_offsets(n(2), 0.3, 0.01).is_err());
        assert!(stage_one_offsets(n(3), 0.3, 0.01).is_err());
        assert!(CantorParams::new(n(3), 1.0 / 3.0, 0.0, 1).is_err());
        assert!(CantorParams::new(n(3), 0.0, 0.0, 1).is_err());
    }

    #[test]
    fn triadic_examples() {
        let p = CantorParams::new(n(2), 1.0 / 3.0, 0.0, 1).unwrap();
        let s1 = construct_prefractal(&p).unwrap();
        assert_eq!(s1.len(), 2);
        assert_eq!(
            s1.intervals()[0],
            Interval {
                start: 0.0,
                end: 1.0 / 3.0
            }
        );
        assert!((s1.intervals()[1].start - 2.0 / 3.0).abs() <= 1e-15);
        assert_eq!(s1.intervals()[1].end, 1.0);

        let s2 = construct_prefractal(&p.with_stage(2)).unwrap();
        let starts: Vec<f64> = s2.intervals().iter().map(|i| i.start).collect();
        for (got, want) in starts.iter().zip([0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0]) {
            assert!((got - want).abs() <= 1e-15);
        }
        for iv in s2.intervals() {
            assert!((iv.length() - 1.0 / 9.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn stage_zero_is_initiator() {
        let p = CantorParams::new(n(6), 0.1, 0.02, 0).unwrap();
        let s = construct_prefractal(&p).unwrap();
        assert_eq!(
            s.intervals(),
            &[Interval {
                start: 0.0,
                end: 1.0
            }]
        );
        assert!(gap_widths(&s).is_empty());
    }

    #[test]
    fn cap_and_resolution() {
        let p = CantorParams::new(n(8), 0.1, 0.0, 8).unwrap();
        assert!(matches!(
            construct_prefractal_with_cap(&p, 1000),
            Err(Error::CapExceeded {
                requested: 16_777_216,
                cap: 1000
            })
        ));
        let p = CantorParams::new(n(8), 0.01, 0.0, 7).unwrap();
        assert!(matches!(
            construct_prefractal(&p),
            Err(Error::BelowResolution { .. })
        ));
        let p = CantorParams::new(n(2), 0.4, 0.0, 200).unwrap();
        assert!(matches!(
            construct_prefractal(&p),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn invariant_violations_are_reported() {
        let overlapping = vec![
            Interval::new(0.0, 0.5).unwrap(),
            Interval::new(0.4, 1.0).unwrap(),
        ];
        assert!(matches!(
            IntervalSet::new(overlapping, None),
            Err(Error::Invariant(_))
        ));
        let unsorted = vec![
            Interval::new(0.6, 1.0).unwrap(),
            Interval::new(0.0, 0.5).unwrap(),
        ];
        assert!(IntervalSet::new(unsorted, None).is_err());
        assert!(Interval::new(0.5, 0.5).is_err());
        assert!(Interval::new(0.5, 1.5).is_err());

        let p = CantorParams::new(n(2), 1.0 / 3.0, 0.0, 1).unwrap();
        let wrong_count = vec![Interval::new(0.0, 1.0 / 3.0).unwrap()];
        assert!(IntervalSet::new(wrong_count, Some(p)).is_err());
        let asymmetric = vec![
            Interval::new(0.0, 1.0 / 3.0).unwrap(),
            Interval::new(0.6, 0.6 + 1.0 / 3.0).unwrap(),
        ];
        assert!(IntervalSet::new(asymmetric, Some(p)).is_err());
    }

    fn params_strategy() -> impl Strategy<Value = CantorParams> {
        (2u32..=8, 0.05f64..0.95, 0.0f64..=1.0, 0u32..=5).prop_map(|(nv, g, e, s)| {
            let nn = n(nv);
            let gamma = g / nv as f64;
            let eps = if nv >= 4 {
                e * lacunarity_bounds(nn, gamma).unwrap().eps_max
            } else {
                0.0
            };
            CantorParams::new(nn, gamma, eps, s).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn self_similar(p in params_strategy()) {
            prop_assume!(p.stage() <= 4);
            let coarse = construct_prefractal(&p).unwrap();
            let fine = construct_prefractal(&p.with_stage(p.stage() + 1)).unwrap();
            let offsets = stage_one_offsets(p.n(), p.gamma(), p.epsilon()).unwrap();
            let per_copy = coarse.len();
            for (i, o) in offsets.iter().enumerate() {
                let block = &fine.intervals()[i * per_copy..(i + 1) * per_copy];
                for (f, c) in block.iter().zip(coarse.intervals()) {
                    prop_assert!(((f.start - o) / p.gamma() - c.start).abs() <= 1e-10);
                    prop_assert!(((f.end - o) / p.gamma() - c.end).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn stage_one_sum_rule(p in params_strategy()) {
            let s1 = construct_prefractal(&p.with_stage(1)).unwrap();
            let total: f64 = gap_widths(&s1).iter().sum();
            prop_assert!((p.n().as_f64() * p.gamma() + total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn zero_epsilon_has_widest_gap(nv in 4u32..=8, g in 0.05f64..0.95, e in 0.0f64..=1.0) {
            let nn = n(nv);
            let gamma = g / nv as f64;
            let b = lacunarity_bounds(nn, gamma).unwrap();
            let widest = |eps: f64| gap_widths(&stage_one(nv, gamma, eps))
                .into_iter()
                .fold(0.0, f64::max);
            prop_assert!(widest(0.0) + 1e-12 >= widest(e * b.eps_max));
        }
    }
}
