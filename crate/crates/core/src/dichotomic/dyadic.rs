//! The discrete model: a contextual variable `λ ∈ {1, 2, …}` with weight `2^-λ`.
//!
//! Two outcome rules are provided.
//!
//! * [`DyadicRule::Greedy`] is the inductive threshold rule: with `S_0 = 0`,
//!   step `λ` answers `α` iff `P ≥ 2^-λ + S_{λ-1}`, and then adds `2^-λ` to
//!   the running sum. The `α`-set of `λ` is the binary expansion of `P`.
//! * [`DyadicRule::Geometric`] cuts the diagonal into `2^λ` equal cells and
//!   answers `α` iff the projection point `t` lies in an even-indexed
//!   half-open cell `[2m/2^λ, (2m+1)/2^λ[`. The point `t = 1` (the state is
//!   `¬α`) always answers `¬α`.
//!
//! Both rules give `Σ_λ 2^-λ [outcome = α] = P`. They agree pointwise unless
//! `P` is dyadic, where the two binary expansions of `P` differ.
//!
//! Probabilities are truncated to 60-bit fixed point ([`FixedProbability`])
//! so every threshold comparison is exact. Partial sums are accumulated
//! exactly at scale `2^-120` ([`DyadicSum`]).

use alloc::vec::Vec;

use super::{DiagonalCoordinate, DichotomicOutcome};
use crate::{Error, Result};

/// Fractional bits of [`FixedProbability`].
pub const FIXED_BITS: u32 = 60;
/// Fractional bits of [`DyadicSum`]; also the largest exact enumeration depth.
pub const SUM_BITS: u32 = 120;
/// Default cap on `λ` for sampling and enumeration.
pub const DEFAULT_LAMBDA_MAX: u32 = 60;
/// Largest `λ` whose weight `2^-λ` is a (subnormal) `f64`.
pub const MAX_CONTEXT_LAMBDA: u32 = 1074;

const FIXED_ONE: u64 = 1 << FIXED_BITS;

/// A value of the discrete contextual variable and its weight `2^-λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiscreteContext {
    lambda: u32,
}

impl DiscreteContext {
    pub fn new(lambda: u32) -> Result<Self> {
        if (1..=MAX_CONTEXT_LAMBDA).contains(&lambda) {
            Ok(Self { lambda })
        } else {
            Err(Error::LambdaRange {
                lambda,
                max: MAX_CONTEXT_LAMBDA,
            })
        }
    }

    pub fn lambda(self) -> u32 {
        self.lambda
    }

    /// `2^-λ`, exact.
    pub fn weight(self) -> f64 {
        libm::scalbn(1.0, -(self.lambda as i32))
    }
}

/// A probability truncated to a multiple of `2^-60`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedProbability(u64);

impl FixedProbability {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(FIXED_ONE);

    /// Truncates `p` toward zero to the nearest multiple of `2^-60`.
    pub fn from_f64(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                what: "probability",
                value: p,
            });
        }
        // Scaling by a power of two is exact, and so is the floor.
        Ok(Self(libm::floor(libm::scalbn(p, FIXED_BITS as i32)) as u64))
    }

    /// Fixed-point numerator over `2^60`, at most `2^60`.
    pub fn from_numerator(numerator: u64) -> Result<Self> {
        if numerator > FIXED_ONE {
            return Err(Error::Domain {
                what: "fixed-point numerator",
                value: numerator as f64,
            });
        }
        Ok(Self(numerator))
    }

    pub fn numerator(self) -> u64 {
        self.0
    }

    /// `1 - p`, exact.
    pub fn complement(self) -> Self {
        Self(FIXED_ONE - self.0)
    }

    pub fn to_f64(self) -> f64 {
        libm::scalbn(self.0 as f64, -(FIXED_BITS as i32))
    }

    fn to_sum(self) -> DyadicSum {
        DyadicSum((self.0 as u128) << (SUM_BITS - FIXED_BITS))
    }
}

/// An exact sum of weights `2^-λ`, `λ ≤ 120`, as a numerator over `2^120`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicSum(u128);

impl DyadicSum {
    pub const ZERO: Self = Self(0);

    /// The weight `2^-λ` of a single context.
    pub fn weight(lambda: u32) -> Result<Self> {
        check_depth(lambda)?;
        Ok(Self(1u128 << (SUM_BITS - lambda)))
    }

    pub fn numerator(self) -> u128 {
        self.0
    }

    /// Nearest `f64`; exact whenever the sum spans at most 53 bits.
    pub fn to_f64(self) -> f64 {
        libm::scalbn(self.0 as f64, -(SUM_BITS as i32))
    }

    pub fn checked_add(self, other: Self) -> Option<Self> {
        self.0.checked_add(other.0).map(Self)
    }

    /// `p - self` as a signed numerator over `2^120`.
    pub fn deficit_from(self, p: FixedProbability) -> i128 {
        p.to_sum().0 as i128 - self.0 as i128
    }
}

fn check_depth(lambda: u32) -> Result<()> {
    if (1..=SUM_BITS).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::LambdaRange { lambda, max: SUM_BITS })
    }
}

fn check_lambda(lambda: u32) -> Result<()> {
    if lambda == 0 {
        Err(Error::LambdaRange { lambda, max: u32::MAX })
    } else {
        Ok(())
    }
}

/// The greedy outcomes for `λ = 1, 2, …`, produced by the running-sum
/// recursion.
#[derive(Debug, Clone)]
pub struct GreedyOutcomes {
    target: u64,
    sum: u64,
    lambda: u32,
}

impl GreedyOutcomes {
    pub fn new(p: FixedProbability) -> Self {
        Self {
            target: p.0,
            sum: 0,
            lambda: 0,
        }
    }
}

impl Iterator for GreedyOutcomes {
    type Item = DichotomicOutcome;

    fn next(&mut self) -> Option<DichotomicOutcome> {
        self.lambda = self.lambda.saturating_add(1);
        let alpha = if self.lambda <= FIXED_BITS {
            let threshold = (1u64 << (FIXED_BITS - self.lambda)) + self.sum;
            let take = self.target >= threshold;
            if take {
                self.sum = threshold;
            }
            take
        } else {
            // Past the fixed-point resolution the residual is either zero or,
            // for p = 1 only, exactly the remaining tail 2^-60, which the
            // recursion then keeps taking.
            self.target > self.sum
        };
        Some(if alpha {
            DichotomicOutcome::Alpha
        } else {
            DichotomicOutcome::NotAlpha
        })
    }
}

/// Interval-parity outcome on a fixed-point diagonal coordinate.
fn geometric_outcome_fixed(t: u64, lambda: u32) -> DichotomicOutcome {
    let even_cell = if t == FIXED_ONE {
        false
    } else if lambda <= FIXED_BITS {
        (t >> (FIXED_BITS - lambda)) & 1 == 0
    } else {
        // floor(t 2^λ) = t_num 2^(λ-60) is even.
        true
    };
    if even_cell {
        DichotomicOutcome::Alpha
    } else {
        DichotomicOutcome::NotAlpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum DyadicRule {
    Greedy,
    Geometric,
}

impl DyadicRule {
    pub fn name(self) -> &'static str {
        match self {
            DyadicRule::Greedy => "greedy",
            DyadicRule::Geometric => "geometric",
        }
    }

    /// Outcome at `λ` for the question whose `α` probability is `p`.
    pub fn outcome(self, p: FixedProbability, lambda: u32) -> Result<DichotomicOutcome> {
        check_lambda(lambda)?;
        Ok(match self {
            DyadicRule::Greedy => {
                // The recursion is constant after step 61.
                let steps = lambda.min(FIXED_BITS + 1) as usize;
                GreedyOutcomes::new(p).nth(steps - 1).expect("unbounded iterator")
            }
            DyadicRule::Geometric => geometric_outcome_fixed(p.complement().0, lambda),
        })
    }

    /// Outcomes for `λ = 1..=count`, index `λ - 1`.
    pub fn outcomes(self, p: FixedProbability, count: u32) -> Vec<DichotomicOutcome> {
        match self {
            DyadicRule::Greedy => GreedyOutcomes::new(p).take(count as usize).collect(),
            DyadicRule::Geometric => {
                let t = p.complement().0;
                (1..=count).map(|l| geometric_outcome_fixed(t, l)).collect()
            }
        }
    }
}

/// Greedy outcome at `λ` for probability `p`.
pub fn dyadic_outcome(p: f64, lambda: u32) -> Result<DichotomicOutcome> {
    DyadicRule::Greedy.outcome(FixedProbability::from_f64(p)?, lambda)
}

/// Interval-parity outcome at `λ` for diagonal coordinate `t`.
pub fn dyadic_outcome_geometric(t: DiagonalCoordinate, lambda: u32) -> Result<DichotomicOutcome> {
    check_lambda(lambda)?;
    let t = FixedProbability::from_f64(t.value())?;
    Ok(geometric_outcome_fixed(t.0, lambda))
}

/// `Σ_{λ ≤ depth, outcome(λ) = α} 2^-λ`, exactly.
///
/// For either rule the result `S` satisfies `0 ≤ p - S ≤ 2^-depth` in
/// fixed-point arithmetic. `depth` must lie in `1..=120`.
pub fn dyadic_partial_sum(p: f64, depth: u32, rule: DyadicRule) -> Result<DyadicSum> {
    partial_sum_fixed(FixedProbability::from_f64(p)?, depth, rule)
}

pub(crate) fn partial_sum_fixed(p: FixedProbability, depth: u32, rule: DyadicRule) -> Result<DyadicSum> {
    check_depth(depth)?;
    let mut sum = DyadicSum::ZERO;
    for (lambda, outcome) in (1..=depth).zip(rule.outcomes(p, depth)) {
        if outcome.is_alpha() {
            sum.0 += 1u128 << (SUM_BITS - lambda);
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;
    use DichotomicOutcome::{Alpha, NotAlpha};

    // Exact-rational oracles, independent of the fixed-point code.

    fn rational(p: f64) -> BigRational {
        BigRational::from_float(p).unwrap()
    }

    fn pow2_inv(k: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << k)
    }

    fn oracle_greedy(p: &BigRational, depth: u32) -> Vec<DichotomicOutcome> {
        let mut sum = BigRational::zero();
        (1..=depth)
            .map(|l| {
                let threshold = pow2_inv(l) + &sum;
                if *p >= threshold {
                    sum = threshold;
                    Alpha
                } else {
                    NotAlpha
                }
            })
            .collect()
    }

    fn oracle_geometric(t: &BigRational, depth: u32) -> Vec<DichotomicOutcome> {
        (1..=depth)
            .map(|l| {
                if t.is_one() {
                    return NotAlpha;
                }
                let cell = (t * BigRational::from_integer(BigInt::one() << l)).floor().to_integer();
                if (cell % 2u32).is_zero() {
                    Alpha
                } else {
                    NotAlpha
                }
            })
            .collect()
    }

    fn oracle_sum(outcomes: &[DichotomicOutcome]) -> BigRational {
        outcomes
            .iter()
            .zip(1..)
            .filter(|(o, _)| o.is_alpha())
            .map(|(_, l)| pow2_inv(l))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn sum_as_rational(s: DyadicSum) -> BigRational {
        BigRational::new(BigInt::from(s.numerator()), BigInt::one() << SUM_BITS)
    }

    fn boundary_set() -> Vec<f64> {
        let mut set = vec![
            0.0,
            1.0,
            0.5,
            0.75,
            1.0 / 3.0,
            1.0 / 7.0,
            1.0 / PI,
            core::f64::consts::SQRT_2 - 1.0,
        ];
        for j in 1..=10u32 {
            for k in 0..=(1u32 << j) {
                set.push(k as f64 / (1u64 << j) as f64);
            }
        }
        set
    }

    #[test]
    fn greedy_examples() {
        for l in [1, 2, 7, 60, 61, 500] {
            assert_eq!(dyadic_outcome(0.0, l).unwrap(), NotAlpha);
            assert_eq!(dyadic_outcome(1.0, l).unwrap(), Alpha);
        }
        assert_eq!(dyadic_outcome(0.5, 1).unwrap(), Alpha);
        assert_eq!(dyadic_outcome(0.5, 2).unwrap(), NotAlpha);
        assert_eq!(dyadic_outcome(0.75, 1).unwrap(), Alpha);
        assert_eq!(dyadic_outcome(0.75, 2).unwrap(), Alpha);
        assert_eq!(dyadic_outcome(0.75, 3).unwrap(), NotAlpha);
        assert!(dyadic_outcome(1.5, 1).is_err());
        assert!(dyadic_outcome(-0.1, 1).is_err());
        assert!(dyadic_outcome(f64::NAN, 1).is_err());
        assert!(dyadic_outcome(0.5, 0).is_err());
    }

    #[test]
    fn geometric_examples() {
        let t = |x| DiagonalCoordinate::new(x).unwrap();
        for l in [1, 5, 60, 61, 200] {
            assert_eq!(dyadic_outcome_geometric(t(0.0), l).unwrap(), Alpha);
            assert_eq!(dyadic_outcome_geometric(t(1.0), l).unwrap(), NotAlpha);
        }
        assert_eq!(dyadic_outcome_geometric(t(0.25), 2).unwrap(), NotAlpha);
        assert_eq!(dyadic_outcome_geometric(t(0.25), 3).unwrap(), Alpha);
        assert!(dyadic_outcome_geometric(t(0.25), 0).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        let s = dyadic_partial_sum(0.5, 10, DyadicRule::Greedy).unwrap();
        assert_eq!(s.to_f64(), 0.5);
        let s = dyadic_partial_sum(1.0, 10, DyadicRule::Greedy).unwrap();
        assert_eq!(s.to_f64(), 1.0 - 1.0 / 1024.0);
        let s = dyadic_partial_sum(1.0, 10, DyadicRule::Geometric).unwrap();
        assert_eq!(s.to_f64(), 1.0 - 1.0 / 1024.0);
        for rule in [DyadicRule::Greedy, DyadicRule::Geometric] {
            let s = dyadic_partial_sum(1.0 / 3.0, 20, rule).unwrap();
            assert!((1.0 / 3.0 - s.to_f64()).abs() < libm::scalbn(1.0, -20));
            assert_eq!(dyadic_partial_sum(0.0, 20, rule).unwrap(), DyadicSum::ZERO);
        }
        assert!(dyadic_partial_sum(0.5, 0, DyadicRule::Greedy).is_err());
        assert!(dyadic_partial_sum(0.5, 121, DyadicRule::Greedy).is_err());
        // Exact accumulation beyond the fixed-point resolution.
        let s = dyadic_partial_sum(1.0, 120, DyadicRule::Greedy).unwrap();
        assert_eq!(s.numerator(), (1u128 << 120) - 1);
    }

    #[test]
    fn contexts_carry_exact_weights() {
        assert_eq!(DiscreteContext::new(1).unwrap().weight(), 0.5);
        assert_eq!(DiscreteContext::new(60).unwrap().weight(), 1.0 / (1u64 << 60) as f64);
        assert_eq!(DiscreteContext::new(1074).unwrap().weight(), f64::from_bits(1));
        assert!(DiscreteContext::new(0).is_err());
        assert!(DiscreteContext::new(1075).is_err());
    }

    #[test]
    fn fixed_point_truncates() {
        assert_eq!(FixedProbability::from_f64(1.0).unwrap(), FixedProbability::ONE);
        assert_eq!(FixedProbability::from_f64(0.5).unwrap().numerator(), 1 << 59);
        let tiny = FixedProbability::from_f64(1e-300).unwrap();
        assert_eq!(tiny, FixedProbability::ZERO);
        assert!(FixedProbability::from_numerator(FIXED_ONE + 1).is_err());
    }

    #[test]
    fn matches_rational_oracle_on_boundary_set() {
        for p in boundary_set() {
            let exact = rational(p);
            let fixed = FixedProbability::from_f64(p).unwrap();
            assert_eq!(
                DyadicRule::Greedy.outcomes(fixed, 60),
                oracle_greedy(&exact, 60),
                "greedy p={p}"
            );
            let t = BigRational::one() - &exact;
            assert_eq!(
                DyadicRule::Geometric.outcomes(fixed, 60),
                oracle_geometric(&t, 60),
                "geometric p={p}"
            );
        }
    }

    #[test]
    fn greedy_and_geometric_diverge_at_three_quarters() {
        let p = FixedProbability::from_f64(0.75).unwrap();
        let greedy = DyadicRule::Greedy.outcomes(p, 40);
        let geometric = DyadicRule::Geometric.outcomes(p, 40);
        assert_eq!(&greedy[..4], &[Alpha, Alpha, NotAlpha, NotAlpha]);
        assert_eq!(&geometric[..4], &[Alpha, NotAlpha, Alpha, Alpha]);
        assert!((3..=40).all(|l| greedy[l - 1] != geometric[l - 1]));
        let bound = libm::scalbn(1.0, -40);
        for rule in [DyadicRule::Greedy, DyadicRule::Geometric] {
            let s = dyadic_partial_sum(0.75, 40, rule).unwrap().to_f64();
            assert!((0.75 - s).abs() <= bound);
        }
    }

    #[test]
    fn rules_agree_off_dyadics() {
        for p in [1.0 / 3.0, 1.0 / 7.0, 1.0 / PI, core::f64::consts::SQRT_2 - 1.0] {
            for l in 1..=40 {
                let t = DiagonalCoordinate::new(1.0 - p).unwrap();
                assert_eq!(
                    dyadic_outcome(p, l).unwrap(),
                    dyadic_outcome_geometric(t, l).unwrap(),
                    "p={p} λ={l}"
                );
            }
        }
    }

    #[test]
    fn greedy_bound_on_boundary_set() {
        for depth in [1, 10, 40, 60, 120] {
            let bound = 1i128 << (SUM_BITS - depth);
            for p in boundary_set() {
                let fixed = FixedProbability::from_f64(p).unwrap();
                let greedy = partial_sum_fixed(fixed, depth, DyadicRule::Greedy).unwrap();
                let d = greedy.deficit_from(fixed);
                assert!(0 <= d && d <= bound, "greedy p={p} L={depth}");
                // Equality only at p = 1, the all-α geometric series.
                assert!(d < bound || p == 1.0);
                let geometric = partial_sum_fixed(fixed, depth, DyadicRule::Geometric).unwrap();
                let d = geometric.deficit_from(fixed);
                assert!(0 <= d && d <= bound, "geometric p={p} L={depth}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn greedy_matches_oracle(p in 0.0..=1.0f64, depth in 1u32..=60) {
            let fixed = FixedProbability::from_f64(p).unwrap();
            let oracle = oracle_greedy(&rational(p), depth);
            prop_assert_eq!(DyadicRule::Greedy.outcomes(fixed, depth), oracle.clone());
            let sum = dyadic_partial_sum(p, depth, DyadicRule::Greedy).unwrap();
            prop_assert_eq!(sum_as_rational(sum), oracle_sum(&oracle));
        }

        #[test]
        fn geometric_matches_oracle(p in 0.0078125..=1.0f64, depth in 1u32..=60) {
            // On [2^-7, 1] every f64 is a multiple of 2^-60, so 1 - p is exact.
            let fixed = FixedProbability::from_f64(p).unwrap();
            let oracle = oracle_geometric(&(BigRational::one() - rational(p)), depth);
            prop_assert_eq!(DyadicRule::Geometric.outcomes(fixed, depth), oracle.clone());
            let sum = dyadic_partial_sum(p, depth, DyadicRule::Geometric).unwrap();
            prop_assert_eq!(sum_as_rational(sum), oracle_sum(&oracle));
        }

        #[test]
        fn partial_sums_recover_p(p in 0.0..=1.0f64, depth in 1u32..=120) {
            let fixed = FixedProbability::from_f64(p).unwrap();
            let bound = 1i128 << (SUM_BITS - depth);
            for rule in [DyadicRule::Greedy, DyadicRule::Geometric] {
                let d = partial_sum_fixed(fixed, depth, rule).unwrap().deficit_from(fixed);
                prop_assert!(0 <= d && d <= bound);
            }
        }

        #[test]
        fn single_outcome_agrees_with_table(p in 0.0..=1.0f64, lambda in 1u32..=70) {
            let fixed = FixedProbability::from_f64(p).unwrap();
            for rule in [DyadicRule::Greedy, DyadicRule::Geometric] {
                let table = rule.outcomes(fixed, lambda);
                prop_assert_eq!(rule.outcome(fixed, lambda).unwrap(), table[lambda as usize - 1]);
            }
        }
    }

    #[test]
    fn oracle_helpers_are_consistent() {
        assert_eq!(oracle_sum(&[Alpha, NotAlpha, Alpha]).to_f64().unwrap(), 0.625);
    }
}
