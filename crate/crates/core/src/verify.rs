//! Exact `λ`-enumeration checks of the dyadic models.

use alloc::vec::Vec;

use crate::dichotomic::dyadic::{partial_sum_fixed, SUM_BITS};
use crate::dichotomic::{DichotomicOutcome, DyadicRule, DyadicSum, FixedProbability};
use crate::Result;

/// All `λ ≤ depth` whose outcome is `outcome`.
pub fn lambda_preimage(p: f64, outcome: DichotomicOutcome, depth: u32, rule: DyadicRule) -> Result<Vec<u32>> {
    let fixed = FixedProbability::from_f64(p)?;
    DyadicSum::weight(depth)?;
    Ok((1..=depth)
        .zip(rule.outcomes(fixed, depth))
        .filter(|&(_, o)| o == outcome)
        .map(|(l, _)| l)
        .collect())
}

/// `Σ_{λ ∈ set} 2^-λ`, exactly.
pub fn preimage_measure(lambdas: &[u32]) -> Result<DyadicSum> {
    let mut total = DyadicSum::ZERO;
    for &l in lambdas {
        total = total
            .checked_add(DyadicSum::weight(l)?)
            .expect("distinct lambdas sum below 1");
    }
    Ok(total)
}

/// Weight `2^-depth` of the contexts beyond an enumeration of depth `depth`.
pub fn tail_mass(depth: u32) -> Result<DyadicSum> {
    DyadicSum::weight(depth)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExactReport {
    pub partial_sum: f64,
    pub abs_error: f64,
    pub bound_satisfied: bool,
}

/// Compares `p` with its depth-`depth` partial sum.
///
/// The error `p - S` and the bound `0 ≤ p - S ≤ 2^-depth` are evaluated in
/// exact fixed point on the 60-bit truncation of `p`; the reported floats
/// are rounded afterwards.
pub fn exact_check(p: f64, depth: u32, rule: DyadicRule) -> Result<ExactReport> {
    let fixed = FixedProbability::from_f64(p)?;
    let sum = partial_sum_fixed(fixed, depth, rule)?;
    let deficit = sum.deficit_from(fixed);
    let bound = 1i128 << (SUM_BITS - depth);
    Ok(ExactReport {
        partial_sum: sum.to_f64(),
        abs_error: libm::scalbn(deficit as f64, -(SUM_BITS as i32)),
        bound_satisfied: (0..=bound).contains(&deficit),
    })
}
