//! Hidden-measurement models for a dichotomic question `α` / `¬α`.

pub mod dyadic;
pub mod sphere;

pub use dyadic::{
    dyadic_outcome, dyadic_outcome_geometric, dyadic_partial_sum, DiscreteContext, DyadicRule, DyadicSum,
    FixedProbability, GreedyOutcomes,
};
pub use sphere::{
    bloch_of_qubit, continuous_outcome, continuous_probability, diagonal_coordinate, qubit_from_angles, BlochVector,
    DiagonalCoordinate,
};

/// The two answers to a yes/no question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum DichotomicOutcome {
    Alpha,
    NotAlpha,
}

impl DichotomicOutcome {
    pub fn is_alpha(self) -> bool {
        self == DichotomicOutcome::Alpha
    }

    pub fn negate(self) -> Self {
        match self {
            DichotomicOutcome::Alpha => DichotomicOutcome::NotAlpha,
            DichotomicOutcome::NotAlpha => DichotomicOutcome::Alpha,
        }
    }
}
