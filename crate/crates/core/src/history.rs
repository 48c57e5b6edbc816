//! History Projection Operators.
//!
//! A homogeneous history asserts one proposition (a projector) at each time
//! of its temporal support. It is represented on the tensor product of one
//! copy of the system space per time by the pure tensor `⊗_k π_k`; its
//! negation is `I - ⊗_k π_k`, and a disjoint family is represented by the sum
//! of the branch tensors.
//!
//! Probabilities come from the pseudo-projector, which maps the initial
//! state to the tensor of its successive projections. Two conventions are
//! available (see [`Convention`]).

use alloc::format;
use alloc::vec::Vec;

use crate::dichotomic::{DyadicRule, FixedProbability};
use crate::hilbert::{
    tensor_projectors, tensor_vectors, Matrix, Projector, StateVector, TensorFactorization, UnitaryMap,
};
use crate::{Error, Result};

/// Squared norms below this count as a vanished branch.
pub const SURVIVAL_TOLERANCE: f64 = 1e-24;
/// Max-norm tolerance on `π_A π_B` for disjointness.
pub const DISJOINT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSupport {
    times: Vec<f64>,
}

impl TemporalSupport {
    /// Times must be finite and strictly increasing.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Support("a history needs at least one time".into()));
        }
        if let Some(t) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::Support(format!("time {t} is not finite")));
        }
        if let Some(w) = times.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Support(format!(
                "times must increase strictly, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { times })
    }

    /// Support `0, 1, …, n-1`.
    pub fn sequential(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i as f64).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousHistory {
    support: TemporalSupport,
    projectors: Vec<Projector>,
}

impl HomogeneousHistory {
    pub fn new(support: TemporalSupport, projectors: Vec<Projector>) -> Result<Self> {
        if support.len() != projectors.len() {
            return Err(Error::Support(format!(
                "{} times but {} projectors",
                support.len(),
                projectors.len()
            )));
        }
        Ok(Self { support, projectors })
    }

    /// History over the support `0, 1, …, n-1`.
    pub fn sequential(projectors: Vec<Projector>) -> Result<Self> {
        Self::new(TemporalSupport::sequential(projectors.len())?, projectors)
    }

    pub fn support(&self) -> &TemporalSupport {
        &self.support
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn factorization(&self) -> TensorFactorization {
        TensorFactorization::new(self.projectors.iter().map(Projector::dim).collect())
            .expect("nonempty, positive dimensions")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorForm {
    PureTensor,
    Complement,
    DisjointSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryProjector {
    factorization: TensorFactorization,
    projector: Projector,
    form: ProjectorForm,
}

impl HistoryProjector {
    pub fn factorization(&self) -> &TensorFactorization {
        &self.factorization
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    pub fn matrix(&self) -> &Matrix {
        self.projector.matrix()
    }

    pub fn form(&self) -> ProjectorForm {
        self.form
    }
}

/// A chosen decomposition of a proposition into pairwise disjoint
/// homogeneous branches on one temporal support.
#[derive(Debug, Clone, PartialEq)]
pub struct InhomogeneousHistory {
    branches: Vec<HomogeneousHistory>,
}

impl InhomogeneousHistory {
    pub fn new(branches: Vec<HomogeneousHistory>) -> Result<Self> {
        check_disjoint_family(&branches)?;
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[HomogeneousHistory] {
        &self.branches
    }

    pub fn projector(&self) -> HistoryProjector {
        sum_of_tensors(&self.branches)
    }
}

/// How the pseudo-projected tensor is formed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Convention {
    /// Normalized chain; the probability is `‖π_n ⋯ π_1 p‖²`.
    #[default]
    Lueders,
    /// Unnormalized chain `p ⊗ π_1 p ⊗ … ⊗ π_{n-1}⋯π_1 p`; the probability
    /// `<p^⊗|π_A p^⊗>` is then `Π_k ‖π_k ⋯ π_1 p‖²`.
    Literal,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Lueders => "lueders",
            Convention::Literal => "literal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum HistoryOutcome {
    /// The history proposition holds.
    Affirmed,
    Denied,
}

impl HistoryOutcome {
    pub fn is_affirmed(self) -> bool {
        self == HistoryOutcome::Affirmed
    }
}

/// Result of the pseudo-projector on an initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoProjection {
    chain: Vec<StateVector>,
    survival: Vec<f64>,
    tensor: Option<StateVector>,
}

impl PseudoProjection {
    /// Normalized states `q̂_0 = p, q̂_1, …`; shorter than the history when a
    /// projection annihilated the state.
    pub fn chain(&self) -> &[StateVector] {
        &self.chain
    }

    /// `‖π_k q̂_{k-1}‖²` for each chain step taken.
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    /// `q̂_0 ⊗ … ⊗ q̂_{n-1}`, absent for a truncated chain.
    pub fn tensor(&self) -> Option<&StateVector> {
        self.tensor.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.tensor.is_none()
    }
}

fn check_same_shape(a: &HomogeneousHistory, b: &HomogeneousHistory) -> Result<()> {
    if a.support != b.support {
        return Err(Error::Support(format!(
            "supports {:?} and {:?} differ",
            a.support.times, b.support.times
        )));
    }
    if a.factorization() != b.factorization() {
        return Err(Error::Support(format!(
            "factor dimensions {:?} and {:?} differ",
            a.factorization().factor_dims(),
            b.factorization().factor_dims()
        )));
    }
    Ok(())
}

fn check_disjoint_family(branches: &[HomogeneousHistory]) -> Result<()> {
    if branches.is_empty() {
        return Err(Error::EmptyTensor);
    }
    for (i, a) in branches.iter().enumerate() {
        for (j, b) in branches.iter().enumerate().skip(i + 1) {
            if !are_disjoint(a, b)? {
                return Err(Error::Disjointness { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn sum_of_tensors(branches: &[HomogeneousHistory]) -> HistoryProjector {
    let first = &branches[0];
    let mut matrix = Matrix::zeros(first.factorization().total_dim());
    for b in branches {
        matrix = &matrix + hpo_projector(b).matrix();
    }
    HistoryProjector {
        factorization: first.factorization(),
        projector: Projector::from_trusted(matrix),
        form: ProjectorForm::DisjointSum,
    }
}

/// `⊗_k π_k`.
pub fn hpo_projector(history: &HomogeneousHistory) -> HistoryProjector {
    HistoryProjector {
        factorization: history.factorization(),
        projector: tensor_projectors(&history.projectors).expect("nonempty history"),
        form: ProjectorForm::PureTensor,
    }
}

/// `I - ⊗_k π_k`.
pub fn hpo_negation(history: &HomogeneousHistory) -> HistoryProjector {
    let pure = hpo_projector(history);
    HistoryProjector {
        factorization: pure.factorization,
        projector: pure.projector.complement(),
        form: ProjectorForm::Complement,
    }
}

/// Whether `(⊗_k π_k^a)(⊗_k π_k^b) = 0`.
pub fn are_disjoint(a: &HomogeneousHistory, b: &HomogeneousHistory) -> Result<bool> {
    check_same_shape(a, b)?;
    let product = hpo_projector(a).matrix().try_mul(hpo_projector(b).matrix())?;
    Ok(product.max_norm() <= DISJOINT_TOLERANCE)
}

/// `Σ_i ⊗_k π_k^i` for a pairwise disjoint family.
pub fn disjoint_or(branches: &[HomogeneousHistory]) -> Result<HistoryProjector> {
    check_disjoint_family(branches)?;
    Ok(sum_of_tensors(branches))
}

/// Whether `candidate` lies in the downset of the family: some branch
/// dominates it slot by slot.
pub fn downset_contains(candidate: &HomogeneousHistory, family: &[HomogeneousHistory]) -> Result<bool> {
    for branch in family {
        check_same_shape(candidate, branch)?;
        let mut dominated = true;
        for (big, small) in branch.projectors.iter().zip(&candidate.projectors) {
            if !big.dominates(small)? {
                dominated = false;
                break;
            }
        }
        if dominated {
            return Ok(true);
        }
    }
    Ok(false)
}

fn require_system_space(state: &StateVector, history: &HomogeneousHistory) -> Result<()> {
    state.require_normalized()?;
    for p in &history.projectors {
        if p.dim() != state.dim() {
            return Err(Error::Dimension {
                expected: state.dim(),
                found: p.dim(),
            });
        }
    }
    Ok(())
}

/// Normalized pseudo-projection `q̂_0 ⊗ … ⊗ q̂_{n-1}` with
/// `q̂_k = normalize(π_k q̂_{k-1})`.
pub fn pseudo_project(state: &StateVector, history: &HomogeneousHistory) -> Result<PseudoProjection> {
    require_system_space(state, history)?;
    let n = history.len();
    let mut chain = Vec::with_capacity(n);
    let mut survival = Vec::with_capacity(n - 1);
    chain.push(state.clone());
    for projector in &history.projectors[..n - 1] {
        let projected = projector.apply(chain.last().expect("nonempty"))?;
        let s = projected.norm_sqr();
        survival.push(s);
        if s < SURVIVAL_TOLERANCE {
            return Ok(PseudoProjection {
                chain,
                survival,
                tensor: None,
            });
        }
        chain.push(projected.normalized()?);
    }
    let (tensor, _) = tensor_vectors(&chain)?;
    Ok(PseudoProjection {
        chain,
        survival,
        tensor: Some(tensor),
    })
}

/// Squared norms of the unnormalized partial products `π_k ⋯ π_1 p`,
/// `k = 1..=n`, stopping early once one vanishes.
fn unnormalized_chain_norms(state: &StateVector, history: &HomogeneousHistory) -> Result<Vec<f64>> {
    let mut current = state.clone();
    let mut norms = Vec::with_capacity(history.len());
    for projector in &history.projectors {
        current = projector.apply(&current)?;
        let s = current.norm_sqr();
        norms.push(s);
        if s < SURVIVAL_TOLERANCE {
            break;
        }
    }
    Ok(norms)
}

/// Probability of a homogeneous history on the initial state.
pub fn history_probability(state: &StateVector, history: &HomogeneousHistory, convention: Convention) -> Result<f64> {
    match convention {
        Convention::Lueders => {
            let pseudo = pseudo_project(state, history)?;
            if pseudo.is_truncated() {
                return Ok(0.0);
            }
            let last = pseudo.chain.last().expect("nonempty");
            let final_step = history.projectors[history.len() - 1].apply(last)?.norm_sqr();
            let p = pseudo.survival.iter().product::<f64>() * final_step;
            Ok(if p < SURVIVAL_TOLERANCE { 0.0 } else { p.min(1.0) })
        }
        Convention::Literal => {
            require_system_space(state, history)?;
            let norms = unnormalized_chain_norms(state, history)?;
            if norms.len() < history.len() || norms.last().is_some_and(|&s| s < SURVIVAL_TOLERANCE) {
                return Ok(0.0);
            }
            Ok(norms.iter().product::<f64>().min(1.0))
        }
    }
}

/// Sum of the branch probabilities, each branch with its own pseudo-projector.
pub fn inhomogeneous_probability(
    state: &StateVector,
    history: &InhomogeneousHistory,
    convention: Convention,
) -> Result<f64> {
    check_disjoint_family(&history.branches)?;
    let mut total = 0.0;
    for branch in &history.branches {
        total += history_probability(state, branch, convention)?;
    }
    Ok(total)
}

/// Deterministic outcome of the history at contextual value `λ`: the greedy
/// dyadic rule applied to the history probability.
pub fn history_hms_outcome(
    state: &StateVector,
    history: &HomogeneousHistory,
    lambda: u32,
    convention: Convention,
) -> Result<HistoryOutcome> {
    let p = FixedProbability::from_f64(history_probability(state, history, convention)?)?;
    Ok(if DyadicRule::Greedy.outcome(p, lambda)?.is_alpha() {
        HistoryOutcome::Affirmed
    } else {
        HistoryOutcome::Denied
    })
}

/// The determined post-measurement states `(q̂_1, …, q̂_n)` when the history
/// is affirmed; `None` when it is denied, as no trajectory is determined then.
pub fn trajectory(
    state: &StateVector,
    history: &HomogeneousHistory,
    outcome: HistoryOutcome,
) -> Result<Option<Vec<StateVector>>> {
    require_system_space(state, history)?;
    if !outcome.is_affirmed() {
        return Ok(None);
    }
    let mut states = Vec::with_capacity(history.len());
    let mut current = state.clone();
    for projector in &history.projectors {
        let projected = projector.apply(&current)?;
        if projected.norm_sqr() < SURVIVAL_TOLERANCE {
            return Err(Error::Infeasible);
        }
        current = projected.normalized()?;
        states.push(current.clone());
    }
    Ok(Some(states))
}

/// Slotwise `U_k π_k U_k†`.
pub fn conjugate_history(history: &HomogeneousHistory, unitaries: &[UnitaryMap]) -> Result<HomogeneousHistory> {
    if unitaries.len() != history.len() {
        return Err(Error::Dimension {
            expected: history.len(),
            found: unitaries.len(),
        });
    }
    let projectors = history
        .projectors
        .iter()
        .zip(unitaries)
        .map(|(p, u)| p.conjugate(u))
        .collect::<Result<Vec<_>>>()?;
    HomogeneousHistory::new(history.support.clone(), projectors)
}
