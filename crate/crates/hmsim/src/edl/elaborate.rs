use std::fmt;

use hmsim_core::dichotomic::qubit_from_angles;
use hmsim_core::hilbert::{Projector, StateVector};
use hmsim_core::history::{HomogeneousHistory, InhomogeneousHistory, TemporalSupport};
use hmsim_core::{Complex64, Error as CoreError};
use indexmap::IndexMap;
use serde::Serialize;

use super::ast::*;

/// Largest accepted space dimension.
pub const MAX_DIM: u64 = 64;
/// Largest tensor dimension for which disjointness of branches is checked.
pub const MAX_TENSOR_DIM: usize = 256;
/// Renormalizing a state by more than this much is reported as a warning.
pub const RENORMALIZATION_WARNING: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElaborationErrorKind {
    DuplicateName,
    UnresolvedName,
    DimensionMismatch,
    InvalidValue,
    NonIncreasingTimes,
    NonDisjointBranches,
}

/// A semantic error, located at the offending declaration or reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElaborationError {
    pub kind: ElaborationErrorKind,
    pub message: String,
    pub pos: Pos,
}

impl fmt::Display for ElaborationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ElaborationError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub message: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpace {
    pub dim: usize,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub space: String,
    pub vector: StateVector,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundProjector {
    pub space: String,
    pub projector: Projector,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundHistory {
    /// Projector names, one per time.
    pub projectors: Vec<String>,
    pub history: HomogeneousHistory,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundOrHistory {
    pub branches: Vec<String>,
    pub history: InhomogeneousHistory,
    pub pos: Pos,
}

/// A fully resolved experiment, in declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Experiment {
    pub spaces: IndexMap<String, BoundSpace>,
    pub states: IndexMap<String, BoundState>,
    pub projectors: IndexMap<String, BoundProjector>,
    pub histories: IndexMap<String, BoundHistory>,
    pub orhistories: IndexMap<String, BoundOrHistory>,
    pub warnings: Vec<Warning>,
}

fn fail<T>(kind: ElaborationErrorKind, message: String, pos: Pos) -> Result<T, ElaborationError> {
    Err(ElaborationError { kind, message, pos })
}

fn unresolved<T>(what: &str, name: &Ident) -> Result<T, ElaborationError> {
    fail(
        ElaborationErrorKind::UnresolvedName,
        format!("unknown {what} '{}'", name.name),
        name.pos,
    )
}

fn lookup<'m, V>(map: &'m IndexMap<String, V>, what: &str, name: &Ident) -> Result<&'m V, ElaborationError> {
    match map.get(&name.name) {
        Some(v) => Ok(v),
        None => unresolved(what, name),
    }
}

fn core_error(err: CoreError, pos: Pos) -> ElaborationError {
    let kind = match err {
        CoreError::Dimension { .. } | CoreError::Support(_) => ElaborationErrorKind::DimensionMismatch,
        CoreError::Disjointness { .. } => ElaborationErrorKind::NonDisjointBranches,
        _ => ElaborationErrorKind::InvalidValue,
    };
    ElaborationError {
        kind,
        message: err.to_string(),
        pos,
    }
}

impl Experiment {
    fn check_fresh(&self, stmt: &Statement) -> Result<(), ElaborationError> {
        let name = stmt.name();
        let (taken, what) = match stmt {
            Statement::Space(_) => (self.spaces.get(&name.name).map(|s| s.pos), "space"),
            Statement::State(_) => (self.states.get(&name.name).map(|s| s.pos), "state"),
            Statement::Proj(_) => (self.projectors.get(&name.name).map(|s| s.pos), "projector"),
            Statement::History(_) | Statement::OrHistory(_) => (
                self.histories
                    .get(&name.name)
                    .map(|h| h.pos)
                    .or_else(|| self.orhistories.get(&name.name).map(|h| h.pos)),
                "history",
            ),
        };
        match taken {
            Some(first) => fail(
                ElaborationErrorKind::DuplicateName,
                format!("{what} '{}' is already declared at {first}", name.name),
                name.pos,
            ),
            None => Ok(()),
        }
    }

    fn space(&mut self, d: &SpaceDecl) -> Result<(), ElaborationError> {
        if !(1..=MAX_DIM).contains(&d.dim) {
            return fail(
                ElaborationErrorKind::InvalidValue,
                format!("dimension {} is outside 1..={MAX_DIM}", d.dim),
                d.pos,
            );
        }
        self.spaces.insert(
            d.name.name.clone(),
            BoundSpace {
                dim: d.dim as usize,
                pos: d.pos,
            },
        );
        Ok(())
    }

    fn state(&mut self, d: &StateDecl) -> Result<(), ElaborationError> {
        let dim = lookup(&self.spaces, "space", &d.space)?.dim;
        let raw = match &d.init {
            StateInit::Amplitudes(amps) => {
                if amps.len() != dim {
                    return fail(
                        ElaborationErrorKind::DimensionMismatch,
                        format!(
                            "state '{}' has {} amplitudes but space '{}' has dimension {dim}",
                            d.name.name,
                            amps.len(),
                            d.space.name
                        ),
                        d.pos,
                    );
                }
                StateVector::new(amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
                    .map_err(|e| core_error(e, d.pos))?
            }
            StateInit::Bloch { theta, phi } => {
                if dim != 2 {
                    return fail(
                        ElaborationErrorKind::DimensionMismatch,
                        format!(
                            "bloch state '{}' needs a space of dimension 2, found {dim}",
                            d.name.name
                        ),
                        d.pos,
                    );
                }
                qubit_from_angles(*theta, *phi)
            }
        };
        let norm = raw.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return fail(
                ElaborationErrorKind::InvalidValue,
                format!("state '{}' has norm {norm} and cannot be normalized", d.name.name),
                d.pos,
            );
        }
        let vector = raw.normalized().map_err(|e| core_error(e, d.pos))?;
        if (norm - 1.0).abs() > RENORMALIZATION_WARNING {
            self.warnings.push(Warning {
                message: format!("state '{}' renormalized from norm {norm:?}", d.name.name),
                pos: d.pos,
            });
        }
        self.states.insert(
            d.name.name.clone(),
            BoundState {
                space: d.space.name.clone(),
                vector,
                pos: d.pos,
            },
        );
        Ok(())
    }

    fn proj(&mut self, d: &ProjDecl) -> Result<(), ElaborationError> {
        let dim = lookup(&self.spaces, "space", &d.space)?.dim;
        let same_space = |space: &str, what: &str, r: &Ident| {
            if space == d.space.name {
                Ok(())
            } else {
                fail(
                    ElaborationErrorKind::DimensionMismatch,
                    format!("{what} '{}' lives in space '{space}', not '{}'", r.name, d.space.name),
                    r.pos,
                )
            }
        };
        let projector = match &d.def {
            ProjDef::Span(indices) => {
                if let Some(&bad) = indices.iter().find(|&&i| i >= dim as u64) {
                    return fail(
                        ElaborationErrorKind::DimensionMismatch,
                        format!(
                            "basis index {bad} out of range for space '{}' of dimension {dim}",
                            d.space.name
                        ),
                        d.pos,
                    );
                }
                let mut unique: Vec<usize> = indices.iter().map(|&i| i as usize).collect();
                unique.sort_unstable();
                unique.dedup();
                Projector::basis_span(dim, &unique).map_err(|e| core_error(e, d.pos))?
            }
            ProjDef::Ketbra(s) => {
                let state = lookup(&self.states, "state", s)?;
                same_space(&state.space, "state", s)?;
                Projector::ketbra(&state.vector).map_err(|e| core_error(e, d.pos))?
            }
            ProjDef::Not(p) => {
                let other = lookup(&self.projectors, "projector", p)?;
                same_space(&other.space, "projector", p)?;
                other.projector.complement()
            }
        };
        self.projectors.insert(
            d.name.name.clone(),
            BoundProjector {
                space: d.space.name.clone(),
                projector,
                pos: d.pos,
            },
        );
        Ok(())
    }

    fn history(&mut self, d: &HistoryDecl) -> Result<(), ElaborationError> {
        let mut projectors = Vec::with_capacity(d.entries.len());
        for e in &d.entries {
            projectors.push(lookup(&self.projectors, "projector", &e.proj)?.projector.clone());
        }
        for pair in d.entries.windows(2) {
            if pair[1].time <= pair[0].time {
                return fail(
                    ElaborationErrorKind::NonIncreasingTimes,
                    format!(
                        "history '{}' times must increase strictly, found {:?} after {:?}",
                        d.name.name, pair[1].time, pair[0].time
                    ),
                    d.pos,
                );
            }
        }
        let support =
            TemporalSupport::new(d.entries.iter().map(|e| e.time).collect()).map_err(|e| core_error(e, d.pos))?;
        let history = HomogeneousHistory::new(support, projectors).map_err(|e| core_error(e, d.pos))?;
        self.histories.insert(
            d.name.name.clone(),
            BoundHistory {
                projectors: d.entries.iter().map(|e| e.proj.name.clone()).collect(),
                history,
                pos: d.pos,
            },
        );
        Ok(())
    }

    fn orhistory(&mut self, d: &OrHistoryDecl) -> Result<(), ElaborationError> {
        let mut branches = Vec::with_capacity(d.branches.len());
        for b in &d.branches {
            if self.orhistories.contains_key(&b.name) {
                return fail(
                    ElaborationErrorKind::UnresolvedName,
                    format!("branch '{}' is an orhistory; branches must be histories", b.name),
                    b.pos,
                );
            }
            branches.push(lookup(&self.histories, "history", b)?.history.clone());
        }
        let first = &branches[0];
        for (b, h) in d.branches.iter().zip(&branches).skip(1) {
            if h.support() != first.support() || h.factorization() != first.factorization() {
                return fail(
                    ElaborationErrorKind::DimensionMismatch,
                    format!(
                        "branches '{}' and '{}' differ in times or spaces",
                        d.branches[0].name, b.name
                    ),
                    d.pos,
                );
            }
        }
        let tensor_dim = first.factorization().total_dim();
        if tensor_dim > MAX_TENSOR_DIM {
            return fail(
                ElaborationErrorKind::InvalidValue,
                format!("history tensor dimension {tensor_dim} exceeds {MAX_TENSOR_DIM}"),
                d.pos,
            );
        }
        let history = InhomogeneousHistory::new(branches).map_err(|e| match e {
            CoreError::Disjointness { first, second } => ElaborationError {
                kind: ElaborationErrorKind::NonDisjointBranches,
                message: format!(
                    "orhistory '{}': branches '{}' and '{}' are not disjoint",
                    d.name.name, d.branches[first].name, d.branches[second].name
                ),
                pos: d.pos,
            },
            other => core_error(other, d.pos),
        })?;
        self.orhistories.insert(
            d.name.name.clone(),
            BoundOrHistory {
                branches: d.branches.iter().map(|b| b.name.clone()).collect(),
                history,
                pos: d.pos,
            },
        );
        Ok(())
    }
}

/// Resolves every declaration in order; names must be declared before use.
pub fn elaborate(spec: &ExperimentSpec) -> Result<Experiment, ElaborationError> {
    let mut ex = Experiment::default();
    for stmt in &spec.statements {
        ex.check_fresh(stmt)?;
        match stmt {
            Statement::Space(d) => ex.space(d)?,
            Statement::State(d) => ex.state(d)?,
            Statement::Proj(d) => ex.proj(d)?,
            Statement::History(d) => ex.history(d)?,
            Statement::OrHistory(d) => ex.orhistory(d)?,
        }
    }
    Ok(ex)
}
