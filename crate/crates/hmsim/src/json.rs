//! JSON views of bound objects. Complex numbers are `[re, im]` pairs and
//! matrices are row-major lists of rows.

use hmsim_core::hilbert::{Matrix, StateVector};
use hmsim_core::Complex64;
use serde_json::{json, Value};

use crate::edl::Experiment;

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector(v: &StateVector) -> Value {
    Value::Array(v.amplitudes().iter().copied().map(complex).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        m.rows()
            .map(|row| Value::Array(row.iter().copied().map(complex).collect()))
            .collect(),
    )
}

pub fn vectors(vs: &[StateVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

/// The elaborated experiment, in declaration order.
pub fn experiment(ex: &Experiment) -> Value {
    let spaces: Vec<Value> = ex
        .spaces
        .iter()
        .map(|(name, s)| json!({ "name": name, "dim": s.dim }))
        .collect();
    let states: Vec<Value> = ex
        .states
        .iter()
        .map(|(name, s)| json!({ "name": name, "space": s.space, "amplitudes": vector(&s.vector) }))
        .collect();
    let projectors: Vec<Value> = ex
        .projectors
        .iter()
        .map(|(name, p)| {
            json!({
                "name": name,
                "space": p.space,
                "rank": p.projector.rank(),
                "matrix": matrix(p.projector.matrix()),
            })
        })
        .collect();
    let histories: Vec<Value> = ex
        .histories
        .iter()
        .map(|(name, h)| {
            json!({
                "name": name,
                "times": h.history.support().times(),
                "projectors": h.projectors,
            })
        })
        .collect();
    let orhistories: Vec<Value> = ex
        .orhistories
        .iter()
        .map(|(name, o)| json!({ "name": name, "branches": o.branches }))
        .collect();
    let warnings: Vec<Value> = ex
        .warnings
        .iter()
        .map(|w| json!({ "message": w.message, "line": w.pos.line, "column": w.pos.column }))
        .collect();
    json!({
        "spaces": spaces,
        "states": states,
        "projectors": projectors,
        "histories": histories,
        "orhistories": orhistories,
        "warnings": warnings,
    })
}
