use std::fmt;

use serde::Serialize;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "stmt", rename_all = "lowercase")]
pub enum Statement {
    Space(SpaceDecl),
    State(StateDecl),
    Proj(ProjDecl),
    History(HistoryDecl),
    OrHistory(OrHistoryDecl),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceDecl {
    pub pos: Pos,
    pub name: Ident,
    pub dim: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDecl {
    pub pos: Pos,
    pub name: Ident,
    pub space: Ident,
    pub init: StateInit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateInit {
    /// `(re, im)` pairs.
    Amplitudes(Vec<(f64, f64)>),
    /// Polar and azimuthal angles in radians.
    Bloch { theta: f64, phi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjDecl {
    pub pos: Pos,
    pub name: Ident,
    pub space: Ident,
    pub def: ProjDef,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjDef {
    /// Computational basis indices, 0-based.
    Span(Vec<u64>),
    Ketbra(Ident),
    Not(Ident),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryEntry {
    pub time: f64,
    pub proj: Ident,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryDecl {
    pub pos: Pos,
    pub name: Ident,
    pub entries: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrHistoryDecl {
    pub pos: Pos,
    pub name: Ident,
    pub branches: Vec<Ident>,
}

impl Statement {
    pub fn pos(&self) -> Pos {
        match self {
            Statement::Space(d) => d.pos,
            Statement::State(d) => d.pos,
            Statement::Proj(d) => d.pos,
            Statement::History(d) => d.pos,
            Statement::OrHistory(d) => d.pos,
        }
    }

    pub fn name(&self) -> &Ident {
        match self {
            Statement::Space(d) => &d.name,
            Statement::State(d) => &d.name,
            Statement::Proj(d) => &d.name,
            Statement::History(d) => &d.name,
            Statement::OrHistory(d) => &d.name,
        }
    }
}

impl ExperimentSpec {
    pub fn spaces(&self) -> impl Iterator<Item = &SpaceDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Space(d) => Some(d),
            _ => None,
        })
    }

    pub fn states(&self) -> impl Iterator<Item = &StateDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::State(d) => Some(d),
            _ => None,
        })
    }

    pub fn projectors(&self) -> impl Iterator<Item = &ProjDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Proj(d) => Some(d),
            _ => None,
        })
    }

    pub fn histories(&self) -> impl Iterator<Item = &HistoryDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::History(d) => Some(d),
            _ => None,
        })
    }

    pub fn orhistories(&self) -> impl Iterator<Item = &OrHistoryDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::OrHistory(d) => Some(d),
            _ => None,
        })
    }

    /// The same tree with every position reset, for structural comparison.
    pub fn without_positions(&self) -> ExperimentSpec {
        fn id(i: &Ident) -> Ident {
            Ident {
                name: i.name.clone(),
                pos: Pos::default(),
            }
        }
        let p = Pos::default();
        let statements = self
            .statements
            .iter()
            .map(|s| match s {
                Statement::Space(d) => Statement::Space(SpaceDecl {
                    pos: p,
                    name: id(&d.name),
                    dim: d.dim,
                }),
                Statement::State(d) => Statement::State(StateDecl {
                    pos: p,
                    name: id(&d.name),
                    space: id(&d.space),
                    init: d.init.clone(),
                }),
                Statement::Proj(d) => Statement::Proj(ProjDecl {
                    pos: p,
                    name: id(&d.name),
                    space: id(&d.space),
                    def: match &d.def {
                        ProjDef::Span(v) => ProjDef::Span(v.clone()),
                        ProjDef::Ketbra(i) => ProjDef::Ketbra(id(i)),
                        ProjDef::Not(i) => ProjDef::Not(id(i)),
                    },
                }),
                Statement::History(d) => Statement::History(HistoryDecl {
                    pos: p,
                    name: id(&d.name),
                    entries: d
                        .entries
                        .iter()
                        .map(|e| HistoryEntry {
                            time: e.time,
                            proj: id(&e.proj),
                        })
                        .collect(),
                }),
                Statement::OrHistory(d) => Statement::OrHistory(OrHistoryDecl {
                    pos: p,
                    name: id(&d.name),
                    branches: d.branches.iter().map(id).collect(),
                }),
            })
            .collect();
        ExperimentSpec { statements }
    }
}

/// Shortest round-trip text of a real, always lexed as FLOAT.
fn real(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn complex(re: f64, im: f64) -> String {
    if im == 0.0 && im.is_sign_positive() {
        real(re)
    } else if im.is_sign_negative() {
        format!("{}{}i", real(re), real(im))
    } else {
        format!("{}+{}i", real(re), real(im))
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

/// Canonical source text; parsing it gives back the same tree up to positions.
impl fmt::Display for ExperimentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.statements {
            match stmt {
                Statement::Space(d) => writeln!(f, "space {} dim {};", d.name.name, d.dim)?,
                Statement::State(d) => {
                    let init = match &d.init {
                        StateInit::Amplitudes(a) => format!("[{}]", join(a, |&(re, im)| complex(re, im))),
                        StateInit::Bloch { theta, phi } => format!("bloch({}, {})", real(*theta), real(*phi)),
                    };
                    writeln!(f, "state {} in {} = {};", d.name.name, d.space.name, init)?
                }
                Statement::Proj(d) => {
                    let def = match &d.def {
                        ProjDef::Span(v) => format!("span [{}]", join(v, u64::to_string)),
                        ProjDef::Ketbra(i) => format!("ketbra {}", i.name),
                        ProjDef::Not(i) => format!("not {}", i.name),
                    };
                    writeln!(f, "proj {} on {} = {};", d.name.name, d.space.name, def)?
                }
                Statement::History(d) => writeln!(
                    f,
                    "history {} = [{}];",
                    d.name.name,
                    join(&d.entries, |e| format!("{}: {}", real(e.time), e.proj.name))
                )?,
                Statement::OrHistory(d) => writeln!(
                    f,
                    "orhistory {} = or [{}];",
                    d.name.name,
                    join(&d.branches, |i| i.name.clone())
                )?,
            }
        }
        Ok(())
    }
}
