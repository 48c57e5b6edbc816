#[path = "support/corpus.rs"]
mod corpus;
#[path = "support/fuzz.rs"]
mod fuzz;

use hmsim::edl::ast::*;
use hmsim::edl::parse_source;
use proptest::prelude::*;

#[test]
fn byte_fuzz_never_crashes() {
    let seeds: Vec<Vec<u8>> = corpus::sources().iter().map(|p| std::fs::read(p).unwrap()).collect();
    let (crashes, misplaced) = fuzz::run(100_000, &seeds, 0);
    assert_eq!((crashes, misplaced), (0, 0));
}

#[test]
fn corpus_round_trips() {
    for path in corpus::sources() {
        let source = std::fs::read_to_string(&path).unwrap();
        if let Ok(spec) = parse_source(&source) {
            let again = parse_source(&spec.to_string()).unwrap();
            assert_eq!(
                again.without_positions(),
                spec.without_positions(),
                "{}",
                path.display()
            );
        }
    }
}

fn ident() -> impl Strategy<Value = Ident> {
    "[A-Za-z_][A-Za-z0-9_]{0,6}"
        .prop_filter("keywords are reserved", |s| {
            !hmsim::edl::lexer::KEYWORDS.contains(&s.as_str())
        })
        .prop_map(|name| Ident {
            name,
            pos: Pos::default(),
        })
}

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        (-100i64..100).prop_map(|i| i as f64),
    ]
}

fn statement() -> impl Strategy<Value = Statement> {
    let p = Pos::default();
    prop_oneof![
        (ident(), 0u64..1000).prop_map(move |(name, dim)| Statement::Space(SpaceDecl { pos: p, name, dim })),
        (ident(), ident(), prop::collection::vec((real(), real()), 1..4)).prop_map(move |(name, space, a)| {
            Statement::State(StateDecl {
                pos: p,
                name,
                space,
                init: StateInit::Amplitudes(a),
            })
        }),
        (ident(), ident(), real(), real()).prop_map(move |(name, space, theta, phi)| {
            Statement::State(StateDecl {
                pos: p,
                name,
                space,
                init: StateInit::Bloch { theta, phi },
            })
        }),
        (ident(), ident(), prop::collection::vec(0u64..50, 1..4)).prop_map(move |(name, space, v)| {
            Statement::Proj(ProjDecl {
                pos: p,
                name,
                space,
                def: ProjDef::Span(v),
            })
        }),
        (ident(), ident(), ident(), any::<bool>()).prop_map(move |(name, space, r, ket)| {
            let def = if ket { ProjDef::Ketbra(r) } else { ProjDef::Not(r) };
            Statement::Proj(ProjDecl {
                pos: p,
                name,
                space,
                def,
            })
        }),
        (ident(), prop::collection::vec((real(), ident()), 1..4)).prop_map(move |(name, e)| {
            let entries = e.into_iter().map(|(time, proj)| HistoryEntry { time, proj }).collect();
            Statement::History(HistoryDecl { pos: p, name, entries })
        }),
        (ident(), prop::collection::vec(ident(), 1..4))
            .prop_map(move |(name, branches)| Statement::OrHistory(OrHistoryDecl { pos: p, name, branches })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pretty_print_reparses(statements in prop::collection::vec(statement(), 0..8)) {
        let spec = ExperimentSpec { statements };
        let printed = spec.to_string();
        let parsed = parse_source(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(parsed.without_positions(), spec);
    }
}
