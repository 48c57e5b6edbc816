//! Byte-level fuzzing of the EDL front end.

#![allow(dead_code)]

use std::panic::{catch_unwind, AssertUnwindSafe};

use hmsim::edl::{elaborate, parse_source, Pos};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const ALPHABET: &[u8] = b"spacedimtrbloch_jkPQH0123456789.eE+-i;=[](),:# \n\t@";

/// Whether `pos` lies in the text, allowing the position just past the end.
fn within(source: &str, pos: Pos) -> bool {
    let lines: Vec<&str> = source.split('\n').collect();
    pos.line >= 1 && pos.line <= lines.len() && pos.column >= 1 && pos.column <= lines[pos.line - 1].chars().count() + 1
}

fn mutate(rng: &mut ChaCha8Rng, seed: &[u8]) -> Vec<u8> {
    let mut bytes = seed.to_vec();
    for _ in 0..1 + rng.next_u32() % 4 {
        let at = if bytes.is_empty() {
            0
        } else {
            rng.next_u32() as usize % bytes.len()
        };
        match rng.next_u32() % 3 {
            0 if !bytes.is_empty() => {
                bytes.remove(at);
            }
            1 => bytes.insert(at, ALPHABET[rng.next_u32() as usize % ALPHABET.len()]),
            _ => bytes.insert(at, rng.next_u32() as u8),
        }
    }
    bytes
}

fn random_bytes(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let len = rng.next_u32() as usize % 96;
    let from_alphabet = rng.next_u32().is_multiple_of(2);
    (0..len)
        .map(|_| {
            if from_alphabet {
                ALPHABET[rng.next_u32() as usize % ALPHABET.len()]
            } else {
                rng.next_u32() as u8
            }
        })
        .collect()
}

/// Runs `cases` inputs through parsing and elaboration. Returns the number
/// of crashes and of errors reported outside the source text.
pub fn run(cases: usize, seeds: &[Vec<u8>], seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut crashes, mut misplaced) = (0, 0);
    for i in 0..cases {
        let bytes = if i % 2 == 0 && !seeds.is_empty() {
            let base = &seeds[rng.next_u32() as usize % seeds.len()];
            mutate(&mut rng, base)
        } else {
            random_bytes(&mut rng)
        };
        let source = String::from_utf8_lossy(&bytes).into_owned();
        let outcome = catch_unwind(AssertUnwindSafe(|| match parse_source(&source) {
            Err(e) => Some(e.pos()),
            Ok(spec) => elaborate(&spec).err().map(|e| e.pos),
        }));
        match outcome {
            Err(_) => crashes += 1,
            Ok(Some(pos)) if !within(&source, pos) => misplaced += 1,
            Ok(_) => {}
        }
    }
    (crashes, misplaced)
}
