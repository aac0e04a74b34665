#![allow(dead_code)]

use chordblend_core::{artificial_idiom, ArgumentSet, Chord, ChordTransition, ChordType, Idiom, PcSet, PitchClass};
use proptest::prelude::*;

pub fn chord_strategy() -> impl Strategy<Value = Chord> {
    // Up to five notes keeps DIC vectors varied without being dense.
    (0u8..12, prop::collection::btree_set(1u8..12, 0..5)).prop_map(|(root, rest)| {
        let mut intervals = vec![0u8];
        intervals.extend(rest);
        Chord::new(PitchClass::new(root).unwrap(), ChordType::new(&intervals).unwrap())
    })
}

pub fn transition_strategy() -> impl Strategy<Value = ChordTransition> {
    (chord_strategy(), chord_strategy())
        .prop_filter("distinct chords", |(a, b)| a != b)
        .prop_map(|(a, b)| ChordTransition::new(a, b).unwrap())
}

pub fn arguments_strategy() -> impl Strategy<Value = ArgumentSet> {
    (1u16..512).prop_map(|bits| {
        let mut answers = [false; 9];
        for (i, a) in answers.iter_mut().enumerate() {
            *a = bits & (1 << i) != 0;
        }
        ArgumentSet::from_answers(answers)
    })
}

/// Idioms of 2..=4 distinct chords with at least one transition.
pub fn idiom_strategy(name: &'static str) -> impl Strategy<Value = Idiom> {
    (
        prop::collection::vec(chord_strategy(), 2..=4),
        0u8..12,
        prop::collection::vec(0u8..4, 16),
    )
        .prop_filter_map("distinct chords with a transition", move |(chords, tonic, weights)| {
            let mut distinct: Vec<Chord> = Vec::new();
            for c in chords {
                if !distinct.contains(&c) {
                    distinct.push(c);
                }
            }
            let n = distinct.len();
            if n < 2 {
                return None;
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let w = weights[i * 4 + j];
                    if i != j && w > 0 {
                        edges.push((i, j, w as f64));
                    }
                }
            }
            if edges.is_empty() {
                return None;
            }
            artificial_idiom(name, PitchClass::new(tonic).unwrap(), distinct, &edges).ok()
        })
}

pub fn pcs(values: &[u8]) -> PcSet {
    values.iter().copied().collect()
}
