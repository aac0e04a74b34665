mod common;

use std::collections::BTreeSet;

use chordblend_core::{
    blend_idioms, bridge_paths, build_extended, BridgeKind, CellOrigin, Chord, Direction, Error,
    Idiom, Sector,
};
use common::*;
use proptest::prelude::*;

fn check_matrix(em: &chordblend_core::ExtendedMatrix) -> Result<(), TestCaseError> {
    for i in 0..em.len() {
        prop_assert_eq!(em.matrix().get(i, i), 0.0);
        let s = em.matrix().row_sum(i);
        prop_assert!(s == 0.0 || (s - 1.0).abs() <= 1e-9, "row {} sums to {}", i, s);
        for j in 0..em.len() {
            if em.sector(i, j) == Sector::C {
                prop_assert_eq!(em.matrix().get(i, j), 0.0);
            }
            if let CellOrigin::Blend(r) = em.origin(i, j) {
                prop_assert!(r > 0.0);
                prop_assert!(em.matrix().get(i, j) > 0.0);
            }
        }
    }
    Ok(())
}

/// Walks from idiom 1 to idiom 2 found by enumerating chord triples. A
/// direct hop out of a shared chord is already an idiom 2 move, so direct
/// bridges start at chords only idiom 1 knows.
fn brute_paths(em: &chordblend_core::ExtendedMatrix, i1: &Idiom, i2: &Idiom) -> BTreeSet<(Chord, Option<Chord>, Chord)> {
    let in1 = |c: Chord| i1.contains(c);
    let only1 = |c: Chord| i1.contains(c) && !i2.contains(c);
    let only2 = |c: Chord| i2.contains(c) && !i1.contains(c);
    let external = |c: Chord| !i1.contains(c) && !i2.contains(c);
    let p = |a: usize, b: usize| em.matrix().get(a, b) > 0.0;
    let chords = em.chords();
    let mut out = BTreeSet::new();
    for a in 0..chords.len() {
        for b in 0..chords.len() {
            if only1(chords[a]) && only2(chords[b]) && p(a, b) {
                out.insert((chords[a], None, chords[b]));
            }
            for x in 0..chords.len() {
                if in1(chords[a]) && external(chords[x]) && only2(chords[b]) && p(a, x) && p(x, b) {
                    out.insert((chords[a], Some(chords[x]), chords[b]));
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extended_matrix_invariants(
        i1 in idiom_strategy("one"),
        i2 in idiom_strategy("two"),
        args in arguments_strategy(),
        capacity in 1usize..60,
        mass in 0.01f64..0.99,
    ) {
        let pool = blend_idioms(&i1, &i2, args, capacity).unwrap();
        let em = match build_extended(&i1, &i2, &pool, mass) {
            Ok(em) => em,
            Err(Error::EmptyPool) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        check_matrix(&em)?;

        // Original ratios survive the bridge scaling in rows of idiom 1
        // chords that are not shared with idiom 2.
        for (r, &chord) in i1.chords().iter().enumerate() {
            if i2.contains(chord) {
                continue;
            }
            let row = i1.matrix().row(r);
            let scale: Vec<f64> = row
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(c, &p)| em.matrix().get(r, em.index_of(i1.chords()[c]).unwrap()) / p)
                .collect();
            for s in &scale {
                prop_assert!((s - scale[0]).abs() <= 1e-9);
                prop_assert!((s - 1.0).abs() <= 1e-9 || (s - (1.0 - mass)).abs() <= 1e-9);
            }
        }

        let found: BTreeSet<_> = bridge_paths(&em, Direction::OneToTwo)
            .into_iter()
            .map(|p| (p.from, p.intermediate, p.to))
            .collect();
        prop_assert_eq!(found, brute_paths(&em, &i1, &i2));
    }

    #[test]
    fn larger_pools_never_remove_bridges(
        i1 in idiom_strategy("one"),
        i2 in idiom_strategy("two"),
        args in arguments_strategy(),
        small in 1usize..20,
        extra in 1usize..40,
    ) {
        let paths = |capacity| {
            let pool = blend_idioms(&i1, &i2, args, capacity).unwrap();
            match build_extended(&i1, &i2, &pool, 0.2) {
                Ok(em) => bridge_paths(&em, Direction::OneToTwo)
                    .into_iter()
                    .map(|p| (p.from, p.intermediate, p.to))
                    .collect::<BTreeSet<_>>(),
                Err(_) => BTreeSet::new(),
            }
        };
        let before = paths(small);
        let after = paths(small + extra);
        prop_assert!(before.is_subset(&after));
    }
}

#[test]
fn bridge_paths_are_sorted_by_rate() {
    let c = chordblend_core::idiom::c_major_preset();
    let fs = chordblend_core::idiom::fsharp_major_preset();
    let pool = blend_idioms(&c, &fs, chordblend_core::ArgumentSet::all(), 100).unwrap();
    let em = build_extended(&c, &fs, &pool, 0.2).unwrap();
    let paths = bridge_paths(&em, Direction::OneToTwo);
    assert!(!paths.is_empty());
    for w in paths.windows(2) {
        assert!(w[0].combined_rate >= w[1].combined_rate);
    }
    for p in &paths {
        match p.kind {
            BridgeKind::Direct => assert!(p.intermediate.is_none()),
            BridgeKind::Chained => assert!(p.intermediate.is_some()),
        }
    }
}
