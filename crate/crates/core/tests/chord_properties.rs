mod common;

use chordblend_core::{
    dic_vector, directed_interval_class, extract_features, Chord, ChordTransition, ChordType,
    PitchClass,
};
use common::*;
use proptest::prelude::*;

fn brute_dic(t: ChordTransition) -> [u32; 12] {
    let mut counts = [0u32; 12];
    for p in 0u8..12 {
        for q in 0u8..12 {
            if t.from().pitch_classes().contains(p) && t.to().pitch_classes().contains(q) {
                let mut d = (q as i32 - p as i32).rem_euclid(12);
                if d > 6 {
                    d -= 12;
                }
                counts[(d + 5) as usize] += 1;
            }
        }
    }
    counts
}

#[test]
fn interval_class_table() {
    for p in 0u8..12 {
        for q in 0u8..12 {
            let d = directed_interval_class(PitchClass::new(p).unwrap(), PitchClass::new(q).unwrap());
            let up = (q as i32 - p as i32).rem_euclid(12);
            let expected = if up > 6 { up - 12 } else { up };
            assert_eq!(d as i32, expected, "({p}, {q})");
        }
    }
}

proptest! {
    #[test]
    fn dic_total_is_product_of_sizes(t in transition_strategy()) {
        let dic = dic_vector(t);
        prop_assert_eq!(
            dic.total() as usize,
            t.from().pitch_classes().len() * t.to().pitch_classes().len()
        );
        prop_assert_eq!(*dic.counts(), brute_dic(t));
    }

    #[test]
    fn interval_class_antisymmetry(p in 0u8..12, q in 0u8..12) {
        let p = PitchClass::new(p).unwrap();
        let q = PitchClass::new(q).unwrap();
        let forward = directed_interval_class(p, q);
        let backward = directed_interval_class(q, p);
        if forward == 6 || backward == 6 {
            prop_assert_eq!(forward, 6);
            prop_assert_eq!(backward, 6);
        } else {
            prop_assert_eq!(forward, -backward);
        }
    }

    #[test]
    fn feature_invariants(t in transition_strategy(), tonic in 0u8..12) {
        let tonic = PitchClass::new(tonic).unwrap();
        let f = extract_features(t, tonic);
        prop_assert_eq!(f.sem_zero, f.asc_sem_zero || f.desc_sem_zero);
        prop_assert_eq!(f.sem_next_root, f.asc_sem_next_root || f.desc_sem_next_root);
        prop_assert_eq!(f.dic_has_0, f.dic_info.count(0) > 0);
        prop_assert_eq!(f.dic_has_1, f.dic_info.count(1) > 0);
        prop_assert_eq!(f.dic_has_minus_1, f.dic_info.count(-1) > 0);
        prop_assert_eq!(f.dic_has_2, f.dic_info.count(2) > 0);
        prop_assert_eq!(f.dic_has_minus_2, f.dic_info.count(-2) > 0);
        prop_assert_eq!(f.from_pcs, t.from().pitch_classes());
        for p in 0u8..12 {
            let rel = (p + 12 - tonic.value()) % 12;
            prop_assert_eq!(f.from_pcs.contains(p), f.from_rel_pcs.contains(rel));
            prop_assert_eq!(f.to_pcs.contains(p), f.to_rel_pcs.contains(rel));
        }
        // Predicates checked against their plain definitions.
        let to_root = t.to().root().value();
        let asc = f.from_pcs.iter().any(|p| (to_root + 12 - p) % 12 == 1);
        let desc = f.from_pcs.iter().any(|p| (p + 12 - to_root) % 12 == 1);
        prop_assert_eq!(f.asc_sem_next_root, asc);
        prop_assert_eq!(f.desc_sem_next_root, desc);
        prop_assert_eq!(
            f.fifth_root_relation,
            (t.from().root().value() as i32 - to_root as i32).rem_euclid(12) == 7
        );
    }

    #[test]
    fn features_ignore_interval_order(t in transition_strategy(), tonic in 0u8..12) {
        let reversed = |c: Chord| {
            let mut intervals: Vec<u8> = c.chord_type().intervals().collect();
            intervals.reverse();
            Chord::new(c.root(), ChordType::new(&intervals).unwrap())
        };
        let u = ChordTransition::new(reversed(t.from()), reversed(t.to())).unwrap();
        let tonic = PitchClass::new(tonic).unwrap();
        prop_assert_eq!(extract_features(t, tonic), extract_features(u, tonic));
    }

    #[test]
    fn transposition_covariance(t in transition_strategy(), tonic in 0u8..12, k in 0i64..12) {
        let tonic = PitchClass::new(tonic).unwrap();
        let a = extract_features(t, tonic);
        let b = extract_features(t.transpose(k), tonic.transpose(k));
        prop_assert_eq!(a.dic_info, b.dic_info);
        prop_assert_eq!(a.from_rel_pcs, b.from_rel_pcs);
        prop_assert_eq!(a.to_rel_pcs, b.to_rel_pcs);
        for feature in [
            a.dic_has_0, a.dic_has_1, a.dic_has_minus_1, a.dic_has_2, a.dic_has_minus_2,
            a.asc_sem_zero, a.desc_sem_zero, a.sem_zero, a.asc_sem_next_root,
            a.desc_sem_next_root, a.sem_next_root, a.fifth_root_relation,
        ].iter().zip([
            b.dic_has_0, b.dic_has_1, b.dic_has_minus_1, b.dic_has_2, b.dic_has_minus_2,
            b.asc_sem_zero, b.desc_sem_zero, b.sem_zero, b.asc_sem_next_root,
            b.desc_sem_next_root, b.sem_next_root, b.fifth_root_relation,
        ]) {
            prop_assert_eq!(*feature.0, feature.1);
        }
        prop_assert_eq!(b.from_root, a.from_root.transpose(k));
        prop_assert_eq!(b.to_root, a.to_root.transpose(k));
        prop_assert_eq!(b.from_pcs, a.from_pcs.rotate(k));
        prop_assert_eq!(b.to_pcs, a.to_pcs.rotate(k));
    }

    #[test]
    fn chord_string_round_trip(c in chord_strategy()) {
        let text = c.to_string();
        let parsed: Chord = text.parse().unwrap();
        prop_assert_eq!(parsed, c);
        prop_assert_eq!(parsed.to_string(), text);
    }
}

#[test]
fn relative_pcs_example() {
    let f = extract_features(
        ChordTransition::new("7:0,4,7,10".parse().unwrap(), "0:0,4,7".parse().unwrap()).unwrap(),
        PitchClass::new(0).unwrap(),
    );
    assert_eq!(f.from_rel_pcs, pcs(&[2, 5, 7, 11]));
    assert_eq!(f.to_rel_pcs, pcs(&[0, 4, 7]));
}
