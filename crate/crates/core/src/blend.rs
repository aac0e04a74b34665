//! Candidate generation by cross-combining two input transitions, scoring
//! against both inputs, and the pool of best blends.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::argument::{association, prefer, ArgumentSet, ScoredBlend};
use crate::chord::{extract_features, Chord, ChordTransition, FeatureVector, PitchClass};
use crate::error::Error;
use crate::idiom::Idiom;

pub const DEFAULT_POOL_CAPACITY: usize = 100;

/// Which input supplied a component of a blended transition.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Input1,
    Input2,
    /// Both inputs carry the same value.
    Both,
}

impl Origin {
    fn of<T: PartialEq>(value: T, first: T, second: T) -> Origin {
        match (value == first, value == second) {
            (true, true) => Origin::Both,
            (true, false) => Origin::Input1,
            _ => Origin::Input2,
        }
    }

    pub fn swapped(self) -> Origin {
        match self {
            Origin::Input1 => Origin::Input2,
            Origin::Input2 => Origin::Input1,
            Origin::Both => Origin::Both,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Input1 => "input1",
            Origin::Input2 => "input2",
            Origin::Both => "both",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub input1: ChordTransition,
    pub input2: ChordTransition,
    pub from_root: Origin,
    pub from_type: Origin,
    pub to_root: Origin,
    pub to_type: Origin,
}

impl Provenance {
    pub fn new(blend: ChordTransition, input1: ChordTransition, input2: ChordTransition) -> Self {
        Provenance {
            input1,
            input2,
            from_root: Origin::of(blend.from().root(), input1.from().root(), input2.from().root()),
            from_type: Origin::of(
                blend.from().chord_type(),
                input1.from().chord_type(),
                input2.from().chord_type(),
            ),
            to_root: Origin::of(blend.to().root(), input1.to().root(), input2.to().root()),
            to_type: Origin::of(
                blend.to().chord_type(),
                input1.to().chord_type(),
                input2.to().chord_type(),
            ),
        }
    }

    /// True when components come from different inputs.
    pub fn is_crossed(&self) -> bool {
        let parts = [self.from_root, self.from_type, self.to_root, self.to_type];
        parts.contains(&Origin::Input1) && parts.contains(&Origin::Input2)
    }

    fn unordered_inputs(&self) -> (ChordTransition, ChordTransition) {
        if self.input1 <= self.input2 {
            (self.input1, self.input2)
        } else {
            (self.input2, self.input1)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlendCandidate {
    pub transition: ChordTransition,
    pub key: String,
    pub provenance: Provenance,
    pub features_vs_input1: FeatureVector,
    pub features_vs_input2: FeatureVector,
    pub score: ScoredBlend,
    /// Whether idiom 1 precedes idiom 2 in `Idiom::canonical_cmp` order.
    pub idiom1_leads: bool,
}

impl BlendCandidate {
    /// Decision order of `prefer`, extended so two derivations of the same
    /// transition are still strictly ordered: the unordered input pair
    /// first, then the input taken from the canonically smaller idiom.
    /// Both tie-breaks mirror exactly when the idioms are swapped.
    pub fn rank_cmp(&self, other: &BlendCandidate) -> Ordering {
        prefer(&self.score, &self.key, &other.score, &other.key)
            .then_with(|| {
                self.provenance
                    .unordered_inputs()
                    .cmp(&other.provenance.unordered_inputs())
            })
            .then_with(|| self.lead_input().cmp(&other.lead_input()))
    }

    fn lead_input(&self) -> ChordTransition {
        if self.idiom1_leads {
            self.provenance.input1
        } else {
            self.provenance.input2
        }
    }
}

/// All root/type cross-combinations of two transitions, without self
/// transitions, first occurrence order.
pub fn generate_candidates(t1: ChordTransition, t2: ChordTransition) -> Vec<ChordTransition> {
    let combos = |a: Chord, b: Chord| {
        let mut chords: Vec<Chord> = Vec::with_capacity(4);
        for root in [a.root(), b.root()] {
            for chord_type in [a.chord_type(), b.chord_type()] {
                let chord = Chord::new(root, chord_type);
                if !chords.contains(&chord) {
                    chords.push(chord);
                }
            }
        }
        chords
    };
    let froms = combos(t1.from(), t2.from());
    let tos = combos(t1.to(), t2.to());
    let mut out = Vec::with_capacity(froms.len() * tos.len());
    for &from in &froms {
        for &to in &tos {
            if let Ok(t) = ChordTransition::new(from, to) {
                out.push(t);
            }
        }
    }
    out
}

/// Scores a blend against both inputs, each in its own idiom's tonic.
pub fn score_candidate(
    blend: ChordTransition,
    t1: ChordTransition,
    tonic1: PitchClass,
    t2: ChordTransition,
    tonic2: PitchClass,
    arguments: ArgumentSet,
) -> BlendCandidate {
    let input1 = extract_features(t1, tonic1);
    let input2 = extract_features(t2, tonic2);
    score_with_inputs(blend, t1, &input1, tonic1, t2, &input2, tonic2, arguments)
}

#[allow(clippy::too_many_arguments)]
fn score_with_inputs(
    blend: ChordTransition,
    t1: ChordTransition,
    input1: &FeatureVector,
    tonic1: PitchClass,
    t2: ChordTransition,
    input2: &FeatureVector,
    tonic2: PitchClass,
    arguments: ArgumentSet,
) -> BlendCandidate {
    debug_assert!(!arguments.is_empty());
    let features_vs_input1 = extract_features(blend, tonic1);
    let features_vs_input2 = extract_features(blend, tonic2);
    let assoc1 = association(&features_vs_input1, input1, arguments);
    let assoc2 = association(&features_vs_input2, input2, arguments);
    BlendCandidate {
        transition: blend,
        key: blend.canonical_string(),
        provenance: Provenance::new(blend, t1, t2),
        features_vs_input1,
        features_vs_input2,
        score: ScoredBlend::from_associations(assoc1, assoc2),
        idiom1_leads: true,
    }
}

/// The best blends found so far, at most `capacity`, best first, one entry
/// per transition.
#[derive(Clone, Debug, PartialEq)]
pub struct BlendPool {
    capacity: usize,
    entries: Vec<BlendCandidate>,
}

impl BlendPool {
    pub fn new(capacity: usize) -> Result<Self, Error> {
        if capacity == 0 {
            return Err(Error::InvalidCapacity);
        }
        Ok(BlendPool {
            capacity,
            entries: Vec::new(),
        })
    }

    /// Keeps the best derivation of each transition, then the top
    /// `capacity` transitions.
    pub fn from_candidates(
        capacity: usize,
        candidates: impl IntoIterator<Item = BlendCandidate>,
    ) -> Result<Self, Error> {
        let mut pool = BlendPool::new(capacity)?;
        pool.absorb(candidates);
        Ok(pool)
    }

    fn absorb(&mut self, candidates: impl IntoIterator<Item = BlendCandidate>) {
        let mut best: BTreeMap<ChordTransition, BlendCandidate> = BTreeMap::new();
        for candidate in self.entries.drain(..).chain(candidates) {
            match best.get(&candidate.transition) {
                Some(existing) if existing.rank_cmp(&candidate) != Ordering::Greater => {}
                _ => {
                    best.insert(candidate.transition, candidate);
                }
            }
        }
        let mut entries: Vec<BlendCandidate> = best.into_values().collect();
        entries.sort_by(BlendCandidate::rank_cmp);
        entries.truncate(self.capacity);
        self.entries = entries;
    }

    /// Union of two pools, truncated to `self`'s capacity. For equal
    /// capacities the result does not depend on merge order or grouping.
    pub fn merge(mut self, other: BlendPool) -> BlendPool {
        self.absorb(other.entries);
        self
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn entries(&self) -> &[BlendCandidate] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn head(&self) -> Option<&BlendCandidate> {
        self.entries.first()
    }
}

fn check_idiom(idiom: &Idiom) -> Result<(), Error> {
    if idiom.matrix().has_transitions() {
        Ok(())
    } else {
        Err(Error::NoTransitions(String::from(idiom.name())))
    }
}

/// Blends one transition of the first idiom with every transition of the
/// second. Partial pools from different `input1` values merge into the
/// same result as `blend_idioms`.
pub fn blend_with_idiom(
    input1: ChordTransition,
    idiom1: &Idiom,
    idiom2: &Idiom,
    arguments: ArgumentSet,
    capacity: usize,
) -> Result<BlendPool, Error> {
    arguments.require_non_empty()?;
    let idiom1_leads = idiom1.canonical_cmp(idiom2).is_le();
    let (tonic1, tonic2) = (idiom1.tonic(), idiom2.tonic());
    let features1 = extract_features(input1, tonic1);
    let mut candidates = Vec::new();
    for (input2, _) in idiom2.transitions() {
        let features2 = extract_features(input2, tonic2);
        for blend in generate_candidates(input1, input2) {
            let mut candidate = score_with_inputs(
                blend, input1, &features1, tonic1, input2, &features2, tonic2, arguments,
            );
            candidate.idiom1_leads = idiom1_leads;
            candidates.push(candidate);
        }
    }
    BlendPool::from_candidates(capacity, candidates)
}

/// Blends every transition of `idiom1` with every transition of `idiom2`
/// and keeps the best `capacity` blends.
pub fn blend_idioms(
    idiom1: &Idiom,
    idiom2: &Idiom,
    arguments: ArgumentSet,
    capacity: usize,
) -> Result<BlendPool, Error> {
    validate_blend_inputs(idiom1, idiom2, arguments, capacity)?;
    let mut pool = BlendPool::new(capacity)?;
    for (input1, _) in idiom1.transitions() {
        pool = pool.merge(blend_with_idiom(
            input1,
            idiom1,
            idiom2,
            arguments,
            capacity,
        )?);
    }
    Ok(pool)
}

/// Checks shared by serial and parallel drivers.
pub fn validate_blend_inputs(
    idiom1: &Idiom,
    idiom2: &Idiom,
    arguments: ArgumentSet,
    capacity: usize,
) -> Result<(), Error> {
    arguments.require_non_empty()?;
    check_idiom(idiom1)?;
    check_idiom(idiom2)?;
    BlendPool::new(capacity).map(|_| ())
}
