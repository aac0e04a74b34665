//! Idioms: a chord inventory with a first-order transition matrix.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::chord::{Chord, ChordTransition, PitchClass};
use crate::error::Error;
use crate::matrix::TransitionMatrix;

pub const C_MAJOR_PRESET: &str = "c-major-artificial";
pub const FSHARP_MAJOR_PRESET: &str = "fsharp-major-artificial";

#[derive(Clone, Debug, PartialEq)]
pub struct Idiom {
    name: String,
    tonic: PitchClass,
    chords: Vec<Chord>,
    matrix: TransitionMatrix,
}

impl Idiom {
    pub fn new(
        name: impl Into<String>,
        tonic: PitchClass,
        chords: Vec<Chord>,
        matrix: TransitionMatrix,
    ) -> Result<Self, Error> {
        if chords.is_empty() {
            return Err(Error::EmptyInventory);
        }
        for (i, chord) in chords.iter().enumerate() {
            if chords[..i].contains(chord) {
                return Err(Error::DuplicateChord(chord.to_string()));
            }
        }
        if matrix.len() != chords.len() {
            return Err(Error::MatrixShape {
                rows: matrix.len(),
                cols: matrix.len(),
                expected: chords.len(),
            });
        }
        Ok(Idiom {
            name: name.into(),
            tonic,
            chords,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tonic(&self) -> PitchClass {
        self.tonic
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn index_of(&self, chord: Chord) -> Option<usize> {
        self.chords.iter().position(|&c| c == chord)
    }

    pub fn contains(&self, chord: Chord) -> bool {
        self.chords.contains(&chord)
    }

    pub fn probability(&self, transition: ChordTransition) -> f64 {
        match (self.index_of(transition.from()), self.index_of(transition.to())) {
            (Some(i), Some(j)) => self.matrix.get(i, j),
            _ => 0.0,
        }
    }

    /// Transitions with nonzero probability, in row-major matrix order.
    pub fn transitions(&self) -> impl Iterator<Item = (ChordTransition, f64)> + '_ {
        self.matrix.nonzero().map(move |(i, j, p)| {
            let t = ChordTransition::new(self.chords[i], self.chords[j])
                .expect("zero diagonal guarantees distinct chords");
            (t, p)
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Every chord and the tonic moved by `semitones`; matrix layout kept.
    pub fn transpose(&self, semitones: i64) -> Idiom {
        Idiom {
            name: self.name.clone(),
            tonic: self.tonic.transpose(semitones),
            chords: self.chords.iter().map(|c| c.transpose(semitones)).collect(),
            matrix: self.matrix.clone(),
        }
    }

    /// The same idiom with chords in canonical (root, type) order.
    pub fn canonicalized(&self) -> Idiom {
        let mut perm: Vec<usize> = (0..self.chords.len()).collect();
        perm.sort_by_key(|&i| self.chords[i]);
        Idiom {
            name: self.name.clone(),
            tonic: self.tonic,
            chords: perm.iter().map(|&i| self.chords[i]).collect(),
            matrix: self.matrix.permuted(&perm),
        }
    }

    /// Total order on idiom content: name, tonic, then the canonicalized
    /// chords and matrix. Independent of inventory order.
    pub fn canonical_cmp(&self, other: &Idiom) -> Ordering {
        self.name
            .cmp(&other.name)
            .then_with(|| self.tonic.cmp(&other.tonic))
            .then_with(|| {
                let (a, b) = (self.canonicalized(), other.canonicalized());
                a.chords.cmp(&b.chords).then_with(|| {
                    let cells = |m: &TransitionMatrix| {
                        m.rows().flat_map(|r| r.iter().copied()).collect::<Vec<f64>>()
                    };
                    let (x, y) = (cells(&a.matrix), cells(&b.matrix));
                    x.iter()
                        .zip(&y)
                        .map(|(p, q)| p.total_cmp(q))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
            })
    }
}

/// Trains a first-order model from chord-symbol sequences.
///
/// Adjacent identical chords are skipped. The inventory is every chord
/// observed, in canonical order; rows with no outgoing count stay zero.
pub fn train_idiom<S: AsRef<str>>(
    name: impl Into<String>,
    tonic: PitchClass,
    sequences: &[Vec<S>],
) -> Result<Idiom, Error> {
    let mut parsed: Vec<Vec<Chord>> = Vec::with_capacity(sequences.len());
    for (sequence, symbols) in sequences.iter().enumerate() {
        let mut chords = Vec::with_capacity(symbols.len());
        for (position, symbol) in symbols.iter().enumerate() {
            let symbol = symbol.as_ref();
            let chord = symbol.parse::<Chord>().map_err(|source| Error::Parse {
                sequence,
                position,
                symbol: symbol.to_string(),
                source,
            })?;
            chords.push(chord);
        }
        parsed.push(chords);
    }

    let mut index: BTreeMap<Chord, usize> = BTreeMap::new();
    for chord in parsed.iter().flatten() {
        index.entry(*chord).or_insert(0);
    }
    let chords: Vec<Chord> = index.keys().copied().collect();
    for (i, slot) in index.values_mut().enumerate() {
        *slot = i;
    }

    let n = chords.len();
    let mut counts = vec![0.0f64; n * n];
    let mut counted = 0usize;
    for sequence in &parsed {
        for pair in sequence.windows(2) {
            if pair[0] == pair[1] {
                continue;
            }
            counts[index[&pair[0]] * n + index[&pair[1]]] += 1.0;
            counted += 1;
        }
    }
    if counted == 0 {
        return Err(Error::EmptyCorpus);
    }
    Idiom::new(name, tonic, chords, TransitionMatrix::normalized(n, counts)?)
}

/// Builds a hand-specified idiom. Repeated `(from, to)` weights accumulate;
/// each row is renormalised.
pub fn artificial_idiom(
    name: impl Into<String>,
    tonic: PitchClass,
    chords: Vec<Chord>,
    transitions: &[(usize, usize, f64)],
) -> Result<Idiom, Error> {
    let n = chords.len();
    let mut weights = vec![0.0f64; n * n];
    for &(from, to, weight) in transitions {
        for index in [from, to] {
            if index >= n {
                return Err(Error::UnknownIndex { index, len: n });
            }
        }
        if from == to {
            return Err(Error::SelfTransition(from));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::NegativeWeight {
                from,
                to,
                value: weight,
            });
        }
        weights[from * n + to] += weight;
    }
    let matrix = TransitionMatrix::normalized(n, weights)?;
    Idiom::new(name, tonic, chords, matrix)
}

/// C major over {C, F, G7} with every functional move (tonic to
/// subdominant or dominant, subdominant to tonic or dominant, dominant to
/// tonic) equally likely.
pub fn c_major_preset() -> Idiom {
    let c = Chord::from_parts(0, &[0, 4, 7]).unwrap();
    let f = Chord::from_parts(5, &[0, 4, 7]).unwrap();
    let g7 = Chord::from_parts(7, &[0, 4, 7, 10]).unwrap();
    artificial_idiom(
        C_MAJOR_PRESET,
        PitchClass::wrapping(0),
        vec![c, f, g7],
        &[(0, 1, 1.0), (0, 2, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 0, 1.0)],
    )
    .expect("preset is well formed")
}

/// The C major preset a tritone higher.
pub fn fsharp_major_preset() -> Idiom {
    c_major_preset().transpose(6).with_name(FSHARP_MAJOR_PRESET)
}

pub fn presets() -> Vec<Idiom> {
    vec![c_major_preset(), fsharp_major_preset()]
}
