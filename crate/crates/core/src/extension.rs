//! The extended transition matrix joining two idioms through blended
//! transitions, its sector layout and the bridge paths it opens.
//!
//! Chords are laid out as idiom-1 chords, then idiom-2 chords not already
//! in idiom 1, then external chords introduced by blends. Cells fall into
//! nine sectors:
//!
//! | tag   | from            | to              |
//! |-------|-----------------|-----------------|
//! | `I1`  | idiom 1         | idiom 1         |
//! | `I2`  | idiom 2         | idiom 2         |
//! | `A12` | idiom 1         | idiom 2 only    |
//! | `A21` | idiom 2         | idiom 1 only    |
//! | `B1X` | idiom 1         | external        |
//! | `B2X` | idiom 2 only    | external        |
//! | `BX1` | external        | idiom 1         |
//! | `BX2` | external        | idiom 2 only    |
//! | `C`   | external        | external        |
//!
//! A chord shared by both idioms counts as an idiom-1 chord wherever the
//! table has to pick one side.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::blend::BlendPool;
use crate::chord::{Chord, ChordTransition};
use crate::error::Error;
use crate::idiom::Idiom;
use crate::matrix::TransitionMatrix;

pub const DEFAULT_BRIDGE_MASS: f64 = 0.2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    I1,
    I2,
    A12,
    A21,
    B1X,
    BX1,
    B2X,
    BX2,
    C,
}

impl Sector {
    pub const ALL: [Sector; 9] = [
        Sector::I1,
        Sector::I2,
        Sector::A12,
        Sector::A21,
        Sector::B1X,
        Sector::BX1,
        Sector::B2X,
        Sector::BX2,
        Sector::C,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Sector::I1 => "I1",
            Sector::I2 => "I2",
            Sector::A12 => "A12",
            Sector::A21 => "A21",
            Sector::B1X => "B1X",
            Sector::BX1 => "BX1",
            Sector::B2X => "B2X",
            Sector::BX2 => "BX2",
            Sector::C => "C",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Sector {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sector::ALL.into_iter().find(|t| t.tag() == s).ok_or(())
    }
}

/// Which chord inventories a chord of the extended matrix belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Idiom1,
    Idiom2,
    Both,
    External,
}

impl Membership {
    fn of(chord: Chord, set1: &[Chord], set2: &[Chord]) -> Membership {
        match (set1.contains(&chord), set2.contains(&chord)) {
            (true, true) => Membership::Both,
            (true, false) => Membership::Idiom1,
            (false, true) => Membership::Idiom2,
            (false, false) => Membership::External,
        }
    }

    fn in1(self) -> bool {
        matches!(self, Membership::Idiom1 | Membership::Both)
    }

    fn in2(self) -> bool {
        matches!(self, Membership::Idiom2 | Membership::Both)
    }

    fn external(self) -> bool {
        self == Membership::External
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Idiom1 => "idiom1",
            Membership::Idiom2 => "idiom2",
            Membership::Both => "both",
            Membership::External => "external",
        }
    }
}

impl FromStr for Membership {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Membership::Idiom1,
            Membership::Idiom2,
            Membership::Both,
            Membership::External,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or(())
    }
}

fn sector_of(from: Membership, to: Membership) -> Sector {
    if from.in1() && to.in1() {
        Sector::I1
    } else if from.in2() && to.in2() {
        Sector::I2
    } else if from.in1() && to.in2() {
        Sector::A12
    } else if from.in2() && to.in1() {
        Sector::A21
    } else if from.external() && to.external() {
        Sector::C
    } else if from.external() {
        if to.in1() {
            Sector::BX1
        } else {
            Sector::BX2
        }
    } else if from.in1() {
        Sector::B1X
    } else {
        Sector::B2X
    }
}

/// Sector of a transition given the two chord inventories.
pub fn classify_sector(transition: ChordTransition, set1: &[Chord], set2: &[Chord]) -> Sector {
    sector_of(
        Membership::of(transition.from(), set1, set2),
        Membership::of(transition.to(), set1, set2),
    )
}

/// Where the probability of a cell came from.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum CellOrigin {
    None,
    Idiom1,
    Idiom2,
    /// Supported by more than one source: both idioms, or an original
    /// transition that a blend also proposed.
    Both,
    /// A blended transition, with the rate that priced it.
    Blend(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedMatrix {
    chords: Vec<Chord>,
    membership: Vec<Membership>,
    matrix: TransitionMatrix,
    sectors: Vec<Sector>,
    origins: Vec<CellOrigin>,
}

impl ExtendedMatrix {
    /// Reassembles a matrix from exported parts, checking that sectors
    /// agree with membership and that no sector-C cell carries mass.
    pub fn from_parts(
        chords: Vec<Chord>,
        membership: Vec<Membership>,
        matrix: TransitionMatrix,
        origins: Vec<CellOrigin>,
    ) -> Result<Self, Error> {
        let n = chords.len();
        if membership.len() != n || matrix.len() != n || origins.len() != n * n {
            return Err(Error::MatrixShape {
                rows: matrix.len(),
                cols: if n == 0 { 0 } else { origins.len() / n.max(1) },
                expected: n,
            });
        }
        let mut sectors = Vec::with_capacity(n * n);
        for &from in &membership {
            for &to in &membership {
                sectors.push(sector_of(from, to));
            }
        }
        let em = ExtendedMatrix {
            chords,
            membership,
            matrix,
            sectors,
            origins,
        };
        if let Some((row, col, value)) = em
            .matrix
            .nonzero()
            .find(|&(i, j, _)| em.sector(i, j) == Sector::C)
        {
            return Err(Error::SectorCProbability { row, col, value });
        }
        Ok(em)
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn membership(&self) -> &[Membership] {
        &self.membership
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn sector(&self, row: usize, col: usize) -> Sector {
        self.sectors[row * self.len() + col]
    }

    pub fn origin(&self, row: usize, col: usize) -> CellOrigin {
        self.origins[row * self.len() + col]
    }

    pub fn index_of(&self, chord: Chord) -> Option<usize> {
        self.chords.iter().position(|&c| c == chord)
    }

    /// Rate of a blend-origin cell.
    pub fn blend_rate(&self, row: usize, col: usize) -> Option<f64> {
        match self.origin(row, col) {
            CellOrigin::Blend(rate) => Some(rate),
            _ => None,
        }
    }
}

/// Combines two idioms and their blend pool into one transition matrix.
///
/// Sector-C and zero-rate blends are dropped. In a row that gains blend
/// cells, the blends share `bridge_mass` in proportion to their rates and
/// the original entries are scaled by `1 - bridge_mass`; a row without
/// original mass gives the blends the whole unit. Chords present in both
/// idioms average their two rows.
pub fn build_extended(
    idiom1: &Idiom,
    idiom2: &Idiom,
    pool: &BlendPool,
    bridge_mass: f64,
) -> Result<ExtendedMatrix, Error> {
    if !(bridge_mass > 0.0 && bridge_mass < 1.0) {
        return Err(Error::InvalidBridgeMass(bridge_mass));
    }
    let set1 = idiom1.chords();
    let set2 = idiom2.chords();

    let kept: Vec<(ChordTransition, f64)> = pool
        .entries()
        .iter()
        .filter(|e| e.score.rate > 0.0 && classify_sector(e.transition, set1, set2) != Sector::C)
        .map(|e| (e.transition, e.score.rate))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyPool);
    }

    let mut chords: Vec<Chord> = set1.to_vec();
    chords.extend(set2.iter().filter(|c| !set1.contains(c)));
    let mut external: Vec<Chord> = kept
        .iter()
        .flat_map(|(t, _)| [t.from(), t.to()])
        .filter(|c| !set1.contains(c) && !set2.contains(c))
        .collect();
    external.sort();
    external.dedup();
    chords.extend(external);

    let n = chords.len();
    let membership: Vec<Membership> =
        chords.iter().map(|&c| Membership::of(c, set1, set2)).collect();
    let index = |chord: Chord| chords.iter().position(|&c| c == chord).unwrap();

    let mut probs = vec![0.0f64; n * n];
    let mut origins = vec![CellOrigin::None; n * n];
    for (row, &chord) in chords.iter().enumerate() {
        let source1 = idiom1.index_of(chord).filter(|&i| !idiom1.matrix().is_absorbing(i));
        let source2 = idiom2.index_of(chord).filter(|&i| !idiom2.matrix().is_absorbing(i));
        let weight = if source1.is_some() && source2.is_some() {
            0.5
        } else {
            1.0
        };
        for (idiom, source, tag) in [
            (idiom1, source1, CellOrigin::Idiom1),
            (idiom2, source2, CellOrigin::Idiom2),
        ] {
            let Some(i) = source else { continue };
            for (j, &p) in idiom.matrix().row(i).iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let cell = row * n + index(idiom.chords()[j]);
                probs[cell] += weight * p;
                origins[cell] = match origins[cell] {
                    CellOrigin::None => tag,
                    _ => CellOrigin::Both,
                };
            }
        }
    }

    // Blend cells per row, in pool order.
    let mut blend_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(t, rate) in &kept {
        let (row, col) = (index(t.from()), index(t.to()));
        let cell = row * n + col;
        if probs[cell] > 0.0 {
            origins[cell] = CellOrigin::Both;
        } else {
            blend_rows[row].push((col, rate));
        }
    }
    for (row, blends) in blend_rows.iter().enumerate() {
        if blends.is_empty() {
            continue;
        }
        let cells = &mut probs[row * n..(row + 1) * n];
        let original: f64 = cells.iter().sum();
        let mass = if original > 0.0 {
            for p in cells.iter_mut() {
                *p *= 1.0 - bridge_mass;
            }
            bridge_mass
        } else {
            1.0
        };
        let total_rate: f64 = blends.iter().map(|&(_, r)| r).sum();
        for &(col, rate) in blends {
            cells[col] = mass * (rate / total_rate);
            origins[row * n + col] = CellOrigin::Blend(rate);
        }
    }

    let matrix = TransitionMatrix::from_flat(n, probs)?;
    ExtendedMatrix::from_parts(chords, membership, matrix, origins)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    OneToTwo,
    TwoToOne,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BridgeKind {
    /// One A-sector transition.
    Direct,
    /// Two B-sector transitions through one external chord.
    Chained,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BridgePath {
    pub kind: BridgeKind,
    pub from: Chord,
    pub intermediate: Option<Chord>,
    pub to: Chord,
    pub combined_rate: f64,
}

impl BridgePath {
    pub fn hops(&self) -> usize {
        match self.kind {
            BridgeKind::Direct => 1,
            BridgeKind::Chained => 2,
        }
    }
}

/// Every direct and one-intermediate route from one idiom to the other,
/// best combined rate first. A chain's rate is the product of its hops'.
pub fn bridge_paths(em: &ExtendedMatrix, direction: Direction) -> Vec<BridgePath> {
    let (direct, out_hop, in_hop) = match direction {
        Direction::OneToTwo => (Sector::A12, Sector::B1X, Sector::BX2),
        Direction::TwoToOne => (Sector::A21, Sector::B2X, Sector::BX1),
    };
    let n = em.len();
    let live = |i: usize, j: usize, sector: Sector| {
        em.sector(i, j) == sector && em.matrix().get(i, j) > 0.0
    };
    let rate = |i: usize, j: usize| em.blend_rate(i, j).unwrap_or(0.0);

    let mut paths = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if live(i, j, direct) {
                paths.push(BridgePath {
                    kind: BridgeKind::Direct,
                    from: em.chords()[i],
                    intermediate: None,
                    to: em.chords()[j],
                    combined_rate: rate(i, j),
                });
            }
        }
    }
    for x in (0..n).filter(|&x| em.membership()[x] == Membership::External) {
        for i in (0..n).filter(|&i| live(i, x, out_hop)) {
            for j in (0..n).filter(|&j| live(x, j, in_hop)) {
                paths.push(BridgePath {
                    kind: BridgeKind::Chained,
                    from: em.chords()[i],
                    intermediate: Some(em.chords()[x]),
                    to: em.chords()[j],
                    combined_rate: rate(i, x) * rate(x, j),
                });
            }
        }
    }
    paths.sort_by(|a, b| {
        b.combined_rate
            .total_cmp(&a.combined_rate)
            .then_with(|| a.kind.cmp(&b.kind))
            .then_with(|| (a.from, a.intermediate, a.to).cmp(&(b.from, b.intermediate, b.to)))
    });
    paths
}
