//! Chords, chord transitions and the transition feature set.
//!
//! A chord is a root pitch class plus a chord type: the set of intervals
//! above the root, always containing 0. Both pitch-class sets and chord
//! types are stored as 12-bit masks so every value here is `Copy`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::ChordError;

/// A pitch class in `0..12`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PitchClass(u8);

impl PitchClass {
    pub fn new(value: u8) -> Result<Self, ChordError> {
        if value < 12 {
            Ok(PitchClass(value))
        } else {
            Err(ChordError::PitchClassOutOfRange(value as i64))
        }
    }

    /// Reduces any integer modulo 12.
    pub fn wrapping(value: i64) -> Self {
        PitchClass(value.rem_euclid(12) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn transpose(self, semitones: i64) -> Self {
        PitchClass::wrapping(self.0 as i64 + semitones)
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of pitch classes, bit `p` set when pitch class `p` is a member.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PcSet(u16);

impl PcSet {
    pub const EMPTY: PcSet = PcSet(0);

    pub fn from_bits(bits: u16) -> Self {
        PcSet(bits & 0x0fff)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, value: u8) -> bool {
        value < 12 && self.0 & (1 << value) != 0
    }

    pub fn insert(&mut self, value: u8) {
        debug_assert!(value < 12);
        self.0 |= 1 << value;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: PcSet) -> PcSet {
        PcSet(self.0 & other.0)
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0u8..12).filter(move |&p| self.0 & (1 << p) != 0)
    }

    /// Rotates every member by `semitones` modulo 12.
    pub fn rotate(self, semitones: i64) -> PcSet {
        let shift = semitones.rem_euclid(12) as u32;
        let wide = (self.0 as u32) << shift;
        PcSet(((wide | (wide >> 12)) & 0x0fff) as u16)
    }
}

impl FromIterator<u8> for PcSet {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut set = PcSet::EMPTY;
        for p in iter {
            set.insert(p % 12);
        }
        set
    }
}

/// Intervals above a chord root. Always contains 0.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChordType(PcSet);

impl ChordType {
    /// Builds a chord type from intervals in any order.
    pub fn new(intervals: &[u8]) -> Result<Self, ChordError> {
        let mut set = PcSet::EMPTY;
        for &interval in intervals {
            if interval >= 12 {
                return Err(ChordError::IntervalOutOfRange(interval as i64));
            }
            if set.contains(interval) {
                return Err(ChordError::DuplicateInterval(interval));
            }
            set.insert(interval);
        }
        if !set.contains(0) {
            return Err(ChordError::MissingUnison);
        }
        Ok(ChordType(set))
    }

    pub fn from_set(set: PcSet) -> Result<Self, ChordError> {
        if set.contains(0) {
            Ok(ChordType(set))
        } else {
            Err(ChordError::MissingUnison)
        }
    }

    pub fn as_set(self) -> PcSet {
        self.0
    }

    pub fn intervals(self) -> impl Iterator<Item = u8> {
        self.0.iter()
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

impl Ord for ChordType {
    /// Lexicographic order of the ascending interval lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.intervals().cmp(other.intervals())
    }
}

impl PartialOrd for ChordType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A chord as a (root, type) pair.
///
/// Ordering is by root, then by chord type, which is the canonical chord
/// order used for idiom inventories.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    root: PitchClass,
    chord_type: ChordType,
}

impl Chord {
    pub fn new(root: PitchClass, chord_type: ChordType) -> Self {
        Chord { root, chord_type }
    }

    /// Shorthand for tests and presets: `Chord::from_parts(7, &[0, 4, 7, 10])`.
    pub fn from_parts(root: u8, intervals: &[u8]) -> Result<Self, ChordError> {
        Ok(Chord::new(PitchClass::new(root)?, ChordType::new(intervals)?))
    }

    pub fn root(self) -> PitchClass {
        self.root
    }

    pub fn chord_type(self) -> ChordType {
        self.chord_type
    }

    /// Absolute pitch classes `{(root + t) mod 12}`.
    pub fn pitch_classes(self) -> PcSet {
        self.chord_type.as_set().rotate(self.root.value() as i64)
    }

    pub fn transpose(self, semitones: i64) -> Self {
        Chord::new(self.root.transpose(semitones), self.chord_type)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        for (i, interval) in self.chord_type.intervals().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", interval)?;
        }
        Ok(())
    }
}

fn parse_small(text: &str, whole: &str) -> Result<u8, ChordError> {
    // Canonical decimal only: no sign, no padding, no leading zeros.
    let canonical = !text.is_empty()
        && text.bytes().all(|b| b.is_ascii_digit())
        && (text == "0" || !text.starts_with('0'))
        && text.len() <= 2;
    if !canonical {
        return Err(ChordError::Syntax(String::from(whole)));
    }
    text.parse::<u8>()
        .map_err(|_| ChordError::Syntax(String::from(whole)))
}

impl FromStr for Chord {
    type Err = ChordError;

    /// Parses the canonical `"<root>:<i1>,<i2>,..."` form. Intervals must
    /// be strictly ascending so that formatting reproduces the input.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (root, rest) = s
            .split_once(':')
            .ok_or_else(|| ChordError::Syntax(String::from(s)))?;
        let root = parse_small(root, s)?;
        let root = PitchClass::new(root)?;
        let mut intervals = Vec::new();
        for part in rest.split(',') {
            let interval = parse_small(part, s)?;
            if interval >= 12 {
                return Err(ChordError::IntervalOutOfRange(interval as i64));
            }
            if let Some(&last) = intervals.last() {
                if interval <= last {
                    return Err(ChordError::NotAscending(String::from(s)));
                }
            }
            intervals.push(interval);
        }
        Ok(Chord::new(root, ChordType::new(&intervals)?))
    }
}

/// An ordered pair of distinct chords.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordTransition {
    from: Chord,
    to: Chord,
}

impl ChordTransition {
    pub fn new(from: Chord, to: Chord) -> Result<Self, ChordError> {
        if from == to {
            return Err(ChordError::SelfTransition);
        }
        Ok(ChordTransition { from, to })
    }

    pub fn from(self) -> Chord {
        self.from
    }

    pub fn to(self) -> Chord {
        self.to
    }

    pub fn transpose(self, semitones: i64) -> Self {
        ChordTransition {
            from: self.from.transpose(semitones),
            to: self.to.transpose(semitones),
        }
    }

    /// `"<from>→<to>"`, the key used for tie-breaking and export.
    pub fn canonical_string(self) -> String {
        alloc::format!("{}", self)
    }
}

impl fmt::Display for ChordTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", self.from, self.to)
    }
}

impl FromStr for ChordTransition {
    type Err = ChordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (from, to) = s
            .split_once('→')
            .ok_or_else(|| ChordError::Syntax(String::from(s)))?;
        ChordTransition::new(from.parse()?, to.parse()?)
    }
}

/// Directed interval class from `p` to `q`, folded into `-5..=6`.
pub fn directed_interval_class(p: PitchClass, q: PitchClass) -> i8 {
    ((q.value() as i16 - p.value() as i16 + 5).rem_euclid(12) - 5) as i8
}

/// Histogram of directed interval classes over all pitch-class pairs of a
/// transition, indexed by `d + 5` for `d` in `-5..=6`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DicVector {
    counts: [u32; 12],
}

impl DicVector {
    pub const MIN_CLASS: i8 = -5;
    pub const MAX_CLASS: i8 = 6;

    pub fn from_counts(counts: [u32; 12]) -> Self {
        DicVector { counts }
    }

    pub fn count(&self, class: i8) -> u32 {
        if (Self::MIN_CLASS..=Self::MAX_CLASS).contains(&class) {
            self.counts[(class + 5) as usize]
        } else {
            0
        }
    }

    pub fn has(&self, class: i8) -> bool {
        self.count(class) > 0
    }

    pub fn counts(&self) -> &[u32; 12] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }
}

pub fn dic_vector(transition: ChordTransition) -> DicVector {
    let mut counts = [0u32; 12];
    for p in transition.from().pitch_classes().iter() {
        for q in transition.to().pitch_classes().iter() {
            let d = directed_interval_class(PitchClass(p), PitchClass(q));
            counts[(d + 5) as usize] += 1;
        }
    }
    DicVector { counts }
}

/// Names of the transition features, as they appear in argument mappings
/// and exported reports.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    FromRoot,
    ToRoot,
    FromType,
    ToType,
    FromPcs,
    ToPcs,
    FromRelPcs,
    ToRelPcs,
    DicInfo,
    DicHas0,
    DicHas1,
    DicHasMinus1,
    DicHas2,
    DicHasMinus2,
    AscSemZero,
    DescSemZero,
    SemZero,
    AscSemNextRoot,
    DescSemNextRoot,
    SemNextRoot,
    FifthRootRelation,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::FromRoot => "fromRoot",
            Feature::ToRoot => "toRoot",
            Feature::FromType => "fromType",
            Feature::ToType => "toType",
            Feature::FromPcs => "fromPCs",
            Feature::ToPcs => "toPCs",
            Feature::FromRelPcs => "fromRelPCs",
            Feature::ToRelPcs => "toRelPCs",
            Feature::DicInfo => "DICinfo",
            Feature::DicHas0 => "DIChas0",
            Feature::DicHas1 => "DIChas1",
            Feature::DicHasMinus1 => "DIChasMinus1",
            Feature::DicHas2 => "DIChas2",
            Feature::DicHasMinus2 => "DIChasMinus2",
            Feature::AscSemZero => "ascSemZero",
            Feature::DescSemZero => "descSemZero",
            Feature::SemZero => "semZero",
            Feature::AscSemNextRoot => "ascSemNextRoot",
            Feature::DescSemNextRoot => "descSemNextRoot",
            Feature::SemNextRoot => "semNextRoot",
            Feature::FifthRootRelation => "fifthRootRelation",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every feature of a transition, extracted relative to a tonic.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    pub from_root: PitchClass,
    pub to_root: PitchClass,
    pub from_type: ChordType,
    pub to_type: ChordType,
    pub from_pcs: PcSet,
    pub to_pcs: PcSet,
    pub from_rel_pcs: PcSet,
    pub to_rel_pcs: PcSet,
    pub dic_info: DicVector,
    pub dic_has_0: bool,
    pub dic_has_1: bool,
    pub dic_has_minus_1: bool,
    pub dic_has_2: bool,
    pub dic_has_minus_2: bool,
    pub asc_sem_zero: bool,
    pub desc_sem_zero: bool,
    pub sem_zero: bool,
    pub asc_sem_next_root: bool,
    pub desc_sem_next_root: bool,
    pub sem_next_root: bool,
    pub fifth_root_relation: bool,
}

impl FeatureVector {
    /// Value of a boolean feature, `None` for set- and vector-valued ones.
    pub fn flag(&self, feature: Feature) -> Option<bool> {
        Some(match feature {
            Feature::DicHas0 => self.dic_has_0,
            Feature::DicHas1 => self.dic_has_1,
            Feature::DicHasMinus1 => self.dic_has_minus_1,
            Feature::DicHas2 => self.dic_has_2,
            Feature::DicHasMinus2 => self.dic_has_minus_2,
            Feature::AscSemZero => self.asc_sem_zero,
            Feature::DescSemZero => self.desc_sem_zero,
            Feature::SemZero => self.sem_zero,
            Feature::AscSemNextRoot => self.asc_sem_next_root,
            Feature::DescSemNextRoot => self.desc_sem_next_root,
            Feature::SemNextRoot => self.sem_next_root,
            Feature::FifthRootRelation => self.fifth_root_relation,
            _ => return None,
        })
    }
}

pub fn extract_features(transition: ChordTransition, tonic: PitchClass) -> FeatureVector {
    let from = transition.from();
    let to = transition.to();
    let from_pcs = from.pitch_classes();
    let to_pcs = to.pitch_classes();
    let shift = -(tonic.value() as i64);
    let from_rel_pcs = from_pcs.rotate(shift);
    let to_rel_pcs = to_pcs.rotate(shift);
    let dic_info = dic_vector(transition);

    let to_root = to.root().value();
    let asc_sem_next_root = from_pcs.contains((to_root + 11) % 12);
    let desc_sem_next_root = from_pcs.contains((to_root + 1) % 12);
    let asc_sem_zero = from_rel_pcs.contains(11);
    let desc_sem_zero = from_rel_pcs.contains(1);

    FeatureVector {
        from_root: from.root(),
        to_root: to.root(),
        from_type: from.chord_type(),
        to_type: to.chord_type(),
        from_pcs,
        to_pcs,
        from_rel_pcs,
        to_rel_pcs,
        dic_info,
        dic_has_0: dic_info.has(0),
        dic_has_1: dic_info.has(1),
        dic_has_minus_1: dic_info.has(-1),
        dic_has_2: dic_info.has(2),
        dic_has_minus_2: dic_info.has(-2),
        asc_sem_zero,
        desc_sem_zero,
        sem_zero: asc_sem_zero || desc_sem_zero,
        asc_sem_next_root,
        desc_sem_next_root,
        sem_next_root: asc_sem_next_root || desc_sem_next_root,
        fifth_root_relation: (from.root().value() + 12 - to_root) % 12 == 7,
    }
}
