//! User arguments over transition features and the blend scoring chain:
//! per-argument value, association, asymmetry, rate and preference.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::chord::{DicVector, Feature, FeatureVector};
use crate::error::Error;

/// The nine questions a user can answer to select important features.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    Q7,
    Q8,
    Q9,
}

impl Question {
    pub const ALL: [Question; 9] = [
        Question::Q1,
        Question::Q2,
        Question::Q3,
        Question::Q4,
        Question::Q5,
        Question::Q6,
        Question::Q7,
        Question::Q8,
        Question::Q9,
    ];

    /// Zero-based position in `ALL`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn id(self) -> &'static str {
        ["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9"][self.index()]
    }

    pub fn text(self) -> &'static str {
        match self {
            Question::Q1 => "Are roots and types of chords important?",
            Question::Q2 => "Are individual pitch classes of chords important?",
            Question::Q3 => "Are repeating pitch classes in transitions important?",
            Question::Q4 => "Are semitone steps in transitions important?",
            Question::Q5 => "Are tone steps in transitions important?",
            Question::Q6 => "Are the intervalic contents of transitions important?",
            Question::Q7 => "Are semitone motions to the tonic important?",
            Question::Q8 => "Are semitones to the second chord's root important?",
            Question::Q9 => "Are motions of the chord roots by 5th important?",
        }
    }

    /// The features this question argues over.
    pub fn features(self) -> &'static [Feature] {
        use Feature::*;
        match self {
            Question::Q1 => &[FromRoot, ToRoot, FromType, ToType],
            Question::Q2 => &[FromRelPcs, ToRelPcs],
            Question::Q3 => &[DicHas0],
            Question::Q4 => &[DicHas1, DicHasMinus1],
            Question::Q5 => &[DicHas2, DicHasMinus2],
            Question::Q6 => &[DicInfo],
            Question::Q7 => &[AscSemZero, DescSemZero, SemZero],
            Question::Q8 => &[AscSemNextRoot, DescSemNextRoot, SemNextRoot],
            Question::Q9 => &[FifthRootRelation],
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Question {
    type Err = ();

    /// Accepts `Q1`..`Q9` in either case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('Q').or_else(|| s.strip_prefix('q')).ok_or(())?;
        match digits {
            "1" => Ok(Question::Q1),
            "2" => Ok(Question::Q2),
            "3" => Ok(Question::Q3),
            "4" => Ok(Question::Q4),
            "5" => Ok(Question::Q5),
            "6" => Ok(Question::Q6),
            "7" => Ok(Question::Q7),
            "8" => Ok(Question::Q8),
            "9" => Ok(Question::Q9),
            _ => Err(()),
        }
    }
}

/// An answered question, bound to its feature subset.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Argument {
    question: Question,
}

impl Argument {
    pub fn new(question: Question) -> Self {
        Argument { question }
    }

    pub fn question(self) -> Question {
        self.question
    }
}

/// The feature subset an argument refers to.
pub fn psi(argument: Argument) -> &'static [Feature] {
    argument.question.features()
}

/// A set of arguments with distinct questions, iterated in question order.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArgumentSet(u16);

impl ArgumentSet {
    pub fn empty() -> Self {
        ArgumentSet(0)
    }

    pub fn all() -> Self {
        ArgumentSet(0x1ff)
    }

    /// Builds the set from nine yes/no answers, `answers[0]` being Q1.
    pub fn from_answers(answers: [bool; 9]) -> Self {
        let mut set = ArgumentSet::empty();
        for (question, &on) in Question::ALL.iter().zip(answers.iter()) {
            if on {
                set.insert(*question);
            }
        }
        set
    }

    pub fn answers(self) -> [bool; 9] {
        let mut answers = [false; 9];
        for q in self.questions() {
            answers[q.index()] = true;
        }
        answers
    }

    pub fn insert(&mut self, question: Question) {
        self.0 |= 1 << question.index();
    }

    pub fn contains(self, question: Question) -> bool {
        self.0 & (1 << question.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn questions(self) -> impl Iterator<Item = Question> {
        Question::ALL.into_iter().filter(move |q| self.contains(*q))
    }

    pub fn arguments(self) -> impl Iterator<Item = Argument> {
        self.questions().map(Argument::new)
    }

    /// Fails with `NoArguments` when empty.
    pub fn require_non_empty(self) -> Result<Self, Error> {
        if self.is_empty() {
            Err(Error::NoArguments)
        } else {
            Ok(self)
        }
    }
}

impl FromIterator<Question> for ArgumentSet {
    fn from_iter<I: IntoIterator<Item = Question>>(iter: I) -> Self {
        let mut set = ArgumentSet::empty();
        for q in iter {
            set.insert(q);
        }
        set
    }
}

/// Pearson correlation of two DIC histograms.
///
/// If either histogram is constant the correlation is 1 for equal inputs
/// and 0 otherwise.
pub fn dic_correlation(x: &DicVector, y: &DicVector) -> f64 {
    if x == y {
        return 1.0;
    }
    let xs = x.counts().map(|c| c as f64);
    let ys = y.counts().map(|c| c as f64);
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (a, b) in xs.iter().zip(ys.iter()) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return 0.0;
    }
    (cov / libm::sqrt(var_x * var_y)).clamp(-1.0, 1.0)
}

/// How strongly `blend` agrees with `input` on the features of `argument`.
///
/// Both vectors must be extracted against the same tonic.
pub fn val(argument: Argument, blend: &FeatureVector, input: &FeatureVector) -> f64 {
    match argument.question {
        Question::Q1 => {
            let equal = [
                input.from_root == blend.from_root,
                input.to_root == blend.to_root,
                input.from_type == blend.from_type,
                input.to_type == blend.to_type,
            ];
            equal.iter().filter(|&&e| e).count() as f64
        }
        Question::Q2 => {
            let from = input.from_rel_pcs.intersection(blend.from_rel_pcs).len();
            let to = input.to_rel_pcs.intersection(blend.to_rel_pcs).len();
            (from + to) as f64
        }
        Question::Q6 => (dic_correlation(&input.dic_info, &blend.dic_info) + 1.0) / 2.0,
        question => question
            .features()
            .iter()
            .map(|&feature| {
                let a = input.flag(feature).expect("boolean feature") as u8 as f64;
                let b = blend.flag(feature).expect("boolean feature") as u8 as f64;
                1.0 - (a - b).abs()
            })
            .sum(),
    }
}

/// Sum of `val` over the argument set, in question order.
pub fn association(blend: &FeatureVector, input: &FeatureVector, arguments: ArgumentSet) -> f64 {
    arguments
        .arguments()
        .map(|argument| val(argument, blend, input))
        .sum()
}

/// Imbalance between the associations with the two inputs.
///
/// Returns `(asym, signed)`. `asym` is the magnitude of the difference of
/// the two ratio terms, clamped to `[0, 1]`. `signed` carries the same
/// magnitude, negative when the first input has the larger association
/// and positive when the second has. The raw difference alone is not
/// reliable for the sign: it is positive for `(2, 1)` but negative for
/// `(20, 10)`.
pub fn asymmetry(assoc1: f64, assoc2: f64) -> (f64, f64) {
    if assoc1 == 0.0 && assoc2 == 0.0 {
        return (0.0, 0.0);
    }
    // The two ratio terms are subtracted over a common denominator so the
    // result is rounded once; integer associations then give correctly
    // rounded values such as exactly 0.2 for (2, 1).
    let cross = assoc1 * assoc2;
    let (n1, d1) = (assoc1 * assoc1 + cross, assoc1 * assoc1 + assoc2);
    let (n2, d2) = (assoc2 * assoc2 + cross, assoc2 * assoc2 + assoc1);
    let asym = ((n1 * d2 - n2 * d1) / (d1 * d2)).abs().min(1.0);
    let signed = match assoc1.total_cmp(&assoc2) {
        Ordering::Greater => -asym,
        Ordering::Less => asym,
        Ordering::Equal => 0.0,
    };
    (asym, signed)
}

/// Harmonic-mean style aggregate of total association and symmetry.
pub fn rate(total_assoc: f64, asym: f64) -> f64 {
    let symmetry = 1.0 - asym;
    let denominator = total_assoc + symmetry;
    if denominator == 0.0 {
        0.0
    } else {
        total_assoc * symmetry / denominator
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScoredBlend {
    pub assoc1: f64,
    pub assoc2: f64,
    pub total_assoc: f64,
    pub asym: f64,
    pub signed_asym: f64,
    pub rate: f64,
}

impl ScoredBlend {
    pub fn from_associations(assoc1: f64, assoc2: f64) -> Self {
        let total_assoc = assoc1 + assoc2;
        let (asym, signed_asym) = asymmetry(assoc1, assoc2);
        ScoredBlend {
            assoc1,
            assoc2,
            total_assoc,
            asym,
            signed_asym,
            rate: rate(total_assoc, asym),
        }
    }

    /// The score seen from the other input's side.
    pub fn swapped(self) -> Self {
        ScoredBlend {
            assoc1: self.assoc2,
            assoc2: self.assoc1,
            signed_asym: -self.signed_asym,
            ..self
        }
    }
}

/// Decision order between two scored blends: `Less` means `a` is preferred.
///
/// Higher rate wins; ties go to the higher total association, then to the
/// lexicographically smaller transition key.
pub fn prefer(a: &ScoredBlend, a_key: &str, b: &ScoredBlend, b_key: &str) -> Ordering {
    b.rate
        .total_cmp(&a.rate)
        .then_with(|| b.total_assoc.total_cmp(&a.total_assoc))
        .then_with(|| a_key.cmp(b_key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::{extract_features, ChordTransition, PitchClass};

    fn features(from: &str, to: &str, tonic: u8) -> FeatureVector {
        let t = ChordTransition::new(from.parse().unwrap(), to.parse().unwrap()).unwrap();
        extract_features(t, PitchClass::new(tonic).unwrap())
    }

    #[test]
    fn psi_table() {
        use Feature::*;
        assert_eq!(psi(Argument::new(Question::Q3)), &[DicHas0]);
        assert_eq!(
            psi(Argument::new(Question::Q1)),
            &[FromRoot, ToRoot, FromType, ToType]
        );
        assert_eq!(
            psi(Argument::new(Question::Q7)),
            &[AscSemZero, DescSemZero, SemZero]
        );
        let names: alloc::vec::Vec<&str> = psi(Argument::new(Question::Q5))
            .iter()
            .map(|f| f.name())
            .collect();
        assert_eq!(names, ["DIChas2", "DIChasMinus2"]);
    }

    #[test]
    fn val_q1_counts_equal_components() {
        let x = features("7:0,4,7,10", "0:0,4,7", 0);
        assert_eq!(val(Argument::new(Question::Q1), &x, &x), 4.0);
        let y = features("7:0,4,7", "0:0,4,7", 0);
        assert_eq!(val(Argument::new(Question::Q1), &y, &x), 3.0);
    }

    #[test]
    fn val_q2_intersections() {
        // fromRelPCs {0,4,7} twice; toRelPCs {7,11,2,5} against {2,5,9}.
        let input = features("0:0,4,7", "7:0,4,7,10", 0);
        let blend = features("0:0,4,7", "2:0,3,7", 0);
        assert_eq!(val(Argument::new(Question::Q2), &blend, &input), 5.0);
    }

    #[test]
    fn val_q3_boolean_agreement() {
        let a = features("0:0,4,7", "7:0,4,7,10", 0);
        let b = features("0:0,4,7", "9:0,3,7", 0);
        assert!(a.dic_has_0 && b.dic_has_0);
        assert_eq!(val(Argument::new(Question::Q3), &b, &a), 1.0);
        let c = features("0:0", "6:0", 0);
        assert!(!c.dic_has_0);
        assert_eq!(val(Argument::new(Question::Q3), &c, &a), 0.0);
    }

    #[test]
    fn val_q6_identical_is_one() {
        let a = features("0:0,4,7", "7:0,4,7,10", 0);
        assert_eq!(val(Argument::new(Question::Q6), &a, &a), 1.0);
    }

    #[test]
    fn correlation_degenerate_cases() {
        let flat = DicVector::from_counts([2; 12]);
        let spike = DicVector::from_counts([0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(dic_correlation(&flat, &flat), 1.0);
        assert_eq!(dic_correlation(&flat, &spike), 0.0);
        let neg = DicVector::from_counts([1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1]);
        assert!((dic_correlation(&spike, &neg) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn association_examples() {
        let a = features("7:0,4,7,10", "0:0,4,7", 0);
        let set: ArgumentSet = [Question::Q1, Question::Q9].into_iter().collect();
        assert_eq!(association(&a, &a, set), 5.0);
        let q3: ArgumentSet = [Question::Q3].into_iter().collect();
        assert_eq!(association(&a, &a, q3), 1.0);
    }

    #[test]
    fn asymmetry_examples() {
        assert_eq!(asymmetry(3.0, 3.0), (0.0, 0.0));
        assert_eq!(asymmetry(3.0, 0.0), (1.0, -1.0));
        assert_eq!(asymmetry(0.0, 3.0), (1.0, 1.0));
        let (asym, signed) = asymmetry(2.0, 1.0);
        assert_eq!(asym, 0.2);
        assert!(signed < 0.0);
        // Large associations: raw difference flips sign, the signed value does not.
        let (asym, signed) = asymmetry(20.0, 10.0);
        assert_eq!(asym, 1.0);
        assert_eq!(signed, -1.0);
        let (asym, signed) = asymmetry(30.0, 25.0);
        let first = (900.0 + 750.0) / (900.0 + 25.0);
        let second = (625.0 + 750.0) / (625.0 + 30.0);
        assert!((asym - (second - first)).abs() < 1e-15);
        assert_eq!(signed, -asym);
        assert_eq!(asymmetry(0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rate(1.0, 0.0), 0.5);
        assert_eq!(rate(10.0, 1.0), 0.0);
        assert_eq!(rate(0.0, 1.0), 0.0);
        assert!((rate(4.0, 0.5) - 4.0 * 0.5 / 4.5).abs() < 1e-15);
    }

    #[test]
    fn prefer_chain() {
        let s = |rate, total_assoc| ScoredBlend {
            assoc1: 0.0,
            assoc2: 0.0,
            total_assoc,
            asym: 0.0,
            signed_asym: 0.0,
            rate,
        };
        assert_eq!(prefer(&s(0.5, 1.0), "b", &s(0.3, 9.0), "a"), Ordering::Less);
        assert_eq!(prefer(&s(0.5, 6.0), "b", &s(0.5, 4.0), "a"), Ordering::Less);
        assert_eq!(prefer(&s(0.5, 4.0), "a", &s(0.5, 4.0), "b"), Ordering::Less);
        assert_eq!(prefer(&s(0.5, 4.0), "a", &s(0.5, 4.0), "a"), Ordering::Equal);
    }

    #[test]
    fn question_parsing() {
        assert_eq!("q9".parse::<Question>(), Ok(Question::Q9));
        assert_eq!("Q1".parse::<Question>(), Ok(Question::Q1));
        assert!("Q10".parse::<Question>().is_err());
        assert!("".parse::<Question>().is_err());
        let set = ArgumentSet::from_answers([true, false, true, false, false, false, false, false, true]);
        assert_eq!(set.len(), 3);
        assert!(set.answers()[8]);
    }
}
