//! Idiom, corpus, answers and matrix CSV documents.

use chordblend_core::{
    ArgumentSet, Chord, Error as CoreError, Idiom, PitchClass, Question, TransitionMatrix,
};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::AppError;
use crate::schema::{self, child};

#[derive(Serialize)]
struct IdiomDoc<'a> {
    name: &'a str,
    tonic: u8,
    chords: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

/// Pretty JSON for an idiom: `{name, tonic, chords, matrix}`.
pub fn idiom_to_json(idiom: &Idiom) -> String {
    let doc = IdiomDoc {
        name: idiom.name(),
        tonic: idiom.tonic().value(),
        chords: idiom.chords().iter().map(Chord::to_string).collect(),
        matrix: idiom.matrix().to_rows(),
    };
    serde_json::to_string_pretty(&doc).expect("idiom documents always serialize")
}

pub fn idiom_from_json(text: &str) -> Result<Idiom, AppError> {
    idiom_from_value(&schema::parse(text)?, "")
}

pub fn idiom_from_value(value: &Value, path: &str) -> Result<Idiom, AppError> {
    let map = schema::object(value, path)?;
    schema::only_keys(map, path, &["name", "tonic", "chords", "matrix"])?;
    let name = schema::string(schema::field(map, path, "name")?, &child(path, "name"))?;
    let tonic = tonic_from_value(schema::field(map, path, "tonic")?, &child(path, "tonic"))?;

    let chords_path = child(path, "chords");
    let symbols = schema::strings(schema::field(map, path, "chords")?, &chords_path)?;
    if symbols.is_empty() {
        return Err(AppError::schema(chords_path, "an idiom needs at least one chord"));
    }
    let mut chords = Vec::with_capacity(symbols.len());
    for (i, symbol) in symbols.iter().enumerate() {
        let chord = parse_chord(symbol, &child(&chords_path, i))?;
        if chords.contains(&chord) {
            return Err(AppError::schema(child(&chords_path, i), format!("chord {chord} is listed twice")));
        }
        chords.push(chord);
    }

    let matrix_path = child(path, "matrix");
    let matrix = matrix_from_value(schema::field(map, path, "matrix")?, &matrix_path, chords.len())?;
    Idiom::new(name, tonic, chords, matrix).map_err(|e| locate(e, &matrix_path))
}

fn tonic_from_value(value: &Value, path: &str) -> Result<PitchClass, AppError> {
    let raw = schema::unsigned(value, path)?;
    u8::try_from(raw)
        .ok()
        .and_then(|v| PitchClass::new(v).ok())
        .ok_or_else(|| AppError::schema(path, format!("tonic {raw} is outside 0..12")))
}

pub fn parse_chord(symbol: &str, path: &str) -> Result<Chord, AppError> {
    symbol
        .parse()
        .map_err(|e| AppError::schema(path, format!("{e}")))
}

/// Reads a square probability table and checks the matrix invariants.
pub fn matrix_from_value(value: &Value, path: &str, n: usize) -> Result<TransitionMatrix, AppError> {
    let rows = schema::array(value, path)?;
    if rows.len() != n {
        return Err(AppError::schema(path, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut table = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row_path = child(path, i);
        let cells = schema::array(row, &row_path)?;
        if cells.len() != n {
            return Err(AppError::schema(row_path, format!("expected {n} columns, found {}", cells.len())));
        }
        let values = cells
            .iter()
            .enumerate()
            .map(|(j, v)| schema::number(v, &child(&row_path, j)))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(values);
    }
    TransitionMatrix::from_rows(table).map_err(|e| locate(e, path))
}

/// Attaches a matrix pointer to an invariant violation.
fn locate(e: CoreError, matrix_path: &str) -> AppError {
    let at = match &e {
        CoreError::ProbabilityOutOfRange { row, col, .. } => child(&child(matrix_path, row), col),
        CoreError::NonzeroDiagonal { index, .. } => child(&child(matrix_path, index), index),
        CoreError::RowSum { row, .. } => child(matrix_path, row),
        _ => return AppError::Core(e),
    };
    AppError::schema(at, e.to_string())
}

/// A training corpus. `name` is optional in corpus files and required by
/// the upload endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub name: Option<String>,
    pub tonic: PitchClass,
    pub sequences: Vec<Vec<String>>,
}

impl Corpus {
    pub fn train(&self, name: &str) -> Result<Idiom, AppError> {
        chordblend_core::train_idiom(name, self.tonic, &self.sequences).map_err(|e| match e {
            CoreError::Parse {
                sequence,
                position,
                ref symbol,
                ref source,
            } => AppError::schema(
                child(&child("/sequences", sequence), position),
                format!("cannot parse chord {symbol:?}: {source}"),
            ),
            other => AppError::Core(other),
        })
    }
}

pub fn corpus_from_json(text: &str) -> Result<Corpus, AppError> {
    corpus_from_value(&schema::parse(text)?)
}

pub fn corpus_from_value(value: &Value) -> Result<Corpus, AppError> {
    let map = schema::object(value, "")?;
    schema::only_keys(map, "", &["name", "tonic", "sequences"])?;
    let name = match map.get("name") {
        Some(v) => Some(schema::string(v, "/name")?.to_string()),
        None => None,
    };
    let tonic = tonic_from_value(schema::field(map, "", "tonic")?, "/tonic")?;
    let rows = schema::array(schema::field(map, "", "sequences")?, "/sequences")?;
    let mut sequences = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = child("/sequences", i);
        let symbols = schema::strings(row, &path)?;
        if symbols.len() < 2 {
            return Err(AppError::schema(path, "a sequence needs at least two chords"));
        }
        sequences.push(symbols.into_iter().map(String::from).collect());
    }
    Ok(Corpus {
        name,
        tonic,
        sequences,
    })
}

/// `{"Q1": bool, …, "Q9": bool}` with all nine keys present.
pub fn answers_to_value(arguments: ArgumentSet) -> Value {
    let mut map = Map::new();
    for q in Question::ALL {
        map.insert(q.id().to_string(), Value::Bool(arguments.contains(q)));
    }
    Value::Object(map)
}

pub fn answers_from_value(value: &Value, path: &str) -> Result<ArgumentSet, AppError> {
    let map = schema::object(value, path)?;
    let ids: Vec<&str> = Question::ALL.iter().map(|q| q.id()).collect();
    schema::only_keys(map, path, &ids)?;
    let mut answers = [false; 9];
    for (q, slot) in Question::ALL.iter().zip(answers.iter_mut()) {
        let key = q.id();
        *slot = schema::boolean(schema::field(map, path, key)?, &child(path, key))?;
    }
    Ok(ArgumentSet::from_answers(answers))
}

/// Header of chord strings, then one row of six-decimal probabilities per
/// chord.
pub fn matrix_to_csv(chords: &[Chord], matrix: &TransitionMatrix) -> String {
    write_table(chords, matrix.rows().map(|row| row.iter().map(|p| format!("{p:.6}")).collect()))
}

pub(crate) fn write_table(chords: &[Chord], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(chords.iter().map(Chord::to_string))
        .expect("writing to memory cannot fail");
    for row in rows {
        out.write_record(row).expect("writing to memory cannot fail");
    }
    let bytes = out.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

/// Reads a matrix CSV. Rows are renormalised because six decimals cannot
/// represent most probabilities exactly; a row whose rounded sum strays
/// further than its rounding error from 1 is rejected.
pub fn matrix_from_csv(text: &str) -> Result<(Vec<Chord>, TransitionMatrix), AppError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| AppError::schema("row 1", e.to_string()))?,
        None => return Err(AppError::schema("row 1", "missing header row")),
    };
    let mut chords = Vec::with_capacity(header.len());
    for (j, symbol) in header.iter().enumerate() {
        let chord = parse_chord(symbol, &format!("row 1, column {}", j + 1))?;
        if chords.contains(&chord) {
            return Err(AppError::schema(format!("row 1, column {}", j + 1), format!("chord {chord} is listed twice")));
        }
        chords.push(chord);
    }
    let n = chords.len();
    let mut weights = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (i, record) in records.enumerate() {
        let at = format!("row {}", i + 2);
        let record = record.map_err(|e| AppError::schema(&at, e.to_string()))?;
        if record.len() != n {
            return Err(AppError::schema(at, format!("expected {n} columns, found {}", record.len())));
        }
        let mut sum = 0.0;
        for (j, cell) in record.iter().enumerate() {
            let p: f64 = cell
                .trim()
                .parse()
                .map_err(|_| AppError::schema(format!("{at}, column {}", j + 1), format!("{cell:?} is not a number")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(AppError::schema(format!("{at}, column {}", j + 1), format!("probability {p} is outside [0, 1]")));
            }
            sum += p;
            weights.push(p);
        }
        let slack = 5e-7 * n as f64 + 1e-12;
        if sum != 0.0 && (sum - 1.0).abs() > slack {
            return Err(AppError::schema(at, format!("row sums to {sum}, expected 1 or an all-zero row")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(AppError::schema(format!("row {}", rows + 2), format!("expected {n} probability rows, found {rows}")));
    }
    let matrix = TransitionMatrix::normalized(n, weights).map_err(|e| match e {
        CoreError::NonzeroDiagonal { index, value } => AppError::schema(
            format!("row {}, column {}", index + 2, index + 1),
            format!("diagonal entry is {value}, expected 0"),
        ),
        other => AppError::Core(other),
    })?;
    Ok((chords, matrix))
}
