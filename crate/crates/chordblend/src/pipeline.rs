//! The blend run shared by the command line and the service, so both emit
//! the same bytes for the same inputs.

use std::fs;
use std::path::Path;

use chordblend_core::blend::{blend_with_idiom, validate_blend_inputs};
use chordblend_core::{
    build_extended, sample_walk, ArgumentSet, BlendPool, Chord, ExtendedMatrix, Idiom,
    TransitionMatrix, WalkConfig, DEFAULT_BRIDGE_MASS, DEFAULT_POOL_CAPACITY,
};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::AppError;
use crate::export::{bridge_report, extended_to_json, pool_to_json, sectors_to_csv};
use crate::formats::{answers_to_value, idiom_to_json, matrix_to_csv};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BlendSettings {
    pub arguments: ArgumentSet,
    pub capacity: usize,
    pub bridge_mass: f64,
}

impl BlendSettings {
    pub fn new(arguments: ArgumentSet) -> Self {
        BlendSettings {
            arguments,
            capacity: DEFAULT_POOL_CAPACITY,
            bridge_mass: DEFAULT_BRIDGE_MASS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlendResult {
    pub pool: BlendPool,
    pub extended: ExtendedMatrix,
}

/// Scores each transition of `idiom1` on the rayon pool and merges the
/// partial pools. Merging is order-independent, so the result equals the
/// serial `blend_idioms`.
pub fn run_blend(idiom1: &Idiom, idiom2: &Idiom, settings: BlendSettings) -> Result<BlendResult, AppError> {
    let BlendSettings {
        arguments,
        capacity,
        bridge_mass,
    } = settings;
    validate_blend_inputs(idiom1, idiom2, arguments, capacity)?;
    if !(bridge_mass > 0.0 && bridge_mass < 1.0) {
        return Err(chordblend_core::Error::InvalidBridgeMass(bridge_mass).into());
    }
    let inputs: Vec<_> = idiom1.transitions().map(|(t, _)| t).collect();
    let partial = inputs
        .par_iter()
        .map(|&t| blend_with_idiom(t, idiom1, idiom2, arguments, capacity))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pool = BlendPool::new(capacity)?;
    for part in partial {
        pool = pool.merge(part);
    }
    let extended = build_extended(idiom1, idiom2, &pool, bridge_mass)?;
    Ok(BlendResult { pool, extended })
}

/// Rendered outputs of one blend run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlendDocuments {
    pub pool_json: String,
    pub extended_json: String,
    pub extended_csv: String,
    pub sectors_csv: String,
    pub bridge_report: String,
}

pub const POOL_FILE: &str = "pool.json";
pub const EXTENDED_JSON_FILE: &str = "extended.json";
pub const EXTENDED_CSV_FILE: &str = "extended.csv";
pub const SECTORS_FILE: &str = "sectors.csv";
pub const BRIDGES_FILE: &str = "bridges.txt";

impl BlendResult {
    pub fn documents(&self) -> BlendDocuments {
        BlendDocuments {
            pool_json: pool_to_json(&self.pool),
            extended_json: extended_to_json(&self.extended),
            extended_csv: matrix_to_csv(self.extended.chords(), self.extended.matrix()),
            sectors_csv: sectors_to_csv(&self.extended),
            bridge_report: bridge_report(&self.extended),
        }
    }
}

impl BlendDocuments {
    pub fn files(&self) -> [(&'static str, &str); 5] {
        [
            (POOL_FILE, &self.pool_json),
            (EXTENDED_JSON_FILE, &self.extended_json),
            (EXTENDED_CSV_FILE, &self.extended_csv),
            (SECTORS_FILE, &self.sectors_csv),
            (BRIDGES_FILE, &self.bridge_report),
        ]
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), AppError> {
        fs::create_dir_all(dir).map_err(|source| AppError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, contents) in self.files() {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|source| AppError::Write { path, source })?;
        }
        Ok(())
    }
}

/// Content hash of everything that determines a blend result.
pub fn session_id(idiom1: &Idiom, idiom2: &Idiom, settings: BlendSettings) -> String {
    let mut hasher = Sha256::new();
    for part in [
        idiom_to_json(idiom1),
        idiom_to_json(idiom2),
        answers_to_value(settings.arguments).to_string(),
        settings.capacity.to_string(),
        format!("{:016x}", settings.bridge_mass.to_bits()),
    ] {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    hex::encode(&hasher.finalize()[..16])
}

/// Seeded walk over a labelled matrix, starting at the chord `start`.
pub fn sample_chords(
    chords: &[Chord],
    matrix: &TransitionMatrix,
    start: Chord,
    length: usize,
    seed: u64,
) -> Result<Vec<Chord>, AppError> {
    let start = chords
        .iter()
        .position(|&c| c == start)
        .ok_or_else(|| AppError::UnknownChord(start.to_string()))?;
    let walk = sample_walk(matrix, WalkConfig { start, length, seed })?;
    Ok(walk.into_iter().map(|i| chords[i]).collect())
}

/// JSON list of chord strings.
pub fn walk_to_json(walk: &[Chord]) -> String {
    let symbols: Vec<String> = walk.iter().map(Chord::to_string).collect();
    serde_json::to_string(&symbols).expect("string lists always serialize")
}
