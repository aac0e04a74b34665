//! Pool, extended-matrix and bridge-path documents.

use chordblend_core::{
    bridge_paths, BlendPool, BridgeKind, BridgePath, CellOrigin, Chord, Direction, ExtendedMatrix,
    Membership, Sector, TransitionMatrix,
};
use serde::Serialize;
use serde_json::Value;

use crate::error::AppError;
use crate::formats::{matrix_from_value, parse_chord, write_table};
use crate::schema::{self, child};

pub const EM_SCHEMA: &str = "em/1";

#[derive(Serialize)]
struct ProvenanceDoc {
    input1: String,
    input2: String,
    from_root: &'static str,
    from_type: &'static str,
    to_root: &'static str,
    to_type: &'static str,
}

#[derive(Serialize)]
struct PoolEntryDoc {
    transition: String,
    assoc1: f64,
    assoc2: f64,
    total_assoc: f64,
    asym: f64,
    signed_asym: f64,
    rate: f64,
    provenance: ProvenanceDoc,
}

/// The pool as a JSON list in preference order.
pub fn pool_to_json(pool: &BlendPool) -> String {
    let entries: Vec<PoolEntryDoc> = pool
        .entries()
        .iter()
        .map(|e| PoolEntryDoc {
            transition: e.transition.canonical_string(),
            assoc1: e.score.assoc1,
            assoc2: e.score.assoc2,
            total_assoc: e.score.total_assoc,
            asym: e.score.asym,
            signed_asym: e.score.signed_asym,
            rate: e.score.rate,
            provenance: ProvenanceDoc {
                input1: e.provenance.input1.canonical_string(),
                input2: e.provenance.input2.canonical_string(),
                from_root: e.provenance.from_root.as_str(),
                from_type: e.provenance.from_type.as_str(),
                to_root: e.provenance.to_root.as_str(),
                to_type: e.provenance.to_type.as_str(),
            },
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("pool documents always serialize")
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum OriginDoc {
    None,
    Idiom1,
    Idiom2,
    Both,
    Blend(f64),
}

impl From<CellOrigin> for OriginDoc {
    fn from(origin: CellOrigin) -> Self {
        match origin {
            CellOrigin::None => OriginDoc::None,
            CellOrigin::Idiom1 => OriginDoc::Idiom1,
            CellOrigin::Idiom2 => OriginDoc::Idiom2,
            CellOrigin::Both => OriginDoc::Both,
            CellOrigin::Blend(rate) => OriginDoc::Blend(rate),
        }
    }
}

#[derive(Serialize)]
struct PathDoc {
    kind: &'static str,
    from: String,
    via: Option<String>,
    to: String,
    combined_rate: f64,
}

impl From<&BridgePath> for PathDoc {
    fn from(p: &BridgePath) -> Self {
        PathDoc {
            kind: kind_str(p.kind),
            from: p.from.to_string(),
            via: p.intermediate.map(|c| c.to_string()),
            to: p.to.to_string(),
            combined_rate: p.combined_rate,
        }
    }
}

fn kind_str(kind: BridgeKind) -> &'static str {
    match kind {
        BridgeKind::Direct => "direct",
        BridgeKind::Chained => "chained",
    }
}

#[derive(Serialize)]
struct BridgesDoc {
    idiom1_to_idiom2: Vec<PathDoc>,
    idiom2_to_idiom1: Vec<PathDoc>,
}

#[derive(Serialize)]
struct EmDoc {
    schema: &'static str,
    chords: Vec<String>,
    membership: Vec<&'static str>,
    matrix: Vec<Vec<f64>>,
    sector_map: Vec<Vec<&'static str>>,
    origin_map: Vec<Vec<OriginDoc>>,
    bridge_paths: BridgesDoc,
}

/// The extended matrix with its sector map, origin map and bridge paths
/// in both directions.
pub fn extended_to_json(em: &ExtendedMatrix) -> String {
    let n = em.len();
    let paths = |d| bridge_paths(em, d).iter().map(PathDoc::from).collect();
    let doc = EmDoc {
        schema: EM_SCHEMA,
        chords: em.chords().iter().map(Chord::to_string).collect(),
        membership: em.membership().iter().map(|m| m.as_str()).collect(),
        matrix: em.matrix().to_rows(),
        sector_map: (0..n)
            .map(|i| (0..n).map(|j| em.sector(i, j).tag()).collect())
            .collect(),
        origin_map: (0..n)
            .map(|i| (0..n).map(|j| OriginDoc::from(em.origin(i, j))).collect())
            .collect(),
        bridge_paths: BridgesDoc {
            idiom1_to_idiom2: paths(Direction::OneToTwo),
            idiom2_to_idiom1: paths(Direction::TwoToOne),
        },
    };
    serde_json::to_string_pretty(&doc).expect("extended-matrix documents always serialize")
}

pub fn extended_from_json(text: &str) -> Result<ExtendedMatrix, AppError> {
    extended_from_value(&schema::parse(text)?, "")
}

/// Rebuilds an extended matrix. The sector map and bridge paths are derived
/// data; they must agree with what the chords, membership and matrix imply.
pub fn extended_from_value(value: &Value, path: &str) -> Result<ExtendedMatrix, AppError> {
    let map = schema::object(value, path)?;
    schema::only_keys(
        map,
        path,
        &["schema", "chords", "membership", "matrix", "sector_map", "origin_map", "bridge_paths"],
    )?;
    let version_path = child(path, "schema");
    let version = schema::string(schema::field(map, path, "schema")?, &version_path)?;
    if version != EM_SCHEMA {
        return Err(AppError::schema(version_path, format!("unsupported schema {version:?}, expected {EM_SCHEMA:?}")));
    }

    let chords_path = child(path, "chords");
    let chords = schema::strings(schema::field(map, path, "chords")?, &chords_path)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| parse_chord(s, &child(&chords_path, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = chords.len();

    let membership_path = child(path, "membership");
    let names = schema::strings(schema::field(map, path, "membership")?, &membership_path)?;
    if names.len() != n {
        return Err(AppError::schema(membership_path, format!("expected {n} entries, found {}", names.len())));
    }
    let membership = names
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.parse::<Membership>()
                .map_err(|_| AppError::schema(child(&membership_path, i), format!("unknown membership {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let matrix_path = child(path, "matrix");
    let matrix: TransitionMatrix = matrix_from_value(schema::field(map, path, "matrix")?, &matrix_path, n)?;

    let origins_path = child(path, "origin_map");
    let mut origins = Vec::with_capacity(n * n);
    for (i, row) in square(schema::field(map, path, "origin_map")?, &origins_path, n)?.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            origins.push(origin_from_value(cell, &child(&child(&origins_path, i), j))?);
        }
    }

    let em = ExtendedMatrix::from_parts(chords, membership, matrix, origins).map_err(|e| match e {
        chordblend_core::Error::SectorCProbability { row, col, .. } => {
            AppError::schema(child(&child(&matrix_path, row), col), e.to_string())
        }
        other => AppError::Core(other),
    })?;

    let sectors_path = child(path, "sector_map");
    for (i, row) in square(schema::field(map, path, "sector_map")?, &sectors_path, n)?.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let at = child(&child(&sectors_path, i), j);
            let tag = schema::string(cell, &at)?;
            let sector: Sector = tag
                .parse()
                .map_err(|_| AppError::schema(&at, format!("unknown sector {tag:?}")))?;
            if sector != em.sector(i, j) {
                return Err(AppError::schema(at, format!("sector {tag} disagrees with membership, expected {}", em.sector(i, j))));
            }
        }
    }

    let bridges_path = child(path, "bridge_paths");
    let stored = schema::field(map, path, "bridge_paths")?;
    let expected = serde_json::to_value(BridgesDoc {
        idiom1_to_idiom2: bridge_paths(&em, Direction::OneToTwo).iter().map(PathDoc::from).collect(),
        idiom2_to_idiom1: bridge_paths(&em, Direction::TwoToOne).iter().map(PathDoc::from).collect(),
    })
    .expect("bridge documents always serialize");
    if *stored != expected {
        return Err(AppError::schema(bridges_path, "bridge paths disagree with the matrix"));
    }
    Ok(em)
}

fn square<'a>(value: &'a Value, path: &str, n: usize) -> Result<Vec<&'a [Value]>, AppError> {
    let rows = schema::array(value, path)?;
    if rows.len() != n {
        return Err(AppError::schema(path, format!("expected {n} rows, found {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let cells = schema::array(row, &child(path, i))?;
            if cells.len() != n {
                return Err(AppError::schema(child(path, i), format!("expected {n} columns, found {}", cells.len())));
            }
            Ok(cells)
        })
        .collect()
}

fn origin_from_value(value: &Value, path: &str) -> Result<CellOrigin, AppError> {
    match value {
        Value::String(s) => match s.as_str() {
            "none" => Ok(CellOrigin::None),
            "idiom1" => Ok(CellOrigin::Idiom1),
            "idiom2" => Ok(CellOrigin::Idiom2),
            "both" => Ok(CellOrigin::Both),
            _ => Err(AppError::schema(path, format!("unknown origin {s:?}"))),
        },
        Value::Object(map) => {
            schema::only_keys(map, path, &["blend"])?;
            let rate = schema::number(schema::field(map, path, "blend")?, &child(path, "blend"))?;
            Ok(CellOrigin::Blend(rate))
        }
        _ => Err(AppError::schema(path, "expected an origin string or {\"blend\": rate}")),
    }
}

/// Sector tags laid out like the matrix CSV.
pub fn sectors_to_csv(em: &ExtendedMatrix) -> String {
    let n = em.len();
    write_table(
        em.chords(),
        (0..n).map(|i| (0..n).map(|j| em.sector(i, j).tag().to_string()).collect()),
    )
}

/// Plain-text listing of the bridge paths in both directions.
pub fn bridge_report(em: &ExtendedMatrix) -> String {
    let mut out = String::new();
    for (title, direction) in [
        ("idiom1 -> idiom2", Direction::OneToTwo),
        ("idiom2 -> idiom1", Direction::TwoToOne),
    ] {
        let paths = bridge_paths(em, direction);
        out.push_str(&format!("{title}: {} path(s)\n", paths.len()));
        for p in &paths {
            let route = match p.intermediate {
                Some(x) => format!("{} -> {} -> {}", p.from, x, p.to),
                None => format!("{} -> {}", p.from, p.to),
            };
            out.push_str(&format!("  {:<8} {:.6}  {}\n", kind_str(p.kind), p.combined_rate, route));
        }
    }
    out
}
