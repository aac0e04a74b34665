use chordblend::export::{extended_from_json, extended_to_json, sectors_to_csv};
use chordblend::formats::*;
use chordblend::pipeline::{run_blend, BlendSettings};
use chordblend::AppError;
use chordblend_core::idiom::{c_major_preset, fsharp_major_preset};
use chordblend_core::{ArgumentSet, PitchClass, Sector};
use serde_json::json;

fn schema_path(e: AppError) -> String {
    match e {
        AppError::Schema { path, .. } => path,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn idiom_round_trip() {
    for idiom in [c_major_preset(), fsharp_major_preset()] {
        let text = idiom_to_json(&idiom);
        assert_eq!(idiom_from_json(&text).unwrap(), idiom);
    }
}

#[test]
fn idiom_document_shape() {
    let value: serde_json::Value = serde_json::from_str(&idiom_to_json(&c_major_preset())).unwrap();
    assert_eq!(value["name"], "c-major-artificial");
    assert_eq!(value["tonic"], 0);
    assert_eq!(value["chords"], json!(["0:0,4,7", "5:0,4,7", "7:0,4,7,10"]));
    assert_eq!(value["matrix"][2], json!([1.0, 0.0, 0.0]));
}

fn doc(matrix: serde_json::Value) -> String {
    json!({"name": "x", "tonic": 0, "chords": ["0:0,4,7", "7:0,4,7,10"], "matrix": matrix}).to_string()
}

#[test]
fn idiom_load_rejects_invariant_violations() {
    let e = idiom_from_json(&doc(json!([[0.5, 0.5], [1.0, 0.0]]))).unwrap_err();
    assert_eq!(schema_path(e), "/matrix/0/0");
    let e = idiom_from_json(&doc(json!([[0.0, 0.9], [1.0, 0.0]]))).unwrap_err();
    assert_eq!(schema_path(e), "/matrix/0");
    let e = idiom_from_json(&doc(json!([[0.0, 1.0], [1.0]]))).unwrap_err();
    assert_eq!(schema_path(e), "/matrix/1");
    let e = idiom_from_json(&doc(json!([[0.0, "1"], [1.0, 0.0]]))).unwrap_err();
    assert_eq!(schema_path(e), "/matrix/0/1");
}

#[test]
fn idiom_load_reports_field_paths() {
    let e = idiom_from_json(r#"{"name": "x", "tonic": 12, "chords": ["0:0"], "matrix": [[0]]}"#).unwrap_err();
    assert_eq!(schema_path(e), "/tonic");
    let e = idiom_from_json(r#"{"name": "x", "tonic": 0, "chords": ["0:0", "0:4,0"], "matrix": []}"#).unwrap_err();
    assert_eq!(schema_path(e), "/chords/1");
    let e = idiom_from_json(r#"{"name": "x", "tonic": 0, "chords": ["0:0", "0:0"], "matrix": []}"#).unwrap_err();
    assert_eq!(schema_path(e), "/chords/1");
    let e = idiom_from_json(r#"{"tonic": 0, "chords": [], "matrix": []}"#).unwrap_err();
    assert_eq!(schema_path(e), "/name");
    let e = idiom_from_json(r#"{"name": "x", "tonic": 0, "chords": ["0:0"], "matrix": [[0]], "extra": 1}"#).unwrap_err();
    assert_eq!(schema_path(e), "/extra");
    let e = idiom_from_json("{").unwrap_err();
    assert_eq!(schema_path(e), "");
}

#[test]
fn single_chord_idiom_loads() {
    let idiom = idiom_from_json(r#"{"name": "x", "tonic": 0, "chords": ["0:0,4,7"], "matrix": [[0]]}"#).unwrap();
    assert!(!idiom.matrix().has_transitions());
}

#[test]
fn corpus_training_reports_chord_position() {
    let corpus = corpus_from_json(r#"{"tonic": 0, "sequences": [["0:0,4,7", "7:0,4,7,10"], ["0:0,4,7", "7:0,4,x"]]}"#).unwrap();
    let e = corpus.train("bad").unwrap_err();
    assert_eq!(schema_path(e), "/sequences/1/1");

    let e = corpus_from_json(r#"{"tonic": 0, "sequences": [["0:0,4,7"]]}"#).unwrap_err();
    assert_eq!(schema_path(e), "/sequences/0");
}

#[test]
fn corpus_training_counts_pairs() {
    let corpus = corpus_from_json(r#"{"tonic": 0, "sequences": [["0:0,4,7", "7:0,4,7,10", "0:0,4,7"]]}"#).unwrap();
    let idiom = corpus.train("cg").unwrap();
    assert_eq!(idiom.chords().len(), 2);
    assert_eq!(idiom.matrix().get(0, 1), 1.0);
    assert_eq!(idiom.matrix().get(1, 0), 1.0);
    assert_eq!(idiom.tonic(), PitchClass::new(0).unwrap());
}

#[test]
fn answers_round_trip() {
    for bits in [1u16, 0b101, 0b1_1111_1111, 0b1_0000_0000] {
        let answers: [bool; 9] = std::array::from_fn(|i| bits & (1 << i) != 0);
        let set = ArgumentSet::from_answers(answers);
        let value = answers_to_value(set);
        assert_eq!(answers_from_value(&value, "/answers").unwrap(), set);
    }
    let mut value = answers_to_value(ArgumentSet::all());
    value.as_object_mut().unwrap().remove("Q4");
    assert_eq!(schema_path(answers_from_value(&value, "/answers").unwrap_err()), "/answers/Q4");
    value["Q4"] = json!(1);
    assert_eq!(schema_path(answers_from_value(&value, "/answers").unwrap_err()), "/answers/Q4");
}

#[test]
fn matrix_csv_layout_and_loader() {
    let c = c_major_preset();
    let csv = matrix_to_csv(c.chords(), c.matrix());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], r#""0:0,4,7","5:0,4,7","7:0,4,7,10""#);
    assert_eq!(lines[1], "0.000000,0.500000,0.500000");
    assert_eq!(lines.len(), 4);
    let (chords, matrix) = matrix_from_csv(&csv).unwrap();
    assert_eq!(chords, c.chords());
    assert_eq!(&matrix, c.matrix());
}

#[test]
fn matrix_csv_loader_renormalises_rounded_rows() {
    let text = "\"0:0\",\"1:0\",\"2:0\",\"3:0\"\n0,0.333333,0.333333,0.333333\n1,0,0,0\n0,0,0,0\n0,0,0,0\n";
    let (_, m) = matrix_from_csv(text).unwrap();
    assert!((m.row_sum(0) - 1.0).abs() <= 1e-12);
    let bad = "\"0:0\",\"1:0\"\n0,0.9\n0,0\n";
    assert!(matrix_from_csv(bad).is_err());
}

fn preset_blend() -> chordblend::pipeline::BlendResult {
    run_blend(&c_major_preset(), &fsharp_major_preset(), BlendSettings::new(ArgumentSet::all())).unwrap()
}

#[test]
fn extended_round_trip() {
    let em = preset_blend().extended;
    let text = extended_to_json(&em);
    let loaded = extended_from_json(&text).unwrap();
    assert_eq!(loaded, em);
    assert_eq!(extended_to_json(&loaded), text);
}

#[test]
fn extended_loader_rejects_inconsistent_documents() {
    let em = preset_blend().extended;
    let value: serde_json::Value = serde_json::from_str(&extended_to_json(&em)).unwrap();

    let mut bad = value.clone();
    bad["sector_map"][0][0] = json!("C");
    assert_eq!(schema_path(extended_from_json(&bad.to_string()).unwrap_err()), "/sector_map/0/0");

    let mut bad = value.clone();
    bad["schema"] = json!("em/2");
    assert_eq!(schema_path(extended_from_json(&bad.to_string()).unwrap_err()), "/schema");

    let mut bad = value.clone();
    bad["bridge_paths"]["idiom1_to_idiom2"] = json!([]);
    assert_eq!(schema_path(extended_from_json(&bad.to_string()).unwrap_err()), "/bridge_paths");

    // Mass between two external chords.
    let n = em.len();
    let (x, y) = (n - 2, n - 1);
    let mut bad = value;
    let row: Vec<f64> = (0..n).map(|j| if j == y { 1.0 } else { 0.0 }).collect();
    bad["matrix"][x] = json!(row);
    assert_eq!(schema_path(extended_from_json(&bad.to_string()).unwrap_err()), format!("/matrix/{x}/{y}"));
}

#[test]
fn sector_csv_uses_tag_vocabulary() {
    let em = preset_blend().extended;
    let csv = sectors_to_csv(&em);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), matrix_to_csv(em.chords(), em.matrix()).lines().next().unwrap());
    let tags: Vec<String> = Sector::ALL.iter().map(|s| s.tag().to_string()).collect();
    let mut rows = 0;
    for line in lines {
        rows += 1;
        for cell in line.split(',') {
            assert!(tags.contains(&cell.to_string()), "{cell}");
        }
    }
    assert_eq!(rows, em.len());
}
