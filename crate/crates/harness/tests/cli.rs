use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use okbody::plot;
use okbody_core::exactgeom::{hull, QVector};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_okbody"))
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_object(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is a JSON error object")
}

fn write_scenario(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn bundled_corpus_passes() {
    let o = run(&["verify-paper"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("8/8 checks passed"));
}

#[test]
fn perturbed_golden_fails_only_its_own_check() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(corpus()).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let golden = dir.path().join("01_veronese_triangle.json");
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&golden).unwrap()).unwrap();
    let vertices = doc["body"]["vertices"].as_array_mut().unwrap();
    let apex = vertices.iter_mut().find(|v| v[1] == "4").expect("apex (0,4)");
    *apex = serde_json::json!(["0", "5"]);
    let mut text = serde_json::to_string_pretty(&doc).unwrap();
    text.push('\n');
    fs::write(&golden, text).unwrap();

    let o = run(&["verify-paper", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].contains("01_veronese_triangle.toml"));
    assert!(out.contains("7/8 checks passed"));
}

#[test]
fn corpus_location_follows_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .arg("verify-paper")
        .env(okbody::verify::CORPUS_ENV, dir.path())
        .output()
        .unwrap();
    // An empty corpus verifies nothing and is not a pass.
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0/0 checks passed"));
}

#[test]
fn runs_are_byte_identical() {
    for name in ["01_veronese_triangle.toml", "05_translate.toml", "07_vertex_hit.toml"] {
        let p = corpus().join(name);
        let a = run(&["run", p.to_str().unwrap()]);
        let b = run(&["run", p.to_str().unwrap()]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&["verify-paper"]);
    let b = run(&["verify-paper"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_rows_round_trip() {
    let p = corpus().join("01_veronese_triangle.toml");
    let o = run(&["body", p.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows: Vec<&str> = text.lines().collect();
    rows.sort_unstable();
    assert_eq!(rows, vec!["0,0", "0,4", "1,0"]);
    let expected = hull(&[
        QVector::from_ints(&[0, 0]),
        QVector::from_ints(&[1, 0]),
        QVector::from_ints(&[0, 4]),
    ])
    .unwrap();
    assert_eq!(plot::parse_csv(&text).unwrap(), expected);
}

#[test]
fn plot_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("blowup");
    let p = corpus().join("08_blowup_body.toml");
    let o = run(&["plot", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{:?}", o);
    let svg = fs::read_to_string(out.with_extension("svg")).unwrap();
    assert!(svg.contains("<polygon"));
    let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(pts.split_whitespace().count(), 3);
    let csv = fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let segment = hull(&[QVector::from_ints(&[0, 0]), QVector::from_ints(&[2, 1])]).unwrap();
    assert!(plot::svg(&segment).unwrap().contains("<polyline"));
    let interval = hull(&[QVector::from_ints(&[0]), QVector::from_ints(&[3])]).unwrap();
    assert!(plot::svg(&interval).is_err());
}

const BLOWUP_HEADER: &str = r#"
command = "zariski"
[model]
kind = "surface"
classes = ["H", "E"]
curves = [{ name = "E", class = [0, 1] }, { name = "F", class = [1, -1] }]
"#;

#[test]
fn malformed_gram_row_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{BLOWUP_HEADER}gram = [[1, 0], [0]]\n[divisor]\nclass = [1, 0]\n");
    let p = write_scenario(dir.path(), "bad.toml", &text);
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let e = error_object(&o);
    assert_eq!(e["error"]["kind"], "validation");
    assert_eq!(e["error"]["path"], "model.gram[1]");
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(dir.path(), "syntax.toml", "command = [\n");
    assert_eq!(run(&["run", p.to_str().unwrap()]).status.code(), Some(2));

    let p = write_scenario(dir.path(), "rational.toml", &format!(
        "{BLOWUP_HEADER}gram = [[1, 0], [0, \"-1/0\"]]\n[divisor]\nclass = [1, 0]\n"
    ));
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_object(&o)["error"]["path"], "model.gram[1][1]");

    // -H is not pseudo-effective.
    let p = write_scenario(dir.path(), "negative.toml", &format!(
        "{BLOWUP_HEADER}gram = [[1, 0], [0, -1]]\n[divisor]\nclass = [-1, 0]\n"
    ));
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_object(&o)["error"]["kind"], "computation");
}

#[test]
fn zariski_document_lists_the_negative_part() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(dir.path(), "z.toml", &format!(
        "{BLOWUP_HEADER}gram = [[1, 0], [0, -1]]\n[divisor]\nclass = [1, \"3/2\"]\n"
    ));
    let o = run(&["run", p.to_str().unwrap()]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["zariski"]["p"], serde_json::json!(["1", "0"]));
    assert_eq!(doc["zariski"]["negative_part"]["E"], "3/2");
    assert_eq!(doc["zariski"]["volume"], "1");
    assert_eq!(doc["command"], "zariski");
    assert_eq!(doc["provenance"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn point_mode_flag_overrides_the_scenario() {
    let p = corpus().join("05_translate.toml");
    let o = run(&["translate", p.to_str().unwrap(), "--point-mode", "generic"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["shift"], serde_json::json!(["0", "0"]));

    let p = corpus().join("08_blowup_body.toml");
    let o = run(&["scan", p.to_str().unwrap()]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["scan"]["breakpoints"], serde_json::json!(["0", "1"]));
}

#[test]
fn semigroup_levels_respect_max_degree() {
    let p = corpus().join("02_curve_segment.toml");
    let o = run(&["semigroup", p.to_str().unwrap(), "--max-degree", "3"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let levels = doc["levels"].as_object().unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels["3"].as_array().unwrap().len(), 16);
    assert_eq!(doc["closure_violations"], 0);
}
