use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn spectre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectre")).args(args).env_remove("SPECTRE_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn temp_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn brieskorn_spectrum_output() {
    let o = spectre(&["spectrum", "--polygon", "[[2,3,1]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"mu\":2,\"spectrum\":[{\"alpha\":\"-1/6\",\"mult\":1},{\"alpha\":\"1/6\",\"mult\":1}]}\n");
}

#[test]
fn hertling_output() {
    let o = spectre(&["hertling", "--polygon", "[[1,2,2],[2,1,2]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"bound\":\"1/12\",\"variance\":\"19/234\",\"verdict\":\"strict\"}\n");
}

#[test]
fn maxspec_output() {
    let o = spectre(&["maxspec", "--polygon", "[[1,2,2],[3,1,1]]"]);
    assert_eq!(stdout(&o), "{\"alpha\":\"2/5\",\"multiplicity\":1,\"witness\":\"n1\"}\n");
}

#[test]
fn defect_report_fields() {
    let v = json(&spectre(&["defect", "--polygon", "[[1,2,2],[2,1,2]]"]));
    assert_eq!(v["defect"], "-1/6");
    assert_eq!(v["mu"], 13);
    assert_eq!(v["edge_terms"][0]["e"], "1/18");
    assert_eq!(v["edge_terms"][0]["delta"], 3);
    assert_eq!(v["variance"], "19/234");
}

#[test]
fn pairs_are_sorted_by_alpha_then_weight() {
    let v = json(&spectre(&["pairs", "--polygon", "[[1,2,2],[2,1,2]]"]));
    let entries = v.as_array().unwrap();
    let keys: Vec<(f64, i64)> = entries
        .iter()
        .map(|e| {
            let a = e["alpha"].as_str().unwrap();
            let x = match a.split_once('/') {
                Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
                None => a.parse().unwrap(),
            };
            (x, e["weight"].as_i64().unwrap())
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(entries.iter().map(|e| e["mult"].as_i64().unwrap()).sum::<i64>(), 13);
}

#[test]
fn convert_round_trips() {
    let faces = "[[1,2,2],[2,1,2],[3,1,1]]";
    let diagram = spectre(&["convert", "--polygon", faces]);
    assert_eq!(diagram.status.code(), Some(0));
    let file = temp_file(&stdout(&diagram));
    let back = json(&spectre(&["convert", "--input", path(&file)]));
    assert_eq!(back["faces"], serde_json::from_str::<Value>(faces).unwrap());
}

#[test]
fn convert_keeps_the_orientation_of_a_single_face() {
    let diagram = spectre(&["convert", "--polygon", "[[1,5,3]]"]);
    let file = temp_file(&stdout(&diagram));
    assert_eq!(json(&spectre(&["convert", "--input", path(&file)]))["faces"], serde_json::json!([[1, 5, 3]]));
}

#[test]
fn compact_chain_matches_polygon() {
    let file = temp_file("(1,2)[1,1] – (2,1)[1,1]\n");
    let a = spectre(&["spectrum", "--input", path(&file)]);
    let b = spectre(&["spectrum", "--polygon", "[[1,2,2],[2,1,2]]"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn milnor_and_oracles_agree() {
    let mu = json(&spectre(&["milnor", "--polygon", "[[1,2,2],[2,1,2]]"]));
    assert_eq!(mu["mu"], 13);
    let lattice = spectre(&["oracle", "lattice", "--polygon", "[[2,3,1]]"]);
    let closed = spectre(&["oracle", "brieskorn", "2", "3"]);
    assert_eq!(lattice.stdout, closed.stdout);
    let naive = json(&spectre(&["oracle", "naive", "--polygon", "[[1,2,2],[2,1,2]]"]));
    assert_eq!(naive["naive_defect"], "-1/6");
}

#[test]
fn decompose_of_polygon_is_itself() {
    let v = json(&spectre(&["decompose", "--polygon", "[[2,3,1]]"]));
    assert_eq!(v, serde_json::json!([{"coef": 1, "faces": [[2, 3, 1]]}]));
}

#[test]
fn decimal_column_is_display_only() {
    let v = json(&spectre(&["spectrum", "--polygon", "[[2,3,1]]", "--decimal", "3"]));
    assert_eq!(v["spectrum"][0]["alpha"], "-1/6");
    assert_eq!(v["spectrum"][0]["alpha_decimal"], "-0.167");
}

#[test]
fn text_format_is_a_table() {
    let o = spectre(&["spectrum", "--polygon", "[[2,3,1]]", "--format", "text"]);
    assert_eq!(stdout(&o), "mu  2\nspectrum:\n  alpha  mult\n   -1/6     1\n    1/6     1\n");
}

#[test]
fn output_is_byte_stable() {
    let args = ["pairs", "--polygon", "[[1,3,2],[2,1,1]]"];
    assert_eq!(spectre(&args).stdout, spectre(&args).stdout);
}

#[test]
fn malformed_input_exits_with_one_and_names_the_field() {
    let file = temp_file("{\"vertices\":[\"a\"],\"edges\":[{\"a\":\"a\",\"b\":\"b\",\"wa\":1}],\"arrows\":[],\"root\":\"a\"}");
    let o = spectre(&["spectrum", "--input", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("edges[0]") && err.contains("wb"), "{err}");
    assert_eq!(spectre(&["spectrum", "--polygon", "[[2,4,1]]"]).status.code(), Some(1));
    assert_eq!(spectre(&["spectrum"]).status.code(), Some(1));
    assert_eq!(spectre(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn invalid_diagram_lists_violations() {
    let file = temp_file(
        "{\"vertices\":[\"h\",\"v\",\"t\"],\"edges\":[{\"a\":\"h\",\"b\":\"v\",\"wa\":1,\"wb\":2},\
         {\"a\":\"v\",\"b\":\"t\",\"wa\":4,\"wb\":1}],\"arrows\":[{\"at\":\"v\",\"mult\":1}],\"root\":\"v\"}",
    );
    let o = spectre(&["spectrum", "--input", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_reports_every_family() {
    let o = spectre(&["verify", "--seed", "7", "--count", "6", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let families = v["families"].as_array().unwrap();
    assert_eq!(families.len(), 9);
    assert!(families.iter().all(|f| f["failed"] == 0));
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn verify_seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_spectre"))
        .args(["verify", "--count", "2", "--depth", "0"])
        .env("SPECTRE_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["seed"], 41);
}
