use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn foliate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foliate")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = foliate(&all);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("foliate-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn assert_schema(def: &str, instance: &Value) {
    let text = std::fs::read_to_string(crate_dir().join("schema/reports.schema.json")).unwrap();
    let mut schema: Value = serde_json::from_str(&text).unwrap();
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{def}: {errors:?}\n{instance:#}");
}

const Y1: &str = "d/dx0 + x2*d/dx1";
const Y2: &str = "d/dx1 + x0*d/dx2";

#[test]
fn dimension_of_a_coordinate_plane() {
    let o = foliate(&["--nvars", "4", "dimension", "--ideal", "x0,x1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
    let (code, v) = json(&["--nvars", "4", "dimension", "--ideal", "x0,x1"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["projective_dimension"], 1);
    assert_schema("dimension", &v);
}

#[test]
fn parse_errors_exit_with_usage_status() {
    let o = foliate(&["dimension", "--ideal", "x0^2 +"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 7") && err.contains("end of input"), "{err}");
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(foliate(&["dimension", "--ideal", "x0", "--bogus"]).status.code(), Some(2));
    assert_eq!(foliate(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn index_beyond_declared_arity_is_a_usage_error() {
    assert_eq!(foliate(&["--nvars", "2", "dimension", "--ideal", "x3"]).status.code(), Some(2));
}

#[test]
fn divides_agrees_with_the_construction() {
    // X = Y1 + x2 Y2: the first function is 1
    let x = "d/dx0 + 2*x2*d/dx1 + x0*x2*d/dx2";
    let (code, v) = json(&["divides", "--field", x, "--gens", Y1, Y2]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outcome"], "DIVIDES");
    assert_eq!(v["witness"]["kind"], "exact");
    assert_schema("division", &v);

    // X = (1 + x1) Y1 + x2 Y2: a unit that is not a polynomial inverse gives a jet witness
    let x = "(1 + x1)*d/dx0 + (x2 + x1*x2 + x2)*d/dx1 + x0*x2*d/dx2";
    let (code, v) = json(&["divides", "--field", x, "--gens", Y1, Y2]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outcome"], "DIVIDES");
    assert_eq!(v["witness"]["kind"], "jet");
    assert_schema("division", &v);

    // X = x0 Y1 + x1 Y2: both functions vanish at the origin
    let x = "x0*d/dx0 + (x0*x2 + x1)*d/dx1 + x0*x1*d/dx2";
    let (code, v) = json(&["divides", "--field", x, "--gens", Y1, Y2]);
    assert_eq!(code, 1);
    assert_eq!(v["outcome"], "FAILS");
    assert_eq!(v["values_at_basepoint"], serde_json::json!(["0", "0"]));
    assert_schema("division", &v);
}

#[test]
fn non_tangent_fields_are_a_mathematical_failure() {
    let (code, v) = json(&["divides", "--field", "d/dx2", "--gens", Y1, Y2]);
    assert_eq!(code, 1);
    assert_schema("error", &v);
}

#[test]
fn dichotomy_regular_branch() {
    // rank 2 linear part in the span of the regular generators d/dx0, d/dx1
    let (code, v) = json(&["--nvars", "3", "dichotomy", "--field", "x0*d/dx0 + x1*d/dx1", "--gens", "d/dx0", "d/dx1"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outcome"], "REGULAR");
    assert_eq!(v["linear_rank"], 2);
    assert_schema("division", &v);
}

#[test]
fn saito_and_derham_solutions_round_trip() {
    let radial = "x0*d/dx0 + x1*d/dx1 + x2*d/dx2";
    let (code, v) = json(&["saito", "--field", radial, "--form", "x1*dx0 - x0*dx1"]);
    assert_eq!(code, 0);
    assert_eq!(v["beta"], "(-1)*dx0^dx1");
    assert_schema("solution", &v);

    let (code, v) = json(&["derham", "--omega1", "dx0", "--form", "x1*dx0^dx1"]);
    assert_eq!(code, 0);
    assert_schema("solution", &v);

    // (x0 dx1 - x1 dx0) ∧ β vanishes at the origin, dx0 ∧ dx1 does not
    let (code, v) = json(&["derham", "--omega1", "x0*dx1 - x1*dx0", "--form", "dx0^dx1"]);
    assert_eq!(code, 1);
    assert_eq!(v["solvable"], false);
}

#[test]
fn contact_form_is_valid_but_not_integrable() {
    let contact = "x0*dx1 - x1*dx0 + x2*dx3 - x3*dx2";
    let (code, v) = json(&["validate", "--form", contact]);
    assert_eq!(code, 0);
    assert_eq!(v["distribution"]["degree"], 0);
    assert_schema("validate", &v);
    let o = foliate(&["integrable", "--form", contact]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "NOT INTEGRABLE");
    assert_eq!(foliate(&["integrable", "--form", "x0*dx1 - x1*dx0"]).status.code(), Some(0));
}

#[test]
fn invalid_forms_report_their_common_divisor() {
    let (code, v) = json(&["validate", "--form", "x0^2*dx1 - x0*x1*dx0"]);
    assert_eq!(code, 1);
    assert_eq!(v["distribution"]["flags"]["common_divisor"], "x0");
}

#[test]
fn degree_and_singular_set_of_a_linear_field() {
    let v = "x1*d/dx0 + x3*d/dx2";
    assert_eq!(stdout(&foliate(&["degree", "--field", v])).trim(), "1");
    let (_, s) = json(&["singular", "--field", v]);
    assert_eq!(s["projective_codim"], 2);
    let o = foliate(&["linear-rank", "--field", v, "--point", "1,0,0,0"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn inputs_may_be_files() {
    let dir = scratch("files");
    let path = dir.join("omega.txt");
    std::fs::write(&path, "x0*dx1 - x1*dx0\n").unwrap();
    let o = foliate(&["degree", "--form", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn split_then_theorem_b_on_the_factor_foliation() {
    let x = "x0*d/dx0 + 2*x1*d/dx1 + 3*x2*d/dx2";
    let (code, d) = json(&["split", "--fields", x, "d/dx0 + d/dx1 + d/dx2 + d/dx3"]);
    assert_eq!(code, 0);
    assert_eq!(d["degree"], 1);
    let form = d["form"].as_str().unwrap();
    let (code, tf) = json(&["tangent-fields", "--form", form, "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(tf["quotient_dim"].as_u64().unwrap() >= 1);
    let comps = ["x1,x2,x3@1,0,0,0", "x0,x2,x3@0,1,0,0", "x0,x1,x3@0,0,1,0", "x0,x1,x2@0,0,0,1"];
    let mut args = vec!["theorem-b", "--form", form, "--field", x];
    for c in &comps {
        args.extend(["--component", c]);
    }
    let (code, v) = json(&args);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["split_type"], serde_json::json!([0, 1]));
    assert_schema("theorem_b", &v);
}

fn reproduce_to(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = dir.join("report.json");
    let mut all = vec!["reproduce"];
    all.extend_from_slice(args);
    all.extend(["--out", out.to_str().unwrap()]);
    let o = foliate(&all);
    (o.status.code().unwrap(), std::fs::read_to_string(out).unwrap())
}

#[test]
fn reproduce_case_v_degree_two() {
    let dir = scratch("v2");
    let (code, body) = reproduce_to(&dir, &["--case", "V", "--degree", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["twelve_zero"], true);
    assert_eq!(v["chains_found"], true);
    assert_eq!(v["kernel_dim"], 7);
    assert_eq!(v["split_type"], serde_json::json!([0, 0]));
    assert_schema("reproduce", &v);
}

#[test]
fn reproduce_matches_golden_files() {
    let dir = scratch("golden");
    let golden = crate_dir().join("tests/golden");
    for case in ["V", "VI"] {
        for d in ["1", "2", "3"] {
            let expected = std::fs::read_to_string(golden.join(format!("reproduce_{case}_{d}.json"))).unwrap();
            for _ in 0..2 {
                let (_, body) = reproduce_to(&dir, &["--case", case, "--degree", d]);
                assert_eq!(body, expected, "case {case}, degree {d}");
            }
            assert_schema("reproduce", &serde_json::from_str(&expected).unwrap());
        }
    }
    let expected = std::fs::read_to_string(golden.join("reproduce_nilpotent_sweep.json")).unwrap();
    // job order on the command line does not matter
    let (_, body) = reproduce_to(&dir, &["--case", "VI", "V", "--degree", "3", "1", "2"]);
    assert_eq!(body, expected);
    assert_schema("reproduce", &serde_json::from_str(&expected).unwrap());
}

#[test]
fn reproduce_rejects_bad_parameters() {
    let dir = scratch("bad");
    let out = dir.join("r.json");
    let o = foliate(&["reproduce", "--case", "I", "--degree", "1", "--a", "1", "--b", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = foliate(&["reproduce", "--case", "VII", "--degree", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
