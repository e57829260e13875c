use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberwise"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const KERNEL: &str = r#"{"a":1,"b":2,"c":0,"n":5}"#;

const GOLDEN: &[(&str, &[&str])] = &[
    ("transform", &["transform", KERNEL, r#"{"r":1,"d":5,"space":"M"}"#]),
    ("transform_annotation", &["transform", KERNEL, r#"{"r":3,"d":5,"space":"M"}"#]),
    ("kernel", &["kernel", KERNEL]),
    ("canonicalize", &["canonicalize", r#"{"r":-8,"d":-5,"dual":true}"#, "--generic"]),
    (
        "equal",
        &["equal", r#"{"r":5,"d":9,"space":"X"}"#, r#"{"r":2,"d":9,"space":"M"}"#, "--kernel", KERNEL, "--degrees", "5"],
    ),
    ("hom", &["hom", "configs/bundles/cyclic_rank2_degree1.toml"]),
    ("simple", &["simple", "configs/bundles/trivial_rank2.toml"]),
    ("stable_unstable", &["stable", "configs/bundles/unstable_split.toml"]),
    ("stable_cyclic", &["stable", "configs/bundles/cyclic_rank2_degree1.toml"]),
    ("chi", &["chi", "projective-plane", "--c1", "h=2"]),
    ("push", &["push", "elliptic-cy3-over-p2", "--c1", "sigma=1", "--twist", "h=1"]),
    ("cubic", &["cubic", "elliptic-cy3-over-p2"]),
    ("solve_single", &["solve", "configs/samples/single_sample.toml"]),
    ("validate", &["validate", "configs/rings/quintic.toml"]),
];

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let got = stdout(args);
        let path = golden_path(name);
        if update {
            fs::write(&path, &got).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn reports_are_single_json_lines() {
    for (_, args) in GOLDEN {
        let out = stdout(args);
        assert_eq!(out.lines().count(), 1);
        serde_json::from_str::<serde_json::Value>(&out).unwrap();
    }
}

#[test]
fn exit_codes_follow_the_taxonomy() {
    let cases: &[(&[&str], i32)] = &[
        (&["transform", "{", r#"{"r":1,"d":1}"#], 1),
        (&["frobnicate"], 1),
        (&["kernel", r#"{"a":2,"b":1,"c":0,"n":1}"#], 2),
        (&["kernel", r#"{"a":1,"b":5,"c":0,"n":5}"#], 2),
        (&["transform", KERNEL, r#"{"r":2,"d":4,"space":"M"}"#], 2),
        (&["transform", KERNEL, r#"{"r":1,"d":5,"space":"X"}"#], 2),
        (&["transform", r#"{"a":1,"b":0,"c":0,"n":1}"#, r#"{"r":1,"d":0,"space":"M"}"#], 3),
        (&["stable", "configs/bundles/trivial_rank2.toml"], 2),
        (&["hom", "does/not/exist.toml"], 1),
        (&["chi", "nowhere"], 1),
        (&["scan", "--field", "prime:91"], 1),
        (&["solve"], 1),
        (&["push", "projective-plane"], 1),
        (&["cubic", "elliptic-cy3-over-p2", "H=1"], 1),
        (&["cubic", "elliptic-cy3-over-p2", "H=1", "1=1", "H=1"], 2),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn underdetermined_solve_is_a_result() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["solve", "configs/samples/single_sample.toml"])).unwrap();
    assert_eq!(v["status"], "underdetermined");
    assert!(!v["null_directions"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_and_table_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["kernel", KERNEL, "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), stdout(&["kernel", KERNEL]));
    let table = stdout(&["kernel", KERNEL, "--table"]);
    assert!(table.lines().any(|l| l.starts_with("determinant") && l.ends_with(" 1")));
}

#[test]
fn workflow_files_match_direct_invocations() {
    let via = stdout(&["run", "configs/workflows/transform_walkthrough.toml"]);
    assert_eq!(via, stdout(&["transform", KERNEL, r#"{"r":1,"d":5,"space":"M"}"#]));
    let solved: serde_json::Value = serde_json::from_str(&stdout(&["run", "configs/workflows/solve_synthetic.toml"])).unwrap();
    assert_eq!(solved["synthetic"]["recovered"], true);
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = fs::read_to_string(root().join("schemas").join(name)).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn toml_as_json(path: &Path) -> serde_json::Value {
    let v: toml::Value = toml::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    serde_json::to_value(v).unwrap()
}

fn tomls(dir: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(root().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    v.sort();
    v
}

#[test]
fn shipped_configs_conform_to_schemas() {
    let groups = [
        ("ring.schema.json", tomls("configs/rings")),
        ("ring.schema.json", tomls("crates/core/rings")),
        ("bundle.schema.json", tomls("configs/bundles")),
        ("samples.schema.json", tomls("configs/samples")),
        ("workflow.schema.json", tomls("configs/workflows")),
        ("scan.schema.json", vec![root().join("configs/scan.toml")]),
    ];
    for (name, files) in groups {
        let v = schema(name);
        assert!(!files.is_empty(), "{name}");
        for f in files {
            let doc = toml_as_json(&f);
            let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{}: {errors:?}", f.display());
        }
    }
    let class = schema("class-record.schema.json");
    let kernel = schema("kernel-record.schema.json");
    let transformed: serde_json::Value = serde_json::from_str(&stdout(GOLDEN[0].1)).unwrap();
    assert!(class.is_valid(&transformed["input"]));
    assert!(class.is_valid(&transformed["output"]));
    assert!(kernel.is_valid(&transformed["kernel"]));
    let info: serde_json::Value = serde_json::from_str(&stdout(GOLDEN[2].1)).unwrap();
    assert!(kernel.is_valid(&info["kernel"]));
    assert!(!class.is_valid(&serde_json::json!({"r": 1})));
}
