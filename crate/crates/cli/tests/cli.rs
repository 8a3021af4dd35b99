use std::path::PathBuf;
use std::process::Command;

use finsite_cli::run;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn args(line: &str) -> Vec<String> {
    std::iter::once("finsite".to_string())
        .chain(line.split_whitespace().map(|w| match w.strip_prefix('@') {
            Some(name) => fx(name),
            None => w.to_string(),
        }))
        .collect()
}

/// Golden cases: file stem, arguments (`@name` is a fixture path), exit code.
const CASES: &[(&str, &str, i32)] = &[
    ("quiver_enumerate", "topology enumerate --category @quiver2.json --pairs", 0),
    ("quiver_named", "topology named --category @quiver2.json", 0),
    ("dense_rigidity", "topology rigidity --category @quiver2.json --topology @dense.json", 0),
    ("k_rule_check", "topology check --category @quiver2.json --topology @k_rule.json", 1),
    ("chain3_k_rule_pair", "torsion pair --category @chain3.json --topology @k_rule_chain3.json --field Fp:2 --samples 0", 1),
    ("dense_pair", "torsion pair --category @quiver2.json --topology dense --field Fp:2 --samples 10 --seed 7", 0),
    ("dense_classify", "torsion classify --category @quiver2.json --topology dense --module @sheaf_example.json", 0),
    ("dense_submodule", "torsion submodule --category @quiver2.json --topology dense --module @only_x.json", 0),
    ("dense_roundtrip", "torsion roundtrip --category @quiver2.json --topology dense --field Fp:3", 0),
    ("sheaf_check_example", "sheaf check --category @quiver2.json --topology dense --module @sheaf_example.json", 0),
    ("sheaf_check_only_x", "sheaf check --category @quiver2.json --topology dense --module @only_x.json", 1),
    ("sheafify_only_x", "sheaf sheafify --category @quiver2.json --topology dense --module @only_x.json", 0),
    ("dense_equivalence", "sheaf equivalence --category @quiver2.json --topology dense --samples 10 --seed 3", 0),
    ("typen_census_3", "typen census --horizon 3", 0),
    ("typen_validate_110", "typen validate --spec @spec_110.json", 0),
    ("typen_validate_bad", "typen validate --spec @spec_bad.json", 1),
    ("typen_pullback", "typen pullback --object 2 --rank 3 --degree 1", 0),
    ("typen_crosscheck", "typen crosscheck --spec @spec_110.json --horizon 3", 0),
    ("build_trunc_fi2", "category build @build_trunc_fi2.json", 0),
    ("validate_quiver", "category validate --category @quiver2.json", 0),
];

#[test]
fn golden_outputs_regenerate_exactly() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    std::fs::create_dir_all(golden_dir()).unwrap();
    let mut mismatches = Vec::new();
    for (stem, line, code) in CASES {
        let mut argv = args(line);
        argv.extend(["--format".to_string(), "json".to_string()]);
        let r = run(&argv);
        assert_eq!(r.code, *code, "{stem}: {}", r.output);
        let path = golden_dir().join(format!("{stem}.json"));
        if update {
            std::fs::write(&path, &r.output).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_default();
            if want != r.output {
                mismatches.push(stem.to_string());
            }
        }
    }
    assert!(mismatches.is_empty(), "golden files differ: {mismatches:?}; rerun with UPDATE_GOLDEN=1 after review");
}

#[test]
fn output_is_deterministic() {
    for (_, line, _) in CASES {
        for format in ["table", "json"] {
            let mut argv = args(line);
            argv.extend(["--format".to_string(), format.to_string()]);
            assert_eq!(run(&argv), run(&argv), "{line}");
        }
    }
}

fn cells(line: &str) -> Vec<&str> {
    line.split("  ").map(str::trim).filter(|c| !c.is_empty()).collect()
}

#[test]
fn quiver_tables_match_the_census() {
    let r = run(args("topology enumerate --category @quiver2.json --pairs"));
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.output.lines().collect();
    assert_eq!(cells(lines[0]), ["Topologies", "J(x)", "J(y)"]);
    assert_eq!(cells(lines[2]), ["Trivial topology", "{{1_x, f, g}}", "{{1_y}}"]);
    assert_eq!(cells(lines[3]), ["Dense topology", "{{1_x, f, g}, {f, g}}", "{{1_y}}"]);
    assert_eq!(cells(lines[4]), ["Maximal topology", "{{1_x, f, g}, {f, g}, {f}, {g}, ∅}", "{{1_y}, ∅}"]);
    assert_eq!(cells(lines[5]), ["Topology IV", "{{1_x, f, g}}", "{{1_y}, ∅}"]);
    assert_eq!(lines[7], "4 topologies");
    assert_eq!(cells(lines[9]), ["Topologies", "T(J)", "F(J)"]);
    assert_eq!(cells(lines[11]), ["Trivial topology", "0", "O Mod"]);
    assert_eq!(cells(lines[12]), ["Dense topology", "{V ∈ O Mod | V_y = 0}", "{V ∈ O Mod | ker V_f ∩ ker V_g = 0}"]);
    assert_eq!(cells(lines[13]), ["Maximal topology", "O Mod", "0"]);
    assert_eq!(cells(lines[14]), ["Topology IV", "{V ∈ O Mod | V_x = 0}", "{V ∈ O Mod | V_y = 0}"]);
}

#[test]
fn census_line() {
    let r = run(args("typen census --horizon 3"));
    assert_eq!((r.code, r.output.lines().next()), (0, Some("generic: 8, nongeneric: 8")));
}

#[test]
fn input_errors_exit_two() {
    for line in [
        "topology enumerate --category @missing.json",
        "topology named --category @quiver2.json --topology atomic",
        "torsion classify --category @quiver2.json --topology dense",
        "torsion roundtrip --category @quiver2.json --topology dense --field Q",
        "sheaf check --category @quiver2.json --topology @k_rule.json --module @only_x.json",
        "typen census --horizon 40",
        "typen census",
        "nonsense",
        "topology enumerate --category @quiver2.json --format xml",
    ] {
        assert_eq!(run(args(line)).code, 2, "{line}");
    }
}

#[test]
fn budget_caps_enumeration() {
    assert_eq!(run(args("topology enumerate --category @quiver2.json --budget 2")).code, 2);
    assert_eq!(run(args("topology enumerate --category @quiver2.json --budget 100")).code, 0);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_finsite");
    let ok = Command::new(bin)
        .args(args("sheaf check --category @quiver2.json --topology dense --module @sheaf_example.json").iter().skip(1))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("sheaf          true"));
    let bad = Command::new(bin).args(["topology", "enumerate"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--category"));
    let fail = Command::new(bin)
        .args(args("topology check --category @quiver2.json --topology @k_rule.json").iter().skip(1))
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
}
