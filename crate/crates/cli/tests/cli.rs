use std::io::Write;
use std::process::{Command, Output};

fn powerfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerfree"))
        .args(args)
        .env_remove("POWERFREE_NODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = powerfree(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

fn morphism_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

const THUE_MORSE: &str = r#"{"k":3,"images":{"0":"01","1":"10"}}"#;

#[test]
fn count_matches_known_values() {
    let out = stdout(&["count", "--k", "3", "--alphabet", "2", "--max-n", "24"]);
    assert!(out.starts_with("n,count\n0,1\n1,2\n2,4\n3,6\n"));
    assert_eq!(out.lines().last(), Some("24,24054"));
}

#[test]
fn count_is_identical_across_worker_counts() {
    let one = stdout(&["count", "--max-n", "30", "--workers", "1"]);
    let four = stdout(&["count", "--max-n", "30", "--workers", "4"]);
    assert_eq!(one, four);
}

#[test]
fn counts_beyond_the_budget_come_from_the_fixture() {
    let out = stdout(&["count", "--max-n", "48", "--budget", "100000"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,count,source");
    assert_eq!(lines[25], "24,24054,enumeration");
    assert_eq!(lines.last(), Some(&"48,203577756,fixture"));
    let ternary = powerfree(&[
        "count",
        "--k",
        "2",
        "--alphabet",
        "3",
        "--max-n",
        "60",
        "--budget",
        "1000",
    ]);
    assert_eq!(ternary.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&ternary.stderr).contains("resource limit"));
}

#[test]
fn generating_functions() {
    assert_eq!(
        stdout(&[
            "genfun",
            "--k",
            "3",
            "--alphabet",
            "2",
            "--p",
            "1",
            "--exact"
        ]),
        "num: 1,1,1 / den: 1,-1,-1\n"
    );
    assert_eq!(
        stdout(&["genfun", "--p", "0", "--exact"]),
        "num: 1 / den: 1,-2\n"
    );
    assert_eq!(
        stdout(&["genfun", "--p", "1", "--exact", "--pretty"]),
        "(1 + x + x^2)/(1 - x - x^2)\n"
    );
    let series = stdout(&["genfun", "--p", "1", "--max-n", "5"]);
    assert_eq!(series, "n,count\n0,1\n1,2\n2,4\n3,6\n4,10\n5,16\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "genfun", "--p", "3", "--exact", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(
        (json["d_num"].as_u64(), json["d_den"].as_u64()),
        (Some(21), Some(13))
    );
}

#[test]
#[allow(clippy::approx_constant)]
fn entropies_and_poles() {
    let out = stdout(&["hp", "--p-max", "3"]);
    let h: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    for (got, want) in h.iter().zip([0.693147, 0.481212, 0.427982, 0.394948]) {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
    let poles = stdout(&["poles", "--p", "1"]);
    assert_eq!(
        poles,
        "re,im,multiplicity\n0.61803398875,0,1\n-1.61803398875,0,1\n"
    );
}

#[test]
fn frequencies_of_a_morphism() {
    let f = morphism_file(THUE_MORSE);
    let path = f.path().to_str().unwrap();
    assert_eq!(stdout(&["freq", "--morphism", path]), "0:1/2 1:1/2\n");
    assert_eq!(
        stdout(&["freq", "--morphism", path, "--format", "csv"]),
        "letter,frequency\n0,1/2\n1,1/2\n"
    );
    let range = stdout(&["freq", "--n", "20", "--format", "csv"]);
    assert!(range.starts_with("n,letter,min,max,lower,upper\n20,0,"));
}

#[test]
fn morphism_verification() {
    let tm = morphism_file(THUE_MORSE);
    let out = stdout(&["verify-morphism", "--morphism", tm.path().to_str().unwrap()]);
    assert_eq!(out, "verdict,k,method,witness,image\nverified,3,tmin,,\n");
    let bad = morphism_file(r#"{"images":{"0":"00","1":"11"}}"#);
    let out = stdout(&[
        "verify-morphism",
        "--morphism",
        bad.path().to_str().unwrap(),
    ]);
    assert!(out.lines().nth(1).unwrap().starts_with("refuted,3,tmin,"));
    let squarefree = stdout(&[
        "verify-morphism",
        "--morphism",
        tm.path().to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert!(squarefree.contains("refuted,2,squarefree-uniform"));
}

#[test]
fn morphism_search() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "search-morphisms",
        "--k",
        "3",
        "--source",
        "3",
        "--target",
        "2",
        "--length",
        "6",
    ]))
    .unwrap();
    assert_eq!(json["sets"].as_array().unwrap().len(), 12);
    assert_eq!(json["orbits"].as_array().unwrap().len(), 3);
    let csv = stdout(&[
        "search-morphisms",
        "--source",
        "3",
        "--length",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "set,orbit\n");
}

#[test]
fn test_set_summary_and_listing() {
    let summary = stdout(&["testset", "--k", "3", "--alphabet", "2"]);
    let total: u64 = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    let listing = stdout(&["testset", "--k", "3", "--alphabet", "2", "--list"]);
    assert_eq!(listing.lines().count() as u64, total);
    let mut sorted: Vec<&str> = listing.lines().collect();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len() as u64, total);
}

#[test]
fn bounds_as_json() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "bounds",
        "--count-n",
        "80",
        "--brinkhuis",
        "5:15",
        "--brinkhuis",
        "2:18",
    ]))
    .unwrap();
    let list = json.as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert!(list.iter().all(|b| b["nats"] == true));
    assert_eq!(list[0]["kind"], "upper");
    assert!((list[0]["value"].as_f64().unwrap() - 0.389855).abs() < 5e-7);
    assert_eq!(list[0]["note"], "count from fixture");
    assert!((list[1]["value"].as_f64().unwrap() - 0.114960).abs() < 5e-7);
    let reference: serde_json::Value =
        serde_json::from_str(&stdout(&["bounds", "--language", "ternary-squarefree"])).unwrap();
    assert!(reference
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b["citation"].is_string()));
}

#[test]
fn distribution_statistics() {
    let joint = stdout(&["dist", "--n", "10", "--output", "joint"]);
    let counts: Vec<u64> = joint
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.iter().sum::<u64>(), 118);
    assert!(counts.iter().eq(counts.iter().rev()));
    let fixture = stdout(&["dist", "--n", "80"]);
    assert_eq!(
        fixture,
        "n,variance,min,max,source\n80,2.12374957503,32,48,fixture\n"
    );
    let slope = stdout(&[
        "dist", "--n-min", "10", "--n-max", "20", "--output", "slope",
    ]);
    assert!(slope.starts_with("n_min,n_max,slope\n10,20,"));
}

#[test]
fn brinkhuis_sets() {
    let leech = "0121021201210;1202102012021;2010210120102";
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["brinkhuis", "--sets", leech, "--max-len", "6"])).unwrap();
    assert_eq!(v["result"]["verdict"], "verified_up_to");
    assert_eq!(v["bound"]["value"], 0.0);
    let out = stdout(&[
        "brinkhuis",
        "--sets",
        "01,02;10,12;20,21",
        "--max-len",
        "4",
        "--format",
        "csv",
    ]);
    assert!(out.lines().nth(1).unwrap().starts_with("refuted,2,2,4,,"));
}

#[test]
fn exit_codes() {
    assert_eq!(powerfree(&["nope"]).status.code(), Some(2));
    assert_eq!(powerfree(&["count"]).status.code(), Some(2));
    assert_eq!(powerfree(&["dist"]).status.code(), Some(2));
    let domain = powerfree(&["count", "--alphabet", "0", "--max-n", "3"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&domain.stderr).starts_with("error: invalid alphabet"));
    let missing = powerfree(&["freq", "--morphism", "/nonexistent/m.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(
        powerfree(&["genfun", "--p", "9", "--exact"]).status.code(),
        Some(1)
    );
}
