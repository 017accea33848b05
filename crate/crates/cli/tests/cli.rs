use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bubble-cross"))
        .args(args)
        .env_remove("BUBBLE_CROSS_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn graph_dot_has_24_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b4.dot");
    let o = run(&[
        "graph",
        "--n",
        "4",
        "--format",
        "dot",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = fs::read_to_string(&path).unwrap();
    let vertices = dot
        .lines()
        .filter(|l| l.ends_with("\";") && !l.contains("--"))
        .count();
    assert_eq!(vertices, 24);
    assert_eq!(dot.matches(" -- ").count(), 36);
}

#[test]
fn graph_bprime_json_reports_core() {
    let o = run(&["graph", "--n", "6", "--bprime", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["core_count"], 120);
}

#[test]
fn graph_guard() {
    let o = run(&["graph", "--n", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn mesh_counts_agree() {
    let o = run(&["mesh", "--n", "6", "--a", "1", "--P", "2,4,5,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "total 30\noracle 30\n");
}

#[test]
fn mesh_svg_is_annotated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bubble-cross"))
        .args([
            "mesh", "--n", "6", "--a", "2", "--P", "2,4,5,3", "--format", "svg",
        ])
        .args(["-o", "m.svg"])
        .env("BUBBLE_CROSS_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("m.svg")).unwrap();
    assert!(svg.contains("crossings=21"));
    assert_eq!(svg.matches("fill=\"red\"").count(), 21);
}

#[test]
fn mesh_rejects_duplicates() {
    let o = run(&["mesh", "--n", "6", "--a", "2", "--P", "2,2,5,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_table() {
    let o = run(&["bounds", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].starts_with("7,237456,"));
    assert!(rows[1].starts_with("8,12402864,"));
    assert_eq!(run(&["bounds", "--n-max", "6"]).status.code(), Some(2));
}

#[test]
fn bounds_json_uses_exact_strings() {
    let o = run(&["bounds", "--n-max", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let last = &doc["rows"][23];
    assert_eq!(last["n"], 30);
    assert_eq!(
        last["bound"],
        "38839340046602492602511489931951920806285294045870518435840000"
    );
    assert_eq!(last["bound"], last["bracket"]);
}

fn trace_rows(text: &str, n: usize) -> Vec<(i64, u64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<u64>().unwrap())
                .collect::<Vec<_>>()
        })
        .filter(|r| r[0] as usize == n)
        .map(|r| (r[1] as i64 - r[2] as i64, r[3]))
        .collect()
}

#[test]
fn trace_to_seven() {
    let o = run(&["trace", "--to", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = trace_rows(&stdout(&o), 7);
    assert_eq!(rows.iter().map(|r| r.1).sum::<u64>(), 840);
    let balanced: u64 = rows.iter().filter(|r| r.0 == 0).map(|r| r.1).sum();
    assert_eq!(balanced, 480);
}

#[test]
fn trace_random_policy_at_eight() {
    let o = run(&["trace", "--to", "8", "--policy", "random", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = trace_rows(&stdout(&o), 8);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.0.abs() == 1));
}

#[test]
fn trace_guard() {
    assert_eq!(run(&["trace", "--to", "11"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "oracle",
        "monotone",
        "maxima",
        "states",
        "symmetry",
        "planarity",
    ] {
        let o = run(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).ends_with(&format!("{suite}: pass\n")));
    }
    let o = run(&["verify", "oracle"]);
    assert!(stdout(&o).contains("120 exhaustive + 400 random specs, all equal"));
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["graph", "--n", "5", "--bprime", "--format", "json"],
        &[
            "mesh",
            "--n",
            "8",
            "--a",
            "3",
            "--P",
            "2,4,6,3,5,7",
            "--format",
            "svg",
        ],
        &["bounds", "--n-max", "12", "--format", "json"],
        &["trace", "--to", "9", "--policy", "random", "--seed", "99"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut contents = Vec::new();
        for round in 0..2 {
            let path = dir.path().join(format!("{i}-{round}.out"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_str().unwrap().to_string();
            full.extend(["-o", &p]);
            let o = run(&full);
            assert_eq!(o.status.code(), Some(0));
            contents.push(fs::read(&path).unwrap());
        }
        assert_eq!(contents[0], contents[1], "{args:?}");
    }
}

#[test]
fn unwritable_path_is_usage_error() {
    let o = run(&["bounds", "--n-max", "7", "-o", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
