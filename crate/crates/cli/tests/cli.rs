use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wao(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wao"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn instance(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(format!("{name}.clq"))
        .to_string_lossy()
        .into_owned()
}

/// A fresh scratch directory under the target dir.
fn scratch(tag: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(tag);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const K3: &str = "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n";
const K4: &str = "c K4\np col 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
/// Path 3-1-2-4-5 plus the chord 2-5.
const EXAMPLE: &str = "p edge 5 5\ne 3 1\ne 1 2\ne 2 4\ne 4 5\ne 2 5\n";
const C5: &str = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn without_timing(mut report: serde_json::Value) -> serde_json::Value {
    for run in report["runs"].as_array_mut().unwrap() {
        run.as_object_mut().unwrap().remove("wall_clock_secs");
    }
    report
}

#[test]
fn solves_johnson8_2_4() {
    let report = json(&wao(&[
        "solve",
        "--graph",
        &instance("johnson8-2-4"),
        "--runs",
        "20",
        "--L",
        "15",
        "--seed",
        "1",
    ]));
    assert_eq!(report["best_size"], 4);
    assert_eq!(report["complemented"], true);
    assert_eq!(report["m"], 168);
    assert_eq!(report["config"]["population_size"], 42);
    assert_eq!(report["runs"].as_array().unwrap().len(), 20);
}

#[test]
fn solves_k4_without_complement() {
    let dir = scratch("k4");
    let k4 = write(&dir, "k4.col", K4);
    let report = json(&wao(&[
        "solve",
        "--graph",
        &k4,
        "--no-complement",
        "--runs",
        "1",
    ]));
    assert_eq!(report["best_size"], 1);
    assert_eq!(report["complemented"], false);
}

#[test]
fn repeated_solves_match() {
    let args = [
        "solve",
        "--graph",
        &instance("hamming6-4"),
        "--runs",
        "3",
        "--seed",
        "11",
        "--generations",
        "60",
    ];
    let a = without_timing(json(&wao(&args)));
    let b = without_timing(json(&wao(&args)));
    assert_eq!(a, b);
    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    assert_eq!(without_timing(json(&wao(&sequential))), a);
}

#[test]
fn echoed_config_reproduces_report() {
    let dir = scratch("echo");
    let graph = instance("johnson8-4-4");
    let first = wao(&[
        "solve", "--graph", &graph, "--runs", "2", "--seed", "5", "--pc", "0.5",
    ]);
    let report = write(&dir, "report.json", &stdout(&first));
    let again = json(&wao(&["solve", "--graph", &graph, "--config", &report]));
    assert_eq!(without_timing(again), without_timing(json(&first)));

    let toml = write(
        &dir,
        "cfg.toml",
        "runs = 2\nseed = 5\ncrossover_probability = 0.5\n",
    );
    let from_toml = json(&wao(&["solve", "--graph", &graph, "--config", &toml]));
    assert_eq!(without_timing(from_toml), without_timing(json(&first)));
}

#[test]
fn csv_has_one_row_per_run() {
    let out = wao(&[
        "solve",
        "--graph",
        &instance("MANN_a9"),
        "--runs",
        "3",
        "--generations",
        "20",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("instance,complemented,run,seed,best_size"));
}

#[test]
fn verify_examples() {
    let dir = scratch("verify");
    let example = write(&dir, "example.col", EXAMPLE);
    let k3 = write(&dir, "k3.col", K3);
    let good = write(&dir, "good.txt", "1 4\n");
    let bad = write(&dir, "bad.txt", "1,2");
    let empty = write(&dir, "empty.txt", "");
    let out_of_range = write(&dir, "range.txt", "7");

    let ok = wao(&[
        "verify",
        "--graph",
        &example,
        "--no-complement",
        "--certificate",
        &good,
    ]);
    assert_eq!(ok.status.code(), Some(0));

    let rejected = wao(&[
        "verify",
        "--graph",
        &k3,
        "--no-complement",
        "--certificate",
        &bad,
    ]);
    assert_eq!(rejected.status.code(), Some(1));
    assert!(stdout(&rejected).contains("nodes 1 and 2 are adjacent"));

    let none = wao(&[
        "verify",
        "--graph",
        &k3,
        "--no-complement",
        "--certificate",
        &empty,
    ]);
    assert_eq!(none.status.code(), Some(0));
    assert!(stdout(&none).contains("size 0"));

    let range = wao(&["verify", "--graph", &k3, "--certificate", &out_of_range]);
    assert_eq!(range.status.code(), Some(2));
}

#[test]
fn reports_verify_against_their_graph() {
    let dir = scratch("roundtrip");
    let graph = instance("hamming6-2");
    let out = wao(&[
        "solve",
        "--graph",
        &graph,
        "--runs",
        "2",
        "--generations",
        "30",
    ]);
    let report = write(&dir, "report.json", &stdout(&out));
    let check = wao(&["verify", "--graph", &graph, "--certificate", &report]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn history_examples() {
    let dir = scratch("history");
    let c5 = write(&dir, "c5.col", C5);
    let edgeless = write(&dir, "e.col", "p edge 6 0\n");

    let out = wao(&["history", "--graph", &c5, "--no-complement", "--runs", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let values: Vec<usize> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 50);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*values.last().unwrap(), 2);

    let out = wao(&[
        "history",
        "--graph",
        &edgeless,
        "--no-complement",
        "--runs",
        "1",
    ]);
    assert!(stdout(&out).lines().skip(1).all(|l| l.ends_with(",6")));

    let report = write(
        &dir,
        "report.json",
        &stdout(&wao(&[
            "solve",
            "--graph",
            &c5,
            "--no-complement",
            "--runs",
            "2",
        ])),
    );
    let second = wao(&["history", "--report", &report, "--run", "2"]);
    assert!(second.status.success());
    let missing = wao(&["history", "--report", &report, "--run", "3"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn oracle_and_complement() {
    let dir = scratch("oracle");
    let example = write(&dir, "example.col", EXAMPLE);
    let alpha = json(&wao(&["oracle", "--graph", &example, "--no-complement"]));
    assert_eq!(alpha["alpha"], 2);

    let clique = json(&wao(&["oracle", "--graph", &instance("johnson8-2-4")]));
    assert_eq!(clique["alpha"], 4);

    let out = wao(&["complement", "--graph", &example]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("p edge 5 5"));
    assert!(text.contains("e 1 4"));
}

#[test]
fn bench_manifests() {
    let dir = scratch("bench");
    let empty = write(&dir, "empty.toml", "runs = 1\n");
    let out = wao(&["bench", &empty, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!([]));

    let manifest = format!(
        "runs = 2\nL = [15]\nearly_stop = true\n\n\
         [[instance]]\nname = \"hamming6-4\"\npath = {:?}\nalpha = 4\n\n\
         [[instance]]\nname = \"missing\"\npath = \"nowhere.clq\"\n",
        instance("hamming6-4")
    );
    let path = write(&dir, "m.toml", &manifest);
    let out = wao(&["bench", &path]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let records: Vec<_> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 2);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    assert_eq!(&records[0][col("best_size")], "4");
    assert_eq!(&records[0][col("match")], "true");
    assert!(!records[1][col("error")].is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wao(&["solve"]).status.code(), Some(2));
    assert_eq!(
        wao(&["solve", "--graph", "nope.clq"]).status.code(),
        Some(2)
    );
    let dir = scratch("usage");
    let k3 = write(&dir, "k3.col", K3);
    assert_eq!(
        wao(&["solve", "--graph", &k3, "--elite-frac", "1.5"])
            .status
            .code(),
        Some(2)
    );
    let broken = write(&dir, "broken.col", "p edge 2 1\ne 1 3\n");
    assert_eq!(wao(&["solve", "--graph", &broken]).status.code(), Some(2));
}
