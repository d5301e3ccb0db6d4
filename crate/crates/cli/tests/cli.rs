use std::f64::consts::{PI, TAU};
use std::process::Command;

use quasifloquet::floquet::edge_residual;
use quasifloquet::quasiperiodic::GOLDEN_RATIO;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qf(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qf"))
        .args(args)
        .env_remove("QF_DEFAULT_FORMAT")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Header and rows of a CSV document.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn bands_grid_and_peak() {
    let run = qf(&[
        "bands",
        "--ratio",
        "1",
        "--range",
        "0:6.2832:0.01",
        "--format",
        "csv",
    ]);
    assert_eq!(run.code, 0);
    let (h, rows) = table(&run.stdout);
    assert_eq!(h, ["beta", "half_trace", "in_band"]);
    assert_eq!(rows.len(), 629);
    let near = rows
        .iter()
        .min_by(|a, b| {
            (num(&a[0]) - PI / 4.0)
                .abs()
                .total_cmp(&(num(&b[0]) - PI / 4.0).abs())
        })
        .unwrap();
    assert!((num(&near[1]) - 2f64.sqrt()).abs() < 1e-4);
}

#[test]
fn kick_free_bands_are_cosines() {
    let run = qf(&["bands", "--ratio", "0", "--range", "0:3.1416:0.1"]);
    assert_eq!(run.code, 0);
    let (_, rows) = table(&run.stdout);
    assert_eq!(rows.len(), 32);
    for r in rows {
        assert!((num(&r[1]) - num(&r[0]).cos()).abs() <= 1e-11);
        assert_eq!(r[2], "1");
    }
}

#[test]
fn malformed_range_is_a_usage_error() {
    for range in ["0:-1:0.1", "0:1:0", "x:1:0.1", "0:1"] {
        let run = qf(&["bands", "--ratio", "1", "--range", range]);
        assert_eq!(run.code, 1, "{range}");
        assert!(run.stdout.is_empty());
        assert!(!run.stderr.is_empty());
    }
}

#[test]
fn band_edges_examples() {
    let run = qf(&["band-edges", "--ratio", "1", "--periods", "1"]);
    assert_eq!(run.code, 0);
    let (h, rows) = table(&run.stdout);
    assert_eq!(h, ["kind", "lower", "center", "upper"]);
    let bands: Vec<[f64; 3]> = rows
        .iter()
        .filter(|r| r[0] == "band")
        .map(|r| [num(&r[1]), num(&r[2]), num(&r[3])])
        .collect();
    let expected = [[PI / 2.0, 0.75 * PI, PI], [1.5 * PI, 1.75 * PI, TAU]];
    assert_eq!(bands.len(), 2);
    for (b, e) in bands.iter().zip(expected) {
        for k in 0..3 {
            assert!((b[k] - e[k]).abs() <= 1e-10, "{b:?}");
        }
    }

    let run = qf(&["band-edges", "--ratio", "0", "--periods", "2"]);
    let (_, rows) = table(&run.stdout);
    let gaps: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "gap")
        .map(|r| {
            assert_eq!(r[1], r[3]);
            num(&r[1])
        })
        .collect();
    assert_eq!(gaps.len(), 5);
    for (g, m) in gaps.iter().zip(0..) {
        assert!((g - m as f64 * PI).abs() <= 1e-10);
    }

    let run = qf(&["band-edges", "--ratio", "5", "--periods", "3"]);
    let (_, rows) = table(&run.stdout);
    for r in rows {
        assert!(edge_residual(num(&r[1]), 5.0) <= 1e-7);
        assert!(edge_residual(num(&r[3]), 5.0) <= 1e-7);
    }
}

#[test]
fn fibonacci_scan_examples() {
    let run = qf(&["fibonacci-scan"]);
    assert_eq!(run.code, 0);
    let (h, rows) = table(&run.stdout);
    assert_eq!(
        h,
        [
            "omega_t",
            "invariant",
            "in_band_1",
            "in_band_2",
            "overlap",
            "commutative",
            "quasi_floquet"
        ]
    );
    assert_eq!(rows.len(), 20_001);
    let hits: Vec<f64> = rows
        .iter()
        .filter(|r| r[5] == "1")
        .map(|r| num(&r[0]))
        .collect();
    assert_eq!(hits.len(), 3);
    for (x, m) in hits.iter().zip(1..) {
        assert!((x - m as f64 * PI * GOLDEN_RATIO).abs() <= 5e-4);
    }
    for r in &rows {
        assert!(r[6] == "0" || r[4] == "1");
        assert_eq!(r[4] == "1", r[2] == "1" && r[3] == "1");
    }

    let run = qf(&["fibonacci-scan", "--u", "0", "--range", "0:10:0.01"]);
    let (h, rows) = table(&run.stdout);
    let i = col(&h, "invariant");
    assert!(rows.iter().all(|r| r[i] == "1"));
}

#[test]
fn orbit_examples() {
    let run = qf(&["orbit", "--n", "0", "--x0", "0.5", "--p0", "-2"]);
    assert_eq!(run.code, 0);
    let (h, rows) = table(&run.stdout);
    assert_eq!(h, ["step", "letter", "x", "p", "q"]);
    assert_eq!(rows, [["0", "0", "0.5", "-2", &rows[0][4]]]);

    let run = qf(&["orbit", "--n", "200"]);
    assert_eq!(run.code, 0);
    let (_, rows) = table(&run.stdout);
    assert_eq!(rows.len(), 201);
    let q0 = num(&rows[0][4]);
    let worst = rows
        .iter()
        .map(|r| (num(&r[4]) - q0).abs() / q0.abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");

    let run = qf(&[
        "orbit", "--u", "40", "--t1", "0.785", "--t2", "1.27", "--n", "100000",
    ]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("diverged at step"));
    let (_, rows) = table(&run.stdout);
    let step: usize = run
        .stderr
        .split("step ")
        .nth(1)
        .unwrap()
        .split(':')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows.len(), step);
}

#[test]
fn words_examples() {
    let run = qf(&["words", "--n", "15"]);
    assert_eq!(run.code, 0);
    let (h, rows) = table(&run.stdout);
    assert_eq!(h, ["n", "word", "length"]);
    assert_eq!(rows[0][1..], ["y1", "1"]);
    assert_eq!(rows[4][1..], ["y1 y2 y2 y1 y2", "5"]);
    assert_eq!(rows[15][2], "987");
    let (mut a, mut b) = (1u64, 1u64);
    for r in &rows {
        assert_eq!(r[2].parse::<u64>().unwrap(), a);
        assert_eq!(r[1].split(' ').count() as u64, a);
        (a, b) = (b, a + b);
    }
    assert_eq!(qf(&["words", "--n", "31"]).code, 1);
}

#[test]
fn trace_rec_examples() {
    for (start, inv) in [(["1", "1", "1"], "1"), (["0", "0", "0"], "-1")] {
        let run = qf(&[
            "trace-rec",
            "--x0",
            start[0],
            "--y0",
            start[1],
            "--z0",
            start[2],
            "--n",
            "50",
        ]);
        assert_eq!(run.code, 0);
        let (_, rows) = table(&run.stdout);
        assert_eq!(rows.len(), 51);
        for r in rows {
            assert_eq!(r[1..4], start);
            assert_eq!(r[4], inv);
        }
    }
    let run = qf(&[
        "trace-rec",
        "--x0",
        "2",
        "--y0",
        "2",
        "--z0",
        "2",
        "--n",
        "20",
    ]);
    let (_, rows) = table(&run.stdout);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4] == "-9"));
    assert!(run.code == 0 || run.code == 3);
    if run.code == 3 {
        assert!(rows.len() <= 21);
    }
}

#[test]
fn csv_and_json_agree() {
    let cases: [&[&str]; 6] = [
        &["bands", "--ratio", "0.7", "--range", "-1:5:0.05"],
        &["band-edges", "--ratio", "2.5", "--periods", "2"],
        &["fibonacci-scan", "--range", "0:8:0.01"],
        &["orbit", "--n", "60", "--u", "0.3"],
        &["words", "--n", "8"],
        &[
            "trace-rec",
            "--x0",
            "0.3",
            "--y0",
            "-0.4",
            "--z0",
            "0.9",
            "--n",
            "40",
        ],
    ];
    for args in cases {
        let csv_run = qf(args);
        let json_run = qf(&[args, &["--format", "json"]].concat());
        assert_eq!(csv_run.code, json_run.code);
        let (h, rows) = table(&csv_run.stdout);
        let Value::Array(objs) = serde_json::from_str(&json_run.stdout).unwrap() else {
            panic!("json output is not an array");
        };
        assert_eq!(objs.len(), rows.len());
        for (obj, row) in objs.iter().zip(&rows) {
            let obj = obj.as_object().unwrap();
            assert_eq!(obj.keys().collect::<Vec<_>>(), h.iter().collect::<Vec<_>>());
            for (k, cell) in h.iter().zip(row) {
                match &obj[k] {
                    Value::String(s) => assert_eq!(s, cell),
                    Value::Number(n) => assert_eq!(n.as_f64().unwrap(), num(cell), "{k}"),
                    other => panic!("unexpected {other}"),
                }
            }
        }
    }
}

#[test]
fn environment_selects_default_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_qf"))
        .args(["words", "--n", "2"])
        .env("QF_DEFAULT_FORMAT", "json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with('['));
}

#[test]
fn output_file_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("words.csv");
    let run = qf(&["words", "--n", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        qf(&["words", "--n", "3"]).stdout
    );

    let missing = dir.path().join("no/such/dir/out.csv");
    let run = qf(&[
        "bands",
        "--ratio",
        "1",
        "--output",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("cannot write"));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(qf(&[]).code, 1);
    assert_eq!(qf(&["frobnicate"]).code, 1);
    assert_eq!(qf(&["bands", "--ratio", "-1"]).code, 1);
    assert_eq!(qf(&["bands", "--ratio", "1", "--format", "xml"]).code, 1);
    assert_eq!(
        qf(&["band-edges", "--ratio", "1", "--periods", "0"]).code,
        1
    );
    assert_eq!(qf(&["orbit", "--n", "1000001"]).code, 1);
    assert_eq!(qf(&["orbit", "--omega", "0"]).code, 1);
    for sub in [
        "bands",
        "band-edges",
        "fibonacci-scan",
        "orbit",
        "words",
        "trace-rec",
    ] {
        let run = qf(&[sub, "--help"]);
        assert_eq!(run.code, 0, "{sub}");
        assert!(run.stdout.contains("Usage"));
    }
}
