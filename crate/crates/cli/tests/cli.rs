use std::process::{Command, Output};

use serde_json::Value;

fn obliq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obliq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn demo_lists_the_eight_states() {
    let out = obliq(&["demo", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in [
        "d = 00  i = 0: +0.7071|00> +0.7071|01>",
        "d = 01  i = 0: +0.7071|00> -0.7071|01>",
        "d = 10  i = 0: +0.7071|10> +0.7071|11>",
        "d = 11  i = 0: +0.7071|10> -0.7071|11>",
    ] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    for states in [
        "i = 1: +0.7071|00> +0.7071|10>",
        "i = 1: +0.7071|00> -0.7071|10>",
        "i = 1: +0.7071|01> +0.7071|11>",
        "i = 1: +0.7071|01> -0.7071|11>",
    ] {
        assert!(text.contains(states), "missing {states:?}");
    }
    assert!(text.contains("encoding 0, M_1: P(01) = 0.5000  P(11) = 0.5000"));
    assert!(text.contains("decoded item 0 = 0"));
}

#[test]
fn demo_decodes_the_chosen_item() {
    for (db, choice, value) in [("01", "1", "1"), ("10", "0", "1"), ("11", "1", "1"), ("00", "0", "0")] {
        let out = obliq(&["demo", "--db", db, "--choice", choice, "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).contains(&format!("decoded item {choice} = {value}")));
    }
}

#[test]
fn demo_json_is_a_transcript() {
    let out = obliq(&["demo", "--seed", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let t = json(&out);
    assert_eq!(t["version"], 1);
    assert_eq!(t["decoded"]["kind"], "item");
    assert_eq!(t["decoded"]["value"], 0);
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(obliq(&["demo", "--db", "5"]).status.code(), Some(1));
    assert_eq!(obliq(&["demo", "--db", "01", "--choice", "2"]).status.code(), Some(1));
    assert_eq!(obliq(&["session", "--db", "01"]).status.code(), Some(1));
    assert_eq!(obliq(&["nonsense"]).status.code(), Some(1));
    assert_eq!(obliq(&["session", "--db", "zz", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(obliq(&["--help"]).status.code(), Some(0));
}

#[test]
fn session_is_deterministic_per_seed() {
    let args = ["session", "--k", "3", "--m", "4", "--family", "mub", "--db", "2C9", "--choice", "2", "--seed", "3"];
    let a = obliq(&args);
    let b = obliq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = json(&a);
    assert_eq!(t["decoded"]["kind"], "item");
    assert_eq!(t["decoded"]["item"], 2);
    assert_eq!(t["decoded"]["value"], 9);
    let events: Vec<&str> = t["events"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["event"].as_str().unwrap())
        .collect();
    assert_eq!(events, ["state_sent", "measurement_committed", "encoding_announced", "decoded"]);
}

#[test]
fn session_decodes_every_item_of_small_databases() {
    for family in ["explicit", "walsh", "mub", "random"] {
        for d in 0..4u32 {
            for choice in 0..2 {
                let db = format!("{d:X}");
                let out = obliq(&[
                    "session", "--family", family, "--db", &db, "--choice", &choice.to_string(), "--seed", "5",
                ]);
                assert_eq!(out.status.code(), Some(0), "{family} {db}");
                let want = (d >> (1 - choice)) & 1;
                assert_eq!(json(&out)["decoded"]["value"], want, "{family} db {db} choice {choice}");
            }
        }
    }
}

#[test]
fn session_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = obliq(&["session", "--db", "10", "--seed", "9", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t["decoded"]["value"], 1);
    let missing = dir.path().join("no/such/dir/t.json");
    let out = obliq(&["session", "--db", "10", "--seed", "9", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invert_strategy_learns_all_or_nothing() {
    let mut configurations = 0;
    let mut nothing = 0;
    for seed in 0..40 {
        let out = obliq(&[
            "session", "--db", "01", "--strategy", "invert", "--guess", "0", "--seed", &seed.to_string(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let t = json(&out);
        let post: Vec<f64> = t["posterior"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_f64().unwrap())
            .collect();
        if t["announced"] == 0 {
            assert_eq!(t["decoded"]["kind"], "configuration");
            assert_eq!(t["decoded"]["value"], 1);
            assert!((post[1] - 1.0).abs() < 1e-12);
            configurations += 1;
        } else {
            assert!(post.iter().all(|p| (p - 0.25).abs() < 1e-12), "{post:?}");
            nothing += 1;
        }
    }
    assert!(configurations > 0 && nothing > 0);
}

#[test]
fn parity_strategy_reports_the_xor() {
    for (db, parity) in [("00", 0), ("01", 1), ("10", 1), ("11", 0)] {
        let mut decoded = 0;
        for seed in 0..40 {
            let out = obliq(&["session", "--db", db, "--strategy", "parity", "--seed", &seed.to_string()]);
            assert_eq!(out.status.code(), Some(0));
            let t = json(&out);
            if t["outcome"].as_u64().unwrap() < 2 {
                assert_eq!(t["decoded"]["kind"], "parity");
                assert_eq!(t["decoded"]["value"], parity);
                decoded += 1;
            } else {
                assert_ne!(t["decoded"]["kind"], "parity");
            }
        }
        assert!(decoded > 0, "db {db}");
    }
}

#[test]
fn split_and_masked_sessions_recover_the_item() {
    for seed in 0..6 {
        let out = obliq(&[
            "session", "--family", "walsh", "--m", "3", "--db", "2A", "--choice", "1", "--rounds", "3", "--mask",
            "--seed", &seed.to_string(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let t = json(&out);
        assert_eq!(t["xor_rounds"], 3);
        assert_eq!(t["sessions"].as_array().unwrap().len(), 3);
        assert_eq!(t["decoded"], 0x2);
    }
}

#[test]
fn verify_suites_report_no_violations() {
    let cases: [&[&str]; 5] = [
        &["verify", "--suite", "entropic", "--dim", "4", "--trials", "2000", "--seed", "1"],
        &["verify", "--suite", "povm", "--trials", "50", "--seed", "1"],
        &["verify", "--suite", "concentration", "--ell", "16", "--trials", "200", "--seed", "1"],
        &["verify", "--suite", "hk", "--k", "2", "--m", "1", "--seed", "1"],
        &["verify", "--suite", "honest", "--m", "2"],
    ];
    for args in cases {
        let out = obliq(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let r = json(&out);
        assert_eq!(r["violations"], 0, "{args:?}");
        assert!(r["trials"].as_u64().unwrap() > 0);
    }
}

#[test]
fn verify_hk_beyond_two_encodings_is_exploratory() {
    let out = obliq(&["verify", "--suite", "hk", "--k", "3", "--m", "1", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["exploratory"], true);
}

#[test]
fn scan_respects_bounds() {
    let out = obliq(&["scan", "--k", "2..3", "--m", "1..2", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,m,family,best_gain_bits,bound_bits,restarts,iters,seed"));
    let rows: Vec<Vec<&str>> = lines
        .clone()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let (best, bound): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
        assert!(best <= bound + 1e-6, "{row:?}");
        if row[0] == "2" && row[1] == "1" {
            assert!((best - 1.0).abs() < 1e-3, "{row:?}");
        }
    }
    let fit = lines.find(|l| l.starts_with("# fit")).expect("fit line");
    assert!(fit.contains("reference c=0.4 alpha=0.7"));
}

#[test]
fn scan_is_reproducible() {
    let args = ["scan", "--k", "2", "--m", "1", "--seed", "4", "--restarts", "2", "--iters", "300"];
    let a = obliq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, obliq(&args).stdout);
}
