use std::path::Path;
use std::process::{Command, Output};

fn latfac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latfac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV text with the trailing time column removed.
fn strip_time(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

/// JSON lines with the wall time zeroed.
fn strip_wall_time(jsonl: &str) -> String {
    jsonl
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["wall_time_seconds"] = serde_json::json!(0.0);
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn factor_reports_the_split() {
    let o = latfac(&["factor", "2041"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2041 = 13 x 157\n"));
    let o = latfac(&["factor", "1961", "--heuristic", "exact-min", "--m", "3", "--c", "1.5", "--M", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("1961 = 37 x 53\n"), "{text}");
    assert!(text.contains("congruence: "));
}

#[test]
fn factor_defaults_find_a_congruence() {
    for (n, split) in [("1961", "37 x 53"), ("558122239", "18637 x 29947")] {
        let o = latfac(&["factor", n]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.starts_with(&format!("{n} = {split}\nmethod: congruence of squares\n")), "{text}");
    }
}

#[test]
fn invalid_inputs_exit_with_two() {
    for args in [
        vec!["factor", "17"],
        vec!["factor", "1962"],
        vec!["factor", "3125"],
        vec!["factor", "abc"],
        vec!["factor", "1961", "--heuristic", "nope"],
        vec!["factor", "1961", "--M", "400"],
        vec!["bench", "--bits", "8"],
        vec!["analysis", "dickman", "--step", "0.5"],
    ] {
        assert_eq!(latfac(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exhausted_budget_exits_with_three() {
    let o = latfac(&["factor", "1000036000099", "--budget-lattices", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget-exhausted"));
}

#[test]
fn demo_matches_its_golden_values() {
    let o = latfac(&["demo3q"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("all golden values match"));
    assert!(text.contains("87/2"));
}

#[test]
fn dickman_curve_contains_rho_of_two() {
    let o = latfac(&["analysis", "dickman", "--max", "3", "--every", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("2.0000 "))
        .unwrap()
        .to_string();
    let rho: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((rho - 0.306853).abs() < 1e-6);
}

#[test]
fn bench_is_deterministic_and_feeds_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let log = dir.path().join(format!("{tag}.jsonl"));
        let o = latfac(&[
            "bench",
            "--bits",
            "12,14,16",
            "--trials",
            "3",
            "--heuristic",
            "local-search,babai",
            "--seed",
            "5",
            "--budget-lattices",
            "3000",
            "--out",
            csv.to_str().unwrap(),
            "--log",
            log.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        (
            read(&dir.path().join(format!("{tag}-local-search.csv"))),
            read(&dir.path().join(format!("{tag}-babai.csv"))),
            log,
        )
    };
    let (a_ls, a_b, a_log) = run("a");
    let (b_ls, b_b, b_log) = run("b");
    assert_eq!(strip_time(&a_ls), strip_time(&b_ls));
    assert_eq!(strip_time(&a_b), strip_time(&b_b));
    assert_eq!(strip_wall_time(&read(&a_log)), strip_wall_time(&read(&b_log)));
    assert!(a_ls.starts_with("Input bit length,Lattice dimension,"));
    assert_eq!(a_ls.lines().count(), 4);

    let o = latfac(&["analysis", "lattice-scaling", "--from", a_log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# log-linear fit: slope "));
}

#[test]
fn density_curve_has_one_point_per_bit_length() {
    let o = latfac(&["analysis", "density", "--min-bits", "20", "--max-bits", "29"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    for line in text.lines() {
        let y: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(y > 0.0 && y <= 1.0);
    }
}
