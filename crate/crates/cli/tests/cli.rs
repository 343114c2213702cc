use std::path::Path;
use std::process::{Command, Output};

fn vws(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vws")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn table1_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = vws(&["table1"], dir.path());
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["d", "kappa", "rejection_pct"]);
    assert_eq!(rows.len(), 46);
    let cell = |d: &str, k: &str| -> f64 {
        rows.iter().find(|r| r[0] == d && r[1] == k).unwrap()[2].parse().unwrap()
    };
    assert!((cell("4", "0.1") - 8.23).abs() < 0.005);
    assert!((cell("20", "20") - 93.45).abs() < 0.005);
}

#[test]
fn table1_single_cell_and_skips() {
    let dir = tempfile::tempdir().unwrap();
    let o = vws(&["table1", "--d", "5", "--kappa", "1"], dir.path());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!((rows[1][2].parse::<f64>().unwrap() - 13.01).abs() < 0.005);
    let o = vws(&["table1", "--d", "3,4", "--kappa", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping d = 3"));
    assert_eq!(csv_rows(&stdout(&o)).len(), 2);
}

#[test]
fn curves_schema_determinism_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["curves", "--d", "3,5", "--kappa", "10", "--regions", "20", "--replicates", "2", "--out", "c.csv", "--plot"];
    let o = vws(&args, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping d = 3"));
    let first = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let rows = csv_rows(&first);
    assert_eq!(rows[0], ["d", "kappa", "sampler", "N", "replicate", "log_rejection"]);
    assert!(rows[1..].iter().all(|r| r[0] == "5"));
    for s in ["uw", "vs_const", "vws_const", "vws_linear"] {
        assert!(rows.iter().any(|r| r[2] == s));
    }
    let uw: Vec<f64> = rows.iter().filter(|r| r[2] == "uw").map(|r| r[5].parse().unwrap()).collect();
    assert_eq!(uw.len(), 2);
    for y in uw {
        assert!((y.exp() - 0.239).abs() < 0.01, "{y}");
    }
    let svg = std::fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    vws(&args, dir.path());
    assert_eq!(std::fs::read_to_string(dir.path().join("c.csv")).unwrap(), first);
}

#[test]
fn knot_study_one_region_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = vws(&["knot-study", "--d", "2", "--kappa", "10", "--regions", "30", "--replicates", "3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["d", "kappa", "scheme", "knot_rule", "N", "replicate", "log_rejection"]);
    for scheme in ["constant", "linear"] {
        let ones: Vec<&str> = rows.iter().filter(|r| r[2] == scheme && r[4] == "1").map(|r| r[6].as_str()).collect();
        assert_eq!(ones.len(), 6);
        assert!(ones.iter().all(|v| *v == ones[0]));
        let at = |rule: &str| -> f64 {
            let mut v: Vec<f64> =
                rows.iter().filter(|r| r[2] == scheme && r[3] == rule && r[4] == "30").map(|r| r[6].parse().unwrap()).collect();
            v.sort_by(f64::total_cmp);
            v[v.len() / 2]
        };
        assert!(at("greedy") < at("equal_spaced"));
        assert!(at("probabilistic") < at("equal_spaced"));
        assert!(at("equal_probability") < at("equal_spaced"));
    }
}

#[test]
fn orthant_rows_respect_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = vws(&["orthant", "--d", "2", "--kappa", "1"], dir.path());
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["d", "kappa", "N", "log_delta", "log_bound", "approx", "exact"]);
    assert_eq!(rows.len(), 101);
    for r in &rows[1..] {
        let (ld, lb): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(ld <= lb + 1e-12);
    }
    let last = &rows[100];
    assert!((last[6].parse::<f64>().unwrap() - 0.3902).abs() < 0.001);
    assert!(last[3].parse::<f64>().unwrap() <= -6.0);
}

#[test]
fn bayes_pipeline_on_small_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = "# declination inclination\n10 40\n34 52\n350 27\n22 65\n1 19\n349 51\n43 34\n";
    std::fs::write(dir.path().join("obs.txt"), data).unwrap();
    let o = vws(&["bayes", "--data", "obs.txt", "--n", "500", "--out", "res", "--plot"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    for key in ["kappa_mean=", "kappa_q025=", "kappa_q975=", "rejection_fraction=", "mle_kappa=", "mle_ci_lo=", "bound="] {
        assert!(summary.contains(key), "{summary}");
    }
    let bounds = csv_rows(&std::fs::read_to_string(dir.path().join("res/bounds.csv")).unwrap());
    assert_eq!(bounds[0], ["N", "bound", "log_bound"]);
    assert_eq!(bounds.len(), 51);
    let draws = csv_rows(&std::fs::read_to_string(dir.path().join("res/draws.csv")).unwrap());
    assert_eq!(draws.len(), 501);
    assert!(dir.path().join("res/bounds.svg").exists());
}

#[test]
fn bayes_rejects_unbounded_weight() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tight.txt"), "10 40\n10.1 40\n10 40.1\n").unwrap();
    let o = vws(&["bayes", "--data", "tight.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--tau"));
}

#[test]
fn bayes_reports_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "10 40\n14 oops\n").unwrap();
    let o = vws(&["bayes", "--data", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn sample_lines_are_unit_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--d", "3", "--kappa", "10", "--n", "20000", "--seed", "9", "--out", "s.txt"];
    assert!(vws(&args, dir.path()).status.success());
    let text = std::fs::read_to_string(dir.path().join("s.txt")).unwrap();
    let mut sum = 0.0;
    let mut sq = 0.0;
    let mut n = 0.0;
    for line in text.lines() {
        let v: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(v.len(), 3);
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        sum += v[0];
        sq += v[0] * v[0];
        n += 1.0;
    }
    let mean = sum / n;
    let se = ((sq / n - mean * mean) / n).sqrt();
    let want = 1.0 / 10f64.tanh() - 0.1;
    assert!((mean - want).abs() < 3.0 * se, "{mean} vs {want}");
    assert!(vws(&args, dir.path()).status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("s.txt")).unwrap(), text);
    let o = vws(&["sample", "--d", "3", "--mu", "0,-1,0", "--n", "2", "--method", "uw"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}
