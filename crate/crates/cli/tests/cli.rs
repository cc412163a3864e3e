use std::path::Path;
use std::process::{Command, Output};

fn drroots(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drroots"))
        .args(args)
        .current_dir(dir)
        .env_remove("DRROOTS_SEED")
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<f64>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .filter_map(|t| t.parse::<f64>().ok())
                .collect()
        })
        .collect()
}

/// Roots of the degree-12 picture: a close pair, a tight triple, seven others.
fn clustered_roots() -> String {
    let mut roots = vec![(0.55, 0.2), (0.55 + 2e-7, 0.2 + 1e-7)];
    for k in 0..3 {
        let t = 0.4 + 2.1 * k as f64;
        roots.push((-0.45 + 4e-3 * t.cos(), -0.35 + 4e-3 * t.sin()));
    }
    for k in 0..7 {
        let (r, t) = (1.0 + 0.08 * k as f64, 0.9 * k as f64 + 0.3);
        roots.push((r * t.cos(), r * t.sin()));
    }
    roots
        .iter()
        .map(|(a, b)| format!("{a},{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn solves_cube_roots_of_unity() {
    let dir = tempfile::tempdir().unwrap();
    let out = drroots(&["solve", "--coeffs=-1,0 0,0 0,0 1,0"], dir.path());
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!(r.len(), 3);
    for row in &r {
        assert!(((row[0] * row[0] + row[1] * row[1]).sqrt() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn expanded_cluster_gives_ten_roots_near_two() {
    let dir = tempfile::tempdir().unwrap();
    // (z − 2)^10 − 0.01^10, whose perturbation vanishes in double precision
    let binom = [
        1.0, 10.0, 45.0, 120.0, 210.0, 252.0, 210.0, 120.0, 45.0, 10.0, 1.0,
    ];
    let coeffs: Vec<String> = (0..=10)
        .map(|k| {
            let mut v = binom[k] * (-2.0f64).powi(10 - k as i32);
            if k == 0 {
                v -= 0.01f64.powi(10);
            }
            format!("{v},0")
        })
        .collect();
    let out = drroots(&["solve", "--coeffs", &coeffs.join(" ")], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = rows(&out);
    assert_eq!(r.len(), 10);
    for row in &r {
        assert!((row[0] - 2.0).hypot(row[1]) < 0.05);
    }
}

#[test]
fn centred_input_resolves_the_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let out = drroots(
        &[
            "solve",
            "--center",
            "2,0",
            "--coeffs",
            "-1e-20,0 0 0 0 0 0 0 0 0 0 1,0",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    for row in rows(&out) {
        assert!(((row[0] - 2.0).hypot(row[1]) - 0.01).abs() < 1e-6);
    }
}

#[test]
fn deflation_matches_default_mode() {
    let dir = tempfile::tempdir().unwrap();
    let roots: Vec<String> = (0..12)
        .map(|k| {
            let t = 0.7 * k as f64 * k as f64 + 0.2;
            format!("{},{}", t.cos(), t.sin())
        })
        .collect();
    let roots = roots.join(" ");
    let a = drroots(&["solve", "--roots", &roots], dir.path());
    let b = drroots(&["solve", "--roots", &roots, "--deflate"], dir.path());
    assert!(a.status.success() && b.status.success());
    let (ra, rb) = (rows(&a), rows(&b));
    assert_eq!(ra.len(), 12);
    assert_eq!(rb.len(), 12);
    for x in &ra {
        let d = rb
            .iter()
            .map(|y| (x[0] - y[0]).hypot(x[1] - y[1]))
            .fold(f64::INFINITY, f64::min);
        assert!(d < 1e-7);
    }
}

#[test]
fn clustered_instance_is_covered_and_svg_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let roots = clustered_roots();
    let args = [
        "annuli", "--roots", &roots, "--iota1", "0.66", "--iota2", "1.33", "--svg", "a.svg",
    ];
    let out = drroots(&args, dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let covered: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("# root"))
        .skip(1)
        .map(|l| l.split_whitespace().last().unwrap())
        .collect();
    assert_eq!(covered, vec!["true"; 12]);

    let first = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    let doc = roxmltree::Document::parse(&first).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let lines = doc.descendants().filter(|n| n.has_tag_name("line")).count();
    assert_eq!(lines, 24);
    let dots = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .count();
    assert_eq!(dots, 11);

    let again = drroots(&args, dir.path());
    assert!(again.status.success());
    assert_eq!(
        first,
        std::fs::read_to_string(dir.path().join("a.svg")).unwrap()
    );
}

#[test]
fn z5_minus_32_has_radius_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = drroots(&["annuli", "--coeffs", "-32,0 0 0 0 0 1,0"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let disks: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(disks.len(), 4);
    for d in disks {
        assert!(d[0].hypot(d[1]) < 1e-6);
        assert!((d[2] - 2.0).abs() < 1e-6);
    }
}

#[test]
fn experiment_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "experiment",
            "c1",
            "--degree",
            "8",
            "--trials",
            "40",
            "--seed",
            "3",
            "--out",
            out,
        ]
    };
    let a = drroots(&args("a.json"), dir.path());
    let b = drroots(&args("b.json"), dir.path());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        std::fs::read(dir.path().join("a.json")).unwrap(),
        std::fs::read(dir.path().join("b.json")).unwrap()
    );
    let summary = String::from_utf8_lossy(&a.stdout);
    assert!(summary.starts_with("iota1="), "{summary}");
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_drroots"))
            .args([
                "experiment",
                "c1",
                "--degree",
                "6",
                "--trials",
                "20",
                "--out",
                out,
            ])
            .env("DRROOTS_SEED", seed)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    let a = run("5", "a.json");
    let flag = drroots(
        &[
            "experiment",
            "c1",
            "--degree",
            "6",
            "--trials",
            "20",
            "--seed",
            "5",
            "--out",
            "b.json",
        ],
        dir.path(),
    );
    assert_eq!(a.stdout, flag.stdout);
}

#[test]
fn desk_scale_experiments_meet_their_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = drroots(
        &[
            "experiment",
            "c1",
            "--degree",
            "10",
            "--trials",
            "300",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    let text = String::from_utf8_lossy(&c1.stdout).to_string();
    let vals: Vec<f64> = text
        .split_whitespace()
        .map(|kv| kv.split('=').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(
        (0.60..=0.80).contains(&vals[0]) && (1.20..=1.45).contains(&vals[1]),
        "{text}"
    );
    assert!(dir.path().join("c1.json").exists());

    let c2 = drroots(
        &["experiment", "c2", "--degree", "10", "--trials", "300"],
        dir.path(),
    );
    let text = String::from_utf8_lossy(&c2.stdout).to_string();
    let n: u64 = text.trim().split('=').nth(1).unwrap().parse().unwrap();
    assert!(n >= 5, "{text}");

    let scan = drroots(&["experiment", "cubic-scan", "--step", "0.05"], dir.path());
    let text = String::from_utf8_lossy(&scan.stdout).to_string();
    assert!(text.contains("iota2=1.324"), "{text}");
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| drroots(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["solve"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(
        code(&["annuli", "--roots", "0,0 1,0", "--iota1", "2", "--iota2", "1"]),
        2
    );
    assert_eq!(code(&["solve", "--coeffs", "1,0 zz"]), 3);
    assert_eq!(code(&["solve", "--file", "missing.txt"]), 5);
    assert_eq!(
        code(&[
            "experiment",
            "c1",
            "--trials",
            "5",
            "--out",
            "no/such/dir/r.json"
        ]),
        5
    );
    // a repeated single root has no critical-point structure to solve from
    assert_eq!(code(&["annuli", "--roots", "1,0"]), 4);
}

#[test]
fn logs_stay_off_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = drroots(&["-vv", "solve", "--coeffs=-1,0 0,0 1,0"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout
        .lines()
        .all(|l| l.starts_with('#') || l.split_whitespace().count() == 4));
}
