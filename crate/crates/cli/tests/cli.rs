use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chenciner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn out_arg(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

#[test]
fn classify_prints_mu_and_region() {
    let o = run(&["classify", "--alpha", "-0.017,0.015"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next(),
        Some("mu=(4.8579e-3, 1.0782e-2) region=1")
    );
    assert!(text.contains("signs L0=+ Delta=+"));
}

#[test]
fn classify_json_carries_both_routes() {
    let o = run(&["classify", "--alpha", "-0.5,0.05", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["label"]["region"], 8);
    assert!(v["hat"]["beta1"].as_f64().unwrap() > 0.0);
}

#[test]
fn validate_rejects_a_singular_new_change() {
    // c1 = c2 = 1 and l1 = l2 = 1, so c1 l2 - c2 l1 = 0
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1 + a2\"\nbeta2 = \"a1 + a2\"\nl2 = \"1 + a1 + a2\"\n",
    );
    let o = run(&["--config", &cfg, "validate"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("(newt)"), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAILS"));
}

#[test]
fn non_degenerate_system_cites_dc1() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1\"\nbeta2 = \"a2\"\nl2 = \"1 + a1\"\n",
    );
    let o = run(&["--config", &cfg, "classify", "--alpha", "0.01,0.01"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("(dc1)"));
}

#[test]
fn zero_l0_is_a_genericity_failure() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1 + a2\"\nbeta2 = \"a1 + a2\"\nl2 = \"a1\"\n",
    );
    let o = run(&["--config", &cfg, "validate"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("L0 != 0"));
}

#[test]
fn vanishing_m2_stops_the_diagram() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1 + a2\"\nbeta2 = \"a1 + a2\"\nl2 = \"1 + a2\"\n",
    );
    let out = out_arg(&dir, "d");
    let o = run(&["--config", &cfg, "--out", &out, "diagram"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("m2 != 0"));
}

#[test]
fn config_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1 + * a2\"\nbeta2 = \"a1\"\nl2 = \"1\"\n",
    );
    let o = run(&["--config", &cfg, "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("system.beta1"), "{}", stderr(&o));

    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1\"\nbeta2 = \"a1\"\nl2 = \"1\"\nthetta0 = 0.1\n",
    );
    let o = run(&["--config", &cfg, "validate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("thetta0") && err.contains("line 5"), "{err}");

    let cfg = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1\"\nbeta2 = \"a1\"\nl2 = \"1\"\ntheta0 = 4.0\n",
    );
    let o = run(&["--config", &cfg, "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("system.theta0"));

    let o = run(&["--config", "/nonexistent/run.toml", "validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn record_and_text_series_agree() {
    let dir = TempDir::new().unwrap();
    let text = write_config(
        dir.path(),
        "[system]\nbeta1 = \"a1 + a2 + 2*a1^2 + a2^2\"\nbeta2 = \"a1 + a2 + 2*a1*a2\"\nl2 = \"1 + a1 + 2*a2 + a1^2 + a2^3\"\n",
    );
    let a = run(&["--config", &text, "transform", "--format", "json"]);
    let records = write_config(
        dir.path(),
        r#"
[system]
beta1 = [{ i = 1, j = 0, num = 1 }, { i = 0, j = 1, num = 1 }, { i = 2, j = 0, num = 2 }, { i = 0, j = 2, num = 1 }]
beta2 = [{ i = 1, j = 0, num = 1 }, { i = 0, j = 1, num = 1 }, { i = 1, j = 1, num = 4, den = 2 }]
l2 = "1 + a1 + 2*a2 + a1^2 + a2^3"
"#,
    );
    let b = run(&["--config", &records, "transform", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let builtin = run(&["transform", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&builtin));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["constants"]["m2"], "-5");
    assert_eq!(v["diagram"]["diagram"], "D3");
}

#[test]
fn transform_prints_exact_fractions() {
    let o = run(&["transform"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("- 261/64*mu1^2"));
    assert!(text.contains("89/32*mu1^2"));
    assert!(text.contains("m2 = -5"));
}

#[test]
fn diagram_artifacts_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (out_arg(&dir, "a"), out_arg(&dir, "b"));
    for out in [&a, &b] {
        let o = run(&["--out", out, "diagram", "--resolution", "41,41"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("diagram D3 regions 1 2 6 8"));
    }
    for f in ["diagram.csv", "curves.csv", "diagram.json", "diagram.svg"] {
        let x = fs::read(Path::new(&a).join(f)).unwrap();
        let y = fs::read(Path::new(&b).join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    let grid = fs::read_to_string(Path::new(&a).join("diagram.csv")).unwrap();
    assert_eq!(grid.lines().next(), Some("mu1,mu2,region"));
    assert_eq!(grid.lines().count(), 1 + 41 * 41);
    let curves = fs::read_to_string(Path::new(&a).join("curves.csv")).unwrap();
    assert_eq!(curves.lines().next(), Some("curve,mu2,mu1"));
    let svg = fs::read_to_string(Path::new(&a).join("diagram.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<!-- chenciner ") && !svg.contains("<script"));
}

#[test]
fn format_flag_restricts_output() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir, "only");
    let o = run(&[
        "--out",
        &out,
        "--format",
        "svg",
        "diagram",
        "--resolution",
        "5,5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, ["diagram.svg"]);

    let o = run(&[
        "--out",
        &out,
        "--format",
        "svg",
        "verify",
        "--alpha",
        "-0.5,0.05",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_writes_the_orbit() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir, "orbit");
    let o = run(&[
        "--out",
        &out,
        "--theta0",
        "0.05",
        "simulate",
        "--alpha",
        "-0.017,0.015",
        "--start",
        "0.18876,0",
        "--steps",
        "400",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("outcome=circle(0.1887"),
        "{}",
        stdout(&o)
    );
    let csv = fs::read_to_string(Path::new(&out).join("orbit.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,rho,phi,x,y"));
    assert!(lines.next().unwrap().starts_with("1,1.88760e-1,"));
    // header, the start point and 400 iterates
    assert_eq!(csv.lines().count(), 402);
    let first = fs::read(Path::new(&out).join("orbit.json")).unwrap();
    run(&[
        "--out",
        &out,
        "--theta0",
        "0.05",
        "simulate",
        "--alpha",
        "-0.017,0.015",
        "--start",
        "0.18876,0",
        "--steps",
        "400",
    ]);
    assert_eq!(first, fs::read(Path::new(&out).join("orbit.json")).unwrap());
}

#[test]
fn verify_passes_at_the_region_1_point() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir, "v");
    let o = run(&[
        "--out",
        &out,
        "verify",
        "--alpha",
        "-0.017,0.015",
        "--steps",
        "800",
        "--probe",
        "0.17,0.195",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("status Pass"));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&out).join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["label"]["region"], 1);
}

#[test]
fn reference_run_passes() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir, "r");
    let o = run(&["--out", &out, "reproduce-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS  m2: closed form -5, from L2^ -5"));
    assert!(text.contains("PASS  diagram: D3"));
    for (name, region) in [("R1", 1), ("R2", 2), ("R6", 6), ("R8", 8)] {
        assert!(
            text.contains(&format!("PASS  {name} region: region {region}")),
            "{name}"
        );
    }
    assert!(!text.contains("FAIL"));
    for f in ["summary.txt", "summary.json", "diagram.svg", "diagram.csv"] {
        assert!(Path::new(&out).join(f).exists(), "{f}");
    }
}

#[test]
fn bad_arguments_are_config_errors() {
    assert_eq!(run(&["classify", "--alpha", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["--order", "12", "validate"]).status.code(), Some(2));
    assert_eq!(run(&["--k", "5", "transform"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
