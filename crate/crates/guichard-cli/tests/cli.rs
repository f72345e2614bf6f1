//! End-to-end behavior of the `guichard` binary: exit codes, file formats,
//! and the documented output contracts.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_guichard"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("guichard-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_passing_family_exits_zero() {
    let out = tmp("verify_a.json");
    let status = bin()
        .args(["verify", "--spec"])
        .arg(fixture("one_constant_a.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["command"], "verify");
    let fams = report["first_order"]["families"].as_array().unwrap();
    assert_eq!(fams.len(), 6);
    for f in fams {
        let max: f64 = f["max_abs"]
            .as_str()
            .map_or_else(|| f["max_abs"].as_f64().unwrap(), |s| s.parse().unwrap());
        assert!(max < 1e-8);
    }
}

#[test]
fn verify_guichard_violation_exits_two() {
    let status = bin()
        .args(["verify", "--spec"])
        .arg(fixture("constant_violating.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn vanishing_coefficient_exits_three() {
    let status = bin()
        .args(["verify", "--spec"])
        .arg(fixture("constant_singular.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn missing_spec_file_exits_one() {
    let status = bin()
        .args(["verify", "--spec", "/nonexistent/nowhere.json"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn missing_spec_flag_exits_one() {
    let status = bin().args(["verify"]).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn bad_grid_flag_exits_one() {
    let status = bin()
        .args(["verify", "--grid", "2x2", "--spec"])
        .arg(fixture("one_constant_a.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn geometry_csv_contract() {
    let out = tmp("geom.csv");
    let status = bin()
        .args(["geometry", "--grid", "5x5x5", "--spec"])
        .arg(fixture("elliptic.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x1,x2,x3,l1,l2,l3,K1,K2,K3,sum,grad_norm,H"
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 12);
        let sum: f64 = cols[9].parse().unwrap();
        assert!(sum.abs() < 1e-10, "K1+K2+K3 = {sum}");
    }
    // Sibling level table and cyclicity report.
    let levels = std::fs::read_to_string(tmp("geom.csv.levels.csv")).unwrap();
    assert!(levels.starts_with("xi0,grad_norm,H,grad_variance,H_variance"));
    let cyc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("geom.csv.cyclicity.json")).unwrap())
            .unwrap();
    assert_eq!(cyc["classification"], "non-cyclic");
}

#[test]
fn geometry_gnuplot_contract() {
    let out = tmp("geom.dat");
    let status = bin()
        .args(["geometry", "--format", "gnuplot", "--spec"])
        .arg(fixture("one_constant_a.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let dat = std::fs::read_to_string(&out).unwrap();
    assert!(dat.starts_with("# xi l1 l2 l3 K1 K2 K3\n"));
    let row = dat.lines().nth(1).unwrap();
    assert_eq!(row.split_whitespace().count(), 7);
}

#[test]
fn export_csv_header_contract() {
    let out = tmp("export.csv");
    let status = bin()
        .args(["export", "--grid", "4x4x4", "--spec"])
        .arg(fixture("dilation_a.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("x1,x2,x3,l1,l2,l3\n"));
    assert_eq!(csv.lines().count(), 1 + 64);
}

#[test]
fn symmetry_builtin_generator_passes() {
    let out = tmp("symmetry.json");
    let status = bin()
        .args(["symmetry", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = rep["generator"].as_array().unwrap();
    assert_eq!(checks.len(), 36);
    for c in checks {
        assert_eq!(c["zero"], true, "nonzero: {c}");
        assert_eq!(c["reduced"], "0");
    }
}

#[test]
fn symmetry_flipped_ansatz_fails() {
    let status = bin()
        .args(["symmetry", "--ansatz"])
        .arg(fixture("ansatz_phi_flip.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn symmetry_with_family_runs_group_actions() {
    let out = tmp("symmetry_actions.json");
    let status = bin()
        .args(["symmetry", "--grid", "5x5x5", "--spec"])
        .arg(fixture("elliptic.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for action in ["translate", "dilate_x", "dilate_l"] {
        assert_eq!(rep["group_actions"][action]["pass"], true, "{action}");
    }
}

#[test]
fn verify_report_floats_have_17_significant_digits() {
    let out = tmp("verify_digits.json");
    bin()
        .args(["verify", "--spec"])
        .arg(fixture("one_constant_b1.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    // Tolerance 1e-8 appears as a full-precision literal.
    assert!(
        text.contains("1.0000000000000000e-8"),
        "missing 17-digit float in {text}"
    );
}

#[test]
fn verify_accepts_every_family_fixture() {
    for name in [
        "elliptic.json",
        "one_constant_a.json",
        "one_constant_b1.json",
        "one_constant_b2.json",
        "one_constant_c.json",
        "dilation_a.json",
        "dilation_b1.json",
        "dilation_b2.json",
        "dilation_c.json",
    ] {
        let status = bin()
            .args(["verify", "--grid", "5x5x5", "--spec"])
            .arg(fixture(name))
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0), "{name}");
    }
}

#[test]
fn tolerance_override_can_force_failure() {
    // An absurdly tight tolerance turns a passing family into exit 2.
    let status = bin()
        .args(["verify", "--tol", "first_order=1e-30", "--grid", "5x5x5", "--spec"])
        .arg(fixture("elliptic.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // Malformed override is a usage error.
    let status = bin()
        .args(["verify", "--tol", "first_order", "--spec"])
        .arg(fixture("one_constant_a.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn export_gnuplot_contract() {
    let out = tmp("export.dat");
    let status = bin()
        .args(["export", "--format", "gnuplot", "--grid", "3x3x3", "--spec"])
        .arg(fixture("one_constant_c.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let dat = std::fs::read_to_string(&out).unwrap();
    assert!(dat.starts_with("# x1 x2 x3 l1 l2 l3\n"));
    assert_eq!(dat.lines().count(), 1 + 27);
}
