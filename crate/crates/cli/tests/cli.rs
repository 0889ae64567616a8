use std::path::Path;
use std::process::{Command, Output};

use polycomplex::formats::{read_complex, read_simplicial};
use polycomplex::topology::GroupPresentation;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycomplex")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn workspace(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in files {
        std::fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

const SQUARE: &str = "2 4\n0 0\n1 0\n0 1\n1 1\n";

#[test]
fn voronoi_of_two_points() {
    let dir = workspace(&[("p.pts", "1 2\n0\n1\n")]);
    let o = run(dir.path(), &["voronoi", "--points", "p.pts", "--out", "v.cplx"]);
    assert_eq!(o.status.code(), Some(0));
    let c = read_complex(&std::fs::read_to_string(dir.path().join("v.cplx")).unwrap()).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(json(dir.path(), "v.cplx")["schema_version"], "CPLX/1");
}

#[test]
fn no_limit_check_collapses() {
    let dir = workspace(&[]);
    let o = run(dir.path(), &["no-limit-check", "--degree", "4", "--out", "r.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("restriction_image_dim: 1"));
    let report = json(dir.path(), "r.json");
    assert_eq!(report["schema_version"], "NOLIMIT/1");
    assert_eq!(report["restriction_image_dim"], 1);
    let control = run(dir.path(), &["no-limit-check", "--degree", "3", "--control"]);
    assert_eq!(control.status.code(), Some(0));
    assert!(stdout(&control).contains("restriction_image_dim: 4"));
}

#[test]
fn higman_is_superperfect() {
    let dir = workspace(&[("higman.grp", &GroupPresentation::higman().to_text())]);
    let o = run(dir.path(), &["superperfect", "--presentation", "higman.grp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["certified: true", "chi: 1", "h1: trivial"] {
        assert!(text.contains(line), "{text}");
    }
}

#[test]
fn square_corners_fail_then_perturb() {
    let dir = workspace(&[("sq.pts", SQUARE)]);
    let o = run(dir.path(), &["check-simple", "--points", "sq.pts", "--out", "s.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(dir.path(), "s.json")["witness"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(run(dir.path(), &["delaunay", "--points", "sq.pts"]).status.code(), Some(1));

    let o = run(dir.path(), &["perturb", "--points", "sq.pts", "--bound", "1/100", "--seed", "3", "--out", "q.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(dir.path(), &["check-simple", "--points", "q.pts"]).status.code(), Some(0));
    let o = run(dir.path(), &["delaunay", "--points", "q.pts", "--out", "d.scx"]);
    assert_eq!(o.status.code(), Some(0));
    let k = read_simplicial(&std::fs::read_to_string(dir.path().join("d.scx")).unwrap()).unwrap();
    assert_eq!(k.simplices_of_dim(2).len(), 2);
    // without a bound there is nothing to perturb by
    assert_eq!(run(dir.path(), &["perturb", "--points", "sq.pts"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["perturb", "--points", "sq.pts", "--bound", "0"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two_with_position() {
    let dir = workspace(&[("bad.pts", "2 2\n0 x\n1 1\n"), ("short.pts", "2 3\n0 0\n")]);
    let o = run(dir.path(), &["voronoi", "--points", "bad.pts"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2, column 3"), "{err}");
    assert_eq!(run(dir.path(), &["voronoi", "--points", "short.pts"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["voronoi", "--points", "missing.pts"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["homology"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["homology", "--complex", "bad.pts", "--ring", "r"]).status.code(), Some(2));
}

#[test]
fn pipeline_on_a_perturbed_square() {
    let dir = workspace(&[("sq.pts", SQUARE)]);
    let p = dir.path();
    let steps: &[&[&str]] = &[
        &["perturb", "--points", "sq.pts", "--bound", "1/100", "--seed", "3", "--out", "q.pts"],
        &["voronoi", "--points", "q.pts", "--out", "v.cplx"],
        &["check-simple", "--complex", "v.cplx"],
        &["saturate", "--complex", "v.cplx", "--out", "s.json"],
        &["verify-proper", "--complex", "v.cplx", "--records", "s.json", "--out", "proper.json"],
        &["blowup-plan", "--complex", "v.cplx", "--records", "s.json", "--out", "l.json"],
        &["nerve", "--complex", "v.cplx", "--out", "n.scx"],
        &["homology", "--complex", "n.scx", "--ring", "q", "--out", "h.json"],
        &["pi1", "--complex", "n.scx", "--out", "g.grp"],
        &["dual-move", "--complex", "n.scx", "--kind", "barycentric", "--target", "0,1"],
    ];
    for args in steps {
        let o = run(p, args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(json(p, "proper.json")["passed"], true);
    assert_eq!(json(p, "l.json")["schema_version"], "LEDGER/1");
    assert_eq!(json(p, "h.json")["betti"], serde_json::json!([1, 0, 0]));
    let g = GroupPresentation::from_text(&std::fs::read_to_string(p.join("g.grp")).unwrap()).unwrap();
    assert!(g.abelianization().is_trivial());
}

#[test]
fn clip_and_dual_complex() {
    let region = "1\n2 4\n-1 0 <= 0\n0 -1 <= 0\n1 0 <= 1\n0 1 <= 1\n";
    let strata = r#"{"schema_version":"STRATA/1","components":["a","b","c"],
        "strata":[{"components":["a","b"],"count":1},{"components":["b","c"],"count":1},{"components":["a","c"],"count":1}]}"#;
    let dir = workspace(&[("p.pts", "2 3\n0 0\n5 1\n1 4\n"), ("s.rgn", region), ("e.json", strata)]);
    let o = run(dir.path(), &["clip", "--points", "p.pts", "--region", "s.rgn", "--out", "c.cplx"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(dir.path(), &["dual-complex", "--strata", "e.json", "--out", "d.scx"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(dir.path(), &["homology", "--complex", "d.scx"]);
    assert!(stdout(&o).contains("betti: [1, 1]"));
}

#[test]
fn reports_are_reproducible() {
    let outputs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|_| {
            let dir = workspace(&[("sq.pts", SQUARE)]);
            let o = run(dir.path(), &["perturb", "--points", "sq.pts", "--bound", "1/7", "--seed", "42", "--out", "q.pts"]);
            (o.stdout, std::fs::read(dir.path().join("q.pts")).unwrap())
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let dir = workspace(&[("sq.pts", SQUARE)]);
    let other = run(dir.path(), &["perturb", "--points", "sq.pts", "--bound", "1/7", "--seed", "43", "--out", "q.pts"]);
    assert_eq!(other.status.code(), Some(0));
    assert_ne!(std::fs::read(dir.path().join("q.pts")).unwrap(), outputs[0].1);
}
