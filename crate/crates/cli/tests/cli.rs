use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use nframes::chain::{ChainComplex, ChainMap};
use nframes::fincat::{FinCategory, Morphism};
use nframes::io::{
    to_json, CategoryFile, CategoryRef, ComplexFile, DiagramFile, LiftFile, MapEntry, MapFile, MatrixBlock,
};
use nframes::linalg::Matrix;
use nframes::reedy::ChainDiagram;

fn nframes(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nframes"))
        .args(args)
        .current_dir(dir)
        .env_remove("NFRAMES_SEED")
        .env_remove("NFRAMES_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: String) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn point() -> Arc<ChainComplex> {
    Arc::new(ChainComplex::point(2, 0))
}

#[test]
fn not_strong_suite_passes_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = nframes(&["suite", "not-strong"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("d*c^-1*a"));
    assert!(stderr(&o).starts_with("PASS"));
}

#[test]
fn nh_unit_on_spine3_reports_each_stage() {
    let dir = tempfile::tempdir().unwrap();
    let o = nframes(&["suite", "nh-unit", "--k", "spine3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for n in 1..=3 {
        assert!(stdout(&o).contains(&format!("spine3/n={n}")));
    }
}

#[test]
fn malformed_category_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\n  \"objects\": [\"a\"],\n  \"morphisms\": [\n    {\"id\": 0, \"name\": 7}\n  ]\n}\n".into(),
    );
    let o = nframes(&["nerve", arg(&bad)], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let missing = nframes(&["validate", "nope.json"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn broken_laws_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = CategoryFile::from_category(&FinCategory::chain(2));
    let t = file.compose.iter_mut().next().expect("[2] has a non-trivial composite");
    t[2] = file.identities[0];
    let path = write(dir.path(), "broken.json", to_json(&file));
    let o = nframes(&["validate", arg(&path)], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"passed\":false"));
}

#[test]
fn nerve_then_homotopy_category() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "c.json", to_json(&CategoryFile::from_category(&FinCategory::chain(2))));
    let o = nframes(&["--cap", "2", "nerve", arg(&cat), "--emit", "n.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nframes(&["hocat", "n.json", "--emit", "h.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let h = std::fs::read_to_string(dir.path().join("h.json")).unwrap();
    let back: CategoryFile = serde_json::from_str(&h).unwrap();
    assert_eq!(back.objects.len(), 3);
    assert_eq!(back.morphisms.len(), 6);
}

#[test]
fn localization_and_closure_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write(dir.path(), "z.json", to_json(&CategoryFile::from_category(&FinCategory::zigzag())));
    let o = nframes(&["localize", arg(&cat)], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("hom/A/D"));
    let o = nframes(&["weq-closure", arg(&cat), "--class", "a,c"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nframes(&["--cap", "2", "dsub", "build", arg(&cat)], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"weq\""));
}

#[test]
fn reedy_commands_on_a_diagram_file() {
    let dir = tempfile::tempdir().unwrap();
    let z = Arc::new(ChainComplex::zero(2));
    let f = ChainMap::zero(point(), point());
    let x = ChainDiagram::from_sequence(&[f, ChainMap::zero(point(), z)]).unwrap();
    let path = write(dir.path(), "x.json", to_json(&DiagramFile::from_diagram(&x)));
    let check = nframes(&["reedy", "check", arg(&path)], dir.path());
    assert_eq!(check.status.code(), Some(1), "zero maps out of a point are not cofibrations");
    let o = nframes(&["reedy", "replace", arg(&path), "--emit", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nframes(&["reedy", "check", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nframes(&["reedy", "colim", "r.json", "--emit", "colim.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("colim.json").exists());
}

#[test]
fn frames_commands() {
    let dir = tempfile::tempdir().unwrap();
    let two = Arc::new(ChainComplex::concentrated(2, 0, 2));
    let f = ChainMap::new(point(), two.clone(), [(0, Matrix::from_rows(2, &[vec![1], vec![0]]))].into()).unwrap();
    let g = ChainMap::new(two, point(), [(0, Matrix::from_rows(2, &[vec![1, 1]]))].into()).unwrap();
    let fp = write(dir.path(), "f.json", to_json(&MapFile::from_map(&f)));
    let gp = write(dir.path(), "g.json", to_json(&MapFile::from_map(&g)));
    let pt = write(dir.path(), "pt.json", to_json(&ComplexFile::from_complex(&point())));
    for args in [
        vec!["--cap", "2", "frames", "vertex", arg(&pt)],
        vec!["--cap", "2", "frames", "edge", arg(&fp)],
        vec!["--cap", "2", "frames", "theta", arg(&fp)],
        vec!["--cap", "2", "frames", "triangle", arg(&fp), arg(&gp)],
        vec!["--cap", "2", "frames", "verify-triangles", "--cases", "2"],
    ] {
        let o = nframes(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
    let o = nframes(&["--cap", "2", "frames", "triangle", arg(&gp), arg(&gp)], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn frames_lift_realizes_the_prescribed_morphism() {
    let dir = tempfile::tempdir().unwrap();
    let shape =
        FinCategory::free(vec!["a".into(), "b".into()], vec![Morphism { name: "u".into(), src: 0, tgt: 1 }]).unwrap();
    write(dir.path(), "shape.json", to_json(&CategoryFile::from_category(&shape)));
    let u = shape.morphism_by_name("u").unwrap();
    let file = LiftFile {
        category: CategoryRef::Path("shape.json".into()),
        objects: vec![ComplexFile::from_complex(&point()), ComplexFile::from_complex(&ChainComplex::disk(2, 1))],
        arrows: vec![MapEntry { morphism: u, blocks: vec![] }],
    };
    let path = write(dir.path(), "lift.json", to_json(&file));
    let o = nframes(&["--cap", "2", "frames", "lift", arg(&path)], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"realized\""));
    let bad = LiftFile {
        arrows: vec![MapEntry { morphism: u, blocks: vec![MatrixBlock { degree: 0, rows: vec![vec![1]] }] }],
        ..file
    };
    let path = write(dir.path(), "bad.json", to_json(&bad));
    let o = nframes(&["--cap", "2", "frames", "lift", arg(&path)], dir.path());
    assert_eq!(o.status.code(), Some(2), "homology of a disk is zero: {}", stderr(&o));
}

#[test]
fn sset_filtration_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let k = nframes::sset::Builtin::Wedge.build(3);
    let path = write(dir.path(), "k.json", to_json(&nframes::io::SSetFile::from_sset(&k)));
    let o = nframes(&["sset", "verify-filtration", arg(&path)], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nframes(&["sset", "verify-filtration", "--k", "spine2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn reports_are_deterministic_and_env_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str, extra: &[&str], seed_env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nframes"));
        cmd.args(["suite", "property", "--cases", "24", "--out", out]).args(extra).current_dir(dir.path());
        cmd.env_remove("NFRAMES_SEED");
        if let Some(s) = seed_env {
            cmd.env("NFRAMES_SEED", s);
        }
        let o = cmd.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let a = run("a.jsonl", &[], None);
    let b = run("b.jsonl", &["--sequential"], None);
    assert_eq!(a, b);
    let c = run("c.jsonl", &[], Some("9"));
    let d = run("d.jsonl", &["--seed", "9"], None);
    assert_eq!(c, d);
    assert_ne!(a, c);
}

#[test]
fn injected_mutation_fails_the_property_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = nframes(&["suite", "property", "--cases", "12", "--inject"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("minimized"));
    let o = nframes(&["suite", "mutation", "--cases", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn unknown_suite_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nframes(&["suite", "nope"], dir.path()).status.code(), Some(2));
}

#[test]
fn unsupported_primes_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for p in ["4", "257"] {
        let o = nframes(&["--prime", p, "suite", "factorization", "--cases", "1"], dir.path());
        assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    }
}
