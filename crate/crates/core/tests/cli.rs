use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ca_mols(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ca-mols")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn write_squares(dir: &Path) -> (String, String) {
    let (a, b) = (path(dir, "150.json"), path(dir, "90.txt"));
    assert_eq!(ca_mols(&["square", "--rule", "wolfram:150:r1", "--m", "2", "--out", &a]).status.code(), Some(0));
    let o = ca_mols(&["square", "--rule", "linear:2:1,0,1", "--m", "2", "--out", &b, "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    (a, b)
}

#[test]
fn square_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_squares(dir.path());
    assert_eq!(fs::read_to_string(&b).unwrap(), "1 2 3 4\n2 1 4 3\n3 4 1 2\n4 3 2 1\n");
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(json["entries"], serde_json::json!([[1, 4, 3, 2], [2, 3, 4, 1], [4, 1, 2, 3], [3, 2, 1, 4]]));

    let o = ca_mols(&["square", "--rule", "wolfram:0:r1", "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not bipermutive"));
    assert_eq!(ca_mols(&["square", "--rule", "wolfram:150:r1", "--m", "3"]).status.code(), Some(2));
}

#[test]
fn check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_squares(dir.path());
    let o = ca_mols(&["check", "--squares", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "squares 1 and 2: orthogonal\nMOLS: yes\n");

    let o = ca_mols(&["check", "--squares", &a, &a]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not orthogonal"));

    let big = path(dir.path(), "big.txt");
    assert_eq!(
        ca_mols(&["square", "--rule", "wolfram:150:r1", "--m", "4", "--out", &big, "--format", "text"]).status.code(),
        Some(0)
    );
    assert_eq!(ca_mols(&["check", "--squares", &a, &big]).status.code(), Some(2));

    let junk = path(dir.path(), "junk.txt");
    fs::write(&junk, "1 2\n2 2\n").unwrap();
    assert_eq!(ca_mols(&["check", "--squares", &a, &junk]).status.code(), Some(2));
    assert_eq!(ca_mols(&["check", "--squares", &a]).status.code(), Some(2));
}

#[test]
fn oa_command() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = write_squares(dir.path());
    let out = path(dir.path(), "oa.json");
    assert_eq!(ca_mols(&["oa", "--squares", &a, &b, "--out", &out]).status.code(), Some(0));
    let oa: ca_mols::OrthogonalArray = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((oa.rows().len(), oa.columns()), (16, 4));

    let o = ca_mols(&["oa", "--squares", &b]);
    assert_eq!(o.status.code(), Some(0));
    let single: ca_mols::OrthogonalArray = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((single.rows().len(), single.columns()), (16, 3));

    assert_eq!(ca_mols(&["oa", "--squares", &a, &a]).status.code(), Some(1));
}

#[test]
fn share_and_recover() {
    let dir = tempfile::tempdir().unwrap();
    let desc = path(dir.path(), "scheme.json");
    let o =
        ca_mols(&["setup", "--q", "2", "--r", "1", "--t", "1", "--poly", "1,1,1", "--poly", "1,0,1", "--out", &desc]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let shares = path(dir.path(), "shares");
    let o = ca_mols(&["share", "--descriptor", &desc, "--secret", "1,0", "--randomness", "0,1", "--outdir", &shares]);
    assert_eq!(o.status.code(), Some(0));
    let s1 = path(Path::new(&shares), "share_1.json");
    let s2 = path(Path::new(&shares), "share_2.json");
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&s1).unwrap()).unwrap();
    assert_eq!(file["value"], serde_json::json!([1, 1]));

    let o = ca_mols(&["recover", "--descriptor", &desc, "--share", &s1, "--share", &s2]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1,0\n");

    assert_eq!(ca_mols(&["recover", "--descriptor", &desc, "--share", &s1]).status.code(), Some(2));
    assert_eq!(ca_mols(&["recover", "--descriptor", &desc, "--share", &s1, "--share", &s1]).status.code(), Some(1));

    let tampered = path(dir.path(), "tampered.json");
    let text = fs::read_to_string(&s2).unwrap();
    let hash = file["descriptor_hash"].as_str().unwrap();
    fs::write(&tampered, text.replace(hash, &"0".repeat(64))).unwrap();
    assert_eq!(
        ca_mols(&["recover", "--descriptor", &desc, "--share", &s1, "--share", &tampered]).status.code(),
        Some(2)
    );

    let o = ca_mols(&["audit", "--descriptor", &desc]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"uniform\": true"));
}

#[test]
fn seeded_sharing_round_trips_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let desc = path(dir.path(), "scheme.json");
    let o = ca_mols(&["setup", "--q", "3", "--r", "1", "--t", "2", "--n", "3", "--seed", "5", "--out", &desc]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (a, b) = (path(dir.path(), "a"), path(dir.path(), "b"));
    for out in [&a, &b] {
        let o = ca_mols(&["share", "--descriptor", &desc, "--secret", "2,0,1,1", "--seed", "9", "--outdir", out]);
        assert_eq!(o.status.code(), Some(0));
    }
    for k in 1..=3 {
        let name = format!("share_{k}.json");
        assert_eq!(fs::read(path(Path::new(&a), &name)).unwrap(), fs::read(path(Path::new(&b), &name)).unwrap());
    }
    let s3 = path(Path::new(&a), "share_3.json");
    let s1 = path(Path::new(&a), "share_1.json");
    let o = ca_mols(&["recover", "--descriptor", &desc, "--share", &s3, "--share", &s1]);
    assert_eq!(stdout(&o), "2,0,1,1\n");

    assert_eq!(ca_mols(&["share", "--descriptor", &desc, "--secret", "2,0", "--outdir", &a]).status.code(), Some(2));
    assert_eq!(
        ca_mols(&["share", "--descriptor", &desc, "--secret", "2,0,1,7", "--outdir", &a]).status.code(),
        Some(2)
    );
    let o = ca_mols(&["setup", "--q", "2", "--r", "1", "--t", "1", "--source", "irreducible"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "census.json");
    let o = ca_mols(&["search", "--q", "2", "--r", "2", "--m", "4", "--class", "bipermutive-all", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stdout(&o);
    assert!(summary.contains("rules: 256"));
    assert!(summary.contains("pairs up to joint complement: 426"));
    let census: ca_mols::Census = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(census.conventions.joint_complement_classes, Some(426));

    let o = ca_mols(&["search", "--q", "2", "--r", "2", "--m", "8", "--class", "bipermutive-linear"]);
    assert_eq!(o.status.code(), Some(0));
    let census: ca_mols::Census = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(census.pair_count, 21);
    let again = ca_mols(&["search", "--q", "2", "--r", "2", "--m", "8", "--class", "bipermutive-linear"]);
    assert_eq!(again.stdout, o.stdout);

    let o = ca_mols(&["count", "--q", "2", "--n", "2", "--a", "1", "--b", "1"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "2\n".to_owned()));
    assert_eq!(ca_mols(&["count", "--q", "2", "--n", "40", "--a", "1", "--b", "1"]).status.code(), Some(2));
    assert_eq!(
        ca_mols(&["search", "--q", "6", "--r", "1", "--m", "2", "--class", "bipermutive-all"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ca_mols(&["search", "--q", "2", "--r", "1", "--m", "2", "--class", "everything"]).status.code(),
        Some(2)
    );
}
