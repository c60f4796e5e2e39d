use std::fs;
use std::path::Path;
use std::process::Command;

fn nccr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nccr")).args(args).output().expect("run nccr");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pentagon_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fixtures");
    assert_eq!(nccr(&["fixtures", "--out", s(&fx)]).0, 0);
    let pent = fx.join("pentagon.json");
    assert!(pent.exists() && fx.join("random_19.json").exists());

    let plan = dir.path().join("plan.json");
    let (code, _, err) = nccr(&["triangulate", "--method", "gulotta", "--polygon", s(&pent), "--out", s(&plan)]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&plan).unwrap()).unwrap();
    assert_eq!(v["mode"], "gulotta");
    assert_eq!(v["triangles"].as_array().unwrap().len(), 9);
    assert!(v["cuts"][0]["slope"].is_string());

    let induced = dir.path().join("induced.json");
    assert_eq!(nccr(&["induce", "--plan", s(&plan), "--seed", "gulotta", "--out", s(&induced)]).0, 0);
    let w: serde_json::Value = serde_json::from_str(&fs::read_to_string(&induced).unwrap()).unwrap();
    assert_eq!(w.as_array().unwrap().len(), 24);

    let report = dir.path().join("report.json");
    let (code, _, err) = nccr(&["--jobs", "2", "verify", "--plan", s(&plan), "--seed", "gulotta", "--out", s(&report)]);
    assert_eq!(code, 0, "{err}");
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.as_array().unwrap().iter().all(|x| x["verdict"] == "certified"));

    let (code, _, _) = nccr(&["verify", "--plan", s(&plan), "--seed", "iu"]);
    assert_eq!(code, 1, "mismatched seed is an error");

    let svg = dir.path().join("plan.svg");
    assert_eq!(nccr(&["render", "--plan", s(&plan), "--out", s(&svg)]).0, 0);
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("class=\"vertex\"").count(), 10);

    let (code, out, _) = nccr(&["weights", "--polygon", s(&pent)]);
    assert_eq!(code, 0);
    let g: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(g["rank"], 2);
}

#[test]
fn run_writes_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let pent = dir.path().join("p.json");
    fs::write(&pent, r#"{"vertices": [[0,0],[4,0],[4,1],[3,2],[1,3]]}"#).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let (code, out, err) = nccr(&["run", "--method", "iu", "--polygon", s(&pent), "--out", s(d)]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("certificate true (16 classes, volume 16)"), "{out}");
    }
    for f in ["plan.json", "plan.svg", "induced.json", "restricted.json", "reports.json", "certificate.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("sq.json");
    fs::write(&sq, r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
    let w = |vals: [[i64; 4]; 2]| {
        let pts = [[0, 0], [1, 0], [1, 1], [0, 1]];
        let v: Vec<serde_json::Value> = vals
            .iter()
            .map(|b| {
                serde_json::json!(pts
                    .iter()
                    .zip(b)
                    .map(|(p, x)| serde_json::json!({"vertex": p, "value": x}))
                    .collect::<Vec<_>>())
            })
            .collect();
        serde_json::to_string(&v).unwrap()
    };
    let good = dir.path().join("good.json");
    fs::write(&good, w([[0, 0, 0, 0], [0, 0, 1, 0]])).unwrap();
    let (code, out, _) = nccr(&["certify", "--polygon", s(&sq), "--weights", s(&good)]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": true"));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, w([[0, 0, 0, 0], [0, 1, 0, 1]])).unwrap();
    assert_eq!(nccr(&["certify", "--polygon", s(&sq), "--weights", s(&bad)]).0, 2);
    assert_eq!(nccr(&["certify", "--polygon", "/nonexistent.json", "--weights", s(&bad)]).0, 1);
}

#[test]
fn refuted_verify_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("sq.json");
    fs::write(&sq, r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
    let plan = dir.path().join("plan.json");
    assert_eq!(nccr(&["triangulate", "--method", "gulotta", "--polygon", s(&sq), "--out", s(&plan)]).0, 0);
    let seeds = dir.path().join("seeds.json");
    let pts = [[0, 0], [1, 0], [1, 1], [0, 1]];
    let mk =
        |b: [i64; 4]| pts.iter().zip(b).map(|(p, x)| serde_json::json!({"vertex": p, "value": x})).collect::<Vec<_>>();
    fs::write(&seeds, serde_json::to_string(&vec![mk([0, 0, 0, 0]), mk([0, 1, 0, 1])]).unwrap()).unwrap();
    let (code, out, err) =
        nccr(&["verify", "--plan", s(&plan), "--seed", s(&seeds), "--mode", "box", "--box-radius", "3"]);
    assert_eq!(code, 2, "{err}");
    assert!(out.contains("\"refuted\""));
}
