use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use crossflip::coloring::{find_proper_coloring, is_proper};
use crossflip::core::classify::classify;
use crossflip::core::{canonical_form, generate};
use crossflip::io;
use crossflip::pipeline::random::random_sphere;
use crossflip::pipeline::ReductionReport;

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crossflip-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn crossflip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossflip")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_facets_and_coloring() {
    let dir = workdir("gen");
    let out = dir.join("oct.facets");
    let o = crossflip(&["gen", "cross-polytope", "-d", "2", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let c = io::parse_complex(&fs::read_to_string(&out).unwrap()).unwrap();
    let k = io::parse_coloring(&fs::read_to_string(dir.join("oct.facets.col")).unwrap()).unwrap();
    let (c2, k2) = generate::cross_polytope_boundary(2).unwrap();
    assert_eq!(c, c2);
    assert_eq!(k, k2);
}

#[test]
fn catalog_realizes_all_facet_count_pairs() {
    let o = crossflip(&["catalog", "-d", "2", "--mode", "general", "--format", "structured"]);
    assert!(o.status.success());
    let templates: Vec<crossflip::flips::CrossFlipTemplate> = serde_json::from_str(&stdout(&o)).unwrap();
    let shapes: Vec<(usize, usize)> = templates.iter().map(|t| t.shape()).collect();
    for pair in [(1, 7), (2, 6), (3, 5), (4, 4)] {
        assert!(shapes.contains(&pair), "{pair:?} missing");
    }
}

#[test]
fn reduce_balanced_bipyramid_report_replays() {
    let dir = workdir("reduce");
    let input = dir.join("hex.facets");
    let report = dir.join("report.json");
    let (b, _) = generate::bipyramid(3).unwrap();
    fs::write(&input, io::serialize_complex(&b)).unwrap();
    let o = crossflip(&["reduce", "--balanced", input.to_str().unwrap(), "-o", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: ReductionReport = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let states = r.replay().unwrap();
    let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
    assert_eq!(canonical_form(&states[0].0).unwrap(), canonical_form(&c2).unwrap());
    assert_eq!(r.end, b);
    assert_eq!(r.stats.seed, Some(0));
}

#[test]
fn outputs_are_reproducible() {
    for args in [
        &["gen", "random-sphere", "-n", "12", "--seed", "7"][..],
        &["gen", "random-balanced", "-n", "6", "--seed", "3", "--format", "structured"][..],
        &["catalog", "-d", "2", "--mode", "basic", "--format", "structured"][..],
    ] {
        let a = crossflip(args);
        let b = crossflip(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let dir = workdir("repro");
    let input = dir.join("b.facets");
    let (b, _) = generate::bipyramid(4).unwrap();
    fs::write(&input, io::serialize_complex(&b)).unwrap();
    let args = ["reduce", input.to_str().unwrap(), "--method", "heuristic", "--seed", "11", "--budget", "60"];
    let (x, y) = (crossflip(&args), crossflip(&args));
    assert_eq!(x.stdout, y.stdout);
    let mut structured = args.to_vec();
    structured.extend(["--format", "structured"]);
    assert_eq!(crossflip(&structured).stdout, crossflip(&structured).stdout);
}

#[test]
fn check_agrees_with_the_library() {
    let dir = workdir("check");
    for seed in 0..100u64 {
        let c = random_sphere(4 + (seed % 9) as usize, seed).unwrap();
        let path = dir.join(format!("s{seed}.facets"));
        fs::write(&path, io::serialize_complex(&c)).unwrap();
        let mut args =
            vec!["check".to_string(), path.to_str().unwrap().to_string(), "--format".into(), "structured".into()];
        let k = find_proper_coloring(&c, 4 + (seed % 2) as usize);
        if let Some(k) = &k {
            let kp = dir.join(format!("s{seed}.col"));
            fs::write(&kp, io::serialize_coloring(k)).unwrap();
            args.extend(["--coloring".to_string(), kp.to_str().unwrap().to_string()]);
        }
        let o = crossflip(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let expected = serde_json::to_value(classify(&c)).unwrap();
        for (key, val) in expected.as_object().unwrap() {
            assert_eq!(&v[key], val, "{key} for seed {seed}");
        }
        if let Some(k) = &k {
            assert_eq!(v["proper"], serde_json::Value::Bool(is_proper(&c, k).unwrap()));
        }
    }
}

#[test]
fn exit_codes() {
    let dir = workdir("exit");
    let bad = dir.join("bad.facets");
    fs::write(&bad, "a b c\n\nb c b\n").unwrap();
    let o = crossflip(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parse");
    assert!(err["error"]["message"].as_str().unwrap().starts_with("line 3"));
    assert_eq!(crossflip(&["reduce"]).status.code(), Some(2));
    assert_eq!(crossflip(&["gen", "cross-polytope", "--frobnicate"]).status.code(), Some(2));
    let t = dir.join("torus.facets");
    let (torus, _) = generate::grid_torus(3, 3).unwrap();
    fs::write(&t, io::serialize_complex(&torus)).unwrap();
    let o = crossflip(&["reduce", "--balanced", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fmt_round_trips_bytes() {
    let dir = workdir("fmt");
    let messy = dir.join("messy.facets");
    fs::write(
        &messy,
        "# octahedron\n\ny0 x1 x2\nx0 x1 x2\n\nx0 x1 y2\nx0 y1 x2\nx0 y1 y2\ny0 x1 y2\ny0 y1 x2\ny0 y1 y2\n",
    )
    .unwrap();
    let once = crossflip(&["fmt", messy.to_str().unwrap()]);
    let canonical = dir.join("canonical.facets");
    fs::write(&canonical, &once.stdout).unwrap();
    let twice = crossflip(&["fmt", canonical.to_str().unwrap()]);
    assert_eq!(once.stdout, twice.stdout);
    let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
    assert_eq!(stdout(&once), io::serialize_complex(&c2));
}

#[test]
fn cobordism_commands_chain() {
    let dir = workdir("cob");
    let sphere = dir.join("s.facets");
    let (c2, _) = generate::cross_polytope_boundary(2).unwrap();
    fs::write(&sphere, io::serialize_complex(&c2)).unwrap();
    let e = dir.join("e.json");
    let o = crossflip(&[
        "cobordism",
        "elementary",
        sphere.to_str().unwrap(),
        "--a",
        "x0,x1",
        "--b",
        "x2,y2",
        "-o",
        e.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(crossflip(&["cobordism", "verify", e.to_str().unwrap()]).status.success());
    let o = crossflip(&["cobordism", "decompose", e.to_str().unwrap()]);
    assert_eq!(stdout(&o), "{x0,x1} -> {x2,y2}\n");
    let s = dir.join("sub.json");
    let o = crossflip(&[
        "cobordism",
        "subdivide",
        e.to_str().unwrap(),
        "--element",
        "1",
        "--apex",
        "p",
        "-o",
        s.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let el =
        crossflip(&["cobordism", "eliminate", sphere.to_str().unwrap(), "--all-vertices", "--format", "structured"]);
    assert!(el.status.success());
}
