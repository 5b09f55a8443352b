use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cuttree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuttree"))
        .args(args)
        .env_remove("CUTTREE_THREADS")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn classic_build_verifies_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "k4.txt");
    fs::write(&g, "p ght 4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let t = path(dir.path(), "k4.tree");
    assert!(cuttree(&["build", "--algo", "classic", &g, "-o", &t]).status.success());
    let out = cuttree(&["verify", &g, &t]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

#[test]
fn query_on_path_tree() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "p.tree");
    fs::write(&t, "# n 4\n0 1 5\n1 2 3\n2 3 7\n").unwrap();
    let out = cuttree(&["query", &t, "0", "3"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "3\n");
    let out = cuttree(&["query", &t, "1", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subcubic_and_classic_agree_on_er50() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    assert!(
        cuttree(&["gen", "er", "--n", "50", "--p", "0.2", "--seed", "11", "-o", &g])
            .status
            .success()
    );
    let (c, s) = (path(dir.path(), "c.tree"), path(dir.path(), "s.tree"));
    assert!(cuttree(&["build", "--algo", "classic", &g, "-o", &c]).status.success());
    let rep = path(dir.path(), "rep.txt");
    assert!(
        cuttree(&["build", "--algo", "subcubic", "--seed", "3", "--report", &rep, &g, "-o", &s])
            .status
            .success()
    );
    let a = cuttree(&["allpairs", &c]).stdout;
    let b = cuttree(&["allpairs", &s]).stdout;
    assert_eq!(a, b);
    assert_eq!(String::from_utf8_lossy(&a).lines().count(), 50);
    let report = fs::read_to_string(&rep).unwrap();
    for key in [
        "flow_calls_total=",
        "flow_calls_repair=",
        "recursion_depth=",
        "per_w_crossing_edges=",
        "rounds_to_all_done=",
    ] {
        assert!(report.contains(key), "{key}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    cuttree(&[
        "gen",
        "clustered",
        "--clusters",
        "3",
        "--size",
        "8",
        "--seed",
        "5",
        "-o",
        &g,
    ]);
    let mut trees = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let t = path(dir.path(), &format!("t{i}"));
        let st = cuttree(&["--threads", threads, "build", "--seed", "9", &g, "-o", &t]).status;
        assert!(st.success());
        trees.push(fs::read(&t).unwrap());
    }
    assert_eq!(trees[0], trees[1]);
    let again = cuttree(&["gen", "clustered", "--clusters", "3", "--size", "8", "--seed", "5"]).stdout;
    assert_eq!(again, fs::read(&g).unwrap());
}

#[test]
fn verify_rejects_wrong_tree() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "path.txt");
    fs::write(&g, "p ght 3 2\n0 1\n1 2\n").unwrap();
    let t = path(dir.path(), "bad.tree");
    fs::write(&t, "0 1 1\n1 2 9\n").unwrap();
    let out = cuttree(&["verify", &g, &t]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge (1, 2)"));
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "bad.txt");
    fs::write(&g, "p ght 3 2\n0 1\n1 7\n").unwrap();
    let out = cuttree(&["build", "--algo", "classic", &g, "-o", &path(dir.path(), "t")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = cuttree(&["build", "--algo", "warp", &g, "-o", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cuttree(&["decompose", "--phi", "abc", &g]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subcubic_rejects_non_simple_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "w.txt");
    fs::write(&g, "p ght 2 1\n0 1 3\n").unwrap();
    let out = cuttree(&["build", "--algo", "subcubic", &g, "-o", &path(dir.path(), "t")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        cuttree(&["build", "--algo", "gusfield", &g, "-o", &path(dir.path(), "t")])
            .status
            .success()
    );
}

#[test]
fn bench_csv_header_and_rows() {
    let out = cuttree(&[
        "bench",
        "--algos",
        "classic,subcubic",
        "--sizes",
        "20",
        "--seeds",
        "0,1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,n,m,seed,flow_calls,repair_calls,depth,wall_ms");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("classic,20,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 8));
}

#[test]
fn decompose_two_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "cliques.txt");
    let mut text = String::from("p ght 10 21\n");
    for base in [0, 5] {
        for a in 0..5 {
            for b in a + 1..5 {
                text.push_str(&format!("{} {}\n", base + a, base + b));
            }
        }
    }
    text.push_str("4 5\n");
    fs::write(&g, text).unwrap();
    let out = cuttree(&["decompose", "--phi", "1/5", &g]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("0 1 2 3 4\n") && s.contains("5 6 7 8 9\n"), "{s}");
}

#[test]
fn fixture_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "tri.txt");
    assert!(cuttree(&["gen", "triples", "--n-triples", "3", "-o", &g])
        .status
        .success());
    let tree = format!("{g}.expected");
    assert_eq!(cuttree(&["verify", &g, &tree]).status.code(), Some(0));
    let g = path(dir.path(), "two.txt");
    assert!(cuttree(&["gen", "two-star", "--n", "12", "--w", "3", "-o", &g])
        .status
        .success());
    let side = fs::read_to_string(format!("{g}.expected")).unwrap();
    assert!(side.contains("lambda 3"));
}
