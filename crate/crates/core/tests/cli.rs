use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn corpus_file(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn linext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linext"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn extensions_of_p0() {
    let o = linext(&["extensions", &corpus_file("p0.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 2 3 4\n1 2 4 3\n1 4 2 3\n2 1 3 4\n2 1 4 3\n");
}

#[test]
fn promotion_matrix_csv() {
    let o = linext(&[
        "matrix",
        &corpus_file("p0.json"),
        "--kind",
        "promotion",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "-x1-x2-x3,x4,x1+x4,0,0\n\
         x2+x3,-x1-x2-x4,0,x2,0\n\
         0,x2,-x1-x4,0,x2\n\
         0,x1,0,-x1-x2-x3,x1+x4\n\
         x1,0,0,x1+x3,-x1-x2-x4\n"
    );
}

#[test]
fn matrix_json_carries_rendered_entries() {
    let o = linext(&[
        "matrix",
        &corpus_file("p0.json"),
        "--kind",
        "uniform-transposition",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 5);
    assert_eq!(v["extensions"][2], "1423");
    assert_eq!(v["rendered"][1][1], "-x1-x2-x3");
    assert_eq!(v["entries"][0][1], serde_json::json!([0, 0, 1, 0]));
}

#[test]
fn graph_dot_and_loops() {
    let p = corpus_file("p0.json");
    let plain = stdout(&linext(&["graph", &p, "--kind", "promotion", "--dot"]));
    let looped = stdout(&linext(&[
        "graph",
        &p,
        "--kind",
        "promotion",
        "--dot",
        "--loops",
    ]));
    assert!(plain.starts_with("digraph \"promotion\" {"));
    assert!(plain.contains("[label=\"x4\"]"));
    assert!(looped.lines().count() > plain.lines().count());
    let edges = stdout(&linext(&["graph", &p, "--kind", "transposition"]));
    assert_eq!(edges.lines().next(), Some("from,to,operator,weight"));
}

#[test]
fn stationary_at_assignment() {
    let o = linext(&[
        "stationary",
        &corpus_file("p0.json"),
        "--kind",
        "promotion",
        "--at",
        "1/10,2/10,3/10,4/10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1243 (x1+x2+x3)/(x1+x2+x4) 20/77"), "{out}");
    assert!(out.ends_with("kernel check: pass\n"));
}

#[test]
fn spectrum_of_chain_union() {
    let o = linext(&[
        "spectrum",
        &data("chains-2-2.json"),
        "--check-at",
        "1,2,3,5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("\n-x1-x2-x3-x4,2\n"), "{out}");
    assert!(out.contains("eigenvalues are -x_S over lower sets: pass"));
    assert!(out.contains("-x_S matches, +x_S does not match"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn spectrum_of_non_forest() {
    let o = linext(&["spectrum", &corpus_file("p0.json"), "--check-at", "1,2,3,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not a rooted forest"));
}

#[test]
fn monoid_reports() {
    let p1 = stdout(&linext(&["monoid", &corpus_file("p1.json")]));
    assert!(
        p1.starts_with("elements: 6\nR-trivial: yes\nidempotents: 5\n"),
        "{p1}"
    );
    assert!(p1.contains("L^M: {} {2} {1,2,3}"));
    assert!(p1.ends_with("eigenvalue,multiplicity\n0,1\nx2,1\nx1+x2+x3,1\n"));
    let p2 = stdout(&linext(&["monoid", &corpus_file("p2.json")]));
    assert!(p2.contains("R-trivial: no"));
    let capped = linext(&["monoid", &corpus_file("p0.json"), "--cap", "5"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(stderr(&capped).contains("budget"));
}

#[test]
fn sample_is_deterministic_per_seed() {
    let args = |seed: &'static str| {
        vec![
            "sample",
            "",
            "--x",
            "1/4,1/4,1/4,1/4",
            "--steps",
            "2000",
            "--burnin",
            "10",
            "--seed",
            seed,
        ]
    };
    let p = corpus_file("p0.json");
    let run = |seed| {
        let mut a = args(seed);
        a[1] = &p;
        stdout(&linext(&a))
    };
    let a = run("5");
    assert_eq!(a, run("5"));
    assert_ne!(a, run("6"));
    assert!(a.starts_with("# kind=uniform-promotion x=1/4,1/4,1/4,1/4 steps=2000 burnin=10 seed=5"));
    let total: u64 = a
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("extension"))
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 2000);
}

#[test]
fn sample_tv_trace() {
    let o = linext(&[
        "sample",
        &corpus_file("p0.json"),
        "--x",
        "1/4,1/4,1/4,1/4",
        "--steps",
        "3",
        "--tv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "step,tv,tv_exact");
    assert_eq!(lines[2], "0,8.00000000000e-1,4/5");
    assert_eq!(lines.len(), 6);
}

#[test]
fn bad_inputs_exit_2() {
    let p = corpus_file("p0.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["sample", &p, "--x", "1/4,1/4,1/4,1/5"],
        vec!["sample", &p, "--x", "1/2,1/2"],
        vec!["stationary", &p, "--kind", "promotion", "--at", "1,x,3,4"],
        vec!["matrix", &p, "--kind", "bogus"],
        vec!["matrix", &p, "--kind", "promotion", "--frobnicate"],
        vec!["extensions", "/nonexistent/poset.json"],
    ];
    for c in cases {
        let o = linext(&c);
        assert_eq!(o.status.code(), Some(2), "{c:?}");
        assert!(!stderr(&o).is_empty());
    }
    let cycle = linext(&["extensions", &data("cycle.json")]);
    assert_eq!(cycle.status.code(), Some(2));
    assert!(stderr(&cycle).contains("cycle"));
}

#[test]
fn verify_small_corpus() {
    let o = linext(&["verify", &data("small-corpus.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("corpus: 6 posets\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 12);
    assert!(out.ends_with("all checks passed\n"));
    let bad = linext(&["verify", &data("unnatural-corpus.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("not naturally labeled"));
}

#[test]
fn verify_bundled_corpus() {
    let o = linext(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("all checks passed\n"));
}

#[test]
fn relabel_names() {
    let o = linext(&["relabel", &data("named.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"n\":3,\"covers\":[[2,3]],\"labels\":[\"hat\",\"socks\",\"shoes\"]}\n"
    );
}
