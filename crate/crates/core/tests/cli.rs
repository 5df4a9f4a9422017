mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use common::{brute_paths, random_dag, random_matrix, rng};
use logcount::cli::{format_graph, format_matrix, Report};
use rand::Rng;

fn write_input(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn logcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logcount")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn json(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn count_paths_and_exit_codes() {
    let diamond = write_input("diamond.graph", "4 4\n0 1\n0 2\n1 3\n2 3\n");
    let f = diamond.to_str().unwrap();
    let o = logcount(&["count-paths", f, "--s", "0", "--t", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "2");
    // Usage errors: missing flag, unknown command, missing file.
    assert_eq!(logcount(&["count-paths", f, "--s", "0"]).status.code(), Some(2));
    assert_eq!(logcount(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(logcount(&["count-paths", "/nonexistent/x", "--s", "0", "--t", "1"]).status.code(), Some(2));
    assert_eq!(logcount(&["--help"]).status.code(), Some(0));
    // Parse and invariant errors.
    let bad = write_input("bad.graph", "3 2\n0 1\n");
    let o = logcount(&["count-paths", bad.to_str().unwrap(), "--s", "0", "--t", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    assert_eq!(logcount(&["count-paths", f, "--s", "0", "--t", "9"]).status.code(), Some(3));
    // Budget: clow enumeration refuses order 6.
    let big = write_input("six.matrix", &format_matrix(&logcount::matrix::IntMatrix::identity(6)));
    assert_eq!(logcount(&["det", big.to_str().unwrap(), "--method", "clow"]).status.code(), Some(4));
}

#[test]
fn determinant_methods_agree() {
    let mut r = rng(70);
    for i in 0..10 {
        let n = r.gen_range(1..=5);
        let a = random_matrix(&mut r, n, n, -4, 4);
        let path = write_input(&format!("det{i}.matrix"), &format_matrix(&a));
        let f = path.to_str().unwrap();
        let want = common::gauss_det(&a).to_string();
        for method in ["clow", "ha", "oracle"] {
            let o = logcount(&["det", f, "--method", method]);
            assert_eq!(o.status.code(), Some(0));
            assert_eq!(first_line(&o), want, "{method}");
        }
    }
}

#[test]
fn json_reports_round_trip() {
    let path = write_input("charpoly.matrix", "2\n1 2\n3 4\n");
    let o = logcount(&["--json", "charpoly", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rep = json(&o);
    assert_eq!(rep.command, "charpoly");
    assert_eq!(rep.result, "-2 -5 1");
    assert_eq!(rep.counts["c1"], "-5");
    let again: Report = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
    assert_eq!(again, rep);
    let rank = logcount(&["--json", "rank", path.to_str().unwrap()]);
    assert_eq!(json(&rank).result, "2");
}

#[test]
fn decide_commands_follow_path_counts() {
    let mut r = rng(71);
    for i in 0..10 {
        let g = random_dag(&mut r, 6, 0.5);
        let path = write_input(&format!("decide{i}.graph"), &format_graph(&g));
        let f = path.to_str().unwrap();
        let (s1, t1, s2, t2) = (r.gen_range(0..3), r.gen_range(3..6), r.gen_range(0..3), r.gen_range(3..6));
        let f1 = brute_paths(&g, s1, t1) as i64;
        let f2 = brute_paths(&g, s2, t2) as i64;
        let pair = |cmd: &str| {
            let (a, b, c, d) = (s1.to_string(), t1.to_string(), s2.to_string(), t2.to_string());
            json(&logcount(&["--json", "decide", cmd, f, "--s1", &a, "--t1", &b, "--s2", &c, "--t2", &d]))
        };
        let yes = |b: bool| if b { "yes" } else { "no" };
        assert_eq!(pair("exact").result, yes(f1 == f2));
        assert_eq!(pair("prob").result, yes(f1 > f2));
        assert_eq!(pair("gap").result, (f1 - f2).to_string());
        for k in [2i64, 3] {
            let (a, b, ks) = (s1.to_string(), t1.to_string(), k.to_string());
            let rep = json(&logcount(&["--json", "decide", "mod", f, "--k", &ks, "--s1", &a, "--t1", &b]));
            assert_eq!(rep.result, yes(f1 % k != 0));
        }
        let (a, b) = (s1.to_string(), t1.to_string());
        let rep = json(&logcount(&["--json", "decide", "modl", f, "--k", "1", "--s1", &a, "--t1", &b]));
        assert_eq!(rep.result, "no");
    }
    let diamond = write_input("diamond2.graph", "4 4\n0 1\n0 2\n1 3\n2 3\n");
    let o = logcount(&["decide", "mod", diamond.to_str().unwrap(), "--k", "1", "--s1", "0", "--t1", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reductions_and_simulations() {
    let g = write_input("cycle.graph", "3 3\n0 1\n1 2\n2 0\n");
    let f = g.to_str().unwrap();
    let o = logcount(&["reduce", "unroll", f, "--s", "0", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# s = "));
    let d = logcount::cli::parse(&text, logcount::cli::Format::Sldag);
    assert!(d.is_ok(), "{text}");
    let o = logcount(&["ndsim", "is", f, "--s", "0", "--t", "2"]);
    assert_eq!(first_line(&o), "reachable");
    let apart = write_input("apart.graph", "3 1\n0 1\n");
    let o = logcount(&["ndsim", "is", apart.to_str().unwrap(), "--s", "0", "--t", "2"]);
    assert_eq!(first_line(&o), "unreachable");
    let diamond = write_input("diamond3.graph", "4 4\n0 1\n0 2\n1 3\n2 3\n");
    let o = logcount(&["ndsim", "sharplcfl", diamond.to_str().unwrap(), "--s", "0", "--t", "3", "--k", "2"]);
    assert_eq!(first_line(&o), "1");
    let weighted = write_input("weighted.graph", "3 3\n0 1 1\n1 2 1\n0 2 3\n");
    let o = logcount(&["ndsim", "ul", weighted.to_str().unwrap(), "--s", "0", "--t", "2"]);
    assert_eq!(first_line(&o), "reachable");
    let cnf = write_input("unsat.cnf", "c x and not x\np cnf 1 2\n1 1 0\n-1 -1 0\n");
    assert_eq!(first_line(&logcount(&["twosat", cnf.to_str().unwrap()])), "unsatisfiable");
    let o = logcount(&["reduce", "2cnf", diamond.to_str().unwrap(), "--s", "0", "--t", "3"]);
    let phi = write_input("reach.cnf", &stdout(&o));
    assert_eq!(first_line(&logcount(&["twosat", phi.to_str().unwrap()])), "unsatisfiable");
    let m = write_input("shear.matrix", "2\n1 1\n0 1\n");
    let o = logcount(&["reduce", "power-to-det", m.to_str().unwrap(), "--m", "2"]);
    let b = write_input("shear_b.matrix", &stdout(&o));
    assert_eq!(first_line(&logcount(&["det", b.to_str().unwrap()])), "2");
    let o = logcount(&["linsys", m.to_str().unwrap(), "--rhs", "3,-1"]);
    assert_eq!(stdout(&o), "feasible\nwitness: 4 -1\n");
}

#[test]
fn isolate_is_seeded() {
    let g = write_input("iso.graph", "4 4\n0 1\n0 2\n1 3\n2 3\n");
    let f = g.to_str().unwrap();
    let a = logcount(&["--json", "isolate", f, "--s", "0", "--t", "3", "--trials", "200"]);
    let b = logcount(&["--json", "isolate", f, "--s", "0", "--t", "3", "--trials", "200", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let rep = json(&a);
    assert_eq!(rep.seed, Some(42));
    assert_eq!(rep.counts["r"], "17");
    let pair: u64 = rep.counts["pair_isolated"].parse().unwrap();
    assert!(pair >= 150, "{pair}");
}
