use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn acyclab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acyclab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ACL_BUDGET_SECS")
        .output()
        .expect("spawn acyclab")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gadget_hkr_verify_writes_instance_and_certificate() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["gadget", "hkr", "--k", "3", "--r", "2", "--verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("hkr-k3-r2.ins")).unwrap();
    assert!(text.starts_with("p digraph 7 "));
    let cert = json(&dir.path().join("hkr-k3-r2.cert.json"));
    let checks = cert["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["status"] == "verified"), "{cert}");
}

#[test]
fn oracle_refutes_two_coloring_of_h32() {
    let dir = TempDir::new().unwrap();
    acyclab(dir.path(), &["gadget", "hkr", "--k", "3", "--r", "2", "--out", "h32.ins"]);
    let out = acyclab(dir.path(), &["oracle", "--task", "acyclic", "--r", "2", "--in", "h32.ins"]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "no");
    assert!(report.get("witness").is_none());
    assert!(report["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn oracle_witness_passes_verify() {
    let dir = TempDir::new().unwrap();
    acyclab(dir.path(), &["gadget", "hkr", "--k", "3", "--r", "2", "--out", "h32.ins"]);
    let out = acyclab(dir.path(), &["oracle", "--task", "acyclic", "--r", "3", "--in", "h32.ins", "--out", "rep.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&dir.path().join("rep.json"))["verdict"], "yes");
    let ok = acyclab(dir.path(), &["verify", "--in", "h32.ins", "--cert", "rep.json", "--r", "3"]);
    assert_eq!(code(&ok), 0);
    std::fs::write(dir.path().join("mono.json"), "[0,0,0,0,0,0,0]").unwrap();
    let bad = acyclab(dir.path(), &["verify", "--in", "h32.ins", "--cert", "mono.json"]);
    assert_eq!(code(&bad), 1);
    assert_eq!(stdout_json(&bad)["valid"], false);
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    acyclab(dir.path(), &["gadget", "hkr", "--k", "3", "--r", "2", "--out", "h32.ins"]);
    let out = acyclab(
        dir.path(),
        &["oracle", "--task", "acyclic", "--r", "2", "--in", "h32.ins", "--budget-nodes", "1"],
    );
    assert_eq!(code(&out), 3);
    assert_eq!(stdout_json(&out)["verdict"], "inconclusive");
}

#[test]
fn budget_environment_variable() {
    let dir = TempDir::new().unwrap();
    acyclab(dir.path(), &["gadget", "hkr", "--k", "3", "--r", "2", "--out", "h32.ins"]);
    let run = |env: &str, extra: &[&str]| {
        let mut args = vec!["oracle", "--task", "acyclic", "--r", "2", "--in", "h32.ins"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_acyclab"))
            .args(&args)
            .current_dir(dir.path())
            .env("ACL_BUDGET_SECS", env)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("30", &[])), 1);
    assert_eq!(code(&run("soon", &[])), 2);
    assert_eq!(code(&run("soon", &["--budget-secs", "30"])), 1);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&acyclab(dir.path(), &["--bogus"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["plant", "--sizes", "5,5", "--out", "p.ins"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["plant", "--sizes", "3,5", "--seed", "1", "--out", "p.ins"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["oracle", "--task", "acyclic", "--r", "2", "--in", "missing.ins"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["gadget", "hkr", "--k", "2", "--r", "2"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["--help"])), 0);
}

#[test]
fn plant_then_recover_reports_exact_match() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["plant", "--sizes", "300,300,300", "--seed", "0", "--out", "planted.ins"]);
    assert_eq!(code(&out), 0);
    let out = acyclab(
        dir.path(),
        &["recover", "--in", "planted.ins", "--truth", "planted.truth.json", "--out", "report.json"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["exact_match"], true);
    assert_eq!(report["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn generators_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let runs: [&[&str]; 4] = [
        &["plant", "--sizes", "40,30", "--seed", "9", "--out", "OUT.ins"],
        &["gadget", "hkr", "--k", "4", "--r", "2", "--out", "OUT.ins"],
        &["amplify", "--in", "c5.ins", "--block", "3", "--seed", "2", "--out", "OUT.ins"],
        &["recover", "--in", "src.ins", "--no-timings", "--out", "OUT.json"],
    ];
    std::fs::write(dir.path().join("c5.ins"), "p graph 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n").unwrap();
    acyclab(dir.path(), &["plant", "--sizes", "50,50", "--seed", "3", "--out", "src.ins"]);
    for args in runs {
        let mut seen = Vec::new();
        for round in ["a", "b"] {
            let args: Vec<String> = args.iter().map(|a| a.replace("OUT", round)).collect();
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            assert_eq!(code(&acyclab(dir.path(), &args)), 0, "{args:?}");
            let file = args.last().unwrap();
            seen.push(std::fs::read(dir.path().join(file)).unwrap());
        }
        assert_eq!(seen[0], seen[1], "{args:?}");
    }
}

#[test]
fn recovery_sweep_writes_csv_and_summary() {
    let dir = TempDir::new().unwrap();
    let args = [
        "sweep", "--kind", "recovery", "--n", "60,90", "--r", "2", "--seeds", "3", "--no-timings", "--out", "OUT",
    ];
    let mut csvs = Vec::new();
    for round in ["a", "b"] {
        let args: Vec<&str> = args.iter().map(|&a| if a == "OUT" { round } else { a }).collect();
        assert_eq!(code(&acyclab(dir.path(), &args)), 0);
        csvs.push(std::fs::read_to_string(dir.path().join(round).join("sweep.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let lines: Vec<&str> = csvs[0].lines().collect();
    assert!(lines[0].starts_with("n,r,c,seed,phase1-rounds,classes-found,exact-match,phase1-ms"));
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("60,2,0.5,0,"));
    assert!(lines[6].starts_with("90,2,0.5,2,"));
    let summary = json(&dir.path().join("a/summary.json"));
    assert_eq!(summary["cells"], 6);
    assert_eq!(summary["groups"].as_array().unwrap().len(), 2);
    assert_eq!(summary["groups"][1]["runs"], 3);
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["sweep", "--kind", "recovery", "--n", "", "--seeds", "4", "--out", "s"]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert_eq!(json(&dir.path().join("s/summary.json"))["cells"], 0);
}

#[test]
fn sweep_rejects_repeated_seeds_and_missing_seeds() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&acyclab(dir.path(), &["sweep", "--kind", "recovery", "--seeds", "2,2", "--out", "s"])), 2);
    assert_eq!(code(&acyclab(dir.path(), &["sweep", "--kind", "recovery", "--out", "s"])), 2);
}

#[test]
fn gadget_sweep_tabulates_sizes_against_the_bound() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["sweep", "--kind", "gadget", "--k", "3,4,5", "--r", "2,3", "--out", "g"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("g/sweep.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let expected = [("3", "2", "7"), ("3", "3", "13"), ("4", "2", "13"), ("5", "2", "21")];
    for (k, r, v) in expected {
        let row = rows.iter().find(|x| &x[0] == k && &x[1] == r).unwrap();
        assert_eq!(&row[2], v, "H^{k}_{r}");
    }
    for row in &rows {
        let v: u64 = row[2].parse().unwrap();
        let bound: u64 = row[4].parse().unwrap();
        assert!(v <= bound);
        assert_eq!(&row[6], &row[0], "directed girth equals k");
    }
}

#[test]
fn bipartite_check_csv() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["bipartite-check", "--n", "6", "--m", "2", "--seeds", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,pairs-searched,acyclic-pairs-found,total-pairs,exhaustive");
    assert_eq!(lines.len(), 5);
    for (i, line) in lines[1..].iter().enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], i.to_string());
        assert_eq!(f[1], "225");
        assert_eq!(f[4], "true");
    }
    let capped = acyclab(dir.path(), &["bipartite-check", "--n", "6", "--m", "2", "--seeds", "1", "--max-pairs", "5"]);
    assert_eq!(code(&capped), 3);
}

#[test]
fn amplify_writes_a_valid_planted_coloring() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("c5.ins"), "p graph 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n").unwrap();
    let out = acyclab(dir.path(), &["amplify", "--in", "c5.ins", "--block", "4", "--seed", "1", "--out", "big.ins"]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(dir.path().join("big.ins")).unwrap().starts_with("p digraph 20 80"));
    let ok = acyclab(dir.path(), &["verify", "--in", "big.ins", "--cert", "big.coloring.json", "--r", "3"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(code(&acyclab(dir.path(), &["amplify", "--in", "c5.ins", "--out", "x.ins"])), 2);
}

#[test]
fn reduce_emits_provenance_and_meets_its_claims() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("k3.ins"), "p graph 3 3\ne 0 1\ne 1 2\ne 0 2\n").unwrap();
    for (pipeline, k) in [("color-acyclic-graph", "3"), ("color-acyclic-digraph", "4")] {
        let out = acyclab(
            dir.path(),
            &["reduce", "--pipeline", pipeline, "--r", "2", "--k", k, "--in", "k3.ins", "--out", "red.ins"],
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let prov = json(&dir.path().join("red.prov.json"));
        assert_eq!(prov["pipeline"], pipeline);
        assert!(prov["girth"].as_u64().unwrap() >= prov["girth_claim"].as_u64().unwrap());
        assert!(prov["degree"]["max_degree"].as_u64().unwrap() <= prov["degree_claim"]["enforced"].as_u64().unwrap());
        assert_eq!(prov["provenance"].as_array().unwrap().len(), prov["vertices"].as_u64().unwrap() as usize);
        // K_3 is not 2-colorable, so neither is the output.
        let verdict = acyclab(dir.path(), &["oracle", "--task", "acyclic", "--r", "2", "--in", "red.ins"]);
        assert_eq!(code(&verdict), 1, "{pipeline}");
    }
    let missing = acyclab(
        dir.path(),
        &["reduce", "--pipeline", "color-acyclic-graph", "--r", "2", "--k", "4", "--in", "k3.ins", "--out", "x.ins"],
    );
    assert_ne!(code(&missing), 0);
}

#[test]
fn nae_reduction_and_assignment_check() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("sat.json"),
        r#"{"vars":4,"values":2,"width":3,"clauses":[[0,1,2],[1,2,3]]}"#,
    )
    .unwrap();
    let out = acyclab(dir.path(), &["oracle", "--task", "nae", "--in", "sat.json", "--out", "a.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&acyclab(dir.path(), &["verify", "--check", "nae", "--in", "sat.json", "--cert", "a.json"])), 0);
    std::fs::write(dir.path().join("flat.json"), "[1,1,1,1]").unwrap();
    assert_eq!(code(&acyclab(dir.path(), &["verify", "--check", "nae", "--in", "sat.json", "--cert", "flat.json"])), 1);
    let red = acyclab(dir.path(), &["reduce", "--pipeline", "nae-digraph", "--in", "sat.json", "--out", "d.ins"]);
    assert_eq!(code(&red), 0);
    let verdict = acyclab(dir.path(), &["oracle", "--task", "acyclic", "--r", "2", "--in", "d.ins"]);
    assert_eq!(code(&verdict), 0);
    let wrong_r = acyclab(dir.path(), &["reduce", "--pipeline", "nae-graph", "--r", "3", "--in", "sat.json", "--out", "g.ins"]);
    assert_eq!(code(&wrong_r), 2);
}

#[test]
fn critical_subgraph_and_colorable_input() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("k4.ins"), "p graph 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n").unwrap();
    let out = acyclab(
        dir.path(),
        &["oracle", "--task", "critical", "--rule", "proper", "--r", "2", "--in", "k4.ins", "--instance-out", "c.ins"],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "critical");
    assert_eq!(report["edges"], 3, "a triangle is left");
    let colorable = acyclab(dir.path(), &["oracle", "--task", "critical", "--rule", "proper", "--r", "4", "--in", "k4.ins"]);
    assert_eq!(code(&colorable), 1);
}

#[test]
fn registry_and_terminal_gadgets() {
    let dir = TempDir::new().unwrap();
    let out = acyclab(dir.path(), &["gadget", "registry", "--kind", "proper", "--r", "3", "--k", "4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("registry-proper-r3-k4.cert.json").exists());
    // A 4-cycle is 2-colorable, so it is no gadget.
    std::fs::write(dir.path().join("c4.ins"), "p graph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n").unwrap();
    let user = acyclab(dir.path(), &["gadget", "registry", "--kind", "proper", "--r", "2", "--k", "3", "--file", "c4.ins"]);
    assert_eq!(code(&user), 1);
    assert_eq!(code(&acyclab(dir.path(), &["gadget", "j1j2", "--prefix", "jj"])), 0);
    assert!(dir.path().join("jj.j1.ins").exists() && dir.path().join("jj.j2.ins").exists());
    assert_eq!(code(&acyclab(dir.path(), &["gadget", "hk", "--k", "3", "--t", "2"])), 0);
    assert_eq!(code(&acyclab(dir.path(), &["gadget", "nae-hard", "--r", "2", "--k", "3"])), 0);
    let hard = json(&dir.path().join("nae-hard-r2-k3.json"));
    assert_eq!(hard["vars"], 5);
    let verdict = acyclab(dir.path(), &["oracle", "--task", "nae", "--in", "nae-hard-r2-k3.json"]);
    assert_eq!(code(&verdict), 1);
}
