use std::path::Path;
use std::process::{Command, Output};

fn ep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ep"))
        .args(args)
        .current_dir(dir)
        .env_remove("EP_BUDGET")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const K4: &str = "p gr 4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

#[test]
fn cycles_exit_codes_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k4.gr"), K4).unwrap();
    let o = ep(d, &["cycles", "-i", "k4.gr", "-k", "1", "-o", "p.json"]);
    assert_eq!(code(&o), 0);
    let o = ep(d, &["cycles", "-i", "k4.gr", "-k", "2", "-o", "c.json"]);
    assert_eq!(code(&o), 10);
    for cert in ["p.json", "c.json"] {
        let o = ep(d, &["verify", "-i", "k4.gr", "-c", cert]);
        assert_eq!((code(&o), stdout(&o).as_str()), (0, "valid\n"));
    }
    // an empty cover is not a cover of K4
    std::fs::write(d.join("bad.json"), "{\"kind\": \"cover\", \"mode\": \"v\", \"elements\": []}").unwrap();
    let o = ep(d, &["verify", "-i", "k4.gr", "-c", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("invalid"));
    let o = ep(d, &["cycles", "-i", "missing.gr", "-k", "1"]);
    assert_eq!(code(&o), 2);
    let o = ep(d, &["cycles", "-i", "k4.gr", "-k", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_values_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k4.gr"), K4).unwrap();
    for (which, extra, value) in [
        ("vpack-cycles", vec![], "1"),
        ("vcover-cycles", vec![], "2"),
        ("ecover-cycles", vec![], "3"),
        ("pack-sub", vec!["--pattern", "k3", "--mode", "e"], "1"),
        ("cover-sub", vec!["--pattern", "k3", "--mode", "e"], "2"),
    ] {
        let mut args = vec!["oracle", which, "-i", "k4.gr"];
        args.extend(extra);
        let o = ep(d, &args);
        assert_eq!(stdout(&o).trim(), value, "{which}");
    }
    let o = ep(d, &["gen", "-n", "14", "-p", "0.7", "-o", "dense.gr"]);
    assert_eq!(code(&o), 0);
    let o = ep(d, &["--budget", "3", "oracle", "vcover-cycles", "-i", "dense.gr"]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_ep"))
        .args(["oracle", "vcover-cycles", "-i", "dense.gr"])
        .current_dir(d)
        .env("EP_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn decomposition_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&ep(d, &["gen", "--gen", "planar-stacked", "-n", "16", "--deletions", "8", "-o", "g.gr"])), 0);
    assert_eq!(code(&ep(d, &["decomp", "compute", "-i", "g.gr", "-o", "g.td"])), 0);
    assert_eq!(code(&ep(d, &["decomp", "validate", "-i", "g.gr", "--td", "g.td"])), 0);
    assert_eq!(code(&ep(d, &["decomp", "nice", "-i", "g.gr", "--td", "g.td", "-o", "n.td"])), 0);
    assert_eq!(code(&ep(d, &["decomp", "validate", "-i", "g.gr", "--td", "n.td"])), 0);
    let o = ep(d, &["decomp", "separate", "-i", "g.gr", "--td", "g.td"]);
    let sep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(sep["order"].as_u64().unwrap() <= 4);
    assert_eq!(code(&ep(d, &["decomp", "cover", "-i", "g.gr", "-o", "c.json"])), 10);
    assert_eq!(code(&ep(d, &["verify", "-i", "g.gr", "-c", "c.json"])), 0);
    // drop the first bag's contents
    let td = std::fs::read_to_string(d.join("g.td")).unwrap();
    let broken: Vec<String> = td
        .lines()
        .map(|l| if l.starts_with("b 1 ") { "b 1".to_string() } else { l.to_string() })
        .collect();
    std::fs::write(d.join("bad.td"), broken.join("\n") + "\n").unwrap();
    let o = ep(d, &["decomp", "validate", "-i", "g.gr", "--td", "bad.td"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&ep(d, &["tp", "layer", "-i", "g.gr", "-o", "g.tp"])), 0);
    assert_eq!(code(&ep(d, &["tp", "validate", "-i", "g.gr", "--tp", "g.tp"])), 0);
    let o = ep(d, &["tp", "cover", "-i", "g.gr", "--tp", "g.tp", "-k", "1", "-o", "t.json"]);
    assert!(matches!(code(&o), 0 | 10));
    assert_eq!(code(&ep(d, &["verify", "-i", "g.gr", "-c", "t.json"])), 0);
}

#[test]
fn gadget_sidecar_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = ep(d, &["gadget", "thicken", "--pattern", "k5", "-k", "2", "-o", "k5.gr"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.join("k5.meta").exists());
    let o = ep(d, &["gadget", "route", "-i", "k5.meta", "-x", "17", "-o", "m.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let model: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("m.json")).unwrap()).unwrap();
    assert_eq!(model["model"], "subdivision");
    assert_eq!(model["branch"].as_object().unwrap().len(), 5);
    // |X| must stay below k
    assert_eq!(code(&ep(d, &["gadget", "route", "-i", "k5.meta", "-x", "1,2"])), 2);
    // a tampered host is refused
    let gr = std::fs::read_to_string(d.join("k5.gr")).unwrap();
    let mut lines: Vec<&str> = gr.lines().collect();
    lines.pop();
    let header = lines[0].replace(&format!(" {}", lines.len()), &format!(" {}", lines.len() - 1));
    lines[0] = &header;
    std::fs::write(d.join("k5.gr"), lines.join("\n") + "\n").unwrap();
    let o = ep(d, &["gadget", "route", "-i", "k5.meta"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fuzz_bench_trees_and_gen() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = ep(d, &["fuzz", "tuza", "--trials", "40", "--max-n", "7", "-o", "t.json"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("t.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 40);
    assert_eq!(code(&ep(d, &["fuzz", "jones", "--trials", "40", "--max-n", "9"])), 0);
    let a = stdout(&ep(d, &["--seed", "5", "bench", "--k-max", "3", "-n", "40", "-p", "0.04"]));
    let b = stdout(&ep(d, &["--seed", "5", "bench", "--k-max", "3", "-n", "40", "-p", "0.04"]));
    assert_eq!(a, b);
    assert!(a.starts_with("k,n,pack,cover,bound,hypotheses_held\n"));
    let a = stdout(&ep(d, &["--seed", "7", "gen", "--gen", "subtree-family", "-n", "9"]));
    assert_eq!(a, stdout(&ep(d, &["--seed", "7", "gen", "--gen", "subtree-family", "-n", "9"])));
    std::fs::write(d.join("fam.txt"), &a).unwrap();
    let o = ep(d, &["trees", "gallai", "-i", "fam.txt"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["packing"].as_array().unwrap().len(), v["cover"].as_array().unwrap().len());
    std::fs::write(d.join("fams.txt"), "t 4\n1 2\n2 3\n3 4\nf\n1\n3 4\nf\n2\n4\n").unwrap();
    assert_eq!(code(&ep(d, &["trees", "select", "-i", "fams.txt", "-k", "1"])), 0);
    assert_eq!(code(&ep(d, &["trees", "select", "-i", "fams.txt", "-k", "2"])), 1);
}
