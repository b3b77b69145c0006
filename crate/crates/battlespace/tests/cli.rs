use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_battlespace")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn statespace_defaults() {
    let o = bin(&["statespace"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("squares=220"), "{s}");
    assert!(s.contains("combinationsPerSquare=219"), "{s}");
    assert!(s.contains("states≈8e514"), "{s}");
    assert!(s.contains("totalUnits=37"), "{s}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = bin(&["headless", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = bin(&["headless", "--agent-a", "telepathic"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_file_fails_cleanly() {
    let o = bin(&["encode", "--board", "/nonexistent/board.json", "--layout", "binary", "--out", "/tmp/x.bin"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/board.json"));
}

#[test]
fn headless_logs_replay_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = bin(&["headless", "--games", "6", "--seed", "9", "--agent-b", "offensive", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(report["games"].as_u64().unwrap() + report["faults"].as_u64().unwrap(), 6);
        out
    };
    let a = run("a");
    let b = run("b");
    for g in 0..6 {
        let name = format!("game-{g:04}.jsonl");
        let x = fs::read(a.join(&name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.join(&name)).unwrap(), "{name}");
    }
    assert!(a.join("report.json").exists());

    let log = a.join("game-0000.jsonl");
    let csv = dir.path().join("h.csv");
    let o = bin(&["analyze", "--log", log.to_str().unwrap(), "--player", "0", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let share = summary["impactfulShare"].as_f64().unwrap() + summary["nonImpactfulShare"].as_f64().unwrap();
    assert!((share - 1.0).abs() < 1e-9);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("action,count,class\n"));
    assert_eq!(text.lines().count(), 27);
}

#[test]
fn encode_text_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("board.txt");
    let o = bin(&["encode", "--board", &fixture("classic_board.json"), "--layout", "binary", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out).unwrap(), fs::read_to_string(fixture("classic_board_binary.txt")).unwrap());
    let bin_out = dir.path().join("board.bin");
    let o = bin(&["encode", "--board", &fixture("classic_board.json"), "--layout", "layers", "--out", bin_out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(&fs::read(bin_out).unwrap()[..4], b"BSEN");
}

#[test]
fn train_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("train.json");
    fs::write(&cfg, r#"{"epochs": 3, "rolloutsPerBoard": 24, "boardsPerEpoch": 8, "seed": 4}"#).unwrap();
    let ckpt = dir.path().join("net.bsnn");
    let o = bin(&["train", "--config", cfg.to_str().unwrap(), "--out", ckpt.to_str().unwrap(), "--encoder", "list"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).matches("epoch").count(), 3);
    let losses = fs::read_to_string(dir.path().join("net.bsnn.loss.csv")).unwrap();
    assert!(losses.starts_with("step,loss\n"));
    assert_eq!(losses.lines().count(), 1 + 3 * 2);

    let eval_dir = dir.path().join("eval");
    let o = bin(&["eval", "--checkpoint", ckpt.to_str().unwrap(), "--games", "2", "--out", eval_dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["report"]["faults"], 0);
    assert!(eval_dir.join("histogram.csv").exists());

    let o = bin(&["headless", "--games", "1", "--agent-a", &format!("nn:{}@0.5", ckpt.display())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
