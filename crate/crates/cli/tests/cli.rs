use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regret_core::game::{build_kuhn_game, import_game};
use regret_core::tournament::kuhn_equilibrium;

fn regret(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regret")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = regret(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    regret(args).status.code().unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(files(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

#[test]
fn solve_kuhn_vanilla_decades() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    ok(&["solve", "--game", "kuhn", "--iterations", "100000", "--out", s(&out)]);
    let checkpoints = std::fs::read_dir(out.join("checkpoints")).unwrap().count();
    assert_eq!(checkpoints, 6);
    let rows = read_csv(&out.join("gap.csv"));
    let max_gap = |t: &str| -> f64 {
        rows.iter().skip(1).filter(|r| r[0] == t).map(|r| r[4].parse::<f64>().unwrap()).fold(0.0, f64::max)
    };
    let gaps: Vec<f64> = ["100", "1000", "10000", "100000"].iter().map(|t| max_gap(t)).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 1e-3);
}

#[test]
fn sampled_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let args = [
        "solve", "--game", "kuhn3", "--solver", "external-sampling", "--profile", "current-only", "--seed", "7",
        "--iterations", "2000", "--out", s(&out),
    ];
    ok(&args);
    let first = dir.path().join("first");
    std::fs::rename(&out, &first).unwrap();
    ok(&args);
    let (a, b) = (files(&first), files(&out));
    assert_eq!(a.len(), b.len());
    assert!(a.len() > 4);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.strip_prefix(&first).unwrap(), y.strip_prefix(&out).unwrap());
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
    }
    // three players: no gap file
    assert!(!out.join("gap.csv").exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = s(&out);
    assert_eq!(code(&["solve", "--iterations", "10", "--profile", "current-only", "--average", "true", "--out", o]), 2);
    assert_eq!(code(&["solve", "--iterations", "0", "--out", o]), 2);
    assert_eq!(code(&["solve", "--iterations", "10", "--checkpoints", "5,3", "--out", o]), 2);
    assert_eq!(code(&["solve", "--iterations", "10", "--solver", "external-sampling", "--out", o]), 2);
    assert_eq!(code(&["solve", "--game", "kuhn3", "--tilt", "orange:5", "--iterations", "1", "--out", o]), 2);
    assert_eq!(code(&["solve", "--bogus"]), 2);
    let err = String::from_utf8(regret(&["solve", "--iterations", "10"]).stderr).unwrap();
    assert!(err.contains("out"));
}

#[test]
fn capacity_and_io_exit_codes() {
    assert_eq!(code(&["dominance", "--game", "leduc"]), 4);
    assert_eq!(code(&["bestresponse", "--strategy", "/definitely/not/here.json"]), 3);
    assert_eq!(code(&["export-game", "--game", "file:/definitely/not/here.json"]), 3);
    let dir = tempfile::tempdir().unwrap();
    let roster = dir.path().join("roster.json");
    std::fs::write(&roster, r#"[{"name":"ghost","path":"gone.json"},{"name":"u","builtin":"uniform"}]"#).unwrap();
    let out = regret(&["tournament", "--roster", s(&roster)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost"));
}

#[test]
fn dominance_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kuhn");
    ok(&["dominance", "--game", "kuhn", "--mode", "strict", "--target", "actions", "--out", s(&out)]);
    assert_eq!(std::fs::read_to_string(out.join("dominance.csv")).unwrap(), golden("dominance_kuhn_strict.csv"));
    let text = ok(&["dominance", "--game", "fig2", "--mode", "weak", "--target", "actions"]);
    assert!(text.contains("nothing removed"));
    let text = ok(&["dominance", "--game", "fig2", "--mode", "strict", "--target", "strategies"]);
    assert!(text.contains("b.e.e") || text.contains("a.f."), "{text}");
    let fig1 = dir.path().join("fig1");
    ok(&["dominance", "--game", "fig1", "--out", s(&fig1)]);
    let rows = read_csv(&fig1.join("dominance.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][2], "C");
}

#[test]
fn builtin_tournament() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let text = ok(&["tournament", "--out", s(&out)]);
    assert!(text.contains("eliminated Uni"));
    assert!(text.contains("eliminated ND"));
    assert!(text.contains("tie"));
    assert_eq!(std::fs::read_to_string(out.join("table.txt")).unwrap(), golden("kuhn_table.txt"));
    let rows = read_csv(&out.join("cross_table.csv"));
    assert_eq!(rows[0].join(","), golden("cross_table_header.csv").trim_end());
    let nid = rows.iter().find(|r| r[0] == "NID").unwrap();
    assert!((nid[7].parse::<f64>().unwrap() - 43.75).abs() < 1e-9);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("tournament.json")).unwrap()).unwrap();
    assert_eq!(report["tbr_ranking"][0]["name"], "NID");
}

#[test]
fn roster_of_equilibria_is_all_zero() {
    let game = build_kuhn_game();
    let dir = tempfile::tempdir().unwrap();
    let mut entries = Vec::new();
    for (k, gamma) in [0.0, 0.5, 1.0].into_iter().enumerate() {
        let file = format!("ne{k}.json");
        let keyed = kuhn_equilibrium(&game, gamma).unwrap().to_keyed(&game);
        std::fs::write(dir.path().join(&file), serde_json::to_string(&keyed).unwrap()).unwrap();
        entries.push(serde_json::json!({"name": format!("NE{k}"), "path": file}));
    }
    let roster = dir.path().join("roster.json");
    std::fs::write(&roster, serde_json::to_string(&entries).unwrap()).unwrap();
    let out = dir.path().join("t");
    ok(&["tournament", "--roster", s(&roster), "--jobs", "2", "--out", s(&out)]);
    for row in read_csv(&out.join("cross_table.csv")).iter().skip(1) {
        for cell in row.iter().skip(1).filter(|c| !c.is_empty()) {
            assert!(cell.parse::<f64>().unwrap().abs() < 1e-9);
        }
    }
    std::fs::write(&roster, serde_json::to_string(&entries[..1]).unwrap()).unwrap();
    assert_eq!(code(&["tournament", "--roster", s(&roster)]), 2);
}

#[test]
fn sampled_tournament_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["tournament", "--samples", "40000", "--seed", "5", "--jobs", "1", "--out", s(&a)]);
    ok(&["tournament", "--samples", "40000", "--seed", "5", "--jobs", "3", "--out", s(&b)]);
    assert_eq!(std::fs::read(a.join("tournament.json")).unwrap(), std::fs::read(b.join("tournament.json")).unwrap());
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({"game": "kuhn", "iterations": 50, "checkpoints": [10, 50], "out": s(&out), "track_action": ["2:K:b:f"]});
    std::fs::write(&cfg, body.to_string()).unwrap();
    ok(&["solve", "--config", s(&cfg), "--iterations", "20", "--checkpoints", "5,20"]);
    let rows = read_csv(&out.join("counters.csv"));
    assert_eq!(rows[0].join(","), golden("counters_header.csv").trim_end());
    assert_eq!(rows.iter().skip(1).map(|r| r[0].as_str()).collect::<Vec<_>>(), ["5", "20"]);
    let gap = read_csv(&out.join("gap.csv"));
    assert_eq!(gap[0].join(","), golden("gap_header.csv").trim_end());
    assert_eq!(gap.len(), 1 + 2 * 2);
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["iterations"], 20);
    assert!(manifest["artifacts"].as_array().unwrap().iter().all(|a| a["sha256"].as_str().unwrap().len() == 64));

    std::fs::write(&cfg, r#"{"iterashuns": 5}"#).unwrap();
    let out = regret(&["solve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("iterashuns"));
}

#[test]
fn cce_and_best_response() {
    let device = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fig1_device.json");
    let text = ok(&["ccecheck", "--game", "fig1", "--device", s(&device)]);
    assert!(text.contains("device value 1.25"));
    assert!(text.contains("equilibrium: yes"));
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("ne.json");
    let game = build_kuhn_game();
    std::fs::write(&profile, serde_json::to_string(&kuhn_equilibrium(&game, 1.0).unwrap().to_keyed(&game)).unwrap()).unwrap();
    let out = dir.path().join("br");
    ok(&["bestresponse", "--game", "kuhn", "--strategy", s(&profile), "--out", s(&out)]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("nash_gap.json")).unwrap()).unwrap();
    assert!(report["max_gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn exported_game_reimports() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    ok(&["export-game", "--game", "kuhn", "--tilt", "green:7", "--out", s(&file)]);
    let game = import_game(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(game.name(), "kuhn-green7");
    let text = ok(&["dominance", "--game", &format!("file:{}", s(&file))]);
    assert!(text.contains("round 1"));
}
