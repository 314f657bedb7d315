use std::process::{Command, Output};

fn vmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmv"))
        .args(args)
        .output()
        .expect("vmv runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn word_evaluation_prints_the_pair() {
    let o = vmv(&["exppair", "eval", "AABAAB"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/20 33/40");
}

#[test]
fn mean_value_count_in_every_format() {
    assert_eq!(stdout(&vmv(&["mvt", "count", "2", "1", "3"])).trim(), "19");
    let json: serde_json::Value = serde_json::from_str(&stdout(&vmv(&[
        "--format", "json", "mvt", "count", "2", "1", "3",
    ])))
    .unwrap();
    assert_eq!(json["schema"], "vmv/1");
    assert_eq!(json["ok"], true);
    assert_eq!(json["data"]["count"], "19");
    let csv = stdout(&vmv(&[
        "--format", "csv", "mvt", "trend", "2", "1", "--p", "4,8,16",
    ]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,l,P,count,log-slope"));
    assert_eq!(lines.next(), Some("2,1,4,44,"));
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    assert_eq!(vmv(&["mvt", "count", "0", "1", "3"]).status.code(), Some(2));
    assert_eq!(vmv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(vmv(&["exppair", "eval", "AXB"]).status.code(), Some(2));
    assert_eq!(
        vmv(&[
            "--max-t",
            "1e5",
            "zeta",
            "curve",
            "--sigma",
            "0.5",
            "--t",
            "1e3,1e4,1e5,1e6"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "--format",
        "json",
        "--threads",
        "2",
        "count",
        "report",
        "--family",
        "logphase",
        "--t",
        "1e5",
        "--n",
        "200,400",
    ];
    let a = vmv(&args);
    let b = vmv(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let zeta = ["zeta", "curve", "--sigma", "0.5", "--t", "1e4,1e5,1e6,1e7"];
    assert_eq!(vmv(&zeta).stdout, vmv(&zeta).stdout);
}

#[test]
fn config_file_runs_the_same_command() {
    let dir = std::env::temp_dir().join(format!("vmv-config-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        "command = [\"mvt\", \"count\", \"2\", \"1\", \"3\"]\nformat = \"json\"\n",
    )
    .unwrap();
    let from_file = vmv(&["--config", path.to_str().unwrap()]);
    let direct = vmv(&["--format", "json", "mvt", "count", "2", "1", "3"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, direct.stdout);
    std::fs::write(&path, "command = [\"mvt\"]\nbogus = 1\n").unwrap();
    assert_eq!(
        vmv(&["--config", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verification_commands_succeed() {
    for args in [&["zeta", "verify"][..], &["selftest"][..]] {
        let o = vmv(args);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!stdout(&o).contains("FAIL"));
    }
}
