use std::process::{Command, Output};

fn isingdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isingdeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = isingdeg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn scalar_commands() {
    assert_eq!(stdout(&["dstab", "--group", "Z13", "--config", "++-+-----+---"]), "104\n");
    assert_eq!(stdout(&["dsym", "--group", "Z5", "--config", "+----"]), "10\n");
    assert_eq!(stdout(&["correlate", "--group", "Z4", "--config", "+-+-"]), "[4,-4,4,-4]\n");
}

#[test]
fn fiber_lists_members() {
    let text = stdout(&["fiber", "--group", "Z4", "--config", "+-+-"]);
    let members: Vec<String> = serde_json::from_str(&text).unwrap();
    assert_eq!(members, vec!["+-+-", "-+-+"]);
}

#[test]
fn survey_csv() {
    let text = stdout(&["survey", "--group", "Z12", "--min-ratio", "2"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,rep,d_sym,d_stab,ratio"));
    assert!(lines.any(|l| l.ends_with(",48,96,2")));
    assert_eq!(stdout(&["survey", "--group", "Z11", "--min-ratio", "1.0001"]), "N,rep,d_sym,d_stab,ratio\n");
}

#[test]
fn msd_csv() {
    let text = stdout(&["msd", "--nmax", "4"]);
    assert_eq!(text.lines().last(), Some("4,4,4,1/4,11/32"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn output_independent_of_threads() {
    for args in [vec!["survey", "--group", "Z14", "--min-ratio", "1"], vec!["msd", "--nmax", "12"]] {
        let runs: Vec<String> = ["1", "2", "8"]
            .iter()
            .map(|t| {
                let mut a = args.clone();
                a.extend(["--threads", t]);
                stdout(&a)
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("isingdeg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("msd.csv");
    let printed = stdout(&["msd", "--nmax", "5", "--out", path.to_str().unwrap()]);
    assert!(printed.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["msd", "--nmax", "5"]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn constructions() {
    let legendre: serde_json::Value = serde_json::from_str(&stdout(&["legendre", "--p", "5"])).unwrap();
    assert_eq!(legendre["config"], "++--+");
    assert_eq!(legendre["correlation"], serde_json::json!([5, 1, -3, -3, 1]));
    let minus: serde_json::Value = serde_json::from_str(&stdout(&["legendre", "--p", "5", "--sign", "-1"])).unwrap();
    assert_eq!(minus["config"], "-+--+");
    let singer: serde_json::Value = serde_json::from_str(&stdout(&["singer", "--q", "2"])).unwrap();
    assert_eq!(singer["set"], serde_json::json!([0, 1, 3]));
    let sets: Vec<Vec<usize>> = serde_json::from_str(&stdout(&["pds-reduced", "--q", "3"])).unwrap();
    assert_eq!(sets.len(), 4);
}

#[test]
fn substitute_report() {
    let text = stdout(&["substitute", "--U", "++-", "--V", "-+-", "--word", "UVUUVVV"]);
    let r: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["sigma"], "++--+-++-++--+--+--+-");
    assert_eq!(r["equal"], true);
    assert_eq!(r["same_phi_orbit"], false);
}

#[test]
fn blocks_and_reconstruct() {
    let b: serde_json::Value =
        serde_json::from_str(&stdout(&["blocks", "--group", "Z13", "--config", "++-+-----+---"])).unwrap();
    assert_eq!(b["blocks"], serde_json::json!([2, 1, 1, 5, 1, 3]));
    assert_eq!(b["multiset"], serde_json::json!([[1, 3], [2, 1], [3, 1], [5, 1]]));
    let r: Vec<Vec<usize>> = serde_json::from_str(&stdout(&["reconstruct", "--delta", "[[3,1],[4,1],[7,-2]]"])).unwrap();
    assert_eq!(r, vec![vec![3, 4]]);
    let none = stdout(&["reconstruct", "--delta", "[[1,1],[2,1],[7,-2]]"]);
    assert_eq!(none, "[]\n");
}

#[test]
fn jdeg_modes() {
    assert_eq!(stdout(&["jdeg", "--group", "Z5", "--config", "+----", "--j", "0,1,0,0,1"]), "20\n");
    let a = stdout(&["jdeg", "--group", "Z5", "--config", "+----", "--trials", "100", "--seed", "3"]);
    let b = stdout(&["jdeg", "--group", "Z5", "--config", "+----", "--trials", "100", "--seed", "3"]);
    assert_eq!(a, b);
}

#[test]
fn four_block_verify_small() {
    let text = stdout(&["four-block-verify", "--nmax", "10"]);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn verify_paper_passes() {
    let text = stdout(&["verify-paper"]);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    for n in ["z7.", "z12.", "z13.", "z14.", "z16.", "z21."] {
        assert!(text.contains(n), "{n}");
    }
}

#[test]
fn corrupted_expectation_exits_one() {
    let out = isingdeg(&["verify-paper", "--perturb", "z13.singer.d_stab"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("FAIL ")).count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["dstab", "--group", "Z3x", "--config", "+-"],
        vec!["dstab", "--group", "Z4", "--config", "+-+"],
        vec!["correlate", "--group", "Z4", "--config", "+-?-"],
        vec!["survey", "--group", "Z30"],
        vec!["survey", "--group", "Z12", "--bound", "10"],
        vec!["jdeg", "--group", "Z4", "--config", "+-+-", "--j", "0.5,1,1,1"],
        vec!["legendre", "--p", "9"],
        vec!["reconstruct", "--delta", "not json"],
        vec!["nonsense"],
        vec!["dstab"],
    ] {
        assert_eq!(isingdeg(&args).status.code(), Some(2), "{args:?}");
    }
}
