use eqcalc_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["eqcalc"];
    argv.extend_from_slice(args);
    let status = run(argv, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn replay_builtin() {
    let (status, out, _) = call(&["replay", "--paper"]);
    assert_eq!(status, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 26);
    assert!(lines[22].starts_with("23\tD\t21.19\tEEabEEbcEac\t"));
    assert!(lines[25].starts_with("26\tD\t25.19\tEEabEba\t"));
    assert_eq!(call(&["replay", "--xcb"]).1, out);
}

#[test]
fn replay_json_has_the_same_records() {
    let (status, out, _) = call(&["--json", "replay", "--xcb"]);
    assert_eq!(status, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let records = value["records"].as_array().unwrap();
    assert_eq!(records.len(), 26);
    assert_eq!(records[16]["major_instance_length"], 2939);
    assert_eq!(records[16]["minor_instance_length"], 2919);
    assert_eq!(records[25]["formula"], "EEabEba");
}

#[test]
fn replay_from_file_and_failures() {
    let dir = std::env::temp_dir().join(format!("eqcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.trace");
    std::fs::write(
        &good,
        "1 = axiom EpEEEpqErqr\n2 = D1.1\nexpect-length 2 19\n",
    )
    .unwrap();
    assert_eq!(call(&["replay", good.to_str().unwrap()]).0, 0);
    let wrong = dir.join("wrong.trace");
    std::fs::write(&wrong, "1 = axiom EpEEEpqErqr\n2 = D1.1\nexpect 2 Epp\n").unwrap();
    let (status, out, err) = call(&["replay", wrong.to_str().unwrap()]);
    assert_eq!(status, 1);
    assert!(out.contains("FAILED"));
    assert!(err.contains("step 2"));
    let stuck = dir.join("stuck.trace");
    std::fs::write(&stuck, "1 = axiom Epq\n2 = D1.1\n3 = D2.2\n").unwrap();
    assert_eq!(call(&["replay", stuck.to_str().unwrap()]).0, 1);
    let broken = dir.join("broken.trace");
    std::fs::write(&broken, "1 = axiom Epq\n2 = D1.3\n").unwrap();
    assert_eq!(call(&["replay", broken.to_str().unwrap()]).0, 2);
    assert_eq!(
        call(&["replay", dir.join("missing").to_str().unwrap()]).0,
        2
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn enumerate_counts() {
    assert_eq!(
        call(&["enumerate", "--length", "11", "--count-only"]),
        (0, "630\n".into(), String::new())
    );
    assert_eq!(
        call(&["enumerate", "--length", "11", "--count-only", "--all"]).1,
        "1302\n"
    );
    let (status, out, _) = call(&["enumerate", "--length", "5"]);
    assert_eq!((status, out.as_str()), (0, ""));
    let (_, out, _) = call(&["enumerate", "--length", "7"]);
    assert_eq!(out.lines().count(), 15);
    assert_eq!(call(&["enumerate", "--length", "4"]).0, 2);
}

#[test]
fn detachment_commands() {
    let (status, out, _) = call(&["d", "EpEEEpqErqr", "EpEEEpqErqr"]);
    assert_eq!(status, 0);
    assert_eq!(
        out,
        "result\tEEEEaEEEabEcbcdEede\nfolded\tEEEAdEede\nlength\t19\nmajor-instance-length\t31\nminor-instance-length\t11\n"
    );
    let (status, _, err) = call(&["d", "EEpqp", "Epp"]);
    assert_eq!(status, 0, "{err}");
    assert_eq!(call(&["d", "p", "Epp"]).0, 1);
    assert_eq!(call(&["d", "EEpEpqr", "Epp"]).0, 1);
    let (status, out, _) = call(&["--json", "r", "EpEqq", "Err"]);
    assert_eq!(status, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["result"], "a");
}

#[test]
fn parse_and_taut() {
    let (status, out, _) = call(&["parse", "EEEEpEEEpqErqrsEtst"]);
    assert_eq!(status, 0);
    assert_eq!(
        out,
        "canonical\tEEEEaEEEabEcbcdEede\nfolded\tEEEAsEtst\nlength\t19\n"
    );
    assert_eq!(
        call(&["taut", "EEpqEqp"]),
        (0, "tautology\n".into(), String::new())
    );
    let (status, out, _) = call(&["taut", "EEpqq"]);
    assert_eq!(status, 1);
    assert_eq!(out, "not a tautology\tp=0 q=0\n");
    let (status, _, err) = call(&["parse", "EpX"]);
    assert_eq!(status, 2);
    assert!(err.contains("EpX"));
}

#[test]
fn axioms_listing() {
    let (status, out, _) = call(&["axioms"]);
    assert_eq!(status, 0);
    assert_eq!(out.lines().count(), 14);
    assert!(out
        .lines()
        .last()
        .unwrap()
        .starts_with("XCB\tEpEEEpqErqr\t"));
    let (_, out, _) = call(&["--json", "axioms"]);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["entries"].as_array().unwrap().len(), 14);
}

#[test]
fn search_and_check_axiom() {
    let (status, out, _) = call(&[
        "search",
        "--axiom",
        "EEpqEEqrEpr",
        "--axiom",
        "EEpqEqp",
        "--goal",
        "Epp",
        "--max-length",
        "11",
    ]);
    assert_eq!(status, 0);
    assert!(out.starts_with("status\tall-goals-reached\n"));
    assert!(out.contains("goal\tEpp\tfound\n"));
    let (status, out, _) = call(&["search", "--axiom", "Epp", "--goal", "Epq"]);
    assert_eq!(status, 1);
    assert!(out.contains("status\tsaturated"));
    let (status, out, _) = call(&[
        "check-axiom",
        "EpEEEpqErqr",
        "--max-length",
        "11",
        "--builtin-hints",
    ]);
    assert_eq!(status, 0);
    assert!(out.starts_with("verdict\tconfirmed\n"));
    let (status, out, _) = call(&["--json", "check-axiom", "Epp"]);
    assert_eq!(status, 1);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["verdict"], "inconclusive");
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["search", "--goal", "Epp"]).0, 2);
    assert_eq!(call(&["search", "--axiom", "Epp", "--rules", "x"]).0, 2);
    assert_eq!(call(&["replay"]).0, 2);
    let (status, out, _) = call(&["--help"]);
    assert_eq!(status, 0);
    assert!(out.contains("check-axiom"));
}
