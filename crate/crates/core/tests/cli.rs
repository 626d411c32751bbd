use dualbound::bounds::report::BoundReport;
use dualbound::cli;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = cli::run(
        std::iter::once("dualbound").chain(args.iter().copied()),
        &mut out,
    );
    (code, String::from_utf8(out).unwrap())
}

fn values(csv: &str) -> Vec<usize> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn curve_info_rows() {
    let (code, out) = run(&["curve-info", "f8"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 33);
    assert!(out.lines().any(|l| l == "17,Y^6,12"));
    let (_, out) = run(&["curve-info", "f27"]);
    assert_eq!(out.lines().count(), 244);
}

#[test]
fn bound_rows() {
    let (code, out) = run(&[
        "bound",
        "f8",
        "--l",
        "17",
        "--methods",
        "wb,wwb,owb,adv,fim",
    ]);
    assert_eq!(code, 0);
    assert_eq!(values(&out), [7, 7, 8, 9, 10]);
    let (_, out) = run(&["bound", "f8", "--l", "21", "--methods", "wb,owb,adv,fim"]);
    assert_eq!(values(&out), [8, 10, 12, 13]);
    let (_, out) = run(&["bound", "f8", "--l", "17", "--methods", "fim", "--v", "0"]);
    assert_eq!(values(&out), [9]);
}

#[test]
fn code_and_improved_rows() {
    let (code, out) = run(&["code", "f8", "--s", "16", "--t", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(values(&out), [16, 7, 7, 8, 9, 10, 8, 8, 10, 12, 13]);
    let (_, out) = run(&["code", "f8", "--s", "0"]);
    assert_eq!(values(&out), [32, 1, 1, 1, 1, 1]);
    let (_, out) = run(&[
        "code",
        "f8",
        "--parity",
        "1,2,3",
        "--t",
        "1",
        "--methods",
        "wb",
    ]);
    assert_eq!(out.lines().nth(1).unwrap(), "C,k,29,1 2 3");
    let (_, out) = run(&["improved", "f8", "--delta", "10", "--method", "adv"]);
    assert_eq!(values(&out), [16, 12, 14, 15, 16, 20]);
    let (_, out) = run(&["improved", "f8", "--delta", "13", "--method", "fim"]);
    assert_eq!(values(&out), [12, 15, 16, 21, 22, 24]);
    let (_, out) = run(&["improved", "f8", "--delta", "1", "--t", "1"]);
    assert_eq!(out.lines().nth(1).unwrap(), "improved-adv(1),k,32,");
}

#[test]
fn code_f27() {
    let (code, out) = run(&["code", "f27", "--s", "83", "--t", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(values(&out), [160, 16, 16, 24, 34, 38, 17, 17, 27, 39, 41]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["bound", "f8", "--l", "0"]).0, 2);
    assert_eq!(run(&["bound", "f8", "--l", "33"]).0, 2);
    assert_eq!(run(&["bound", "f8", "--l", "3", "--methods", "xyz"]).0, 2);
    assert_eq!(run(&["code", "f8"]).0, 2);
    assert_eq!(
        run(&["improved", "f8", "--delta", "5", "--method", "wb"]).0,
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 2,").unwrap();
    assert_eq!(run(&["curve-info", bad.to_str().unwrap()]).0, 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["curve-info", missing.to_str().unwrap()]).0, 2);

    assert_eq!(run(&["reproduce", "table1"]).0, 0);
    // C(4), t = 6: WB computes to 10 against a reference of 8
    let (code, out) = run(&["reproduce", "sec42"]);
    assert_eq!(code, 1);
    assert_eq!(out.lines().filter(|l| l.contains(",false,")).count(), 1);
}

#[test]
fn config_file_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f8.json");
    let json = serde_json::to_string(&dualbound::curve::CurveConfig::f8()).unwrap();
    std::fs::write(&path, json).unwrap();
    let from_file = run(&["curve-info", path.to_str().unwrap()]);
    assert_eq!(from_file, run(&["curve-info", "f8"]));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let (code, out) = run(&[
        "--output",
        path.to_str().unwrap(),
        "bound",
        "f8",
        "--l",
        "17",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        run(&["bound", "f8", "--l", "17"]).1
    );
}

#[test]
fn json_round_trip() {
    for args in [
        &["--format", "json", "bound", "f8", "--l", "21"][..],
        &["--format", "json", "code", "f8", "--s", "16", "--t", "1,2"][..],
    ] {
        let (code, out) = run(args);
        assert_eq!(code, 0);
        assert_eq!(BoundReport::from_json(&out).unwrap().to_json(), out);
    }
}

#[test]
fn output_independent_of_thread_count() {
    for args in [
        &["code", "f8", "--s", "16", "--t", "1,2"][..],
        &["improved", "f8", "--delta", "13", "--method", "fim"][..],
        &["--format", "json", "code", "f27", "--s", "76", "--t", "1,2"][..],
    ] {
        let with = |n: &str| run(&[&["--threads", n][..], args].concat());
        let one = with("1");
        assert_eq!(one.0, 0);
        assert_eq!(one, with("4"));
        assert_eq!(one, with("4"));
    }
}

#[test]
fn verify_reports_sound_bounds() {
    let (code, out) = run(&["verify", "f8", "--s", "28..31", "--t", "2"]);
    assert_eq!(code, 0);
    // C(31) has k = 1 and is skipped
    assert_eq!(out.lines().count(), 1 + 3 * 5);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
    let (code, out) = run(&["verify", "f8", "--s", "5..4"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
}
