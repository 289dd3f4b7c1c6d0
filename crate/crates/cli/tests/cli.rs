use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn biis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biis"))
        .args(args)
        .env_remove("BIIS_MAX_FACETS")
        .env_remove("BIIS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The value on the `verdict` line of a record.
fn verdict(o: &Output) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("verdict"))
        .map(|v| v.trim().to_string())
        .unwrap_or_default()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn subdivide_writes_a_loadable_complex() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ch.toml");
    let o = biis(&["subdivide", path(&data("delta2.toml")), "-o", path(&out)]);
    assert!(o.status.success());
    let o = biis(&["fvector", path(&out), "--direct", "--format", "csv"]);
    assert_eq!(stdout(&o), "k,direct\n-1,1\n0,12\n1,24\n2,13\n");

    let o = biis(&["subdivide", path(&data("delta1.toml")), "-r", "3"]);
    let edges = stdout(&o)
        .lines()
        .filter(|l| l.trim_start().starts_with('['))
        .count();
    assert_eq!(edges, 27);
}

#[test]
fn zero_rounds_echo_the_input() {
    let input = data("delta2.toml");
    let o = biis(&["subdivide", path(&input), "-r", "0"]);
    let again = biis(&["iso", path(&input), path(&input)]);
    assert!(stdout(&o).contains("[0, 1, 2]"));
    assert_eq!(verdict(&again), "ISO");
}

#[test]
fn fvector_modes_agree() {
    let o = biis(&[
        "fvector",
        path(&data("delta2.toml")),
        "-r",
        "2",
        "--both",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k,recurrence,direct,match\n"));
    assert!(text.contains("2,169,169,true"));
    let o = biis(&["fvector", path(&data("delta2.toml")), "--recurrence", "--direct"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn encode_reports_bounds_and_writes_a_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.toml");
    let o = biis(&[
        "encode",
        path(&data("delta2.toml")),
        "-r",
        "2",
        "--format",
        "csv",
        "--schedule-out",
        path(&sched),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("round,vertices,clique_lb,delta_plus_1,image,bits")
    );
    for row in lines {
        let v: Vec<usize> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[2] <= v[4] && v[4] <= v[3], "{row}");
    }
    let o = biis(&[
        "simulate",
        path(&data("delta2.toml")),
        "-r",
        "2",
        "--bounded",
        path(&sched),
    ]);
    assert_eq!(verdict(&o), "ISO");
}

#[test]
fn two_processes_need_two_bits_after_the_first_round() {
    let o = biis(&["encode", path(&data("delta1.toml")), "-r", "5", "--format", "csv"]);
    let bits: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(bits, ["1", "2", "2", "2", "2"]);
}

#[test]
fn clashing_encoding_is_rejected_with_a_witness() {
    let fork = data("fork.toml");
    let o = biis(&["verify", path(&fork), path(&data("fork-clash.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("observer 0 cannot tell 1 from 2"));
    let o = biis(&["verify", path(&fork), path(&data("fork-injective.toml"))]);
    assert!(o.status.success());

    let o = biis(&[
        "simulate",
        path(&fork),
        "--encoding",
        path(&data("fork-clash.toml")),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "NOT-ISO");
    assert_eq!(v["max_degree"], 4);
}

#[test]
fn decode_fault_in_a_schedule_fails() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("clash.toml");
    std::fs::write(
        &sched,
        "[[rounds]]\nround = 0\ncodes = [[0, 1], [1, 2], [2, 2]]\n",
    )
    .unwrap();
    let o = biis(&["simulate", path(&data("fork.toml")), "--bounded", path(&sched)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(verdict(&o), "NOT-ISO");
}

#[test]
fn full_information_trace_covers_every_execution() {
    let o = biis(&["simulate", path(&data("delta1.toml")), "--trace"]);
    let text = stdout(&o);
    // two solo runs and three schedules of both processes
    assert_eq!(text.lines().filter(|l| l.starts_with("(0, ")).count(), 2 + 6);
    assert_eq!(verdict(&o), "ISO");
}

#[test]
fn agreement_checks_pass_and_zero_rounds_are_rejected() {
    let o = biis(&["agree", "-r", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.contains(",PASS,")));
    assert!(text.contains("path,PASS,\"27 edges,"), "{text}");
    assert_eq!(biis(&["agree", "-r", "0"]).status.code(), Some(2));
}

#[test]
fn ratios_and_fubini_tables() {
    let o = biis(&["ratios", "-k", "1", "--n-max", "2", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "k,n,T,bound,ratio,ratio_alt\n1,1,1,1,1.000000000,0.480453014\n1,2,4,4,1.000000000,0.480453014\n"
    );
    let o = biis(&["fubini", "--n-max", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["fubini"].as_u64().unwrap())
        .collect();
    assert_eq!(f, [1, 1, 3, 13, 75, 541]);
}

#[test]
fn caps_come_from_flags_or_environment() {
    let input = data("delta3.toml");
    let o = biis(&["--max-facets", "100", "subdivide", path(&input), "-r", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap is 100"));
    let o = Command::new(env!("CARGO_BIN_EXE_biis"))
        .args(["subdivide", path(&input), "-r", "2"])
        .env("BIIS_MAX_FACETS", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_biis"))
        .args(["--max-facets", "10000", "subdivide", path(&input), "-r", "2"])
        .env("BIIS_MAX_FACETS", "100")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "processes = 2\nvertices = [\n { id = 0, color = 0 },\n { id = 1, color = 0 },\n]\nfacets = [\n [0, 1],\n]\n",
    )
    .unwrap();
    let o = biis(&["fvector", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml:7: facet is not chromatic"));
}

#[test]
fn output_is_deterministic() {
    let input = data("delta2.toml");
    let args = ["indist-graph", path(&input), "-r", "2"];
    let runs: Vec<Vec<u8>> = (0..3).map(|_| biis(&args).stdout).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let threaded = biis(&[&["--threads", "1"], &args[..]].concat());
    assert_eq!(threaded.stdout, runs[0]);
}

#[test]
fn empty_complex_gives_empty_encodings() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.toml");
    let sched = dir.path().join("s.toml");
    std::fs::write(&input, "processes = 2\nvertices = []\nfacets = []\n").unwrap();
    let o = biis(&[
        "encode",
        path(&input),
        "-r",
        "2",
        "--format",
        "csv",
        "--schedule-out",
        path(&sched),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",0,0")));
    let text = std::fs::read_to_string(&sched).unwrap();
    assert_eq!(text.matches("codes = [\n]").count(), 2, "{text}");
}
