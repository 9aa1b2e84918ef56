use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn qgec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgec")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_one_line_failure(o: &Output, needle: &str) {
    assert!(!o.status.success());
    let err = stderr(o);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with("error:") && err.contains(needle), "{err}");
}

/// For runs that spawn a decoder process sharing our stderr: the child may
/// log its own lines, but the client's reason must be one `error:` line at the end.
fn assert_client_failure(o: &Output, needle: &str) {
    assert!(!o.status.success());
    let err = stderr(o);
    let last = err.trim_end().lines().last().unwrap_or_default();
    assert!(last.starts_with("error:") && last.contains(needle), "{err}");
}

#[test]
fn code_info_text_and_json() {
    let o = qgec(&["code", "info", "golay:h3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for line in [
        "n: 23",
        "k: 1",
        "d: 7 (verified)",
        "stabilizer generators: 22",
        "same rowspace as golay:h1: true",
    ] {
        assert!(text.contains(line), "{text}");
    }
    let o = qgec(&["code", "info", "toric:5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()),
        (Some(50), Some(2), Some(5))
    );
}

#[test]
fn bad_arguments_fail_with_one_line() {
    assert_one_line_failure(&qgec(&["code", "info", "golay:h4"]), "unknown code id");
    assert_one_line_failure(&qgec(&["code", "info", "toric:1"]), "unknown code id");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let out = out.to_str().unwrap();
    assert_one_line_failure(
        &qgec(&["sweep", "--code", "golay:h1", "--decoder", "match", "--out", out]),
        "toric",
    );
    assert_one_line_failure(
        &qgec(&["sweep", "--code", "golay:h1", "--decoder", "ml", "--out", out]),
        "unknown decoder",
    );
    assert_one_line_failure(
        &qgec(&[
            "sweep", "--code", "golay:h1", "--p-min", "0.2", "--p-max", "0.1", "--out", out,
        ]),
        "",
    );
    assert_one_line_failure(
        &qgec(&[
            "dataset", "gen", "--code", "golay:h1", "--p", "1.5", "--count", "3", "--out", out,
        ]),
        "",
    );
    assert_one_line_failure(&qgec(&["eval", "--dataset", "/nonexistent", "--predictions", out]), "");
}

#[test]
fn dataset_gen_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.txt");
    let d = data.to_str().unwrap();
    let o = qgec(&[
        "dataset", "gen", "--code", "golay:h1", "--p", "0.05", "--eta", "3", "--count", "400", "--seed", "4", "--out",
        d,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&data).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["format"], "qgec-dataset/1");
    assert_eq!(header["code"], "golay:h1");
    assert_eq!(header["eta"], 3.0);
    assert_eq!(header["n_syndrome"], 22);
    assert_eq!(header["n_label"], 46);
    let labels: Vec<&str> = lines.map(|l| l.split_once(' ').unwrap().1).collect();
    assert_eq!(labels.len(), 400);

    let preds = dir.path().join("p.txt");
    fs::write(&preds, labels.join("\n") + "\n").unwrap();
    let o = qgec(&[
        "eval",
        "--dataset",
        d,
        "--predictions",
        preds.to_str().unwrap(),
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rate"], 0.0);
    assert_eq!(v["tally"]["trials"], 400);

    fs::write(&preds, labels[..10].join("\n") + "\n").unwrap();
    assert_one_line_failure(
        &qgec(&["eval", "--dataset", d, "--predictions", preds.to_str().unwrap()]),
        "p.txt:11:",
    );

    let grid = dir.path().join("g.txt");
    let o = qgec(&[
        "dataset",
        "gen",
        "--code",
        "toric:5",
        "--p-grid",
        "0.01:0.05:0.01",
        "--count",
        "50",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = fs::read_to_string(&grid).unwrap();
    let header: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(header["p"], serde_json::Value::Null);
    assert_eq!(header["p_grid"][2], 0.01);
}

fn sweep(dir: &Path, name: &str, extra: &[&str], threads: &str) -> (Output, String) {
    let out = dir.join(name);
    let mut args = vec![
        "sweep", "--p-min", "0.01", "--p-max", "0.05", "--p-step", "0.01", "--trials", "1000", "--seed", "3", "--out",
    ];
    args.push(out.to_str().unwrap());
    args.extend_from_slice(extra);
    let o = Command::new(env!("CARGO_BIN_EXE_qgec"))
        .args(&args)
        .env("QGEC_THREADS", threads)
        .output()
        .unwrap();
    (o, fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn sweep_csv_sidecar_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (o, csv) = sweep(dir.path(), "a.csv", &["--code", "golay:h1"], "4");
    assert!(o.status.success(), "{}", stderr(&o));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("p,trials,failures,rate,ci_low,ci_high,fail_x,fail_z,fail_y,inconsistent")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("0.01,1000,"));

    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(side["status"], "complete");
    assert_eq!(side["decoder"], "table");
    assert_eq!(side["config"]["trials"], 1000);
    assert_eq!(side["config"]["seed"], 3);

    let (_, single) = sweep(dir.path(), "b.csv", &["--code", "golay:h1"], "1");
    assert_eq!(csv, single);

    let (o, toric) = sweep(dir.path(), "t.csv", &["--code", "toric:5"], "2");
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(toric.lines().count(), 6);
}

#[test]
fn sweep_through_external_server_matches() {
    let dir = tempfile::tempdir().unwrap();
    let (_, local) = sweep(dir.path(), "local.csv", &["--code", "golay:h2"], "4");
    let ext = format!("external:{} serve --code golay:h2", env!("CARGO_BIN_EXE_qgec"));
    let (o, remote) = sweep(
        dir.path(),
        "remote.csv",
        &["--code", "golay:h2", "--decoder", &ext],
        "4",
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(local, remote);

    // server built for a different code refuses the handshake
    let wrong = format!("external:{} serve --code golay:h1", env!("CARGO_BIN_EXE_qgec"));
    let (o, _) = sweep(
        dir.path(),
        "wrong.csv",
        &["--code", "golay:h2", "--decoder", &wrong],
        "1",
    );
    assert_client_failure(&o, "handshake rejected: ERR code");
}

#[cfg(unix)]
#[test]
fn sweep_aborts_when_decoder_dies() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    // answers the handshake and 7 requests with the identity, then exits
    let script = dir.path().join("flaky.sh");
    let zeros = "0".repeat(46);
    fs::write(
        &script,
        format!("#!/bin/sh\nread hello\necho OK\ni=0\nwhile [ $i -lt 7 ]; do read s; echo {zeros}; i=$((i+1)); done\n"),
    )
    .unwrap();
    fs::set_permissions(&script, fs::Permissions::from_mode(0o755)).unwrap();
    let out = dir.path().join("f.csv");
    let o = qgec(&[
        "sweep",
        "--code",
        "golay:h1",
        "--decoder",
        &format!("external:{}", script.display()),
        "--p-min",
        "0.01",
        "--p-max",
        "0.03",
        "--p-step",
        "0.01",
        "--trials",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_one_line_failure(&o, "aborted after 1");
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert!(side["status"].as_str().unwrap().starts_with("aborted"));
    assert_eq!(side["points"], 1);
}

#[test]
fn serve_over_stdio() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qgec"))
        .args(["serve", "--code", "toric:5"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let zero = "0".repeat(48);
    let mut one = zero.clone();
    one.replace_range(0..1, "1");
    write!(
        child.stdin.take().unwrap(),
        "HELLO QGEC1 toric:5 48 100\n{zero}\n10\nBYE\n"
    )
    .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "OK");
    assert_eq!(lines[1], "0".repeat(100));
    assert_eq!(lines[2], "ERR syntax");

    for (hello, reply) in [
        ("HELLO QGEC2 toric:5 48 100", "ERR version"),
        ("HELLO QGEC1 golay:h1 22 46", "ERR code"),
        ("HELLO QGEC1 toric:5 50 100", "ERR dims"),
    ] {
        let mut child = Command::new(env!("CARGO_BIN_EXE_qgec"))
            .args(["serve", "--code", "toric:5"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        writeln!(child.stdin.take().unwrap(), "{hello}").unwrap();
        let o = child.wait_with_output().unwrap();
        assert_eq!(stdout(&o).trim(), reply);
        assert_one_line_failure(&o, "refused handshake");
    }
}

#[test]
fn serve_tcp_once() {
    use std::io::{BufRead, BufReader};
    let mut child = Command::new(env!("CARGO_BIN_EXE_qgec"))
        .args(["serve", "--code", "golay:h1", "--listen", "tcp://127.0.0.1:0", "--once"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut reader = BufReader::new(child.stdout.take().unwrap());
    let mut line = String::new();
    reader.read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("LISTENING tcp://").unwrap().to_string();
    let stream = std::net::TcpStream::connect(addr).unwrap();
    let mut w = stream.try_clone().unwrap();
    let mut r = BufReader::new(stream);
    writeln!(w, "HELLO QGEC1 golay:h1 22 46").unwrap();
    let mut reply = String::new();
    r.read_line(&mut reply).unwrap();
    assert_eq!(reply, "OK\n");
    writeln!(w, "{}", "0".repeat(22)).unwrap();
    reply.clear();
    r.read_line(&mut reply).unwrap();
    assert_eq!(reply.trim(), "0".repeat(46));
    writeln!(w, "BYE").unwrap();
    assert!(child.wait().unwrap().success());
}
