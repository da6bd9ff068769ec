//! End-to-end checks of the `qpp` binary.

mod common;

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Command, Output, Stdio};

use common::oracle;

fn qpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpp")).args(args).env_remove("QPP_DEMO_ACK").output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn keygen_seeded_unseeded_and_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c, d) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"), dir.path().join("d"));
    assert!(qpp(&["keygen", "--out", p(&a), "--seed", "0102"]).status.success());
    assert!(qpp(&["keygen", "--out", p(&b), "--seed", "0102"]).status.success());
    let key = std::fs::read(&a).unwrap();
    assert_eq!(key, std::fs::read(&b).unwrap());
    assert_eq!(key, oracle::hkdf32(&[1, 2], b"QPP/keygen/v1"));

    assert!(qpp(&["keygen", "--out", p(&c)]).status.success());
    assert!(qpp(&["keygen", "--out", p(&d)]).status.success());
    let (c, d) = (std::fs::read(&c).unwrap(), std::fs::read(&d).unwrap());
    assert_eq!((c.len(), d.len()), (32, 32));
    assert_ne!(c, d);

    let unwritable = dir.path().join("missing").join("key");
    assert_eq!(qpp(&["keygen", "--out", p(&unwritable)]).status.code(), Some(4));
}

#[test]
fn encrypt_decrypt_roundtrip_and_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("key");
    std::fs::write(&key, [0u8; 32]).unwrap();
    let (pt, ct, back) = (dir.path().join("pt"), dir.path().join("ct"), dir.path().join("back"));

    std::fs::write(&pt, b"QPP").unwrap();
    assert!(qpp(&["encrypt", "--key", p(&key), "--in", p(&pt), "--out", p(&ct)]).status.success());
    assert_eq!(std::fs::read(&ct).unwrap(), hex::decode("2161e6").unwrap());

    let data: Vec<u8> = (0..100_000u32).map(|i| (i % 251) as u8).collect();
    std::fs::write(&pt, &data).unwrap();
    for (n, m, seq) in [("8", "64", "0"), ("8", "256", "9"), ("4", "8", "3"), ("4", "16", "1")] {
        let common = ["--key", p(&key), "--n", n, "--m", m, "--seq", seq];
        let enc = [&["encrypt", "--in", p(&pt), "--out", p(&ct)][..], &common].concat();
        let dec = [&["decrypt", "--in", p(&ct), "--out", p(&back)][..], &common].concat();
        assert!(qpp(&enc).status.success());
        let ciphertext = std::fs::read(&ct).unwrap();
        assert_eq!(ciphertext.len(), data.len());
        assert_ne!(ciphertext, data);
        assert!(qpp(&dec).status.success());
        assert_eq!(std::fs::read(&back).unwrap(), data);
    }
}

#[test]
fn cipher_usage_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (key, short, pt, out) =
        (dir.path().join("key"), dir.path().join("short"), dir.path().join("pt"), dir.path().join("out"));
    std::fs::write(&key, [7u8; 32]).unwrap();
    std::fs::write(&short, [7u8; 31]).unwrap();
    std::fs::write(&pt, b"data").unwrap();
    let run = |k: &Path, extra: &[&str]| {
        let args = [&["encrypt", "--key", p(k), "--in", p(&pt), "--out", p(&out)][..], extra].concat();
        qpp(&args).status.code()
    };
    assert_eq!(run(&short, &[]), Some(2));
    assert_eq!(run(&key, &["--m", "48"]), Some(2));
    assert_eq!(run(&key, &["--n", "6", "--m", "4"]), Some(2));
    assert_eq!(run(&dir.path().join("nokey"), &[]), Some(4));
    assert_eq!(qpp(&["encrypt", "--bogus"]).status.code(), Some(2));
}

#[test]
fn pad_export_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let (key, out) = (dir.path().join("key"), dir.path().join("pad"));
    std::fs::write(&key, [0u8; 32]).unwrap();
    assert!(qpp(&["pad", "--key", p(&key), "--out", p(&out), "--n", "4", "--m", "8"]).status.success());
    let pad = qpp::qpp::QppPad::from_bytes(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(pad.forward(0), [10, 0, 13, 8, 6, 1, 7, 5, 12, 14, 2, 11, 4, 9, 15, 3]);
}

fn ent_json(path: &Path) -> serde_json::Value {
    let out = qpp(&["ent", p(path), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ent_reports() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros");
    std::fs::write(&zeros, vec![0u8; 4096]).unwrap();
    let j = ent_json(&zeros);
    assert_eq!(j["entropy"].as_f64(), Some(0.0));
    assert!(j["serial_correlation"].is_null());

    let all = dir.path().join("all");
    std::fs::write(&all, (0..=255u8).collect::<Vec<_>>()).unwrap();
    let j = ent_json(&all);
    assert_eq!(j["entropy"].as_f64(), Some(8.0));
    assert_eq!(j["chi_square"].as_f64(), Some(0.0));

    let text = qpp(&["ent", p(&all)]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("Entropy") && text.contains("Chi Square"), "{text}");

    let empty = dir.path().join("empty");
    std::fs::write(&empty, b"").unwrap();
    assert_eq!(qpp(&["ent", p(&empty)]).status.code(), Some(4));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = qpp(&["bench", "--size", "1", "--repeat", "1", "--handshakes", "10", "--csv", p(&csv)]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv.lines().next(), Some("name,bytes,seconds,mb_per_s"));
    for name in ["qpp,", "aes256_ctr,", "nested,", "handshake,"] {
        assert!(csv.lines().any(|l| l.starts_with(name)), "{csv}");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("qpp_vs_aes"));
    assert_eq!(qpp(&["bench", "--size", "0"]).status.code(), Some(2));
}

/// Starts `serve --once` and returns the child and its bound address.
fn spawn_server(extra: &[&str]) -> (std::process::Child, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qpp"))
        .args([&["serve", "--listen", "127.0.0.1:0", "--once", "--read-timeout", "10"][..], extra].concat())
        .env_remove("QPP_DEMO_ACK")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut lines = BufReader::new(child.stderr.take().unwrap()).lines();
    let addr = loop {
        let line = lines.next().expect("server printed its address").unwrap();
        if let Some(a) = line.strip_prefix("listening on ") {
            break a.to_string();
        }
    };
    std::thread::spawn(move || lines.for_each(drop));
    (child, addr)
}

fn connect(addr: &str, extra: &[&str], env_ack: bool, input: &[u8]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qpp"));
    cmd.args([&["connect", "--target", addr, "--read-timeout", "10"][..], extra].concat()).env_remove("QPP_DEMO_ACK");
    if env_ack {
        cmd.env("QPP_DEMO_ACK", "1");
    }
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let input = input.to_vec();
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(&input);
    });
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap();
    out
}

#[test]
fn serve_connect_echo_with_outer_aes() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("outer");
    std::fs::write(&key, [5u8; 32]).unwrap();
    let (mut server, addr) = spawn_server(&["--insecure-demo", "--outer", "aes", "--key", p(&key)]);
    let data: Vec<u8> = (0..1_000_000u32).map(|i| (i.wrapping_mul(2654435761) >> 13) as u8).collect();
    let out = connect(&addr, &["--outer", "aes", "--key", p(&key)], true, &data);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARNING"));
    assert!(out.stdout == data);
    assert!(server.wait().unwrap().success());
}

#[test]
fn outer_key_mismatch_exits_with_handshake_code() {
    let dir = tempfile::tempdir().unwrap();
    let (k1, k2) = (dir.path().join("k1"), dir.path().join("k2"));
    std::fs::write(&k1, [1u8; 32]).unwrap();
    std::fs::write(&k2, [2u8; 32]).unwrap();
    let (mut server, addr) = spawn_server(&["--insecure-demo", "--outer", "aes", "--key", p(&k1)]);
    let out = connect(&addr, &["--insecure-demo", "--outer", "aes", "--key", p(&k2)], false, b"hello");
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(server.wait().unwrap().code(), Some(3));
}

#[test]
fn tunnel_refuses_without_acknowledgement() {
    assert_eq!(qpp(&["serve", "--listen", "127.0.0.1:0"]).status.code(), Some(2));
    let out = qpp(&["connect", "--target", "127.0.0.1:9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--insecure-demo"));
    assert_eq!(qpp(&["connect", "--target", "127.0.0.1:9", "--insecure-demo", "--outer", "aes"]).status.code(), Some(2));
}

#[test]
fn connection_refused_is_io_error() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let out = qpp(&["connect", "--target", &format!("127.0.0.1:{port}"), "--insecure-demo"]);
    assert_eq!(out.status.code(), Some(4));
}
