//! Command-line front end for the `qpp` binary.
//!
//! Exit codes: 0 success, 2 usage error (including bad key files and pad
//! parameters), 3 handshake or authentication failure, 4 I/O error.

use std::fs;
use std::io::{self, BufReader, Read};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig};
use crate::channel::{ChannelConfig, MockKem};
use crate::ent::EntAccumulator;
use crate::keystream::{hkdf_sha256, SessionKey};
use crate::qpp::{CipherSession, PadParams, QppPad};
use crate::tunnel::{self, OuterLayer, ServerMode, TunnelConfig, TunnelError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HANDSHAKE: i32 = 3;
pub const EXIT_IO: i32 = 4;

const KEYGEN_INFO: &[u8] = b"QPP/keygen/v1";

#[derive(Debug, Parser)]
#[command(name = "qpp", version, about = "Permutation-pad cipher, ENT statistics, benchmarks and a nested tunnel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a 32-byte key file.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Derive the key deterministically from this hex seed (testing only).
        #[arg(long)]
        seed: Option<String>,
    },
    /// Encrypt a file as a single record.
    Encrypt(CipherArgs),
    /// Decrypt a file produced by `encrypt`.
    Decrypt(CipherArgs),
    /// Export the pad derived from a key file.
    Pad {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// ENT statistics of a file.
    Ent {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Throughput of pad cipher, AES-256-CTR and nested pipelines.
    Bench {
        /// Buffer size in MiB.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        size: u32,
        #[arg(long, default_value_t = 3)]
        repeat: u32,
        /// Also write the rows as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 2000)]
        handshakes: u32,
    },
    /// Accept tunnel connections.
    Serve {
        #[arg(long)]
        listen: String,
        /// Forward each connection to this TCP address instead of echoing.
        #[arg(long, conflicts_with = "stdout")]
        forward: Option<String>,
        /// Write received data to stdout instead of echoing.
        #[arg(long)]
        stdout: bool,
        /// Handle a single connection, then exit with its status.
        #[arg(long)]
        once: bool,
        #[command(flatten)]
        tunnel: TunnelArgs,
    },
    /// Open a tunnel and relay stdin/stdout through it.
    Connect {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tunnel: TunnelArgs,
    },
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Symbol width in bits (4 or 8).
    #[arg(long, default_value_t = 8)]
    pub n: u8,
    /// Number of permutation gates; must divide 2^n.
    #[arg(long = "m", alias = "M", default_value_t = 64)]
    pub m: u16,
}

#[derive(Debug, Args)]
pub struct CipherArgs {
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    pub seq: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Outer {
    None,
    Aes,
}

#[derive(Debug, Args)]
pub struct TunnelArgs {
    /// Outer-layer key file (32 bytes), required with `--outer aes`.
    #[arg(long)]
    pub key: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Outer::None)]
    pub outer: Outer,
    /// Acknowledge that the mock KEM offers no security.
    #[arg(long, env = "QPP_DEMO_ACK", value_parser = clap::builder::FalseyValueParser::new())]
    pub insecure_demo: bool,
    /// Socket read timeout in seconds; 0 disables it.
    #[arg(long, default_value_t = 30)]
    pub read_timeout: u64,
    /// Append an HMAC-SHA-256 tag to each record (both peers must agree).
    #[arg(long)]
    pub record_mac: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

impl From<TunnelError> for CliError {
    fn from(e: TunnelError) -> Self {
        Self { code: e.exit_code(), message: e.to_string() }
    }
}

type CliResult = Result<(), CliError>;

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, data: &[u8]) -> CliResult {
    fs::write(path, data).map_err(|e| CliError::io(path, e))
}

fn read_key(path: &Path) -> Result<[u8; 32], CliError> {
    let bytes = zeroize::Zeroizing::new(read_file(path)?);
    bytes
        .as_slice()
        .try_into()
        .map_err(|_| CliError::usage(format!("{}: key file must be exactly 32 bytes, found {}", path.display(), bytes.len())))
}

fn params(p: &ParamArgs) -> Result<PadParams, CliError> {
    PadParams::new(p.n, p.m).map_err(|e| CliError::usage(e.to_string()))
}

fn keygen(out: &Path, seed: Option<&str>) -> CliResult {
    let key = match seed {
        Some(hex_seed) => {
            let seed = hex::decode(hex_seed).map_err(|e| CliError::usage(format!("--seed: {e}")))?;
            if seed.is_empty() {
                return Err(CliError::usage("--seed must not be empty"));
            }
            hkdf_sha256(&seed, KEYGEN_INFO)
        }
        None => rand::random(),
    };
    write_file(out, &key)
}

fn crypt(args: &CipherArgs, encrypt: bool) -> CliResult {
    let key = SessionKey::new(read_key(&args.key)?);
    let cipher = CipherSession::new(&key, params(&args.params)?);
    let mut data = read_file(&args.input)?;
    if encrypt {
        cipher.encrypt_in_place(args.seq, &mut data);
    } else {
        cipher.decrypt_in_place(args.seq, &mut data);
    }
    write_file(&args.out, &data)
}

fn export_pad(key: &Path, out: &Path, p: &ParamArgs) -> CliResult {
    let pad = QppPad::generate(&SessionKey::new(read_key(key)?), params(p)?);
    write_file(out, &pad.to_bytes())
}

fn ent(input: &Path, json: bool) -> CliResult {
    let file = fs::File::open(input).map_err(|e| CliError::io(input, e))?;
    let mut reader = BufReader::new(file);
    let mut acc = EntAccumulator::new();
    let mut buf = vec![0u8; 1 << 20];
    loop {
        let n = reader.read(&mut buf).map_err(|e| CliError::io(input, e))?;
        if n == 0 {
            break;
        }
        acc.update(&buf[..n]);
    }
    let report = acc.finish().map_err(|e| CliError { code: EXIT_IO, message: format!("{}: {e}", input.display()) })?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("JSON values serialize"));
    } else {
        println!("{report}");
    }
    Ok(())
}

fn run_bench(size: u32, repeat: u32, csv: Option<&Path>, threads: usize, handshakes: u32) -> CliResult {
    let config = BenchConfig {
        size: size as usize * (1 << 20),
        repeat,
        threads: threads.max(1),
        handshakes,
        ..Default::default()
    };
    let report = bench::run(&config);
    println!("{report}");
    if let Some(path) = csv {
        write_file(path, report.to_csv().as_bytes())?;
    }
    Ok(())
}

fn tunnel_config(args: &TunnelArgs, pad: PadParams) -> Result<TunnelConfig, CliError> {
    if !args.insecure_demo {
        return Err(CliError::usage(
            "the tunnel only supports the INSECURE mock KEM; pass --insecure-demo or set QPP_DEMO_ACK=1",
        ));
    }
    eprintln!("WARNING: mock KEM in use. This handshake provides NO security and is for demonstration only.");
    let outer = match (args.outer, &args.key) {
        (Outer::Aes, Some(path)) => OuterLayer::aes(read_key(path)?),
        (Outer::Aes, None) => return Err(CliError::usage("--outer aes requires --key")),
        (Outer::None, _) => OuterLayer::None,
    };
    let channel = ChannelConfig::new(vec![Arc::new(MockKem::new(true))])
        .with_params(pad)
        .with_record_mac(args.record_mac);
    let timeout = (args.read_timeout > 0).then(|| Duration::from_secs(args.read_timeout));
    Ok(TunnelConfig::new(channel, outer).with_read_timeout(timeout))
}

fn serve(listen: &str, mode: ServerMode, once: bool, args: &TunnelArgs) -> CliResult {
    let config = tunnel_config(args, PadParams::default())?;
    let listener = TcpListener::bind(listen).map_err(|e| CliError { code: EXIT_IO, message: format!("{listen}: {e}") })?;
    let local = listener.local_addr().map_err(|e| CliError { code: EXIT_IO, message: e.to_string() })?;
    eprintln!("listening on {local}");
    if once {
        let (stream, peer) = listener.accept().map_err(|e| CliError { code: EXIT_IO, message: e.to_string() })?;
        let stats = tunnel::serve_connection(stream, &config, &mode)?;
        eprintln!("{peer}: closed, {} bytes in, {} bytes out", stats.received, stats.sent);
        return Ok(());
    }
    tunnel::serve(listener, Arc::new(config), mode, |peer, outcome| match outcome {
        Ok(s) => eprintln!("{peer}: closed, {} bytes in, {} bytes out", s.received, s.sent),
        Err(e) => eprintln!("{peer}: {e}"),
    })?;
    Ok(())
}

fn connect(target: &str, p: &ParamArgs, args: &TunnelArgs) -> CliResult {
    let config = tunnel_config(args, params(p)?)?;
    let conn = tunnel::connect(target, &config)?;
    tunnel::relay(conn, io::stdin(), io::stdout().lock())?;
    Ok(())
}

pub fn execute(cli: Cli) -> CliResult {
    match cli.command {
        Command::Keygen { out, seed } => keygen(&out, seed.as_deref()),
        Command::Encrypt(args) => crypt(&args, true),
        Command::Decrypt(args) => crypt(&args, false),
        Command::Pad { key, out, params } => export_pad(&key, &out, &params),
        Command::Ent { input, json } => ent(&input, json),
        Command::Bench { size, repeat, csv, threads, handshakes } => {
            run_bench(size, repeat, csv.as_deref(), threads, handshakes)
        }
        Command::Serve { listen, forward, stdout, once, tunnel } => {
            let mode = match (forward, stdout) {
                (Some(target), _) => ServerMode::Forward(target),
                (None, true) => ServerMode::Stdout,
                (None, false) => ServerMode::Echo,
            };
            serve(&listen, mode, once, &tunnel)
        }
        Command::Connect { target, params, tunnel } => connect(&target, &params, &tunnel),
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("qpp: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seeded_keygen_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        keygen(&a, Some("00ff")).unwrap();
        keygen(&b, Some("00ff")).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert_eq!(fs::read(&a).unwrap().len(), 32);
        assert_eq!(keygen(&a, Some("zz")).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn bad_params_are_usage_errors() {
        assert_eq!(params(&ParamArgs { n: 8, m: 48 }).unwrap_err().code, EXIT_USAGE);
        assert_eq!(params(&ParamArgs { n: 5, m: 2 }).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn tunnel_requires_acknowledgement() {
        let args = TunnelArgs { key: None, outer: Outer::None, insecure_demo: false, read_timeout: 30, record_mac: false };
        assert_eq!(tunnel_config(&args, PadParams::default()).unwrap_err().code, EXIT_USAGE);
    }
}
