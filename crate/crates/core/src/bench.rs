//! Throughput and handshake-rate measurements.
//!
//! Four pipelines run over the same buffer, each processed in 1 MiB records:
//! permutation-pad encryption alone, software AES-256-CTR alone, the nested
//! pipeline (pad cipher, then AES over its output) and an in-memory mock-KEM
//! handshake loop. One untimed warm-up pass precedes the measured repeats.
//! Throughput is reported in MB/s with 1 MB = 10^6 bytes.
//!
//! All ratios compare software implementations. When the CPU has AES
//! instructions, a hardware-accelerated AES-256-CTR run is measured as a
//! separate `aes256_ctr_hw` row for reference and never enters a ratio.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aes::Aes256Ctr;
use crate::channel::{client_finish, client_init, server_finish, server_respond, ChannelConfig, ServerSeeds};
use crate::keystream::SessionKey;
use crate::qpp::{CipherSession, PadParams};

pub const RECORD_SIZE: usize = 1 << 20;
pub const CSV_HEADER: &str = "name,bytes,seconds,mb_per_s";

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Buffer size in bytes.
    pub size: usize,
    /// Timed passes; bytes and seconds are summed over them.
    pub repeat: u32,
    /// Worker threads, each taking a contiguous share of the records.
    pub threads: usize,
    pub params: PadParams,
    /// Handshakes in the timed handshake loop.
    pub handshakes: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { size: 16 << 20, repeat: 3, threads: 1, params: PadParams::default(), handshakes: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub bytes: u64,
    pub seconds: f64,
}

impl BenchRow {
    pub fn mb_per_s(&self) -> f64 {
        self.bytes as f64 / 1e6 / self.seconds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Pad-cipher throughput divided by AES throughput.
    pub qpp_vs_aes: f64,
    /// Nested wall time divided by AES-only wall time.
    pub nested_vs_aes_only: f64,
    pub handshakes_per_second: f64,
    pub threads: usize,
    /// Hardware-accelerated AES-256-CTR, when available. Reference only.
    pub hardware_aes: Option<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, name: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    fn from_rows(rows: Vec<BenchRow>, threads: usize, hardware_aes: Option<BenchRow>) -> Self {
        let get = |n: &str| rows.iter().find(|r| r.name == n).expect("pipeline row");
        let (qpp, aes, nested, hs) = (get("qpp"), get("aes256_ctr"), get("nested"), get("handshake"));
        Self {
            qpp_vs_aes: qpp.mb_per_s() / aes.mb_per_s(),
            nested_vs_aes_only: nested.seconds / aes.seconds,
            handshakes_per_second: hs.bytes as f64 / hs.seconds,
            rows: rows.clone(),
            threads,
            hardware_aes,
        }
    }

    /// CSV rows under [`CSV_HEADER`]. The handshake row counts handshakes in
    /// the `bytes` column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in self.rows.iter().chain(&self.hardware_aes) {
            out.push_str(&format!("{},{},{:.6},{:.3}\n", r.name, r.bytes, r.seconds, r.mb_per_s()));
        }
        out
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>14} {:>10} {:>10}", "pipeline", "bytes", "seconds", "MB/s")?;
        for r in &self.rows {
            if r.name == "handshake" {
                writeln!(f, "{:<12} {:>14} {:>10.4} {:>10}", r.name, format!("{} hs", r.bytes), r.seconds, "-")?;
            } else {
                writeln!(f, "{:<12} {:>14} {:>10.4} {:>10.1}", r.name, r.bytes, r.seconds, r.mb_per_s())?;
            }
        }
        if let Some(hw) = &self.hardware_aes {
            writeln!(f, "{:<12} {:>14} {:>10.4} {:>10.1}  (hardware AES, reference only)", hw.name, hw.bytes, hw.seconds, hw.mb_per_s())?;
        }
        writeln!(f, "threads              {}", self.threads)?;
        writeln!(f, "qpp_vs_aes           {:.2}x (published claim on its hardware: over 10x)", self.qpp_vs_aes)?;
        writeln!(f, "nested_vs_aes_only   {:.2}x wall time", self.nested_vs_aes_only)?;
        write!(f, "handshakes/s         {:.0} (mock KEM, in memory)", self.handshakes_per_second)
    }
}

fn bench_key(tag: u8) -> [u8; 32] {
    let mut k = [0u8; 32];
    ChaCha8Rng::seed_from_u64(0xB3C4 + u64::from(tag)).fill_bytes(&mut k);
    k
}

/// Runs `f(first_record_index, slice)` over contiguous shares of `data`.
fn parallel_records(data: &mut [u8], threads: usize, f: impl Fn(u64, &mut [u8]) + Sync) {
    let records = data.len().div_ceil(RECORD_SIZE).max(1);
    let per_thread = records.div_ceil(threads.max(1));
    if threads <= 1 || records == 1 {
        f(0, data);
        return;
    }
    std::thread::scope(|s| {
        for (i, share) in data.chunks_mut(per_thread * RECORD_SIZE).enumerate() {
            let f = &f;
            s.spawn(move || f((i * per_thread) as u64, share));
        }
    });
}

fn qpp_records(cipher: &CipherSession, first: u64, data: &mut [u8]) {
    for (i, record) in data.chunks_mut(RECORD_SIZE).enumerate() {
        cipher.encrypt_in_place(first + i as u64, record);
    }
}

fn aes_records(key: &[u8; 32], first: u64, data: &mut [u8]) {
    for (i, record) in data.chunks_mut(RECORD_SIZE).enumerate() {
        let iv = (u128::from(first + i as u64) << 64).to_be_bytes();
        Aes256Ctr::new(key, &iv).apply_keystream(record);
    }
}

fn nested_records(cipher: &CipherSession, key: &[u8; 32], first: u64, data: &mut [u8]) {
    for (i, record) in data.chunks_mut(RECORD_SIZE).enumerate() {
        let seq = first + i as u64;
        cipher.encrypt_in_place(seq, record);
        Aes256Ctr::new(key, &(u128::from(seq) << 64).to_be_bytes()).apply_keystream(record);
    }
}

fn time_passes(repeat: u32, mut pass: impl FnMut()) -> Duration {
    pass();
    let start = Instant::now();
    for _ in 0..repeat {
        pass();
    }
    start.elapsed()
}

/// One complete in-memory handshake; returns whether keys matched.
pub fn handshake_once(config: &ChannelConfig, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let mut b = [0u8; 32];
        rng.fill_bytes(&mut b);
        b
    };
    let client_seed = draw();
    let seeds = ServerSeeds { server_random: draw(), encapsulation: draw() };
    let Ok((client, hello)) = client_init(config, &client_seed) else { return false };
    let Ok((server, reply)) = server_respond(config, &hello, &seeds) else { return false };
    let Ok((c, confirm)) = client_finish(client, &reply) else { return false };
    let Ok(s) = server_finish(server, &confirm) else { return false };
    c.session_key().as_bytes() == s.session_key().as_bytes()
}

pub fn measure_qpp(data: &mut [u8], params: PadParams, repeat: u32, threads: usize) -> BenchRow {
    let cipher = CipherSession::new(&SessionKey::new(bench_key(1)), params);
    let t = time_passes(repeat, || parallel_records(data, threads, |first, s| qpp_records(&cipher, first, s)));
    row("qpp", data.len(), repeat, t)
}

pub fn measure_aes(data: &mut [u8], repeat: u32, threads: usize) -> BenchRow {
    let key = bench_key(2);
    let t = time_passes(repeat, || parallel_records(data, threads, |first, s| aes_records(&key, first, s)));
    row("aes256_ctr", data.len(), repeat, t)
}

/// AES-256-CTR through the `aes` crate, which uses AES instructions when the
/// CPU has them. `None` when it does not.
pub fn measure_hardware_aes(data: &mut [u8], repeat: u32, threads: usize) -> Option<BenchRow> {
    if !hardware_aes_available() {
        return None;
    }
    use ctr::cipher::{KeyIvInit, StreamCipher};
    type HwCtr = ctr::Ctr128BE<::aes::Aes256>;
    let key = bench_key(2);
    let t = time_passes(repeat, || {
        parallel_records(data, threads, |first, s| {
            for (i, record) in s.chunks_mut(RECORD_SIZE).enumerate() {
                let iv = (u128::from(first + i as u64) << 64).to_be_bytes();
                HwCtr::new(&key.into(), &iv.into()).apply_keystream(record);
            }
        })
    });
    Some(row("aes256_ctr_hw", data.len(), repeat, t))
}

fn hardware_aes_available() -> bool {
    #[cfg(any(target_arch = "x86", target_arch = "x86_64"))]
    {
        std::arch::is_x86_feature_detected!("aes")
    }
    #[cfg(target_arch = "aarch64")]
    {
        std::arch::is_aarch64_feature_detected!("aes")
    }
    #[cfg(not(any(target_arch = "x86", target_arch = "x86_64", target_arch = "aarch64")))]
    {
        false
    }
}

pub fn measure_nested(data: &mut [u8], params: PadParams, repeat: u32, threads: usize) -> BenchRow {
    let cipher = CipherSession::new(&SessionKey::new(bench_key(1)), params);
    let key = bench_key(2);
    let t = time_passes(repeat, || {
        parallel_records(data, threads, |first, s| nested_records(&cipher, &key, first, s))
    });
    row("nested", data.len(), repeat, t)
}

pub fn measure_handshakes(count: u32) -> BenchRow {
    let config = ChannelConfig::insecure_demo();
    assert!(handshake_once(&config, u64::MAX), "mock handshake must succeed");
    let start = Instant::now();
    let mut ok = 0u64;
    for i in 0..count {
        ok += u64::from(handshake_once(&config, u64::from(i)));
    }
    BenchRow { name: "handshake".into(), bytes: ok, seconds: start.elapsed().as_secs_f64() }
}

fn row(name: &str, len: usize, repeat: u32, t: Duration) -> BenchRow {
    BenchRow { name: name.into(), bytes: len as u64 * u64::from(repeat), seconds: t.as_secs_f64() }
}

pub fn run(config: &BenchConfig) -> BenchReport {
    let mut data = vec![0u8; config.size.max(1)];
    ChaCha8Rng::seed_from_u64(7).fill_bytes(&mut data);
    let repeat = config.repeat.max(1);
    let rows = vec![
        measure_qpp(&mut data, config.params, repeat, config.threads),
        measure_aes(&mut data, repeat, config.threads),
        measure_nested(&mut data, config.params, repeat, config.threads),
        measure_handshakes(config.handshakes.max(1)),
    ];
    let hardware = measure_hardware_aes(&mut data, repeat, config.threads);
    BenchReport::from_rows(rows, config.threads.max(1), hardware)
}
