//! Short benchmark run with CSV output.
//!
//! `cargo run --release --example bench -- 32` measures a 32 MiB buffer.

use qpp::bench::{self, BenchConfig};

fn main() {
    let mib: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let report = bench::run(&BenchConfig { size: mib << 20, repeat: 2, ..Default::default() });
    println!("{report}\n");
    print!("{}", report.to_csv());
}
