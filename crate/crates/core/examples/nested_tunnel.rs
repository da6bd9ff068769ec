//! Loopback tunnel with the AES-256-CTR outer layer: echo 4 MB and time it.

use std::io::Cursor;
use std::net::TcpListener;
use std::time::Instant;

use qpp::channel::ChannelConfig;
use qpp::tunnel::{self, OuterLayer, ServerMode, TunnelConfig};

fn main() {
    let outer_key: [u8; 32] = rand::random();
    let config = TunnelConfig::new(ChannelConfig::insecure_demo(), OuterLayer::aes(outer_key));

    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let server_config = config.clone();
    let server = std::thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        tunnel::serve_connection(stream, &server_config, &ServerMode::Echo)
    });

    let data: Vec<u8> = (0..4_000_000u32).map(|i| (i % 253) as u8).collect();
    let start = Instant::now();
    let conn = tunnel::connect(addr, &config).expect("handshake");
    println!("connected: {:?}", conn);
    let mut echoed = Vec::new();
    let stats = tunnel::relay(conn, Cursor::new(data.clone()), &mut echoed).expect("relay");
    let secs = start.elapsed().as_secs_f64();

    assert_eq!(echoed, data);
    println!("server: {:?}", server.join().unwrap().expect("server side"));
    println!(
        "sent {} / received {} bytes in {secs:.2}s ({:.1} MB/s each way)",
        stats.sent,
        stats.received,
        stats.sent as f64 / 1e6 / secs
    );
}
