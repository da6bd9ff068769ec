//! One-shot TCP proxy that records (and optionally corrupts) traffic.

#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

/// XOR `mask` into the client-to-server byte at `offset`.
#[derive(Clone, Copy, Debug)]
pub struct Tamper {
    pub offset: usize,
    pub mask: u8,
}

pub struct Proxy {
    pub addr: String,
    pub client_to_server: Arc<Mutex<Vec<u8>>>,
    pub server_to_client: Arc<Mutex<Vec<u8>>>,
    handle: JoinHandle<()>,
}

impl Proxy {
    pub fn start(target: String, tamper: Option<Tamper>, capture: bool) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let c2s = Arc::new(Mutex::new(Vec::new()));
        let s2c = Arc::new(Mutex::new(Vec::new()));
        let (c2s_log, s2c_log) = (c2s.clone(), s2c.clone());
        let handle = thread::spawn(move || {
            let (client, _) = listener.accept().unwrap();
            let server = TcpStream::connect(target).unwrap();
            let up = {
                let (from, to) = (client.try_clone().unwrap(), server.try_clone().unwrap());
                thread::spawn(move || pump(from, to, tamper, capture.then_some(c2s_log)))
            };
            pump(server, client, None, capture.then_some(s2c_log));
            up.join().unwrap();
        });
        Self { addr, client_to_server: c2s, server_to_client: s2c, handle }
    }

    pub fn finish(self) -> (Vec<u8>, Vec<u8>) {
        self.handle.join().unwrap();
        let take = |m: Arc<Mutex<Vec<u8>>>| std::mem::take(&mut *m.lock().unwrap());
        (take(self.client_to_server), take(self.server_to_client))
    }
}

fn pump(mut from: TcpStream, mut to: TcpStream, tamper: Option<Tamper>, log: Option<Arc<Mutex<Vec<u8>>>>) {
    let mut buf = vec![0u8; 1 << 16];
    let mut seen = 0usize;
    loop {
        let n = match from.read(&mut buf) {
            Ok(0) | Err(_) => break,
            Ok(n) => n,
        };
        if let Some(t) = tamper {
            if (seen..seen + n).contains(&t.offset) {
                buf[t.offset - seen] ^= t.mask;
            }
        }
        seen += n;
        if let Some(log) = &log {
            log.lock().unwrap().extend_from_slice(&buf[..n]);
        }
        if to.write_all(&buf[..n]).is_err() {
            break;
        }
    }
    let _ = to.shutdown(Shutdown::Write);
    let _ = from.shutdown(Shutdown::Read);
}
