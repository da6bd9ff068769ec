//! Straight-line reference implementations used to derive golden values.
//!
//! Nothing here calls into the library or the crypto crates it depends on:
//! SHA-256, HMAC, HKDF and ChaCha20 are written out from their RFC / FIPS
//! descriptions, favouring obviousness over speed.

#![allow(dead_code)]

const K: [u32; 64] = [
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
];

pub fn sha256(data: &[u8]) -> [u8; 32] {
    let mut h: [u32; 8] = [
        0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
    ];
    let mut msg = data.to_vec();
    msg.push(0x80);
    while msg.len() % 64 != 56 {
        msg.push(0);
    }
    msg.extend_from_slice(&((data.len() as u64) * 8).to_be_bytes());
    for block in msg.chunks(64) {
        let mut w = [0u32; 64];
        for t in 0..16 {
            w[t] = u32::from_be_bytes(block[4 * t..4 * t + 4].try_into().unwrap());
        }
        for t in 16..64 {
            let s0 = w[t - 15].rotate_right(7) ^ w[t - 15].rotate_right(18) ^ (w[t - 15] >> 3);
            let s1 = w[t - 2].rotate_right(17) ^ w[t - 2].rotate_right(19) ^ (w[t - 2] >> 10);
            w[t] = w[t - 16].wrapping_add(s0).wrapping_add(w[t - 7]).wrapping_add(s1);
        }
        let [mut a, mut b, mut c, mut d, mut e, mut f, mut g, mut hh] = h;
        for t in 0..64 {
            let s1 = e.rotate_right(6) ^ e.rotate_right(11) ^ e.rotate_right(25);
            let ch = (e & f) ^ (!e & g);
            let t1 = hh.wrapping_add(s1).wrapping_add(ch).wrapping_add(K[t]).wrapping_add(w[t]);
            let s0 = a.rotate_right(2) ^ a.rotate_right(13) ^ a.rotate_right(22);
            let maj = (a & b) ^ (a & c) ^ (b & c);
            let t2 = s0.wrapping_add(maj);
            hh = g;
            g = f;
            f = e;
            e = d.wrapping_add(t1);
            d = c;
            c = b;
            b = a;
            a = t1.wrapping_add(t2);
        }
        for (x, y) in h.iter_mut().zip([a, b, c, d, e, f, g, hh]) {
            *x = x.wrapping_add(y);
        }
    }
    let mut out = [0u8; 32];
    for (i, word) in h.iter().enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(&word.to_be_bytes());
    }
    out
}

pub fn hmac_sha256(key: &[u8], data: &[u8]) -> [u8; 32] {
    let mut k = if key.len() > 64 { sha256(key).to_vec() } else { key.to_vec() };
    k.resize(64, 0);
    let mut inner: Vec<u8> = k.iter().map(|b| b ^ 0x36).collect();
    inner.extend_from_slice(data);
    let mut outer: Vec<u8> = k.iter().map(|b| b ^ 0x5c).collect();
    outer.extend_from_slice(&sha256(&inner));
    sha256(&outer)
}

pub fn hkdf(ikm: &[u8], salt: &[u8], info: &[u8], len: usize) -> Vec<u8> {
    let salt = if salt.is_empty() { vec![0u8; 32] } else { salt.to_vec() };
    let prk = hmac_sha256(&salt, ikm);
    let mut okm = Vec::new();
    let mut t = Vec::new();
    let mut counter = 1u8;
    while okm.len() < len {
        let mut input = t.clone();
        input.extend_from_slice(info);
        input.push(counter);
        t = hmac_sha256(&prk, &input).to_vec();
        okm.extend_from_slice(&t);
        counter += 1;
    }
    okm.truncate(len);
    okm
}

pub fn hkdf32(ikm: &[u8], info: &[u8]) -> [u8; 32] {
    hkdf(ikm, &[], info, 32).try_into().unwrap()
}

fn quarter_round(s: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize) {
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(16);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(12);
    s[a] = s[a].wrapping_add(s[b]);
    s[d] = (s[d] ^ s[a]).rotate_left(8);
    s[c] = s[c].wrapping_add(s[d]);
    s[b] = (s[b] ^ s[c]).rotate_left(7);
}

pub fn chacha20_block(key: &[u8; 32], counter: u32, nonce: &[u8; 12]) -> [u8; 64] {
    let word = |b: &[u8]| u32::from_le_bytes(b.try_into().unwrap());
    let mut init = [0u32; 16];
    init[..4].copy_from_slice(&[0x61707865, 0x3320646e, 0x79622d32, 0x6b206574]);
    for i in 0..8 {
        init[4 + i] = word(&key[4 * i..4 * i + 4]);
    }
    init[12] = counter;
    for i in 0..3 {
        init[13 + i] = word(&nonce[4 * i..4 * i + 4]);
    }
    let mut s = init;
    for _ in 0..10 {
        quarter_round(&mut s, 0, 4, 8, 12);
        quarter_round(&mut s, 1, 5, 9, 13);
        quarter_round(&mut s, 2, 6, 10, 14);
        quarter_round(&mut s, 3, 7, 11, 15);
        quarter_round(&mut s, 0, 5, 10, 15);
        quarter_round(&mut s, 1, 6, 11, 12);
        quarter_round(&mut s, 2, 7, 8, 13);
        quarter_round(&mut s, 3, 4, 9, 14);
    }
    let mut out = [0u8; 64];
    for i in 0..16 {
        out[4 * i..4 * i + 4].copy_from_slice(&s[i].wrapping_add(init[i]).to_le_bytes());
    }
    out
}

/// Byte-at-a-time ChaCha20 keystream from block counter `counter`.
pub struct Stream {
    key: [u8; 32],
    nonce: [u8; 12],
    counter: u32,
    block: [u8; 64],
    used: usize,
}

impl Stream {
    pub fn new(key: [u8; 32], nonce: [u8; 12], counter: u32) -> Self {
        Self { key, nonce, counter, block: [0; 64], used: 64 }
    }

    pub fn byte(&mut self) -> u8 {
        if self.used == 64 {
            self.block = chacha20_block(&self.key, self.counter, &self.nonce);
            self.counter += 1;
            self.used = 0;
        }
        self.used += 1;
        self.block[self.used - 1]
    }

    pub fn take(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.byte()).collect()
    }

    /// Rejection sampling: accept `b < 256 - 256 % bound`, return `b % bound`.
    pub fn uniform(&mut self, bound: usize) -> usize {
        loop {
            let b = self.byte() as usize;
            if b < 256 - 256 % bound {
                return b % bound;
            }
        }
    }
}

pub fn chacha20_xor(key: &[u8; 32], counter: u32, nonce: &[u8; 12], data: &[u8]) -> Vec<u8> {
    let mut s = Stream::new(*key, *nonce, counter);
    data.iter().map(|b| b ^ s.byte()).collect()
}

pub fn subkey(session_key: &[u8; 32], label: &[u8]) -> [u8; 32] {
    hkdf32(session_key, label)
}

/// `M` gates over `2^n` symbols, Fisher-Yates from the top index down.
pub fn pad(session_key: &[u8; 32], n: u32, m: usize) -> Vec<Vec<u8>> {
    let mut s = Stream::new(subkey(session_key, b"QPP/pad/v1"), [0; 12], 0);
    let size = 1usize << n;
    (0..m)
        .map(|_| {
            let mut g: Vec<u8> = (0..size).map(|i| i as u8).collect();
            let mut i = size - 1;
            while i >= 1 {
                let j = s.uniform(i + 1);
                g.swap(i, j);
                i -= 1;
            }
            g
        })
        .collect()
}

pub fn record_nonce(seq: u64) -> [u8; 12] {
    let mut nonce = [0u8; 12];
    nonce[4..].copy_from_slice(&seq.to_be_bytes());
    nonce
}

/// Record encryption: per byte draw `r0` (mask) then `r1` (dispatch).
pub fn encrypt(session_key: &[u8; 32], label: &[u8], n: u32, m: usize, seq: u64, pt: &[u8]) -> Vec<u8> {
    let gates = pad(session_key, n, m);
    let mut s = Stream::new(subkey(session_key, label), record_nonce(seq), 0);
    pt.iter()
        .map(|&p| {
            let r0 = s.byte() as usize;
            let r1 = s.byte() as usize;
            let p = p as usize;
            if n == 8 {
                gates[r1 % m][p ^ r0]
            } else {
                let hi = gates[(r1 >> 4) % m][(p >> 4) ^ (r0 >> 4)];
                let lo = gates[(r1 & 15) % m][(p & 15) ^ (r0 & 15)];
                (hi << 4) | lo
            }
        })
        .collect()
}

/// Mock-KEM handshake, byte by byte. Returns
/// (ClientHello, ServerHello, transcript hash, session key).
pub fn handshake(client_seed: &[u8; 32], server_random: &[u8; 32], eseed: &[u8; 32], n: u8, m: u16) -> (Vec<u8>, Vec<u8>, [u8; 32], [u8; 32]) {
    let pk = sha256(client_seed);
    let mut ch = vec![0x00, 0x01, 0x01];
    ch.extend_from_slice(&hkdf32(client_seed, b"QPP/client-random/v1"));
    ch.extend_from_slice(&[1, 0xFE, 0x01]);
    ch.extend_from_slice(&[0, 32]);
    ch.extend_from_slice(&pk);
    ch.extend_from_slice(&[0, 7, 0x00, 0x01, 0x00, 0x03, n]);
    ch.extend_from_slice(&m.to_be_bytes());

    let mut kem_input = pk.to_vec();
    kem_input.extend_from_slice(eseed);
    let ss = sha256(&kem_input);

    let mut sh = vec![0x00, 0x02, 0x01];
    sh.extend_from_slice(server_random);
    sh.extend_from_slice(&[0xFE, 0x01, 0, 32]);
    sh.extend_from_slice(eseed);
    sh.extend_from_slice(&[0, 0]);
    let mut zeroed = sh.clone();
    zeroed.extend_from_slice(&[0; 32]);
    let mut transcript = ch.clone();
    transcript.extend_from_slice(&zeroed);
    let th = sha256(&transcript);

    let mut info = b"QPP-NESTED-v1".to_vec();
    info.extend_from_slice(&th);
    let key = hkdf32(&ss, &info);
    let mut fin = b"srv-fin".to_vec();
    fin.extend_from_slice(&th);
    sh.extend_from_slice(&hmac_sha256(&key, &fin));
    (ch, sh, th, key)
}

pub fn client_confirm(key: &[u8; 32], th: &[u8; 32]) -> [u8; 32] {
    let mut fin = b"cli-fin".to_vec();
    fin.extend_from_slice(th);
    hmac_sha256(key, &fin)
}
