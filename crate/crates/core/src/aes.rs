//! Portable AES-256 (FIPS 197) with CTR mode (SP 800-38A).
//!
//! A classic four-table software implementation with no hardware
//! acceleration. It serves as the throughput baseline and as the emulated
//! outer transport layer. Only the forward cipher is needed since CTR mode
//! decrypts by encrypting.

use std::fmt;

use zeroize::Zeroize;

pub const KEY_LEN: usize = 32;
pub const BLOCK_LEN: usize = 16;
const ROUNDS: usize = 14;
const ROUND_KEY_WORDS: usize = 4 * (ROUNDS + 1);

#[rustfmt::skip]
const SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

const fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

// TE0[x] = (2·S[x], S[x], S[x], 3·S[x]) as a big-endian column.
const fn build_te0() -> [u32; 256] {
    let mut t = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let s = SBOX[i];
        let s2 = xtime(s);
        let s3 = s2 ^ s;
        t[i] = (s2 as u32) << 24 | (s as u32) << 16 | (s as u32) << 8 | s3 as u32;
        i += 1;
    }
    t
}

const fn rotate_table(t: [u32; 256], bits: u32) -> [u32; 256] {
    let mut out = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        out[i] = t[i].rotate_right(bits);
        i += 1;
    }
    out
}

const TE0: [u32; 256] = build_te0();
const TE1: [u32; 256] = rotate_table(TE0, 8);
const TE2: [u32; 256] = rotate_table(TE0, 16);
const TE3: [u32; 256] = rotate_table(TE0, 24);

fn sub_word(w: u32) -> u32 {
    u32::from_be_bytes(w.to_be_bytes().map(|b| SBOX[usize::from(b)]))
}

/// Expanded AES-256 key: 15 round keys of four words each.
#[derive(Clone)]
pub struct Aes256 {
    round_keys: [u32; ROUND_KEY_WORDS],
}

impl Aes256 {
    pub fn new(key: &[u8; KEY_LEN]) -> Self {
        let mut w = [0u32; ROUND_KEY_WORDS];
        for (i, chunk) in key.chunks_exact(4).enumerate() {
            w[i] = u32::from_be_bytes(chunk.try_into().unwrap());
        }
        let mut rcon: u8 = 1;
        for i in 8..ROUND_KEY_WORDS {
            let mut temp = w[i - 1];
            if i % 8 == 0 {
                temp = sub_word(temp.rotate_left(8)) ^ (u32::from(rcon) << 24);
                rcon = xtime(rcon);
            } else if i % 8 == 4 {
                temp = sub_word(temp);
            }
            w[i] = w[i - 8] ^ temp;
        }
        Self { round_keys: w }
    }

    pub fn round_keys(&self) -> &[u32; ROUND_KEY_WORDS] {
        &self.round_keys
    }

    pub fn encrypt_block(&self, block: &mut [u8; BLOCK_LEN]) {
        let rk = &self.round_keys;
        let word = |i: usize| u32::from_be_bytes(block[4 * i..4 * i + 4].try_into().unwrap());
        let mut s0 = word(0) ^ rk[0];
        let mut s1 = word(1) ^ rk[1];
        let mut s2 = word(2) ^ rk[2];
        let mut s3 = word(3) ^ rk[3];
        let b = |w: u32, shift: u32| ((w >> shift) & 0xff) as usize;
        for round in 1..ROUNDS {
            let k = &rk[4 * round..4 * round + 4];
            let t0 = TE0[b(s0, 24)] ^ TE1[b(s1, 16)] ^ TE2[b(s2, 8)] ^ TE3[b(s3, 0)] ^ k[0];
            let t1 = TE0[b(s1, 24)] ^ TE1[b(s2, 16)] ^ TE2[b(s3, 8)] ^ TE3[b(s0, 0)] ^ k[1];
            let t2 = TE0[b(s2, 24)] ^ TE1[b(s3, 16)] ^ TE2[b(s0, 8)] ^ TE3[b(s1, 0)] ^ k[2];
            let t3 = TE0[b(s3, 24)] ^ TE1[b(s0, 16)] ^ TE2[b(s1, 8)] ^ TE3[b(s2, 0)] ^ k[3];
            (s0, s1, s2, s3) = (t0, t1, t2, t3);
        }
        let k = &rk[4 * ROUNDS..];
        let last = |a: u32, b1: u32, c: u32, d: u32| {
            u32::from(SBOX[b(a, 24)]) << 24
                | u32::from(SBOX[b(b1, 16)]) << 16
                | u32::from(SBOX[b(c, 8)]) << 8
                | u32::from(SBOX[b(d, 0)])
        };
        let out = [
            last(s0, s1, s2, s3) ^ k[0],
            last(s1, s2, s3, s0) ^ k[1],
            last(s2, s3, s0, s1) ^ k[2],
            last(s3, s0, s1, s2) ^ k[3],
        ];
        for (i, w) in out.iter().enumerate() {
            block[4 * i..4 * i + 4].copy_from_slice(&w.to_be_bytes());
        }
    }
}

impl Drop for Aes256 {
    fn drop(&mut self) {
        self.round_keys.zeroize();
    }
}

impl fmt::Debug for Aes256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Aes256(..)")
    }
}

/// Streaming AES-256-CTR with a 128-bit big-endian counter block.
///
/// Successive calls to [`apply_keystream`](Self::apply_keystream) continue
/// the same keystream, so one instance can protect a whole byte stream.
#[derive(Clone, Debug)]
pub struct Aes256Ctr {
    cipher: Aes256,
    counter: u128,
    block: [u8; BLOCK_LEN],
    used: usize,
}

impl Aes256Ctr {
    pub fn new(key: &[u8; KEY_LEN], iv: &[u8; BLOCK_LEN]) -> Self {
        Self {
            cipher: Aes256::new(key),
            counter: u128::from_be_bytes(*iv),
            block: [0; BLOCK_LEN],
            used: BLOCK_LEN,
        }
    }

    fn next_block(&mut self) -> [u8; BLOCK_LEN] {
        let mut block = self.counter.to_be_bytes();
        self.cipher.encrypt_block(&mut block);
        self.counter = self.counter.wrapping_add(1);
        block
    }

    pub fn apply_keystream(&mut self, data: &mut [u8]) {
        let mut data = data;
        if self.used < BLOCK_LEN {
            let take = (BLOCK_LEN - self.used).min(data.len());
            let (head, rest) = data.split_at_mut(take);
            for (d, k) in head.iter_mut().zip(&self.block[self.used..]) {
                *d ^= k;
            }
            self.used += take;
            data = rest;
        }
        let mut blocks = data.chunks_exact_mut(BLOCK_LEN);
        for chunk in &mut blocks {
            let ks = self.next_block();
            for (d, k) in chunk.iter_mut().zip(ks.iter()) {
                *d ^= k;
            }
        }
        let tail = blocks.into_remainder();
        if !tail.is_empty() {
            self.block = self.next_block();
            for (d, k) in tail.iter_mut().zip(self.block.iter()) {
                *d ^= k;
            }
            self.used = tail.len();
        }
    }
}

/// One-shot CTR transform; encryption and decryption are the same call.
pub fn aes256_ctr(key: &[u8; KEY_LEN], iv: &[u8; BLOCK_LEN], data: &[u8]) -> Vec<u8> {
    let mut out = data.to_vec();
    Aes256Ctr::new(key, iv).apply_keystream(&mut out);
    out
}
