//! Deterministic keystream and subkey derivation.
//!
//! Every random-looking quantity in the cipher (gate shuffles, XOR masks and
//! gate dispatch) is drawn from a ChaCha20 keystream (RFC 8439) keyed by a
//! subkey that HKDF-SHA-256 (RFC 5869) derives from the session key. The two
//! primitives are public standards, so every output of this crate can be
//! reproduced bit-for-bit by an independent implementation.

use std::fmt;

use chacha20::cipher::{KeyIvInit, StreamCipher, StreamCipherSeek};
use chacha20::ChaCha20;
use hkdf::Hkdf;
use sha2::Sha256;
use zeroize::{Zeroize, ZeroizeOnDrop};

/// Label for the keystream that shuffles the permutation gates.
pub const PAD_LABEL: &[u8] = b"QPP/pad/v1";
/// Label for the record-encryption keystream of standalone sessions.
pub const ENC_LABEL: &[u8] = b"QPP/enc/v1";

pub const KEY_LEN: usize = 32;
pub const NONCE_LEN: usize = 12;

const BLOCK_LEN: usize = 64;

/// A 32-byte shared secret from which all cipher material is derived.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct SessionKey([u8; KEY_LEN]);

impl SessionKey {
    pub fn new(bytes: [u8; KEY_LEN]) -> Self {
        Self(bytes)
    }

    /// Builds a key from a slice, which must be exactly 32 bytes long.
    pub fn from_slice(bytes: &[u8]) -> Option<Self> {
        <[u8; KEY_LEN]>::try_from(bytes).ok().map(Self)
    }

    pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
        &self.0
    }
}

impl fmt::Debug for SessionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SessionKey(..)")
    }
}

/// HKDF-SHA-256 with an empty salt, expanded to 32 bytes under `label`.
pub fn derive_subkey(session_key: &SessionKey, label: &[u8]) -> [u8; KEY_LEN] {
    hkdf_sha256(session_key.as_bytes(), label)
}

pub(crate) fn hkdf_sha256(ikm: &[u8], info: &[u8]) -> [u8; KEY_LEN] {
    let mut okm = [0u8; KEY_LEN];
    Hkdf::<Sha256>::new(None, ikm)
        .expand(info, &mut okm)
        .expect("32 bytes is a valid HKDF-SHA-256 output length");
    okm
}

/// Position-tracking ChaCha20 keystream.
///
/// Single-byte draws are served from a one-block buffer; bulk draws go
/// straight to the cipher once the buffer is drained. Either way the bytes
/// handed out are the plain RFC 8439 keystream starting at block counter 0.
pub struct KeystreamState {
    cipher: ChaCha20,
    block: [u8; BLOCK_LEN],
    // Unconsumed bytes live in block[used..]; used == BLOCK_LEN means empty.
    used: usize,
    position: u64,
}

impl KeystreamState {
    pub fn new(subkey: &[u8; KEY_LEN], nonce: &[u8; NONCE_LEN]) -> Self {
        Self {
            cipher: ChaCha20::new(subkey.into(), nonce.into()),
            block: [0; BLOCK_LEN],
            used: BLOCK_LEN,
            position: 0,
        }
    }

    /// A state positioned `position` bytes into the keystream.
    pub fn at(subkey: &[u8; KEY_LEN], nonce: &[u8; NONCE_LEN], position: u64) -> Self {
        let mut state = Self::new(subkey, nonce);
        state.cipher.seek(position);
        state.position = position;
        state
    }

    /// Number of keystream bytes drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_byte(&mut self) -> u8 {
        if self.used == BLOCK_LEN {
            self.refill();
        }
        let b = self.block[self.used];
        self.used += 1;
        self.position += 1;
        b
    }

    /// Overwrites `out` with the next `out.len()` keystream bytes.
    pub fn fill(&mut self, out: &mut [u8]) {
        let buffered = (BLOCK_LEN - self.used).min(out.len());
        out[..buffered].copy_from_slice(&self.block[self.used..self.used + buffered]);
        self.used += buffered;
        let rest = &mut out[buffered..];
        if !rest.is_empty() {
            rest.fill(0);
            self.cipher.apply_keystream(rest);
        }
        self.position += out.len() as u64;
    }

    pub fn next_bytes(&mut self, count: usize) -> Vec<u8> {
        let mut out = vec![0u8; count];
        self.fill(&mut out);
        out
    }

    /// Uniform integer in `[0, bound)` by rejection sampling on single bytes.
    ///
    /// A byte `b` is accepted when `b < 256 - 256 % bound`, so every residue
    /// has exactly the same number of preimages.
    ///
    /// # Panics
    ///
    /// Panics unless `1 <= bound <= 256`.
    pub fn uniform_below(&mut self, bound: u16) -> u16 {
        uniform_from_bytes(bound, || self.next_byte())
    }

    fn refill(&mut self) {
        self.block = [0; BLOCK_LEN];
        self.cipher.apply_keystream(&mut self.block);
        self.used = 0;
    }
}

fn uniform_from_bytes(bound: u16, mut next: impl FnMut() -> u8) -> u16 {
    assert!((1..=256).contains(&bound), "bound {bound} outside 1..=256");
    let limit = 256 - (256 % bound);
    loop {
        let b = u16::from(next());
        if b < limit {
            return b % bound;
        }
    }
}

impl fmt::Debug for KeystreamState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeystreamState")
            .field("position", &self.position)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> KeystreamState {
        KeystreamState::new(&[7; 32], &[9; 12])
    }

    #[test]
    fn subkey_is_deterministic_and_label_separated() {
        let key = SessionKey::new([0x42; 32]);
        assert_eq!(derive_subkey(&key, PAD_LABEL), derive_subkey(&key, PAD_LABEL));
        assert_ne!(derive_subkey(&key, PAD_LABEL), derive_subkey(&key, ENC_LABEL));
    }

    #[test]
    fn zero_count_draw_is_empty() {
        let mut ks = state();
        assert!(ks.next_bytes(0).is_empty());
        assert_eq!(ks.position(), 0);
    }

    #[test]
    fn split_draws_match_single_draw() {
        let mut a = state();
        let mut b = state();
        let mut split = a.next_bytes(32);
        split.extend(a.next_bytes(32));
        assert_eq!(split, b.next_bytes(64));
        assert_eq!(a.position(), 64);
    }

    #[test]
    fn mixed_byte_and_bulk_draws_are_contiguous() {
        let mut a = state();
        let reference = a.next_bytes(300);
        let mut b = state();
        let mut got = vec![b.next_byte(), b.next_byte()];
        got.extend(b.next_bytes(70));
        for _ in 0..5 {
            got.push(b.next_byte());
        }
        got.extend(b.next_bytes(223));
        assert_eq!(got, reference);
        assert_eq!(b.position(), 300);
    }

    #[test]
    fn seeking_matches_drawing() {
        let mut a = state();
        let all = a.next_bytes(200);
        let mut b = KeystreamState::at(&[7; 32], &[9; 12], 77);
        assert_eq!(b.next_bytes(123), &all[77..]);
    }

    #[test]
    fn different_nonces_differ() {
        let mut a = KeystreamState::new(&[7; 32], &[0; 12]);
        let mut b = KeystreamState::new(&[7; 32], &[1; 12]);
        assert_ne!(a.next_bytes(64), b.next_bytes(64));
    }

    #[test]
    fn uniform_below_one_consumes_one_byte() {
        let mut ks = state();
        assert_eq!(ks.uniform_below(1), 0);
        assert_eq!(ks.position(), 1);
    }

    #[test]
    fn uniform_below_256_is_the_raw_byte() {
        let first = state().next_byte();
        let mut ks = state();
        assert_eq!(ks.uniform_below(256), u16::from(first));
        assert_eq!(ks.position(), 1);
    }

    #[test]
    fn rejection_rule_on_fixed_bytes() {
        let mut bytes = [253u8, 3].into_iter();
        let mut drawn = 0;
        let r = uniform_from_bytes(6, || {
            drawn += 1;
            bytes.next().unwrap()
        });
        assert_eq!((r, drawn), (3, 2));
    }

    #[test]
    fn uniform_below_rejects_bytes_past_the_limit() {
        // Find a keystream offset where the bytes read (>= 252, < 252) so the
        // rejection path for bound 6 is exercised against real output.
        let stream = state().next_bytes(1 << 16);
        let at = stream
            .windows(2)
            .position(|w| w[0] >= 252 && w[1] < 252)
            .expect("pattern occurs in 64 KiB");
        let mut ks = KeystreamState::at(&[7; 32], &[9; 12], at as u64);
        let got = ks.uniform_below(6);
        assert_eq!(got, u16::from(stream[at + 1]) % 6);
        assert_eq!(ks.position(), at as u64 + 2);
    }

    #[test]
    #[should_panic]
    fn uniform_below_zero_panics() {
        state().uniform_below(0);
    }
}
