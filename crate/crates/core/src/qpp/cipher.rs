use std::sync::Arc;

use zeroize::Zeroizing;

use super::pad::{PadParams, QppPad, SymbolBits};
use crate::keystream::{derive_subkey, KeystreamState, SessionKey, ENC_LABEL, KEY_LEN, NONCE_LEN};

// Plaintext bytes handled per keystream refill; each needs two keystream bytes.
const CHUNK: usize = 2048;

/// A pad together with the subkey for record keystreams.
///
/// Immutable once built. Every record derives its own keystream from its
/// sequence number, so distinct records can be processed concurrently.
#[derive(Clone)]
pub struct CipherSession {
    pad: Arc<QppPad>,
    enc_subkey: Zeroizing<[u8; KEY_LEN]>,
}

impl CipherSession {
    /// Standalone session: pad and record subkey both derived from `key`.
    pub fn new(key: &SessionKey, params: PadParams) -> Self {
        Self::with_label(Arc::new(QppPad::generate(key, params)), key, ENC_LABEL)
    }

    /// Session over an existing pad with the record subkey derived under `label`.
    pub fn with_label(pad: Arc<QppPad>, key: &SessionKey, label: &[u8]) -> Self {
        Self::from_parts(pad, derive_subkey(key, label))
    }

    pub fn from_parts(pad: Arc<QppPad>, enc_subkey: [u8; KEY_LEN]) -> Self {
        Self { pad, enc_subkey: Zeroizing::new(enc_subkey) }
    }

    pub fn pad(&self) -> &Arc<QppPad> {
        &self.pad
    }

    pub fn params(&self) -> PadParams {
        self.pad.params()
    }

    /// Keystream for record `seq`: nonce is four zero bytes then `seq` big-endian.
    pub fn record_keystream(&self, seq: u64) -> KeystreamState {
        KeystreamState::new(&self.enc_subkey, &record_nonce(seq))
    }

    /// Encrypts one record. Callers must never reuse `seq` under one session.
    pub fn encrypt_record(&self, seq: u64, plaintext: &[u8]) -> Vec<u8> {
        let mut buf = plaintext.to_vec();
        self.encrypt_in_place(seq, &mut buf);
        buf
    }

    pub fn decrypt_record(&self, seq: u64, ciphertext: &[u8]) -> Vec<u8> {
        let mut buf = ciphertext.to_vec();
        self.decrypt_in_place(seq, &mut buf);
        buf
    }

    /// Per byte: mask `r0` then dispatch `r1`; output `gate[r1 mod M][p ^ r0]`.
    pub fn encrypt_in_place(&self, seq: u64, data: &mut [u8]) {
        let table = self.pad.forward_table();
        let mask = usize::from(self.pad.params().m() - 1);
        let mut ks = self.record_keystream(seq);
        let mut stream = [0u8; 2 * CHUNK];
        match self.pad.params().bits() {
            SymbolBits::Eight => {
                for chunk in data.chunks_mut(CHUNK) {
                    let stream = &mut stream[..2 * chunk.len()];
                    ks.fill(stream);
                    for (byte, pair) in chunk.iter_mut().zip(stream.chunks_exact(2)) {
                        let idx = usize::from(pair[1]) & mask;
                        *byte = table[(idx << 8) | usize::from(*byte ^ pair[0])];
                    }
                }
            }
            SymbolBits::Four => {
                for chunk in data.chunks_mut(CHUNK) {
                    let stream = &mut stream[..2 * chunk.len()];
                    ks.fill(stream);
                    for (byte, pair) in chunk.iter_mut().zip(stream.chunks_exact(2)) {
                        let (r0, r1) = (pair[0], pair[1]);
                        let hi_gate = usize::from(r1 >> 4) & mask;
                        let lo_gate = usize::from(r1 & 0x0F) & mask;
                        let hi = table[(hi_gate << 4) | usize::from((*byte >> 4) ^ (r0 >> 4))];
                        let lo = table[(lo_gate << 4) | usize::from((*byte & 0x0F) ^ (r0 & 0x0F))];
                        *byte = (hi << 4) | lo;
                    }
                }
            }
        }
    }

    /// Inverse of [`encrypt_in_place`](Self::encrypt_in_place): dispatch to
    /// the inverse gate first, then remove the mask.
    pub fn decrypt_in_place(&self, seq: u64, data: &mut [u8]) {
        let table = self.pad.inverse_table();
        let mask = usize::from(self.pad.params().m() - 1);
        let mut ks = self.record_keystream(seq);
        let mut stream = [0u8; 2 * CHUNK];
        match self.pad.params().bits() {
            SymbolBits::Eight => {
                for chunk in data.chunks_mut(CHUNK) {
                    let stream = &mut stream[..2 * chunk.len()];
                    ks.fill(stream);
                    for (byte, pair) in chunk.iter_mut().zip(stream.chunks_exact(2)) {
                        let idx = usize::from(pair[1]) & mask;
                        *byte = table[(idx << 8) | usize::from(*byte)] ^ pair[0];
                    }
                }
            }
            SymbolBits::Four => {
                for chunk in data.chunks_mut(CHUNK) {
                    let stream = &mut stream[..2 * chunk.len()];
                    ks.fill(stream);
                    for (byte, pair) in chunk.iter_mut().zip(stream.chunks_exact(2)) {
                        let (r0, r1) = (pair[0], pair[1]);
                        let hi_gate = usize::from(r1 >> 4) & mask;
                        let lo_gate = usize::from(r1 & 0x0F) & mask;
                        let hi = table[(hi_gate << 4) | usize::from(*byte >> 4)] ^ (r0 >> 4);
                        let lo = table[(lo_gate << 4) | usize::from(*byte & 0x0F)] ^ (r0 & 0x0F);
                        *byte = (hi << 4) | lo;
                    }
                }
            }
        }
    }
}

impl std::fmt::Debug for CipherSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CipherSession").field("params", &self.params()).finish_non_exhaustive()
    }
}

pub fn record_nonce(seq: u64) -> [u8; NONCE_LEN] {
    let mut nonce = [0u8; NONCE_LEN];
    nonce[4..].copy_from_slice(&seq.to_be_bytes());
    nonce
}
