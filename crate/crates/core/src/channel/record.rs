//! Post-handshake record protection.
//!
//! Payloads are encrypted with the permutation-pad cipher using the record's
//! sequence number as the per-record nonce. Each direction has its own
//! record subkey, so no (subkey, seq) pair is ever used twice in a session.
//!
//! Protection is confidentiality-only by default: a modified payload decrypts
//! to garbage without being detected here. Setting `record_mac` appends an
//! HMAC-SHA-256 tag over header and ciphertext.

use std::sync::Arc;

use hmac::{Hmac, Mac};
use sha2::Sha256;
use zeroize::Zeroizing;

use super::handshake::{Established, Role};
use super::wire::{decode_record, encode_record, Record, RecordHeader, RecordType, MAX_PAYLOAD};
use super::ChannelError;
use crate::keystream::{derive_subkey, SessionKey, KEY_LEN};
use crate::qpp::{CipherSession, PadParams, QppPad};

pub const MAC_LEN: usize = 32;

/// Largest plaintext a single data record can carry.
pub const fn max_plaintext(record_mac: bool) -> usize {
    if record_mac {
        MAX_PAYLOAD - MAC_LEN
    } else {
        MAX_PAYLOAD
    }
}

// Sequence numbers consumed by the handshake: ClientHello is 0 and the client
// confirm is 1 on the client side; ServerHello is 0 on the server side.
const CLIENT_FIRST_DATA_SEQ: u64 = 2;
const SERVER_FIRST_DATA_SEQ: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ClientToServer,
    ServerToClient,
}

impl Direction {
    pub fn enc_label(self) -> &'static [u8] {
        match self {
            Self::ClientToServer => b"QPP/enc/v1/c2s",
            Self::ServerToClient => b"QPP/enc/v1/s2c",
        }
    }

    fn mac_label(self) -> &'static [u8] {
        match self {
            Self::ClientToServer => b"QPP/mac/v1/c2s",
            Self::ServerToClient => b"QPP/mac/v1/s2c",
        }
    }

    fn first_data_seq(self) -> u64 {
        match self {
            Self::ClientToServer => CLIENT_FIRST_DATA_SEQ,
            Self::ServerToClient => SERVER_FIRST_DATA_SEQ,
        }
    }
}

struct DirectionKeys {
    cipher: CipherSession,
    mac_key: Option<Zeroizing<[u8; KEY_LEN]>>,
}

impl DirectionKeys {
    fn new(pad: Arc<QppPad>, key: &SessionKey, direction: Direction, record_mac: bool) -> Self {
        Self {
            cipher: CipherSession::with_label(pad, key, direction.enc_label()),
            mac_key: record_mac.then(|| Zeroizing::new(derive_subkey(key, direction.mac_label()))),
        }
    }

    fn tag(&self, header: &[u8], ciphertext: &[u8]) -> Option<[u8; MAC_LEN]> {
        self.mac_key.as_ref().map(|k| {
            let mut mac = Hmac::<Sha256>::new_from_slice(k.as_slice()).expect("any key length");
            mac.update(header);
            mac.update(ciphertext);
            mac.finalize().into_bytes().into()
        })
    }
}

/// Sending half: assigns sequence numbers and encrypts.
pub struct RecordSender {
    keys: DirectionKeys,
    direction: Direction,
    next_seq: u64,
}

impl RecordSender {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn next_seq(&self) -> u64 {
        self.next_seq
    }

    /// Encrypts `payload` into one wire record.
    pub fn seal(&mut self, kind: RecordType, payload: &[u8]) -> Result<Vec<u8>, ChannelError> {
        let mac = self.keys.mac_key.is_some();
        if payload.len() > max_plaintext(mac) {
            return Err(ChannelError::PayloadTooLarge(payload.len()));
        }
        let seq = self.next_seq;
        let next = seq.checked_add(1).ok_or(ChannelError::SequenceExhausted)?;
        let wire_len = payload.len() + if mac { MAC_LEN } else { 0 };
        let header = RecordHeader { kind, seq, len: wire_len }.encode();
        let mut out = Vec::with_capacity(header.len() + wire_len);
        out.extend_from_slice(&header);
        out.extend_from_slice(payload);
        self.keys.cipher.encrypt_in_place(seq, &mut out[header.len()..]);
        if let Some(tag) = self.keys.tag(&header, &out[header.len()..]) {
            out.extend_from_slice(&tag);
        }
        self.next_seq = next;
        Ok(out)
    }

    /// Seals a record, keeping its type and payload but assigning the next
    /// sequence number.
    pub fn seal_record(&mut self, record: &Record) -> Result<Vec<u8>, ChannelError> {
        self.seal(record.kind, &record.payload)
    }
}

/// Receiving half: enforces strictly increasing sequence numbers and decrypts.
pub struct RecordReceiver {
    keys: DirectionKeys,
    direction: Direction,
    last_seq: u64,
}

impl RecordReceiver {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Decodes and decrypts exactly one wire record.
    pub fn open(&mut self, wire: &[u8]) -> Result<Record, ChannelError> {
        let record = decode_record(wire)?;
        self.open_record(record)
    }

    /// Decrypts a record whose framing was already parsed.
    pub fn open_record(&mut self, mut record: Record) -> Result<Record, ChannelError> {
        if record.seq <= self.last_seq {
            return Err(ChannelError::Replay { last: self.last_seq, got: record.seq });
        }
        if self.keys.mac_key.is_some() {
            if record.payload.len() < MAC_LEN {
                return Err(ChannelError::IntegrityFailure);
            }
            let split = record.payload.len() - MAC_LEN;
            let header = RecordHeader { kind: record.kind, seq: record.seq, len: record.payload.len() }.encode();
            let expected = self.keys.tag(&header, &record.payload[..split]).expect("mac key present");
            if !constant_time_eq(&expected, &record.payload[split..]) {
                return Err(ChannelError::IntegrityFailure);
            }
            record.payload.truncate(split);
        }
        self.keys.cipher.decrypt_in_place(record.seq, &mut record.payload);
        self.last_seq = record.seq;
        Ok(record)
    }
}

fn constant_time_eq(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y)) == 0
}

/// Both directions of an established channel.
///
/// The halves share only the immutable pad, so they can be split and driven
/// from separate threads.
pub struct RecordLayer {
    pub sender: RecordSender,
    pub receiver: RecordReceiver,
}

impl RecordLayer {
    pub fn new(established: &Established) -> Self {
        Self::from_key(established.session_key(), established.params(), established.role(), established.record_mac())
    }

    pub fn from_key(key: &SessionKey, params: PadParams, role: Role, record_mac: bool) -> Self {
        let pad = Arc::new(QppPad::generate(key, params));
        let (send_dir, recv_dir) = match role {
            Role::Client => (Direction::ClientToServer, Direction::ServerToClient),
            Role::Server => (Direction::ServerToClient, Direction::ClientToServer),
        };
        Self {
            sender: RecordSender {
                keys: DirectionKeys::new(pad.clone(), key, send_dir, record_mac),
                direction: send_dir,
                next_seq: send_dir.first_data_seq(),
            },
            receiver: RecordReceiver {
                keys: DirectionKeys::new(pad, key, recv_dir, record_mac),
                direction: recv_dir,
                last_seq: recv_dir.first_data_seq() - 1,
            },
        }
    }

    pub fn split(self) -> (RecordSender, RecordReceiver) {
        (self.sender, self.receiver)
    }
}

/// Stateless seal of one record in `direction` under `key`, using the
/// record's own sequence number.
pub fn seal(key: &SessionKey, params: PadParams, direction: Direction, record: &Record) -> Result<Vec<u8>, ChannelError> {
    let pad = Arc::new(QppPad::generate(key, params));
    let cipher = CipherSession::with_label(pad, key, direction.enc_label());
    let mut sealed = record.clone();
    cipher.encrypt_in_place(record.seq, &mut sealed.payload);
    Ok(encode_record(&sealed)?)
}

/// Stateless counterpart of [`seal`]; replay tracking is the caller's job.
pub fn open(key: &SessionKey, params: PadParams, direction: Direction, wire: &[u8]) -> Result<Record, ChannelError> {
    let mut record = decode_record(wire)?;
    let pad = Arc::new(QppPad::generate(key, params));
    CipherSession::with_label(pad, key, direction.enc_label()).decrypt_in_place(record.seq, &mut record.payload);
    Ok(record)
}

impl std::fmt::Debug for RecordSender {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RecordSender").field("direction", &self.direction).field("next_seq", &self.next_seq).finish()
    }
}

impl std::fmt::Debug for RecordReceiver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RecordReceiver").field("direction", &self.direction).field("last_seq", &self.last_seq).finish()
    }
}
