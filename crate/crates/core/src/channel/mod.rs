//! Nested inner channel: KEM handshake, session key schedule and
//! permutation-pad record layer.
//!
//! The encoded records are opaque bytes to whatever carries them, which is
//! what lets the channel run inside an existing certified transport.
//! Handshake messages travel as type `0x01` records whose payload starts with
//! a two-byte message type.

pub mod handshake;
pub mod kem;
pub mod record;
pub mod wire;

use std::sync::Arc;

use thiserror::Error;

pub use handshake::{
    client_finish, client_init, derive_session_key, server_finish, server_respond, ClientHandshake,
    ClientHello, Established, Role, ServerHandshake, ServerHello, ServerSeeds,
};
pub use kem::{Kem, KemError, KemId, MockKem};
pub use record::{Direction, RecordLayer, RecordReceiver, RecordSender};
pub use wire::{decode_record, encode_record, DecodeError, Record, RecordHeader, RecordType};

use crate::qpp::PadParams;

#[derive(Clone)]
pub struct ChannelConfig {
    /// Offered (client) or supported (server) KEMs, in preference order.
    pub kems: Vec<Arc<dyn Kem>>,
    /// Pad parameters the client proposes. Servers adopt the client's choice.
    pub params: PadParams,
    /// Append an HMAC-SHA-256 tag to every data record. Off by default; both
    /// peers must agree.
    pub record_mac: bool,
}

impl ChannelConfig {
    pub fn new(kems: Vec<Arc<dyn Kem>>) -> Self {
        Self { kems, params: PadParams::default(), record_mac: false }
    }

    /// A configuration offering only the insecure mock KEM.
    pub fn insecure_demo() -> Self {
        Self::new(vec![Arc::new(MockKem::new(true))])
    }

    pub fn with_params(mut self, params: PadParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_record_mac(mut self, on: bool) -> Self {
        self.record_mac = on;
        self
    }

    pub fn kem(&self, id: KemId) -> Option<Arc<dyn Kem>> {
        self.kems.iter().find(|k| k.id() == id).cloned()
    }
}

impl std::fmt::Debug for ChannelConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChannelConfig")
            .field("kems", &self.kems.iter().map(|k| k.id()).collect::<Vec<_>>())
            .field("params", &self.params)
            .field("record_mac", &self.record_mac)
            .finish()
    }
}

/// One-byte alert codes carried in type `0x03` records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum AlertCode {
    CloseNotify = 0,
    UnexpectedMessage = 10,
    HandshakeFailure = 40,
    DecodeError = 50,
    AuthenticationFailed = 51,
    InternalError = 80,
}

impl AlertCode {
    pub fn from_byte(b: u8) -> Self {
        match b {
            0 => Self::CloseNotify,
            10 => Self::UnexpectedMessage,
            40 => Self::HandshakeFailure,
            50 => Self::DecodeError,
            51 => Self::AuthenticationFailed,
            _ => Self::InternalError,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::CloseNotify => "close_notify",
            Self::UnexpectedMessage => "unexpected_message",
            Self::HandshakeFailure => "handshake_failure",
            Self::DecodeError => "decode_error",
            Self::AuthenticationFailed => "authentication_failed",
            Self::InternalError => "internal_error",
        }
    }
}

impl std::fmt::Display for AlertCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("configuration offers no KEM")]
    NoKemConfigured,
    #[error("decode error: {0}")]
    Decode(#[from] DecodeError),
    #[error("handshake failure: {0}")]
    HandshakeFailure(&'static str),
    #[error("authentication failure: key confirmation did not verify")]
    AuthenticationFailed,
    #[error(transparent)]
    Kem(#[from] KemError),
    #[error("shared secret is empty")]
    EmptySharedSecret,
    #[error("replayed or out-of-order record: seq {got} after {last}")]
    Replay { last: u64, got: u64 },
    #[error("record payload of {0} bytes exceeds the limit")]
    PayloadTooLarge(usize),
    #[error("record integrity check failed")]
    IntegrityFailure,
    #[error("sequence numbers exhausted")]
    SequenceExhausted,
    #[error("unexpected {0:?} record")]
    UnexpectedRecord(RecordType),
    #[error("peer sent alert: {0}")]
    PeerAlert(AlertCode),
}

impl ChannelError {
    /// Alert to send to the peer when this error aborts a connection.
    pub fn alert(&self) -> AlertCode {
        match self {
            Self::Decode(_) | Self::PayloadTooLarge(_) => AlertCode::DecodeError,
            Self::HandshakeFailure(_) | Self::NoKemConfigured | Self::Kem(_) => AlertCode::HandshakeFailure,
            Self::AuthenticationFailed | Self::IntegrityFailure => AlertCode::AuthenticationFailed,
            Self::Replay { .. } | Self::UnexpectedRecord(_) => AlertCode::UnexpectedMessage,
            Self::EmptySharedSecret | Self::SequenceExhausted | Self::PeerAlert(_) => AlertCode::InternalError,
        }
    }
}
