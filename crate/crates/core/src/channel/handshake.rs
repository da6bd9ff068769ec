//! One round-trip KEM handshake with HMAC key confirmation.
//!
//! ```text
//! client                                   server
//!   ClientHello(random, kem_ids, pk, n/M)  ->
//!                                          <-  ServerHello(random, kem_id, ct, confirm)
//!   Confirm(HMAC(key, "cli-fin" || th))    ->
//! ```
//!
//! `th = SHA-256(ClientHello || ServerHello with confirm zeroed)` and the
//! session key is `HKDF-SHA-256(ss, info = "QPP-NESTED-v1" || th)`. The server
//! tag proves the server derived the same key; the client tag does the same
//! in the other direction before the server releases its key.

use std::sync::Arc;

use hmac::{Hmac, Mac};
use sha2::{Digest, Sha256};
use zeroize::Zeroizing;

use super::kem::{Kem, KemId};
use super::wire::{put_vec16, DecodeError, Reader};
use super::{ChannelConfig, ChannelError};
use crate::keystream::{hkdf_sha256, SessionKey};
use crate::qpp::PadParams;

pub const PROTOCOL_VERSION: u8 = 0x01;
pub const CLIENT_HELLO: u16 = 0x0001;
pub const SERVER_HELLO: u16 = 0x0002;
pub const EXT_PAD_PARAMS: u16 = 0x0001;

const SESSION_INFO: &[u8] = b"QPP-NESTED-v1";
const SERVER_FINISHED: &[u8] = b"srv-fin";
const CLIENT_FINISHED: &[u8] = b"cli-fin";
const CLIENT_RANDOM_INFO: &[u8] = b"QPP/client-random/v1";
const CONFIRM_LEN: usize = 32;

type HmacSha256 = Hmac<Sha256>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Client,
    Server,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClientHello {
    pub version: u8,
    pub client_random: [u8; 32],
    pub kem_ids: Vec<KemId>,
    pub kem_public_key: Vec<u8>,
    pub params: PadParams,
}

impl ClientHello {
    pub fn encode(&self) -> Result<Vec<u8>, DecodeError> {
        if self.kem_ids.is_empty() || self.kem_ids.len() > usize::from(u8::MAX) {
            return Err(DecodeError::IllegalParameter("kem_ids must hold 1..=255 entries"));
        }
        let mut out = Vec::with_capacity(80 + self.kem_public_key.len());
        out.extend_from_slice(&CLIENT_HELLO.to_be_bytes());
        out.push(self.version);
        out.extend_from_slice(&self.client_random);
        out.push(self.kem_ids.len() as u8);
        for id in &self.kem_ids {
            out.extend_from_slice(&id.0.to_be_bytes());
        }
        put_vec16(&mut out, &self.kem_public_key)?;
        let mut ext = Vec::with_capacity(7);
        ext.extend_from_slice(&EXT_PAD_PARAMS.to_be_bytes());
        ext.extend_from_slice(&3u16.to_be_bytes());
        ext.push(self.params.n());
        ext.extend_from_slice(&self.params.m().to_be_bytes());
        put_vec16(&mut out, &ext)?;
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let msg_type = r.u16()?;
        if msg_type != CLIENT_HELLO {
            return Err(DecodeError::UnknownMessageType(msg_type));
        }
        let version = r.u8()?;
        if version != PROTOCOL_VERSION {
            return Err(DecodeError::BadVersion(version));
        }
        let client_random = r.array()?;
        let count = r.u8()?;
        if count == 0 {
            return Err(DecodeError::IllegalParameter("empty kem list"));
        }
        let kem_ids = (0..count).map(|_| r.u16().map(KemId)).collect::<Result<_, _>>()?;
        let kem_public_key = r.vec16()?.to_vec();

        let mut params = None;
        let mut ext = Reader::new(r.vec16()?);
        while !ext.is_empty() {
            let ext_type = ext.u16()?;
            let body = ext.vec16()?;
            if ext_type == EXT_PAD_PARAMS {
                if params.is_some() {
                    return Err(DecodeError::IllegalParameter("duplicate pad parameter extension"));
                }
                let mut b = Reader::new(body);
                let (n, m) = (b.u8()?, b.u16()?);
                b.finish()?;
                params = Some(
                    PadParams::new(n, m)
                        .map_err(|_| DecodeError::IllegalParameter("invalid pad parameters"))?,
                );
            }
        }
        r.finish()?;
        Ok(Self {
            version,
            client_random,
            kem_ids,
            kem_public_key,
            params: params.unwrap_or_default(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServerHello {
    pub version: u8,
    pub server_random: [u8; 32],
    pub chosen_kem_id: KemId,
    pub kem_ciphertext: Vec<u8>,
    /// Reserved for a server signature; always empty for now.
    pub signature: Vec<u8>,
    pub server_confirm: [u8; CONFIRM_LEN],
}

impl ServerHello {
    pub fn encode(&self) -> Result<Vec<u8>, DecodeError> {
        let mut out = Vec::with_capacity(110 + self.kem_ciphertext.len() + self.signature.len());
        out.extend_from_slice(&SERVER_HELLO.to_be_bytes());
        out.push(self.version);
        out.extend_from_slice(&self.server_random);
        out.extend_from_slice(&self.chosen_kem_id.0.to_be_bytes());
        put_vec16(&mut out, &self.kem_ciphertext)?;
        put_vec16(&mut out, &self.signature)?;
        out.extend_from_slice(&self.server_confirm);
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let msg_type = r.u16()?;
        if msg_type != SERVER_HELLO {
            return Err(DecodeError::UnknownMessageType(msg_type));
        }
        let version = r.u8()?;
        if version != PROTOCOL_VERSION {
            return Err(DecodeError::BadVersion(version));
        }
        let hello = Self {
            version,
            server_random: r.array()?,
            chosen_kem_id: KemId(r.u16()?),
            kem_ciphertext: r.vec16()?.to_vec(),
            signature: r.vec16()?.to_vec(),
            server_confirm: r.array()?,
        };
        r.finish()?;
        Ok(hello)
    }

    /// Encoding with the confirm tag zeroed, as hashed into the transcript.
    fn transcript_bytes(&self) -> Result<Vec<u8>, DecodeError> {
        let mut bytes = self.encode()?;
        let len = bytes.len();
        bytes[len - CONFIRM_LEN..].fill(0);
        Ok(bytes)
    }
}

/// Result of a completed, confirmed handshake.
pub struct Established {
    role: Role,
    session_key: SessionKey,
    params: PadParams,
    transcript_hash: [u8; 32],
    record_mac: bool,
}

impl Established {
    pub fn role(&self) -> Role {
        self.role
    }

    pub fn session_key(&self) -> &SessionKey {
        &self.session_key
    }

    pub fn params(&self) -> PadParams {
        self.params
    }

    pub fn transcript_hash(&self) -> &[u8; 32] {
        &self.transcript_hash
    }

    pub fn record_mac(&self) -> bool {
        self.record_mac
    }
}

impl std::fmt::Debug for Established {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Established")
            .field("role", &self.role)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// Client state between sending ClientHello and receiving ServerHello.
pub struct ClientHandshake {
    kem: Arc<dyn Kem>,
    secret_key: Zeroizing<Vec<u8>>,
    hello_bytes: Vec<u8>,
    offered: Vec<KemId>,
    params: PadParams,
    record_mac: bool,
}

/// Server state after sending ServerHello, awaiting the client confirm tag.
pub struct ServerHandshake {
    session_key: SessionKey,
    params: PadParams,
    transcript_hash: [u8; 32],
    record_mac: bool,
}

/// Per-connection server randomness.
#[derive(Clone, Copy)]
pub struct ServerSeeds {
    pub server_random: [u8; 32],
    pub encapsulation: [u8; 32],
}

/// `HKDF-SHA-256(ikm = shared_secret, salt = empty, info = "QPP-NESTED-v1" || th)`.
pub fn derive_session_key(shared_secret: &[u8], transcript_hash: &[u8; 32]) -> Result<SessionKey, ChannelError> {
    if shared_secret.is_empty() {
        return Err(ChannelError::EmptySharedSecret);
    }
    let mut info = Vec::with_capacity(SESSION_INFO.len() + 32);
    info.extend_from_slice(SESSION_INFO);
    info.extend_from_slice(transcript_hash);
    Ok(SessionKey::new(hkdf_sha256(shared_secret, &info)))
}

pub fn transcript_hash(client_hello: &[u8], server_hello_zeroed: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(client_hello);
    h.update(server_hello_zeroed);
    h.finalize().into()
}

fn confirm_mac(key: &SessionKey, label: &[u8], th: &[u8; 32]) -> HmacSha256 {
    let mut mac = HmacSha256::new_from_slice(key.as_bytes()).expect("HMAC takes any key length");
    mac.update(label);
    mac.update(th);
    mac
}

fn confirm_tag(key: &SessionKey, label: &[u8], th: &[u8; 32]) -> [u8; CONFIRM_LEN] {
    confirm_mac(key, label, th).finalize().into_bytes().into()
}

fn verify_tag(key: &SessionKey, label: &[u8], th: &[u8; 32], tag: &[u8]) -> Result<(), ChannelError> {
    confirm_mac(key, label, th).verify_slice(tag).map_err(|_| ChannelError::AuthenticationFailed)
}

/// Starts a handshake; returns the client state and encoded ClientHello.
///
/// The first KEM in `config` is the one whose public key is sent. The KEM
/// keypair uses `key_seed` directly; the client random is derived from it.
pub fn client_init(config: &ChannelConfig, key_seed: &[u8; 32]) -> Result<(ClientHandshake, Vec<u8>), ChannelError> {
    let kem = config.kems.first().cloned().ok_or(ChannelError::NoKemConfigured)?;
    let keypair = kem.keygen(key_seed)?;
    let hello = ClientHello {
        version: PROTOCOL_VERSION,
        client_random: hkdf_sha256(key_seed, CLIENT_RANDOM_INFO),
        kem_ids: config.kems.iter().map(|k| k.id()).collect(),
        kem_public_key: keypair.public_key,
        params: config.params,
    };
    let hello_bytes = hello.encode()?;
    let state = ClientHandshake {
        kem,
        secret_key: keypair.secret_key,
        hello_bytes: hello_bytes.clone(),
        offered: hello.kem_ids,
        params: config.params,
        record_mac: config.record_mac,
    };
    Ok((state, hello_bytes))
}

/// Answers a ClientHello.
///
/// The server encapsulates to the key of the first offered KEM, which must
/// be one it supports; the other offered ids only express preference.
pub fn server_respond(
    config: &ChannelConfig,
    client_hello: &[u8],
    seeds: &ServerSeeds,
) -> Result<(ServerHandshake, Vec<u8>), ChannelError> {
    let hello = ClientHello::decode(client_hello)?;
    let kem = config
        .kem(hello.kem_ids[0])
        .ok_or(ChannelError::HandshakeFailure("no supported KEM in first position"))?;
    if hello.kem_public_key.len() != kem.public_key_len() {
        return Err(DecodeError::IllegalParameter("public key length does not match KEM").into());
    }
    let enc = kem.encapsulate(&hello.kem_public_key, &seeds.encapsulation)?;
    let mut reply = ServerHello {
        version: PROTOCOL_VERSION,
        server_random: seeds.server_random,
        chosen_kem_id: kem.id(),
        kem_ciphertext: enc.ciphertext,
        signature: Vec::new(),
        server_confirm: [0; CONFIRM_LEN],
    };
    let th = transcript_hash(client_hello, &reply.transcript_bytes()?);
    let session_key = derive_session_key(&enc.shared_secret, &th)?;
    reply.server_confirm = confirm_tag(&session_key, SERVER_FINISHED, &th);
    let state = ServerHandshake {
        session_key,
        params: hello.params,
        transcript_hash: th,
        record_mac: config.record_mac,
    };
    Ok((state, reply.encode()?))
}

/// Processes ServerHello. On success returns the established session and
/// the client confirm tag to send back.
pub fn client_finish(
    state: ClientHandshake,
    server_hello: &[u8],
) -> Result<(Established, [u8; CONFIRM_LEN]), ChannelError> {
    let hello = ServerHello::decode(server_hello)?;
    if !state.offered.contains(&hello.chosen_kem_id) {
        return Err(ChannelError::HandshakeFailure("server chose a KEM that was not offered"));
    }
    if hello.chosen_kem_id != state.kem.id() {
        return Err(ChannelError::HandshakeFailure("server chose a KEM without a key share"));
    }
    let th = transcript_hash(&state.hello_bytes, &hello.transcript_bytes()?);
    // A damaged ciphertext may not decapsulate at all; report it the same way
    // as a bad tag so the two cases are indistinguishable to the peer.
    let ss = state
        .kem
        .decapsulate(&state.secret_key, &hello.kem_ciphertext)
        .map_err(|_| ChannelError::AuthenticationFailed)?;
    let session_key = derive_session_key(&ss, &th)?;
    verify_tag(&session_key, SERVER_FINISHED, &th, &hello.server_confirm)?;
    let client_confirm = confirm_tag(&session_key, CLIENT_FINISHED, &th);
    let established = Established {
        role: Role::Client,
        session_key,
        params: state.params,
        transcript_hash: th,
        record_mac: state.record_mac,
    };
    Ok((established, client_confirm))
}

/// Verifies the client confirm tag and releases the session key.
pub fn server_finish(state: ServerHandshake, client_confirm: &[u8]) -> Result<Established, ChannelError> {
    verify_tag(&state.session_key, CLIENT_FINISHED, &state.transcript_hash, client_confirm)?;
    Ok(Established {
        role: Role::Server,
        session_key: state.session_key,
        params: state.params,
        transcript_hash: state.transcript_hash,
        record_mac: state.record_mac,
    })
}

impl ServerHandshake {
    pub fn params(&self) -> PadParams {
        self.params
    }
}
