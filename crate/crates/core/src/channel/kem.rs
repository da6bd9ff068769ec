//! Key encapsulation interface and the insecure mock used for tests and demos.

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;
use zeroize::Zeroizing;

/// Two-byte algorithm code carried in hellos.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KemId(pub u16);

impl fmt::Debug for KemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KemId({:#06x})", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KemError {
    #[error("mock KEM is insecure; it only runs with the insecure-demo acknowledgement set")]
    InsecureNotAcknowledged,
    #[error("invalid {what} length {len}")]
    InvalidLength { what: &'static str, len: usize },
    #[error("KEM failure: {0}")]
    Other(String),
}

pub struct KemKeypair {
    pub public_key: Vec<u8>,
    pub secret_key: Zeroizing<Vec<u8>>,
}

pub struct Encapsulation {
    pub ciphertext: Vec<u8>,
    pub shared_secret: Zeroizing<Vec<u8>>,
}

/// A key encapsulation mechanism with seeded, deterministic operations.
///
/// Implementations must satisfy `decapsulate(sk, encapsulate(pk, s).ciphertext)
/// == encapsulate(pk, s).shared_secret` for every keypair from `keygen`.
pub trait Kem: Send + Sync {
    fn id(&self) -> KemId;
    fn name(&self) -> &str;
    fn public_key_len(&self) -> usize;
    fn keygen(&self, seed: &[u8; 32]) -> Result<KemKeypair, KemError>;
    fn encapsulate(&self, public_key: &[u8], seed: &[u8; 32]) -> Result<Encapsulation, KemError>;
    fn decapsulate(&self, secret_key: &[u8], ciphertext: &[u8]) -> Result<Zeroizing<Vec<u8>>, KemError>;
}

/// INSECURE stand-in KEM. The shared secret is computable from public values.
///
/// * keygen: `sk = seed`, `pk = SHA-256(sk)`
/// * encapsulate: `ct = seed`, `ss = SHA-256(pk || ct)`
/// * decapsulate: `ss = SHA-256(SHA-256(sk) || ct)`
///
/// Every operation fails unless the instance was built with the
/// acknowledgement flag set.
#[derive(Clone, Debug)]
pub struct MockKem {
    acknowledged: bool,
}

impl MockKem {
    pub const ID: KemId = KemId(0xFE01);

    pub fn new(insecure_acknowledged: bool) -> Self {
        Self { acknowledged: insecure_acknowledged }
    }

    fn check(&self) -> Result<(), KemError> {
        if self.acknowledged {
            Ok(())
        } else {
            Err(KemError::InsecureNotAcknowledged)
        }
    }
}

fn sha256_concat(a: &[u8], b: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(a);
    h.update(b);
    h.finalize().into()
}

impl Kem for MockKem {
    fn id(&self) -> KemId {
        Self::ID
    }

    fn name(&self) -> &str {
        "mock-insecure"
    }

    fn public_key_len(&self) -> usize {
        32
    }

    fn keygen(&self, seed: &[u8; 32]) -> Result<KemKeypair, KemError> {
        self.check()?;
        Ok(KemKeypair {
            public_key: Sha256::digest(seed).to_vec(),
            secret_key: Zeroizing::new(seed.to_vec()),
        })
    }

    fn encapsulate(&self, public_key: &[u8], seed: &[u8; 32]) -> Result<Encapsulation, KemError> {
        self.check()?;
        if public_key.len() != 32 {
            return Err(KemError::InvalidLength { what: "public key", len: public_key.len() });
        }
        Ok(Encapsulation {
            ciphertext: seed.to_vec(),
            shared_secret: Zeroizing::new(sha256_concat(public_key, seed).to_vec()),
        })
    }

    fn decapsulate(&self, secret_key: &[u8], ciphertext: &[u8]) -> Result<Zeroizing<Vec<u8>>, KemError> {
        self.check()?;
        if ciphertext.len() != 32 {
            return Err(KemError::InvalidLength { what: "ciphertext", len: ciphertext.len() });
        }
        let pk = Sha256::digest(secret_key);
        Ok(Zeroizing::new(sha256_concat(&pk, ciphertext).to_vec()))
    }
}
