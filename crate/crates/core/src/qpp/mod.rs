//! Quantum permutation pad cipher, realized classically with permutation
//! arrays.
//!
//! A session key expands into `M` secret permutation gates over `n`-bit
//! symbols. Encryption XORs each symbol with a keystream mask, picks a gate
//! from a second keystream draw and substitutes through it. Decryption runs
//! the same keystream, dispatches to the transposed gate and removes the mask.
//!
//! ```
//! use qpp::keystream::SessionKey;
//! use qpp::qpp::{CipherSession, PadParams};
//!
//! let key = SessionKey::new([7; 32]);
//! let session = CipherSession::new(&key, PadParams::DEFAULT_BYTE);
//! let ct = session.encrypt_record(0, b"hello");
//! assert_eq!(session.decrypt_record(0, &ct), b"hello");
//! ```

mod cipher;
mod gate;
mod pad;

pub use cipher::{record_nonce, CipherSession};
pub use gate::{invert_gate, PermutationGate};
pub use pad::{PadParams, QppPad, SymbolBits};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QppError {
    #[error("unsupported symbol width n={0} (expected 4 or 8)")]
    UnsupportedSymbolBits(u8),
    #[error("gate count M={m} must be non-zero and divide 2^{n} = {symbols}")]
    GateCountNotDivisor { n: u8, m: u16, symbols: u16 },
    #[error("expected {expected} gates, found {found}")]
    GateCountMismatch { expected: u16, found: usize },
    #[error("mapping is not a bijection")]
    NotBijective,
    #[error("malformed pad file: {0}")]
    PadFile(&'static str),
}
