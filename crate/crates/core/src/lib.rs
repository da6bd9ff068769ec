//! Permutation-pad encryption toolkit.
//!
//! * [`keystream`]: HKDF-SHA-256 subkeys and a position-tracking ChaCha20
//!   keystream that drives every random choice in the cipher.
//! * [`qpp`]: pad generation (Fisher-Yates shuffled permutation gates) and the
//!   randomize, dispatch and substitute record cipher.
//! * [`ent`]: the classic ENT byte statistics with exact chi-square p-values.
//! * [`channel`]: a KEM-based handshake with key confirmation and a record
//!   layer whose frames are opaque payloads for any outer transport.
//! * [`aes`]: portable table-based AES-256-CTR, used as the benchmark baseline
//!   and as the emulated outer layer.
//! * [`tunnel`]: TCP client/server that nests channel records inside an
//!   optional AES-256-CTR outer stream.
//! * [`bench`]: throughput and handshake-rate measurements.
//!
//! Runnable walkthroughs live in `examples/`; the `qpp` binary exposes the
//! same capabilities on the command line.

pub mod aes;
pub mod bench;
pub mod channel;
pub mod cli;
pub mod corpus;
pub mod ent;
pub mod keystream;
pub mod qpp;
pub mod tunnel;
