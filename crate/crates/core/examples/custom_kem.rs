//! Plugging another KEM into the handshake.
//!
//! `XorKem` is a toy just like the built-in mock: it shows the trait
//! contract, not a secure construction. A real post-quantum KEM would
//! implement the same four operations.

use std::sync::Arc;

use qpp::channel::kem::{Encapsulation, KemKeypair};
use qpp::channel::{
    client_finish, client_init, server_finish, server_respond, ChannelConfig, Kem, KemError, KemId, MockKem,
    ServerSeeds,
};
use sha2::{Digest, Sha256};
use zeroize::Zeroizing;

struct XorKem;

impl Kem for XorKem {
    fn id(&self) -> KemId {
        KemId(0xFF42)
    }

    fn name(&self) -> &str {
        "toy-xor"
    }

    fn public_key_len(&self) -> usize {
        32
    }

    fn keygen(&self, seed: &[u8; 32]) -> Result<KemKeypair, KemError> {
        Ok(KemKeypair { public_key: Sha256::digest(seed).to_vec(), secret_key: Zeroizing::new(seed.to_vec()) })
    }

    fn encapsulate(&self, public_key: &[u8], seed: &[u8; 32]) -> Result<Encapsulation, KemError> {
        let ciphertext: Vec<u8> = public_key.iter().zip(seed).map(|(a, b)| a ^ b).collect();
        Ok(Encapsulation { ciphertext, shared_secret: Zeroizing::new(Sha256::digest(seed).to_vec()) })
    }

    fn decapsulate(&self, secret_key: &[u8], ciphertext: &[u8]) -> Result<Zeroizing<Vec<u8>>, KemError> {
        if ciphertext.len() != 32 {
            return Err(KemError::InvalidLength { what: "ciphertext", len: ciphertext.len() });
        }
        let public_key = Sha256::digest(secret_key);
        let seed: Vec<u8> = public_key.iter().zip(ciphertext).map(|(a, b)| a ^ b).collect();
        Ok(Zeroizing::new(Sha256::digest(seed).to_vec()))
    }
}

fn main() {
    // The client prefers the toy KEM; the server supports both.
    let client_cfg = ChannelConfig::new(vec![Arc::new(XorKem), Arc::new(MockKem::new(true))]);
    let server_cfg = ChannelConfig::new(vec![Arc::new(MockKem::new(true)), Arc::new(XorKem)]);

    let (client, hello) = client_init(&client_cfg, &rand::random()).unwrap();
    let seeds = ServerSeeds { server_random: rand::random(), encapsulation: rand::random() };
    let (server, reply) = server_respond(&server_cfg, &hello, &seeds).unwrap();
    let (c, confirm) = client_finish(client, &reply).unwrap();
    let s = server_finish(server, &confirm).unwrap();
    assert_eq!(c.session_key().as_bytes(), s.session_key().as_bytes());
    println!("negotiated {} and agreed on a session key", XorKem.name());

    // A server without the client's first choice refuses.
    let mock_only = ChannelConfig::insecure_demo();
    let (_, hello) = client_init(&client_cfg, &rand::random()).unwrap();
    match server_respond(&mock_only, &hello, &seeds) {
        Err(e) => println!("mock-only server: {e} (alert {})", e.alert()),
        Ok(_) => unreachable!(),
    }
}
