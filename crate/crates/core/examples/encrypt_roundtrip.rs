//! Encrypt and decrypt one record under every supported pad shape.

use qpp::keystream::SessionKey;
use qpp::qpp::{CipherSession, PadParams};

fn main() {
    let key = SessionKey::new(*b"an example key, 32 bytes long!!!");
    let message = b"attack at dawn, bring the permutation pads";

    for (n, m) in [(8, 64), (8, 256), (4, 8), (4, 16)] {
        let params = PadParams::new(n, m).expect("M divides 2^n");
        let session = CipherSession::new(&key, params);
        let seq = 42;
        let ciphertext = session.encrypt_record(seq, message);
        let recovered = session.decrypt_record(seq, &ciphertext);
        assert_eq!(recovered, message);
        println!("n={n} M={m:<3} {}", hex::encode(&ciphertext));
    }

    // Same key and plaintext, different record number: unrelated ciphertext.
    let session = CipherSession::new(&key, PadParams::default());
    let a = session.encrypt_record(1, message);
    let b = session.encrypt_record(2, message);
    let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    println!("seq 1 vs seq 2: {differing}/{} bytes differ", a.len());

    // Parameters where M does not divide 2^n are rejected.
    println!("n=8 M=48 -> {}", PadParams::new(8, 48).unwrap_err());
}
