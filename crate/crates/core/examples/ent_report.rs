//! ENT statistics of biased text before and after encryption.
//!
//! Pass a file path to analyse it instead of the built-in corpus.

use qpp::corpus::english_text;
use qpp::ent;
use qpp::keystream::SessionKey;
use qpp::qpp::{CipherSession, PadParams};

fn main() {
    let plaintext = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path).expect("readable file"),
        None => english_text(4 << 20, 7),
    };
    let session = CipherSession::new(&SessionKey::new([0x5A; 32]), PadParams::default());
    let ciphertext = session.encrypt_record(0, &plaintext);

    println!("== plaintext ==\n{}\n", ent::analyze(&plaintext).expect("non-empty input"));
    let report = ent::analyze(&ciphertext).expect("non-empty input");
    println!("== ciphertext ==\n{report}\n");
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
}
