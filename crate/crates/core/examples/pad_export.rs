//! Derive a pad, inspect a gate and round-trip the serialized form.

use qpp::keystream::SessionKey;
use qpp::qpp::{PadParams, QppPad};

fn main() {
    let key = SessionKey::new([7; 32]);
    let pad = QppPad::generate(&key, PadParams::DEFAULT_NIBBLE);

    for i in 0..pad.gate_count() {
        let gate = pad.gate(i);
        println!("gate {i}: {:?}  inverse {:?}", gate.as_slice(), gate.inverse().as_slice());
    }

    let bytes = pad.to_bytes();
    println!("serialized: {} bytes, header {}", bytes.len(), hex::encode(&bytes[..8]));
    let loaded = QppPad::from_bytes(&bytes).expect("valid pad file");
    assert_eq!(loaded, pad);

    let mut damaged = bytes.clone();
    damaged[8] = damaged[9];
    println!("duplicated entry -> {}", QppPad::from_bytes(&damaged).unwrap_err());
}
