//! The three-message handshake driven by hand, then one record each way.

use qpp::channel::{
    client_finish, client_init, server_finish, server_respond, ChannelConfig, RecordLayer, RecordType, ServerSeeds,
};
use qpp::qpp::PadParams;

fn main() {
    // The mock KEM is insecure and exists only to exercise the protocol.
    let config = ChannelConfig::insecure_demo().with_params(PadParams::new(8, 256).unwrap());

    let (client, client_hello) = client_init(&config, &rand::random()).unwrap();
    let seeds = ServerSeeds { server_random: rand::random(), encapsulation: rand::random() };
    let (server, server_hello) = server_respond(&config, &client_hello, &seeds).unwrap();
    let (client, confirm) = client_finish(client, &server_hello).unwrap();
    let server = server_finish(server, &confirm).unwrap();

    println!("ClientHello {} bytes, ServerHello {} bytes", client_hello.len(), server_hello.len());
    println!("transcript  {}", hex::encode(client.transcript_hash()));
    println!("pad params  {:?}", server.params());
    assert_eq!(client.session_key().as_bytes(), server.session_key().as_bytes());

    let (mut c_send, mut c_recv) = RecordLayer::new(&client).split();
    let (mut s_send, mut s_recv) = RecordLayer::new(&server).split();

    let wire = c_send.seal(RecordType::Data, b"ping").unwrap();
    println!("c2s record  {}", hex::encode(&wire));
    assert_eq!(s_recv.open(&wire).unwrap().payload, b"ping");

    let wire = s_send.seal(RecordType::Data, b"pong").unwrap();
    assert_eq!(c_recv.open(&wire).unwrap().payload, b"pong");

    // Replaying a record is refused.
    println!("replay      {}", c_recv.open(&wire).unwrap_err());

    // A flipped bit in the server confirm tag aborts the handshake.
    let (client, hello) = client_init(&config, &[1; 32]).unwrap();
    let (_, mut reply) = server_respond(&config, &hello, &seeds).unwrap();
    *reply.last_mut().unwrap() ^= 1;
    println!("tampered    {}", client_finish(client, &reply).unwrap_err());
}
