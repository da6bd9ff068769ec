//! TCP transport for the nested channel.
//!
//! Every frame on the socket is a channel record. Handshake records travel in
//! the clear (inside the outer layer, if any); data and alert records are
//! sealed by the record layer. With [`OuterLayer::Aes256Ctr`] each direction
//! of the connection starts with a 20-byte preamble (`"QOUT"` and a random
//! 16-byte IV) and everything after it is one continuous AES-256-CTR stream,
//! standing in for the certified outer transport.
//!
//! End of stream is signalled with a `close_notify` alert per direction, so a
//! connection supports half-close: each side keeps receiving until the peer's
//! alert arrives.

use std::io::{self, BufReader, Read, Write};
use std::net::{Shutdown, TcpStream, ToSocketAddrs};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use thiserror::Error;
use zeroize::Zeroizing;

use crate::aes::{Aes256Ctr, BLOCK_LEN};
use crate::channel::wire::{RecordHeader, HEADER_LEN};
use crate::channel::{
    client_finish, client_init, encode_record, server_finish, server_respond, AlertCode, ChannelConfig,
    ChannelError, Established, Record, RecordLayer, RecordReceiver, RecordSender, RecordType, ServerSeeds,
};

pub const OUTER_MAGIC: [u8; 4] = *b"QOUT";
pub const OUTER_PREAMBLE_LEN: usize = OUTER_MAGIC.len() + BLOCK_LEN;
pub const DEFAULT_READ_TIMEOUT: Duration = Duration::from_secs(30);

/// Plaintext bytes carried per data record.
pub const DATA_CHUNK: usize = 64 * 1024;

const CLIENT_HELLO_SEQ: u64 = 0;
const SERVER_HELLO_SEQ: u64 = 0;
const CONFIRM_SEQ: u64 = 1;

#[derive(Clone)]
pub enum OuterLayer {
    None,
    Aes256Ctr(Zeroizing<[u8; 32]>),
}

impl OuterLayer {
    pub fn aes(key: [u8; 32]) -> Self {
        Self::Aes256Ctr(Zeroizing::new(key))
    }
}

impl std::fmt::Debug for OuterLayer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "None",
            Self::Aes256Ctr(_) => "Aes256Ctr(..)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TunnelConfig {
    pub channel: ChannelConfig,
    pub outer: OuterLayer,
    /// Socket read timeout; `None` blocks indefinitely.
    pub read_timeout: Option<Duration>,
}

impl TunnelConfig {
    pub fn new(channel: ChannelConfig, outer: OuterLayer) -> Self {
        Self { channel, outer, read_timeout: Some(DEFAULT_READ_TIMEOUT) }
    }

    pub fn with_read_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.read_timeout = timeout;
        self
    }
}

#[derive(Debug, Error)]
pub enum TunnelError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("read timed out")]
    Timeout,
    #[error("connection closed before {0}")]
    UnexpectedEof(&'static str),
    #[error("outer layer: {0}")]
    Outer(&'static str),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

impl TunnelError {
    /// Process exit code: 3 for handshake, authentication and protocol
    /// failures, 4 for transport failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) | Self::Timeout | Self::UnexpectedEof(_) => 4,
            Self::Outer(_) | Self::Channel(_) => 3,
        }
    }

    fn from_io(e: io::Error, context: &'static str) -> Self {
        match e.kind() {
            io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => Self::Timeout,
            io::ErrorKind::UnexpectedEof => Self::UnexpectedEof(context),
            _ => Self::Io(e),
        }
    }
}

pub type Result<T, E = TunnelError> = std::result::Result<T, E>;

/// Writing half of the socket, applying the outer layer if configured.
struct FrameWriter {
    stream: TcpStream,
    outer: Option<Aes256Ctr>,
}

impl FrameWriter {
    fn new(stream: TcpStream, outer: &OuterLayer) -> Result<Self> {
        let mut writer = Self { stream, outer: None };
        if let OuterLayer::Aes256Ctr(key) = outer {
            let iv: [u8; BLOCK_LEN] = rand::random();
            let mut preamble = [0u8; OUTER_PREAMBLE_LEN];
            preamble[..4].copy_from_slice(&OUTER_MAGIC);
            preamble[4..].copy_from_slice(&iv);
            writer.stream.write_all(&preamble)?;
            writer.outer = Some(Aes256Ctr::new(key, &iv));
        }
        Ok(writer)
    }

    fn write_frame(&mut self, mut frame: Vec<u8>) -> Result<()> {
        if let Some(ctr) = &mut self.outer {
            ctr.apply_keystream(&mut frame);
        }
        self.stream.write_all(&frame)?;
        Ok(())
    }

    fn write_record(&mut self, record: &Record) -> Result<()> {
        self.write_frame(encode_record(record).map_err(ChannelError::from)?)
    }

    fn shutdown(&self) {
        let _ = self.stream.shutdown(Shutdown::Write);
    }
}

/// Reading half of the socket; yields framed (still sealed) records.
struct FrameReader {
    stream: BufReader<TcpStream>,
    outer_key: Option<Zeroizing<[u8; 32]>>,
    outer: Option<Aes256Ctr>,
}

impl FrameReader {
    fn new(stream: TcpStream, outer: &OuterLayer) -> Self {
        let outer_key = match outer {
            OuterLayer::None => None,
            OuterLayer::Aes256Ctr(k) => Some(k.clone()),
        };
        Self { stream: BufReader::with_capacity(1 << 16, stream), outer_key, outer: None }
    }

    /// Reads exactly `buf.len()` bytes. Returns `false` on EOF before the
    /// first byte when `eof_ok` is set.
    fn read_exact_or_eof(&mut self, buf: &mut [u8], eof_ok: bool, context: &'static str) -> Result<bool> {
        let mut filled = 0;
        while filled < buf.len() {
            match self.stream.read(&mut buf[filled..]) {
                Ok(0) if filled == 0 && eof_ok => return Ok(false),
                Ok(0) => return Err(TunnelError::UnexpectedEof(context)),
                Ok(n) => filled += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(TunnelError::from_io(e, context)),
            }
        }
        Ok(true)
    }

    fn start_outer(&mut self) -> Result<()> {
        if self.outer.is_some() {
            return Ok(());
        }
        let Some(key) = self.outer_key.take() else { return Ok(()) };
        let mut preamble = [0u8; OUTER_PREAMBLE_LEN];
        self.read_exact_or_eof(&mut preamble, false, "outer preamble")?;
        if preamble[..4] != OUTER_MAGIC {
            return Err(TunnelError::Outer("missing preamble"));
        }
        self.outer = Some(Aes256Ctr::new(&key, preamble[4..].try_into().unwrap()));
        Ok(())
    }

    /// Next record, or `None` on a clean EOF at a record boundary.
    fn read_record(&mut self, context: &'static str) -> Result<Option<Record>> {
        self.start_outer()?;
        let mut header = [0u8; HEADER_LEN];
        if !self.read_exact_or_eof(&mut header, true, context)? {
            return Ok(None);
        }
        if let Some(ctr) = &mut self.outer {
            ctr.apply_keystream(&mut header);
        }
        let header = RecordHeader::decode(&header).map_err(ChannelError::from)?;
        let mut payload = vec![0u8; header.len];
        self.read_exact_or_eof(&mut payload, false, context)?;
        if let Some(ctr) = &mut self.outer {
            ctr.apply_keystream(&mut payload);
        }
        Ok(Some(Record::new(header.kind, header.seq, payload)))
    }

    fn expect_record(&mut self, context: &'static str) -> Result<Record> {
        self.read_record(context)?.ok_or(TunnelError::UnexpectedEof(context))
    }
}

fn alert_record(seq: u64, code: AlertCode) -> Record {
    Record::new(RecordType::Alert, seq, vec![code as u8])
}

fn peer_alert(record: &Record) -> TunnelError {
    let code = record.payload.first().copied().map_or(AlertCode::DecodeError, AlertCode::from_byte);
    ChannelError::PeerAlert(code).into()
}

fn expect_kind(record: &Record, kind: RecordType, seq: u64) -> Result<()> {
    if record.kind == RecordType::Alert {
        return Err(peer_alert(record));
    }
    if record.kind != kind || record.seq != seq {
        return Err(ChannelError::UnexpectedRecord(record.kind).into());
    }
    Ok(())
}

/// Sends a best-effort plaintext alert for a failed handshake and passes the
/// error through.
fn fail_handshake(writer: &mut FrameWriter, seq: u64, err: TunnelError) -> TunnelError {
    if let TunnelError::Channel(e) = &err {
        if !matches!(e, ChannelError::PeerAlert(_)) {
            let _ = writer.write_record(&alert_record(seq, e.alert()));
        }
    }
    writer.shutdown();
    err
}

fn prepare(stream: &TcpStream, config: &TunnelConfig) -> Result<(FrameWriter, FrameReader)> {
    stream.set_read_timeout(config.read_timeout)?;
    stream.set_nodelay(true)?;
    let writer = FrameWriter::new(stream.try_clone()?, &config.outer)?;
    let reader = FrameReader::new(stream.try_clone()?, &config.outer);
    Ok((writer, reader))
}

/// Connects to `addr` and runs the client side of the handshake.
pub fn connect(addr: impl ToSocketAddrs, config: &TunnelConfig) -> Result<TunnelConnection> {
    client_handshake(TcpStream::connect(addr)?, config)
}

pub fn client_handshake(stream: TcpStream, config: &TunnelConfig) -> Result<TunnelConnection> {
    let (mut writer, mut reader) = prepare(&stream, config)?;
    let run = |writer: &mut FrameWriter, reader: &mut FrameReader| -> Result<Established> {
        let (state, hello) = client_init(&config.channel, &rand::random())?;
        writer.write_record(&Record::new(RecordType::Handshake, CLIENT_HELLO_SEQ, hello))?;
        let reply = reader.expect_record("ServerHello")?;
        expect_kind(&reply, RecordType::Handshake, SERVER_HELLO_SEQ)?;
        let (established, confirm) = client_finish(state, &reply.payload)?;
        writer.write_record(&Record::new(RecordType::Confirm, CONFIRM_SEQ, confirm.to_vec()))?;
        Ok(established)
    };
    match run(&mut writer, &mut reader) {
        Ok(established) => Ok(TunnelConnection::new(established, writer, reader)),
        Err(e) => Err(fail_handshake(&mut writer, CONFIRM_SEQ, e)),
    }
}

/// Runs the server side of the handshake on an accepted stream.
pub fn accept(stream: TcpStream, config: &TunnelConfig) -> Result<TunnelConnection> {
    let (mut writer, mut reader) = prepare(&stream, config)?;
    let run = |writer: &mut FrameWriter, reader: &mut FrameReader| -> Result<Established> {
        let hello = reader.expect_record("ClientHello")?;
        expect_kind(&hello, RecordType::Handshake, CLIENT_HELLO_SEQ)?;
        let seeds = ServerSeeds { server_random: rand::random(), encapsulation: rand::random() };
        let (state, reply) = server_respond(&config.channel, &hello.payload, &seeds)?;
        writer.write_record(&Record::new(RecordType::Handshake, SERVER_HELLO_SEQ, reply))?;
        let confirm = reader.expect_record("client confirm")?;
        expect_kind(&confirm, RecordType::Confirm, CONFIRM_SEQ)?;
        Ok(server_finish(state, &confirm.payload)?)
    };
    match run(&mut writer, &mut reader) {
        Ok(established) => Ok(TunnelConnection::new(established, writer, reader)),
        Err(e) => Err(fail_handshake(&mut writer, SERVER_HELLO_SEQ + 1, e)),
    }
}

/// An established tunnel connection.
pub struct TunnelConnection {
    established: Established,
    writer: SecureWriter,
    reader: SecureReader,
}

impl TunnelConnection {
    fn new(established: Established, frames_out: FrameWriter, frames_in: FrameReader) -> Self {
        let (sender, receiver) = RecordLayer::new(&established).split();
        Self {
            established,
            writer: SecureWriter { frames: frames_out, records: sender, closed: false },
            reader: SecureReader { frames: frames_in, records: receiver, finished: false },
        }
    }

    pub fn established(&self) -> &Established {
        &self.established
    }

    pub fn send(&mut self, data: &[u8]) -> Result<()> {
        self.writer.send(data)
    }

    pub fn recv(&mut self) -> Result<Option<Vec<u8>>> {
        self.reader.recv()
    }

    pub fn close(&mut self) -> Result<()> {
        self.writer.close()
    }

    /// Splits into independently owned halves, e.g. for two threads.
    pub fn split(self) -> (SecureWriter, SecureReader) {
        (self.writer, self.reader)
    }
}

impl std::fmt::Debug for TunnelConnection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TunnelConnection").field("established", &self.established).finish_non_exhaustive()
    }
}

pub struct SecureWriter {
    frames: FrameWriter,
    records: RecordSender,
    closed: bool,
}

impl SecureWriter {
    /// Seals `data` into as many data records as needed.
    pub fn send(&mut self, data: &[u8]) -> Result<()> {
        for chunk in data.chunks(DATA_CHUNK) {
            let wire = self.records.seal(RecordType::Data, chunk)?;
            self.frames.write_frame(wire)?;
        }
        Ok(())
    }

    /// Sends `close_notify` and shuts down the socket's write half.
    pub fn close(&mut self) -> Result<()> {
        self.alert(AlertCode::CloseNotify)
    }

    /// Sends a fatal alert and shuts down the write half.
    pub fn alert(&mut self, code: AlertCode) -> Result<()> {
        if self.closed {
            return Ok(());
        }
        self.closed = true;
        let wire = self.records.seal(RecordType::Alert, &[code as u8])?;
        let result = self.frames.write_frame(wire);
        self.frames.shutdown();
        result
    }
}

pub struct SecureReader {
    frames: FrameReader,
    records: RecordReceiver,
    finished: bool,
}

impl SecureReader {
    /// Next chunk of application data, or `None` once the peer has sent
    /// `close_notify`. Any other alert is returned as an error.
    pub fn recv(&mut self) -> Result<Option<Vec<u8>>> {
        loop {
            if self.finished {
                return Ok(None);
            }
            let record = self.frames.expect_record("close_notify")?;
            let record = self.records.open_record(record)?;
            match record.kind {
                RecordType::Data if record.payload.is_empty() => continue,
                RecordType::Data => return Ok(Some(record.payload)),
                RecordType::Alert => {
                    return match record.payload.as_slice() {
                        [0] => {
                            self.finished = true;
                            Ok(None)
                        }
                        _ => Err(peer_alert(&record)),
                    }
                }
                other => return Err(ChannelError::UnexpectedRecord(other).into()),
            }
        }
    }
}

/// Byte counts of one relayed session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RelayStats {
    pub sent: u64,
    pub received: u64,
}

/// Copies `input` into the tunnel until EOF, then sends `close_notify`.
pub fn pump_in(writer: &mut SecureWriter, mut input: impl Read) -> Result<u64> {
    let mut buf = vec![0u8; DATA_CHUNK];
    let mut total = 0u64;
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => {
                let _ = writer.alert(AlertCode::InternalError);
                return Err(e.into());
            }
        };
        writer.send(&buf[..n])?;
        total += n as u64;
    }
    writer.close()?;
    Ok(total)
}

/// Copies tunnel data into `output` until the peer's `close_notify`.
pub fn pump_out(reader: &mut SecureReader, mut output: impl Write) -> Result<u64> {
    let mut total = 0u64;
    while let Some(chunk) = reader.recv()? {
        output.write_all(&chunk)?;
        total += chunk.len() as u64;
    }
    output.flush()?;
    Ok(total)
}

/// Relays `input` to the peer and the peer's data to `output`, returning
/// once both directions are closed.
///
/// The input side runs on its own thread. A failure on the receiving side
/// returns immediately without waiting for `input` to reach EOF.
pub fn relay(
    conn: TunnelConnection,
    input: impl Read + Send + 'static,
    output: impl Write,
) -> Result<RelayStats> {
    let (mut writer, mut reader) = conn.split();
    let sender = thread::spawn(move || pump_in(&mut writer, input));
    let received = pump_out(&mut reader, output)?;
    let sent = sender.join().map_err(|_| TunnelError::Outer("sender thread panicked"))??;
    Ok(RelayStats { sent, received })
}

/// What a server does with each connection's data.
#[derive(Clone, Debug)]
pub enum ServerMode {
    /// Send every received chunk straight back.
    Echo,
    /// Write received data to this process's stdout; nothing is sent back.
    Stdout,
    /// Open a TCP connection to the address and relay both directions.
    Forward(String),
}

/// Handles one accepted connection to completion.
pub fn serve_connection(stream: TcpStream, config: &TunnelConfig, mode: &ServerMode) -> Result<RelayStats> {
    let conn = accept(stream, config)?;
    match mode {
        ServerMode::Echo => echo(conn),
        ServerMode::Stdout => {
            let (mut writer, mut reader) = conn.split();
            let received = pump_out(&mut reader, StdoutSink)?;
            writer.close()?;
            Ok(RelayStats { sent: 0, received })
        }
        ServerMode::Forward(target) => {
            let upstream = TcpStream::connect(target.as_str())?;
            let upstream_read = upstream.try_clone()?;
            let (mut writer, mut reader) = conn.split();
            let sender = thread::spawn(move || pump_in(&mut writer, upstream_read));
            let received = pump_out(&mut reader, &upstream);
            let _ = upstream.shutdown(Shutdown::Write);
            let received = received?;
            let sent = sender.join().map_err(|_| TunnelError::Outer("sender thread panicked"))??;
            Ok(RelayStats { sent, received })
        }
    }
}

fn echo(conn: TunnelConnection) -> Result<RelayStats> {
    let (mut writer, mut reader) = conn.split();
    let mut stats = RelayStats::default();
    let outcome = (|| {
        while let Some(chunk) = reader.recv()? {
            stats.received += chunk.len() as u64;
            writer.send(&chunk)?;
            stats.sent += chunk.len() as u64;
        }
        writer.close()
    })();
    if let Err(TunnelError::Channel(e)) = &outcome {
        let _ = writer.alert(e.alert());
    }
    outcome.map(|()| stats)
}

/// Stdout shared by concurrent connections; each chunk is written under the
/// lock so chunks never interleave mid-way.
struct StdoutSink;

static STDOUT_LOCK: Mutex<()> = Mutex::new(());

impl Write for StdoutSink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let _guard = STDOUT_LOCK.lock().unwrap_or_else(|e| e.into_inner());
        io::stdout().write_all(buf)?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        io::stdout().flush()
    }
}

/// Accept loop: one thread per connection, each with its own handshake and
/// record state. Per-connection outcomes go to `on_done`.
pub fn serve(
    listener: std::net::TcpListener,
    config: Arc<TunnelConfig>,
    mode: ServerMode,
    on_done: impl Fn(std::net::SocketAddr, Result<RelayStats>) + Send + Sync + 'static,
) -> Result<()> {
    let on_done = Arc::new(on_done);
    for stream in listener.incoming() {
        let stream = stream?;
        let peer = stream.peer_addr()?;
        let (config, mode, on_done) = (config.clone(), mode.clone(), on_done.clone());
        thread::spawn(move || on_done(peer, serve_connection(stream, &config, &mode)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::kem::{Encapsulation, KemKeypair};
    use crate::channel::{Kem, KemError, KemId, MockKem};
    use std::net::TcpListener;

    fn spawn_server(config: TunnelConfig, mode: ServerMode) -> (String, thread::JoinHandle<Result<RelayStats>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let handle = thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            serve_connection(stream, &config, &mode)
        });
        (addr, handle)
    }

    fn config(outer: OuterLayer) -> TunnelConfig {
        TunnelConfig::new(ChannelConfig::insecure_demo(), outer).with_read_timeout(Some(Duration::from_secs(10)))
    }

    fn echo_roundtrip(outer: OuterLayer) {
        let (addr, server) = spawn_server(config(outer.clone()), ServerMode::Echo);
        let conn = connect(&addr, &config(outer)).unwrap();
        let data: Vec<u8> = (0..300_000u32).map(|i| (i * 7 + i / 256) as u8).collect();
        let mut out = Vec::new();
        let stats = relay(conn, io::Cursor::new(data.clone()), &mut out).unwrap();
        assert_eq!(out, data);
        assert_eq!(stats, RelayStats { sent: data.len() as u64, received: data.len() as u64 });
        assert_eq!(server.join().unwrap().unwrap().received, data.len() as u64);
    }

    #[test]
    fn echo_plain() {
        echo_roundtrip(OuterLayer::None);
    }

    #[test]
    fn echo_with_outer_aes() {
        echo_roundtrip(OuterLayer::aes([9; 32]));
    }

    #[test]
    fn empty_stream_closes_cleanly() {
        let (addr, server) = spawn_server(config(OuterLayer::None), ServerMode::Echo);
        let conn = connect(&addr, &config(OuterLayer::None)).unwrap();
        let mut out = Vec::new();
        assert_eq!(relay(conn, io::empty(), &mut out).unwrap(), RelayStats::default());
        assert!(server.join().unwrap().is_ok());
    }

    #[test]
    fn outer_key_mismatch_fails_both_sides() {
        let (addr, server) = spawn_server(config(OuterLayer::aes([1; 32])), ServerMode::Echo);
        let err = connect(&addr, &config(OuterLayer::aes([2; 32]))).unwrap_err();
        assert_eq!(err.exit_code(), 3, "{err}");
        let err = server.join().unwrap().unwrap_err();
        assert!(matches!(err, TunnelError::Channel(ChannelError::Decode(_))), "{err}");
    }

    #[test]
    fn unsupported_kem_is_reported_to_client() {
        struct Other(MockKem);
        impl Kem for Other {
            fn id(&self) -> KemId {
                KemId(0x7777)
            }
            fn name(&self) -> &str {
                "other"
            }
            fn public_key_len(&self) -> usize {
                self.0.public_key_len()
            }
            fn keygen(&self, seed: &[u8; 32]) -> Result<KemKeypair, KemError> {
                self.0.keygen(seed)
            }
            fn encapsulate(&self, pk: &[u8], seed: &[u8; 32]) -> Result<Encapsulation, KemError> {
                self.0.encapsulate(pk, seed)
            }
            fn decapsulate(&self, sk: &[u8], ct: &[u8]) -> Result<Zeroizing<Vec<u8>>, KemError> {
                self.0.decapsulate(sk, ct)
            }
        }
        let (addr, server) = spawn_server(config(OuterLayer::None), ServerMode::Echo);
        let client = TunnelConfig::new(ChannelConfig::new(vec![Arc::new(Other(MockKem::new(true)))]), OuterLayer::None);
        let err = connect(&addr, &client).unwrap_err();
        assert!(
            matches!(err, TunnelError::Channel(ChannelError::PeerAlert(AlertCode::HandshakeFailure))),
            "{err}"
        );
        assert!(server.join().unwrap().is_err());
    }

    #[test]
    fn read_timeout_is_enforced() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let _silent = thread::spawn(move || {
            let (s, _) = listener.accept().unwrap();
            thread::sleep(Duration::from_secs(2));
            drop(s);
        });
        let cfg = config(OuterLayer::None).with_read_timeout(Some(Duration::from_millis(200)));
        let err = connect(addr, &cfg).unwrap_err();
        assert!(matches!(err, TunnelError::Timeout), "{err}");
        assert_eq!(err.exit_code(), 4);
    }
}
