//! Record framing.
//!
//! ```text
//! 0      2         3        4          12         16
//! +------+---------+--------+----------+----------+------------+
//! | "QP" | version | type   | seq (BE) | len (BE) | payload... |
//! +------+---------+--------+----------+----------+------------+
//! ```

use thiserror::Error;

pub const MAGIC: [u8; 2] = *b"QP";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 16;
pub const MAX_PAYLOAD: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("truncated: need {needed} bytes, have {have}")]
    Truncated { needed: usize, have: usize },
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 2]),
    #[error("unsupported version {0:#04x}")]
    BadVersion(u8),
    #[error("unknown record type {0:#04x}")]
    UnknownRecordType(u8),
    #[error("declared length {0} exceeds the 1 MiB limit")]
    Oversize(u64),
    #[error("{0} trailing bytes after message")]
    TrailingBytes(usize),
    #[error("unknown handshake message type {0:#06x}")]
    UnknownMessageType(u16),
    #[error("illegal parameter: {0}")]
    IllegalParameter(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum RecordType {
    Handshake = 0x01,
    Data = 0x02,
    Alert = 0x03,
    Confirm = 0x04,
}

impl TryFrom<u8> for RecordType {
    type Error = DecodeError;

    fn try_from(b: u8) -> Result<Self, DecodeError> {
        Ok(match b {
            0x01 => Self::Handshake,
            0x02 => Self::Data,
            0x03 => Self::Alert,
            0x04 => Self::Confirm,
            other => return Err(DecodeError::UnknownRecordType(other)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: RecordType,
    pub seq: u64,
    pub payload: Vec<u8>,
}

impl Record {
    pub fn new(kind: RecordType, seq: u64, payload: impl Into<Vec<u8>>) -> Self {
        Self { kind, seq, payload: payload.into() }
    }
}

/// A validated record header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecordHeader {
    pub kind: RecordType,
    pub seq: u64,
    pub len: usize,
}

impl RecordHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[..2].copy_from_slice(&MAGIC);
        h[2] = VERSION;
        h[3] = self.kind as u8;
        h[4..12].copy_from_slice(&self.seq.to_be_bytes());
        h[12..].copy_from_slice(&(self.len as u32).to_be_bytes());
        h
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        if bytes.len() < HEADER_LEN {
            return Err(DecodeError::Truncated { needed: HEADER_LEN, have: bytes.len() });
        }
        let magic = [bytes[0], bytes[1]];
        if magic != MAGIC {
            return Err(DecodeError::BadMagic(magic));
        }
        if bytes[2] != VERSION {
            return Err(DecodeError::BadVersion(bytes[2]));
        }
        let kind = RecordType::try_from(bytes[3])?;
        let seq = u64::from_be_bytes(bytes[4..12].try_into().unwrap());
        let len = u32::from_be_bytes(bytes[12..16].try_into().unwrap());
        if len as usize > MAX_PAYLOAD {
            return Err(DecodeError::Oversize(u64::from(len)));
        }
        Ok(Self { kind, seq, len: len as usize })
    }
}

pub fn encode_record(record: &Record) -> Result<Vec<u8>, DecodeError> {
    if record.payload.len() > MAX_PAYLOAD {
        return Err(DecodeError::Oversize(record.payload.len() as u64));
    }
    let header = RecordHeader { kind: record.kind, seq: record.seq, len: record.payload.len() };
    let mut out = Vec::with_capacity(HEADER_LEN + record.payload.len());
    out.extend_from_slice(&header.encode());
    out.extend_from_slice(&record.payload);
    Ok(out)
}

/// Decodes exactly one record; trailing bytes are an error.
pub fn decode_record(bytes: &[u8]) -> Result<Record, DecodeError> {
    let (record, used) = decode_prefix(bytes)?;
    if used != bytes.len() {
        return Err(DecodeError::TrailingBytes(bytes.len() - used));
    }
    Ok(record)
}

/// Decodes the first record of `bytes`, returning it and the bytes consumed.
pub fn decode_prefix(bytes: &[u8]) -> Result<(Record, usize), DecodeError> {
    let header = RecordHeader::decode(bytes)?;
    let end = HEADER_LEN + header.len;
    let payload = bytes
        .get(HEADER_LEN..end)
        .ok_or(DecodeError::Truncated { needed: end, have: bytes.len() })?;
    Ok((Record::new(header.kind, header.seq, payload), end))
}

/// Bounds-checked big-endian reader for handshake message bodies.
pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or(
            DecodeError::Truncated { needed: self.pos.saturating_add(n), have: self.bytes.len() },
        )?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub(crate) fn array<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        Ok(self.take(N)?.try_into().unwrap())
    }

    pub(crate) fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_be_bytes(self.array()?))
    }

    pub(crate) fn vec16(&mut self) -> Result<&'a [u8], DecodeError> {
        let len = usize::from(self.u16()?);
        self.take(len)
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.pos == self.bytes.len()
    }

    pub(crate) fn finish(self) -> Result<(), DecodeError> {
        match self.bytes.len() - self.pos {
            0 => Ok(()),
            n => Err(DecodeError::TrailingBytes(n)),
        }
    }
}

pub(crate) fn put_vec16(out: &mut Vec<u8>, data: &[u8]) -> Result<(), DecodeError> {
    let len = u16::try_from(data.len()).map_err(|_| DecodeError::IllegalParameter("field longer than 65535 bytes"))?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(data);
    Ok(())
}
