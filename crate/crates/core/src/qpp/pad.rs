use std::fmt;

use super::gate::{invert_slice, is_bijection, PermutationGate};
use super::QppError;
use crate::keystream::{derive_subkey, KeystreamState, SessionKey, NONCE_LEN, PAD_LABEL};

const PAD_MAGIC: &[u8; 4] = b"QPPD";
const PAD_VERSION: u8 = 0x01;

/// Bits per cipher symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolBits {
    Four,
    Eight,
}

impl SymbolBits {
    pub fn from_bits(n: u8) -> Result<Self, QppError> {
        match n {
            4 => Ok(Self::Four),
            8 => Ok(Self::Eight),
            other => Err(QppError::UnsupportedSymbolBits(other)),
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            Self::Four => 4,
            Self::Eight => 8,
        }
    }

    /// Number of symbols a gate permutes, `2^n`.
    pub fn symbols(self) -> usize {
        1 << self.bits()
    }
}

/// Symbol width `n` and gate count `M`.
///
/// `M` must divide `2^n` so that a keystream nibble or byte reduced modulo
/// `M` selects every gate with equal probability.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadParams {
    bits: SymbolBits,
    gates: u16,
}

impl PadParams {
    pub const DEFAULT_BYTE: Self = Self { bits: SymbolBits::Eight, gates: 64 };
    pub const DEFAULT_NIBBLE: Self = Self { bits: SymbolBits::Four, gates: 8 };

    pub fn new(n: u8, m: u16) -> Result<Self, QppError> {
        let bits = SymbolBits::from_bits(n)?;
        let symbols = bits.symbols() as u16;
        if m == 0 || symbols % m != 0 {
            return Err(QppError::GateCountNotDivisor { n, m, symbols });
        }
        Ok(Self { bits, gates: m })
    }

    pub fn bits(&self) -> SymbolBits {
        self.bits
    }

    pub fn n(&self) -> u8 {
        self.bits.bits()
    }

    pub fn m(&self) -> u16 {
        self.gates
    }

    pub fn symbols(&self) -> usize {
        self.bits.symbols()
    }
}

impl Default for PadParams {
    fn default() -> Self {
        Self::DEFAULT_BYTE
    }
}

impl fmt::Debug for PadParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadParams(n={}, M={})", self.n(), self.m())
    }
}

/// The secret pad: `M` permutation gates plus their inverses.
///
/// Gates are stored back to back in one flat table so the cipher can index
/// `gate * 2^n + symbol` directly.
#[derive(Clone, PartialEq, Eq)]
pub struct QppPad {
    params: PadParams,
    forward: Vec<u8>,
    inverse: Vec<u8>,
}

impl QppPad {
    /// Expands `session_key` into `M` gates by Fisher-Yates shuffling.
    ///
    /// All gates come from one continuous keystream under the pad subkey and
    /// an all-zero nonce. Each gate starts as the identity and, for `i` from
    /// `2^n - 1` down to 1, swaps position `i` with a uniform `j <= i`.
    pub fn generate(session_key: &SessionKey, params: PadParams) -> Self {
        let subkey = derive_subkey(session_key, PAD_LABEL);
        let mut ks = KeystreamState::new(&subkey, &[0; NONCE_LEN]);
        let size = params.symbols();
        let mut forward = Vec::with_capacity(size * usize::from(params.m()));
        for _ in 0..params.m() {
            let start = forward.len();
            forward.extend((0..size).map(|i| i as u8));
            let gate = &mut forward[start..];
            for i in (1..size).rev() {
                let j = usize::from(ks.uniform_below(i as u16 + 1));
                gate.swap(i, j);
            }
        }
        Self::from_forward(params, forward)
    }

    fn from_forward(params: PadParams, forward: Vec<u8>) -> Self {
        let inverse = forward.chunks(params.symbols()).flat_map(invert_slice).collect();
        Self { params, forward, inverse }
    }

    /// Builds a pad from explicit gates, checking count, size and bijectivity.
    pub fn from_gates(params: PadParams, gates: &[PermutationGate]) -> Result<Self, QppError> {
        if gates.len() != usize::from(params.m()) {
            return Err(QppError::GateCountMismatch { expected: params.m(), found: gates.len() });
        }
        if gates.iter().any(|g| g.len() != params.symbols()) {
            return Err(QppError::NotBijective);
        }
        let forward = gates.iter().flat_map(|g| g.as_slice().iter().copied()).collect();
        Ok(Self::from_forward(params, forward))
    }

    pub fn params(&self) -> PadParams {
        self.params
    }

    pub fn gate_count(&self) -> usize {
        usize::from(self.params.m())
    }

    pub fn forward(&self, index: usize) -> &[u8] {
        let size = self.params.symbols();
        &self.forward[index * size..(index + 1) * size]
    }

    pub fn inverse(&self, index: usize) -> &[u8] {
        let size = self.params.symbols();
        &self.inverse[index * size..(index + 1) * size]
    }

    pub fn gate(&self, index: usize) -> PermutationGate {
        PermutationGate::from_trusted(self.forward(index).to_vec())
    }

    pub fn gates(&self) -> impl Iterator<Item = PermutationGate> + '_ {
        (0..self.gate_count()).map(|i| self.gate(i))
    }

    pub(crate) fn forward_table(&self) -> &[u8] {
        &self.forward
    }

    pub(crate) fn inverse_table(&self) -> &[u8] {
        &self.inverse
    }

    /// Serializes the gates for debugging.
    ///
    /// Layout: `"QPPD"`, version `0x01`, `n`, `M` as big-endian u16, then the
    /// gates in order. With `n = 8` every entry is one byte; with `n = 4` two
    /// entries share a byte, the earlier one in the high nibble. Inverse gates
    /// are not stored since they are recomputed on load.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.forward.len());
        out.extend_from_slice(PAD_MAGIC);
        out.push(PAD_VERSION);
        out.push(self.params.n());
        out.extend_from_slice(&self.params.m().to_be_bytes());
        match self.params.bits() {
            SymbolBits::Eight => out.extend_from_slice(&self.forward),
            SymbolBits::Four => {
                out.extend(self.forward.chunks(2).map(|pair| (pair[0] << 4) | pair[1]))
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, QppError> {
        let header = bytes.get(..8).ok_or(QppError::PadFile("truncated header"))?;
        if &header[..4] != PAD_MAGIC {
            return Err(QppError::PadFile("bad magic"));
        }
        if header[4] != PAD_VERSION {
            return Err(QppError::PadFile("unsupported version"));
        }
        let params = PadParams::new(header[5], u16::from_be_bytes([header[6], header[7]]))?;
        let entries = params.symbols() * usize::from(params.m());
        let body = &bytes[8..];
        let forward: Vec<u8> = match params.bits() {
            SymbolBits::Eight => body.to_vec(),
            SymbolBits::Four => body.iter().flat_map(|&b| [b >> 4, b & 0x0F]).collect(),
        };
        if forward.len() != entries {
            return Err(QppError::PadFile("body length does not match n and M"));
        }
        if !forward.chunks(params.symbols()).all(is_bijection) {
            return Err(QppError::NotBijective);
        }
        Ok(Self::from_forward(params, forward))
    }
}

impl fmt::Debug for QppPad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QppPad").field("params", &self.params).finish_non_exhaustive()
    }
}
