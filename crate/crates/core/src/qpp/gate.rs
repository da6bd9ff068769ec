use super::QppError;

/// A bijection on `0..len`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationGate(Vec<u8>);

impl PermutationGate {
    /// Validates that `mapping` is a permutation of `0..mapping.len()`.
    pub fn new(mapping: Vec<u8>) -> Result<Self, QppError> {
        if mapping.is_empty() || mapping.len() > 256 || !is_bijection(&mapping) {
            return Err(QppError::NotBijective);
        }
        Ok(Self(mapping))
    }

    pub fn identity(len: usize) -> Self {
        assert!((1..=256).contains(&len));
        Self((0..len).map(|i| i as u8).collect())
    }

    pub(crate) fn from_trusted(mapping: Vec<u8>) -> Self {
        debug_assert!(is_bijection(&mapping));
        Self(mapping)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.0[usize::from(x)]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(invert_slice(&self.0))
    }
}

/// Transposes a gate: the result maps `gate[x]` back to `x`.
pub fn invert_gate(mapping: &[u8]) -> Result<PermutationGate, QppError> {
    if mapping.is_empty() || mapping.len() > 256 || !is_bijection(mapping) {
        return Err(QppError::NotBijective);
    }
    Ok(PermutationGate(invert_slice(mapping)))
}

pub(crate) fn invert_slice(mapping: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; mapping.len()];
    for (x, &y) in mapping.iter().enumerate() {
        inv[usize::from(y)] = x as u8;
    }
    inv
}

pub(crate) fn is_bijection(mapping: &[u8]) -> bool {
    let mut seen = [false; 256];
    mapping.iter().all(|&y| {
        let y = usize::from(y);
        y < mapping.len() && !std::mem::replace(&mut seen[y], true)
    })
}
