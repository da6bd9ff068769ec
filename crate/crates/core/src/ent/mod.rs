//! Byte-level randomness statistics in the style of the classic `ent` tool.
//!
//! Six figures are reported: Shannon entropy per byte, the chi-square
//! statistic over the 256-bin histogram with its upper-tail p-value, the
//! arithmetic mean, a Monte Carlo estimate of π and the lag-1 serial
//! correlation coefficient.
//!
//! Monte Carlo π reads successive 6-byte groups as two 24-bit coordinates and
//! counts points with `x² + y² <= (2^24 - 1)²`. Serial correlation pairs the
//! last byte with the first. Both follow `ent` so results are comparable with
//! its output.

mod gamma;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

pub use gamma::{gamma_p, gamma_q, ln_gamma};

/// Degrees of freedom of the byte histogram chi-square test.
pub const BYTE_DOF: u32 = 255;

const MC_COORD_BYTES: usize = 3;
const MC_GROUP: usize = 2 * MC_COORD_BYTES;
const MC_RADIUS: u64 = (1 << 24) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntError {
    #[error("no data")]
    Empty,
    #[error("insufficient data: need at least {needed} bytes, have {have}")]
    InsufficientData { needed: u64, have: u64 },
    #[error("undefined: all bytes are equal (zero variance)")]
    ZeroVariance,
}

/// Exact 256-bin byte histogram; merging chunk histograms is order-independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ByteHistogram {
    counts: [u64; 256],
    total: u64,
}

impl Default for ByteHistogram {
    fn default() -> Self {
        Self { counts: [0; 256], total: 0 }
    }
}

impl ByteHistogram {
    pub fn from_bytes(data: &[u8]) -> Self {
        let mut h = Self::default();
        h.update(data);
        h
    }

    pub fn update(&mut self, data: &[u8]) {
        for &b in data {
            self.counts[usize::from(b)] += 1;
        }
        self.total += data.len() as u64;
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn non_empty(&self) -> Result<(), EntError> {
        if self.total == 0 {
            Err(EntError::Empty)
        } else {
            Ok(())
        }
    }

    pub fn entropy(&self) -> Result<f64, EntError> {
        self.non_empty()?;
        let n = self.total as f64;
        Ok(self
            .counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum::<f64>()
            .max(0.0))
    }

    pub fn chi_square(&self) -> Result<f64, EntError> {
        self.non_empty()?;
        let expected = self.total as f64 / 256.0;
        Ok(self
            .counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum())
    }

    pub fn mean(&self) -> Result<f64, EntError> {
        self.non_empty()?;
        Ok(self.sum() as f64 / self.total as f64)
    }

    fn sum(&self) -> u128 {
        self.counts.iter().enumerate().map(|(v, &c)| v as u128 * u128::from(c)).sum()
    }

    fn sum_squares(&self) -> u128 {
        self.counts.iter().enumerate().map(|(v, &c)| (v * v) as u128 * u128::from(c)).sum()
    }
}

/// Shannon entropy in bits per byte.
pub fn entropy(data: &[u8]) -> Result<f64, EntError> {
    ByteHistogram::from_bytes(data).entropy()
}

/// Chi-square statistic of the byte histogram against the uniform expectation.
pub fn chi_square(data: &[u8]) -> Result<f64, EntError> {
    ByteHistogram::from_bytes(data).chi_square()
}

/// Probability that a chi-square variate with `dof` degrees of freedom
/// exceeds `chi2`, i.e. `Q(dof/2, chi2/2)`.
pub fn chi_square_p_value(chi2: f64, dof: u32) -> f64 {
    assert!(dof >= 1, "degrees of freedom must be positive");
    gamma_q(f64::from(dof) / 2.0, chi2.max(0.0) / 2.0).clamp(0.0, 1.0)
}

pub fn mean(data: &[u8]) -> Result<f64, EntError> {
    ByteHistogram::from_bytes(data).mean()
}

pub fn monte_carlo_pi(data: &[u8]) -> Result<f64, EntError> {
    let mut acc = EntAccumulator::new();
    acc.update(data);
    acc.monte_carlo_pi()
}

pub fn serial_correlation(data: &[u8]) -> Result<f64, EntError> {
    let mut acc = EntAccumulator::new();
    acc.update(data);
    acc.serial_correlation()
}

pub fn analyze(data: &[u8]) -> Result<EntReport, EntError> {
    let mut acc = EntAccumulator::new();
    acc.update(data);
    acc.finish()
}

/// Streaming computation of all six statistics.
///
/// Feed bytes in order with [`update`](Self::update); chunking does not change
/// the result.
#[derive(Clone, Debug)]
pub struct EntAccumulator {
    histogram: ByteHistogram,
    mc_pending: [u8; MC_GROUP],
    mc_pending_len: usize,
    mc_inside: u64,
    mc_points: u64,
    first: Option<u8>,
    last: u8,
    lag_products: u128,
}

impl Default for EntAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl EntAccumulator {
    pub fn new() -> Self {
        Self {
            histogram: ByteHistogram::default(),
            mc_pending: [0; MC_GROUP],
            mc_pending_len: 0,
            mc_inside: 0,
            mc_points: 0,
            first: None,
            last: 0,
            lag_products: 0,
        }
    }

    pub fn update(&mut self, data: &[u8]) {
        let Some((&head, _)) = data.split_first() else {
            return;
        };
        self.histogram.update(data);

        match self.first {
            None => self.first = Some(head),
            Some(_) => self.lag_products += u128::from(self.last) * u128::from(head),
        }
        let mut prev = head;
        let mut products: u64 = 0;
        for &b in &data[1..] {
            products += u64::from(prev) * u64::from(b);
            prev = b;
        }
        self.lag_products += u128::from(products);
        self.last = prev;

        let mut rest = data;
        if self.mc_pending_len > 0 {
            let take = (MC_GROUP - self.mc_pending_len).min(rest.len());
            self.mc_pending[self.mc_pending_len..self.mc_pending_len + take]
                .copy_from_slice(&rest[..take]);
            self.mc_pending_len += take;
            rest = &rest[take..];
            if self.mc_pending_len < MC_GROUP {
                return;
            }
            let group = self.mc_pending;
            self.mc_point(&group);
            self.mc_pending_len = 0;
        }
        let mut groups = rest.chunks_exact(MC_GROUP);
        for group in &mut groups {
            self.mc_point(group);
        }
        let tail = groups.remainder();
        self.mc_pending[..tail.len()].copy_from_slice(tail);
        self.mc_pending_len = tail.len();
    }

    fn mc_point(&mut self, group: &[u8]) {
        let coord = |b: &[u8]| u64::from(b[0]) << 16 | u64::from(b[1]) << 8 | u64::from(b[2]);
        let x = coord(&group[..MC_COORD_BYTES]);
        let y = coord(&group[MC_COORD_BYTES..]);
        self.mc_points += 1;
        if x * x + y * y <= MC_RADIUS * MC_RADIUS {
            self.mc_inside += 1;
        }
    }

    pub fn histogram(&self) -> &ByteHistogram {
        &self.histogram
    }

    pub fn byte_count(&self) -> u64 {
        self.histogram.total
    }

    pub fn monte_carlo_pi(&self) -> Result<f64, EntError> {
        if self.mc_points == 0 {
            return Err(EntError::InsufficientData {
                needed: MC_GROUP as u64,
                have: self.byte_count(),
            });
        }
        Ok(4.0 * self.mc_inside as f64 / self.mc_points as f64)
    }

    /// `(N Σ x_i x_{i+1} - (Σx)²) / (N Σx² - (Σx)²)` with wraparound.
    pub fn serial_correlation(&self) -> Result<f64, EntError> {
        let n = self.byte_count();
        if n < 2 {
            return Err(EntError::InsufficientData { needed: 2, have: n });
        }
        let first = self.first.expect("non-empty input has a first byte");
        let t1 = self.lag_products + u128::from(self.last) * u128::from(first);
        let t2 = self.histogram.sum();
        let t3 = self.histogram.sum_squares();
        let n = i128::from(n);
        let (t1, t2, t3) = (t1 as i128, t2 as i128, t3 as i128);
        let denom = n * t3 - t2 * t2;
        if denom == 0 {
            return Err(EntError::ZeroVariance);
        }
        Ok((n * t1 - t2 * t2) as f64 / denom as f64)
    }

    pub fn finish(&self) -> Result<EntReport, EntError> {
        let h = &self.histogram;
        let chi_square = h.chi_square()?;
        Ok(EntReport {
            byte_count: h.total,
            entropy: h.entropy()?,
            chi_square,
            p_value: chi_square_p_value(chi_square, BYTE_DOF),
            mean: h.mean()?,
            monte_carlo_pi: self.monte_carlo_pi(),
            serial_correlation: self.serial_correlation(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntReport {
    pub byte_count: u64,
    pub entropy: f64,
    pub chi_square: f64,
    pub p_value: f64,
    pub mean: f64,
    pub monte_carlo_pi: Result<f64, EntError>,
    pub serial_correlation: Result<f64, EntError>,
}

impl EntReport {
    /// JSON object with one key per statistic. Unavailable statistics are
    /// `null` and their reason appears under `reasons`.
    pub fn to_json(&self) -> Value {
        let mut reasons = BTreeMap::new();
        let mut optional = |name: &str, value: &Result<f64, EntError>| match value {
            Ok(v) => json!(v),
            Err(e) => {
                reasons.insert(name.to_owned(), e.to_string());
                Value::Null
            }
        };
        let monte_carlo_pi = optional("monte_carlo_pi", &self.monte_carlo_pi);
        let serial_correlation = optional("serial_correlation", &self.serial_correlation);
        json!({
            "byte_count": self.byte_count,
            "entropy": self.entropy,
            "chi_square": self.chi_square,
            "p_value": self.p_value,
            "mean": self.mean,
            "monte_carlo_pi": monte_carlo_pi,
            "serial_correlation": serial_correlation,
            "reasons": reasons,
        })
    }
}

impl fmt::Display for EntReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Bytes                 {}", self.byte_count)?;
        writeln!(f, "Entropy (bits)        {:.6}", self.entropy)?;
        writeln!(f, "Chi Square            {:.2}", self.chi_square)?;
        // Extreme tails are reported as bounds, as ent does.
        if self.p_value < 1e-4 {
            writeln!(f, "p-Value               < 0.0001")?;
        } else if self.p_value > 0.9999 {
            writeln!(f, "p-Value               > 0.9999")?;
        } else {
            writeln!(f, "p-Value               {:.4}", self.p_value)?;
        }
        writeln!(f, "Arithmetic Mean       {:.4}", self.mean)?;
        match &self.monte_carlo_pi {
            Ok(pi) => writeln!(
                f,
                "Monte Carlo π         {:.8} (error {:.2}%)",
                pi,
                100.0 * (pi - std::f64::consts::PI).abs() / std::f64::consts::PI
            )?,
            Err(e) => writeln!(f, "Monte Carlo π         n/a ({e})")?,
        }
        match &self.serial_correlation {
            Ok(scc) => write!(f, "Serial Correlation    {scc:.6}"),
            Err(e) => write!(f, "Serial Correlation    n/a ({e})"),
        }
    }
}
