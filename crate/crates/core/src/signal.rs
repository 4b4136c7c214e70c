//! Sampled signals, three-valued signs and sliding windows.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite, uniformly sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    samples: Vec<T>,
    sample_rate: f64,
    label: String,
}

impl<T: Scalar> Signal<T> {
    pub fn new(samples: Vec<T>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        if let Some(index) = samples.iter().position(|x| !x.is_finite_value()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at index {index}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Time of sample `index` in seconds.
    pub fn time_of(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate
    }

    /// Converts every sample to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Result<Signal<U>> {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.to_f64()
                    .and_then(U::from_f64)
                    .ok_or_else(|| Error::InvalidInput(format!("sample {i} is not representable")))
            })
            .collect::<Result<Vec<U>>>()?;
        Ok(Signal::new(samples, self.sample_rate)?.with_label(self.label.clone()))
    }
}

impl Signal<f64> {
    /// Integer data converted exactly; magnitudes above 2^53 are rejected.
    pub fn from_integers(values: &[i64], sample_rate: f64) -> Result<Self> {
        const EXACT: i64 = 1 << 53;
        let samples = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if (-EXACT..=EXACT).contains(&v) {
                    Ok(v as f64)
                } else {
                    Err(Error::InvalidInput(format!(
                        "integer sample {v} at index {i} has no exact double representation"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Signal::new(samples, sample_rate)
    }
}

impl<T> AsRef<[T]> for Signal<T> {
    fn as_ref(&self) -> &[T] {
        &self.samples
    }
}

/// Three-valued sign ordered `Neg < Zero < Pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Neg, Sign::Zero, Sign::Pos];

    /// Order reversal: the sign of `-x` given the sign of `x`.
    pub fn reversed(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Sign of `x` with a symmetric dead band: `Zero` iff `|x| <= tau`.
pub fn sign_of<T: Scalar>(x: T, tau: T) -> Result<Sign> {
    if !x.is_finite_value() {
        return Err(Error::InvalidInput(format!("non-finite value {x:?}")));
    }
    if !tau.is_finite_value() || tau < T::zero() {
        return Err(Error::InvalidInput(format!(
            "tolerance must be finite and nonnegative, got {tau:?}"
        )));
    }
    Ok(if x > tau {
        Sign::Pos
    } else if x < -tau {
        Sign::Neg
    } else {
        Sign::Zero
    })
}

/// Sliding window geometry in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    width: usize,
    hop: usize,
}

impl WindowSpec {
    pub fn new(width: usize, hop: usize) -> Result<Self> {
        if width < 3 {
            return Err(Error::Parameter(format!(
                "window width must be at least 3 samples, got {width}"
            )));
        }
        if hop == 0 {
            return Err(Error::Parameter(
                "window hop must be at least 1 sample".into(),
            ));
        }
        Ok(Self { width, hop })
    }

    /// Window and hop given in seconds, rounded to the nearest sample.
    pub fn from_seconds(window_s: f64, hop_s: f64, sample_rate: f64) -> Result<Self> {
        if !(window_s.is_finite() && window_s > 0.0 && hop_s.is_finite() && hop_s > 0.0) {
            return Err(Error::Parameter(format!(
                "window and hop must be positive, got {window_s} s / {hop_s} s"
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::Parameter(format!("bad sample rate {sample_rate}")));
        }
        Self::new(
            (window_s * sample_rate).round() as usize,
            (hop_s * sample_rate).round() as usize,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    /// Number of windows that fit in a series of `len` samples.
    pub fn count(&self, len: usize) -> usize {
        if len < self.width {
            0
        } else {
            (len - self.width) / self.hop + 1
        }
    }

    /// `[k*hop, k*hop + width)` for every `k` that stays inside `len`.
    pub fn ranges(&self, len: usize) -> impl Iterator<Item = Range<usize>> + '_ {
        let (width, hop) = (self.width, self.hop);
        (0..self.count(len)).map(move |k| k * hop..k * hop + width)
    }
}

/// Window ranges over a signal. Empty when the signal is shorter than one window.
pub fn windows<T: Scalar>(signal: &Signal<T>, spec: WindowSpec) -> Vec<Range<usize>> {
    spec.ranges(signal.len()).collect()
}
