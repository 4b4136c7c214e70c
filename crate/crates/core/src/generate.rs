//! Deterministic synthetic signals.
//!
//! Every generator is a pure function of its spec: the random kinds draw from
//! a ChaCha8 stream seeded with the spec's 64-bit seed, so output is identical
//! across runs, platforms and thread counts.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Parameters of the seizure surrogate: an AR(1) background with a sinusoid
/// superimposed between `onset_s` and `offset_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateParams {
    /// Marginal standard deviation of the background.
    pub noise_sigma: f64,
    /// Lag-one coefficient of the background; 0 gives white noise.
    pub ar_coefficient: f64,
    pub amplitude: f64,
    pub frequency_hz: f64,
    pub onset_s: f64,
    pub offset_s: f64,
    /// When false the oscillation replaces the background instead of adding to it.
    pub keep_background: bool,
}

impl Default for SurrogateParams {
    fn default() -> Self {
        Self {
            noise_sigma: 1.0,
            ar_coefficient: 0.98,
            amplitude: 5.0,
            frequency_hz: 3.0,
            onset_s: 8.0,
            offset_s: 12.0,
            keep_background: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    Constant {
        value: f64,
    },
    /// `start + slope * k`; slope is per sample.
    Ramp {
        start: f64,
        slope: f64,
    },
    Sine {
        amplitude: f64,
        frequency_hz: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Period-two alternation `low, high, low, ...`.
    Triangle {
        low: f64,
        high: f64,
    },
    WhiteNoise {
        sigma: f64,
    },
    /// Stationary AR(1) with marginal standard deviation `sigma`.
    Ar1 {
        coefficient: f64,
        sigma: f64,
    },
    SeizureSurrogate(SurrogateParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub seed: u64,
    pub sample_rate: f64,
    pub samples: usize,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, sample_rate: f64, samples: usize) -> Self {
        Self {
            kind,
            seed: 0,
            sample_rate,
            samples,
        }
    }

    pub fn with_duration(kind: GeneratorKind, sample_rate: f64, duration_s: f64) -> Self {
        let samples = (duration_s * sample_rate).round().max(0.0) as usize;
        Self::new(kind, sample_rate, samples)
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Default surrogate: 20 s at 256 Hz with the oscillation in [8, 12) s.
    pub fn seizure_surrogate(seed: u64) -> Self {
        Self::with_duration(
            GeneratorKind::SeizureSurrogate(SurrogateParams::default()),
            256.0,
            20.0,
        )
        .seed(seed)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        fn finite(name: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Spec(format!("{name} must be finite, got {v}")))
            }
        }
        fn sigma(v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::Spec(format!(
                    "noise deviation must be >= 0, got {v}"
                )))
            }
        }
        fn coefficient(v: f64) -> Result<()> {
            if v.is_finite() && v.abs() < 1.0 {
                Ok(())
            } else {
                Err(Error::Spec(format!(
                    "AR coefficient must lie in (-1, 1), got {v}"
                )))
            }
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::Spec(format!("bad sample rate {}", self.sample_rate)));
        }
        if self.samples == 0 {
            return Err(Error::Spec("sample count must be positive".into()));
        }
        match self.kind {
            GeneratorKind::Constant { value } => finite("value", value),
            GeneratorKind::Ramp { start, slope } => {
                finite("start", start)?;
                finite("slope", slope)
            }
            GeneratorKind::Sine {
                amplitude,
                frequency_hz,
                phase,
            } => {
                finite("amplitude", amplitude)?;
                finite("frequency", frequency_hz)?;
                finite("phase", phase)
            }
            GeneratorKind::Triangle { low, high } => {
                finite("low", low)?;
                finite("high", high)
            }
            GeneratorKind::WhiteNoise { sigma: s } => sigma(s),
            GeneratorKind::Ar1 {
                coefficient: c,
                sigma: s,
            } => {
                coefficient(c)?;
                sigma(s)
            }
            GeneratorKind::SeizureSurrogate(p) => {
                sigma(p.noise_sigma)?;
                coefficient(p.ar_coefficient)?;
                finite("amplitude", p.amplitude)?;
                finite("frequency", p.frequency_hz)?;
                if !(p.onset_s.is_finite() && p.offset_s.is_finite() && p.onset_s <= p.offset_s) {
                    return Err(Error::Spec(format!(
                        "oscillation segment [{}, {}) is not ordered",
                        p.onset_s, p.offset_s
                    )));
                }
                Ok(())
            }
        }
    }
}

fn normal(sigma: f64) -> Normal<f64> {
    // validated: sigma is finite and nonnegative
    Normal::new(0.0, sigma).expect("validated deviation")
}

fn ar1_series(rng: &mut ChaCha8Rng, n: usize, coefficient: f64, sigma: f64) -> Vec<f64> {
    let innovation = normal(sigma * (1.0 - coefficient * coefficient).sqrt());
    let mut out = Vec::with_capacity(n);
    let mut x = normal(sigma).sample(rng);
    out.push(x);
    for _ in 1..n {
        x = coefficient * x + innovation.sample(rng);
        out.push(x);
    }
    out
}

/// Builds the signal described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Signal<f64>> {
    spec.validate()?;
    let n = spec.samples;
    let fs = spec.sample_rate;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples: Vec<f64> = match spec.kind {
        GeneratorKind::Constant { value } => vec![value; n],
        GeneratorKind::Ramp { start, slope } => (0..n).map(|k| start + slope * k as f64).collect(),
        GeneratorKind::Sine {
            amplitude,
            frequency_hz,
            phase,
        } => (0..n)
            .map(|k| amplitude * (TAU * frequency_hz * k as f64 / fs + phase).sin())
            .collect(),
        GeneratorKind::Triangle { low, high } => (0..n)
            .map(|k| if k % 2 == 0 { low } else { high })
            .collect(),
        GeneratorKind::WhiteNoise { sigma } => {
            let dist = normal(sigma);
            (0..n).map(|_| dist.sample(&mut rng)).collect()
        }
        GeneratorKind::Ar1 { coefficient, sigma } => ar1_series(&mut rng, n, coefficient, sigma),
        GeneratorKind::SeizureSurrogate(p) => {
            let mut x = ar1_series(&mut rng, n, p.ar_coefficient, p.noise_sigma);
            for (k, v) in x.iter_mut().enumerate() {
                let t = k as f64 / fs;
                if t >= p.onset_s && t < p.offset_s {
                    let osc = p.amplitude * (TAU * p.frequency_hz * (t - p.onset_s)).sin();
                    *v = if p.keep_background { *v + osc } else { osc };
                }
            }
            x
        }
    };
    let label = match spec.kind {
        GeneratorKind::Constant { .. } => "constant",
        GeneratorKind::Ramp { .. } => "ramp",
        GeneratorKind::Sine { .. } => "sine",
        GeneratorKind::Triangle { .. } => "triangle",
        GeneratorKind::WhiteNoise { .. } => "white_noise",
        GeneratorKind::Ar1 { .. } => "ar1",
        GeneratorKind::SeizureSurrogate(_) => "seizure_surrogate",
    };
    Ok(Signal::new(samples, fs)?.with_label(label))
}
