//! Networks of coupled phase oscillators.
//!
//! Phases evolve as
//!
//! ```text
//! dθ_i/dt = ω_i + (1/N) Σ_{j≠i} K_ij sin(θ_j − θ_i)
//! ```
//!
//! with `K_ij = K` under global coupling. [`SignConvention::Paper`] swaps the
//! sine argument to `θ_i − θ_j`, which drives the phases apart instead.
//! Integration is fixed-step classical Runge–Kutta.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{ratio_series, MeasureKind, MeasureOptions, WindowedSeries};
use crate::scalar::{Real, Scalar};
use crate::signal::{Signal, WindowSpec};

/// Default integration step in seconds.
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `sin(θ_j − θ_i)`: attractive coupling.
    #[default]
    Standard,
    /// `sin(θ_i − θ_j)`: repulsive coupling.
    Paper,
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(SignConvention::Standard),
            "paper" => Ok(SignConvention::Paper),
            other => Err(Error::Usage(format!(
                "unknown convention '{other}' (standard|paper)"
            ))),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::Standard => "standard",
            SignConvention::Paper => "paper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling<T> {
    Global(T),
    /// `K_ij >= 0` with a zero diagonal.
    Matrix(Vec<Vec<T>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorNetwork<T> {
    natural_frequencies: Vec<T>,
    coupling: Coupling<T>,
    initial_phases: Vec<T>,
    #[serde(default)]
    sign_convention: SignConvention,
}

impl<T: Real> OscillatorNetwork<T> {
    pub fn new(
        natural_frequencies: Vec<T>,
        coupling: Coupling<T>,
        initial_phases: Vec<T>,
        sign_convention: SignConvention,
    ) -> Result<Self> {
        let net = Self {
            natural_frequencies,
            coupling,
            initial_phases,
            sign_convention,
        };
        net.validate()?;
        Ok(net)
    }

    /// Frequencies drawn from `N(0, frequency_sigma²)` and phases uniform on
    /// `[0, 2π)`, both from one ChaCha8 stream.
    pub fn seeded(
        oscillators: usize,
        coupling: Coupling<T>,
        seed: u64,
        frequency_sigma: f64,
        sign_convention: SignConvention,
    ) -> Result<Self> {
        if !(frequency_sigma.is_finite() && frequency_sigma >= 0.0) {
            return Err(Error::Parameter(format!(
                "frequency deviation must be >= 0, got {frequency_sigma}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, frequency_sigma).expect("checked deviation");
        let cast = |v: f64| T::from_f64(v).expect("representable");
        let natural_frequencies = (0..oscillators)
            .map(|_| cast(normal.sample(&mut rng)))
            .collect();
        let initial_phases = (0..oscillators)
            .map(|_| cast(rng.random::<f64>() * TAU))
            .collect();
        Self::new(
            natural_frequencies,
            coupling,
            initial_phases,
            sign_convention,
        )
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: serde::de::DeserializeOwned,
    {
        let net: Self = serde_json::from_str(text)?;
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        let n = self.natural_frequencies.len();
        if n == 0 {
            return Err(Error::Parameter(
                "a network needs at least one oscillator".into(),
            ));
        }
        if self.initial_phases.len() != n {
            return Err(Error::Parameter(format!(
                "{} initial phases for {n} oscillators",
                self.initial_phases.len()
            )));
        }
        let finite = |v: &T| v.is_finite();
        if !self.natural_frequencies.iter().all(finite) || !self.initial_phases.iter().all(finite) {
            return Err(Error::Parameter(
                "frequencies and phases must be finite".into(),
            ));
        }
        match &self.coupling {
            Coupling::Global(k) => {
                if !k.is_finite() {
                    return Err(Error::Parameter("coupling must be finite".into()));
                }
            }
            Coupling::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parameter(format!("coupling matrix must be {n}x{n}")));
                }
                for (i, row) in rows.iter().enumerate() {
                    for (j, &k) in row.iter().enumerate() {
                        if !(k.is_finite() && k >= T::zero()) {
                            return Err(Error::Parameter(format!(
                                "coupling K[{i}][{j}] must be finite and nonnegative"
                            )));
                        }
                        if i == j && k != T::zero() {
                            return Err(Error::Parameter(format!(
                                "coupling diagonal K[{i}][{i}] must be zero"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.natural_frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.natural_frequencies.is_empty()
    }

    pub fn natural_frequencies(&self) -> &[T] {
        &self.natural_frequencies
    }

    pub fn initial_phases(&self) -> &[T] {
        &self.initial_phases
    }

    pub fn coupling(&self) -> &Coupling<T> {
        &self.coupling
    }

    pub fn sign_convention(&self) -> SignConvention {
        self.sign_convention
    }

    pub fn with_sign_convention(mut self, convention: SignConvention) -> Self {
        self.sign_convention = convention;
        self
    }

    pub fn with_initial_phases(mut self, phases: Vec<T>) -> Result<Self> {
        self.initial_phases = phases;
        self.validate()?;
        Ok(self)
    }

    pub fn with_natural_frequencies(mut self, frequencies: Vec<T>) -> Result<Self> {
        self.natural_frequencies = frequencies;
        self.validate()?;
        Ok(self)
    }

    /// Total coupling strength of oscillator `i`.
    ///
    /// Row sum for matrix coupling. Under global coupling it is `K` itself,
    /// not `K (N-1)/N`, so values stay comparable across network sizes.
    pub fn marginal_coupling(&self, i: usize) -> Result<T> {
        if i >= self.len() {
            return Err(Error::Parameter(format!(
                "oscillator {i} out of range for {} oscillators",
                self.len()
            )));
        }
        Ok(match &self.coupling {
            Coupling::Global(k) => *k,
            Coupling::Matrix(rows) => rows[i]
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(T::zero(), |acc, (_, &k)| acc + k),
        })
    }

    fn derivative(&self, theta: &[T], out: &mut [T]) {
        let n = self.len();
        let inv_n = T::one() / T::from_usize(n).expect("oscillator count fits");
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let diff = match self.sign_convention {
                    SignConvention::Standard => theta[j] - theta[i],
                    SignConvention::Paper => theta[i] - theta[j],
                };
                let weight = match &self.coupling {
                    Coupling::Global(k) => *k,
                    Coupling::Matrix(rows) => rows[i][j],
                };
                acc = acc + weight * diff.sin();
            }
            out[i] = self.natural_frequencies[i] + acc * inv_n;
        }
    }
}

/// Free function form of [`OscillatorNetwork::marginal_coupling`].
pub fn marginal_coupling<T: Real>(net: &OscillatorNetwork<T>, i: usize) -> Result<T> {
    net.marginal_coupling(i)
}

/// Phases at every step, stored step-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    dt: T,
    oscillators: usize,
    phases: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn oscillators(&self) -> usize {
        self.oscillators
    }

    /// Number of stored states (steps + 1, including the initial state).
    pub fn len(&self) -> usize {
        self.phases.len() / self.oscillators
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn time(&self, step: usize) -> T {
        self.dt * T::from_usize(step).expect("step fits")
    }

    pub fn phases_at(&self, step: usize) -> &[T] {
        &self.phases[step * self.oscillators..(step + 1) * self.oscillators]
    }

    pub fn final_phases(&self) -> &[T] {
        self.phases_at(self.len() - 1)
    }

    pub fn phase_series(&self, i: usize) -> Vec<T> {
        self.phases
            .iter()
            .skip(i)
            .step_by(self.oscillators)
            .copied()
            .collect()
    }

    /// `sin θ_i` sampled at `1/dt`.
    pub fn observable(&self, i: usize) -> Result<Signal<T>> {
        let samples = self
            .phases
            .iter()
            .skip(i)
            .step_by(self.oscillators)
            .map(|p| p.sin())
            .collect();
        let fs = T::one() / self.dt;
        Ok(Signal::new(samples, fs.to_f64_lossy())?.with_label(format!("osc{i}")))
    }

    pub fn order_parameter_series(&self) -> Vec<T> {
        self.phases
            .chunks(self.oscillators)
            .map(order_parameter)
            .collect()
    }
}

/// Runs `steps` RK4 steps of size `dt` from the network's initial phases.
pub fn integrate<T: Real>(
    net: &OscillatorNetwork<T>,
    dt: T,
    steps: usize,
) -> Result<Trajectory<T>> {
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::Parameter(format!(
            "step must be positive, got {dt:?}"
        )));
    }
    if steps == 0 {
        return Err(Error::Parameter("at least one step is required".into()));
    }
    let n = net.len();
    let two = T::one() + T::one();
    let half_dt = dt / two;
    let sixth_dt = dt / T::from_f64(6.0).expect("constant");

    let mut phases = Vec::with_capacity((steps + 1) * n);
    phases.extend_from_slice(net.initial_phases());
    let mut theta = net.initial_phases().to_vec();
    let mut k1 = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];

    for step in 1..=steps {
        net.derivative(&theta, &mut k1);
        for i in 0..n {
            tmp[i] = theta[i] + half_dt * k1[i];
        }
        net.derivative(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = theta[i] + half_dt * k2[i];
        }
        net.derivative(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = theta[i] + dt * k3[i];
        }
        net.derivative(&tmp, &mut k4);
        for i in 0..n {
            theta[i] = theta[i] + sixth_dt * (k1[i] + two * (k2[i] + k3[i]) + k4[i]);
        }
        if !theta.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        phases.extend_from_slice(&theta);
    }
    Ok(Trajectory {
        dt,
        oscillators: n,
        phases,
    })
}

/// Magnitude of the mean unit phasor, in `[0, 1]`.
pub fn order_parameter<T: Real>(phases: &[T]) -> T {
    if phases.is_empty() {
        return T::zero();
    }
    let n = T::from_usize(phases.len()).expect("count fits");
    let (c, s) = phases.iter().fold((T::zero(), T::zero()), |(c, s), p| {
        (c + p.cos(), s + p.sin())
    });
    let r = (c / n).hypot(s / n);
    r.min(T::one())
}

/// `E / (P K_i)` per window of an oscillator's observable.
pub fn synchronizability<T: Scalar>(
    observable: &Signal<T>,
    marginal: f64,
    window: WindowSpec,
    opts: &MeasureOptions<T>,
) -> Result<WindowedSeries> {
    if !(marginal.is_finite() && marginal > 0.0) {
        return Err(Error::Parameter(format!(
            "marginal coupling must be positive, got {marginal}"
        )));
    }
    let ratio = ratio_series(observable, window, opts)?.ratio;
    Ok(ratio.map_defined(MeasureKind::Synchronizability, |r| Some(r / marginal)))
}
