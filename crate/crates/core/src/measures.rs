//! Entropies, powers and their windowed ratio.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::{Signal, WindowSpec};
use crate::symbolizer::{symbolize, Configuration, DifferenceTriple, SymbolString};

/// Upper bound of semantic entropy, `log2(13)` bits.
pub const MAX_SEMANTIC_ENTROPY: f64 = 3.700_439_718_141_092;

/// Upper bound of order-3 permutation entropy, `log2(6)` bits.
pub const MAX_PERMUTATION_ENTROPY: f64 = 2.584_962_500_721_156;

/// Default threshold below which information power counts as zero.
pub const DEFAULT_EPS_POWER: f64 = 1e-12;

/// Shannon entropy in bits of a count vector, with `0 log 0 = 0`.
fn shannon_bits(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // -0.0 and roundoff above log2(k) are clamped away
    h.max(0.0).min((counts.len() as f64).log2())
}

/// Occurrence counts of the thirteen configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfigurationHistogram {
    counts: [u64; Configuration::COUNT],
    total: u64,
}

impl ConfigurationHistogram {
    pub fn from_symbols(symbols: &[Configuration]) -> Self {
        let mut counts = [0u64; Configuration::COUNT];
        for c in symbols {
            counts[c.index()] += 1;
        }
        Self {
            counts,
            total: symbols.len() as u64,
        }
    }

    pub fn counts(&self) -> &[u64; Configuration::COUNT] {
        &self.counts
    }

    pub fn count(&self, c: Configuration) -> u64 {
        self.counts[c.index()]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probability(&self, c: Configuration) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(c) as f64 / self.total as f64
        }
    }

    /// Semantic entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon_bits(&self.counts)
    }
}

/// Shannon entropy (bits) of the configuration distribution.
pub fn semantic_entropy(symbols: &[Configuration]) -> Result<f64> {
    if symbols.is_empty() {
        return Err(Error::EmptyInput(
            "semantic entropy of an empty symbol string".into(),
        ));
    }
    Ok(ConfigurationHistogram::from_symbols(symbols).entropy())
}

/// How equal values inside an embedded triple are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Equal values are ranked by time of occurrence.
    #[default]
    Stable,
    /// Triples containing equal values are skipped.
    Discard,
}

/// Index 0..6 of the ordinal pattern of `w`, ranking ties by position.
fn ordinal_pattern<T: PartialOrd>(w: &[T]) -> usize {
    let (a, b, c) = (&w[0], &w[1], &w[2]);
    // strict "later is smaller" tests give the stable ranking
    let ba = b < a;
    let cb = c < b;
    let ca = c < a;
    match (ba, cb, ca) {
        (false, false, false) => 0, // a <= b <= c
        (false, true, false) => 1,  // a <= c < b
        (false, true, true) => 2,   // c < a <= b
        (true, false, false) => 3,  // b < a <= c
        (true, false, true) => 4,   // b <= c < a
        (true, true, true) => 5,    // c < b < a
        // (false, false, true) and (true, true, false) contradict transitivity
        _ => unreachable!("inconsistent ordering"),
    }
}

/// Order-3 permutation entropy in bits.
pub fn permutation_entropy3<T: Scalar>(samples: &[T], ties: TiePolicy) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::EmptyInput(format!(
            "permutation entropy needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    if let Some(i) = samples.iter().position(|x| !x.is_finite_value()) {
        return Err(Error::InvalidInput(format!(
            "non-finite sample at index {i}"
        )));
    }
    let mut counts = [0u64; 6];
    for w in samples.windows(3) {
        if ties == TiePolicy::Discard && (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) {
            continue;
        }
        counts[ordinal_pattern(w)] += 1;
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyInput(
            "every embedded triple contains a tie".into(),
        ));
    }
    Ok(shannon_bits(&counts))
}

/// Which first difference multiplies the second difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Product {
    /// `d2 * (s[n] - s[n-1])`.
    #[default]
    Left,
    /// `d2 * (s[n+1] - s[n])`.
    Right,
}

impl FromStr for Product {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Product::Left),
            "right" => Ok(Product::Right),
            other => Err(Error::Usage(format!(
                "unknown product '{other}' (left|right)"
            ))),
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Product::Left => "left",
            Product::Right => "right",
        })
    }
}

/// Mean absolute P-operator value over the interior samples.
///
/// In sample units; multiply by `fs^3` for the continuous-time scale.
pub fn information_power<T: Scalar>(samples: &[T], product: Product) -> Result<T> {
    if samples.len() < 3 {
        return Err(Error::EmptyInput(format!(
            "information power needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let mut sum = T::zero();
    for w in samples.windows(3) {
        let t = DifferenceTriple::from_points(w[0], w[1], w[2], 0);
        let p = match product {
            Product::Left => t.left_product(),
            Product::Right => t.right_product(),
        };
        sum = sum + p.abs();
    }
    let n = T::from_usize(samples.len() - 2)
        .ok_or_else(|| Error::InvalidInput("window too long for the scalar type".into()))?;
    Ok(sum / n)
}

/// Mean squared deviation from the window mean.
pub fn spectral_power<T: Scalar>(samples: &[T]) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::EmptyInput(
            "spectral power of an empty window".into(),
        ));
    }
    let n = T::from_usize(samples.len())
        .ok_or_else(|| Error::InvalidInput("window too long for the scalar type".into()))?;
    let mean = samples.iter().fold(T::zero(), |acc, &x| acc + x) / n;
    let ss = samples.iter().fold(T::zero(), |acc, &x| {
        let d = x - mean;
        acc + d * d
    });
    Ok(ss / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    SemanticEntropy,
    PermutationEntropy,
    InformationPower,
    SpectralPower,
    EpRatio,
    Synchronizability,
}

impl MeasureKind {
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::SemanticEntropy => "semantic_entropy",
            MeasureKind::PermutationEntropy => "permutation_entropy",
            MeasureKind::InformationPower => "information_power",
            MeasureKind::SpectralPower => "spectral_power",
            MeasureKind::EpRatio => "ep_ratio",
            MeasureKind::Synchronizability => "synchronizability",
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "semantic_entropy" => MeasureKind::SemanticEntropy,
            "permutation_entropy" => MeasureKind::PermutationEntropy,
            "information_power" => MeasureKind::InformationPower,
            "spectral_power" => MeasureKind::SpectralPower,
            "ep_ratio" => MeasureKind::EpRatio,
            "synchronizability" => MeasureKind::Synchronizability,
            other => return Err(Error::Usage(format!("unknown measure '{other}'"))),
        })
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One value per window; `None` marks an undefined window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowedSeries {
    measure: MeasureKind,
    window_starts: Vec<f64>,
    values: Vec<Option<f64>>,
    undefined_windows: Vec<usize>,
}

impl WindowedSeries {
    pub fn new(measure: MeasureKind, window_starts: Vec<f64>, values: Vec<Option<f64>>) -> Self {
        assert_eq!(window_starts.len(), values.len(), "one start per value");
        let undefined_windows = values
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.is_none().then_some(k))
            .collect();
        Self {
            measure,
            window_starts,
            values,
            undefined_windows,
        }
    }

    pub fn measure(&self) -> MeasureKind {
        self.measure
    }

    pub fn window_starts(&self) -> &[f64] {
        &self.window_starts
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn undefined_windows(&self) -> &[usize] {
        &self.undefined_windows
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn defined_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }

    /// Applies `f` to every defined value.
    pub fn map_defined(&self, measure: MeasureKind, f: impl Fn(f64) -> Option<f64>) -> Self {
        Self::new(
            measure,
            self.window_starts.clone(),
            self.values.iter().map(|v| v.and_then(&f)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions<T> {
    /// Dead band for difference signs.
    pub tau: T,
    /// Windows whose information power falls below this get no ratio.
    pub eps_power: f64,
    pub product: Product,
    pub ties: TiePolicy,
}

impl<T: Scalar> Default for MeasureOptions<T> {
    fn default() -> Self {
        Self {
            tau: T::zero(),
            eps_power: DEFAULT_EPS_POWER,
            product: Product::Left,
            ties: TiePolicy::Stable,
        }
    }
}

/// Semantic entropy, information power and their ratio, window by window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioAnalysis {
    pub entropy: WindowedSeries,
    pub power: WindowedSeries,
    pub ratio: WindowedSeries,
}

fn window_starts<T: Scalar>(signal: &Signal<T>, spec: WindowSpec) -> Vec<f64> {
    spec.ranges(signal.len())
        .map(|r| signal.time_of(r.start))
        .collect()
}

/// E/P per window. A signal shorter than one window yields empty series.
pub fn ratio_series<T: Scalar>(
    signal: &Signal<T>,
    spec: WindowSpec,
    opts: &MeasureOptions<T>,
) -> Result<RatioAnalysis> {
    let starts = window_starts(signal, spec);
    let symbols = if starts.is_empty() {
        SymbolString::new(Vec::new())
    } else {
        symbolize(signal.samples(), opts.tau)?
    };
    let mut entropy = Vec::with_capacity(starts.len());
    let mut power = Vec::with_capacity(starts.len());
    let mut ratio = Vec::with_capacity(starts.len());
    for range in spec.ranges(signal.len()) {
        // symbol k sits on sample k + 1
        let e =
            ConfigurationHistogram::from_symbols(&symbols[range.start..range.end - 2]).entropy();
        let p = information_power(&signal.samples()[range], opts.product)?.to_f64_lossy();
        entropy.push(Some(e));
        power.push(Some(p));
        ratio.push((p >= opts.eps_power).then(|| e / p));
    }
    Ok(RatioAnalysis {
        entropy: WindowedSeries::new(MeasureKind::SemanticEntropy, starts.clone(), entropy),
        power: WindowedSeries::new(MeasureKind::InformationPower, starts.clone(), power),
        ratio: WindowedSeries::new(MeasureKind::EpRatio, starts, ratio),
    })
}

/// Any single-signal measure, window by window.
pub fn windowed_measure<T: Scalar>(
    signal: &Signal<T>,
    spec: WindowSpec,
    kind: MeasureKind,
    opts: &MeasureOptions<T>,
) -> Result<WindowedSeries> {
    let per_window = |f: &dyn Fn(&[T]) -> Result<f64>| -> Result<WindowedSeries> {
        let values = spec
            .ranges(signal.len())
            .map(|r| f(&signal.samples()[r]).map(Some))
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowedSeries::new(
            kind,
            window_starts(signal, spec),
            values,
        ))
    };
    match kind {
        MeasureKind::SemanticEntropy => Ok(ratio_series(signal, spec, opts)?.entropy),
        MeasureKind::InformationPower => Ok(ratio_series(signal, spec, opts)?.power),
        MeasureKind::EpRatio => Ok(ratio_series(signal, spec, opts)?.ratio),
        MeasureKind::PermutationEntropy => per_window(&|w| permutation_entropy3(w, opts.ties)),
        MeasureKind::SpectralPower => per_window(&|w| Ok(spectral_power(w)?.to_f64_lossy())),
        MeasureKind::Synchronizability => Err(Error::Parameter(
            "synchronizability needs a marginal coupling; use kuramoto::synchronizability".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinLocation {
    pub index: usize,
    pub start_s: f64,
    pub value: f64,
}

/// Smallest defined value; ties go to the earliest window.
pub fn locate_min(series: &WindowedSeries) -> Result<MinLocation> {
    let mut best: Option<MinLocation> = None;
    for (index, v) in series.values().iter().enumerate() {
        let Some(value) = *v else { continue };
        if best.is_none_or(|b| value < b.value) {
            best = Some(MinLocation {
                index,
                start_s: series.window_starts()[index],
                value,
            });
        }
    }
    best.ok_or(Error::NoDefinedValue)
}
