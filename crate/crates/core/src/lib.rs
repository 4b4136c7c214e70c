//! Geometric symbolization of discrete time series.
//!
//! Each interior sample of a series is labelled with one of thirteen shapes
//! of its three-point neighbourhood. From the resulting symbol string the
//! crate derives configuration histograms, semantic entropy, the 13×13
//! transition matrix, information power (mean absolute product of second and
//! first differences) and the entropy/power ratio. A Kuramoto network
//! simulator produces test observables and per-oscillator synchronizability.
//!
//! Core routines are generic over the sample type: anything implementing
//! [`Scalar`] (`f32`, `f64`, `i32`, `i64`, exact rationals) for symbolization
//! and the power measures, and [`Real`] for the oscillator integrator. The
//! aliases below fix the common choices.
//!
//! ```
//! use geosym::{symbolize, Signal64, semantic_entropy};
//!
//! let s = Signal64::new(vec![0.0, 1.0, 0.0, 1.0, 0.0], 1.0).unwrap();
//! let symbols = symbolize(s.samples(), 0.0).unwrap();
//! assert_eq!(symbols.ids(), vec![6, 5, 6]);
//! assert!((semantic_entropy(&symbols).unwrap() - 0.918_295_834).abs() < 1e-9);
//! ```

pub mod error;
pub mod generate;
pub mod io;
pub mod kuramoto;
pub mod measures;
pub mod report;
pub mod scalar;
pub mod signal;
pub mod symbolizer;
pub mod transitions;

use num_rational::Ratio;

pub use error::{Error, Result};
pub use generate::{generate, GeneratorKind, GeneratorSpec, SurrogateParams};
pub use io::{parse_csv, read_csv, write_signals_csv, ChannelTable, CsvOptions};
pub use kuramoto::{
    integrate, marginal_coupling, order_parameter, synchronizability, Coupling, OscillatorNetwork,
    SignConvention, Trajectory,
};
pub use measures::{
    information_power, locate_min, permutation_entropy3, ratio_series, semantic_entropy,
    spectral_power, windowed_measure, ConfigurationHistogram, MeasureKind, MeasureOptions,
    MinLocation, Product, RatioAnalysis, TiePolicy, WindowedSeries,
};
pub use report::{write_report, AnalysisReport, Format, ReportOutput};
pub use scalar::{Real, Scalar};
pub use signal::{sign_of, windows, Sign, Signal, WindowSpec};
pub use symbolizer::{
    classify, difference_triple, enumerate_valid_patterns, pattern_lookup, peaks_troughs,
    symbolize, Abundance, Configuration, DifferenceTriple, PeaksTroughs, SignTriple, SymbolString,
};
pub use transitions::{
    block_views, count_transitions, validity_mask, BlockViews, TransitionMatrix, ValidityMask,
};

/// Exact rational samples.
pub type Exact = Ratio<i64>;

pub type Signal64 = Signal<f64>;
pub type Signal32 = Signal<f32>;
pub type ExactSignal = Signal<Exact>;

pub type DifferenceTriple64 = DifferenceTriple<f64>;
pub type ExactDifferenceTriple = DifferenceTriple<Exact>;

pub type MeasureOptions64 = MeasureOptions<f64>;

pub type OscillatorNetwork64 = OscillatorNetwork<f64>;
pub type OscillatorNetwork32 = OscillatorNetwork<f32>;
pub type Trajectory64 = Trajectory<f64>;
pub type Trajectory32 = Trajectory<f32>;
