//! Three-point geometric symbolization.
//!
//! Around every interior sample `n` the backward first difference
//! `d_left = s[n] - s[n-1]`, the forward first difference
//! `d_right = s[n+1] - s[n]` and the second difference `d2 = d_right - d_left`
//! are formed. Their three signs pick one of thirteen shapes; the other
//! fourteen of the 27 sign triples are arithmetically impossible because the
//! sign of `d2` is fixed by the other two whenever they disagree.
//!
//! The P-operator products at `n` are `d2 * d_left` (left) and `d2 * d_right`
//! (right). Their signs can only move upwards in the order `- < 0 < +`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signal::{sign_of, Sign};

/// Sign triple `(first difference, curvature, last difference)`.
pub type SignTriple = (Sign, Sign, Sign);

/// Differences around one interior sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceTriple<T> {
    pub d_left: T,
    pub d2: T,
    pub d_right: T,
    pub index: usize,
}

impl<T: Scalar> DifferenceTriple<T> {
    pub fn from_points(prev: T, current: T, next: T, index: usize) -> Self {
        let d_left = current - prev;
        let d_right = next - current;
        Self {
            d_left,
            d2: d_right - d_left,
            d_right,
            index,
        }
    }

    pub fn left_product(&self) -> T {
        self.d2 * self.d_left
    }

    pub fn right_product(&self) -> T {
        self.d2 * self.d_right
    }

    /// Signs of the three factors under one shared tolerance.
    pub fn signs(&self, tau: T) -> Result<SignTriple> {
        Ok((
            sign_of(self.d_left, tau)?,
            sign_of(self.d2, tau)?,
            sign_of(self.d_right, tau)?,
        ))
    }

    fn to_error(self) -> Error {
        Error::Classification {
            index: self.index,
            d_left: self.d_left.to_f64_lossy(),
            d2: self.d2.to_f64_lossy(),
            d_right: self.d_right.to_f64_lossy(),
        }
    }
}

/// Differences around interior index `n` (`1 <= n <= len - 2`).
pub fn difference_triple<T: Scalar>(samples: &[T], n: usize) -> Result<DifferenceTriple<T>> {
    if n == 0 || n + 1 >= samples.len() {
        return Err(Error::Index {
            index: n,
            len: samples.len(),
        });
    }
    Ok(DifferenceTriple::from_points(
        samples[n - 1],
        samples[n],
        samples[n + 1],
        n,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abundance {
    Abundant,
    Sparse,
}

/// The thirteen realizable shapes of a three-point neighbourhood, numbered 1..=13.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Configuration {
    /// `(-, +, -)` falling, flattening out.
    FallingConvex = 1,
    /// `(+, -, +)` rising, flattening out.
    RisingConcave = 2,
    /// `(+, +, +)` rising, steepening.
    RisingConvex = 3,
    /// `(-, -, -)` falling, steepening.
    FallingConcave = 4,
    /// `(-, +, +)` local minimum.
    Trough = 5,
    /// `(+, -, -)` local maximum.
    Peak = 6,
    /// `(+, 0, +)` straight rise.
    RisingLine = 7,
    /// `(-, 0, -)` straight fall.
    FallingLine = 8,
    /// `(0, 0, 0)` flat.
    Flat = 9,
    /// `(0, +, +)` flat then rising.
    FlatThenRise = 10,
    /// `(0, -, -)` flat then falling.
    FlatThenFall = 11,
    /// `(+, -, 0)` rising then flat.
    RiseThenFlat = 12,
    /// `(-, +, 0)` falling then flat.
    FallThenFlat = 13,
}

use Sign::{Neg, Pos, Zero};

impl Configuration {
    pub const COUNT: usize = 13;

    /// All configurations in id order.
    pub const ALL: [Configuration; 13] = [
        Configuration::FallingConvex,
        Configuration::RisingConcave,
        Configuration::RisingConvex,
        Configuration::FallingConcave,
        Configuration::Trough,
        Configuration::Peak,
        Configuration::RisingLine,
        Configuration::FallingLine,
        Configuration::Flat,
        Configuration::FlatThenRise,
        Configuration::FlatThenFall,
        Configuration::RiseThenFlat,
        Configuration::FallThenFlat,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    /// Zero-based position, handy for array indexing.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_id(id: u8) -> Option<Configuration> {
        match id {
            1..=13 => Some(Self::ALL[id as usize - 1]),
            _ => None,
        }
    }

    pub fn signs(self) -> SignTriple {
        match self {
            Configuration::FallingConvex => (Neg, Pos, Neg),
            Configuration::RisingConcave => (Pos, Neg, Pos),
            Configuration::RisingConvex => (Pos, Pos, Pos),
            Configuration::FallingConcave => (Neg, Neg, Neg),
            Configuration::Trough => (Neg, Pos, Pos),
            Configuration::Peak => (Pos, Neg, Neg),
            Configuration::RisingLine => (Pos, Zero, Pos),
            Configuration::FallingLine => (Neg, Zero, Neg),
            Configuration::Flat => (Zero, Zero, Zero),
            Configuration::FlatThenRise => (Zero, Pos, Pos),
            Configuration::FlatThenFall => (Zero, Neg, Neg),
            Configuration::RiseThenFlat => (Pos, Neg, Zero),
            Configuration::FallThenFlat => (Neg, Pos, Zero),
        }
    }

    pub fn first_sign(self) -> Sign {
        self.signs().0
    }

    pub fn curvature_sign(self) -> Sign {
        self.signs().1
    }

    pub fn last_sign(self) -> Sign {
        self.signs().2
    }

    /// Ids 1-6 dominate real data; 7-13 need exactly equal differences.
    pub fn abundance(self) -> Abundance {
        if self.id() <= 6 {
            Abundance::Abundant
        } else {
            Abundance::Sparse
        }
    }

    /// Sign of the (left, right) P-operator products implied by the shape.
    pub fn product_signs(self) -> (Sign, Sign) {
        let (first, curvature, last) = self.signs();
        (sign_mul(curvature, first), sign_mul(curvature, last))
    }

    /// Mirror image under `s -> -s`.
    pub fn negated(self) -> Configuration {
        let (a, b, c) = self.signs();
        pattern_lookup(a.reversed(), b.reversed(), c.reversed()).expect("closed under negation")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.id())
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let id = u8::deserialize(deserializer)?;
        Configuration::from_id(id).ok_or_else(|| {
            serde::de::Error::custom(format!("configuration id {id} outside 1..=13"))
        })
    }
}

fn sign_mul(a: Sign, b: Sign) -> Sign {
    match (a, b) {
        (Zero, _) | (_, Zero) => Zero,
        (x, y) if x == y => Pos,
        _ => Neg,
    }
}

/// Configuration for a sign triple, or `None` for the fourteen unrealizable ones.
pub fn pattern_lookup(first: Sign, curvature: Sign, last: Sign) -> Option<Configuration> {
    use Configuration::*;
    Some(match (first, curvature, last) {
        (Neg, Pos, Neg) => FallingConvex,
        (Pos, Neg, Pos) => RisingConcave,
        (Pos, Pos, Pos) => RisingConvex,
        (Neg, Neg, Neg) => FallingConcave,
        (Neg, Pos, Pos) => Trough,
        (Pos, Neg, Neg) => Peak,
        (Pos, Zero, Pos) => RisingLine,
        (Neg, Zero, Neg) => FallingLine,
        (Zero, Zero, Zero) => Flat,
        (Zero, Pos, Pos) => FlatThenRise,
        (Zero, Neg, Neg) => FlatThenFall,
        (Pos, Neg, Zero) => RiseThenFlat,
        (Neg, Pos, Zero) => FallThenFlat,
        _ => return None,
    })
}

/// The set of realizable sign triples.
pub fn enumerate_valid_patterns() -> BTreeSet<SignTriple> {
    let mut out = BTreeSet::new();
    for a in Sign::ALL {
        for b in Sign::ALL {
            for c in Sign::ALL {
                if pattern_lookup(a, b, c).is_some() {
                    out.insert((a, b, c));
                }
            }
        }
    }
    out
}

fn classify_triple<T: Scalar>(triple: DifferenceTriple<T>, tau: T) -> Result<Configuration> {
    let (a, b, c) = triple.signs(tau)?;
    pattern_lookup(a, b, c).ok_or_else(|| triple.to_error())
}

/// Shape of the neighbourhood of interior index `n`.
///
/// With `tau == 0` the result is always a configuration. A positive `tau` can
/// round the three differences independently into an unrealizable triple,
/// which is reported as [`Error::Classification`].
pub fn classify<T: Scalar>(samples: &[T], n: usize, tau: T) -> Result<Configuration> {
    classify_triple(difference_triple(samples, n)?, tau)
}

/// Configuration sequence of a series: one symbol per interior sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolString {
    symbols: Vec<Configuration>,
}

impl SymbolString {
    pub fn new(symbols: Vec<Configuration>) -> Self {
        Self { symbols }
    }

    /// Parses raw ids. Only the id range is checked, not adjacency.
    pub fn from_ids(ids: &[u8]) -> Result<Self> {
        ids.iter()
            .enumerate()
            .map(|(k, &id)| {
                Configuration::from_id(id).ok_or_else(|| {
                    Error::InvalidInput(format!("symbol {k}: id {id} outside 1..=13"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn ids(&self) -> Vec<u8> {
        self.symbols.iter().map(|c| c.id()).collect()
    }

    /// Sample index of the first symbol.
    pub fn start_index(&self) -> usize {
        1
    }

    /// Length of the series the symbols came from.
    pub fn source_len(&self) -> usize {
        self.symbols.len() + 2
    }

    /// Sample index of symbol `k`.
    pub fn sample_index(&self, k: usize) -> usize {
        k + 1
    }

    /// First position `k` where symbol `k` cannot be followed by symbol `k + 1`.
    pub fn first_inconsistency(&self) -> Option<usize> {
        self.symbols
            .windows(2)
            .position(|pair| pair[0].last_sign() != pair[1].first_sign())
    }

    pub fn into_inner(self) -> Vec<Configuration> {
        self.symbols
    }
}

impl Deref for SymbolString {
    type Target = [Configuration];

    fn deref(&self) -> &[Configuration] {
        &self.symbols
    }
}

/// Symbolizes every interior sample.
pub fn symbolize<T: Scalar>(samples: &[T], tau: T) -> Result<SymbolString> {
    if samples.len() < 3 {
        return Err(Error::EmptyInput(format!(
            "symbolization needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    samples
        .windows(3)
        .enumerate()
        .map(|(k, w)| classify_triple(DifferenceTriple::from_points(w[0], w[1], w[2], k + 1), tau))
        .collect::<Result<Vec<_>>>()
        .map(SymbolString::new)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeaksTroughs {
    pub peaks: Vec<usize>,
    pub troughs: Vec<usize>,
}

/// Sample indices of local maxima (configuration 6) and minima (configuration 5).
pub fn peaks_troughs(symbols: &SymbolString) -> PeaksTroughs {
    let mut out = PeaksTroughs::default();
    for (k, c) in symbols.iter().enumerate() {
        match c {
            Configuration::Peak => out.peaks.push(symbols.sample_index(k)),
            Configuration::Trough => out.troughs.push(symbols.sample_index(k)),
            _ => {}
        }
    }
    out
}
