//! First-order transition statistics of symbol strings.
//!
//! Consecutive symbols share two samples, so symbol `j` can follow symbol `i`
//! only when the last difference sign of `i` equals the first difference sign
//! of `j`. That leaves 59 admissible cells out of 169.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolizer::{Abundance, Configuration};

const N: usize = Configuration::COUNT;

/// Admissible (from, to) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityMask {
    cells: [[bool; N]; N],
}

impl ValidityMask {
    pub fn is_admissible(&self, from: Configuration, to: Configuration) -> bool {
        self.cells[from.index()][to.index()]
    }

    pub fn cells(&self) -> &[[bool; N]; N] {
        &self.cells
    }

    pub fn admissible_count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&b| b).count()
    }

    /// Configurations that may follow `from`, in id order.
    pub fn successors(&self, from: Configuration) -> Vec<Configuration> {
        Configuration::ALL
            .into_iter()
            .filter(|&to| self.is_admissible(from, to))
            .collect()
    }
}

pub fn validity_mask() -> ValidityMask {
    let mut cells = [[false; N]; N];
    for from in Configuration::ALL {
        for to in Configuration::ALL {
            cells[from.index()][to.index()] = from.last_sign() == to.first_sign();
        }
    }
    ValidityMask { cells }
}

/// Transition counts with frequency views.
///
/// Frequencies are normalized by the number of adjacent pairs, so the whole
/// matrix sums to one; [`TransitionMatrix::row_stochastic`] gives the
/// per-row conditional view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    counts: [[u64; N]; N],
    total: u64,
}

impl Default for TransitionMatrix {
    fn default() -> Self {
        Self {
            counts: [[0; N]; N],
            total: 0,
        }
    }
}

impl TransitionMatrix {
    pub fn counts(&self) -> &[[u64; N]; N] {
        &self.counts
    }

    pub fn count(&self, from: Configuration, to: Configuration) -> u64 {
        self.counts[from.index()][to.index()]
    }

    /// Number of transitions tallied.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, from: Configuration, to: Configuration) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(from, to) as f64 / self.total as f64
        }
    }

    pub fn frequencies(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        if self.total > 0 {
            let total = self.total as f64;
            for (row, counts) in out.iter_mut().zip(&self.counts) {
                for (cell, &c) in row.iter_mut().zip(counts) {
                    *cell = c as f64 / total;
                }
            }
        }
        out
    }

    /// Each nonempty row normalized to sum to one; empty rows stay zero.
    pub fn row_stochastic(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for (row, counts) in out.iter_mut().zip(&self.counts) {
            let sum: u64 = counts.iter().sum();
            if sum > 0 {
                for (cell, &c) in row.iter_mut().zip(counts) {
                    *cell = c as f64 / sum as f64;
                }
            }
        }
        out
    }

    /// Adds another tally; counts from disjoint windows combine before normalization.
    pub fn merge(&mut self, other: &TransitionMatrix) {
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (c, o) in row.iter_mut().zip(other_row) {
                *c += o;
            }
        }
        self.total += other.total;
    }
}

/// Tallies adjacent symbol pairs.
pub fn count_transitions(symbols: &[Configuration]) -> Result<TransitionMatrix> {
    if symbols.len() < 2 {
        return Err(Error::EmptyInput(format!(
            "transition counting needs at least 2 symbols, got {}",
            symbols.len()
        )));
    }
    let mask = validity_mask();
    let mut m = TransitionMatrix::default();
    for (k, pair) in symbols.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        if !mask.is_admissible(from, to) {
            return Err(Error::CorruptedInput {
                index: k,
                from: from.id(),
                to: to.id(),
            });
        }
        m.counts[from.index()][to.index()] += 1;
    }
    m.total = symbols.len() as u64 - 1;
    Ok(m)
}

/// One rectangular block of the frequency matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub rows: Vec<Configuration>,
    pub cols: Vec<Configuration>,
    pub cells: Vec<Vec<f64>>,
}

impl Block {
    fn extract(freq: &[[f64; N]; N], rows: &[Configuration], cols: &[Configuration]) -> Self {
        let cells = rows
            .iter()
            .map(|r| cols.iter().map(|c| freq[r.index()][c.index()]).collect())
            .collect();
        Self {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            cells,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn sum(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }
}

/// The frequency matrix split by abundance class of source and target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockViews {
    pub abundant_to_abundant: Block,
    pub abundant_to_sparse: Block,
    pub sparse_to_abundant: Block,
    pub sparse_to_sparse: Block,
}

impl BlockViews {
    pub fn sums(&self) -> [f64; 4] {
        [
            self.abundant_to_abundant.sum(),
            self.abundant_to_sparse.sum(),
            self.sparse_to_abundant.sum(),
            self.sparse_to_sparse.sum(),
        ]
    }
}

pub fn block_views(m: &TransitionMatrix) -> BlockViews {
    let (abundant, sparse): (Vec<_>, Vec<_>) = Configuration::ALL
        .into_iter()
        .partition(|c| c.abundance() == Abundance::Abundant);
    let freq = m.frequencies();
    BlockViews {
        abundant_to_abundant: Block::extract(&freq, &abundant, &abundant),
        abundant_to_sparse: Block::extract(&freq, &abundant, &sparse),
        sparse_to_abundant: Block::extract(&freq, &sparse, &abundant),
        sparse_to_sparse: Block::extract(&freq, &sparse, &sparse),
    }
}
