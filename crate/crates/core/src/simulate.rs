//! Reference linear probing: direct simulation, exhaustive enumeration of all
//! hash sequences, and seeded Monte Carlo sampling.
//!
//! The random stream is ChaCha8 seeded through `seed_from_u64`, and values in
//! `[0, m)` are drawn by rejection from `next_u64`, so a seed reproduces the
//! same histogram on every platform.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::polyalg::{Integer, Rational};

/// Largest `m^n` that [`exhaustive_distribution`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("table with {m} cells cannot hold {n} items with a cell to spare")]
    TableFull { m: usize, n: usize },
    #[error("need at least one item, got n = 0")]
    NoItems,
    #[error("hash value {value} out of range for {m} cells")]
    OutOfRange { value: usize, m: usize },
    #[error("{m}^{n} sequences exceed the enumeration limit of {limit}")]
    TooManySequences { m: usize, n: usize, limit: u64 },
    #[error("need at least one trial")]
    NoTrials,
    #[error("rotation symmetry violated by {witness:?}: {reason}")]
    SymmetryViolation { witness: Vec<usize>, reason: String },
}

/// Hash values `h_1..h_n`, each in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashSequence {
    m: usize,
    values: Vec<usize>,
}

impl HashSequence {
    pub fn new(m: usize, values: Vec<usize>) -> Result<Self, SimError> {
        if let Some(&value) = values.iter().find(|&&v| v >= m) {
            return Err(SimError::OutOfRange { value, m });
        }
        Ok(HashSequence { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Every hash value shifted by `j` modulo `m`.
    pub fn rotated(&self, j: usize) -> Self {
        HashSequence {
            m: self.m,
            values: self.values.iter().map(|&h| (h + j) % self.m).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionOutcome {
    /// Cell chosen for each item, in insertion order.
    pub positions: Vec<usize>,
    /// `sum (q_k - h_k) mod m`
    pub total_displacement: u64,
    /// Cell 0 is still empty after all insertions.
    pub confined: bool,
}

/// Inserts each item into the first empty cell of `h, h+1, ...` (mod `m`).
pub fn lp_insert(seq: &HashSequence) -> Result<InsertionOutcome, SimError> {
    let (m, n) = (seq.m, seq.values.len());
    if n >= m {
        return Err(SimError::TableFull { m, n });
    }
    let mut occupied = vec![false; m];
    let mut positions = Vec::with_capacity(n);
    let mut total = 0u64;
    for &h in &seq.values {
        let (cell, steps) = probe(&mut occupied, h);
        positions.push(cell);
        total += steps as u64;
    }
    Ok(InsertionOutcome {
        positions,
        total_displacement: total,
        confined: !occupied[0],
    })
}

/// Claims the first empty cell from `h` onwards; returns the cell and the
/// number of steps taken. The caller guarantees an empty cell exists.
fn probe(occupied: &mut [bool], h: usize) -> (usize, usize) {
    let m = occupied.len();
    let mut cell = h;
    let mut steps = 0;
    while occupied[cell] {
        cell += 1;
        if cell == m {
            cell = 0;
        }
        steps += 1;
    }
    occupied[cell] = true;
    (cell, steps)
}

/// Displacement and confinement without allocating an outcome.
fn displacement_of(occupied: &mut [bool], values: &[usize]) -> (u64, bool) {
    occupied.fill(false);
    let total = values.iter().map(|&h| probe(occupied, h).1 as u64).sum();
    (total, !occupied[0])
}

/// Histogram of total displacement, exact or sampled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub m: usize,
    pub n: usize,
    /// displacement `d` -> number of sequences
    pub histogram: BTreeMap<u64, u64>,
    pub trials: u64,
    /// `None` for exhaustive enumeration
    pub seed: Option<u64>,
    pub exhaustive: bool,
}

impl EmpiricalDistribution {
    /// Exact sample mean of `d` as a rational.
    pub fn mean(&self) -> Rational {
        let sum: Integer = self
            .histogram
            .iter()
            .map(|(&d, &count)| Integer::from(d) * Integer::from(count))
            .sum();
        Rational::new(sum, Integer::from(self.trials))
    }

    /// Counts indexed by `d`, zero-filled up to the largest observed `d`.
    pub fn dense_counts(&self) -> Vec<u64> {
        let len = self.histogram.keys().next_back().map_or(0, |&d| d as usize + 1);
        let mut out = vec![0; len];
        for (&d, &count) in &self.histogram {
            out[d as usize] = count;
        }
        out
    }
}

fn check_instance(m: usize, n: usize) -> Result<(), SimError> {
    if n == 0 {
        return Err(SimError::NoItems);
    }
    if n >= m {
        return Err(SimError::TableFull { m, n });
    }
    Ok(())
}

fn sequence_count(m: usize, n: usize) -> Option<u64> {
    (m as u64).checked_pow(n as u32)
}

/// Advances `values` as an odometer in base `m`, last position fastest.
/// Returns `false` after the final sequence.
fn advance(values: &mut [usize], m: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < m {
            return true;
        }
        *v = 0;
    }
    false
}

/// Runs every one of the `m^n` hash sequences. Work is split on the first
/// hash value; per-part histograms are merged by addition.
pub fn exhaustive_distribution(m: usize, n: usize, confined_only: bool) -> Result<EmpiricalDistribution, SimError> {
    exhaustive_distribution_limited(m, n, confined_only, EXHAUSTIVE_LIMIT)
}

/// [`exhaustive_distribution`] with a caller-chosen cap on `m^n`.
pub fn exhaustive_distribution_limited(
    m: usize,
    n: usize,
    confined_only: bool,
    limit: u64,
) -> Result<EmpiricalDistribution, SimError> {
    check_instance(m, n)?;
    match sequence_count(m, n) {
        Some(count) if count <= limit => {}
        _ => return Err(SimError::TooManySequences { m, n, limit }),
    }
    let histogram = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut local = BTreeMap::new();
            let mut occupied = vec![false; m];
            let mut values = vec![0; n];
            values[0] = first;
            loop {
                let (d, confined) = displacement_of(&mut occupied, &values);
                if confined || !confined_only {
                    *local.entry(d).or_insert(0u64) += 1;
                }
                if !advance(&mut values[1..], m) {
                    break local;
                }
            }
        })
        .reduce(BTreeMap::new, |mut acc, part| {
            for (d, count) in part {
                *acc.entry(d).or_insert(0) += count;
            }
            acc
        });
    let trials = histogram.values().sum();
    Ok(EmpiricalDistribution {
        m,
        n,
        histogram,
        trials,
        seed: None,
        exhaustive: true,
    })
}

/// Seeded uniform draws in `[0, bound)`.
#[derive(Debug, Clone)]
pub struct UniformSource {
    rng: ChaCha8Rng,
}

impl UniformSource {
    pub fn new(seed: u64) -> Self {
        UniformSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Rejection sampling over the largest multiple of `bound` below `2^64`.
    pub fn below(&mut self, bound: usize) -> usize {
        let bound = bound as u64;
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return (v % bound) as usize;
            }
        }
    }
}

/// `trials` independent hash sequences from one seeded stream.
pub fn monte_carlo(m: usize, n: usize, trials: u64, seed: u64) -> Result<EmpiricalDistribution, SimError> {
    check_instance(m, n)?;
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let mut source = UniformSource::new(seed);
    let mut occupied = vec![false; m];
    let mut values = vec![0; n];
    let mut histogram = BTreeMap::new();
    for _ in 0..trials {
        for v in values.iter_mut() {
            *v = source.below(m);
        }
        let (d, _) = displacement_of(&mut occupied, &values);
        *histogram.entry(d).or_insert(0u64) += 1;
    }
    Ok(EmpiricalDistribution {
        m,
        n,
        histogram,
        trials,
        seed: Some(seed),
        exhaustive: false,
    })
}

/// All `m` rotations of `seq` must share one total displacement, and exactly
/// `m - n` of them must be confined.
fn check_orbit(seq: &HashSequence) -> Result<(), SimError> {
    let (m, n) = (seq.m, seq.values.len());
    let base = lp_insert(seq)?;
    let mut confined = 0;
    for j in 0..m {
        let outcome = lp_insert(&seq.rotated(j))?;
        if outcome.total_displacement != base.total_displacement {
            return Err(SimError::SymmetryViolation {
                witness: seq.values.clone(),
                reason: format!(
                    "rotation by {j} gives d = {} instead of {}",
                    outcome.total_displacement, base.total_displacement
                ),
            });
        }
        confined += usize::from(outcome.confined);
    }
    if confined != m - n {
        return Err(SimError::SymmetryViolation {
            witness: seq.values.clone(),
            reason: format!("{confined} of {m} rotations confined, expected {}", m - n),
        });
    }
    Ok(())
}

/// Checks the rotation orbit property on `samples` random sequences.
pub fn rotation_symmetry_check(m: usize, n: usize, samples: u64, seed: u64) -> Result<(), SimError> {
    if n >= m {
        return Err(SimError::TableFull { m, n });
    }
    let mut source = UniformSource::new(seed);
    for _ in 0..samples {
        let values = (0..n).map(|_| source.below(m)).collect();
        check_orbit(&HashSequence::new(m, values)?)?;
    }
    Ok(())
}

/// Checks the rotation orbit property on every one of the `m^n` sequences.
pub fn rotation_symmetry_check_all(m: usize, n: usize) -> Result<(), SimError> {
    if n >= m {
        return Err(SimError::TableFull { m, n });
    }
    if sequence_count(m, n).is_none_or(|c| c > EXHAUSTIVE_LIMIT) {
        return Err(SimError::TooManySequences {
            m,
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut values = vec![0; n];
    loop {
        check_orbit(&HashSequence::new(m, values.clone())?)?;
        if !advance(&mut values, m) {
            return Ok(());
        }
    }
}
