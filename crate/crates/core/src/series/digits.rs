//! Cosines of blocks of binary digits.
//!
//! With `θ = 0.θ_1 θ_2 ...` in base 2, block `k` of a plan has `m_k` windows of
//! `n_k` digits each, starting after the first `s_{k-1} = sum_{l<k} m_l n_l` digits.
//! Window `i` of block `k` gives `ς = cos(2π sum_{j=1}^{n_k} θ_{s_{k-1}+(i-1)n_k+j} / 2^j)`.
//! Distinct windows use disjoint digits, so the values are independent.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_path::LatticePath;

/// Plans with at most this many digits are integrated by enumerating every string.
pub(crate) const EXHAUSTIVE_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPlan {
    m: Vec<usize>,
    n: Vec<u32>,
    offsets: Vec<usize>,
}

impl BlockPlan {
    pub fn new(m: Vec<usize>, n: Vec<u32>) -> Result<Self> {
        if m.is_empty() || m.len() != n.len() {
            return Err(Error::InvalidArgument(format!(
                "block plan needs matching non-empty m and n, got {} and {}",
                m.len(),
                n.len()
            )));
        }
        if m.contains(&0) || n.contains(&0) || n.iter().any(|&x| x > 52) {
            return Err(Error::InvalidArgument(
                "block sizes must be positive and windows at most 52 digits".into(),
            ));
        }
        let mut offsets = vec![0usize];
        for (mk, nk) in m.iter().zip(&n) {
            offsets.push(offsets.last().unwrap_or(&0) + mk * *nk as usize);
        }
        Ok(Self { m, n, offsets })
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn blocks(&self) -> usize {
        self.m.len()
    }

    /// `s_k` for `k = 0..=K`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total_digits(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Position of the first digit of window `(k, i)`, both 1-based.
    pub fn window_start(&self, k: usize, i: usize) -> Result<usize> {
        if k == 0 || k > self.blocks() || i == 0 || i > self.m[k - 1] {
            return Err(Error::InvalidArgument(format!(
                "window (k = {k}, i = {i}) is outside the plan"
            )));
        }
        Ok(self.offsets[k - 1] + (i - 1) * self.n[k - 1] as usize)
    }
}

/// `sum_{j=1}^{n} d_j / 2^j` for a window of digits.
fn window_value(window: &[u8]) -> f64 {
    window
        .iter()
        .rev()
        .fold(0.0, |acc, &bit| 0.5 * (acc + f64::from(bit)))
}

/// `ς_i^{(n_k)}` for window `(k, i)` of the digit stream.
pub fn zeta_sample(plan: &BlockPlan, k: usize, i: usize, digits: &[u8]) -> Result<f64> {
    let start = plan.window_start(k, i)?;
    let width = plan.n[k - 1] as usize;
    let window = digits.get(start..start + width).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "window [{start}, {}) runs past the {} available digits",
            start + width,
            digits.len()
        ))
    })?;
    if window.iter().any(|&b| b > 1) {
        return Err(Error::InvalidArgument("digits must be 0 or 1".into()));
    }
    Ok((TAU * window_value(window)).cos())
}

/// `cos(2π 2^start θ)` where `θ` has the given binary digits, truncated to the
/// digits available.
pub fn shifted_cosine(digits: &[u8], start: usize) -> f64 {
    let tail = digits.get(start..).unwrap_or(&[]);
    (TAU * window_value(&tail[..tail.len().min(64)])).cos()
}

/// Variance of `ς` for windows of `n` digits: `1` for `n = 1`, `1/2` otherwise.
pub fn zeta_variance(n: u32) -> f64 {
    if n == 1 {
        1.0
    } else {
        0.5
    }
}

/// Normalised digit cosines `ς / sd` as an orthonormal system, enumerated block by
/// block.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitBlockSystem {
    plan: BlockPlan,
}

impl DigitBlockSystem {
    pub fn new(plan: BlockPlan) -> Self {
        Self { plan }
    }

    pub fn plan(&self) -> &BlockPlan {
        &self.plan
    }

    pub fn len(&self) -> usize {
        self.plan.m.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(k, i)` of the `index`-th function, 0-based index.
    pub fn window_of(&self, index: usize) -> Option<(usize, usize)> {
        let mut rest = index;
        for (k, &mk) in self.plan.m.iter().enumerate() {
            if rest < mk {
                return Some((k + 1, rest + 1));
            }
            rest -= mk;
        }
        None
    }

    pub fn value(&self, index: usize, digits: &[u8]) -> Result<f64> {
        let (k, i) = self.window_of(index).ok_or_else(|| {
            Error::InvalidArgument(format!("function {index} beyond the {} available", self.len()))
        })?;
        let sd = zeta_variance(self.plan.n[k - 1]).sqrt();
        Ok(zeta_sample(&self.plan, k, i, digits)? / sd)
    }
}

/// Walk `x_k = sum_{i <= k} ς_i^{(n)} / sqrt(m)`, `k = 0..=m`, from a single block of
/// `m` windows of `n` digits.
pub fn walk_path(m: usize, n: u32, digits: &[u8]) -> Result<LatticePath> {
    let plan = BlockPlan::new(vec![m], vec![n])?;
    let scale = 1.0 / (m as f64).sqrt();
    let mut values = Vec::with_capacity(m + 1);
    let mut acc = 0.0;
    values.push(0.0);
    for i in 1..=m {
        acc += zeta_sample(&plan, 1, i, digits)? * scale;
        values.push(acc);
    }
    LatticePath::from_scalars(&values)
}
