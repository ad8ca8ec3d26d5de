//! Coefficient sequences, orthonormal systems and their partial-sum paths.

mod digits;
mod examples;

pub use digits::{shifted_cosine, walk_path, zeta_sample, zeta_variance, BlockPlan, DigitBlockSystem};
pub use examples::{
    area_blowup_path, area_blowup_min_grid, coeffs_finite2var_example, example_local_constant,
    example_local_min_level, fourier_block_path, WeylExample, AREA_BLOWUP_MAX_N,
};

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_path::LatticePath;
use crate::rng::{complex_gaussian, digits as random_digits, gaussian, task_rng};
use crate::variation::maximal_block_oscillation;

/// Coefficients `c_0, c_1, ..., c_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientSeq(Vec<Complex64>);

#[derive(Debug, Serialize, Deserialize)]
struct CoefficientRow {
    index: usize,
    re: f64,
    im: f64,
}

impl CoefficientSeq {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient sequence".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// Largest index `N`.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im == 0.0)
    }

    /// `sum_n w(n) |c_n|^2`.
    pub fn weighted_energy(&self, weight: impl Fn(usize) -> f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(n, c)| weight(n) * c.norm_sqr())
            .sum()
    }

    /// Complex Gaussian coefficients `c_1..c_N` rescaled to unit energy, `c_0 = 0`.
    pub fn random_unit(degree: usize, seed: u64, task: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        let mut rng = task_rng(seed, task);
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend((0..degree).map(|_| complex_gaussian(&mut rng)));
        let scale = coeffs.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        coeffs.iter_mut().for_each(|c| *c /= scale);
        Self::new(coeffs)
    }

    /// CSV with header `index,re,im`; missing indices are zero.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows: Vec<CoefficientRow> = Vec::new();
        for row in rdr.deserialize() {
            rows.push(row?);
        }
        let len = rows
            .iter()
            .map(|r| r.index + 1)
            .max()
            .ok_or_else(|| Error::InvalidArgument("empty coefficient file".into()))?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        let mut seen = vec![false; len];
        for r in rows {
            if std::mem::replace(&mut seen[r.index], true) {
                return Err(Error::Parse(format!("duplicate coefficient index {}", r.index)));
            }
            coeffs[r.index] = Complex64::new(r.re, r.im);
        }
        Self::new(coeffs)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        for (index, c) in self.0.iter().enumerate() {
            wtr.serialize(CoefficientRow {
                index,
                re: c.re,
                im: c.im,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Orthonormal system on a finite probability space `{0, ..., m-1}` with uniform
/// weights: `u_n(ω) = sqrt(m) Q[ω, n]` for an orthogonal matrix `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOns {
    q: DMatrix<f64>,
    seed: Option<u64>,
}

impl DiscreteOns {
    /// `Q` from the QR factorisation of a seeded Gaussian `m x m` matrix, with the
    /// signs fixed so that `R` has a positive diagonal.
    pub fn haar(m: usize, seed: u64) -> Result<Self> {
        Self::haar_stream(m, seed, 0)
    }

    /// As [`DiscreteOns::haar`], drawing from stream `task` of the seed.
    pub fn haar_stream(m: usize, seed: u64, task: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        let mut rng = task_rng(seed, task);
        let g = DMatrix::from_fn(m, m, |_, _| gaussian(&mut rng));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for c in 0..m {
            if r[(c, c)] < 0.0 {
                q.column_mut(c).neg_mut();
            }
        }
        Ok(Self {
            q,
            seed: (task == 0).then_some(seed),
        })
    }

    /// Wrap a square matrix with orthonormal columns.
    pub fn from_matrix(q: DMatrix<f64>) -> Result<Self> {
        if !q.is_square() || q.nrows() == 0 {
            return Err(Error::InvalidArgument("Q must be a non-empty square matrix".into()));
        }
        let gram = q.transpose() * &q;
        let defect = (gram - DMatrix::identity(q.nrows(), q.nrows())).amax();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "Q is not orthogonal (max Gram defect {defect:e})"
            )));
        }
        Ok(Self { q, seed: None })
    }

    pub fn m(&self) -> usize {
        self.q.nrows()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn value(&self, n: usize, omega: usize) -> f64 {
        (self.m() as f64).sqrt() * self.q[(omega, n)]
    }

    /// `max |<u_i, u_j> - δ_ij|` under the uniform measure.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.m();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let ip: f64 = (0..m).map(|w| self.value(i, w) * self.value(j, w)).sum::<f64>()
                    / m as f64;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).abs());
            }
        }
        worst
    }
}

/// Serializable description of a system, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SystemSpec {
    Fourier,
    Discrete { m: usize, seed: u64 },
    DigitBlock { m: Vec<usize>, n: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrthonormalSystem {
    /// `u_n(θ) = e^{inθ}` under `dθ / 2π` on `[0, 2π)`.
    Fourier,
    Discrete(DiscreteOns),
    DigitBlock(DigitBlockSystem),
}

/// A point of the underlying probability space.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplePoint {
    Theta(f64),
    Omega(usize),
    Digits(Vec<u8>),
}

impl OrthonormalSystem {
    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        Ok(match spec {
            SystemSpec::Fourier => Self::Fourier,
            SystemSpec::Discrete { m, seed } => Self::Discrete(DiscreteOns::haar(*m, *seed)?),
            SystemSpec::DigitBlock { m, n } => {
                Self::DigitBlock(DigitBlockSystem::new(BlockPlan::new(m.clone(), n.clone())?))
            }
        })
    }

    /// `None` if the stored matrix was not produced from a seed.
    pub fn spec(&self) -> Option<SystemSpec> {
        match self {
            Self::Fourier => Some(SystemSpec::Fourier),
            Self::Discrete(ons) => ons.seed().map(|seed| SystemSpec::Discrete { m: ons.m(), seed }),
            Self::DigitBlock(sys) => Some(SystemSpec::DigitBlock {
                m: sys.plan().m().to_vec(),
                n: sys.plan().n().to_vec(),
            }),
        }
    }

    /// Number of available functions, `None` if unbounded.
    pub fn len(&self) -> Option<usize> {
        match self {
            Self::Fourier => None,
            Self::Discrete(ons) => Some(ons.m()),
            Self::DigitBlock(sys) => Some(sys.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Equally weighted points representing the measure: the exact space for
    /// discrete systems, a midpoint grid of `resolution` angles for Fourier, all
    /// digit strings when there are at most 20 digits and otherwise `resolution`
    /// seeded random strings.
    pub fn sample_points(&self, resolution: usize, seed: u64) -> Vec<SamplePoint> {
        match self {
            Self::Fourier => (0..resolution)
                .map(|i| {
                    SamplePoint::Theta(std::f64::consts::TAU * (i as f64 + 0.5) / resolution as f64)
                })
                .collect(),
            Self::Discrete(ons) => (0..ons.m()).map(SamplePoint::Omega).collect(),
            Self::DigitBlock(sys) => {
                let bits = sys.plan().total_digits();
                if bits <= digits::EXHAUSTIVE_DIGITS {
                    (0..1usize << bits)
                        .map(|word| {
                            SamplePoint::Digits(
                                (0..bits).map(|b| (word >> (bits - 1 - b) & 1) as u8).collect(),
                            )
                        })
                        .collect()
                } else {
                    (0..resolution)
                        .map(|t| {
                            SamplePoint::Digits(random_digits(&mut task_rng(seed, t as u64), bits))
                        })
                        .collect()
                }
            }
        }
    }

    fn check_sample(&self, sample: &SamplePoint) -> Result<()> {
        match (self, sample) {
            (Self::Fourier, SamplePoint::Theta(t)) if t.is_finite() => Ok(()),
            (Self::Discrete(ons), SamplePoint::Omega(w)) if *w < ons.m() => Ok(()),
            (Self::DigitBlock(sys), SamplePoint::Digits(d))
                if d.len() >= sys.plan().total_digits() =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidArgument(format!(
                "sample point {sample:?} does not belong to this system"
            ))),
        }
    }
}

/// Partial sums `x_k = sum_{j <= k} c_j u_j(ω)` for `k = 0..=N`.
///
/// Fourier paths are complex and returned as `d = 2`; real systems give `d = 1`
/// for real coefficients and `d = 2` otherwise.
pub fn partial_sum_path(
    system: &OrthonormalSystem,
    coeffs: &CoefficientSeq,
    sample: &SamplePoint,
    n: usize,
) -> Result<LatticePath> {
    if n > coeffs.degree() {
        return Err(Error::InvalidArgument(format!(
            "N = {n} exceeds coefficient degree {}",
            coeffs.degree()
        )));
    }
    if let Some(len) = system.len() {
        if n >= len {
            return Err(Error::InvalidArgument(format!(
                "N = {n} needs {} functions but the system has {len}",
                n + 1
            )));
        }
    }
    system.check_sample(sample)?;
    let c = &coeffs.as_slice()[..=n];
    let mut acc = Complex64::new(0.0, 0.0);
    let sums: Vec<Complex64> = match (system, sample) {
        (OrthonormalSystem::Fourier, SamplePoint::Theta(theta)) => c
            .iter()
            .enumerate()
            .map(|(j, cj)| {
                acc += cj * Complex64::from_polar(1.0, j as f64 * theta);
                acc
            })
            .collect(),
        (OrthonormalSystem::Discrete(ons), SamplePoint::Omega(w)) => c
            .iter()
            .enumerate()
            .map(|(j, cj)| {
                acc += cj * ons.value(j, *w);
                acc
            })
            .collect(),
        (OrthonormalSystem::DigitBlock(sys), SamplePoint::Digits(d)) => {
            let mut out = Vec::with_capacity(c.len());
            for (j, cj) in c.iter().enumerate() {
                acc += cj * sys.value(j, d)?;
                out.push(acc);
            }
            out
        }
        _ => unreachable!("checked above"),
    };
    let real = coeffs.is_real() && !matches!(system, OrthonormalSystem::Fourier);
    if real {
        LatticePath::from_flat(1, sums.iter().map(|z| z.re).collect())
    } else {
        LatticePath::from_complex(&sums)
    }
}

/// `b_n = (sum_{2^n < k <= 2^{n+1}} |c_k|^2)^{1/2}`, last block possibly partial.
pub fn block_reparametrize(coeffs: &CoefficientSeq) -> Vec<f64> {
    let c = coeffs.as_slice();
    let top = coeffs.degree();
    let mut out = Vec::new();
    let mut n = 0u32;
    while (1usize << n) < top {
        let lo = (1usize << n) + 1;
        let hi = (1usize << (n + 1)).min(top);
        out.push(c[lo..=hi].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt());
        n += 1;
    }
    out
}

/// Lower estimate of the maximal-inequality constant from random trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyEstimate {
    pub c_hat: f64,
    pub ratios: Vec<f64>,
}

/// `max` over `trials` random unit-energy sequences of degree `n` of
/// `∫ max_{i <= j} |sum_{k=i}^{j} c_k u_k|^2 dμ`. This is a lower bound for the
/// true constant.
pub fn estimate_hardy(
    system: &OrthonormalSystem,
    n: usize,
    trials: usize,
    resolution: usize,
    seed: u64,
) -> Result<HardyEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let points = system.sample_points(resolution, seed);
    let ratios = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let coeffs = CoefficientSeq::random_unit(n, seed, 1 + t as u64)?;
            block_oscillation_mean(system, &coeffs, &points)
        })
        .collect::<Result<Vec<f64>>>()?;
    let c_hat = ratios.iter().copied().fold(0.0, f64::max);
    Ok(HardyEstimate { c_hat, ratios })
}

/// `∫ max_{i <= j} |sum_{k=i}^{j} c_k u_k|^2 dμ` on equally weighted points.
pub fn block_oscillation_mean(
    system: &OrthonormalSystem,
    coeffs: &CoefficientSeq,
    points: &[SamplePoint],
) -> Result<f64> {
    let mut total = 0.0;
    for p in points {
        let path = partial_sum_path(system, coeffs, p, coeffs.degree())?;
        total += maximal_block_oscillation(&path);
    }
    Ok(total / points.len() as f64)
}
