//! Explicit coefficient families.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::CoefficientSeq;
use crate::error::{Error, Result};
use crate::lattice_path::LatticePath;

/// Largest block index materialised as explicit coefficients.
const MAX_MATERIALISED_LEVEL: u32 = 22;

/// `c_k = 1 / (n 2^{n/2})` for `2^n < k <= 2^{n+1}`, `1 <= n <= n_max`; zero for `k <= 2`.
pub fn coeffs_finite2var_example(n_max: u32) -> Result<CoefficientSeq> {
    if n_max == 0 || n_max > MAX_MATERIALISED_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "n_max must lie in 1..={MAX_MATERIALISED_LEVEL}, got {n_max}"
        )));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); (1usize << (n_max + 1)) + 1];
    for n in 1..=n_max {
        let value = 1.0 / (n as f64 * 2f64.powf(n as f64 / 2.0));
        for ck in &mut c[(1usize << n) + 1..=(1usize << (n + 1))] {
            *ck = Complex64::new(value, 0.0);
        }
    }
    CoefficientSeq::new(c)
}

/// Partial sums of the previous example over block `n` at angle `θ`, knots
/// `2^n..=2^{n+1}` re-indexed from 0 and started at the origin.
///
/// With `closed_form` the geometric sum
/// `(e^{i(2^n+1)θ} - e^{i(k+1)θ}) / (n 2^{n/2} (1 - e^{iθ}))` is used, falling back
/// to direct summation when `|1 - e^{iθ}| < 1e-8`.
pub fn fourier_block_path(n: u32, theta: f64, closed_form: bool) -> Result<LatticePath> {
    if n == 0 || n > MAX_MATERIALISED_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "block level must lie in 1..={MAX_MATERIALISED_LEVEL}, got {n}"
        )));
    }
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::InvalidArgument(format!("θ = {theta} outside (0, 2π)")));
    }
    let start = 1usize << n;
    let scale = 1.0 / (n as f64 * 2f64.powf(n as f64 / 2.0));
    let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
    let mut values = Vec::with_capacity(start + 1);
    values.push(Complex64::new(0.0, 0.0));
    if closed_form && denom.norm() >= 1e-8 {
        let head = Complex64::from_polar(1.0, (start + 1) as f64 * theta);
        for k in start + 1..=2 * start {
            let tail = Complex64::from_polar(1.0, (k + 1) as f64 * theta);
            values.push((head - tail) * scale / denom);
        }
    } else {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in start + 1..=2 * start {
            acc += Complex64::from_polar(scale, k as f64 * theta);
            values.push(acc);
        }
    }
    LatticePath::from_complex(&values)
}

/// `C_θ = 49 π θ / (2 sin^2(θ/2))`.
pub fn example_local_constant(theta: f64) -> f64 {
    49.0 * PI * theta / (2.0 * (theta / 2.0).sin().powi(2))
}

/// Smallest block level `n >= max(log2(2π/θ), 1)` where the local bound applies.
pub fn example_local_min_level(theta: f64) -> u32 {
    (TAU / theta).log2().ceil().max(1.0) as u32
}

/// Block weights of the example built from a growth function `w`.
///
/// `r(n) = w(2^n) / (log2 n)^2`, `r(N-1) = r(N)/2`, `r'(n) = (r(n+1) - r(n-1)) / 2` and
/// `1/a(n) = r'(n) / (r(n) sqrt((log2 n)^2 w(2^n)))`. The coefficients are
/// `c_k = a(n)^{-1/2} 2^{-n/2}` on `2^n < k <= 2^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylExample {
    n_start: u32,
    w: Vec<f64>,
    r: Vec<f64>,
    inv_a: Vec<f64>,
}

impl WeylExample {
    /// `w_dyadic[n] = w(2^n)`; needs entries up to `n_max + 1`.
    pub fn new(w_dyadic: &[f64], n_start: u32, n_max: u32) -> Result<Self> {
        if n_start < 2 || n_max < n_start {
            return Err(Error::InvalidArgument(format!(
                "need 2 <= n_start <= n_max, got {n_start}, {n_max}"
            )));
        }
        let top = n_max as usize + 1;
        if w_dyadic.len() <= top {
            return Err(Error::InvalidArgument(format!(
                "w table has {} entries, need {}",
                w_dyadic.len(),
                top + 1
            )));
        }
        let w = &w_dyadic[n_start as usize..=top];
        if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) || w.windows(2).any(|p| p[1] < p[0]) {
            return Err(Error::InvalidArgument(
                "w must be positive and non-decreasing".into(),
            ));
        }
        // r[0] is r(n_start - 1)
        let mut r = vec![0.0];
        r.extend((n_start..=n_max + 1).map(|n| {
            let l = f64::from(n).log2();
            w_dyadic[n as usize] / (l * l)
        }));
        r[0] = 0.5 * r[1];
        if r[1..].windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidArgument(
                "r(n) = w(2^n) / (log2 n)^2 must be strictly increasing".into(),
            ));
        }
        let inv_a = (n_start..=n_max)
            .map(|n| {
                let idx = (n - n_start + 1) as usize;
                let deriv = 0.5 * (r[idx + 1] - r[idx - 1]);
                let l = f64::from(n).log2();
                deriv / (r[idx] * (l * l * w_dyadic[n as usize]).sqrt())
            })
            .collect();
        Ok(Self {
            n_start,
            w: w.to_vec(),
            r,
            inv_a,
        })
    }

    pub fn n_start(&self) -> u32 {
        self.n_start
    }

    pub fn n_max(&self) -> u32 {
        self.n_start + self.inv_a.len() as u32 - 1
    }

    /// `r(n)` for `n_start - 1 <= n <= n_max + 1`.
    pub fn r(&self, n: u32) -> f64 {
        self.r[(n + 1 - self.n_start) as usize]
    }

    /// `1/a(n)`, which is also the block energy `sum_{2^n < k <= 2^{n+1}} |c_k|^2`.
    pub fn inv_a(&self, n: u32) -> f64 {
        self.inv_a[(n - self.n_start) as usize]
    }

    /// Partial sums of `(log2 n)^2 / a(n)`, bounded by `2 / sqrt(r(N-1))`.
    pub fn log_weighted_partial_sums(&self) -> Vec<f64> {
        self.partial_sums(|n| f64::from(n).log2().powi(2))
    }

    /// Partial sums of `w(2^n) / a(n)`, which grow like `sqrt(r(n))`.
    pub fn w_weighted_partial_sums(&self) -> Vec<f64> {
        self.partial_sums(|n| self.w[(n - self.n_start) as usize])
    }

    fn partial_sums(&self, weight: impl Fn(u32) -> f64) -> Vec<f64> {
        let mut acc = 0.0;
        (self.n_start..=self.n_max())
            .map(|n| {
                acc += weight(n) * self.inv_a(n);
                acc
            })
            .collect()
    }

    /// Explicit coefficients up to index `2^{n_max + 1}`.
    pub fn to_coefficients(&self) -> Result<CoefficientSeq> {
        let n_max = self.n_max();
        if n_max > MAX_MATERIALISED_LEVEL {
            return Err(Error::TooLarge(format!(
                "materialising 2^{} coefficients",
                n_max + 1
            )));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); (1usize << (n_max + 1)) + 1];
        for n in self.n_start..=n_max {
            let value = (self.inv_a(n) / 2f64.powi(n as i32)).sqrt();
            for ck in &mut c[(1usize << n) + 1..=(1usize << (n + 1))] {
                *ck = Complex64::new(value, 0.0);
            }
        }
        CoefficientSeq::new(c)
    }
}

pub const AREA_BLOWUP_MAX_N: u32 = 8;

/// `ceil(64 · 2^{2n} / n)`.
pub fn area_blowup_min_grid(n: u32) -> usize {
    (64usize << (2 * n)).div_ceil(n as usize)
}

/// `f_n(θ) = sum_{k=1}^{n} 2^{-k} exp(2πi (2^{2k}/k) θ)` sampled at `θ = i/M`,
/// `i = 0..=M`. `M` defaults to [`area_blowup_min_grid`].
pub fn area_blowup_path(n: u32, grid: Option<usize>) -> Result<LatticePath> {
    if n == 0 || n > AREA_BLOWUP_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 1..={AREA_BLOWUP_MAX_N}, got {n}"
        )));
    }
    let min = area_blowup_min_grid(n);
    let m = grid.unwrap_or(min);
    if m < min {
        return Err(Error::TooLarge(format!(
            "grid of {m} points is too coarse for n = {n}; need at least {min}"
        )));
    }
    let terms: Vec<(f64, f64)> = (1..=n)
        .map(|k| {
            let freq = f64::from(1u32 << (2 * k)) / f64::from(k);
            (0.5f64.powi(k as i32), TAU * freq)
        })
        .collect();
    let values: Vec<Complex64> = (0..=m)
        .map(|i| {
            let t = i as f64 / m as f64;
            terms
                .iter()
                .map(|&(amp, omega)| Complex64::from_polar(amp, omega * t))
                .sum()
        })
        .collect();
    LatticePath::from_complex(&values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite2var_coefficients() {
        let c = coeffs_finite2var_example(2).unwrap();
        assert_eq!(c.degree(), 8);
        let s = c.as_slice();
        assert_eq!(s[2].re, 0.0);
        assert!((s[3].re - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((s[8].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn block_path_closed_form_matches_direct() {
        for theta in [0.3, PI / 2.0, PI, 5.0] {
            let a = fourier_block_path(6, theta, true).unwrap();
            let b = fourier_block_path(6, theta, false).unwrap();
            for (x, y) in a.as_flat().iter().zip(b.as_flat()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(fourier_block_path(3, 0.0, true).is_err());
    }

    #[test]
    fn flat_growth_is_rejected() {
        let w = vec![1.0; 20];
        assert!(WeylExample::new(&w, 2, 10).is_err());
    }

    #[test]
    fn block_energy_equals_inverse_a() {
        let w: Vec<f64> = (0..12).map(|n| f64::from(n.max(2) as u32).log2().powi(3)).collect();
        let ex = WeylExample::new(&w, 2, 8).unwrap();
        let c = ex.to_coefficients().unwrap();
        let b = super::super::block_reparametrize(&c);
        for n in 2..=8u32 {
            assert!((b[n as usize].powi(2) - ex.inv_a(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn blowup_grid_guard() {
        assert!(matches!(area_blowup_path(3, Some(100)), Err(Error::TooLarge(_))));
        let path = area_blowup_path(1, None).unwrap();
        assert_eq!(path.n(), 256);
        assert!((path.point(0)[0] - 0.5).abs() < 1e-15);
    }
}
