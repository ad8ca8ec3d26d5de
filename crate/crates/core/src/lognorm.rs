//! Logarithmic Sobolev-type norms of trigonometric series.
//!
//! Coefficient side: `l_s(f) = sum_n (log2(n+1))^{2s} |c_n|^2`.
//! Integral side: `L_s(f) = ∬ |f(u) - f(v)|^2 g_s((u-v)/2) du dv` over `[-π, π]^2` with
//! `g_s(x) = (log2(π / |sin x|))^{2s-1} / |sin x|`.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::CoefficientSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Midpoint,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Grid size per axis for 2-D rules, minimum panel count for 1-D rules.
    /// 2-D rules always use the midpoint grid; `scheme` selects the 1-D rule.
    pub m: usize,
    pub scheme: Scheme,
    /// Half-width of the excluded band around `u = v`.
    pub diag_exclusion: f64,
    /// Absolute error target per panel for adaptive 1-D rules.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            m: 2048,
            scheme: Scheme::Adaptive,
            diag_exclusion: 1e-4,
            tolerance: 1e-13,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m < 16 {
            return Err(Error::InvalidArgument(format!("M = {} below 16", self.m)));
        }
        if !(self.diag_exclusion >= 0.0 && self.diag_exclusion < PI / 4.0) {
            return Err(Error::InvalidArgument(format!(
                "band half-width {} outside [0, π/4)",
                self.diag_exclusion
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("s = {s} must be positive")))
    }
}

/// `sum_n (log2(n+1))^{2s} |c_n|^2`.
pub fn l_norm(c: &CoefficientSeq, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(c.weighted_energy(|n| ((n + 1) as f64).log2().powf(2.0 * s)))
}

/// `g_s(x)` as a function of `|sin x|`.
#[inline]
fn log_kernel(sin_abs: f64, s: f64) -> f64 {
    let base = 1.0 / sin_abs;
    if s == 0.5 {
        base
    } else {
        base * (PI / sin_abs).log2().powf(2.0 * s - 1.0)
    }
}

/// Integrate `f` over `[a, b]` split into `panels` equal pieces, summing in order.
fn integrate_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, q: &QuadratureSpec) -> f64 {
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let hi = if p + 1 == panels { b } else { lo + width };
        total += match q.scheme {
            Scheme::Adaptive => quadrature::double_exponential::integrate(&f, lo, hi, q.tolerance).integral,
            Scheme::Midpoint => {
                const SUB: usize = 32;
                let h = (hi - lo) / SUB as f64;
                (0..SUB).map(|i| f(lo + (i as f64 + 0.5) * h)).sum::<f64>() * h
            }
        };
    }
    total
}

/// `T_n^s = 8 ∫_0^π (π - η) sin^2(nη) / sin η (log2(π / sin η))^{2s-1} dη`, the 1-D
/// reduction of the monomial integral. `T_0 = 0`.
pub fn t_monomial(n: usize, s: f64, q: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    q.validate()?;
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let f = |eta: f64| {
        let se = eta.sin();
        if se <= 0.0 {
            return 0.0;
        }
        (PI - eta) * (nf * eta).sin().powi(2) * log_kernel(se, s)
    };
    Ok(8.0 * integrate_panels(f, 0.0, PI, q.m.max(4 * n), q))
}

/// `R_n^s = ∫_0^1 sin^2(πnt/2) / t (log2(2/t))^{2s-1} dt`. `R_0 = 0`.
pub fn r_monomial(n: usize, s: f64, q: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    q.validate()?;
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let w = (0.5 * PI * nf * t).sin().powi(2) / t;
        if s == 0.5 {
            w
        } else {
            w * (2.0 / t).log2().powf(2.0 * s - 1.0)
        }
    };
    Ok(integrate_panels(f, 0.0, 1.0, (q.m / 4).max(2 * n), q))
}

/// Bracket `[ln2 / 2^{2s+3}, ln2/(2s) + ln2 / 2^{2s+3}]` for `R_n^s / (log2(πn))^{2s}`,
/// asymptotic in `n`.
pub fn r_monomial_asymptotic_bracket(s: f64) -> (f64, f64) {
    let lo = LN_2 / 2f64.powf(2.0 * s + 3.0);
    (lo, LN_2 / (2.0 * s) + lo)
}

/// Smallest `n` from which the asymptotic bracket is claimed, `ceil(e^4 π) + 1`.
pub fn r_monomial_asymptotic_threshold() -> usize {
    (4f64.exp() * PI).ceil() as usize + 1
}

/// `L_s` of `sum_n c_n e^{inθ}` as `sum_n |c_n|^2 · 4 T_n^s`: distinct frequencies are
/// orthogonal and `|e^{inu} - e^{inv}|^2 = 4 sin^2(n(u-v)/2)`.
pub fn big_l_norm_spectral(c: &CoefficientSeq, s: f64, q: &QuadratureSpec) -> Result<f64> {
    let mut total = 0.0;
    for (n, cn) in c.as_slice().iter().enumerate() {
        let w = cn.norm_sqr();
        if w > 0.0 && n > 0 {
            total += w * 4.0 * t_monomial(n, s, q)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandedIntegral {
    pub value: f64,
    /// Half-width of the excluded band `|u - v| < h` (wrapped).
    pub band: f64,
}

/// Midpoint grid `u_i = -π + (i + ½) 2π / M` and the kernel at every grid difference,
/// zero inside the band.
fn grid_kernel(q: &QuadratureSpec, g: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>, f64) {
    let m = q.m;
    let h = TAU / m as f64;
    let grid = (0..m).map(|i| -PI + (i as f64 + 0.5) * h).collect();
    let kernel = (0..m)
        .map(|k| {
            let wrapped = k.min(m - k) as f64 * h;
            if k == 0 || wrapped < q.diag_exclusion {
                0.0
            } else {
                g(0.5 * k as f64 * h)
            }
        })
        .collect();
    (grid, kernel, h)
}

/// Midpoint-rule `∬ |f(u) - f(v)|^2 g_s((u-v)/2) du dv` on an `M x M` grid of
/// `[-π, π]^2`, excluding the band `|u - v| < h`. `f` is taken to be `2π`-periodic.
pub fn big_l_norm_quadrature(
    f: impl Fn(f64) -> Vec<f64>,
    s: f64,
    q: &QuadratureSpec,
) -> Result<BandedIntegral> {
    check_s(s)?;
    q.validate()?;
    let (grid, kernel, h) = grid_kernel(q, |x| log_kernel(x.sin().abs(), s));
    let values: Vec<Vec<f64>> = grid.iter().map(|&u| f(u)).collect();
    let d = values.first().map_or(0, Vec::len);
    if values.iter().any(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: values.iter().map(Vec::len).find(|&l| l != d).unwrap_or(d),
        });
    }
    let m = q.m;
    let mut total = 0.0;
    for (k, &gk) in kernel.iter().enumerate() {
        if gk == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for i in 0..m {
            let j = (i + m - k) % m;
            inner += values[i]
                .iter()
                .zip(&values[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        total += gk * inner;
    }
    Ok(BandedIntegral {
        value: total * h * h,
        band: q.diag_exclusion,
    })
}

/// `θ ↦ (Re, Im) of sum_n c_n e^{inθ}`.
pub fn trig_poly(c: &CoefficientSeq) -> impl Fn(f64) -> Vec<f64> + '_ {
    move |theta| {
        let z: Complex64 = c
            .as_slice()
            .iter()
            .enumerate()
            .map(|(n, cn)| cn * Complex64::from_polar(1.0, n as f64 * theta))
            .sum();
        vec![z.re, z.im]
    }
}

/// `∬ Re((e^{imu} - e^{imv}) conj(e^{inu} - e^{inv})) g((u-v)/2) du dv` on the midpoint
/// grid, for any kernel `g` with `g(x) = g(-x) = g(π - x)`.
pub fn cross_orthogonality_with(
    m: usize,
    n: usize,
    g: impl Fn(f64) -> f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if m == n {
        return Err(Error::InvalidArgument(
            "equal frequencies; use t_monomial".into(),
        ));
    }
    q.validate()?;
    let (grid, kernel, h) = grid_kernel(q, g);
    let a: Vec<Complex64> = grid.iter().map(|&u| Complex64::from_polar(1.0, m as f64 * u)).collect();
    let b: Vec<Complex64> = grid.iter().map(|&u| Complex64::from_polar(1.0, n as f64 * u)).collect();
    let size = q.m;
    let mut total = 0.0;
    for (k, &gk) in kernel.iter().enumerate() {
        if gk == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for i in 0..size {
            let j = (i + size - k) % size;
            inner += ((a[i] - a[j]) * (b[i] - b[j]).conj()).re;
        }
        total += gk * inner;
    }
    Ok(total * h * h)
}

/// [`cross_orthogonality_with`] for the kernel `g_s`.
pub fn cross_orthogonality(m: usize, n: usize, s: f64, q: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    cross_orthogonality_with(m, n, |x| log_kernel(x.sin().abs(), s), q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComparison {
    /// `∫_0^1 g(t) (log2(b/t))^s dt`
    pub with_b: f64,
    /// `∫_0^1 g(t) (log2(a/t))^s dt`
    pub with_a: f64,
    /// `(log_b a)^s · with_b`
    pub upper: f64,
}

impl LogComparison {
    pub fn holds(&self, rel: f64) -> bool {
        let slack = rel * self.upper.abs().max(1e-300);
        self.with_b <= self.with_a + slack && self.with_a <= self.upper + slack
    }
}

/// Both sides of `∫g (log2(b/t))^s <= ∫g (log2(a/t))^s <= (log_b a)^s ∫g (log2(b/t))^s`
/// for `a > b > 1`, `s >= 0` and non-negative `g` on `(0, 1)`.
pub fn log_comparison_check(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    s: f64,
    q: &QuadratureSpec,
) -> Result<LogComparison> {
    if !(a > b && b > 1.0) || !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need a > b > 1 and s >= 0, got a = {a}, b = {b}, s = {s}"
        )));
    }
    q.validate()?;
    let panels = (q.m / 64).max(4);
    let side = |c: f64| {
        integrate_panels(
            |t| if t <= 0.0 { 0.0 } else { g(t) * (c / t).log2().powf(s) },
            0.0,
            1.0,
            panels,
            q,
        )
    };
    let with_b = side(b);
    let with_a = side(a);
    Ok(LogComparison {
        with_b,
        with_a,
        upper: (a.ln() / b.ln()).powf(s) * with_b,
    })
}

/// `l(r) <= l(p)^{1-θ} l(q)^θ` with `r = (1-θ)p + θq`, up to `1e-10` relative slack.
pub fn holder_interpolation_check(c: &CoefficientSeq, p: f64, q: f64, theta: f64) -> Result<bool> {
    if !(0.0 < p && p < q) || !(0.0 < theta && theta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < p < q and θ in (0, 1), got p = {p}, q = {q}, θ = {theta}"
        )));
    }
    let r = (1.0 - theta) * p + theta * q;
    let lr = l_norm(c, r)?;
    let bound = l_norm(c, p)?.powf(1.0 - theta) * l_norm(c, q)?.powf(theta);
    Ok(lr <= bound * (1.0 + 1e-10))
}
