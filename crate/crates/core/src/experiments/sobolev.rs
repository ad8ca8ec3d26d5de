//! Monomial brackets between the coefficient and integral log-norms.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{Detail, Outcome, Params};
use crate::error::{Error, Result};
use crate::lognorm::{
    cross_orthogonality, r_monomial, r_monomial_asymptotic_bracket,
    r_monomial_asymptotic_threshold, t_monomial, QuadratureSpec, Scheme,
};
use crate::rng::task_rng;

pub(super) fn sobolev_equiv(params: &mut Params) -> Result<Outcome> {
    let seed = params.u64("seed", 0)?;
    let s = params.f64("s", 0.5)?;
    let n_max = params.usize("n_max", 512)?;
    let tol = params.f64("tol", 0.02)?;
    let pairs = params.usize("pairs", 20)?;
    let pair_max = params.usize("pair_max", 64)?;
    let grid = params.usize("grid", 2048)?;
    let cross_tol = params.f64("cross_tol", 1e-4)?;
    if s < 0.5 || n_max == 0 || pair_max < 2 {
        return Err(Error::InvalidArgument(
            "need s >= 1/2, n_max >= 1 and pair_max >= 2".into(),
        ));
    }
    let q1 = QuadratureSpec {
        m: 64,
        scheme: Scheme::Adaptive,
        diag_exclusion: 0.0,
        tolerance: 1e-13,
    };
    let q2 = QuadratureSpec {
        m: grid,
        scheme: Scheme::Midpoint,
        diag_exclusion: 0.0,
        tolerance: 1e-13,
    };
    let values = (1..=n_max)
        .into_par_iter()
        .map(|n| Ok((t_monomial(n, s, &q1)?, r_monomial(n, s, &q1)?)))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let upper_factor = 8.0 * PI * PI * PI.log2().powf(2.0 * s - 1.0);
    let mut lower_worst = (0usize, f64::INFINITY);
    let mut upper_worst = (0usize, 0.0f64);
    for (i, &(t, r)) in values.iter().enumerate() {
        let lo = t / (4.0 * PI * r);
        let hi = t / (upper_factor * r);
        if lo < lower_worst.1 {
            lower_worst = (i + 1, lo);
        }
        if hi > upper_worst.1 {
            upper_worst = (i + 1, hi);
        }
    }
    let (ln, un) = (lower_worst.0, upper_worst.0);
    let (tl, rl) = values[ln - 1];
    let (tu, ru) = values[un - 1];
    let mut details = vec![
        Detail::bound(format!("4πR <= T, tightest at n = {ln}"), 4.0 * PI * rl, tl * (1.0 + tol)),
        Detail::bound(
            format!("T <= 8π²(log2 π)^(2s-1) R, tightest at n = {un}"),
            tu,
            upper_factor * ru * (1.0 + tol),
        ),
    ];
    let mut rng = task_rng(seed, 0);
    let chosen: Vec<(usize, usize)> = (0..pairs)
        .map(|_| loop {
            let a = rng.random_range(1..=pair_max);
            let b = rng.random_range(1..=pair_max);
            if a != b {
                break (a, b);
            }
        })
        .collect();
    let cross = chosen
        .par_iter()
        .map(|&(a, b)| -> Result<Detail> {
            let v = cross_orthogonality(a, b, s, &q2)?;
            let scale = (t_monomial(a, s, &q1)? * t_monomial(b, s, &q1)?).sqrt();
            Ok(Detail::bound(format!("cross term ({a}, {b})"), v.abs(), cross_tol * scale))
        })
        .collect::<Result<Vec<_>>>()?;
    details.extend(cross);

    let mut notes = Vec::new();
    if n_max >= 2 {
        let ratios: Vec<f64> = values[1..]
            .iter()
            .enumerate()
            .map(|(i, &(t, _))| t / ((i + 3) as f64).log2())
            .collect();
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(0.0, f64::max);
        notes.push(format!(
            "T_n / log2(n+1) over n = 2..={n_max}: min {min:.6}, max {max:.6} (empirical bracket, no constant asserted)"
        ));
    }
    let threshold = r_monomial_asymptotic_threshold();
    if n_max >= threshold {
        let (lo, hi) = r_monomial_asymptotic_bracket(s);
        let scaled: Vec<f64> = (threshold..=n_max)
            .map(|n| values[n - 1].1 / (PI * n as f64).log2().powf(2.0 * s))
            .collect();
        let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        let max = scaled.iter().copied().fold(0.0, f64::max);
        notes.push(format!(
            "R_n / (log2(πn))^(2s) over n = {threshold}..={n_max}: [{min:.6}, {max:.6}]; asymptotic bracket [{lo:.6}, {hi:.6}] (reported, not asserted)"
        ));
    }
    Ok(Outcome::worst_of(details, notes))
}
