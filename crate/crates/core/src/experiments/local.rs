//! Explicit Fourier examples: the local block bound and the area blow-up family.

use std::f64::consts::PI;

use super::{Detail, Outcome, Params};
use crate::error::{Error, Result};
use crate::levy_area::area_one_var;
use crate::series::{
    area_blowup_path, example_local_constant, example_local_min_level, fourier_block_path,
    AREA_BLOWUP_MAX_N,
};
use crate::variation::p_var_exact;

pub(super) fn example_local(params: &mut Params) -> Result<Outcome> {
    let theta = params.f64("theta", PI)?;
    let n_min = params.u32("n_min", 6)?;
    let n_max = params.u32("n_max", 12)?;
    let closed_form = params.bool("closed_form", true)?;
    if n_min == 0 || n_max < n_min || n_max > 16 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_min <= n_max <= 16, got {n_min}..{n_max}"
        )));
    }
    let c_theta = example_local_constant(theta);
    let first = example_local_min_level(theta).max(n_min);
    let mut notes = vec![format!(
        "C_θ = 49πθ / (2 sin²(θ/2)) = {c_theta:.6}; bound applies for n >= {}",
        example_local_min_level(theta)
    )];
    if first > n_min {
        notes.push(format!("levels {n_min}..{} skipped: below the applicability threshold", first - 1));
    }
    let mut details = Vec::new();
    for n in first..=n_max {
        let path = fourier_block_path(n, theta, closed_form)?;
        let full = path.full();
        let lhs = p_var_exact(&path, 2.0, full)?.power_sum + area_one_var(&path, full)?.power_sum;
        details.push(Detail::bound(format!("n = {n}"), lhs, c_theta / f64::from(n * n)));
    }
    if details.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no block level in {n_min}..={n_max} satisfies n >= {}",
            example_local_min_level(theta)
        )));
    }
    Ok(Outcome::worst_of(details, notes))
}

/// 2-variation norm and area 1-variation of `f_n` on its default grid.
pub fn area_blowup_profile(n: u32) -> Result<(f64, f64)> {
    let path = area_blowup_path(n, None)?;
    let full = path.full();
    let pv = p_var_exact(&path, 2.0, full)?.power_sum.sqrt();
    let av = area_one_var(&path, full)?.power_sum;
    Ok((pv, av))
}

pub(super) fn area_blowup(params: &mut Params) -> Result<Outcome> {
    let n_max = params.u32("n_max", 6)?;
    let pvar_tol = params.f64("pvar_tol", 0.05)?;
    let area_factor = params.f64("area_factor", 1.5)?;
    if !(2..=AREA_BLOWUP_MAX_N).contains(&n_max) {
        return Err(Error::InvalidArgument(format!(
            "n_max must lie in 2..={AREA_BLOWUP_MAX_N}"
        )));
    }
    let profile = (1..=n_max).map(area_blowup_profile).collect::<Result<Vec<_>>>()?;
    let mut notes: Vec<String> = profile
        .iter()
        .enumerate()
        .map(|(i, (pv, av))| format!("n = {}: |f_n|_2-var = {pv:.6}, |A|_1-var = {av:.6}", i + 1))
        .collect();
    let (pv_prev, av_prev) = profile[profile.len() - 2];
    let (pv_last, av_last) = profile[profile.len() - 1];
    let change = (pv_last - pv_prev).abs() / pv_prev;
    let factor = av_last / av_prev;
    notes.push(format!(
        "from n = {} to {n_max}: relative 2-variation change {change:.4}, area 1-variation factor {factor:.4}",
        n_max - 1
    ));
    let details = vec![
        Detail::new("2-variation relative change", change, pvar_tol, change < pvar_tol),
        Detail::new("area 1-variation factor", factor, area_factor, factor > area_factor),
    ];
    let pass = details.iter().all(|d| d.pass);
    Ok(Outcome {
        lhs: factor,
        rhs: area_factor,
        pass,
        notes,
        details,
    })
}
