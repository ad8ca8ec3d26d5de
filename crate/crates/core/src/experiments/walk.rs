//! Growth of the 2-variation of walks built from digit-block cosines.

use rayon::prelude::*;

use super::{Detail, Outcome, Params};
use crate::error::{Error, Result};
use crate::rng::{digits, task_rng};
use crate::series::walk_path;
use crate::variation::p_var_exact;

const EXHAUSTIVE_DIGITS: usize = 20;

/// `|Y_m^n|²_2-var` for every enumerated or sampled digit string.
pub fn walk_two_var_samples(m: usize, n: u32, samples: usize, seed: u64, stream: u64) -> Result<Vec<f64>> {
    let bits = m * n as usize;
    let strings: Vec<Vec<u8>> = if bits <= EXHAUSTIVE_DIGITS {
        (0..1usize << bits)
            .map(|w| (0..bits).map(|b| (w >> (bits - 1 - b) & 1) as u8).collect())
            .collect()
    } else {
        (0..samples)
            .map(|s| digits(&mut task_rng(seed, (stream << 32) | s as u64), bits))
            .collect()
    };
    strings
        .par_iter()
        .map(|d| {
            let path = walk_path(m, n, d)?;
            Ok(p_var_exact(&path, 2.0, path.full())?.power_sum)
        })
        .collect()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

pub(super) fn walk_growth(params: &mut Params) -> Result<Outcome> {
    let seed = params.u64("seed", 0)?;
    let ms: Vec<usize> = params.list("m_list", &[64, 256, 1024])?;
    let n = params.u32("n", 16)?;
    let samples = params.usize("samples", 500)?;
    let level = params.f64("c", 1.0)?;
    if ms.is_empty() || ms.contains(&0) || samples == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "m_list, n and samples must be non-empty and positive".into(),
        ));
    }
    let mut details = Vec::new();
    let mut notes = Vec::new();
    let mut medians = Vec::new();
    for (i, &m) in ms.iter().enumerate() {
        let mut values = walk_two_var_samples(m, n, samples, seed, i as u64)?;
        let exceed = values.iter().filter(|&&v| v > level).count() as f64 / values.len() as f64;
        let med = median(&mut values);
        notes.push(format!(
            "m = {m}: median |Y|²_2-var = {med:.6}, P(|Y|²_2-var > {level}) = {exceed:.4} over {} strings",
            values.len()
        ));
        let prev = medians.last().copied();
        details.push(match prev {
            None => Detail::new(format!("median m = {m}"), med, 0.0, true),
            Some(p) => Detail::new(format!("median m = {m}"), med, p, med > p),
        });
        medians.push(med);
    }
    let pass = details.iter().all(|d| d.pass);
    Ok(Outcome {
        lhs: medians[medians.len() - 1],
        rhs: medians[0],
        pass,
        notes,
        details,
    })
}
