//! Exact p-variation over integer partitions.
//!
//! For a path that is linear between integer knots, the supremum over all real
//! partitions is attained on integer ones, so an `O(N^2)` dynamic program over
//! knot indices gives the exact value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_path::{dist_sq, IntervalZ, LatticePath};
use crate::levy_area::{self, AreaTable};

/// Maximal power sum `sum |x_{t_k} - x_{t_{k-1}}|^p` and a partition attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    pub power_sum: f64,
    pub partition: Vec<usize>,
}

impl VariationResult {
    fn trivial(a: usize) -> Self {
        Self {
            power_sum: 0.0,
            partition: vec![a],
        }
    }

    /// The p-variation norm, `power_sum^(1/p)`.
    pub fn norm(&self, p: f64) -> f64 {
        self.power_sum.powf(1.0 / p)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

#[inline]
pub(crate) fn power_of_dist(a: &[f64], b: &[f64], p: f64) -> f64 {
    let sq = dist_sq(a, b);
    if p == 2.0 {
        sq
    } else {
        sq.powf(0.5 * p)
    }
}

/// Maximise `sum w(t_{k-1}, t_k)` over increasing sequences from point `0` to point
/// `len - 1`. `column(j, buf)` fills `buf[i] = w(i, j)` for every `i < j`.
/// Ties go to the smallest predecessor.
pub(crate) fn best_partition<F>(len: usize, mut column: F) -> (f64, Vec<usize>)
where
    F: FnMut(usize, &mut [f64]),
{
    assert!(len >= 1);
    let mut value = vec![0.0f64; len];
    let mut pred = vec![0usize; len];
    let mut buf = vec![0.0f64; len];
    for j in 1..len {
        column(j, &mut buf[..j]);
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, (&v, &w)) in value[..j].iter().zip(&buf[..j]).enumerate() {
            let cand = v + w;
            if cand > best {
                best = cand;
                arg = i;
            }
        }
        value[j] = best;
        pred[j] = arg;
    }
    let mut partition = vec![len - 1];
    let mut k = len - 1;
    while k > 0 {
        k = pred[k];
        partition.push(k);
    }
    partition.reverse();
    (value[len - 1], partition)
}

/// Exact `p`-variation power sum of the path on `interval`.
pub fn p_var_exact(path: &LatticePath, p: f64, interval: IntervalZ) -> Result<VariationResult> {
    check_exponent(p)?;
    path.check_interval(interval)?;
    if interval.is_empty() {
        return Ok(VariationResult::trivial(interval.a));
    }
    let a = interval.a;
    let (power_sum, local) = best_partition(interval.len() + 1, |j, buf| {
        let xj = path.point(a + j);
        for (i, w) in buf.iter_mut().enumerate() {
            *w = power_of_dist(path.point(a + i), xj, p);
        }
    });
    Ok(VariationResult {
        power_sum,
        partition: local.into_iter().map(|k| k + a).collect(),
    })
}

/// Largest interval length accepted by [`p_var_bruteforce`].
pub const BRUTEFORCE_MAX_LEN: usize = 20;

/// Enumerates every subset of interior knots. Reference oracle for small intervals.
pub fn p_var_bruteforce(
    path: &LatticePath,
    p: f64,
    interval: IntervalZ,
) -> Result<VariationResult> {
    check_exponent(p)?;
    path.check_interval(interval)?;
    if interval.len() > BRUTEFORCE_MAX_LEN {
        return Err(Error::TooLarge(format!(
            "brute force limited to intervals of length <= {BRUTEFORCE_MAX_LEN}, got {}",
            interval.len()
        )));
    }
    if interval.is_empty() {
        return Ok(VariationResult::trivial(interval.a));
    }
    let interior = interval.len() - 1;
    let mut best = VariationResult {
        power_sum: f64::NEG_INFINITY,
        partition: Vec::new(),
    };
    let mut points = Vec::with_capacity(interval.len() + 1);
    for mask in 0u32..(1u32 << interior) {
        points.clear();
        points.push(interval.a);
        points.extend((0..interior).filter(|bit| mask >> bit & 1 == 1).map(|bit| interval.a + 1 + bit));
        points.push(interval.b);
        let sum = points
            .windows(2)
            .map(|w| power_of_dist(path.point(w[0]), path.point(w[1]), p))
            .fold(0.0, |acc, x| acc + x);
        if sum > best.power_sum {
            best.power_sum = sum;
            best.partition.clone_from(&points);
        }
    }
    Ok(best)
}

/// `max_{a <= s <= t <= b} |x_t - x_s|`.
pub fn sup_oscillation(path: &LatticePath, interval: IntervalZ) -> Result<f64> {
    path.check_interval(interval)?;
    let mut best = 0.0f64;
    for s in interval.a..=interval.b {
        for t in s + 1..=interval.b {
            best = best.max(dist_sq(path.point(s), path.point(t)));
        }
    }
    Ok(best.sqrt())
}

/// 1-variation of a stored area table: `sup sum |A(t_{k-1}, t_k)|_F`.
pub fn table_one_var(table: &AreaTable, interval: IntervalZ) -> Result<VariationResult> {
    if interval.a > interval.b || interval.b > table.n() {
        return Err(Error::InvalidInterval {
            a: interval.a,
            b: interval.b,
            n: table.n(),
        });
    }
    if interval.is_empty() {
        return Ok(VariationResult::trivial(interval.a));
    }
    let a = interval.a;
    let (power_sum, local) = best_partition(interval.len() + 1, |j, buf| {
        for (i, w) in buf.iter_mut().enumerate() {
            *w = levy_area::frobenius(table.get(a + i, a + j));
        }
    });
    Ok(VariationResult {
        power_sum,
        partition: local.into_iter().map(|k| k + a).collect(),
    })
}

/// `max_{0 <= i <= j <= N} |x_j - x_{i-1}|^2` with the convention `x_{-1} = 0`.
pub fn maximal_block_oscillation(path: &LatticePath) -> f64 {
    let zero = vec![0.0; path.dim()];
    let mut best = 0.0f64;
    for j in 0..=path.n() {
        let xj = path.point(j);
        best = best.max(dist_sq(xj, &zero));
        for prev in 0..j {
            best = best.max(dist_sq(xj, path.point(prev)));
        }
    }
    best
}
