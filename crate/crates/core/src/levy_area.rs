//! Lévy area of lattice paths and its 1-variation.
//!
//! Areas are antisymmetric `d x d` matrices stored densely in row-major order and
//! measured in the Frobenius norm. The bracket is `[u, v] = u ⊗ v - v ⊗ u`.

use crate::error::{Error, Result};
use crate::lattice_path::{sub, IntervalZ, LatticePath};
use crate::variation::{best_partition, p_var_exact, table_one_var, VariationResult};

/// Largest `N` for which a full table is stored.
pub const MAX_TABLE_KNOTS: usize = 20_000;

/// `out += scale * [u, v]`.
#[inline]
fn add_bracket(out: &mut [f64], u: &[f64], v: &[f64], scale: f64) {
    let d = u.len();
    for r in 0..d {
        for c in 0..d {
            out[r * d + c] += scale * (u[r] * v[c] - v[r] * u[c]);
        }
    }
}

/// `[u, v]` as a dense matrix.
pub fn bracket(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len() * u.len()];
    add_bracket(&mut out, u, v, 1.0);
    out
}

pub fn frobenius(m: &[f64]) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Areas `A(i, j)` for all `0 <= i <= j <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaTable {
    dim: usize,
    n: usize,
    data: Vec<f64>,
}

impl AreaTable {
    fn zeros(dim: usize, n: usize) -> Result<Self> {
        if n > MAX_TABLE_KNOTS {
            return Err(Error::TooLarge(format!(
                "area table limited to N <= {MAX_TABLE_KNOTS}, got {n}"
            )));
        }
        let pairs = (n + 1) * (n + 2) / 2;
        Ok(Self {
            dim,
            n,
            data: vec![0.0; pairs * dim * dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j <= self.n);
        // rows r < i hold N + 1 - r entries each
        let row = i * (self.n + 1) - i * i.saturating_sub(1) / 2;
        (row + (j - i)) * self.dim * self.dim
    }

    /// `A(i, j)` as a row-major `d x d` slice. Requires `i <= j <= N`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &[f64] {
        let o = self.offset(i, j);
        &self.data[o..o + self.dim * self.dim]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let o = self.offset(i, j);
        let len = self.dim * self.dim;
        &mut self.data[o..o + len]
    }

    /// Overwrite one entry; for building hand-made tables.
    pub fn set(&mut self, i: usize, j: usize, value: &[f64]) -> Result<()> {
        if i > j || j > self.n {
            return Err(Error::InvalidInterval { a: i, b: j, n: self.n });
        }
        if value.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.dim,
                got: value.len(),
            });
        }
        self.get_mut(i, j).copy_from_slice(value);
        Ok(())
    }
}

/// Table of `A(i, j)` built by `A(i, j) = A(i, j-1) + ½[x_{j-1} - x_i, x_j - x_{j-1}]`.
pub fn build_area_table(path: &LatticePath) -> Result<AreaTable> {
    let n = path.n();
    let mut table = AreaTable::zeros(path.dim(), n)?;
    for i in 0..=n {
        for j in i + 2..=n {
            let u = sub(path.point(j - 1), path.point(i));
            let v = sub(path.point(j), path.point(j - 1));
            let prev = table.get(i, j - 1).to_vec();
            let out = table.get_mut(i, j);
            out.copy_from_slice(&prev);
            add_bracket(out, &u, &v, 0.5);
        }
    }
    Ok(table)
}

/// `½ sum_{s <= k < l < t} [Δ_k, Δ_l]` with `Δ_k = x_{k+1} - x_k`, by explicit double sum.
pub fn area_direct_oracle(path: &LatticePath, s: usize, t: usize) -> Result<Vec<f64>> {
    path.check_interval(IntervalZ { a: s, b: t })?;
    let d = path.dim();
    let mut out = vec![0.0; d * d];
    for k in s..t {
        let dk = sub(path.point(k + 1), path.point(k));
        for l in k + 1..t {
            let dl = sub(path.point(l + 1), path.point(l));
            add_bracket(&mut out, &dk, &dl, 0.5);
        }
    }
    Ok(out)
}

/// Area of the polygonal path through `points`, `½ sum_l [y_l - y_0, y_{l+1} - y_l]`.
pub fn polyline_area(points: &[Vec<f64>]) -> Vec<f64> {
    let d = points.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d * d];
    if let Some(origin) = points.first() {
        for w in points.windows(2) {
            add_bracket(&mut out, &sub(&w[0], origin), &sub(&w[1], &w[0]), 0.5);
        }
    }
    out
}

/// Area of the linear interpolant between real times `s <= t`.
pub fn area_between(path: &LatticePath, s: f64, t: f64) -> Result<Vec<f64>> {
    if !(s <= t) {
        return Err(Error::InvalidArgument(format!("need s <= t, got {s} > {t}")));
    }
    let d = path.dim();
    let origin = path.eval(s)?;
    let end = path.eval(t)?;
    let mut out = vec![0.0; d * d];
    let mut prev = origin.clone();
    let mut rel = vec![0.0; d];
    let mut step = vec![0.0; d];
    let mut k = s.floor() as usize + 1;
    loop {
        let next = if (k as f64) < t { path.point(k) } else { &end[..] };
        for c in 0..d {
            rel[c] = prev[c] - origin[c];
            step[c] = next[c] - prev[c];
        }
        add_bracket(&mut out, &rel, &step, 0.5);
        if (k as f64) >= t {
            break;
        }
        prev.copy_from_slice(next);
        k += 1;
    }
    Ok(out)
}

/// `|A(s,t) - A(s,u) - A(u,t) - ½[x_u - x_s, x_t - x_u]|_F` for `s <= u <= t`.
pub fn chen_defect(
    table: &AreaTable,
    path: &LatticePath,
    s: usize,
    u: usize,
    t: usize,
) -> Result<f64> {
    if !(s <= u && u <= t) || t > table.n() || table.n() != path.n() {
        return Err(Error::InvalidArgument(format!(
            "need s <= u <= t <= N, got ({s}, {u}, {t}) with N = {}",
            table.n()
        )));
    }
    let mut m: Vec<f64> = table
        .get(s, t)
        .iter()
        .zip(table.get(s, u))
        .zip(table.get(u, t))
        .map(|((st, su), ut)| st - su - ut)
        .collect();
    add_bracket(
        &mut m,
        &sub(path.point(u), path.point(s)),
        &sub(path.point(t), path.point(u)),
        -0.5,
    );
    Ok(frobenius(&m))
}

/// Cross area `½ ∫_s^t [x1_r - x1_s, dx2_r]` of two paths on the same knots.
pub fn pair_area_table(path1: &LatticePath, path2: &LatticePath) -> Result<AreaTable> {
    if path1.dim() != path2.dim() {
        return Err(Error::DimensionMismatch {
            expected: path1.dim(),
            got: path2.dim(),
        });
    }
    if path1.n() != path2.n() {
        return Err(Error::InvalidArgument(format!(
            "paths have {} and {} knots",
            path1.n() + 1,
            path2.n() + 1
        )));
    }
    let n = path1.n();
    let mut table = AreaTable::zeros(path1.dim(), n)?;
    for i in 0..=n {
        for j in i + 1..=n {
            let d1_prev = sub(path1.point(j - 1), path1.point(i));
            let d1 = sub(path1.point(j), path1.point(j - 1));
            let d2 = sub(path2.point(j), path2.point(j - 1));
            let prev = table.get(i, j - 1).to_vec();
            let out = table.get_mut(i, j);
            out.copy_from_slice(&prev);
            add_bracket(out, &d1, &d2, 0.25);
            add_bracket(out, &d1_prev, &d2, 0.5);
        }
    }
    Ok(table)
}

/// 1-variation of the area without storing the table.
///
/// Column `j` is rebuilt from `A(i, j) = A(i+1, j) + ½[x_{i+1} - x_i, x_j - x_{i+1}]`,
/// keeping only the upper triangle. Memory is `O(N d^2)`.
pub fn area_one_var(path: &LatticePath, interval: IntervalZ) -> Result<VariationResult> {
    path.check_interval(interval)?;
    if interval.is_empty() {
        return Ok(VariationResult {
            power_sum: 0.0,
            partition: vec![interval.a],
        });
    }
    let d = path.dim();
    let a = interval.a;
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|r| (r + 1..d).map(move |c| (r, c)))
        .collect();
    let np = pairs.len();
    let mut col = vec![0.0f64; np];
    let (power_sum, local) = best_partition(interval.len() + 1, |j, buf| {
        col.iter_mut().for_each(|x| *x = 0.0);
        let xj = path.point(a + j);
        buf[j - 1] = 0.0;
        for i in (0..j - 1).rev() {
            let xi = path.point(a + i);
            let xi1 = path.point(a + i + 1);
            let mut sq = 0.0;
            for (slot, &(r, c)) in col.iter_mut().zip(&pairs) {
                let (ur, uc) = (xi1[r] - xi[r], xi1[c] - xi[c]);
                let (vr, vc) = (xj[r] - xi1[r], xj[c] - xi1[c]);
                *slot += 0.5 * (ur * vc - vr * uc);
                sq += *slot * *slot;
            }
            buf[i] = (2.0 * sq).sqrt();
        }
    });
    Ok(VariationResult {
        power_sum,
        partition: local.into_iter().map(|k| k + a).collect(),
    })
}

/// `|x|_{2-var}^2 + |A|_{1-var}` on `interval`.
pub fn rough_norm_sq(path: &LatticePath, table: &AreaTable, interval: IntervalZ) -> Result<f64> {
    let pv = p_var_exact(path, 2.0, interval)?;
    let av = table_one_var(table, interval)?;
    Ok(pv.power_sum + av.power_sum)
}

/// Same quantity as [`rough_norm_sq`] without materialising the table.
pub fn rough_norm_sq_streaming(path: &LatticePath, interval: IntervalZ) -> Result<f64> {
    Ok(p_var_exact(path, 2.0, interval)?.power_sum + area_one_var(path, interval)?.power_sum)
}
