//! Piecewise-linear paths sampled on the integer knots `0..=N`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer interval `[a, b]` of knot indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalZ {
    pub a: usize,
    pub b: usize,
}

impl IntervalZ {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidInterval { a, b, n: b });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.a > self.b || self.b > n {
            return Err(Error::InvalidInterval { a: self.a, b: self.b, n });
        }
        Ok(())
    }
}

/// A path in `R^d` given by its values at the knots `0..=N`, linear in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LatticePath {
    dim: usize,
    values: Vec<f64>,
}

impl LatticePath {
    /// Build from a flat row-major buffer of `(N + 1) * dim` values.
    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPath("dimension must be positive".into()));
        }
        if values.is_empty() || !values.len().is_multiple_of(dim) {
            return Err(Error::InvalidPath(format!(
                "{} values do not form rows of width {dim}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPath(format!(
                "non-finite value at knot {}",
                pos / dim
            )));
        }
        Ok(Self { dim, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows
            .first()
            .ok_or_else(|| Error::InvalidPath("no knots".into()))?
            .len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "ragged input: knot {k} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(dim, values)
    }

    /// One-dimensional path from scalar knot values.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    /// Two-dimensional path from complex knot values.
    pub fn from_complex(values: &[num_complex::Complex64]) -> Result<Self> {
        let flat = values.iter().flat_map(|z| [z.re, z.im]).collect();
        Self::from_flat(2, flat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the last knot.
    pub fn n(&self) -> usize {
        self.values.len() / self.dim - 1
    }

    pub fn full(&self) -> IntervalZ {
        IntervalZ { a: 0, b: self.n() }
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn check_interval(&self, interval: IntervalZ) -> Result<()> {
        interval.check(self.n())
    }

    /// `x_t - x_s` for knots `s, t`.
    pub fn increment(&self, s: usize, t: usize) -> Result<Vec<f64>> {
        let n = self.n();
        if s > n || t > n {
            return Err(Error::InvalidInterval { a: s, b: t, n });
        }
        Ok(self
            .point(t)
            .iter()
            .zip(self.point(s))
            .map(|(x, y)| x - y)
            .collect())
    }

    /// Value of the linear interpolant at real time `t` in `[0, N]`.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let n = self.n();
        if !(0.0..=n as f64).contains(&t) {
            return Err(Error::InvalidArgument(format!("time {t} outside [0, {n}]")));
        }
        let k = (t.floor() as usize).min(n.saturating_sub(1));
        if n == 0 {
            return Ok(self.point(0).to_vec());
        }
        let frac = t - k as f64;
        Ok(self
            .point(k)
            .iter()
            .zip(self.point(k + 1))
            .map(|(x, y)| x + frac * (y - x))
            .collect())
    }

    /// Sub-path on `[a, b]`, re-indexed to start at knot 0.
    pub fn restrict(&self, interval: IntervalZ) -> Result<Self> {
        self.check_interval(interval)?;
        if interval.is_empty() {
            return Err(Error::InvalidInterval {
                a: interval.a,
                b: interval.b,
                n: self.n(),
            });
        }
        let values = self.values[interval.a * self.dim..(interval.b + 1) * self.dim].to_vec();
        Ok(Self { dim: self.dim, values })
    }

    /// Path that agrees with `self` at the given knots, is linear between consecutive
    /// knots and constant before the first and after the last.
    pub fn coarsen_at_knots(&self, knots: &[usize]) -> Result<Self> {
        let n = self.n();
        if knots.is_empty() {
            return Err(Error::InvalidKnots("empty knot set".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidKnots("knots must be strictly increasing".into()));
        }
        if let Some(&last) = knots.last() {
            if last > n {
                return Err(Error::InvalidKnots(format!("knot {last} beyond N = {n}")));
            }
        }
        let d = self.dim;
        let mut values = Vec::with_capacity(self.values.len());
        let first = knots[0];
        let last = *knots.last().unwrap_or(&first);
        let mut seg = 0usize;
        for k in 0..=n {
            if k <= first {
                values.extend_from_slice(self.point(first));
            } else if k >= last {
                values.extend_from_slice(self.point(last));
            } else {
                while knots[seg + 1] < k {
                    seg += 1;
                }
                let (l, r) = (knots[seg], knots[seg + 1]);
                let w = (k - l) as f64 / (r - l) as f64;
                let (xl, xr) = (self.point(l), self.point(r));
                values.extend((0..d).map(|c| xl[c] + w * (xr[c] - xl[c])));
            }
        }
        Ok(Self { dim: d, values })
    }

    /// Path through the values at `knots` only, one lattice step per knot gap.
    pub fn sample_at(&self, knots: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut values = Vec::with_capacity(knots.len() * self.dim);
        for &k in knots {
            if k > n {
                return Err(Error::InvalidKnots(format!("knot {k} beyond N = {n}")));
            }
            values.extend_from_slice(self.point(k));
        }
        Self::from_flat(self.dim, values)
    }

    /// Headerless CSV: one knot per row, `d` columns.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("`{field}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        for row in self.values.chunks(self.dim) {
            wtr.write_record(row.iter().map(|v| format!("{v:?}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// JSON array of knot rows.
    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer(writer, self)?;
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for LatticePath {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<LatticePath> for Vec<Vec<f64>> {
    fn from(path: LatticePath) -> Self {
        path.rows()
    }
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Squared Euclidean distance between two points.
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarsening_matches_hand_example() {
        let path = LatticePath::from_scalars(&[0.0, 2.0, 0.0, 4.0]).unwrap();
        let coarse = path.coarsen_at_knots(&[0, 1, 3]).unwrap();
        assert_eq!(coarse.as_flat(), &[0.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn coarsening_is_constant_outside_knots() {
        let path = LatticePath::from_scalars(&[1.0, 5.0, -2.0, 7.0, 3.0, 9.0]).unwrap();
        let coarse = path.coarsen_at_knots(&[2, 4]).unwrap();
        assert_eq!(coarse.as_flat(), &[-2.0, -2.0, -2.0, 0.5, 3.0, 3.0]);
    }

    #[test]
    fn coarsening_rejects_bad_knots() {
        let path = LatticePath::from_scalars(&[0.0, 1.0, 2.0]).unwrap();
        assert!(path.coarsen_at_knots(&[1, 1]).is_err());
        assert!(path.coarsen_at_knots(&[0, 3]).is_err());
        assert!(path.coarsen_at_knots(&[]).is_err());
    }

    #[test]
    fn restrict_degenerate_interval_is_error() {
        let path = LatticePath::from_scalars(&[5.0]).unwrap();
        assert!(path.restrict(IntervalZ { a: 0, b: 0 }).is_err());
        let path = LatticePath::from_scalars(&[0.0, 1.0, 3.0]).unwrap();
        let sub = path.restrict(IntervalZ { a: 1, b: 2 }).unwrap();
        assert_eq!(sub.as_flat(), &[1.0, 3.0]);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rows = vec![vec![0.0, 1.0], vec![2.0]];
        assert!(matches!(
            LatticePath::from_rows(&rows),
            Err(Error::InvalidPath(_))
        ));
        assert!(LatticePath::read_csv("0,1\n2\n".as_bytes()).is_err());
    }

    #[test]
    fn eval_interpolates_linearly() {
        let path = LatticePath::from_rows(&[vec![0.0, 0.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(path.eval(0.25).unwrap(), vec![0.5, 1.0]);
        assert_eq!(path.eval(1.0).unwrap(), vec![2.0, 4.0]);
        assert!(path.eval(1.5).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let path = LatticePath::from_rows(&[vec![0.1, -3.0], vec![1e-17, 2.5]]).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        assert_eq!(LatticePath::read_csv(buf.as_slice()).unwrap(), path);
        let mut buf = Vec::new();
        path.write_json(&mut buf).unwrap();
        assert_eq!(LatticePath::read_json(buf.as_slice()).unwrap(), path);
    }
}
