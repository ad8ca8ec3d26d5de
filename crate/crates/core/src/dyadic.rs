//! Dyadic intervals `[k 2^n, (k+1) 2^n]` and decompositions of integer intervals
//! into them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_path::IntervalZ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub level: u32,
    pub k: usize,
}

impl DyadicInterval {
    pub fn start(&self) -> usize {
        self.k << self.level
    }

    pub fn end(&self) -> usize {
        (self.k + 1) << self.level
    }

    pub fn len(&self) -> usize {
        1 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self) -> IntervalZ {
        IntervalZ {
            a: self.start(),
            b: self.end(),
        }
    }

    pub fn contained_in(&self, j: IntervalZ) -> bool {
        j.a <= self.start() && self.end() <= j.b
    }

    /// Parse an integer interval that happens to be dyadic.
    pub fn from_interval(j: IntervalZ) -> Option<Self> {
        let len = j.len();
        if len == 0 || !len.is_power_of_two() || !j.a.is_multiple_of(len) {
            return None;
        }
        let level = len.trailing_zeros();
        Some(Self { level, k: j.a >> level })
    }
}

/// Which endpoint of an interval lies on the coarse dyadic grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// 2-adic valuation; `None` stands for the infinite valuation of `0`.
pub fn two_adic(p: usize) -> Option<u32> {
    (p != 0).then(|| p.trailing_zeros())
}

fn check_nonempty(j: IntervalZ) -> Result<()> {
    if j.a >= j.b {
        return Err(Error::InvalidInterval { a: j.a, b: j.b, n: j.b });
    }
    Ok(())
}

/// Level of the largest dyadic interval contained in `J`.
pub fn n_of(j: IntervalZ) -> Result<u32> {
    check_nonempty(j)?;
    let mut level = usize::BITS - 1 - j.len().leading_zeros();
    loop {
        let k = j.a.div_ceil(1 << level);
        if (k + 1) << level <= j.b {
            return Ok(level);
        }
        level -= 1;
    }
}

pub fn is_dyadic(j: IntervalZ) -> bool {
    DyadicInterval::from_interval(j).is_some()
}

/// Smallest dyadic interval containing `J`.
pub fn smallest_enclosing(j: IntervalZ) -> Result<DyadicInterval> {
    check_nonempty(j)?;
    let mut level = 0;
    loop {
        let k = j.a >> level;
        if (k + 1) << level >= j.b {
            return Ok(DyadicInterval { level, k });
        }
        level += 1;
    }
}

/// Split `J` into dyadic pieces following the binary expansion of `|J|`, smallest
/// pieces farthest from the dyadic endpoint on `side`.
///
/// Requires the endpoint on `side` to have 2-adic valuation `n` with `|J| < 2^n`.
pub fn decompose_monotone(j: IntervalZ, side: Side) -> Result<Vec<DyadicInterval>> {
    if j.a > j.b {
        return Err(Error::InvalidInterval { a: j.a, b: j.b, n: j.b });
    }
    let len = j.len();
    let boundary = match side {
        Side::Left => j.a,
        Side::Right => j.b,
    };
    if let Some(v) = two_adic(boundary) {
        if v >= usize::BITS || len >= 1 << v {
            return Err(Error::Precondition(format!(
                "endpoint {boundary} has valuation {v} but |J| = {len} is not below 2^{v}"
            )));
        }
    }
    let mut pieces = Vec::new();
    match side {
        Side::Right => {
            let mut pos = j.a;
            for bit in 0..usize::BITS {
                if len >> bit & 1 == 1 {
                    pieces.push(DyadicInterval { level: bit, k: pos >> bit });
                    pos += 1 << bit;
                }
            }
        }
        Side::Left => {
            let mut pos = j.a;
            for bit in (0..usize::BITS).rev() {
                if len >> bit & 1 == 1 {
                    pieces.push(DyadicInterval { level: bit, k: pos >> bit });
                    pos += 1 << bit;
                }
            }
        }
    }
    Ok(pieces)
}

/// Decomposition of `J` whose piece sizes grow towards the point `P` and shrink
/// away from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakedDecomposition {
    pub point: usize,
    pub pieces: Vec<DyadicInterval>,
}

pub fn decompose_peaked(j: IntervalZ) -> Result<PeakedDecomposition> {
    let n0 = n_of(j)?;
    let size = 1usize << n0;
    let k0 = j.a.div_ceil(size);
    let two = (k0 + 2) * size <= j.b;
    let (lo, hi, point) = if two {
        (k0, k0 + 1, (k0 + 1) * size)
    } else if k0.is_multiple_of(2) {
        (k0, k0, k0 * size)
    } else {
        (k0, k0, (k0 + 1) * size)
    };
    let mut pieces = decompose_monotone(IntervalZ { a: j.a, b: lo * size }, Side::Right)?;
    pieces.extend((lo..=hi).map(|k| DyadicInterval { level: n0, k }));
    pieces.extend(decompose_monotone(
        IntervalZ { a: (hi + 1) * size, b: j.b },
        Side::Left,
    )?);
    Ok(PeakedDecomposition { point, pieces })
}

/// Repeatedly remove the largest dyadic intervals from the uncovered gaps.
pub fn greedy_decompose(j: IntervalZ) -> Result<Vec<DyadicInterval>> {
    check_nonempty(j)?;
    let mut gaps = vec![j];
    let mut pieces = Vec::new();
    while !gaps.is_empty() {
        let top = gaps
            .iter()
            .map(|&g| n_of(g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut next = Vec::new();
        for gap in gaps {
            if n_of(gap)? < top {
                next.push(gap);
                continue;
            }
            let size = 1usize << top;
            let mut pos = gap.a;
            let mut k = gap.a.div_ceil(size);
            while (k + 1) * size <= gap.b {
                if k * size > pos {
                    next.push(IntervalZ { a: pos, b: k * size });
                }
                pieces.push(DyadicInterval { level: top, k });
                pos = (k + 1) * size;
                k += 1;
            }
            if pos < gap.b {
                next.push(IntervalZ { a: pos, b: gap.b });
            }
        }
        gaps = next;
    }
    pieces.sort_by_key(DyadicInterval::start);
    Ok(pieces)
}

/// Split of a non-dyadic `J` into two parts, each more than half of its smallest
/// enclosing dyadic interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bisection {
    pub parts: [IntervalZ; 2],
    pub enclosing: [DyadicInterval; 2],
}

pub fn bisect(j: IntervalZ) -> Result<Bisection> {
    check_nonempty(j)?;
    if is_dyadic(j) {
        return Err(Error::Precondition(format!(
            "[{}, {}] is already dyadic",
            j.a, j.b
        )));
    }
    let peaked = decompose_peaked(j)?;
    let cut = if j.a < peaked.point && peaked.point < j.b {
        peaked.point
    } else {
        let largest = peaked
            .pieces
            .iter()
            .max_by_key(|p| p.level)
            .expect("non-empty decomposition");
        if peaked.point == j.b {
            largest.start()
        } else {
            largest.end()
        }
    };
    let parts = [IntervalZ { a: j.a, b: cut }, IntervalZ { a: cut, b: j.b }];
    let enclosing = [smallest_enclosing(parts[0])?, smallest_enclosing(parts[1])?];
    Ok(Bisection { parts, enclosing })
}

/// Bisect until every part is dyadic.
pub fn bisect_to_dyadics(j: IntervalZ) -> Result<Vec<DyadicInterval>> {
    check_nonempty(j)?;
    if let Some(d) = DyadicInterval::from_interval(j) {
        return Ok(vec![d]);
    }
    let b = bisect(j)?;
    let mut out = bisect_to_dyadics(b.parts[0])?;
    out.extend(bisect_to_dyadics(b.parts[1])?);
    Ok(out)
}

/// Dyadic intervals contained in `J`, optionally restricted to one level.
pub fn b_set(j: IntervalZ, level: Option<u32>) -> Result<Vec<DyadicInterval>> {
    let top = n_of(j)?;
    let levels: Vec<u32> = match level {
        Some(l) if l > top => Vec::new(),
        Some(l) => vec![l],
        None => (0..=top).rev().collect(),
    };
    let mut out = Vec::new();
    for l in levels {
        let size = 1usize << l;
        let first = j.a.div_ceil(size);
        let end = j.b / size;
        out.extend((first..end).map(|k| DyadicInterval { level: l, k }));
    }
    Ok(out)
}

/// `|I ∩ J| > |I| / 2`.
pub fn tilde_member(i: DyadicInterval, j: IntervalZ) -> bool {
    let lo = i.start().max(j.a);
    let hi = i.end().min(j.b);
    hi > lo && 2 * (hi - lo) > i.len()
}

/// All dyadic intervals more than half covered by `J`.
pub fn tilde_set(j: IntervalZ) -> Result<Vec<DyadicInterval>> {
    check_nonempty(j)?;
    let mut out = Vec::new();
    let mut level = 0u32;
    while (1usize << level) < 2 * j.len() {
        let size = 1usize << level;
        let first = j.a / size;
        let last = j.b.div_ceil(size);
        out.extend(
            (first..last)
                .map(|k| DyadicInterval { level, k })
                .filter(|&i| tilde_member(i, j)),
        );
        level += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iz(a: usize, b: usize) -> IntervalZ {
        IntervalZ { a, b }
    }

    fn spans(pieces: &[DyadicInterval]) -> Vec<(usize, usize)> {
        pieces.iter().map(|p| (p.start(), p.end())).collect()
    }

    #[test]
    fn valuation() {
        assert_eq!(two_adic(12), Some(2));
        assert_eq!(two_adic(7), Some(0));
        assert_eq!(two_adic(0), None);
    }

    #[test]
    fn largest_level() {
        assert_eq!(n_of(iz(3, 8)).unwrap(), 2);
        assert_eq!(n_of(iz(1, 3)).unwrap(), 0);
        assert_eq!(n_of(iz(0, 512)).unwrap(), 9);
        assert!(n_of(iz(4, 4)).is_err());
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(
            spans(&decompose_monotone(iz(5, 8), Side::Right).unwrap()),
            vec![(5, 6), (6, 8)]
        );
        assert_eq!(
            spans(&decompose_monotone(iz(1, 8), Side::Right).unwrap()),
            vec![(1, 2), (2, 4), (4, 8)]
        );
        assert_eq!(
            spans(&decompose_monotone(iz(8, 11), Side::Left).unwrap()),
            vec![(8, 10), (10, 11)]
        );
        assert!(matches!(
            decompose_monotone(iz(2, 6), Side::Right),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn peaked_examples() {
        let d = decompose_peaked(iz(3, 8)).unwrap();
        assert_eq!(d.point, 8);
        assert_eq!(spans(&d.pieces), vec![(3, 4), (4, 8)]);
        let d = decompose_peaked(iz(1, 3)).unwrap();
        assert_eq!(d.point, 2);
        assert_eq!(spans(&d.pieces), vec![(1, 2), (2, 3)]);
        let d = decompose_peaked(iz(4, 8)).unwrap();
        assert_eq!(d.point, 8);
        assert_eq!(spans(&d.pieces), vec![(4, 8)]);
        let d = decompose_peaked(iz(0, 4)).unwrap();
        assert_eq!(d.point, 0);
    }

    #[test]
    fn bisect_examples() {
        let b = bisect(iz(1, 3)).unwrap();
        assert_eq!(b.parts, [iz(1, 2), iz(2, 3)]);
        let b = bisect(iz(3, 8)).unwrap();
        assert_eq!(b.parts, [iz(3, 4), iz(4, 8)]);
        assert_eq!(b.enclosing[1], DyadicInterval { level: 2, k: 1 });
        assert!(matches!(bisect(iz(4, 8)), Err(Error::Precondition(_))));
    }

    #[test]
    fn b_set_counts_and_tilde() {
        assert_eq!(b_set(iz(0, 4), None).unwrap().len(), 7);
        assert_eq!(b_set(iz(0, 4), Some(1)).unwrap().len(), 2);
        assert!(!tilde_member(DyadicInterval { level: 1, k: 0 }, iz(1, 3)));
        assert!(tilde_member(DyadicInterval { level: 2, k: 0 }, iz(1, 4)));
    }

    #[test]
    fn enclosing() {
        assert_eq!(smallest_enclosing(iz(3, 5)).unwrap(), DyadicInterval { level: 3, k: 0 });
        assert_eq!(smallest_enclosing(iz(4, 6)).unwrap(), DyadicInterval { level: 1, k: 2 });
    }
}
