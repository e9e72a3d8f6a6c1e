//! Integer partitions, their rotated profiles and the classical counting
//! formulas (hook lengths, semistandard tableaux).

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// The empty partition is a valid value of size zero. Partitions serialize
/// as plain JSON integer arrays, e.g. `[5,4,4,1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from row lengths, dropping trailing zero rows.
    pub fn from_row_lengths(mut rows: Vec<u32>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Self::new(rows)
    }

    /// Single row `(n)`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Number of parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.first_part() as usize;
        let mut cols = vec![0u32; width];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }

    /// Multiplicities `(part, m_part)` in decreasing order of parts.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Cells as `(row, column)`, zero-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    /// Hook lengths of all cells, in row-major order.
    pub fn hook_lengths(&self) -> Vec<u64> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| {
                let arm = self.parts[i] as u64 - j as u64 - 1;
                let leg = conj.parts[j] as u64 - i as u64 - 1;
                arm + leg + 1
            })
            .collect()
    }

    /// Partitions obtained by removing one corner box.
    pub fn remove_corners(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            let next = self.parts.get(i + 1).copied().unwrap_or(0);
            if self.parts[i] > next {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                out.push(Partition::from_row_lengths(parts).expect("corner removal keeps order"));
            }
        }
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// Partitions of `size` with exactly `length` parts.
pub fn partitions_with_length(size: u32, length: usize) -> Vec<Partition> {
    partitions_of(size)
        .into_iter()
        .filter(|p| p.len() == length)
        .collect()
}

/// Contents of the local minima (`minima`) and maxima (`maxima`) of the
/// rotated profile, both ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterlacingCoords {
    pub minima: Vec<i64>,
    pub maxima: Vec<i64>,
}

impl InterlacingCoords {
    /// Σ xⁿ − Σ yⁿ as an exact integer, or `None` on overflow.
    pub fn power_sum_i128(&self, n: u32) -> Option<i128> {
        let mut acc: i128 = 0;
        for &x in &self.minima {
            acc = acc.checked_add((x as i128).checked_pow(n)?)?;
        }
        for &y in &self.maxima {
            acc = acc.checked_sub((y as i128).checked_pow(n)?)?;
        }
        Some(acc)
    }

    pub fn is_interlacing(&self) -> bool {
        if self.minima.len() != self.maxima.len() + 1 {
            return false;
        }
        let mut merged = Vec::with_capacity(self.minima.len() + self.maxima.len());
        for (i, &x) in self.minima.iter().enumerate() {
            merged.push(x);
            if let Some(&y) = self.maxima.get(i) {
                merged.push(y);
            }
        }
        merged.windows(2).all(|w| w[0] < w[1])
    }
}

/// Interlacing coordinates as contents (column − row) of the addable
/// (minima) and removable (maxima) cells.
pub fn interlacing_coords(lambda: &Partition) -> InterlacingCoords {
    let parts = lambda.parts();
    let r = parts.len();
    let mut minima = Vec::with_capacity(r + 1);
    let mut maxima = Vec::with_capacity(r);
    for i in 0..=r {
        let here = parts.get(i).copied().unwrap_or(0) as i64;
        let above = if i == 0 { i64::MAX } else { parts[i - 1] as i64 };
        if here < above {
            minima.push(here - i as i64);
        }
        if i < r {
            let below = parts.get(i + 1).copied().unwrap_or(0) as i64;
            if here > below {
                maxima.push(here - 1 - i as i64);
            }
        }
    }
    minima.reverse();
    maxima.reverse();
    InterlacingCoords { minima, maxima }
}

/// The rotated diagram `s ↦ λ(s·t)/t`, stored through its corners.
///
/// With `scale = √n` this is the rescaled diagram λ*.
#[derive(Clone, Debug)]
pub struct Profile {
    coords: InterlacingCoords,
    /// `x_1 < y_1 < x_2 < … < x_v` in unscaled units.
    corners: Vec<i64>,
    /// Unscaled profile value at each corner.
    heights: Vec<i64>,
    scale: f64,
}

impl Profile {
    pub fn new(lambda: &Partition, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::NonPositiveScale(scale));
        }
        let coords = interlacing_coords(lambda);
        let mut corners = Vec::with_capacity(coords.minima.len() + coords.maxima.len());
        for (i, &x) in coords.minima.iter().enumerate() {
            corners.push(x);
            if let Some(&y) = coords.maxima.get(i) {
                corners.push(y);
            }
        }
        let mut heights = Vec::with_capacity(corners.len());
        let mut h = -corners[0];
        heights.push(h);
        for (i, w) in corners.windows(2).enumerate() {
            h += if i % 2 == 0 { w[1] - w[0] } else { w[0] - w[1] };
            heights.push(h);
        }
        Ok(Profile { coords, corners, heights, scale })
    }

    /// Profile of λ rescaled by `1/√|λ|` (the empty diagram keeps scale 1).
    pub fn rescaled(lambda: &Partition) -> Self {
        let n = lambda.size().max(1) as f64;
        Self::new(lambda, n.sqrt()).expect("positive scale")
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn coords(&self) -> &InterlacingCoords {
        &self.coords
    }

    pub fn eval(&self, s: f64) -> f64 {
        let u = s * self.scale;
        let first = self.corners[0] as f64;
        let last = *self.corners.last().expect("at least one corner") as f64;
        if u <= first || u >= last {
            return s.abs();
        }
        let idx = self.corners.partition_point(|&c| c as f64 <= u) - 1;
        let offset = u - self.corners[idx] as f64;
        let value = if idx % 2 == 0 { self.heights[idx] as f64 + offset } else { self.heights[idx] as f64 - offset };
        value / self.scale
    }

    /// σ(s) = (λ(s) − |s|)/2.
    pub fn sigma(&self, s: f64) -> f64 {
        (self.eval(s) - s.abs()) / 2.0
    }

    /// Abscissae of the slope changes, ascending, in rescaled units.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .coords
            .minima
            .iter()
            .chain(self.coords.maxima.iter())
            .map(|&x| x as f64 / self.scale)
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts
    }
}

/// `λ(s·scale)/scale`.
pub fn profile(lambda: &Partition, s: f64, scale: f64) -> Result<f64> {
    Ok(Profile::new(lambda, scale)?.eval(s))
}

/// Number of standard Young tableaux of shape λ (hook length formula).
pub fn dim_irrep(lambda: &Partition) -> BigUint {
    let n = lambda.size();
    let mut num = BigUint::one();
    for k in 2..=n {
        num *= k;
    }
    let den = lambda
        .hook_lengths()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    num / den
}

/// `ln dim λ`, for shapes too large for exact products.
pub fn ln_dim_irrep(lambda: &Partition) -> f64 {
    let n = lambda.size();
    let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    let ln_hooks: f64 = lambda.hook_lengths().into_iter().map(|h| (h as f64).ln()).sum();
    ln_fact - ln_hooks
}

/// Number of semistandard tableaux of shape λ with entries in `1..=n_letters`.
pub fn ssyt_count(lambda: &Partition, n_letters: u32) -> BigUint {
    if lambda.len() > n_letters as usize {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    for (i, j) in lambda.cells() {
        num *= (n_letters as i64 + j as i64 - i as i64) as u64;
    }
    let den = lambda
        .hook_lengths()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    num / den
}
