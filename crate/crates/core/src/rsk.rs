//! Schur–Weyl measures through the RSK shape of uniform random words, and
//! their exact probability mass function.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{dim_irrep, ssyt_count, Partition};
use crate::Rational;

/// A word over the alphabet `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<u32>,
    alphabet: u32,
}

impl Word {
    pub fn new(letters: Vec<u32>, alphabet: u32) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidArguments("alphabet size must be >= 1".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > alphabet) {
            return Err(Error::InvalidArguments(format!("letter {bad} outside 1..={alphabet}")));
        }
        Ok(Word { letters, alphabet })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }
}

/// Shape of the RSK insertion tableau of `w`, by plain row insertion.
pub fn rsk_shape(w: &Word) -> Partition {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &letter in w.letters() {
        let mut x = letter;
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&v| v <= x);
            if pos == row.len() {
                row.push(x);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
        }
        if !placed {
            rows.push(vec![x]);
        }
    }
    Partition::from_row_lengths(rows.iter().map(|r| r.len() as u32).collect()).expect("rows are nonempty")
}

/// Length of a longest weakly increasing subsequence.
pub fn longest_nondecreasing(letters: &[u32]) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &x in letters {
        let pos = tails.partition_point(|&t| t <= x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}

/// `round(√n / c)`, at least 1.
pub fn resolve_alphabet(n: u64, c: f64) -> Result<u32> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArguments(format!("c must be > 0 to derive N, got {c}")));
    }
    let v = ((n as f64).sqrt() / c).round();
    if v > u32::MAX as f64 {
        return Err(Error::InvalidArguments(format!("alphabet size {v} too large")));
    }
    Ok((v as u32).max(1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: u64,
    /// Requested parameter; statistics use [`c_effective`](Self::c_effective).
    pub c: f64,
    /// Alphabet size actually used.
    pub alphabet: u32,
    pub seed: u64,
    pub stream: u64,
}

impl SamplerConfig {
    /// `alphabet = None` derives `N = round(√n/c)`.
    pub fn new(n: u64, c: f64, alphabet: Option<u32>, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        let alphabet = match alphabet {
            Some(0) => return Err(Error::InvalidConfig("N must be >= 1".into())),
            Some(a) => a,
            None => resolve_alphabet(n, c)?,
        };
        Ok(SamplerConfig { n, c, alphabet, seed, stream: 0 })
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    /// `√n / N`.
    pub fn c_effective(&self) -> f64 {
        (self.n as f64).sqrt() / self.alphabet as f64
    }
}

/// Independent generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform word of length `n` over `1..=N`.
pub fn random_word<R: Rng>(rng: &mut R, n: u64, alphabet: u32) -> Word {
    let letters = (0..n).map(|_| rng.random_range(1..=alphabet)).collect();
    Word { letters, alphabet }
}

/// One draw from the Schur–Weyl measure with the configured `(n, N)`.
pub fn sample_shape(cfg: &SamplerConfig) -> Partition {
    let mut rng = stream_rng(cfg.seed, cfg.stream);
    let letters: Vec<u32> = (0..cfg.n).map(|_| rng.random_range(0..cfg.alphabet)).collect();
    shape_of_letters(letters, cfg.alphabet)
}

/// RSK shape of a word over `0..N`, computed one row at a time: the
/// letters bumped out of a row, in order, are exactly the stream inserted
/// into the next row.
pub fn shape_of_letters(letters: Vec<u32>, alphabet: u32) -> Partition {
    let rows = if alphabet as usize <= DENSE_ALPHABET_LIMIT {
        DenseRow::new(alphabet).run(letters)
    } else {
        sparse_rows(letters)
    };
    Partition::from_row_lengths(rows).expect("rows are nonempty")
}

const DENSE_ALPHABET_LIMIT: usize = 1 << 20;

/// A row as letter counts plus an occupancy bitset. One sentinel letter
/// `N` sits permanently above the alphabet so that every search succeeds;
/// hitting it means the inserted letter is appended.
struct DenseRow {
    counts: Vec<u32>,
    bits: Vec<u64>,
    sentinel: u32,
}

impl DenseRow {
    fn new(alphabet: u32) -> Self {
        let n = alphabet as usize + 1;
        let mut row = DenseRow { counts: vec![0; n], bits: vec![0; n.div_ceil(64)], sentinel: alphabet };
        row.reset();
        row
    }

    fn reset(&mut self) {
        for (w, word) in self.bits.iter_mut().enumerate() {
            let mut v = *word;
            while v != 0 {
                self.counts[(w << 6) + v.trailing_zeros() as usize] = 0;
                v &= v - 1;
            }
            *word = 0;
        }
        let s = self.sentinel as usize;
        self.counts[s] = 1;
        self.bits[s >> 6] |= 1u64 << (s & 63);
    }

    /// Smallest occupied letter `> x`, possibly the sentinel.
    #[inline(always)]
    fn next_above(&self, x: u32) -> u32 {
        let start = x as usize + 1;
        let mut w = start >> 6;
        let mut word = self.bits[w] & (!0u64 << (start & 63));
        while word == 0 {
            w += 1;
            word = self.bits[w];
        }
        ((w << 6) + word.trailing_zeros() as usize) as u32
    }

    fn run(mut self, mut stream: Vec<u32>) -> Vec<u32> {
        let mut rows = Vec::new();
        let mut bumped = vec![0u32; stream.len()];
        while !stream.is_empty() {
            let mut out = 0usize;
            for &x in &stream {
                let y = self.next_above(x);
                let real = (y != self.sentinel) as u32;
                // The sentinel count never reaches zero, so no branch is needed.
                let cy = &mut self.counts[y as usize];
                *cy -= real;
                let emptied = (*cy == 0) as u64;
                self.bits[(y >> 6) as usize] &= !(emptied << (y & 63));
                bumped[out] = y;
                out += real as usize;
                self.counts[x as usize] += 1;
                self.bits[(x >> 6) as usize] |= 1u64 << (x & 63);
            }
            rows.push((stream.len() - out) as u32);
            self.reset();
            bumped.truncate(out);
            std::mem::swap(&mut stream, &mut bumped);
            bumped.resize(stream.len(), 0);
        }
        rows
    }
}

fn sparse_rows(mut stream: Vec<u32>) -> Vec<u32> {
    let mut rows = Vec::new();
    let mut row: Vec<u32> = Vec::new();
    let mut bumped = Vec::with_capacity(stream.len());
    while !stream.is_empty() {
        for &x in &stream {
            let pos = row.partition_point(|&v| v <= x);
            if pos == row.len() {
                row.push(x);
            } else {
                bumped.push(std::mem::replace(&mut row[pos], x));
            }
        }
        rows.push(row.len() as u32);
        row.clear();
        std::mem::swap(&mut stream, &mut bumped);
        bumped.clear();
    }
    rows
}

/// `ssyt(λ, N) · dim λ / N^{|λ|}`.
pub fn schur_weyl_pmf(lambda: &Partition, alphabet: u32) -> Rational {
    let num = BigInt::from(ssyt_count(lambda, alphabet) * dim_irrep(lambda));
    let den = num_traits::pow(BigInt::from(alphabet), lambda.size() as usize);
    Rational::new(num, den)
}
