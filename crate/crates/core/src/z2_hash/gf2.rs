//! Packed vectors and matrices over GF(2).

use std::fmt;

use crate::{Error, Result};

/// A vector in `Z_2^len`, packed little-endian into 64-bit words.
///
/// Bits at positions `≥ len` are always zero, so derived equality, ordering
/// and hashing agree with the mathematical value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Vec {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Low `len` bits of `mask`; `len ≤ 64`.
    pub fn from_u64(mask: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 needs len ≤ 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask & crate::family::full_mask(len);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters; position `i` is bit `i`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("bad bit character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product `x yᵀ` over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dimension mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Lowest set position.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// The packed value when `len ≤ 64`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec({self})")
    }
}

impl fmt::Display for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A matrix over GF(2) stored as rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2Mat {
    rows: Vec<Gf2Vec>,
    ncols: usize,
}

impl Gf2Mat {
    pub fn new(rows: Vec<Gf2Vec>, ncols: usize) -> Result<Self> {
        if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::InvalidArgument(format!(
                "row {i} has length {} instead of {ncols}",
                rows[i].len()
            )));
        }
        Ok(Self { rows, ncols })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![Gf2Vec::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| Gf2Vec::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Gf2Vec {
        &self.rows[i]
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// The row vector `x A`.
    pub fn left_mul(&self, x: &Gf2Vec) -> Gf2Vec {
        assert_eq!(x.len(), self.nrows(), "dimension mismatch");
        let mut out = Gf2Vec::zeros(self.ncols);
        for i in x.ones_iter() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }
}

/// Incremental row echelon basis that remembers how each basis vector was
/// combined from the inserted rows.
#[derive(Clone, Debug)]
pub(crate) struct EchelonBasis {
    /// `(pivot, reduced row, combination over inserted indices)`, sorted by
    /// pivot column.
    entries: Vec<(usize, Gf2Vec, Gf2Vec)>,
    inserted: usize,
    capacity: usize,
}

impl EchelonBasis {
    pub(crate) fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            inserted: 0,
            capacity,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.entries.len()
    }

    /// Reduces `v` against the basis, returning the remainder and the
    /// combination of inserted rows that was subtracted.
    pub(crate) fn reduce(&self, v: &Gf2Vec) -> (Gf2Vec, Gf2Vec) {
        let mut rem = v.clone();
        let mut combo = Gf2Vec::zeros(self.capacity);
        for (pivot, row, c) in &self.entries {
            if rem.get(*pivot) {
                rem.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (rem, combo)
    }

    /// Inserts the next row; returns whether it was independent.
    pub(crate) fn insert(&mut self, v: &Gf2Vec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (rem, mut combo) = self.reduce(v);
        let Some(pivot) = rem.first_one() else {
            return false;
        };
        combo.set(index, !combo.get(index));
        // Keep the basis fully reduced so `reduce` can scan in pivot order.
        for (p, row, c) in &mut self.entries {
            if row.get(pivot) {
                debug_assert_ne!(*p, pivot);
                row.xor_assign(&rem);
                c.xor_assign(&combo);
            }
        }
        let at = self.entries.partition_point(|(p, _, _)| *p < pivot);
        self.entries.insert(at, (pivot, rem, combo));
        true
    }

    pub(crate) fn basis_rows(&self) -> impl Iterator<Item = &Gf2Vec> {
        self.entries.iter().map(|(_, r, _)| r)
    }
}

/// Result of Gaussian elimination on `x A = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSolve {
    pub rank: usize,
    /// Some `x` with `x A = b`, if the system is consistent.
    pub solution: Option<Gf2Vec>,
    /// Reduced row echelon basis of the row space, by increasing pivot.
    pub basis: Vec<Gf2Vec>,
}

/// Rank, one solution of `x A = b` and a row-space basis, eliminating rows
/// in order with the lowest pivot column first.
pub fn gf2_rank_solve(a: &Gf2Mat, b: &Gf2Vec) -> Result<RankSolve> {
    if b.len() != a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "right-hand side has length {} but the matrix has {} columns",
            b.len(),
            a.ncols()
        )));
    }
    let mut basis = EchelonBasis::new(a.nrows());
    for row in a.rows() {
        basis.insert(row);
    }
    let (rem, combo) = basis.reduce(b);
    Ok(RankSolve {
        rank: basis.rank(),
        solution: rem.is_zero().then_some(combo),
        basis: basis.basis_rows().cloned().collect(),
    })
}
