//! Square matrices over the pair scalars, with the semiring product, powers,
//! the symmetric bracket `[A,B] = AB ⊕ BA`, and permutation conjugation.
//!
//! The product expands over directed walks: entry `(p,q)` of `A^k` is the
//! `⊕`-sum of the `⊗`-weights of every length-`k` walk from `p` to `q` in the
//! support of `A`.  That expansion is what ties the algebra to graphs: a
//! matrix is nilpotent exactly when its support digraph has no directed
//! cycle, so `A^n` vanishing is a complete test.
//!
//! Rust-facing indices are 0-based; the text formats and witnesses printed by
//! the CLI label rows, columns and vertices from 1.

use std::fmt;

use thiserror::Error;

use crate::scalar::SuperScalar;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count at which the product switches to the rayon path.  Below this the
/// per-row tasks are too small to pay for the fork.
#[cfg(feature = "parallel")]
const PARALLEL_DIM_THRESHOLD: usize = 64;

/// Two square operands disagree on dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// A map claimed to be a bijection on `{0..n}` is not one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a bijection on 0..{n}: {map:?}")]
pub struct InvalidPermutation {
    pub n: usize,
    pub map: Vec<usize>,
}

/// An `n x n` grid of pair scalars, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperMatrix {
    n: usize,
    entries: Vec<SuperScalar>,
}

impl SuperMatrix {
    /// The all-`eps` zero matrix.
    pub fn zero(n: usize) -> SuperMatrix {
        assert!(n >= 1, "dimension must be positive");
        SuperMatrix {
            n,
            entries: vec![SuperScalar::EPS; n * n],
        }
    }

    /// Diagonal `0 + i·eps`, `eps` elsewhere; neutral for the product.
    pub fn identity(n: usize) -> SuperMatrix {
        let mut m = SuperMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, SuperScalar::ONE);
        }
        m
    }

    /// Builds from dense rows.  Panics unless the grid is square and
    /// nonempty; the file parser does its own shape validation with
    /// positioned errors before calling in here.
    pub fn from_rows(rows: Vec<Vec<SuperScalar>>) -> SuperMatrix {
        let n = rows.len();
        assert!(n >= 1, "matrix must have at least one row");
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            entries.extend(row);
        }
        SuperMatrix { n, entries }
    }

    /// Builds an `n x n` matrix that is `eps` except at the listed
    /// `(row, col, value)` triples.
    pub fn from_entries(n: usize, triples: &[(usize, usize, SuperScalar)]) -> SuperMatrix {
        let mut m = SuperMatrix::zero(n);
        for &(i, j, v) in triples {
            m.set(i, j, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> SuperScalar {
        assert!(row < self.n && col < self.n, "index out of range");
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: SuperScalar) {
        assert!(row < self.n && col < self.n, "index out of range");
        self.entries[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[SuperScalar] {
        assert!(row < self.n, "row out of range");
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[SuperScalar]> {
        self.entries.chunks(self.n)
    }

    fn same_dim(&self, rhs: &SuperMatrix) -> Result<usize, DimensionMismatch> {
        if self.n == rhs.n {
            Ok(self.n)
        } else {
            Err(DimensionMismatch {
                left: self.n,
                right: rhs.n,
            })
        }
    }

    /// Entrywise `⊕`; idempotent, commutative, associative.
    pub fn add(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, DimensionMismatch> {
        let n = self.same_dim(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(SuperMatrix { n, entries })
    }

    /// Semiring product `(AB)_{pq} = ⊕_k A_{pk} ⊗ B_{kq}`.
    ///
    /// Dispatches to the rayon row-parallel path for large operands when the
    /// `parallel` feature is on; both paths produce identical entries because
    /// each output row is accumulated independently and `max` needs no
    /// rounding.
    pub fn mul(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, DimensionMismatch> {
        #[cfg(feature = "parallel")]
        if self.n >= PARALLEL_DIM_THRESHOLD {
            return self.mul_parallel(rhs);
        }
        self.mul_sequential(rhs)
    }

    /// The product on a single thread; always available and used as the
    /// fallback when the `parallel` feature is off.
    pub fn mul_sequential(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, DimensionMismatch> {
        let n = self.same_dim(rhs)?;
        let mut entries = vec![SuperScalar::EPS; n * n];
        for (i, out_row) in entries.chunks_mut(n).enumerate() {
            self.mul_row(rhs, i, out_row);
        }
        Ok(SuperMatrix { n, entries })
    }

    /// The product with output rows computed across the rayon pool.
    #[cfg(feature = "parallel")]
    pub fn mul_parallel(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, DimensionMismatch> {
        let n = self.same_dim(rhs)?;
        let mut entries = vec![SuperScalar::EPS; n * n];
        entries
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, out_row)| self.mul_row(rhs, i, out_row));
        Ok(SuperMatrix { n, entries })
    }

    fn mul_row(&self, rhs: &SuperMatrix, i: usize, out_row: &mut [SuperScalar]) {
        let n = self.n;
        for k in 0..n {
            let aik = self.entries[i * n + k];
            if aik.is_eps() {
                continue;
            }
            let rhs_row = &rhs.entries[k * n..(k + 1) * n];
            for (out, &bkj) in out_row.iter_mut().zip(rhs_row) {
                *out = *out + aik * bkj;
            }
        }
    }

    /// `k`-fold product by iterated squaring; `k` must be at least 1.
    pub fn pow(&self, k: usize) -> SuperMatrix {
        assert!(k >= 1, "exponent must be at least 1");
        let mut base = self.clone();
        let mut acc: Option<SuperMatrix> = None;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    // same dimension throughout, so the product cannot fail
                    Some(a) => a.mul(&base).expect("pow operands share dimension"),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("pow operands share dimension");
            }
        }
        acc.expect("k >= 1")
    }

    /// The symmetric bracket `AB ⊕ BA`.
    pub fn bracket(&self, rhs: &SuperMatrix) -> Result<SuperMatrix, DimensionMismatch> {
        let ab = self.mul(rhs)?;
        let ba = rhs.mul(self)?;
        ab.add(&ba)
    }

    /// Relabels indices: the result `B` has `B[perm(i)][perm(j)] = A[i][j]`.
    ///
    /// This equals `Pᵀ ⊗ A ⊗ P` for the 0/`eps` permutation matrix `P` with
    /// `P[k][perm(k)] = 0`; for permutation matrices the transpose is the only
    /// available inverse and is what conjugation means here.
    pub fn conjugate(&self, perm: &Permutation) -> Result<SuperMatrix, DimensionMismatch> {
        if self.n != perm.n() {
            return Err(DimensionMismatch {
                left: self.n,
                right: perm.n(),
            });
        }
        let mut out = SuperMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(perm.apply(i), perm.apply(j), self.get(i, j));
            }
        }
        Ok(out)
    }

    /// True iff every entry on or below the diagonal is `eps`.
    pub fn is_strictly_upper(&self) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| self.get(i, j).is_eps()))
    }

    /// True iff `A^n = 0`, `n` the dimension.  Complete: a walk of length `n`
    /// must repeat a vertex, so a surviving entry in `A^n` exhibits a cycle
    /// and no higher power vanishes either; conversely an acyclic support has
    /// no walk longer than `n - 1` edges.
    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.n) == SuperMatrix::zero(self.n)
    }
}

impl fmt::Display for SuperMatrix {
    /// One line per row, entries space-separated in the scalar text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, entry) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{entry}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix({}x{})", self.n, self.n)?;
        fmt::Display::fmt(self, f)
    }
}

/// A bijection on `{0..n}`, stored as `map[i] = image of i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Validates that `map` hits every index below its length exactly once.
    pub fn from_map(map: Vec<usize>) -> Result<Permutation, InvalidPermutation> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &image in &map {
            if image >= n || seen[image] {
                return Err(InvalidPermutation { n, map });
            }
            seen[image] = true;
        }
        Ok(Permutation { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &image) in self.map.iter().enumerate() {
            inv[image] = i;
        }
        Permutation { map: inv }
    }

    /// The 0/`eps` matrix `P` with `P[k][map(k)] = 0`.
    pub fn matrix(&self) -> SuperMatrix {
        let mut p = SuperMatrix::zero(self.n());
        for (k, &image) in self.map.iter().enumerate() {
            p.set(k, image, SuperScalar::ONE);
        }
        p
    }

    /// One-line text form with 1-based labels: position `i` holds the label
    /// assigned to vertex `i`, so the identity on three points is `1 2 3`.
    pub fn one_line(&self) -> String {
        let labels: Vec<String> = self.map.iter().map(|&v| (v + 1).to_string()).collect();
        labels.join(" ")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.one_line())
    }
}
