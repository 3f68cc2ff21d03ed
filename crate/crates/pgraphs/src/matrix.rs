//! Sparse matrices over an exact (or floating) scalar, with the span-closure
//! rank computation used by the representation checks.
//!
//! The scalar is abstracted through [`Scalar`], a num-traits bound satisfied
//! by `BigRational` (the alias [`crate::Q`] used everywhere in this crate)
//! and by `f64`. Matrices store no zeros, so equality is exact structural
//! equality of the cleaned entry maps.

use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Div, Mul, Neg, Sub};

/// Scalar requirements for matrix arithmetic and Gaussian elimination.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// Square sparse matrix; `entries` maps `(row, col)` to a nonzero scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    dim: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SparseMatrix::zero(dim);
        for i in 0..dim {
            m.entries.insert((i, i), T::one());
        }
        m
    }

    /// Matrix unit E_{row,col} (single 1 entry).
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = SparseMatrix::zero(dim);
        m.set(row, col, T::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        assert!(row < self.dim && col < self.dim, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.entries.iter()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            let sum = out.get(r, c) + v.clone();
            out.set(r, c, sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            let diff = out.get(r, c) - v.clone();
            out.set(r, c, diff);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        // Index the right factor by row for the sparse product.
        let mut by_row: BTreeMap<usize, Vec<(usize, &T)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseMatrix::zero(self.dim);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    let cur = out.get(r, c) + a.clone() * b.clone();
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// Adjoint. Entries are rational, so conjugation is the transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = SparseMatrix::zero(self.dim);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.clone());
        }
        out
    }

    pub fn is_projection(&self) -> bool {
        match self.mul(self) {
            Ok(sq) => sq == *self && self.adjoint() == *self,
            Err(_) => false,
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        match (self.mul(other), other.mul(self)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Flatten to the sparse coordinate vector used by the span basis.
    fn to_vec(&self) -> Vec<(usize, T)> {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (r * self.dim + c, v.clone()))
            .collect()
    }

    /// Serialization per the report format: `dim`, then sorted
    /// `row col value` triples.
    pub fn render(&self, fmt_value: impl Fn(&T) -> String) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for (&(r, c), v) in &self.entries {
            s.push_str(&format!("{} {} {}\n", r, c, fmt_value(v)));
        }
        s
    }

    /// `Some((r, c))` when the matrix is a single matrix unit E_{r,c}.
    pub fn as_unit(&self) -> Option<(usize, usize)> {
        if self.entries.len() != 1 {
            return None;
        }
        let (&(r, c), v) = self.entries.iter().next().unwrap();
        if *v == T::one() {
            Some((r, c))
        } else {
            None
        }
    }
}

/// Row-echelon basis of sparse vectors, maintained incrementally.
pub struct SpanBasis<T> {
    // (pivot index, vector normalized to pivot 1), kept sorted by pivot.
    rows: Vec<(usize, Vec<(usize, T)>)>,
}

fn vec_get<T: Scalar>(v: &[(usize, T)], idx: usize) -> T {
    v.iter()
        .find(|(i, _)| *i == idx)
        .map(|(_, x)| x.clone())
        .unwrap_or_else(T::zero)
}

fn vec_axpy<T: Scalar>(v: &[(usize, T)], coeff: &T, w: &[(usize, T)]) -> Vec<(usize, T)> {
    // v - coeff * w, merged over sorted index lists
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i >= v.len() || w[j].0 < v[i].0 {
            let x = T::zero() - coeff.clone() * w[j].1.clone();
            if !x.is_zero() {
                out.push((w[j].0, x));
            }
            j += 1;
        } else {
            let x = v[i].1.clone() - coeff.clone() * w[j].1.clone();
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<T: Scalar> SpanBasis<T> {
    pub fn new() -> Self {
        SpanBasis { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; if independent, insert and return true.
    pub fn insert(&mut self, mut v: Vec<(usize, T)>) -> bool {
        v.sort_by_key(|(i, _)| *i);
        loop {
            let Some(&(pivot, _)) = v.first() else {
                return false;
            };
            match self.rows.binary_search_by_key(&pivot, |(p, _)| *p) {
                Ok(pos) => {
                    let coeff = vec_get(&v, pivot);
                    v = vec_axpy(&v, &coeff, &self.rows[pos].1);
                }
                Err(pos) => {
                    let lead = v[0].1.clone();
                    let normalized: Vec<(usize, T)> = v
                        .iter()
                        .map(|(i, x)| (*i, x.clone() / lead.clone()))
                        .collect();
                    self.rows.insert(pos, (pivot, normalized));
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, mut v: Vec<(usize, T)>) -> bool {
        v.sort_by_key(|(i, _)| *i);
        loop {
            let Some(&(pivot, _)) = v.first() else {
                return true;
            };
            match self.rows.binary_search_by_key(&pivot, |(p, _)| *p) {
                Ok(pos) => {
                    let coeff = vec_get(&v, pivot);
                    v = vec_axpy(&v, &coeff, &self.rows[pos].1);
                }
                Err(_) => return false,
            }
        }
    }
}

impl<T: Scalar> Default for SpanBasis<T> {
    fn default() -> Self {
        SpanBasis::new()
    }
}

/// Linear dimension of the span of `mats`, with no multiplicative closure.
pub fn linear_span_dim<T: Scalar>(dim: usize, mats: &[SparseMatrix<T>]) -> usize {
    let mut basis: SpanBasis<T> = SpanBasis::new();
    for m in mats {
        assert_eq!(m.dim(), dim, "span generators must share the dimension");
        basis.insert(m.to_vec());
    }
    basis.rank()
}

/// Dimension of the *-algebra span generated by `mats`: the linear span is
/// closed under adjoints and pairwise products until the rank stabilizes.
/// Terminates because the rank is bounded by dim².
pub fn star_algebra_span_dim<T: Scalar>(dim: usize, mats: &[SparseMatrix<T>]) -> usize {
    let mut basis: SpanBasis<T> = SpanBasis::new();
    let mut reps: Vec<SparseMatrix<T>> = Vec::new();
    let mut queue: Vec<SparseMatrix<T>> = Vec::new();
    for m in mats {
        assert_eq!(m.dim(), dim, "span generators must share the dimension");
        queue.push(m.clone());
        queue.push(m.adjoint());
    }
    while let Some(m) = queue.pop() {
        if m.is_zero() || !basis.insert(m.to_vec()) {
            continue;
        }
        let adj = m.adjoint();
        if !adj.is_zero() {
            queue.push(adj.clone());
        }
        for r in &reps {
            for prod in [m.mul(r).unwrap(), r.mul(&m).unwrap()] {
                if !prod.is_zero() {
                    queue.push(prod);
                }
            }
        }
        let sq = m.mul(&m).unwrap();
        if !sq.is_zero() {
            queue.push(sq);
        }
        reps.push(m);
    }
    basis.rank()
}
