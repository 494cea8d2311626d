//! Vandermonde matrices and the dense linear algebra around them.
//!
//! For nodes `x_1 < ... < x_n` the descending matrix has rows
//! `(x_i^{n-1}, ..., x_i, 1)` and is the one the interpolation solver uses,
//! since its unknowns come out as coefficients in descending power order.
//! The ascending matrix has rows `(1, x_i, ..., x_i^{n-1})`; its determinant
//! has the closed product form `prod_{i<j} (x_j - x_i)`. Reversing the
//! columns of one gives the other, so the two determinants differ by the
//! sign of that reversal.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix order must be at least 1")]
    EmptyMatrix,
    #[error("row {row} has {len} entries, expected {order}")]
    RaggedRow { row: usize, len: usize, order: usize },
    #[error("node vector must not be empty")]
    NoNodes,
    #[error("nodes are not strictly increasing: x[{first}] = {left} is not below x[{second}] = {right}")]
    NotIncreasing { first: usize, second: usize, left: String, right: String },
    #[error("matrix is singular: no nonzero pivot in column {stage}")]
    Singular { stage: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a permutation of 0..{order}: {mapping:?}")]
    InvalidPermutation { order: usize, mapping: Vec<usize> },
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Field> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let order = rows.len();
        if order == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(order * order);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != order {
                return Err(LinalgError::RaggedRow { row, len: values.len(), order });
            }
            entries.extend(values);
        }
        Ok(SquareMatrix { order, entries })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self, LinalgError> {
        if order == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let entries = (0..order * order).map(|k| f(k / order, k % order)).collect();
        Ok(SquareMatrix { order, entries })
    }

    pub fn identity(order: usize) -> Result<Self, LinalgError> {
        Self::from_fn(order, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn mul_matrix(&self, rhs: &SquareMatrix<T>) -> Result<SquareMatrix<T>, LinalgError> {
        self.check_order(rhs.order)?;
        let n = self.order;
        Self::from_fn(n, |i, j| (0..n).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * rhs.get(k, j).clone()))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        self.check_order(v.len())?;
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    pub fn reverse_columns(&self) -> SquareMatrix<T> {
        let n = self.order;
        SquareMatrix { order: n, entries: (0..n * n).map(|k| self.get(k / n, n - 1 - k % n).clone()).collect() }
    }

    /// Largest absolute entry of `self - other`, as a float.
    pub fn max_abs_deviation(&self, other: &SquareMatrix<T>) -> Result<f64, LinalgError> {
        self.check_order(other.order)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max))
    }

    fn check_order(&self, found: usize) -> Result<(), LinalgError> {
        if found != self.order {
            return Err(LinalgError::DimensionMismatch { expected: self.order, found });
        }
        Ok(())
    }

    /// Determinant by Gaussian elimination, independent of any closed form.
    ///
    /// Row swaps flip the sign; adding multiples of one row to another leaves
    /// it unchanged. A singular matrix yields zero rather than an error.
    pub fn det_elimination(&self) -> T {
        let n = self.order;
        let mut work = self.to_rows();
        let mut det = T::one();
        for col in 0..n {
            let Some(pivot) = choose_pivot(&work, col) else {
                return T::zero();
            };
            if pivot != col {
                work.swap(pivot, col);
                det = -det;
            }
            let p = work[col][col].clone();
            for r in col + 1..n {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone() / p.clone();
                let (upper, lower) = work.split_at_mut(r);
                for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *x = x.clone() - factor.clone() * y.clone();
                }
            }
            det = det * p;
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<SquareMatrix<T>, LinalgError> {
        let n = self.order;
        let mut work = self.to_rows();
        let mut inv = Self::identity(n)?.to_rows();
        for col in 0..n {
            let pivot = choose_pivot(&work, col).ok_or(LinalgError::Singular { stage: col })?;
            work.swap(pivot, col);
            inv.swap(pivot, col);
            let p = work[col][col].clone();
            for c in 0..n {
                work[col][c] = work[col][c].clone() / p.clone();
                inv[col][c] = inv[col][c].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone();
                for c in 0..n {
                    let dw = factor.clone() * work[col][c].clone();
                    work[r][c] = work[r][c].clone() - dw;
                    let di = factor.clone() * inv[col][c].clone();
                    inv[r][c] = inv[r][c].clone() - di;
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Solves `self * x = rhs` by forward elimination and back substitution.
    /// No inverse is formed.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        self.check_order(rhs.len())?;
        let n = self.order;
        let mut work = self.to_rows();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = choose_pivot(&work, col).ok_or(LinalgError::Singular { stage: col })?;
            work.swap(pivot, col);
            b.swap(pivot, col);
            let p = work[col][col].clone();
            for r in col + 1..n {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone() / p.clone();
                let (upper, lower) = work.split_at_mut(r);
                for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *x = x.clone() - factor.clone() * y.clone();
                }
                let delta = factor * b[col].clone();
                b[r] = b[r].clone() - delta;
            }
        }
        let mut x = vec![T::zero(); n];
        for r in (0..n).rev() {
            let tail = (r + 1..n).fold(T::zero(), |acc, c| acc + work[r][c].clone() * x[c].clone());
            x[r] = (b[r].clone() - tail) / work[r][r].clone();
        }
        Ok(x)
    }

    /// Row `i` of the result is row `p(i)` of `self`.
    pub fn permute_rows(&self, p: &Permutation) -> Result<SquareMatrix<T>, LinalgError> {
        self.check_order(p.order())?;
        let n = self.order;
        Self::from_fn(n, |i, j| self.get(p.image(i), j).clone())
    }

    /// Column `j` of the result is column `p(j)` of `self`.
    pub fn permute_columns(&self, p: &Permutation) -> Result<SquareMatrix<T>, LinalgError> {
        self.check_order(p.order())?;
        let n = self.order;
        Self::from_fn(n, |i, j| self.get(i, p.image(j)).clone())
    }
}

/// Exact backends take the first nonzero entry; floats take the largest magnitude.
fn choose_pivot<T: Field>(work: &[Vec<T>], col: usize) -> Option<usize> {
    let candidates = (col..work.len()).filter(|&r| !work[r][col].is_zero());
    if T::EXACT {
        return candidates.min();
    }
    candidates.max_by(|&a, &b| {
        let (x, y) = (work[a][col].to_f64().abs(), work[b][col].to_f64().abs());
        // ties resolve to the earlier row
        x.total_cmp(&y).then(b.cmp(&a))
    })
}

impl<T: fmt::Display> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for row in cells.chunks(self.order) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Array of rows, each entry its string form.
impl<T: fmt::Display> Serialize for SquareMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.order))?;
        for row in self.entries.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            seq.serialize_element(&cells)?;
        }
        seq.end()
    }
}

/// Strictly increasing, nonempty list of interpolation nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeVector<T>(Vec<T>);

impl<T: Field> NodeVector<T> {
    pub fn new(nodes: Vec<T>) -> Result<Self, LinalgError> {
        if nodes.is_empty() {
            return Err(LinalgError::NoNodes);
        }
        for (i, pair) in nodes.windows(2).enumerate() {
            if pair[0].partial_cmp(&pair[1]) != Some(Ordering::Less) {
                return Err(LinalgError::NotIncreasing {
                    first: i,
                    second: i + 1,
                    left: pair[0].to_string(),
                    right: pair[1].to_string(),
                });
            }
        }
        Ok(NodeVector(nodes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn first(&self) -> &T {
        &self.0[0]
    }

    pub fn last(&self) -> &T {
        &self.0[self.0.len() - 1]
    }

    pub fn convert<U: Field>(&self, f: impl Fn(&T) -> U) -> Result<NodeVector<U>, LinalgError> {
        NodeVector::new(self.0.iter().map(f).collect())
    }
}

impl<'a, T> IntoIterator for &'a NodeVector<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<T: Serialize> Serialize for NodeVector<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Bijection on `0..n`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, LinalgError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(LinalgError::InvalidPermutation { order: n, mapping });
            }
            seen[m] = true;
        }
        if n == 0 {
            return Err(LinalgError::InvalidPermutation { order: 0, mapping });
        }
        Ok(Permutation(mapping))
    }

    /// Builds from 1-based images, e.g. `[3, 2, 1]` for `1↦3, 2↦2, 3↦1`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, LinalgError> {
        let mapping = images
            .iter()
            .map(|&i| i.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| LinalgError::InvalidPermutation { order: images.len(), mapping: images.to_vec() })?;
        Self::new(mapping)
    }

    pub fn identity(order: usize) -> Self {
        Permutation((0..order).collect())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }
}

/// Entry `i` of the result is `v[p(i)]`.
pub fn permute_vector<T: Clone>(v: &[T], p: &Permutation) -> Result<Vec<T>, LinalgError> {
    if v.len() != p.order() {
        return Err(LinalgError::DimensionMismatch { expected: p.order(), found: v.len() });
    }
    Ok((0..v.len()).map(|i| v[p.image(i)].clone()).collect())
}

/// Row `i` is `(x_i^{n-1}, ..., x_i, 1)`.
pub fn build_descending<T: Field>(nodes: &NodeVector<T>) -> SquareMatrix<T> {
    let n = nodes.len();
    let x = nodes.as_slice();
    SquareMatrix::from_fn(n, |i, j| x[i].powi((n - 1 - j) as u32)).expect("node vector is nonempty")
}

/// Row `i` is `(1, x_i, ..., x_i^{n-1})`.
pub fn build_ascending<T: Field>(nodes: &NodeVector<T>) -> SquareMatrix<T> {
    let n = nodes.len();
    let x = nodes.as_slice();
    SquareMatrix::from_fn(n, |i, j| x[i].powi(j as u32)).expect("node vector is nonempty")
}

/// `prod_{i<j} (x_j - x_i)`, the determinant of the ascending matrix.
pub fn det_product<T: Field>(nodes: &NodeVector<T>) -> T {
    let x = nodes.as_slice();
    let mut acc = T::one();
    for j in 1..x.len() {
        for i in 0..j {
            acc = acc * (x[j].clone() - x[i].clone());
        }
    }
    acc
}

/// Sign of the column reversal taking the ascending matrix of order `order`
/// to the descending one: `floor(order/2)` transpositions.
pub fn sign_relation(order: usize) -> i32 {
    if (order / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `‖A·a − b‖_∞` as a float.
pub fn residual_inf<T: Field>(m: &SquareMatrix<T>, solution: &[T], rhs: &[T]) -> Result<f64, LinalgError> {
    let image = m.mul_vec(solution)?;
    if rhs.len() != image.len() {
        return Err(LinalgError::DimensionMismatch { expected: image.len(), found: rhs.len() });
    }
    Ok(image.into_iter().zip(rhs).map(|(a, b)| (a - b.clone()).to_f64().abs()).fold(0.0, f64::max))
}
