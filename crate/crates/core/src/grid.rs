//! Uniform and dyadic partitions, the affine map onto `[0, 1]`, and sampling.

use std::cmp::Ordering;

use num_bigint::BigInt;
use thiserror::Error;

use crate::interp::{sample_nodes, EvalError, InterpError, SampleSet};
use crate::scalar::{Field, Rational};
use crate::vandermonde::NodeVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("a partition needs at least one segment")]
    NoSegments,
    #[error("interval endpoints out of order: {a} is not below {b}")]
    BadInterval { a: String, b: String },
    #[error("base count must be at least 1")]
    ZeroBase,
    #[error("level {level} with base {base} exceeds the segment limit")]
    TooFine { base: u64, level: u32 },
}

/// `n + 1` equispaced nodes from `a` to `b`, endpoints included exactly.
///
/// Node `j` is computed as `(a (n - j) + b j) / n`, so an interval symmetric
/// about zero yields a node set closed under negation on floats too.
pub fn uniform_partition<T: Field>(a: &T, b: &T, segments: usize) -> Result<NodeVector<T>, GridError> {
    if segments < 1 {
        return Err(GridError::NoSegments);
    }
    if a.partial_cmp(b) != Some(Ordering::Less) {
        return Err(GridError::BadInterval { a: a.to_string(), b: b.to_string() });
    }
    let n = T::from_i64(segments as i64);
    let nodes = (0..=segments)
        .map(|j| match j {
            0 => a.clone(),
            j if j == segments => b.clone(),
            j => {
                let left = T::from_i64((segments - j) as i64);
                let right = T::from_i64(j as i64);
                (a.clone() * left + b.clone() * right) / n.clone()
            }
        })
        .collect();
    NodeVector::new(nodes).map_err(|_| GridError::BadInterval { a: a.to_string(), b: b.to_string() })
}

/// Largest `N_k` a [`DyadicPartition`] will materialize.
pub const MAX_SEGMENTS: u64 = 1 << 20;

/// The level-`k` dyadic partition of `[0, 1]`: nodes `j / N_k` with
/// `N_k = 2^k N_0`. Partitions of increasing level are nested.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicPartition {
    base_count: u64,
    level: u32,
    node_count: u64,
    nodes: NodeVector<Rational>,
}

impl DyadicPartition {
    pub fn new(base_count: u64, level: u32) -> Result<Self, GridError> {
        if base_count == 0 {
            return Err(GridError::ZeroBase);
        }
        let node_count = 1u64
            .checked_shl(level)
            .and_then(|p| p.checked_mul(base_count))
            .filter(|&n| n <= MAX_SEGMENTS)
            .ok_or(GridError::TooFine { base: base_count, level })?;
        let nodes = (0..=node_count)
            .map(|j| Rational::new(BigInt::from(j), BigInt::from(node_count)).expect("node count is positive"))
            .collect();
        let nodes = NodeVector::new(nodes).expect("j / N is increasing in j");
        Ok(DyadicPartition { base_count, level, node_count, nodes })
    }

    pub fn base_count(&self) -> u64 {
        self.base_count
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `N_k`, the number of segments (one less than the number of nodes).
    pub fn node_count(&self) -> u64 {
        self.node_count
    }

    pub fn nodes(&self) -> &NodeVector<Rational> {
        &self.nodes
    }

    pub fn mesh_width(&self) -> Rational {
        Rational::new(1, BigInt::from(self.node_count)).expect("node count is positive")
    }

    pub fn nodes_as<T: Field>(&self) -> NodeVector<T> {
        self.nodes.convert(T::from_rational).expect("dyadic nodes stay increasing in either backend")
    }

    pub fn refine(&self) -> Result<Self, GridError> {
        Self::new(self.base_count, self.level + 1)
    }
}

pub fn dyadic(base_count: u64, level: u32) -> Result<DyadicPartition, GridError> {
    DyadicPartition::new(base_count, level)
}

/// The affine bijection between `[a, b]` and `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainMap<T> {
    a: T,
    b: T,
}

impl<T: Field> DomainMap<T> {
    pub fn new(a: T, b: T) -> Result<Self, GridError> {
        if a.partial_cmp(&b) != Some(Ordering::Less) {
            return Err(GridError::BadInterval { a: a.to_string(), b: b.to_string() });
        }
        Ok(DomainMap { a, b })
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    /// `h(x) = (x - a) / (b - a)`.
    pub fn forward(&self, x: &T) -> T {
        (x.clone() - self.a.clone()) / (self.b.clone() - self.a.clone())
    }

    /// `a + y (b - a)`.
    pub fn inverse(&self, y: &T) -> T {
        self.a.clone() + y.clone() * (self.b.clone() - self.a.clone())
    }

    /// `g(y) = f(a + y (b - a))`, defined on `[0, 1]`.
    pub fn to_unit<'f, F>(&self, f: F) -> impl Fn(&T) -> Result<T, EvalError> + 'f
    where
        F: Fn(&T) -> Result<T, EvalError> + 'f,
    {
        let map = self.clone();
        move |y: &T| f(&map.inverse(y))
    }

    /// `f(x) = g(h(x))`, the inverse of [`to_unit`](Self::to_unit).
    pub fn from_unit<'f, G>(&self, g: G) -> impl Fn(&T) -> Result<T, EvalError> + 'f
    where
        G: Fn(&T) -> Result<T, EvalError> + 'f,
    {
        let map = self.clone();
        move |x: &T| g(&map.forward(x))
    }
}

/// Pairs each node with `f(node)`.
pub fn sample<T, F>(f: F, nodes: &NodeVector<T>) -> Result<SampleSet<T>, InterpError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    sample_nodes(f, nodes)
}
