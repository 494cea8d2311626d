//! Independent reference implementations shared by the integration targets.
//! None of these go through the crate's elimination or Horner code paths.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vanderfit::scalar::q;
use vanderfit::{Field, NodeVector, Rational};

/// Lagrange form `Σ y_i Π_{j≠i} (x - x_j) / (x_i - x_j)`.
pub fn lagrange_eval<T: Field>(nodes: &[T], values: &[T], x: &T) -> T {
    let mut total = T::zero();
    for (i, (xi, yi)) in nodes.iter().zip(values).enumerate() {
        let mut term = yi.clone();
        for (j, xj) in nodes.iter().enumerate() {
            if i != j {
                term = term * (x.clone() - xj.clone()) / (xi.clone() - xj.clone());
            }
        }
        total = total + term;
    }
    total
}

/// `Σ c_k x^k` with explicit powers; `coefficients` ascending.
pub fn power_sum<T: Field>(ascending: &[T], x: &T) -> T {
    ascending.iter().enumerate().fold(T::zero(), |acc, (k, c)| acc + c.clone() * x.powi(k as u32))
}

/// Laplace expansion along the first row. Exponential; keep `n` small.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = q(0, 1);
    for col in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][col].clone() * cofactor_det(&minor);
        det = if col % 2 == 0 { det + term } else { det - term };
    }
    det
}

/// Ascending Vandermonde determinant by the recursion
/// `Det(V_n) = Det(V_{n-1}) · Π_{i<n} (x_n - x_i)`.
pub fn inductive_det(nodes: &[Rational]) -> Rational {
    let mut det = q(1, 1);
    for (n, xn) in nodes.iter().enumerate() {
        for xi in &nodes[..n] {
            det = det * (xn.clone() - xi.clone());
        }
    }
    det
}

pub fn ascending_rows(nodes: &[Rational]) -> Vec<Vec<Rational>> {
    nodes.iter().map(|x| (0..nodes.len()).map(|k| x.pow(k as u32)).collect()).collect()
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    q(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// `len` distinct rationals, sorted.
pub fn random_nodes(rng: &mut ChaCha8Rng, len: usize) -> NodeVector<Rational> {
    let mut nodes: Vec<Rational> = Vec::with_capacity(len);
    while nodes.len() < len {
        let x = random_rational(rng, 40, 12);
        if !nodes.contains(&x) {
            nodes.push(x);
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    NodeVector::new(nodes).unwrap()
}

/// Equispaced points of `[-1, 1]`, each moved by up to a quarter spacing.
pub fn jittered_nodes(rng: &mut ChaCha8Rng, len: usize) -> NodeVector<f64> {
    if len == 1 {
        return NodeVector::new(vec![rng.gen_range(-1.0..1.0)]).unwrap();
    }
    let h = 2.0 / (len - 1) as f64;
    let nodes = (0..len).map(|j| -1.0 + j as f64 * h + rng.gen_range(-0.25..0.25) * h).collect();
    NodeVector::new(nodes).unwrap()
}

/// Brute-force `max |f - p|` at `samples + 1` equispaced points, in f64.
pub fn dense_scan(f: impl Fn(f64) -> f64, ascending: &[f64], a: f64, b: f64, samples: usize) -> f64 {
    (0..=samples)
        .map(|j| {
            let x = a + (b - a) * j as f64 / samples as f64;
            (f(x) - power_sum(ascending, &x)).abs()
        })
        .fold(0.0, f64::max)
}
