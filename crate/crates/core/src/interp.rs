//! Interpolating polynomials through sample sets.
//!
//! `m + 1` samples always determine a unique polynomial of formal degree `m`.
//! When the samples come from a polynomial of lower degree `n`, the fitted
//! coefficients above `n` come out zero on every node set; when the sampled
//! function has higher degree (or is not a polynomial), the fit depends on
//! which nodes were chosen. [`degree_probe`] turns that observation into a
//! test for the degree of an unknown polynomial.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Field;
use crate::vandermonde::{build_descending, LinalgError, NodeVector};

/// Relative threshold below which a float coefficient counts as zero.
pub const DEFAULT_RELATIVE_ZERO_TOL: f64 = 1e-7;

/// Relative tolerance used when comparing float fits for equality.
pub const DEFAULT_FIT_MATCH_TOL: f64 = 1e-7;

/// Failure reported by a function handle, e.g. a point outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct EvalError(pub String);

impl EvalError {
    pub fn new(message: impl Into<String>) -> Self {
        EvalError(message.into())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("function failed at node {index} ({node}): {source}")]
    Evaluation { index: usize, node: String, source: EvalError },
    #[error("degree probe needs at least 2 trials, got {0}")]
    TooFewTrials(usize),
    #[error("interval [{a}, {b}] is empty")]
    EmptyInterval { a: String, b: String },
}

/// Coefficients in descending power order, `a_n, ..., a_1, a_0`.
///
/// The formal degree is `coefficients.len() - 1`; leading zeros are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coefficients: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    /// `None` for an empty coefficient list.
    pub fn new(coefficients: Vec<T>) -> Option<Self> {
        if coefficients.is_empty() {
            None
        } else {
            Some(Polynomial { coefficients })
        }
    }

    pub fn constant(value: T) -> Self {
        Polynomial { coefficients: vec![value] }
    }

    pub fn from_ascending(mut coefficients: Vec<T>) -> Option<Self> {
        coefficients.reverse();
        Self::new(coefficients)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn ascending(&self) -> Vec<T> {
        self.coefficients.iter().rev().cloned().collect()
    }

    /// Coefficient of `x^power`; zero beyond the formal degree.
    pub fn coefficient(&self, power: usize) -> T {
        if power > self.degree() {
            T::zero()
        } else {
            self.coefficients[self.degree() - power].clone()
        }
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &T) -> T {
        T::horner(&self.coefficients, x)
    }

    /// Prepends zero coefficients until the formal degree reaches `degree`.
    pub fn padded_to(&self, degree: usize) -> Self {
        let extra = degree.saturating_sub(self.degree());
        let mut coefficients = vec![T::zero(); extra];
        coefficients.extend(self.coefficients.iter().cloned());
        Polynomial { coefficients }
    }

    /// Highest power whose coefficient exceeds `tol` in magnitude. Exact
    /// backends ignore `tol` and test for zero structurally.
    pub fn effective_degree(&self, tol: f64) -> EffectiveDegree {
        let tol = if T::EXACT { 0.0 } else { tol };
        let effective = (0..=self.degree())
            .rev()
            .find(|&k| {
                let c = self.coefficient(k);
                if T::EXACT {
                    !c.is_zero()
                } else {
                    c.to_f64().abs() > tol
                }
            })
            .unwrap_or(0);
        EffectiveDegree { formal_degree: self.degree(), effective_degree: effective, zero_tolerance: tol }
    }

    /// [`effective_degree`](Self::effective_degree) with the threshold set to
    /// `DEFAULT_RELATIVE_ZERO_TOL · max|c|` on floats.
    pub fn effective_degree_default(&self) -> EffectiveDegree {
        let scale = self.coefficients.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        self.effective_degree(DEFAULT_RELATIVE_ZERO_TOL * scale)
    }

    pub fn close_to(&self, other: &Polynomial<T>, rel_tol: f64) -> bool {
        let degree = self.degree().max(other.degree());
        let (a, b) = (self.padded_to(degree), other.padded_to(degree));
        a.coefficients.iter().zip(&b.coefficients).all(|(x, y)| x.close_to(y, rel_tol))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }
}

/// Prints every term, zeros included: `0x^4 + 3x^3 + 1x^2 - 2x + 2`.
impl<T: Field> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        for (i, c) in self.coefficients.iter().enumerate() {
            let power = n - i;
            let negative = c < &T::zero();
            let magnitude = if negative { c.abs() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match power {
                0 => write!(f, "{magnitude}")?,
                1 => write!(f, "{magnitude}x")?,
                _ => write!(f, "{magnitude}x^{power}")?,
            }
        }
        Ok(())
    }
}

impl<T: Field> Serialize for Polynomial<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectiveDegree {
    pub formal_degree: usize,
    pub effective_degree: usize,
    #[serde(with = "crate::scalar::serde_f64")]
    pub zero_tolerance: f64,
}

/// Nodes paired with sampled values `b_i = f(x_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet<T> {
    nodes: NodeVector<T>,
    values: Vec<T>,
}

impl<T: Field> SampleSet<T> {
    pub fn new(nodes: NodeVector<T>, values: Vec<T>) -> Result<Self, InterpError> {
        if nodes.len() != values.len() {
            return Err(InterpError::LengthMismatch { nodes: nodes.len(), values: values.len() });
        }
        Ok(SampleSet { nodes, values })
    }

    /// From `(x, y)` pairs; the x values must be strictly increasing.
    pub fn from_pairs(pairs: Vec<(T, T)>) -> Result<Self, InterpError> {
        let (xs, ys): (Vec<T>, Vec<T>) = pairs.into_iter().unzip();
        Self::new(NodeVector::new(xs)?, ys)
    }

    pub fn nodes(&self) -> &NodeVector<T> {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &T)> {
        self.nodes.iter().zip(&self.values)
    }
}

/// Solves the descending Vandermonde system for the sample set.
pub fn fit<T: Field>(samples: &SampleSet<T>) -> Result<Polynomial<T>, InterpError> {
    let a = build_descending(samples.nodes());
    let coefficients = a.solve(samples.values())?;
    Ok(Polynomial::new(coefficients).expect("sample sets are nonempty"))
}

/// Largest `|P(x_i) - b_i|` over the samples.
pub fn node_residual<T: Field>(samples: &SampleSet<T>, p: &Polynomial<T>) -> f64 {
    samples.iter().map(|(x, b)| (p.evaluate(x) - b.clone()).to_f64().abs()).fold(0.0, f64::max)
}

/// True when the fit reproduces every sample: structurally on exact
/// backends, within `rel_tol` of the sample scale on floats.
pub fn reproduces_samples<T: Field>(samples: &SampleSet<T>, p: &Polynomial<T>, rel_tol: f64) -> bool {
    if T::EXACT {
        return samples.iter().all(|(x, b)| &p.evaluate(x) == b);
    }
    let scale = samples.values().iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    node_residual(samples, p) <= rel_tol * scale
}

/// Evaluates `f` at every node, reporting the index of the first failure.
pub fn sample_nodes<T, F>(f: F, nodes: &NodeVector<T>) -> Result<SampleSet<T>, InterpError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    let values = nodes
        .iter()
        .enumerate()
        .map(|(index, x)| f(x).map_err(|source| InterpError::Evaluation { index, node: x.to_string(), source }))
        .collect::<Result<Vec<_>, _>>()?;
    SampleSet::new(nodes.clone(), values)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProbe<T> {
    pub consistent: bool,
    pub node_sets: Vec<NodeVector<T>>,
    pub polynomials: Vec<Polynomial<T>>,
}

/// Fits `f` with `degree + 1` nodes on `trials` shifted grids inside
/// `[a, b]` and reports whether every fit agrees.
///
/// With spacing `h = (b - a) / (degree + trials)`, trial `t` (1-based) uses
/// nodes `a + (t + j) h` for `j = 0..=degree`. On `[0, 4]` with degree 2
/// this yields `{1, 2, 3}` and `{2, 3, 4}`.
pub fn degree_probe<T, F>(f: F, a: &T, b: &T, degree: usize, trials: usize) -> Result<DegreeProbe<T>, InterpError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    if trials < 2 {
        return Err(InterpError::TooFewTrials(trials));
    }
    if a.partial_cmp(b) != Some(Ordering::Less) {
        return Err(InterpError::EmptyInterval { a: a.to_string(), b: b.to_string() });
    }
    let h = (b.clone() - a.clone()) / T::from_i64((degree + trials) as i64);
    let node_sets = (1..=trials)
        .map(|t| {
            let nodes = (0..=degree).map(|j| a.clone() + h.clone() * T::from_i64((t + j) as i64)).collect();
            NodeVector::new(nodes)
        })
        .collect::<Result<Vec<_>, _>>()?;
    degree_probe_on(f, node_sets)
}

/// [`degree_probe`] on caller-chosen node sets.
pub fn degree_probe_on<T, F>(f: F, node_sets: Vec<NodeVector<T>>) -> Result<DegreeProbe<T>, InterpError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    if node_sets.len() < 2 {
        return Err(InterpError::TooFewTrials(node_sets.len()));
    }
    let polynomials = node_sets.iter().map(|nodes| fit(&sample_nodes(&f, nodes)?)).collect::<Result<Vec<_>, _>>()?;
    let consistent = polynomials.windows(2).all(|w| w[0].close_to(&w[1], DEFAULT_FIT_MATCH_TOL));
    Ok(DegreeProbe { consistent, node_sets, polynomials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn r(v: i64) -> Rational {
        Rational::integer(v)
    }

    fn poly(values: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(values.iter().map(|&v| r(v)).collect()).unwrap()
    }

    fn samples(pairs: &[(Rational, Rational)]) -> SampleSet<Rational> {
        SampleSet::from_pairs(pairs.to_vec()).unwrap()
    }

    fn polyfn(p: Polynomial<Rational>) -> impl Fn(&Rational) -> Result<Rational, EvalError> {
        move |x| Ok(p.evaluate(x))
    }

    #[test]
    fn fits_worked_examples() {
        assert_eq!(fit(&samples(&[(r(-1), r(2)), (r(1), r(4))])).unwrap(), poly(&[1, 3]));
        let s = samples(&[(r(-1), r(3)), (q(-1, 3), q(163, 81)), (q(1, 3), q(163, 81)), (r(1), r(3))]);
        assert_eq!(fit(&s).unwrap(), Polynomial::new(vec![r(0), q(10, 9), r(0), q(17, 9)]).unwrap());
        assert_eq!(fit(&samples(&[(q(2, 7), r(5))])).unwrap(), poly(&[5]));
        assert_eq!(fit(&samples(&[(r(1), r(4)), (r(2), r(26)), (r(3), r(86))])).unwrap(), poly(&[19, -35, 20]));
    }

    #[test]
    fn evaluation() {
        assert_eq!(poly(&[19, -35, 20]).evaluate(&r(3)), r(86));
        assert_eq!(poly(&[7, -2, 9]).evaluate(&r(0)), r(9));
        assert_eq!(poly(&[3, 1, -2, 2]).evaluate(&r(4)), r(202));
        assert_eq!(poly(&[3, 1, -2, 2]).coefficient(3), r(3));
        assert_eq!(poly(&[3, 1, -2, 2]).coefficient(7), r(0));
    }

    #[test]
    fn effective_degrees() {
        assert_eq!(poly(&[0, 0, 1, 3]).effective_degree(0.0).effective_degree, 1);
        assert_eq!(poly(&[0]).effective_degree(0.0).effective_degree, 0);
        let d = poly(&[0, 3, 1, -2, 2]).effective_degree(0.0);
        assert_eq!((d.formal_degree, d.effective_degree), (4, 3));
        // exact backends ignore the tolerance
        assert_eq!(poly(&[1, 0]).effective_degree(10.0).effective_degree, 1);
        let noisy = Polynomial::new(vec![5.57e-11, 56.118, -140.296, 101.324, -11.691, -5.456, 0.0]).unwrap();
        assert_eq!(noisy.effective_degree_default().effective_degree, 5);
        assert_eq!(noisy.effective_degree(0.0).effective_degree, 6);
    }

    #[test]
    fn display_keeps_zero_terms() {
        assert_eq!(poly(&[0, 3, 1, -2, 2]).to_string(), "0x^4 + 3x^3 + 1x^2 - 2x + 2");
        assert_eq!(poly(&[-1, 3, 5]).to_string(), "-1x^2 + 3x + 5");
        assert_eq!(Polynomial::new(vec![q(10, 9), r(0), q(17, 9)]).unwrap().to_string(), "10/9x^2 + 0x + 17/9");
    }

    #[test]
    fn fit_through_nodes_is_exact() {
        let s = samples(&[(r(-2), q(1, 3)), (r(0), r(-1)), (q(1, 2), r(4)), (r(5), q(-7, 2))]);
        let p = fit(&s).unwrap();
        assert!(reproduces_samples(&s, &p, 0.0));
        assert_eq!(node_residual(&s, &p), 0.0);
    }

    #[test]
    fn under_determined_fit_depends_on_nodes() {
        let f = polyfn(poly(&[1, 0, 0, 0, 2]));
        let at = |xs: &[i64]| {
            fit(&sample_nodes(&f, &NodeVector::new(xs.iter().map(|&v| r(v)).collect()).unwrap()).unwrap()).unwrap()
        };
        assert_eq!(at(&[-1, 1]), poly(&[0, 3]));
        assert_eq!(at(&[0, 1]), poly(&[1, 2]));
    }

    #[test]
    fn probe_detects_wrong_degree() {
        let f = polyfn(poly(&[3, 1, -2, 2]));
        let probe = degree_probe(&f, &r(0), &r(4), 2, 2).unwrap();
        assert!(!probe.consistent);
        assert_eq!(probe.node_sets[0].as_slice(), &[r(1), r(2), r(3)]);
        assert_eq!(probe.node_sets[1].as_slice(), &[r(2), r(3), r(4)]);
        assert_eq!(probe.polynomials, vec![poly(&[19, -35, 20]), poly(&[28, -80, 74])]);
        let probe = degree_probe(&f, &r(0), &r(4), 3, 2).unwrap();
        assert!(probe.consistent);
    }

    #[test]
    fn probe_accepts_right_degree() {
        let f = polyfn(poly(&[1, 3]));
        let sets = vec![NodeVector::new(vec![r(-1), r(1)]).unwrap(), NodeVector::new(vec![r(0), r(2)]).unwrap()];
        let probe = degree_probe_on(&f, sets).unwrap();
        assert!(probe.consistent);
        assert_eq!(probe.polynomials, vec![poly(&[1, 3]), poly(&[1, 3])]);

        let seven = |_: &Rational| Ok(r(7));
        for degree in 0..4 {
            assert!(degree_probe(seven, &r(-3), &r(5), degree, 3).unwrap().consistent);
        }
    }

    #[test]
    fn probe_argument_errors() {
        let f = |x: &Rational| Ok(x.clone());
        assert_eq!(degree_probe(f, &r(0), &r(1), 1, 1).unwrap_err(), InterpError::TooFewTrials(1));
        assert!(matches!(degree_probe(f, &r(1), &r(1), 1, 2), Err(InterpError::EmptyInterval { .. })));
    }

    #[test]
    fn sampling_errors_carry_index() {
        let nodes = NodeVector::new(vec![r(0), r(1), r(2)]).unwrap();
        let f = |x: &Rational| if *x == r(1) { Err(EvalError::new("pole")) } else { Ok(x.clone()) };
        let err = sample_nodes(f, &nodes).unwrap_err();
        assert_eq!(err, InterpError::Evaluation { index: 1, node: "1".into(), source: EvalError::new("pole") });
        assert!(matches!(SampleSet::new(nodes, vec![r(1)]), Err(InterpError::LengthMismatch { nodes: 3, values: 1 })));
        assert!(SampleSet::from_pairs(vec![(r(1), r(0)), (r(0), r(0))]).is_err());
    }

    #[test]
    fn float_fit_residual() {
        let s = SampleSet::from_pairs(
            (0..9)
                .map(|i| {
                    let x = -1.0 + i as f64 / 4.0;
                    (x, (3.0 * x).sin())
                })
                .collect(),
        )
        .unwrap();
        let p = fit(&s).unwrap();
        assert!(node_residual(&s, &p) < 1e-12);
        assert!(reproduces_samples(&s, &p, 1e-10));
    }
}
