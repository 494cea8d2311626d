//! The closed registry of named test functions.
//!
//! Each entry has a native interval; studies on `[0, 1]` go through the
//! affine map onto that interval.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::grid::DomainMap;
use crate::interp::{EvalError, Polynomial};
use crate::scalar::{q, Backend, Field, Rational};

pub const REGISTRY: &[&str] = &["abs", "sine", "log1p", "runge", "poly:<c_n,...,c_0>"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown function {id:?}; known: {}", REGISTRY.join(", "))]
    Unknown { id: String },
    #[error("bad polynomial coefficients in {id:?}")]
    BadCoefficients { id: String },
    #[error("{id} takes irrational values and has no exact backend")]
    NotExact { id: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum KnownFunction {
    /// `|x|` on `[-1, 1]`.
    Abs,
    /// `sin x` on `[-π, π]`.
    Sine,
    /// `ln(1 + x)` on `[-3/4, 3/4]`.
    Log1p,
    /// `1 / (1 + 25 x^2)` on `[-1, 1]`.
    Runge,
    /// A polynomial on `[0, 1]`, coefficients descending.
    Poly(Polynomial<Rational>),
}

impl KnownFunction {
    pub fn parse(id: &str) -> Result<Self, RegistryError> {
        match id {
            "abs" => Ok(KnownFunction::Abs),
            "sine" => Ok(KnownFunction::Sine),
            "log1p" => Ok(KnownFunction::Log1p),
            "runge" => Ok(KnownFunction::Runge),
            _ => {
                let coeffs = id.strip_prefix("poly:").ok_or_else(|| RegistryError::Unknown { id: id.to_string() })?;
                let bad = || RegistryError::BadCoefficients { id: id.to_string() };
                let values = coeffs
                    .split(',')
                    .map(|c| c.parse::<Rational>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                Polynomial::new(values).map(KnownFunction::Poly).ok_or_else(bad)
            }
        }
    }

    pub fn supports_exact(&self) -> bool {
        matches!(self, KnownFunction::Abs | KnownFunction::Runge | KnownFunction::Poly(_))
    }

    pub fn default_backend(&self) -> Backend {
        if self.supports_exact() {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Result<Rational, EvalError> {
        match self {
            KnownFunction::Abs => Ok(x.abs()),
            KnownFunction::Runge => Ok(q(1, 1) / (q(1, 1) + q(25, 1) * x.clone() * x.clone())),
            KnownFunction::Poly(p) => Ok(p.evaluate(x)),
            KnownFunction::Sine | KnownFunction::Log1p => Err(EvalError::new(format!("{self} has no exact values"))),
        }
    }

    pub fn eval_float(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            KnownFunction::Abs => Ok(x.abs()),
            KnownFunction::Sine => Ok(x.sin()),
            KnownFunction::Log1p if x <= -1.0 => Err(EvalError::new(format!("ln(1+x) undefined at x = {x}"))),
            KnownFunction::Log1p => Ok(x.ln_1p()),
            KnownFunction::Runge => Ok(1.0 / (1.0 + 25.0 * x * x)),
            KnownFunction::Poly(p) => Ok(p.coefficients().iter().fold(0.0, |acc, c| acc * x + c.to_f64())),
        }
    }

    pub fn interval_float(&self) -> (f64, f64) {
        match self {
            KnownFunction::Abs | KnownFunction::Runge => (-1.0, 1.0),
            KnownFunction::Sine => (-PI, PI),
            KnownFunction::Log1p => (-0.75, 0.75),
            KnownFunction::Poly(_) => (0.0, 1.0),
        }
    }

    pub fn interval_exact(&self) -> Option<(Rational, Rational)> {
        match self {
            KnownFunction::Abs | KnownFunction::Runge => Some((q(-1, 1), q(1, 1))),
            KnownFunction::Log1p => Some((q(-3, 4), q(3, 4))),
            KnownFunction::Poly(_) => Some((q(0, 1), q(1, 1))),
            KnownFunction::Sine => None,
        }
    }
}

impl fmt::Display for KnownFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnownFunction::Abs => f.write_str("abs"),
            KnownFunction::Sine => f.write_str("sine"),
            KnownFunction::Log1p => f.write_str("log1p"),
            KnownFunction::Runge => f.write_str("runge"),
            KnownFunction::Poly(p) => write!(f, "poly:{}", p.to_strings().join(",")),
        }
    }
}

/// Backends the registry can evaluate in.
pub trait RegistryScalar: Field {
    fn eval_known(func: &KnownFunction, x: &Self) -> Result<Self, EvalError>;
    fn native_interval(func: &KnownFunction) -> Result<(Self, Self), RegistryError>;
}

impl RegistryScalar for Rational {
    fn eval_known(func: &KnownFunction, x: &Self) -> Result<Self, EvalError> {
        func.eval_exact(x)
    }

    fn native_interval(func: &KnownFunction) -> Result<(Self, Self), RegistryError> {
        if !func.supports_exact() {
            return Err(RegistryError::NotExact { id: func.to_string() });
        }
        func.interval_exact().ok_or_else(|| RegistryError::NotExact { id: func.to_string() })
    }
}

impl RegistryScalar for f64 {
    fn eval_known(func: &KnownFunction, x: &Self) -> Result<Self, EvalError> {
        func.eval_float(*x)
    }

    fn native_interval(func: &KnownFunction) -> Result<(Self, Self), RegistryError> {
        Ok(func.interval_float())
    }
}

/// The function on its native interval.
pub fn handle<T: RegistryScalar>(func: &KnownFunction) -> impl Fn(&T) -> Result<T, EvalError> + '_ {
    move |x: &T| T::eval_known(func, x)
}

/// The function pulled back to `[0, 1]`.
pub fn unit_handle<T: RegistryScalar>(
    func: &KnownFunction,
) -> Result<impl Fn(&T) -> Result<T, EvalError> + '_, RegistryError> {
    let (a, b) = T::native_interval(func)?;
    let map = DomainMap::new(a, b).expect("registry intervals are nondegenerate");
    Ok(map.to_unit(handle::<T>(func)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_registry() {
        assert_eq!(KnownFunction::parse("abs").unwrap(), KnownFunction::Abs);
        let p = KnownFunction::parse("poly:1,0,2").unwrap();
        assert_eq!(p.to_string(), "poly:1,0,2");
        assert_eq!(p.eval_exact(&q(1, 2)).unwrap(), q(9, 4));
        assert!(matches!(KnownFunction::parse("cosh"), Err(RegistryError::Unknown { .. })));
        assert!(matches!(KnownFunction::parse("poly:1,x"), Err(RegistryError::BadCoefficients { .. })));
        let msg = KnownFunction::parse("cosh").unwrap_err().to_string();
        assert!(msg.contains("runge"), "{msg}");
    }

    #[test]
    fn unit_pullbacks() {
        let abs = KnownFunction::Abs;
        let g = unit_handle::<Rational>(&abs).unwrap();
        assert_eq!(g(&q(1, 4)).unwrap(), q(1, 2));
        assert_eq!(g(&q(1, 2)).unwrap(), q(0, 1));
        let sine = KnownFunction::Sine;
        let g = unit_handle::<f64>(&sine).unwrap();
        assert!((g(&0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!(unit_handle::<Rational>(&sine).is_err());
        assert!(unit_handle::<Rational>(&KnownFunction::Log1p).is_err());
        let runge = unit_handle::<Rational>(&KnownFunction::Runge).unwrap();
        assert_eq!(runge(&q(1, 2)).unwrap(), q(1, 1));
        assert_eq!(runge(&q(1, 1)).unwrap(), q(1, 26));
    }

    #[test]
    fn log_domain() {
        assert!(KnownFunction::Log1p.eval_float(-1.0).is_err());
        assert_eq!(KnownFunction::Log1p.eval_float(0.0).unwrap(), 0.0);
    }
}
