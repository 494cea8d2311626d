//! Approximation studies: sup-norm error over dyadic refinement, and
//! recovery of Taylor coefficients from interpolants.
//!
//! Sup errors are estimated by dense equispaced probing, which gives a lower
//! bound on the true sup norm. No convergence is claimed for general
//! continuous functions; equispaced interpolation of `1 / (1 + 25 x^2)` is
//! the standard counterexample and the registry carries it as `runge`.
//! Chebyshev nodes are the usual remedy and are not used here.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::fixtures::{printed_decimals, TabulatedStudy};
use crate::grid::{dyadic, uniform_partition, GridError};
use crate::interp::{fit, node_residual, sample_nodes, EvalError, InterpError, Polynomial};
use crate::scalar::{format_f64, serde_f64, Backend, Field};

pub const DEFAULT_PROBES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("function failed at probe x = {x}: {source}")]
    Probe { x: String, source: EvalError },
    #[error("need at least 2 probe segments, got {0}")]
    TooFewProbes(usize),
    #[error("level {level}: {source}")]
    Level { level: u32, source: Box<AnalysisError> },
    #[error("check failed: {what}: expected {expected}, found {found}")]
    CheckFailed { what: String, expected: String, found: String },
}

/// `(x, |f(x) - P(x)|)` at `probe_count + 1` equispaced points of `[a, b]`.
pub fn error_profile<T, F>(
    f: F,
    p: &Polynomial<T>,
    a: &T,
    b: &T,
    probe_count: usize,
) -> Result<Vec<(f64, f64)>, AnalysisError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    if probe_count < 2 {
        return Err(AnalysisError::TooFewProbes(probe_count));
    }
    let probes = uniform_partition(a, b, probe_count)?;
    probes
        .iter()
        .map(|x| {
            let fx = f(x).map_err(|source| AnalysisError::Probe { x: x.to_string(), source })?;
            Ok((x.to_f64(), (fx - p.evaluate(x)).to_f64().abs()))
        })
        .collect()
}

/// Estimate of `sup_{[a,b]} |f - P|` from [`error_profile`].
pub fn sup_error<T, F>(f: F, p: &Polynomial<T>, a: &T, b: &T, probe_count: usize) -> Result<f64, AnalysisError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    Ok(error_profile(f, p, a, b, probe_count)?.into_iter().map(|(_, e)| e).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub level: u32,
    pub node_count: u64,
    pub formal_degree: usize,
    pub effective_degree: usize,
    #[serde(with = "serde_f64")]
    pub sup_error: f64,
    #[serde(with = "serde_f64")]
    pub residual: f64,
    pub backend: Backend,
    #[serde(skip)]
    pub profile: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub base_count: u64,
    pub probe_count: usize,
    pub records: Vec<ConvergenceRecord>,
}

impl ConvergenceReport {
    pub fn sup_errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.sup_error).collect()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].sup_error <= w[0].sup_error)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,node_count,formal_degree,effective_degree,sup_error,residual,backend\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.level,
                r.node_count,
                r.formal_degree,
                r.effective_degree,
                format_f64(r.sup_error),
                format_f64(r.residual),
                r.backend
            );
        }
        out
    }

    /// Two-column `x,error` CSV for one level's probe profile.
    pub fn profile_csv(&self, level: u32) -> Option<String> {
        let record = self.records.iter().find(|r| r.level == level)?;
        let mut out = String::from("x,error\n");
        for (x, e) in &record.profile {
            let _ = writeln!(out, "{},{}", format_f64(*x), format_f64(*e));
        }
        Some(out)
    }
}

/// Fits `f` on the dyadic partitions of `[0, 1]` for levels `0..=max_level`
/// and measures each fit's sup error.
pub fn convergence_study<T, F>(
    id: &str,
    f: F,
    base_count: u64,
    max_level: u32,
    probe_count: usize,
) -> Result<ConvergenceReport, AnalysisError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    let (zero, one) = (T::zero(), T::one());
    let records = (0..=max_level)
        .map(|level| {
            let run = || -> Result<ConvergenceRecord, AnalysisError> {
                let partition = dyadic(base_count, level)?;
                let samples = sample_nodes(&f, &partition.nodes_as::<T>())?;
                let p = fit(&samples)?;
                let profile = error_profile(&f, &p, &zero, &one, probe_count)?;
                let degree = p.effective_degree_default();
                Ok(ConvergenceRecord {
                    level,
                    node_count: partition.node_count(),
                    formal_degree: degree.formal_degree,
                    effective_degree: degree.effective_degree,
                    sup_error: profile.iter().map(|(_, e)| *e).fold(0.0, f64::max),
                    residual: node_residual(&samples, &p),
                    backend: T::BACKEND,
                    profile,
                })
            };
            run().map_err(|source| AnalysisError::Level { level, source: Box::new(source) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport { function: id.to_string(), base_count, probe_count, records })
}

/// How estimates are compared against the reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonMode {
    /// Absolute values on both sides; the sine table lists `1/k!` unsigned.
    Magnitude,
    Signed,
}

impl ComparisonMode {
    pub fn view(self, value: f64) -> f64 {
        match self {
            ComparisonMode::Magnitude => value.abs(),
            ComparisonMode::Signed => value,
        }
    }
}

/// Maclaurin coefficients of a reference function.
#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceSeries {
    /// `(-1)^j / (2j+1)!` at power `2j + 1`, zero at even powers.
    Sine,
    /// `(-1)^{k-1} / k` for `k >= 1`, zero at `k = 0`.
    Log1p,
    /// Explicit coefficients, ascending; zero past the end.
    Coefficients(Vec<f64>),
}

impl ReferenceSeries {
    pub fn coefficient(&self, power: usize) -> f64 {
        match self {
            ReferenceSeries::Sine => {
                if power.is_multiple_of(2) {
                    0.0
                } else {
                    let factorial: f64 = (1..=power).map(|k| k as f64).product();
                    let sign = if (power / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                    sign / factorial
                }
            }
            ReferenceSeries::Log1p => match power {
                0 => 0.0,
                k if k % 2 == 1 => 1.0 / k as f64,
                k => -1.0 / k as f64,
            },
            ReferenceSeries::Coefficients(c) => c.get(power).copied().unwrap_or(0.0),
        }
    }

    pub fn mode(&self) -> ComparisonMode {
        match self {
            ReferenceSeries::Sine => ComparisonMode::Magnitude,
            _ => ComparisonMode::Signed,
        }
    }
}

pub fn reference_sine() -> ReferenceSeries {
    ReferenceSeries::Sine
}

pub fn reference_log1p() -> ReferenceSeries {
    ReferenceSeries::Log1p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaylorRow {
    pub power: usize,
    #[serde(with = "serde_f64")]
    pub true_coefficient: f64,
    /// One entry per degree; `None` when the power exceeds the degree.
    #[serde(with = "serde_f64::vec_option")]
    pub estimates: Vec<Option<f64>>,
    #[serde(with = "serde_f64::vec_option")]
    pub abs_errors: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaylorComparison {
    pub function: String,
    #[serde(with = "serde_f64")]
    pub center: f64,
    pub interval: [String; 2],
    pub mode: ComparisonMode,
    pub degrees: Vec<usize>,
    pub rows: Vec<TaylorRow>,
    #[serde(skip)]
    pub fits: Vec<Polynomial<f64>>,
}

impl TaylorComparison {
    /// Estimate of `power` from the fit of `degree`, as tabulated.
    pub fn estimate(&self, power: usize, degree: usize) -> Option<f64> {
        let col = self.degrees.iter().position(|&d| d == degree)?;
        self.rows.iter().find(|r| r.power == power)?.estimates[col]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("power,true_coefficient");
        for d in &self.degrees {
            let _ = write!(out, ",P{d},abs_error_P{d}");
        }
        out.push('\n');
        let cell = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        for row in &self.rows {
            let _ = write!(out, "{},{}", row.power, format_f64(row.true_coefficient));
            for (e, err) in row.estimates.iter().zip(&row.abs_errors) {
                let _ = write!(out, ",{},{}", cell(*e), cell(*err));
            }
            out.push('\n');
        }
        out
    }
}

/// Fits `f` on a uniform partition of `[a, b]` with `n + 1` nodes for each
/// degree `n`, and tabulates the coefficients of `powers` against the
/// reference series (expansion center 0).
pub fn taylor_estimates<T, F>(
    id: &str,
    f: F,
    a: &T,
    b: &T,
    degrees: &[usize],
    powers: &[usize],
    reference: &ReferenceSeries,
) -> Result<TaylorComparison, AnalysisError>
where
    T: Field,
    F: Fn(&T) -> Result<T, EvalError>,
{
    let mode = reference.mode();
    let mut fits = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let nodes = uniform_partition(a, b, n)?;
        let p = fit(&sample_nodes(&f, &nodes)?)?;
        fits.push(Polynomial::new(p.coefficients().iter().map(Field::to_f64).collect()).expect("nonempty"));
    }
    let rows = powers
        .iter()
        .map(|&k| {
            let truth = mode.view(reference.coefficient(k));
            let estimates: Vec<Option<f64>> =
                fits.iter().map(|p| (k <= p.degree()).then(|| mode.view(p.coefficient(k)))).collect();
            let abs_errors = estimates.iter().map(|e| e.map(|v| (v - truth).abs())).collect();
            TaylorRow { power: k, true_coefficient: truth, estimates, abs_errors }
        })
        .collect();
    Ok(TaylorComparison {
        function: id.to_string(),
        center: 0.0,
        interval: [a.to_string(), b.to_string()],
        mode,
        degrees: degrees.to_vec(),
        rows,
        fits,
    })
}

/// Sine on `[-π, π]` for the given degrees, odd powers below the largest degree.
pub fn sine_study(degrees: &[usize]) -> Result<TaylorComparison, AnalysisError> {
    let max = degrees.iter().copied().max().unwrap_or(0);
    let powers: Vec<usize> = (1..max).step_by(2).collect();
    taylor_estimates("sine", |x: &f64| Ok(x.sin()), &-PI, &PI, degrees, &powers, &reference_sine())
}

/// `ln(1 + x)` on `[-3/4, 3/4]` for the given degrees, powers 1 to 5.
pub fn log1p_study(degrees: &[usize]) -> Result<TaylorComparison, AnalysisError> {
    let powers = [1, 2, 3, 4, 5];
    taylor_estimates("log1p", |x: &f64| Ok(x.ln_1p()), &-0.75, &0.75, degrees, &powers, &reference_log1p())
}

/// One printed table cell next to the value it should reproduce.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TabulatedCell {
    /// Fit degree, or `None` for the reference row.
    pub degree: Option<usize>,
    pub power: usize,
    pub printed: String,
    #[serde(with = "serde_f64")]
    pub computed: f64,
    #[serde(with = "serde_f64")]
    pub abs_diff: f64,
    /// `10^-d` for a value printed with `d` decimals.
    #[serde(with = "serde_f64")]
    pub tolerance: f64,
    pub matches: bool,
}

/// Compares every printed cell of `table` with `study`. Fit cells are
/// compared in the study's mode; reference cells against the series itself.
/// Degrees absent from `study` are skipped.
pub fn compare_tabulated(study: &TaylorComparison, table: &TabulatedStudy) -> Vec<TabulatedCell> {
    let cell = |degree: Option<usize>, power: usize, printed: &str, computed: f64| {
        let value: f64 = printed.parse().expect("tabulated literal");
        let tolerance = 10f64.powi(-(printed_decimals(printed) as i32));
        let abs_diff = (study.mode.view(value) - computed).abs();
        TabulatedCell {
            degree,
            power,
            printed: printed.to_string(),
            computed,
            abs_diff,
            tolerance,
            matches: abs_diff < tolerance,
        }
    };
    let mut cells = Vec::new();
    for (&power, printed) in table.powers.iter().zip(table.reference) {
        if let Some(row) = study.rows.iter().find(|r| r.power == power) {
            cells.push(cell(None, power, printed, row.true_coefficient));
        }
    }
    for row in table.rows {
        for (&power, printed) in table.powers.iter().zip(row.values) {
            if let (Some(printed), Some(computed)) = (printed, study.estimate(power, row.degree)) {
                cells.push(cell(Some(row.degree), power, printed, computed));
            }
        }
    }
    cells
}

/// The degree-4 sine fit on `{-π, -π/2, 0, π/2, π}` has the closed form
/// `8/(3π) x - 8/(3π³) x^3`. Returns `(8/(3π), 8/(3π³))` after checking the
/// fitted odd coefficients against it to 1e-9 and the even ones against 0.
pub fn closed_form_check_p4() -> Result<(f64, f64), AnalysisError> {
    let linear = 8.0 / (3.0 * PI);
    let cubic = 8.0 / (3.0 * PI.powi(3));
    let nodes = uniform_partition(&-PI, &PI, 4)?;
    let p = fit(&sample_nodes(|x: &f64| Ok(x.sin()), &nodes)?)?;
    let check = |what: &str, expected: f64, found: f64, tol: f64| {
        if (expected - found).abs() < tol {
            Ok(())
        } else {
            Err(AnalysisError::CheckFailed {
                what: what.to_string(),
                expected: format_f64(expected),
                found: format_f64(found),
            })
        }
    };
    check("|coefficient of x|", linear, p.coefficient(1).abs(), 1e-9)?;
    check("|coefficient of x^3|", cubic, p.coefficient(3).abs(), 1e-9)?;
    for k in [0, 2, 4] {
        check(&format!("coefficient of x^{k}"), 0.0, p.coefficient(k), 1e-10)?;
    }
    Ok((linear, cubic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn sup_error_of_exact_fit_is_zero() {
        let f = |x: &Rational| Ok(x.pow(3) - q(2, 1) * x.clone() + q(1, 3));
        let nodes = uniform_partition(&q(-1, 1), &q(1, 1), 3).unwrap();
        let p = fit(&sample_nodes(f, &nodes).unwrap()).unwrap();
        assert_eq!(sup_error(f, &p, &q(-1, 1), &q(1, 1), 500).unwrap(), 0.0);
    }

    #[test]
    fn sup_error_of_linear_fit_to_quartic() {
        let f = |x: &Rational| Ok(x.pow(4) + q(2, 1));
        let p = Polynomial::new(vec![q(0, 1), q(3, 1)]).unwrap();
        let profile = error_profile(f, &p, &q(-1, 1), &q(1, 1), 1000).unwrap();
        let (x, e) = profile.iter().copied().fold((0.0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        assert_eq!((x, e), (0.0, 1.0));
        assert_eq!(sup_error(f, &p, &q(-1, 1), &q(1, 1), 1000).unwrap(), 1.0);
        assert_eq!(sup_error(f, &p, &q(-1, 1), &q(1, 1), 1).unwrap_err(), AnalysisError::TooFewProbes(1));
    }

    #[test]
    fn probe_failures_propagate() {
        let f = |x: &f64| if *x > 0.5 { Err(EvalError::new("out of domain")) } else { Ok(*x) };
        let p = Polynomial::constant(0.0);
        assert!(matches!(sup_error(f, &p, &0.0, &1.0, 4), Err(AnalysisError::Probe { .. })));
    }

    #[test]
    fn polynomial_convergence_is_exact() {
        let f = |x: &Rational| Ok(x.pow(2) * q(3, 2) - x.clone() + q(1, 5));
        let report = convergence_study("quad", f, 2, 3, 400).unwrap();
        assert_eq!(report.records.len(), 4);
        assert!(report.records.iter().all(|r| r.sup_error == 0.0 && r.effective_degree == 2));
        assert_eq!(report.records[3].node_count, 16);
        assert_eq!(report.records[3].formal_degree, 16);
        assert!(report.to_csv().starts_with("level,node_count"));
        assert_eq!(report.profile_csv(2).unwrap().lines().count(), 402);
    }

    #[test]
    fn level_failures_are_annotated() {
        let f = |x: &Rational| if *x == q(1, 4) { Err(EvalError::new("hole")) } else { Ok(x.clone()) };
        match convergence_study("holey", f, 2, 2, 10) {
            Err(AnalysisError::Level { level: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reference_series() {
        let s = reference_sine();
        assert_eq!(s.coefficient(3), -1.0 / 6.0);
        assert_eq!(s.coefficient(2), 0.0);
        assert_eq!(s.coefficient(1), 1.0);
        assert_eq!(s.coefficient(5), 1.0 / 120.0);
        let l = reference_log1p();
        assert_eq!(l.coefficient(5), 0.2);
        assert_eq!(l.coefficient(4), -0.25);
        assert_eq!(l.coefficient(0), 0.0);
        assert_eq!(ReferenceSeries::Coefficients(vec![1.0, 2.0]).coefficient(5), 0.0);
    }

    #[test]
    fn closed_form_p4() {
        let (linear, cubic) = closed_form_check_p4().unwrap();
        assert!((linear - 0.848826).abs() < 1e-6);
        // 8/(3π³) = 0.0860041; the tabulated cell reads 0.086040
        assert!((cubic - 0.086004).abs() < 1e-6);
    }

    #[test]
    fn sine_study_layout() {
        let t = sine_study(&[4, 6, 8, 10]).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.power).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9]);
        assert!(t.rows.iter().all(|r| r.estimates.len() == 4 && r.abs_errors.len() == 4));
        assert_eq!(t.estimate(5, 4), None);
        assert!((t.estimate(1, 4).unwrap() - 0.848826).abs() < 1e-6);
        let csv = t.to_csv();
        assert!(csv.starts_with("power,true_coefficient,P4,abs_error_P4"));
    }

    #[test]
    fn self_reference_gives_zero_error() {
        let f = |x: &f64| Ok(x.exp());
        let p = fit(&sample_nodes(f, &uniform_partition(&-1.0, &1.0, 6).unwrap()).unwrap()).unwrap();
        let reference = ReferenceSeries::Coefficients(p.ascending());
        let t = taylor_estimates("exp", f, &-1.0, &1.0, &[6], &[0, 1, 2, 3, 4, 5, 6], &reference).unwrap();
        assert!(t.rows.iter().all(|r| r.abs_errors[0] == Some(0.0)));
    }

    #[test]
    fn tabulated_mismatches_are_the_known_misprints() {
        use crate::fixtures::{LOG1P_STUDY, SINE_STUDY};
        let degrees = [4, 6, 8, 10];
        let odd = |cells: Vec<TabulatedCell>| -> Vec<(Option<usize>, usize)> {
            cells.iter().filter(|c| !c.matches).map(|c| (c.degree, c.power)).collect()
        };
        let sine = compare_tabulated(&sine_study(&degrees).unwrap(), &SINE_STUDY);
        assert_eq!(sine.len(), 5 + 14);
        assert_eq!(odd(sine), vec![(Some(4), 3)]);
        let log = compare_tabulated(&log1p_study(&degrees).unwrap(), &LOG1P_STUDY);
        assert_eq!(log.len(), 5 + 19);
        assert_eq!(odd(log), vec![(None, 5), (Some(4), 2)]);
    }
}
