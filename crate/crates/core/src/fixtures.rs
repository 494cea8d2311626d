//! Named node sets and tabulated reference values used by the example runners.

use std::f64::consts::PI;

use crate::grid::uniform_partition;
use crate::scalar::{q, Backend, Rational};
use crate::vandermonde::NodeVector;

/// Nodes of the degree-18 `|x|` fit as originally listed. The entries read
/// `.88` (printed `,88`) and `.98` break the mirror image of the negative
/// half; see [`ABS_NODES_SYMMETRIC`].
pub const ABS_NODES_VERBATIM: [&str; 19] = [
    "-1", "-0.96", "-0.92", "-0.88", "-0.84", "-0.8", "-0.6", "-0.4", "-0.2", "0", "0.2", "0.4", "0.6", "0.8", "0.84",
    "0.88", "0.92", "0.98", "1",
];

/// The same layout made symmetric about zero (`0.98` replaced by `0.96`).
pub const ABS_NODES_SYMMETRIC: [&str; 19] = [
    "-1", "-0.96", "-0.92", "-0.88", "-0.84", "-0.8", "-0.6", "-0.4", "-0.2", "0", "0.2", "0.4", "0.6", "0.8", "0.84",
    "0.88", "0.92", "0.96", "1",
];

#[derive(Clone, Debug, PartialEq)]
pub enum NodeFixture {
    Exact(NodeVector<Rational>),
    Float(NodeVector<f64>),
}

impl NodeFixture {
    pub fn backend(&self) -> Backend {
        match self {
            NodeFixture::Exact(_) => Backend::Exact,
            NodeFixture::Float(_) => Backend::Float,
        }
    }

    pub fn as_float(&self) -> NodeVector<f64> {
        match self {
            NodeFixture::Exact(nodes) => nodes.convert(Rational::to_f64).expect("conversion keeps order"),
            NodeFixture::Float(nodes) => nodes.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            NodeFixture::Exact(n) => n.len(),
            NodeFixture::Float(n) => n.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub const FIXTURE_IDS: &[&str] = &[
    "ex2.6-nodes",
    "ex2.6-nodes-symmetric",
    "ex2.7-n6",
    "ex2.7-n8",
    "pi-partition-4",
    "pi-partition-6",
    "pi-partition-8",
    "pi-partition-10",
    "ln-partition-4",
    "ln-partition-6",
    "ln-partition-8",
    "ln-partition-10",
];

fn parse_nodes(values: &[&str]) -> NodeVector<Rational> {
    NodeVector::new(values.iter().map(|v| v.parse().expect("fixture literal")).collect()).expect("fixture order")
}

pub fn abs_nodes() -> NodeVector<Rational> {
    parse_nodes(&ABS_NODES_VERBATIM)
}

pub fn abs_nodes_symmetric() -> NodeVector<Rational> {
    parse_nodes(&ABS_NODES_SYMMETRIC)
}

/// `Π_n`: `n + 1` equispaced points on `[-π, π]`.
pub fn pi_partition(n: usize) -> NodeVector<f64> {
    uniform_partition(&-PI, &PI, n).expect("n >= 1")
}

/// `n + 1` equispaced points on `[-3/4, 3/4]`.
pub fn ln_partition(n: usize) -> NodeVector<Rational> {
    uniform_partition(&q(-3, 4), &q(3, 4), n).expect("n >= 1")
}

pub fn node_fixture(id: &str) -> Option<NodeFixture> {
    let suffix = |prefix: &str| -> Option<usize> {
        id.strip_prefix(prefix).and_then(|n| n.parse().ok()).filter(|n| [4, 6, 8, 10].contains(n))
    };
    match id {
        "ex2.6-nodes" => Some(NodeFixture::Exact(abs_nodes())),
        "ex2.6-nodes-symmetric" => Some(NodeFixture::Exact(abs_nodes_symmetric())),
        "ex2.7-n6" => Some(NodeFixture::Exact(uniform_partition(&q(0, 1), &q(1, 1), 6).ok()?)),
        "ex2.7-n8" => Some(NodeFixture::Exact(uniform_partition(&q(0, 1), &q(1, 1), 8).ok()?)),
        _ => {
            if let Some(n) = suffix("pi-partition-") {
                Some(NodeFixture::Float(pi_partition(n)))
            } else {
                suffix("ln-partition-").map(|n| NodeFixture::Exact(ln_partition(n)))
            }
        }
    }
}

/// One row of a tabulated coefficient study: the fit degree and the printed
/// value for each reported power (`None` where the table has a dash).
#[derive(Clone, Copy, Debug)]
pub struct TabulatedRow {
    pub degree: usize,
    pub values: &'static [Option<&'static str>],
}

#[derive(Clone, Copy, Debug)]
pub struct TabulatedStudy {
    pub powers: &'static [usize],
    /// Printed reference row (true Taylor coefficients as tabulated).
    pub reference: &'static [&'static str],
    pub rows: &'static [TabulatedRow],
}

/// Decimal places of a printed number, e.g. 7 for `0.0001529`.
pub fn printed_decimals(value: &str) -> usize {
    value.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// Sine on `[-π, π]`, magnitudes of the odd-power coefficients.
pub const SINE_STUDY: TabulatedStudy = TabulatedStudy {
    powers: &[1, 3, 5, 7, 9],
    reference: &["1", "0.166666", "0.008333", "0.0001984", "0.00000275"],
    rows: &[
        TabulatedRow { degree: 4, values: &[Some("0.848826"), Some("0.086040"), None, None, None] },
        TabulatedRow { degree: 6, values: &[Some("0.992392"), Some("0.157109"), Some("0.005730"), None, None] },
        TabulatedRow {
            degree: 8,
            values: &[Some("0.999805"), Some("0.166216"), Some("0.008087"), Some("0.0001529"), None],
        },
        TabulatedRow {
            degree: 10,
            values: &[Some("0.999997"), Some("0.166655"), Some("0.008323"), Some("0.0001948"), Some("0.00000225")],
        },
    ],
};

/// `ln(1 + x)` on `[-3/4, 3/4]`, signed coefficients of powers 1 to 5.
/// The reference entry for power 5 is printed as `0.02`; the series gives `0.2`.
pub const LOG1P_STUDY: TabulatedStudy = TabulatedStudy {
    powers: &[1, 2, 3, 4, 5],
    reference: &["1", "-0.5", "0.333333", "-0.25", "0.02"],
    rows: &[
        TabulatedRow {
            degree: 4,
            values: &[Some("0.969277"), Some("-0.453517"), Some("0.583103"), Some("-0.464548"), None],
        },
        TabulatedRow {
            degree: 6,
            values: &[Some("1.003036"), Some("-0.502726"), Some("0.269673"), Some("-0.192895"), Some("0.450513")],
        },
        TabulatedRow {
            degree: 8,
            values: &[Some("0.999703"), Some("-0.499727"), Some("0.345072"), Some("-0.260784"), Some("0.096422")],
        },
        TabulatedRow {
            degree: 10,
            values: &[Some("1.000028"), Some("-0.500026"), Some("0.331491"), Some("-0.248281"), Some("0.228492")],
        },
    ],
};

/// Printed coefficients (descending, constant term omitted in print and
/// stored as `None`) of the sine fits on `[0, 1]` for `g(y) = sin(2πy - π)`.
pub const UNIT_SINE_DEGREE6: [Option<f64>; 7] =
    [Some(5.57e-11), Some(56.118), Some(-140.296), Some(101.324), Some(-11.691), Some(-5.456), None];

/// As [`UNIT_SINE_DEGREE6`] for degree 8. The `x^2` entry is printed as
/// `-1.644`; the interpolant's coefficient is `+1.6644`.
pub const UNIT_SINE_DEGREE8: [Option<f64>; 9] = [
    Some(-2.75e-12),
    Some(-59.143),
    Some(207.0),
    Some(-231.305),
    Some(60.764),
    Some(27.381),
    Some(-1.644),
    Some(-6.361),
    None,
];

/// A fully printed interpolation case: nodes, sampled values, the inverse of
/// the descending matrix and the resulting coefficients (descending).
#[derive(Clone, Copy, Debug)]
pub struct WorkedCase {
    pub example: &'static str,
    pub label: &'static str,
    pub nodes: &'static [&'static str],
    pub values: &'static [&'static str],
    pub inverse: &'static [&'static [&'static str]],
    pub solution: &'static [&'static str],
}

const INV_M1_1: &[&[&str]] = &[&["-1/2", "1/2"], &["1/2", "1/2"]];
const INV_M1_0_1: &[&[&str]] = &[&["1/2", "-1", "1/2"], &["-1/2", "0", "1/2"], &["0", "1", "0"]];

pub const WORKED_CASES: &[WorkedCase] = &[
    WorkedCase {
        example: "2.3",
        label: "f(x) = x + 3, nodes -1, 1",
        nodes: &["-1", "1"],
        values: &["2", "4"],
        inverse: INV_M1_1,
        solution: &["1", "3"],
    },
    WorkedCase {
        example: "2.3",
        label: "f(x) = x + 3, nodes 0, 2",
        nodes: &["0", "2"],
        values: &["3", "5"],
        inverse: &[&["-1/2", "1/2"], &["1", "0"]],
        solution: &["1", "3"],
    },
    WorkedCase {
        example: "2.3",
        label: "f(x) = x + 3, nodes -1, 0, 1",
        nodes: &["-1", "0", "1"],
        values: &["2", "3", "4"],
        inverse: INV_M1_0_1,
        solution: &["0", "1", "3"],
    },
    WorkedCase {
        example: "2.3",
        label: "f(x) = x + 3, nodes -1, 0, 1, 2",
        nodes: &["-1", "0", "1", "2"],
        values: &["2", "3", "4", "5"],
        inverse: &[
            &["-1/6", "1/2", "-1/2", "1/6"],
            &["1/2", "-1", "1/2", "0"],
            &["-1/3", "-1/2", "1", "-1/6"],
            &["0", "1", "0", "0"],
        ],
        solution: &["0", "0", "1", "3"],
    },
    WorkedCase {
        example: "2.4",
        label: "f(x) = x^4 + 2, nodes -1, 1",
        nodes: &["-1", "1"],
        values: &["3", "3"],
        inverse: INV_M1_1,
        solution: &["0", "3"],
    },
    WorkedCase {
        example: "2.4",
        label: "f(x) = x^4 + 2, nodes -1, 0, 1",
        nodes: &["-1", "0", "1"],
        values: &["3", "2", "3"],
        inverse: INV_M1_0_1,
        solution: &["1", "0", "2"],
    },
    WorkedCase {
        example: "2.4",
        label: "f(x) = x^4 + 2, nodes -1, -1/3, 1/3, 1",
        nodes: &["-1", "-1/3", "1/3", "1"],
        values: &["3", "163/81", "163/81", "3"],
        inverse: &[
            &["-9/16", "27/16", "-27/16", "9/16"],
            &["9/16", "-9/16", "-9/16", "9/16"],
            &["1/16", "-27/16", "27/16", "-1/16"],
            &["-1/16", "9/16", "9/16", "-1/16"],
        ],
        solution: &["0", "10/9", "0", "17/9"],
    },
    WorkedCase {
        example: "2.4",
        label: "f(x) = x^4 + 2, nodes -1, -1/2, 0, 1/2, 1",
        nodes: &["-1", "-1/2", "0", "1/2", "1"],
        values: &["3", "33/16", "2", "33/16", "3"],
        inverse: &[
            &["2/3", "-8/3", "12/3", "-8/3", "2/3"],
            &["-2/3", "4/3", "0", "-4/3", "2/3"],
            &["-1/6", "16/6", "-5", "16/6", "-1/6"],
            &["1/6", "-8/6", "0", "8/6", "-1/6"],
            &["0", "0", "1", "0", "0"],
        ],
        solution: &["1", "0", "0", "0", "2"],
    },
    WorkedCase {
        example: "2.5",
        label: "unknown polynomial, nodes 1, 2, 3",
        nodes: &["1", "2", "3"],
        values: &["4", "26", "86"],
        inverse: &[&["1/2", "-1", "1/2"], &["-5/2", "4", "-3/2"], &["3", "-3", "1"]],
        solution: &["19", "-35", "20"],
    },
    WorkedCase {
        example: "2.5",
        label: "unknown polynomial, nodes 2, 3, 4",
        nodes: &["2", "3", "4"],
        values: &["26", "86", "202"],
        inverse: &[&["1/2", "-1", "1/2"], &["-7/2", "6", "-5/2"], &["6", "-8", "3"]],
        solution: &["28", "-80", "74"],
    },
    WorkedCase {
        example: "2.5",
        label: "unknown polynomial, nodes 1, 2, 3, 4",
        nodes: &["1", "2", "3", "4"],
        values: &["4", "26", "86", "202"],
        inverse: &[
            &["-1/6", "1/2", "-1/2", "1/6"],
            &["3/2", "-4", "7/2", "-1"],
            &["-13/3", "19/2", "-7", "11/6"],
            &["4", "-6", "4", "-1"],
        ],
        solution: &["3", "1", "-2", "2"],
    },
    WorkedCase {
        example: "2.5",
        label: "unknown polynomial, nodes 0, 1, 2, 3, 4",
        nodes: &["0", "1", "2", "3", "4"],
        values: &["2", "4", "26", "86", "202"],
        inverse: &[
            &["1/24", "-1/6", "1/4", "-1/6", "1/24"],
            &["-5/12", "3/2", "-2", "7/6", "-1/4"],
            &["35/24", "-13/3", "19/4", "-7/3", "11/24"],
            &["-25/12", "4", "-3", "4/3", "-1/4"],
            &["1", "0", "0", "0", "0"],
        ],
        solution: &["0", "3", "1", "-2", "2"],
    },
];

/// Worked cases belonging to `example`.
pub fn worked_cases(example: &str) -> impl Iterator<Item = &'static WorkedCase> + '_ {
    WORKED_CASES.iter().filter(move |c| c.example == example)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_resolve() {
        for id in FIXTURE_IDS {
            assert!(node_fixture(id).is_some(), "{id}");
        }
        assert!(node_fixture("pi-partition-5").is_none());
        assert!(node_fixture("nope").is_none());
        assert_eq!(node_fixture("pi-partition-6").unwrap().backend(), Backend::Float);
        assert_eq!(node_fixture("ln-partition-8").unwrap().len(), 9);
        assert_eq!(node_fixture("ex2.7-n8").unwrap().len(), 9);
    }

    #[test]
    fn abs_nodes_parse() {
        let v = abs_nodes();
        assert_eq!(v.len(), 19);
        assert_eq!(v.as_slice()[15], q(22, 25));
        assert_eq!(v.as_slice()[17], q(49, 50));
        let s = abs_nodes_symmetric();
        for j in 0..19 {
            assert_eq!(s.as_slice()[j], -s.as_slice()[18 - j].clone());
        }
    }

    #[test]
    fn decimals_counted() {
        assert_eq!(printed_decimals("0.0001529"), 7);
        assert_eq!(printed_decimals("0.848826"), 6);
        assert_eq!(printed_decimals("1"), 0);
        let cells: usize = SINE_STUDY.rows.iter().map(|r| r.values.iter().flatten().count()).sum();
        assert_eq!(cells, 14);
    }
}
