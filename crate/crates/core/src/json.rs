//! JSON renderings shared by the CLI and the C interface.

use serde_json::{json, Value};

use crate::matrix::SeriesMatrix;
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::Rational;
use crate::tate::TatePoint;
use crate::torus::Point;

pub fn rational(q: Rational) -> Value {
    json!({ "num": q.numer(), "den": q.denom() })
}

pub fn point(p: Point) -> Value {
    json!([rational(p[0]), rational(p[1])])
}

pub fn complex(c: Complex) -> Value {
    json!({ "re": c.re, "im": c.im })
}

/// List of `{num, den, re, im}` in increasing exponent order.
pub fn series(s: &NovikovSeries) -> Value {
    Value::Array(
        s.terms()
            .iter()
            .map(|(e, c)| json!({ "num": e.numer(), "den": e.denom(), "re": c.re, "im": c.im }))
            .collect(),
    )
}

/// Series with its cutoff (`null` when exact).
pub fn series_with_cutoff(s: &NovikovSeries) -> Value {
    json!({ "terms": series(s), "cutoff": s.cutoff().map(rational) })
}

pub fn matrix(m: &SeriesMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| series(m.get(i, j))).collect())).collect())
}

pub fn tate_point(p: &TatePoint) -> Value {
    json!({ "x": rational(p.x()), "unit": series(p.unit()) })
}
