//! Small helpers around exact rationals.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

pub type Rational = Rational64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Representative of `a` modulo 1 in `[0, 1)`.
pub fn frac(a: Rational) -> Rational {
    a - a.floor()
}

pub fn floor_i64(a: Rational) -> i64 {
    a.floor().to_integer()
}

pub fn to_f64(a: Rational) -> f64 {
    a.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(a: Rational) -> String {
    if *a.denom() == 1 {
        format!("{}", a.numer())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Parses `p`, `-p`, `p/q` with `q > 0`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Rational::new(n, d))
}

/// `(g, a, b)` with `a*x + b*y = g = gcd(x, y) >= 0`.
pub fn ext_gcd(x: i64, y: i64) -> (i64, i64, i64) {
    let e = x.extended_gcd(&y);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn is_integer(a: Rational) -> bool {
    (a - a.trunc()).is_zero()
}
