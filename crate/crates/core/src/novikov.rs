//! Truncated series in the Novikov field: finite sums `Σ c_i q^{a_i}` with
//! exact rational exponents and complex coefficients.
//!
//! Each series carries a cutoff `C`: the terms with exponent below `C` are
//! exact (up to coefficient tolerance), nothing is known at or above it. A
//! missing cutoff means the series is known exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rational, int, to_f64, Rational};

pub type Complex = Complex64;

const DEFAULT_ZERO_TOLERANCE: f64 = 1e-12;

static ZERO_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

/// Magnitude below which coefficients are dropped.
pub fn zero_tolerance() -> f64 {
    let bits = ZERO_TOLERANCE_BITS.load(AtomicOrdering::Relaxed);
    if bits == 0 {
        DEFAULT_ZERO_TOLERANCE
    } else {
        f64::from_bits(bits)
    }
}

pub fn set_zero_tolerance(tol: f64) {
    assert!(tol > 0.0 && tol.is_finite(), "zero tolerance must be positive");
    ZERO_TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

fn min_cutoff(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `e^{2πi t}`.
pub fn phase(t: Rational) -> Complex {
    Complex::from_polar(1.0, std::f64::consts::TAU * to_f64(t))
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct NovikovSeries {
    terms: Vec<(Rational, Complex)>,
    cutoff: Option<Rational>,
}

impl NovikovSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Complex::one(), int(0))
    }

    pub fn constant(c: Complex) -> Self {
        Self::monomial(c, int(0))
    }

    pub fn monomial(c: Complex, exponent: Rational) -> Self {
        Self::from_terms(vec![(exponent, c)], None)
    }

    /// Unit `e^{2πi t}`.
    pub fn phase(t: Rational) -> Self {
        Self::constant(phase(t))
    }

    /// Canonicalizes: sorts, merges equal exponents, drops tiny coefficients
    /// and everything at or above the cutoff.
    pub fn from_terms(terms: Vec<(Rational, Complex)>, cutoff: Option<Rational>) -> Self {
        let mut acc: BTreeMap<Rational, Complex> = BTreeMap::new();
        for (e, c) in terms {
            if cutoff.is_some_and(|cut| e >= cut) {
                continue;
            }
            *acc.entry(e).or_insert_with(Complex::zero) += c;
        }
        let tol = zero_tolerance();
        let terms = acc.into_iter().filter(|(_, c)| c.norm() >= tol).collect();
        NovikovSeries { terms, cutoff }
    }

    pub fn terms(&self) -> &[(Rational, Complex)] {
        &self.terms
    }

    pub fn cutoff(&self) -> Option<Rational> {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same series with the cutoff lowered to `min(self.cutoff, cutoff)`.
    pub fn truncate(&self, cutoff: Rational) -> Self {
        let cut = min_cutoff(self.cutoff, Some(cutoff));
        Self::from_terms(self.terms.clone(), cut)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.first().map(|t| t.0)
    }

    /// What is guaranteed about the valuation: the leading exponent, or the
    /// cutoff when no term survives below it. `None` for the exact zero.
    pub fn valuation_lower_bound(&self) -> Option<Rational> {
        self.valuation().or(self.cutoff)
    }

    /// Coefficient of `q^e`, zero if absent.
    pub fn coeff(&self, e: Rational) -> Complex {
        match self.terms.binary_search_by(|t| t.0.cmp(&e)) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex::zero(),
        }
    }

    pub fn leading_coeff(&self) -> Option<Complex> {
        self.terms.first().map(|t| t.1)
    }

    /// `e^{-val}`.
    pub fn norm(&self) -> Result<f64> {
        match self.valuation() {
            Some(v) => Ok((-to_f64(v)).exp()),
            None => Err(Error::ZeroSeries),
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, x)| (e, x * c)).collect(), self.cutoff)
    }

    /// Multiplication by `q^s`.
    pub fn shift(&self, s: Rational) -> Self {
        NovikovSeries {
            terms: self.terms.iter().map(|&(e, c)| (e + s, c)).collect(),
            cutoff: self.cutoff.map(|c| c + s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cutoff = min_cutoff(self.cutoff, other.cutoff);
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(terms, cutoff)
    }

    pub fn neg(&self) -> Self {
        NovikovSeries {
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Known below min(cut_a + val_b, cut_b + val_a).
        let from_a = self.cutoff.and_then(|c| other.valuation_lower_bound().map(|v| c + v));
        let from_b = other.cutoff.and_then(|c| self.valuation_lower_bound().map(|v| c + v));
        let mut cutoff = min_cutoff(from_a, from_b);
        if self.is_zero() && self.cutoff.is_none() || other.is_zero() && other.cutoff.is_none() {
            cutoff = None;
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let e = ea + eb;
                if cutoff.map_or(true, |cut| e < cut) {
                    terms.push((e, ca * cb));
                }
            }
        }
        Self::from_terms(terms, cutoff)
    }

    /// Splits a nonzero series as `q^v · c0 · (1 + ε)` with `val(ε) > 0`.
    fn factor(&self) -> Result<(Rational, Complex, NovikovSeries)> {
        let &(v, c0) = self.terms.first().ok_or(Error::ZeroSeries)?;
        let inv = c0.inv();
        let eps = NovikovSeries::from_terms(
            self.terms[1..].iter().map(|&(e, c)| (e - v, c * inv)).collect(),
            self.cutoff.map(|c| c - v),
        );
        Ok((v, c0, eps))
    }

    /// `Σ_{k≥0} coef(k) ε^k` truncated at `cutoff`, for `val(ε) > 0`.
    fn power_series_in(eps: &NovikovSeries, cutoff: Option<Rational>, coef: impl Fn(usize) -> f64) -> NovikovSeries {
        let mut result = NovikovSeries::constant(Complex::new(coef(0), 0.0));
        if let Some(cut) = cutoff {
            result = result.truncate(cut);
        }
        let delta = match eps.valuation() {
            Some(d) => d,
            None => return result,
        };
        debug_assert!(delta > int(0));
        let mut power = NovikovSeries::one();
        let mut k = 0usize;
        loop {
            k += 1;
            power = power.mul(eps);
            if let Some(cut) = cutoff {
                power = power.truncate(cut);
                if delta * int(k as i64) >= cut {
                    break;
                }
            }
            let ck = coef(k);
            if ck != 0.0 {
                result = result.add(&power.scale(Complex::new(ck, 0.0)));
            }
            if power.is_zero() && power.cutoff.is_none() {
                break;
            }
            if cutoff.is_none() && ck == 0.0 {
                break;
            }
        }
        result
    }

    /// Multiplicative inverse, known below `cutoff - 2·val`.
    pub fn invert(&self) -> Result<Self> {
        let (v, _, eps) = self.factor()?;
        match self.cutoff {
            Some(c) => self.invert_to(c - v - v),
            None if eps.is_zero() => Ok(NovikovSeries::monomial(self.terms[0].1.inv(), -v)),
            None => Err(Error::InvalidArgument(
                "inverse of an exact non-monomial series needs an explicit cutoff".into(),
            )),
        }
    }

    /// Inverse truncated at `cutoff` (further limited by the input's own cutoff).
    pub fn invert_to(&self, cutoff: Rational) -> Result<Self> {
        let (v, c0, eps) = self.factor()?;
        let own = self.cutoff.map(|c| c - v - v);
        let cut = min_cutoff(own, Some(cutoff)).expect("finite cutoff");
        let geometric = Self::power_series_in(&eps, Some(cut + v), |k| if k % 2 == 0 { 1.0 } else { -1.0 });
        Ok(geometric.scale(c0.inv()).shift(-v))
    }

    /// `u^t` for a unit `u = c0(1+ε)`: `c0^t` on the principal branch times the
    /// binomial series in `ε`. Exact inputs need an explicit cutoff unless the
    /// series terminates.
    pub fn fractional_power(&self, t: Rational) -> Result<Self> {
        self.fractional_power_impl(t, None)
    }

    pub fn fractional_power_to(&self, t: Rational, cutoff: Rational) -> Result<Self> {
        self.fractional_power_impl(t, Some(cutoff))
    }

    fn fractional_power_impl(&self, t: Rational, cutoff: Option<Rational>) -> Result<Self> {
        let (v, c0, eps) = self.factor()?;
        if !v.is_zero() {
            return Err(Error::NonUnit(format!("valuation {}", fmt_rational(v))));
        }
        if t.is_zero() {
            let one = NovikovSeries::one();
            return Ok(match self.cutoff {
                Some(c) => one.truncate(c),
                None => one,
            });
        }
        let cut = min_cutoff(self.cutoff, cutoff);
        let terminating = t.is_integer() && t > int(0);
        if cut.is_none() && !eps.is_zero() && !terminating {
            return Err(Error::InvalidArgument(
                "fractional power of an exact non-constant unit needs an explicit cutoff".into(),
            ));
        }
        let tf = to_f64(t);
        let lead = if t.is_integer() {
            c0.powi(t.to_integer() as i32)
        } else {
            (c0.ln() * tf).exp()
        };
        let binom = |k: usize| {
            let mut b = 1.0;
            for j in 0..k {
                b *= (tf - j as f64) / (j as f64 + 1.0);
            }
            if terminating && k as i64 > t.to_integer() {
                0.0
            } else {
                b
            }
        };
        Ok(Self::power_series_in(&eps, cut, binom).scale(lead))
    }

    /// Integer power via repeated multiplication (inverting first for `n < 0`).
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut result = NovikovSeries::one();
        for _ in 0..n.unsigned_abs() {
            result = result.mul(&base);
        }
        Ok(result)
    }

    /// Largest coefficient magnitude among exponents `< bound`.
    pub fn max_coeff_below(&self, bound: Rational) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.0 < bound)
            .map(|t| t.1.norm())
            .fold(0.0, f64::max)
    }

    /// Termwise comparison below the common cutoff: same exponents and
    /// coefficients within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let cut = min_cutoff(self.cutoff, other.cutoff);
        let keep = |s: &Self| -> Vec<(Rational, Complex)> {
            s.terms
                .iter()
                .copied()
                .filter(|t| cut.map_or(true, |c| t.0 < c) && t.1.norm() > tol)
                .collect()
        };
        let (a, b) = (keep(self), keep(other));
        let mut i = 0;
        let mut j = 0;
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Equal => {
                    if (a[i].1 - b[j].1).norm() > tol {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
                Ordering::Less => return false,
                Ordering::Greater => return false,
            }
        }
        true
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let sign = if c.im < 0.0 { '-' } else { '+' };
            write!(f, "({}{}{}i)*q^({})", c.re, sign, c.im.abs(), fmt_rational(*e))?;
        }
        if let Some(c) = self.cutoff {
            write!(f, " + O(q^({}))", fmt_rational(c))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&NovikovSeries> for &NovikovSeries {
            type Output = NovikovSeries;
            fn $method(self, rhs: &NovikovSeries) -> NovikovSeries {
                NovikovSeries::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        NovikovSeries::neg(self)
    }
}
