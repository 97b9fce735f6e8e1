//! Points of the Tate curve `Λ*/q^ℤ`, its group law, and the two theta
//! functions spanning the sections of `O(2P₀)`.
//!
//! A point is stored as `(x, M)` meaning the class of `-q^x·M`, with
//! `x ∈ [0,1)` and `M` a unit of valuation zero.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::{fmt_rational, frac, int, rat, to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct TatePoint {
    x: Rational,
    unit: NovikovSeries,
}

impl TatePoint {
    /// Reduces `x` modulo 1; the quotient by `q^ℤ` leaves the unit untouched.
    pub fn normalize(x: Rational, unit: NovikovSeries) -> Result<Self> {
        match unit.valuation() {
            Some(v) if v.is_zero() => Ok(TatePoint { x: frac(x), unit }),
            Some(v) => Err(Error::NonUnit(format!("unit part has valuation {}", fmt_rational(v)))),
            None => Err(Error::NonUnit("unit part is zero".into())),
        }
    }

    /// The point `[-q^x e^{2πi·phase}]`.
    pub fn from_phase(x: Rational, phase: Rational) -> Self {
        TatePoint { x: frac(x), unit: NovikovSeries::phase(phase) }
    }

    /// Neutral element `O = [q⁰] = [-q⁰·(-1)]`.
    pub fn origin() -> Self {
        TatePoint { x: int(0), unit: NovikovSeries::constant(Complex::new(-1.0, 0.0)) }
    }

    /// `P₀ = [-q^{1/2}]`.
    pub fn p0() -> Self {
        TatePoint { x: rat(1, 2), unit: NovikovSeries::one() }
    }

    pub fn x(&self) -> Rational {
        self.x
    }

    pub fn unit(&self) -> &NovikovSeries {
        &self.unit
    }

    /// The representative `-q^x M` in `Λ*`.
    pub fn value(&self) -> NovikovSeries {
        self.unit.shift(self.x).neg()
    }

    /// `(-q^x M)(-q^{x'} M') = -q^{x+x'}·(-MM')`.
    pub fn mul(&self, other: &Self) -> Self {
        TatePoint { x: frac(self.x + other.x), unit: self.unit.mul(&other.unit).neg() }
    }

    /// `[-q^{-x} M^{-1}]`.
    pub fn inverse(&self) -> Result<Self> {
        Ok(TatePoint { x: frac(-self.x), unit: self.unit.invert()? })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `k`-fold group multiple: `x ↦ kx`, `M ↦ (-1)^{k+1} M^k`.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let mk = self.unit.powi(k)?;
        let unit = if k.rem_euclid(2) == 0 { mk.neg() } else { mk };
        Ok(TatePoint { x: frac(self.x * int(k)), unit })
    }

    /// The second zero `[-q^{-x}M^{-1}]` of the section of `O(2P₀)` vanishing at this point.
    pub fn conjugate_zero(&self) -> Result<Self> {
        self.inverse()
    }

    /// Same `x` and units equal within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.x == other.x && self.unit.approx_eq(&other.unit, tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::origin(), tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    Zero,
    One,
}

impl ThetaKind {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(ThetaKind::Zero),
            1 => Some(ThetaKind::One),
            _ => None,
        }
    }
}

/// Integer powers `M^k` for `k` in a contiguous range, truncated at `cutoff`.
fn unit_powers(unit: &NovikovSeries, lo: i64, hi: i64, cutoff: Rational) -> Result<Vec<NovikovSeries>> {
    let inv = if lo < 0 { Some(unit.invert_to(cutoff)?) } else { None };
    let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for k in lo..=hi {
        let base = if k < 0 { inv.as_ref().unwrap() } else { unit };
        let mut p = NovikovSeries::one().truncate(cutoff);
        for _ in 0..k.unsigned_abs() {
            p = p.mul(base).truncate(cutoff);
        }
        out.push(p);
    }
    Ok(out)
}

/// Theta function evaluated at `w = -q^x M` for an arbitrary rational `x`
/// (no reduction mod 1), all terms with exponent below `cutoff`.
///
/// `θ⁰(w) = Σ M^{2n} q^{n²+2nx}`, `θ¹(w) = Σ -M^{2n+1} q^{(n+1/2)²+(2n+1)x}`.
pub fn theta_eval_raw(kind: ThetaKind, x: Rational, unit: &NovikovSeries, cutoff: Rational) -> Result<NovikovSeries> {
    let half = match kind {
        ThetaKind::Zero => int(0),
        ThetaKind::One => rat(1, 2),
    };
    // exponent(n) = (n + half + x)² - x²
    let exponent = |n: i64| {
        let a = int(n) + half + x;
        a * a - x * x
    };
    let radius = (to_f64(cutoff + x * x)).max(0.0).sqrt();
    let centre = -to_f64(half + x);
    let n_lo = (centre - radius).floor() as i64 - 1;
    let n_hi = (centre + radius).ceil() as i64 + 1;
    let power = |n: i64| match kind {
        ThetaKind::Zero => 2 * n,
        ThetaKind::One => 2 * n + 1,
    };
    let window = cutoff + x * x + int(1);
    let powers = unit_powers(unit, power(n_lo), power(n_hi), window)?;
    let mut acc = NovikovSeries::zero();
    for n in n_lo..=n_hi {
        let e = exponent(n);
        if e >= cutoff {
            continue;
        }
        let mk = &powers[(power(n) - power(n_lo)) as usize];
        let term = match kind {
            ThetaKind::Zero => mk.shift(e),
            ThetaKind::One => mk.shift(e).neg(),
        };
        acc = acc.add(&term);
    }
    Ok(acc.truncate(cutoff))
}

pub fn theta_eval(kind: ThetaKind, point: &TatePoint, cutoff: Rational) -> Result<NovikovSeries> {
    theta_eval_raw(kind, point.x, &point.unit, cutoff)
}

/// Coefficients of `s = σ⁰θ⁰ + σ¹θ¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionCoeffs {
    pub sigma0: NovikovSeries,
    pub sigma1: NovikovSeries,
}

impl SectionCoeffs {
    pub fn new(sigma0: NovikovSeries, sigma1: NovikovSeries) -> Result<Self> {
        if sigma0.is_zero() && sigma1.is_zero() {
            return Err(Error::InvalidArgument("both section coefficients vanish".into()));
        }
        Ok(SectionCoeffs { sigma0, sigma1 })
    }

    pub fn constant(s0: Complex, s1: Complex) -> Result<Self> {
        Self::new(NovikovSeries::constant(s0), NovikovSeries::constant(s1))
    }
}

/// `(θ¹(w_Q), -θ⁰(w_Q))`, a section vanishing at `Q`.
pub fn section_through(q: &TatePoint, cutoff: Rational) -> Result<SectionCoeffs> {
    let t0 = theta_eval(ThetaKind::Zero, q, cutoff)?;
    let t1 = theta_eval(ThetaKind::One, q, cutoff)?;
    Ok(SectionCoeffs { sigma0: t1, sigma1: t0.neg() })
}

pub fn eval_section(c: &SectionCoeffs, q: &TatePoint, cutoff: Rational) -> Result<NovikovSeries> {
    let t0 = theta_eval(ThetaKind::Zero, q, cutoff)?;
    let t1 = theta_eval(ThetaKind::One, q, cutoff)?;
    Ok(c.sigma0.mul(&t0).add(&c.sigma1.mul(&t1)).truncate(cutoff))
}

/// Vanishing to working precision: guaranteed valuation at least `cutoff - 1`.
pub fn vanishes_to(s: &NovikovSeries, cutoff: Rational) -> bool {
    s.valuation_lower_bound().map_or(true, |v| v >= cutoff - int(1))
}
