//! Surgery calculus on oriented straight curves and the normal form of the
//! Lagrangian cobordism group, `(ζ-part mod 1, homology class)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::rat::{fmt_rational, frac, int, rat, Rational};
use crate::torus::{Brane, Slope};

/// Hamiltonian isotopy class of an oriented straight curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub v: Slope,
    /// `det(p, v) mod 1` for any point `p` on the curve.
    pub flux: Rational,
}

impl CurveClass {
    pub fn new(v: Slope, flux: Rational) -> Self {
        CurveClass { v, flux: frac(flux) }
    }
}

/// `det(p, v) mod 1` with `v` the brane's orientation.
pub fn flux_of(b: &Brane) -> Rational {
    let p = b.base_point();
    let v = b.orientation();
    frac(p[0] * int(v.n()) - p[1] * int(v.m()))
}

pub fn curve_class(b: &Brane) -> CurveClass {
    CurveClass { v: b.orientation(), flux: flux_of(b) }
}

/// Flux correction of an elementary surgery handle.
pub fn handle_flux() -> Rational {
    rat(1, 2)
}

/// Resolves the single intersection point of two curves with `|det| = 1`.
pub fn surgery(c0: &CurveClass, c1: &CurveClass) -> Result<CurveClass> {
    let (m, n) = (c0.v.m() + c1.v.m(), c0.v.n() + c1.v.n());
    if (m, n) == (0, 0) {
        return Err(Error::NullClass);
    }
    let d = c0.v.det(&c1.v);
    if d.abs() != 1 {
        return Err(Error::NonElementary(format!("det({}, {}) = {}", c0.v, c1.v, d)));
    }
    Ok(CurveClass::new(Slope::new(m, n)?, c0.flux + c1.flux + handle_flux()))
}

/// Flux of the composite of `|m|` horizontal and `|n|` vertical unit curves:
/// one handle correction per elementary surgery.
pub fn rho(v: &Slope) -> Rational {
    frac(rat(v.m().abs() + v.n().abs() - 1, 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CobordClass {
    pub zeta: Rational,
    pub hom: [i64; 2],
}

impl CobordClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&self, other: &Self) -> Self {
        CobordClass { zeta: frac(self.zeta + other.zeta), hom: [self.hom[0] + other.hom[0], self.hom[1] + other.hom[1]] }
    }

    pub fn neg(&self) -> Self {
        CobordClass { zeta: frac(-self.zeta), hom: [-self.hom[0], -self.hom[1]] }
    }

    pub fn scale(&self, k: i64) -> Self {
        CobordClass { zeta: frac(self.zeta * int(k)), hom: [self.hom[0] * k, self.hom[1] * k] }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl fmt::Display for CobordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ({},{}))", fmt_rational(self.zeta), self.hom[0], self.hom[1])
    }
}

/// `rk(E)·(flux − ρ(v), v)` with `v` the orientation; local systems enter
/// only through their rank.
pub fn normal_form(b: &Brane) -> CobordClass {
    let v = b.orientation();
    let one = CobordClass { zeta: frac(flux_of(b) - rho(&v)), hom: [v.m(), v.n()] };
    one.scale(b.rank() as i64)
}

/// `[L_{(0,1),x}] − [L_{(0,1)}]`.
pub fn zeta(x: Rational) -> CobordClass {
    CobordClass { zeta: frac(x), hom: [0, 0] }
}

pub fn eta(c: &CobordClass) -> [i64; 2] {
    c.hom
}

pub fn sum_normal_form(terms: &[(i64, Brane)]) -> CobordClass {
    terms.iter().fold(CobordClass::zero(), |acc, (k, b)| acc.add(&normal_form(b).scale(*k)))
}

/// Whether two formal sums of branes have the same class.
pub fn relation_check(lhs: &[(i64, Brane)], rhs: &[(i64, Brane)]) -> bool {
    sum_normal_form(lhs) == sum_normal_form(rhs)
}
