//! Straight Lagrangian branes on `T² = ℝ²/ℤ²`.
//!
//! A brane is a primitive slope `v`, a shift, an integer grading offset, the
//! arc position of its Pin marker and a local system. The grading is
//! `α = α₀(v) + offset` where `e^{πiα₀}` is the unit direction of `v` and
//! `α₀ ∈ [-1, 1)`; only floors of grading differences are ever needed, and
//! these are computed from integer cross products.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::{ext_gcd, fmt_rational, frac, int, rat, to_f64, Rational};

/// A point of the plane (or of the torus, when reduced mod 1).
pub type Point = [Rational; 2];

pub fn det(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn det_q(a: Point, b: [i64; 2]) -> Rational {
    a[0] * int(b[1]) - a[1] * int(b[0])
}

pub fn reduce_point(p: Point) -> Point {
    [frac(p[0]), frac(p[1])]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    m: i64,
    n: i64,
}

impl Slope {
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if (m, n) == (0, 0) || m.gcd(&n) != 1 {
            return Err(Error::InvalidArgument(format!("slope ({m},{n}) is not primitive")));
        }
        Ok(Slope { m, n })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn vec(&self) -> [i64; 2] {
        [self.m, self.n]
    }

    pub fn neg(&self) -> Self {
        Slope { m: -self.m, n: -self.n }
    }

    pub fn det(&self, other: &Slope) -> i64 {
        det(self.vec(), other.vec())
    }

    /// 1 when `α₀ ∈ [0, 1)`, 0 when `α₀ ∈ [-1, 0)`.
    fn half(&self) -> u8 {
        if self.n < 0 || (self.n == 0 && self.m < 0) {
            0
        } else {
            1
        }
    }

    /// `true` when `α₀(v) ∈ [0, 1)`.
    pub fn in_upper_half(&self) -> bool {
        self.half() == 1
    }

    /// Standard grading `α₀ ∈ [-1, 1)`, for display only.
    pub fn alpha0(&self) -> f64 {
        if self.n == 0 && self.m < 0 {
            return -1.0;
        }
        (self.n as f64).atan2(self.m as f64) / std::f64::consts::PI
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Exact comparison of standard gradings `α₀(v)` and `α₀(w)`.
pub fn alpha_cmp(v: &Slope, w: &Slope) -> Ordering {
    match v.half().cmp(&w.half()) {
        Ordering::Equal => 0.cmp(&v.det(w)),
        o => o,
    }
}

/// `⌊α₀(v₁) − α₀(v₀)⌋` for non-parallel slopes.
pub fn floor_alpha_diff(v0: &Slope, v1: &Slope) -> Result<i64> {
    let d = v0.det(v1);
    if d == 0 {
        return Err(Error::NonTransverse(format!("slopes {v0} and {v1} are parallel")));
    }
    Ok(if alpha_cmp(v1, v0) == Ordering::Greater {
        // difference in (0, 2): below 1 exactly when v1 is counterclockwise from v0
        if d > 0 {
            0
        } else {
            1
        }
    } else if d < 0 {
        -1
    } else {
        -2
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock {
    pub eigenvalue: NovikovSeries,
    pub size: usize,
}

/// Direct sum of Jordan-type local systems; the fibre is `Λ^{Σ sizes}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSystem {
    blocks: Vec<JordanBlock>,
}

impl Default for LocalSystem {
    fn default() -> Self {
        Self::trivial()
    }
}

impl LocalSystem {
    pub fn new(blocks: Vec<JordanBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("local system without blocks".into()));
        }
        for b in &blocks {
            if b.size == 0 {
                return Err(Error::InvalidArgument("Jordan block of size 0".into()));
            }
            match b.eigenvalue.valuation() {
                Some(v) if v.is_zero() => {}
                _ => return Err(Error::NonUnit("eigenvalue must have valuation 0".into())),
            }
        }
        Ok(LocalSystem { blocks })
    }

    pub fn trivial() -> Self {
        LocalSystem { blocks: vec![JordanBlock { eigenvalue: NovikovSeries::one(), size: 1 }] }
    }

    /// Single Jordan block of size `h` with eigenvalue `m`.
    pub fn jordan(m: NovikovSeries, h: usize) -> Result<Self> {
        Self::new(vec![JordanBlock { eigenvalue: m, size: h }])
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 1 && self.blocks[0].eigenvalue == NovikovSeries::one()
    }

    /// The same system seen with the opposite orientation of the curve.
    pub fn reversed(&self, cutoff: Option<Rational>) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let inv = match cutoff {
                    Some(c) => b.eigenvalue.invert_to(c)?,
                    None => b.eigenvalue.invert()?,
                };
                Ok(JordanBlock { eigenvalue: inv, size: b.size })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalSystem { blocks })
    }
}

fn binom_rational(t: Rational, k: usize) -> Rational {
    let mut b = Rational::one();
    for j in 0..k {
        b = b * (t - int(j as i64)) / int(j as i64 + 1);
    }
    b
}

/// Parallel transport `M^t` over an arc of (signed) length `t`, in the
/// constant-connection gauge. Blocks raise `λ(I + N/λ)` to the power `t`.
pub fn transport(e: &LocalSystem, t: Rational) -> Result<SeriesMatrix> {
    transport_impl(e, t, None)
}

/// As [`transport`], truncating non-terminating expansions at `cutoff`.
pub fn transport_to(e: &LocalSystem, t: Rational, cutoff: Rational) -> Result<SeriesMatrix> {
    transport_impl(e, t, Some(cutoff))
}

fn transport_impl(e: &LocalSystem, t: Rational, cutoff: Option<Rational>) -> Result<SeriesMatrix> {
    let n = e.rank();
    let mut out = SeriesMatrix::zero(n, n);
    let mut offset = 0;
    for b in &e.blocks {
        let lam = &b.eigenvalue;
        for k in 0..b.size {
            let coef = binom_rational(t, k);
            if coef.is_zero() {
                continue;
            }
            let power = match cutoff {
                Some(c) => lam.fractional_power_to(t - int(k as i64), c)?,
                None => lam.fractional_power(t - int(k as i64))?,
            };
            let entry = power.scale(Complex::new(to_f64(coef), 0.0));
            for i in 0..b.size - k {
                out.set(offset + i, offset + i + k, entry.clone());
            }
        }
        offset += b.size;
    }
    Ok(out)
}

/// `(E¹_M, E^{h+1}_M, E^h_M)`: sub, total and quotient of the Jordan-block extension.
pub fn ls_ses_triple(m: &NovikovSeries, h: usize) -> Result<(LocalSystem, LocalSystem, LocalSystem)> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    Ok((
        LocalSystem::jordan(m.clone(), 1)?,
        LocalSystem::jordan(m.clone(), h + 1)?,
        LocalSystem::jordan(m.clone(), h)?,
    ))
}

pub fn default_marker() -> Rational {
    rat(1, 2) - rat(1, 64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Brane {
    slope: Slope,
    shift: Rational,
    grading_offset: i64,
    marker: Rational,
    local_system: LocalSystem,
}

impl Brane {
    /// Standard grading, default marker, trivial rank-one local system.
    pub fn new(slope: Slope, shift: Rational) -> Self {
        Brane {
            slope,
            shift,
            grading_offset: 0,
            marker: default_marker(),
            local_system: LocalSystem::trivial(),
        }
    }

    pub fn from_ints(m: i64, n: i64, shift: Rational) -> Result<Self> {
        Ok(Self::new(Slope::new(m, n)?, shift))
    }

    pub fn with_grading_offset(mut self, k: i64) -> Self {
        self.grading_offset = k;
        self
    }

    /// The shift functor applied `k` times: `α ↦ α − k`.
    pub fn shifted(mut self, k: i64) -> Self {
        self.grading_offset -= k;
        self
    }

    /// Marker at arc position `a` (mod 1) along the period of the stored slope.
    pub fn with_marker(mut self, a: Rational) -> Self {
        self.marker = frac(a);
        self
    }

    pub fn with_local_system(mut self, e: LocalSystem) -> Self {
        self.local_system = e;
        self
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn shift(&self) -> Rational {
        self.shift
    }

    pub fn grading_offset(&self) -> i64 {
        self.grading_offset
    }

    pub fn marker(&self) -> Rational {
        self.marker
    }

    pub fn local_system(&self) -> &LocalSystem {
        &self.local_system
    }

    pub fn rank(&self) -> usize {
        self.local_system.rank()
    }

    /// `(x, 0)`, or `(0, x)` for horizontal slopes.
    pub fn base_point(&self) -> Point {
        if self.slope.n == 0 {
            [int(0), self.shift]
        } else {
            [self.shift, int(0)]
        }
    }

    /// Direction of the curve: the slope, reversed for odd grading offsets.
    pub fn orientation(&self) -> Slope {
        if self.grading_offset.rem_euclid(2) == 0 {
            self.slope
        } else {
            self.slope.neg()
        }
    }

    /// Parameter `τ` with `p = base + λ + τ·v` for some lattice vector `λ`;
    /// defined up to an integer. Requires `p` on the curve.
    pub fn arc_param(&self, p: Point) -> Rational {
        let b = self.base_point();
        let d = [p[0] - b[0], p[1] - b[1]];
        let v = self.slope.vec();
        let k = -det_q(d, v);
        debug_assert!(k.is_integer(), "point is not on the curve");
        let k = k.to_integer();
        // w with det(v, w) = 1
        let (_, a, c) = ext_gcd(v[0], v[1]);
        let w = [-c, a];
        let r = [d[0] - int(k * w[0]), d[1] - int(k * w[1])];
        if v[0] != 0 {
            r[0] / int(v[0])
        } else {
            r[1] / int(v[1])
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let b = self.base_point();
        det_q([p[0] - b[0], p[1] - b[1]], self.slope.vec()).is_integer()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPoint {
    pub coords: Point,
    pub index: i64,
}

/// Floer index `⌊α₁ − α₀⌋ + 1`, the same at every intersection point.
pub fn index(l0: &Brane, l1: &Brane) -> Result<i64> {
    Ok(floor_alpha_diff(&l0.slope, &l1.slope)? + l1.grading_offset - l0.grading_offset + 1)
}

/// The `|det(v₀, v₁)|` points of `L₀ ∩ L₁`, sorted by coordinates.
pub fn intersections(l0: &Brane, l1: &Brane) -> Result<Vec<IntersectionPoint>> {
    let (v0, v1) = (l0.slope.vec(), l1.slope.vec());
    let d = det(v0, v1);
    let idx = index(l0, l1)?;
    let (p0, p1) = (l0.base_point(), l1.base_point());
    // p0 + s v0 ≡ p1 + t v1  ⇔  s·det(v0,v1) ≡ det(p1 − p0, v1) mod 1
    let base = det_q([p1[0] - p0[0], p1[1] - p0[1]], v1);
    let mut pts: Vec<Point> = (0..d.abs())
        .map(|j| {
            let s = frac((base + int(j)) / int(d));
            reduce_point([p0[0] + s * int(v0[0]), p0[1] + s * int(v0[1])])
        })
        .collect();
    pts.sort();
    pts.dedup();
    debug_assert_eq!(pts.len() as i64, d.abs());
    Ok(pts.into_iter().map(|coords| IntersectionPoint { coords, index: idx }).collect())
}

/// Fails when the marker of `l` sits on one of the given points of `l`.
pub fn check_marker(l: &Brane, points: &[Point]) -> Result<()> {
    for p in points {
        if frac(l.arc_param(*p)) == l.marker {
            return Err(Error::MarkerCollision(format!(
                "marker {} of L{} meets ({}, {})",
                fmt_rational(l.marker),
                l.slope,
                fmt_rational(p[0]),
                fmt_rational(p[1])
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(m: i64, n: i64, x: Rational) -> Brane {
        Brane::from_ints(m, n, x).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let pts = intersections(&b(1, 2, int(0)), &b(1, 0, int(0))).unwrap();
        assert_eq!(pts.iter().map(|p| p.coords).collect::<Vec<_>>(), vec![[int(0), int(0)], [rat(1, 2), int(0)]]);
        assert!(pts.iter().all(|p| p.index == 0));
        let x = rat(1, 3);
        let pts = intersections(&b(1, 0, int(0)), &b(0, 1, x)).unwrap();
        assert_eq!(pts[0].coords, [x, int(0)]);
        let pts = intersections(&b(0, -1, x), &b(1, 0, int(0))).unwrap();
        assert_eq!(pts[0].coords, [x, int(0)]);
        assert!(matches!(intersections(&b(1, 0, int(0)), &b(1, 0, x)), Err(Error::NonTransverse(_))));
        assert!(matches!(intersections(&b(1, 1, int(0)), &b(-1, -1, x)), Err(Error::NonTransverse(_))));
    }

    #[test]
    fn index_examples() {
        assert_eq!(index(&b(1, 2, int(0)), &b(1, 0, int(0))).unwrap(), 0);
        assert_eq!(index(&b(0, -1, rat(1, 4)), &b(1, 2, int(0))).unwrap(), 1);
        assert_eq!(index(&b(0, -1, rat(1, 4)), &b(1, 0, int(0))).unwrap(), 1);
        assert!((Slope::new(0, 1).unwrap().alpha0() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn floor_matches_floating_angles() {
        let slopes: Vec<Slope> = (-4..=4)
            .flat_map(|m| (-4..=4).map(move |n| (m, n)))
            .filter_map(|(m, n)| Slope::new(m, n).ok())
            .collect();
        for v in &slopes {
            for w in &slopes {
                if v.det(w) == 0 {
                    continue;
                }
                let expected = (w.alpha0() - v.alpha0()).floor() as i64;
                assert_eq!(floor_alpha_diff(v, w).unwrap(), expected, "{v} {w}");
            }
        }
    }

    #[test]
    fn transport_examples() {
        let m = NovikovSeries::phase(rat(1, 3));
        let e = LocalSystem::jordan(m.clone(), 1).unwrap();
        assert_eq!(transport(&e, int(0)).unwrap(), SeriesMatrix::identity(1));
        let t = rat(1, 2) - int(3);
        let tm = transport(&e, t).unwrap();
        assert!(tm.get(0, 0).approx_eq(&m.fractional_power(t).unwrap(), 1e-14));

        let e2 = LocalSystem::jordan(m.clone(), 2).unwrap();
        let s = rat(2, 5);
        let tm = transport(&e2, s).unwrap();
        let lam_s = m.fractional_power(s).unwrap();
        let lam_inv = m.invert().unwrap();
        assert!(tm.get(0, 0).approx_eq(&lam_s, 1e-14));
        assert!(tm.get(1, 1).approx_eq(&lam_s, 1e-14));
        assert!(tm.get(0, 1).approx_eq(&lam_s.mul(&lam_inv).scale(Complex::new(0.4, 0.0)), 1e-14));
        assert!(tm.get(1, 0).is_zero());
    }

    #[test]
    fn ses_triple_ranks() {
        let m = NovikovSeries::phase(rat(1, 7));
        let (a, b, c) = ls_ses_triple(&m, 2).unwrap();
        assert_eq!((a.rank(), b.rank(), c.rank()), (1, 3, 2));
        let (a, b, c) = ls_ses_triple(&m, 1).unwrap();
        assert_eq!((a.rank(), b.rank(), c.rank()), (1, 2, 1));
        assert!(ls_ses_triple(&NovikovSeries::monomial(Complex::new(1.0, 0.0), int(1)), 1).is_err());
    }

    #[test]
    fn arc_parameter_locates_points() {
        let l = b(2, 3, rat(1, 5));
        for y in [rat(0, 1), rat(1, 7), rat(5, 6)] {
            let p = [rat(1, 5) + int(2) * y + int(3), int(3) * y - int(1)];
            assert!(l.contains(p));
            assert_eq!(frac(l.arc_param(p)), frac(y));
        }
    }
}
