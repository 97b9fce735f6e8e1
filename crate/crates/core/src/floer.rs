//! Floer cochains and the products μ¹, μ² for transverse straight branes.
//!
//! Holomorphic triangles between straight lines are the embedded Euclidean
//! triangles in the universal cover, so μ² is a sum over lattice translates.
//! Fix a lift `ỹ₁ ∈ [0,1)²` of the input point of `L₀ ∩ L₁`. The lift of `L₂`
//! is pinned down by an integer `k`, and the triangle is
//!
//! ```text
//! ỹ₂ = ỹ₁ + t·v₁,   ỹ₀ = ỹ₁ + s·v₀,   t = (k − c)/d₁₂,   s = t·d₁₂/d₀₂
//! ```
//!
//! with `c = det(ỹ₁ − p₂, v₂)` and `dᵢⱼ = det(vᵢ, vⱼ)`. Its area is
//! `K t²/2` with `K = |d₀₁d₁₂/d₀₂|`, and its boundary runs counterclockwise
//! through `ỹ₀ → ỹ₁ → ỹ₂` exactly when `d₀₁d₁₂d₂₀ > 0`, for every `k`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::{floor_i64, fmt_rational, int, to_f64, Rational};
use crate::torus::{check_marker, det, intersections, reduce_point, transport_to, Brane, IntersectionPoint, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct CFSpace {
    pub l0: Brane,
    pub l1: Brane,
    pub generators: Vec<IntersectionPoint>,
}

impl CFSpace {
    /// Each generator carries `Hom(E₀, E₁)`, matrices of shape `rk(E₁) × rk(E₀)`.
    pub fn hom_shape(&self) -> (usize, usize) {
        (self.l1.rank(), self.l0.rank())
    }

    /// Degree of every generator (gradings are constant along straight branes).
    pub fn degree(&self) -> i64 {
        self.generators.first().map_or(0, |g| g.index)
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let (r, c) = self.hom_shape();
        let mut dims = BTreeMap::new();
        for g in &self.generators {
            *dims.entry(g.index).or_insert(0) += r * c;
        }
        dims
    }

    pub fn generator_index(&self, p: Point) -> Option<usize> {
        let p = reduce_point(p);
        self.generators.iter().position(|g| g.coords == p)
    }
}

pub fn cf(l0: &Brane, l1: &Brane) -> Result<CFSpace> {
    Ok(CFSpace { l0: l0.clone(), l1: l1.clone(), generators: intersections(l0, l1)? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloerElement {
    space: CFSpace,
    components: Vec<SeriesMatrix>,
}

impl FloerElement {
    pub fn zero(space: &CFSpace) -> Self {
        let (r, c) = space.hom_shape();
        FloerElement { space: space.clone(), components: vec![SeriesMatrix::zero(r, c); space.generators.len()] }
    }

    pub fn new(space: &CFSpace, components: Vec<SeriesMatrix>) -> Result<Self> {
        let (r, c) = space.hom_shape();
        if components.len() != space.generators.len() {
            return Err(Error::Mismatch(format!(
                "{} components for {} generators",
                components.len(),
                space.generators.len()
            )));
        }
        if let Some(m) = components.iter().find(|m| m.rows() != r || m.cols() != c) {
            return Err(Error::Mismatch(format!("component of shape {}x{}, expected {}x{}", m.rows(), m.cols(), r, c)));
        }
        Ok(FloerElement { space: space.clone(), components })
    }

    /// `m` placed at generator `i`, zero elsewhere.
    pub fn generator(space: &CFSpace, i: usize, m: SeriesMatrix) -> Result<Self> {
        if i >= space.generators.len() {
            return Err(Error::InvalidArgument(format!("generator {i} out of range")));
        }
        let mut e = Self::zero(space);
        e.components[i] = m;
        Self::new(space, e.components)
    }

    /// Rank-one case: scalar coefficients per generator.
    pub fn from_scalars(space: &CFSpace, coeffs: Vec<NovikovSeries>) -> Result<Self> {
        Self::new(space, coeffs.into_iter().map(SeriesMatrix::scalar).collect())
    }

    pub fn space(&self) -> &CFSpace {
        &self.space
    }

    pub fn components(&self) -> &[SeriesMatrix] {
        &self.components
    }

    pub fn degree(&self) -> i64 {
        self.space.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SeriesMatrix::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::Mismatch("elements of different cochain spaces".into()));
        }
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        Ok(FloerElement { space: self.space.clone(), components })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FloerElement { space: self.space.clone(), components: self.components.iter().map(SeriesMatrix::neg).collect() }
    }

    pub fn scale(&self, s: &NovikovSeries) -> Self {
        FloerElement { space: self.space.clone(), components: self.components.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn valuation_lower_bound(&self) -> Option<Rational> {
        self.components.iter().filter_map(SeriesMatrix::valuation_lower_bound).min()
    }

    pub fn max_coeff_below(&self, bound: Rational) -> f64 {
        self.components.iter().map(|m| m.max_coeff_below(bound)).fold(0.0, f64::max)
    }

    /// Guaranteed valuation at least `cutoff − 1`.
    pub fn vanishes_to(&self, cutoff: Rational) -> bool {
        self.valuation_lower_bound().map_or(true, |v| v >= cutoff - int(1))
    }
}

/// The differential. Two straight lines of distinct slopes in the plane meet
/// once, so there are no immersed bigons and no strips to count.
pub fn mu1(a: &FloerElement) -> Result<FloerElement> {
    let l0 = &a.space.l0;
    let l1 = &a.space.l1;
    if l0.slope().det(&l1.slope()) == 0 {
        return Err(Error::NonTransverse(format!("L{} and L{}", l0.slope(), l1.slope())));
    }
    debug_assert!(a.space.generators.iter().all(|g| g.index == a.space.degree()));
    Ok(FloerElement::zero(&a.space))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Triangle {
    /// Translate index `k` of the lift of `L₂`.
    pub lattice_index: i64,
    /// Lifted corners `[ỹ₀, ỹ₁, ỹ₂]`.
    #[serde(serialize_with = "ser_points")]
    pub corners: [Point; 3],
    /// Generator indices `[i₀ in CF(L₀,L₂), i₁ in CF(L₀,L₁), i₂ in CF(L₁,L₂)]`.
    pub generators: [usize; 3],
    #[serde(serialize_with = "ser_rational")]
    pub area: Rational,
    /// `(−1)^{#markers crossed by the boundary}`.
    pub sign: i8,
    /// Signed length, along each brane's slope vector, of the boundary edges on `L₀, L₁, L₂`.
    #[serde(serialize_with = "ser_rationals")]
    pub arcs: [Rational; 3],
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::json::rational(*q).serialize(s)
}

fn ser_rationals<S: serde::Serializer>(q: &[Rational; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    q.iter().map(|x| crate::json::rational(*x)).collect::<Vec<_>>().serialize(s)
}

fn ser_points<S: serde::Serializer>(p: &[Point; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    p.iter().map(|x| crate::json::point(*x)).collect::<Vec<_>>().serialize(s)
}

fn check_transverse(a: &Brane, b: &Brane) -> Result<()> {
    if a.slope().det(&b.slope()) == 0 {
        return Err(Error::NonTransverse(format!("L{} and L{} are parallel", a.slope(), b.slope())));
    }
    Ok(())
}

/// Markers crossed by the segment `a → b` of `l` (endpoints excluded; they
/// are intersection points, which never carry a marker).
fn markers_crossed(l: &Brane, a: Point, b: Point) -> (i64, Rational) {
    let v = l.slope().vec();
    let ta = l.arc_param(a);
    let dt = if v[0] != 0 { (b[0] - a[0]) / int(v[0]) } else { (b[1] - a[1]) / int(v[1]) };
    let (lo, hi) = if dt > int(0) { (ta, ta + dt) } else { (ta + dt, ta) };
    // markers sit at marker + j
    let first = floor_i64(lo - l.marker()) + 1;
    let last = (hi - l.marker()).ceil().to_integer() - 1;
    ((last - first + 1).max(0), dt)
}

/// All embedded counterclockwise triangles with boundary on lifts of
/// `L₀, L₁, L₂` (in that order) and area below `bound`.
pub fn triangles(l0: &Brane, l1: &Brane, l2: &Brane, bound: Rational) -> Result<Vec<Triangle>> {
    check_transverse(l0, l1)?;
    check_transverse(l1, l2)?;
    check_transverse(l0, l2)?;
    let p01 = intersections(l0, l1)?;
    let p12 = intersections(l1, l2)?;
    let p02 = intersections(l0, l2)?;
    let (v0, v1, v2) = (l0.slope().vec(), l1.slope().vec(), l2.slope().vec());
    let (d01, d12, d02) = (det(v0, v1), det(v1, v2), det(v0, v2));
    let p2 = l2.base_point();
    let offset_on_l2 = |y: Point| (y[0] - p2[0]) * int(v2[1]) - (y[1] - p2[1]) * int(v2[0]);

    for y in &p01 {
        if offset_on_l2(y.coords).is_integer() {
            return Err(Error::DegenerateConfiguration(format!(
                "triple point at ({}, {})",
                fmt_rational(y.coords[0]),
                fmt_rational(y.coords[1])
            )));
        }
    }
    let pts = |v: &[IntersectionPoint]| v.iter().map(|g| g.coords).collect::<Vec<_>>();
    let (c01, c12, c02) = (pts(&p01), pts(&p12), pts(&p02));
    check_marker(l0, &[c01.clone(), c02.clone()].concat())?;
    check_marker(l1, &[c01.clone(), c12.clone()].concat())?;
    check_marker(l2, &[c12.clone(), c02.clone()].concat())?;

    // counterclockwise iff −d01·d12/d02 > 0
    if -(d01 * d12).signum() * d02.signum() <= 0 || bound <= int(0) {
        return Ok(Vec::new());
    }
    let kk = Rational::new((d01 * d12).abs(), d02.abs());
    // area < bound  ⇔  |k − c| < |d12|·sqrt(2·bound/K)
    let reach = (d12.abs() as f64) * (2.0 * to_f64(bound) / to_f64(kk)).sqrt() + 1.0;

    let mut out = Vec::new();
    for (i1, y) in p01.iter().enumerate() {
        let y1 = y.coords;
        let c = offset_on_l2(y1);
        let cf = to_f64(c);
        let k_lo = (cf - reach).floor() as i64;
        let k_hi = (cf + reach).ceil() as i64;
        for k in k_lo..=k_hi {
            let t = (int(k) - c) / int(d12);
            let area = kk * t * t / int(2);
            if area >= bound {
                continue;
            }
            let s = t * Rational::new(d12, d02);
            let y2 = [y1[0] + t * int(v1[0]), y1[1] + t * int(v1[1])];
            let y0 = [y1[0] + s * int(v0[0]), y1[1] + s * int(v0[1])];
            let i2 = c12.iter().position(|p| *p == reduce_point(y2)).expect("corner on L1 ∩ L2");
            let i0 = c02.iter().position(|p| *p == reduce_point(y0)).expect("corner on L0 ∩ L2");
            let mut stars = 0;
            let mut arcs = [int(0); 3];
            for (j, (l, a, b)) in [(l0, y0, y1), (l1, y1, y2), (l2, y2, y0)].into_iter().enumerate() {
                let (n, dt) = markers_crossed(l, a, b);
                stars += n;
                arcs[j] = dt;
            }
            out.push(Triangle {
                lattice_index: k,
                corners: [y0, y1, y2],
                generators: [i0, i1, i2],
                area,
                sign: if stars % 2 == 0 { 1 } else { -1 },
                arcs,
            });
        }
    }
    Ok(out)
}

/// `μ²(φ₂, φ₁)` for `φ₁ ∈ CF(L₀,L₁)`, `φ₂ ∈ CF(L₁,L₂)`, truncated at `cutoff`.
///
/// Each triangle contributes `sign·q^{area}·T₂∘φ₂∘T₁∘φ₁∘T₀` where `Tⱼ` is
/// the transport of `Eⱼ` over minus the edge length along the slope vector; the whole sum
/// carries the prefactor `(−1)^{i(y₁)+2i(y₂)}`.
pub fn mu2(phi2: &FloerElement, phi1: &FloerElement, cutoff: Rational) -> Result<FloerElement> {
    let (l0, l1) = (&phi1.space.l0, &phi1.space.l1);
    if *l1 != phi2.space.l0 {
        return Err(Error::Mismatch("μ² inputs are not composable".into()));
    }
    let l2 = &phi2.space.l1;
    let out_space = cf(l0, l2)?;
    let (v1_lb, v2_lb) = match (phi1.valuation_lower_bound(), phi2.valuation_lower_bound()) {
        (Some(a), Some(b)) => (a, b),
        // an exactly zero input
        _ => {
            triangles(l0, l1, l2, int(0))?;
            return Ok(FloerElement::zero(&out_space));
        }
    };
    let bound = cutoff - v1_lb - v2_lb;
    let tris = triangles(l0, l1, l2, bound)?;

    let deg1 = phi1.degree();
    let deg2 = phi2.degree();
    assert_eq!(out_space.degree(), deg1 + deg2, "μ² must add degrees");
    let prefactor = if (deg1 + 2 * deg2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let contributions = tris
        .par_iter()
        .map(|tri| -> Result<(usize, SeriesMatrix)> {
            let [i0, i1, i2] = tri.generators;
            let window = cutoff - tri.area + int(1);
            let t0 = transport_to(l0.local_system(), -tri.arcs[0], window)?;
            let t1 = transport_to(l1.local_system(), -tri.arcs[1], window)?;
            let t2 = transport_to(l2.local_system(), -tri.arcs[2], window)?;
            let m = t2.mul(&phi2.components[i2])?.mul(&t1)?.mul(&phi1.components[i1])?.mul(&t0)?;
            let weight = NovikovSeries::monomial(Complex::new(prefactor * f64::from(tri.sign), 0.0), tri.area);
            Ok((i0, m.scale(&weight).truncate(cutoff)))
        })
        .collect::<Result<Vec<_>>>()?;

    let (r, c) = out_space.hom_shape();
    let mut components: Vec<SeriesMatrix> =
        vec![SeriesMatrix::zero(r, c).map(|s| s.truncate(cutoff)); out_space.generators.len()];
    for (i0, m) in contributions {
        components[i0] = components[i0].add(&m)?;
    }
    FloerElement::new(&out_space, components)
}

/// Residual of the A∞ relation for composable `a, b, c`:
/// max coefficient of `μ²(μ²(c,b),a) − (−1)^{|a|}μ²(c,μ²(b,a))` below `cutoff`.
pub fn assoc_defect(a: &FloerElement, b: &FloerElement, c: &FloerElement, cutoff: Rational) -> Result<f64> {
    let left = mu2(&mu2(c, b, cutoff)?, a, cutoff)?;
    let right = mu2(c, &mu2(b, a, cutoff)?, cutoff)?;
    let right = if a.degree().rem_euclid(2) == 0 { right } else { right.neg() };
    Ok(left.sub(&right)?.max_coeff_below(cutoff))
}

/// The two μ² conditions of the exact-triangle criterion for
/// `Y₀ →c₁ Y₁ →c₂ Y₂ →c₃ Y₀[1]`, with `Y₂` split into summands: `c2[j]`
/// and `c3[j]` are the components through the `j`-th summand.
/// Returns whether `μ²(c₃,c₂)` and `μ²(c₁,c₃)` vanish to working precision.
pub fn cone_criterion_mu2_checks(
    c1: &FloerElement,
    c2: &[FloerElement],
    c3: &[FloerElement],
    cutoff: Rational,
) -> Result<(bool, bool)> {
    if c2.len() != c3.len() || c2.is_empty() {
        return Err(Error::Mismatch("c2 and c3 must list the same summands".into()));
    }
    let mut first: Option<FloerElement> = None;
    let mut second = true;
    for (x2, x3) in c2.iter().zip(c3) {
        let p = mu2(x3, x2, cutoff)?;
        first = Some(match first {
            None => p,
            Some(acc) => acc.add(&p)?,
        });
        second &= mu2(c1, x3, cutoff)?.vanishes_to(cutoff);
    }
    Ok((first.expect("nonempty").vanishes_to(cutoff), second))
}
