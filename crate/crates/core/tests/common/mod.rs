//! Reference computations used by the integration tests and the acceptance
//! runner. None of them call into the code paths they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = Rational64;
pub type C = Complex64;
pub type Pt = [Q; 2];

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn fl(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn fracq(x: Q) -> Q {
    x - x.floor()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational in `[0, 1)` with denominator at most `max_den`.
pub fn random_unit_rational(r: &mut ChaCha8Rng, max_den: i64) -> Q {
    let d = r.gen_range(1..=max_den);
    q(r.gen_range(0..d), d)
}

/// `e^{2πi·t}` using the principal argument of the phase.
pub fn phase_power(phase: Q, t: Q) -> C {
    let mut p = fracq(phase);
    if p > q(1, 2) {
        p -= qi(1);
    }
    C::from_polar(1.0, 2.0 * PI * fl(p) * fl(t))
}

// ---------------------------------------------------------------------------
// closed-form product of the degree-two section with the vertical generator

/// `σ⁰ Σ −M^{2x−2n} q^{(n−x)²} + σ¹ Σ M^{2x−2n−1} q^{(n+½−x)²}` below `cutoff`,
/// `M = e^{2πi·phase}` with powers on the principal branch.
pub fn step1_closed_form(x: Q, phase: Q, s0: C, s1: C, cutoff: Q) -> BTreeMap<Q, C> {
    let mut out: BTreeMap<Q, C> = BTreeMap::new();
    let reach = fl(cutoff).sqrt().ceil() as i64 + 2;
    let xi = x.floor().to_integer();
    for n in (xi - reach)..=(xi + reach + 1) {
        let e0 = (qi(n) - x) * (qi(n) - x);
        if e0 < cutoff {
            *out.entry(e0).or_default() += -s0 * phase_power(phase, qi(2) * x - qi(2 * n));
        }
        let h = qi(n) + q(1, 2) - x;
        let e1 = h * h;
        if e1 < cutoff {
            *out.entry(e1).or_default() += s1 * phase_power(phase, qi(2) * x - qi(2 * n + 1));
        }
    }
    out.retain(|_, c| c.norm() > 1e-12);
    out
}

// ---------------------------------------------------------------------------
// brute-force triangle counting in a bounding box

/// A rank-one brane: slope, shift, grading offset, marker, monodromy phase.
#[derive(Clone, Copy, Debug)]
pub struct Line {
    pub v: [i64; 2],
    pub shift: Q,
    pub offset: i64,
    pub marker: Q,
    pub phase: Q,
}

impl Line {
    pub fn base(&self) -> Pt {
        if self.v[1] == 0 {
            [qi(0), self.shift]
        } else {
            [self.shift, qi(0)]
        }
    }

    fn vq(&self) -> Pt {
        [qi(self.v[0]), qi(self.v[1])]
    }
}

fn detq(a: Pt, b: Pt) -> Q {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

fn reduce(p: Pt) -> Pt {
    [fracq(p[0]), fracq(p[1])]
}

/// Intersection points in `[0,1)²`, found by solving on lattice translates.
pub fn intersections(a: &Line, b: &Line) -> Vec<Pt> {
    let k = a.v[0].abs() + a.v[1].abs() + b.v[0].abs() + b.v[1].abs() + 2;
    let d = detq(a.vq(), b.vq());
    let mut pts = Vec::new();
    for lx in -k..=k {
        for ly in -k..=k {
            // base_a + s v_a = base_b + t v_b + λ
            let rhs = sub([b.base()[0] + qi(lx), b.base()[1] + qi(ly)], a.base());
            let s = detq(rhs, b.vq()) / d;
            let p = reduce([a.base()[0] + s * qi(a.v[0]), a.base()[1] + s * qi(a.v[1])]);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort();
    pts
}

fn lifts(points: &[Pt], r: i64) -> Vec<Pt> {
    let mut out = Vec::new();
    for p in points {
        for lx in -r..=r {
            for ly in -r..=r {
                out.push([p[0] + qi(lx), p[1] + qi(ly)]);
            }
        }
    }
    out
}

/// Markers on the open segment `a → b` of `l`: lattice translates of
/// `base + marker·v`.
fn markers_on_segment(l: &Line, a: Pt, b: Pt) -> i64 {
    let m0 = [l.base()[0] + l.marker * qi(l.v[0]), l.base()[1] + l.marker * qi(l.v[1])];
    let d = sub(b, a);
    let lo = [a[0].min(b[0]).floor().to_integer() - 1, a[1].min(b[1]).floor().to_integer() - 1];
    let hi = [a[0].max(b[0]).ceil().to_integer() + 1, a[1].max(b[1]).ceil().to_integer() + 1];
    let mut n = 0;
    for lx in (lo[0] - 1)..=(hi[0] + 1) {
        for ly in (lo[1] - 1)..=(hi[1] + 1) {
            let m = [m0[0] + qi(lx), m0[1] + qi(ly)];
            let w = sub(m, a);
            if !detq(w, d).is_zero() {
                continue;
            }
            let t = if !d[0].is_zero() { w[0] / d[0] } else { w[1] / d[1] };
            if t > qi(0) && t < qi(1) {
                n += 1;
            }
        }
    }
    n
}

fn alpha(v: [i64; 2]) -> f64 {
    let a = (v[1] as f64).atan2(v[0] as f64) / PI;
    if a >= 1.0 {
        a - 2.0
    } else {
        a
    }
}

/// Degree of every generator of `CF(a, b)` from floating-point angles.
pub fn float_index(a: &Line, b: &Line) -> i64 {
    (alpha(b.v) - alpha(a.v)).floor() as i64 + b.offset - a.offset + 1
}

fn signed_area(a: Pt, b: Pt, c: Pt) -> Q {
    detq(sub(b, a), sub(c, a)) / qi(2)
}

/// Signed length of `a → b` in units of the slope vector.
fn arc(l: &Line, a: Pt, b: Pt) -> Q {
    let d = sub(b, a);
    let v = l.vq();
    (d[0] * v[0] + d[1] * v[1]) / (v[0] * v[0] + v[1] * v[1])
}

/// Radius of a box around `[0,1)²` containing every triangle of area below
/// `bound` with a vertex in `[0,1)²`: all such triangles are similar.
fn box_radius(l0: &Line, l1: &Line, l2: &Line, bound: Q) -> i64 {
    // reference triangle: y1 = 0, y2 = v1, y0 on the v0-line through 0 and the v2-line through v1
    let y2 = l1.vq();
    let s = detq(y2, l2.vq()) / detq(l0.vq(), l2.vq());
    let y0 = [s * l0.vq()[0], s * l0.vq()[1]];
    let a1 = fl(signed_area(y0, [qi(0), qi(0)], y2).abs());
    let len = |p: Pt, r: Pt| (fl(p[0] - r[0]).powi(2) + fl(p[1] - r[1]).powi(2)).sqrt();
    let m1 = len(y0, [qi(0), qi(0)]).max(len(y2, [qi(0), qi(0)])).max(len(y0, y2));
    let scale = (fl(bound).max(0.0) / a1).sqrt();
    (scale * m1).ceil() as i64 + 2
}

/// `μ²(φ₂, φ₁)` for rank-one branes, coefficients keyed by generator
/// coordinates, by enumerating corner lifts in a box.
pub fn brute_mu2(
    l0: &Line,
    l1: &Line,
    l2: &Line,
    phi1: &HashMap<Pt, C>,
    phi2: &HashMap<Pt, C>,
    cutoff: Q,
) -> BTreeMap<Pt, BTreeMap<Q, C>> {
    let p01 = intersections(l0, l1);
    let p12 = intersections(l1, l2);
    let p02 = intersections(l0, l2);
    let r = box_radius(l0, l1, l2, cutoff);
    let y2s = lifts(&p12, r);
    let y0s = lifts(&p02, r);
    let prefactor = if float_index(l0, l1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut out: BTreeMap<Pt, BTreeMap<Q, C>> = p02.iter().map(|p| (*p, BTreeMap::new())).collect();
    for y1 in &p01 {
        for y2 in y2s.iter().filter(|y2| detq(sub(**y2, *y1), l1.vq()).is_zero()) {
            for y0 in y0s.iter().filter(|y0| detq(sub(**y0, *y1), l0.vq()).is_zero() && detq(sub(**y0, *y2), l2.vq()).is_zero()) {
                let area = signed_area(*y0, *y1, *y2);
                if area <= qi(0) || area >= cutoff {
                    continue;
                }
                let stars =
                    markers_on_segment(l0, *y0, *y1) + markers_on_segment(l1, *y1, *y2) + markers_on_segment(l2, *y2, *y0);
                let sign = if stars % 2 == 0 { 1.0 } else { -1.0 };
                let transport = phase_power(l0.phase, -arc(l0, *y0, *y1))
                    * phase_power(l1.phase, -arc(l1, *y1, *y2))
                    * phase_power(l2.phase, -arc(l2, *y2, *y0));
                let c = phi1[&reduce(*y1)] * phi2[&reduce(*y2)] * transport * sign * prefactor;
                *out.get_mut(&reduce(*y0)).expect("corner is a generator").entry(area).or_default() += c;
            }
        }
    }
    for s in out.values_mut() {
        s.retain(|_, c| c.norm() > 1e-12);
    }
    out
}

// ---------------------------------------------------------------------------
// flux of surgeries

/// Twice the signed area of a closed polygon (shoelace).
pub fn shoelace2(poly: &[Pt]) -> Q {
    let mut s = qi(0);
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s
}

/// Flux `det(p, v) mod 1` of the straight curve Hamiltonian isotopic to the
/// periodic PL path through `path[0], …, path[k] = path[0] + v`: the straight
/// chord is moved until the signed area between it and the path vanishes.
pub fn staircase_flux(path: &[Pt]) -> Q {
    let p0 = path[0];
    let v = sub(*path.last().unwrap(), p0);
    // area by which the path lies to the right of the chord p0 → p0 + v;
    // moving the chord right by that area changes det(p, v) by the same amount
    let area = shoelace2(path) / qi(2);
    fracq(detq(p0, v) + area)
}

/// `ρ(v)` over every Farey decomposition `v = a + b` with `|det(a, b)| = 1`
/// and `a`, `b` in the box spanned by `v`; `None` if two paths disagree.
pub fn farey_rho(v: [i64; 2], memo: &mut HashMap<[i64; 2], Option<Q>>) -> Option<Q> {
    if v[0].abs() + v[1].abs() == 1 {
        return Some(qi(0));
    }
    if let Some(r) = memo.get(&v) {
        return *r;
    }
    let mut seen: Option<Q> = None;
    let mut ok = true;
    let (sx, sy) = (v[0].signum(), v[1].signum());
    for i in 0..=v[0].abs() {
        for j in 0..=v[1].abs() {
            let a = [sx * i, sy * j];
            let b = [v[0] - a[0], v[1] - a[1]];
            if a == [0, 0] || b == [0, 0] || (a[0] * b[1] - a[1] * b[0]).abs() != 1 {
                continue;
            }
            let r = match (farey_rho(a, memo), farey_rho(b, memo)) {
                (Some(x), Some(y)) => fracq(x + y + q(1, 2)),
                _ => {
                    ok = false;
                    continue;
                }
            };
            match seen {
                None => seen = Some(r),
                Some(s) if s != r => ok = false,
                _ => {}
            }
        }
    }
    let res = if ok { seen } else { None };
    memo.insert(v, res);
    res
}
