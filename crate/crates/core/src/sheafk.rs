//! K₀ bookkeeping for coherent sheaves on the Tate curve.
//!
//! Indecomposable bundles are recorded by `(rank, degree, determinant point)`
//! and torsion sheaves by `(support point, length)`. Classes live in
//! `ℤ ⊕ ℤ ⊕ X` as `(rk, deg, pt)`; a degree-zero line bundle `O(P − O)` has
//! point `P`.

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tate::TatePoint;

#[derive(Clone, Debug, PartialEq)]
pub enum SheafKind {
    Bundle { r: i64, d: i64, det_pt: TatePoint },
    Skyscraper { pt: TatePoint, h: i64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndecSheaf {
    pub kind: SheafKind,
    /// Homological shift; only its parity affects classes.
    pub shift: i64,
}

impl IndecSheaf {
    pub fn bundle(r: i64, d: i64, det_pt: TatePoint) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument(format!("bundle rank {r} must be positive")));
        }
        Ok(IndecSheaf { kind: SheafKind::Bundle { r, d, det_pt }, shift: 0 })
    }

    pub fn skyscraper(pt: TatePoint, h: i64) -> Result<Self> {
        if h < 1 {
            return Err(Error::InvalidArgument(format!("skyscraper length {h} must be positive")));
        }
        Ok(IndecSheaf { kind: SheafKind::Skyscraper { pt, h }, shift: 0 })
    }

    /// `O(nP₀)`.
    pub fn o_n_p0(n: i64) -> Result<Self> {
        Self::bundle(1, n, TatePoint::p0().pow(n)?)
    }

    /// `O(D)` for `D = Σ cᵢ Pᵢ`; its point is `⊕ cᵢ⊙Pᵢ`.
    pub fn line_bundle(divisor: &[(i64, TatePoint)]) -> Result<Self> {
        let mut deg = 0;
        let mut pt = TatePoint::origin();
        for (c, p) in divisor {
            deg += c;
            pt = pt.mul(&p.pow(*c)?);
        }
        Self::bundle(1, deg, pt)
    }

    pub fn shifted(mut self, k: i64) -> Self {
        self.shift += k;
        self
    }

    pub fn class(&self) -> Result<K0Class> {
        let c = match &self.kind {
            SheafKind::Bundle { r, d, det_pt } => K0Class { rk: *r, deg: *d, pt: det_pt.clone() },
            SheafKind::Skyscraper { pt, h } => K0Class { rk: 0, deg: *h, pt: pt.pow(*h)? },
        };
        if self.shift.rem_euclid(2) == 1 {
            c.neg()
        } else {
            Ok(c)
        }
    }
}

/// Formal integer combination of indecomposables, like terms merged.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SheafSum {
    terms: Vec<(i64, IndecSheaf)>,
}

impl SheafSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(s: IndecSheaf) -> Self {
        Self::from_terms(vec![(1, s)])
    }

    pub fn from_terms(terms: Vec<(i64, IndecSheaf)>) -> Self {
        let mut out = SheafSum::zero();
        for (c, s) in terms {
            out.push(c, s);
        }
        out
    }

    pub fn push(&mut self, c: i64, s: IndecSheaf) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.1 == s) {
            t.0 += c;
        } else {
            self.terms.push((c, s));
        }
        self.terms.retain(|t| t.0 != 0);
    }

    pub fn terms(&self) -> &[(i64, IndecSheaf)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, s) in &other.terms {
            out.push(*c, s.clone());
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, s)| (c * k, s.clone())).collect())
    }

    pub fn class(&self) -> Result<K0Class> {
        let mut acc = K0Class::zero();
        for (c, s) in &self.terms {
            acc = acc.add(&s.class()?.scale(*c)?);
        }
        Ok(acc)
    }
}

pub fn k0_class(s: &SheafSum) -> Result<K0Class> {
    s.class()
}

#[derive(Clone, Debug, PartialEq)]
pub struct K0Class {
    pub rk: i64,
    pub deg: i64,
    pub pt: TatePoint,
}

impl K0Class {
    pub fn zero() -> Self {
        K0Class { rk: 0, deg: 0, pt: TatePoint::origin() }
    }

    pub fn add(&self, other: &Self) -> Self {
        K0Class { rk: self.rk + other.rk, deg: self.deg + other.deg, pt: self.pt.mul(&other.pt) }
    }

    pub fn neg(&self) -> Result<Self> {
        Ok(K0Class { rk: -self.rk, deg: -self.deg, pt: self.pt.inverse()? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self.add(&other.neg()?))
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        Ok(K0Class { rk: self.rk * k, deg: self.deg * k, pt: self.pt.pow(k)? })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rk == other.rk && self.deg == other.deg && self.pt.approx_eq(&other.pt, tol)
    }

    /// Zero rank and degree exactly, identity point within `tol`.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.rk == 0 && self.deg == 0 && self.pt.is_identity(tol)
    }

    pub fn to_json(&self) -> Value {
        json!({ "rk": self.rk, "deg": self.deg, "pt": crate::json::tate_point(&self.pt) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationFamily {
    Isomorphism,
    Divisor,
    Atiyah,
    JordanTower,
}

/// The K₀ relation `[total] − [sub] − [quot]` of a short exact sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationTriple {
    pub family: RelationFamily,
    pub sub: SheafSum,
    pub total: SheafSum,
    pub quot: SheafSum,
}

impl RelationTriple {
    pub fn residual(&self) -> Result<K0Class> {
        self.total.class()?.sub(&self.sub.class()?)?.sub(&self.quot.class()?)
    }
}

/// Determinant point of the degree-3 hyperplane bundle `O(3·O)`.
fn hyperplane_point() -> TatePoint {
    TatePoint::origin()
}

/// `0 → O(D − Q) → O(D) → O_Q → 0` for a degree-`d` divisor with point `D_pt`.
pub fn ses_divisor(d: i64, d_pt: &TatePoint, q: &TatePoint) -> Result<RelationTriple> {
    Ok(RelationTriple {
        family: RelationFamily::Divisor,
        sub: SheafSum::single(IndecSheaf::bundle(1, d - 1, d_pt.div(q)?)?),
        total: SheafSum::single(IndecSheaf::bundle(1, d, d_pt.clone())?),
        quot: SheafSum::single(IndecSheaf::skyscraper(q.clone(), 1)?),
    })
}

/// `0 → O^{⊕ r−1}(−n) → E → (det E)((r−1)n) → 0` for an indecomposable
/// `E` of coprime rank `r ≥ 2` and degree `d`; twisting by the degree-3
/// hyperplane bundle.
pub fn ses_atiyah_coprime(r: i64, d: i64, det_pt: &TatePoint, n: i64) -> Result<RelationTriple> {
    if r < 2 || r.gcd(&d) != 1 {
        return Err(Error::BadGcd(format!("rank {r}, degree {d}")));
    }
    let h = hyperplane_point();
    let sub = IndecSheaf::bundle(1, -3 * n, h.pow(-n)?)?;
    let quot = IndecSheaf::bundle(1, d + 3 * n * (r - 1), det_pt.mul(&h.pow(n * (r - 1))?))?;
    Ok(RelationTriple {
        family: RelationFamily::Atiyah,
        sub: SheafSum::from_terms(vec![(r - 1, sub)]),
        total: SheafSum::single(IndecSheaf::bundle(r, d, det_pt.clone())?),
        quot: SheafSum::single(quot),
    })
}

/// `h`-th member of the tower over a base: `E(hr, hd)` with point `h⊙p`, or `O_{hQ}`.
fn tower_member(base: &IndecSheaf, h: i64) -> Result<IndecSheaf> {
    match &base.kind {
        SheafKind::Bundle { r, d, det_pt } => IndecSheaf::bundle(h * r, h * d, det_pt.pow(h)?),
        SheafKind::Skyscraper { pt, .. } => IndecSheaf::skyscraper(pt.clone(), h),
    }
}

/// `0 → Y₁ → Y_{h+1} → Y_h → 0`.
pub fn ses_jordan_tower(base: &IndecSheaf, h: i64) -> Result<RelationTriple> {
    let ok = base.shift == 0
        && match &base.kind {
            SheafKind::Bundle { r, d, .. } => r.gcd(d) == 1,
            SheafKind::Skyscraper { h, .. } => *h == 1,
        };
    if !ok {
        return Err(Error::BadBase("base must be an unshifted coprime bundle or a length-one skyscraper".into()));
    }
    if h < 1 {
        return Err(Error::InvalidArgument(format!("tower height {h} must be positive")));
    }
    Ok(RelationTriple {
        family: RelationFamily::JordanTower,
        sub: SheafSum::single(tower_member(base, 1)?),
        total: SheafSum::single(tower_member(base, h + 1)?),
        quot: SheafSum::single(tower_member(base, h)?),
    })
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RelationBounds {
    pub r_max: i64,
    pub d_max: i64,
    pub n_max: i64,
    pub h_max: i64,
    pub points: Vec<TatePoint>,
}

/// All relation generators over the parameter grid.
///
/// Atiyah sequences are kept when both line bundles are honest twists:
/// `d + 3nr > r` and `3nr > −d`.
pub fn relation_suite(bounds: &RelationBounds) -> Result<Vec<RelationTriple>> {
    let mut out = Vec::new();
    let coprime: Vec<(i64, i64)> = (1..=bounds.r_max)
        .flat_map(|r| (-bounds.d_max..=bounds.d_max).map(move |d| (r, d)))
        .filter(|(r, d)| r.gcd(d) == 1)
        .collect();
    for p in &bounds.points {
        for &(r, d) in &coprime {
            let e = SheafSum::single(IndecSheaf::bundle(r, d, p.clone())?);
            out.push(RelationTriple {
                family: RelationFamily::Isomorphism,
                sub: SheafSum::zero(),
                total: e.clone(),
                quot: e,
            });
        }
        if bounds.r_max >= 1 {
            for d in -bounds.d_max..=bounds.d_max {
                for q in &bounds.points {
                    out.push(ses_divisor(d, p, q)?);
                }
            }
        }
        for &(r, d) in coprime.iter().filter(|(r, _)| *r >= 2) {
            for n in 1..=bounds.n_max {
                if d + 3 * n * r > r && 3 * n * r > -d {
                    out.push(ses_atiyah_coprime(r, d, p, n)?);
                }
            }
        }
        let mut bases: Vec<IndecSheaf> = vec![IndecSheaf::skyscraper(p.clone(), 1)?];
        for &(r, d) in &coprime {
            bases.push(IndecSheaf::bundle(r, d, p.clone())?);
        }
        for b in &bases {
            for h in 1..=bounds.h_max {
                out.push(ses_jordan_tower(b, h)?);
            }
        }
    }
    Ok(out)
}

/// Class of an object with an iterated cone decomposition into the given pieces.
pub fn linearization_sum(pieces: &[SheafSum]) -> Result<K0Class> {
    let mut acc = K0Class::zero();
    for p in pieces {
        acc = acc.add(&p.class()?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    const TOL: f64 = 1e-12;

    #[test]
    fn k0_examples() {
        let c = IndecSheaf::o_n_p0(2).unwrap().class().unwrap();
        assert!(c.approx_eq(&K0Class { rk: 1, deg: 2, pt: TatePoint::origin() }, TOL));
        let q = TatePoint::from_phase(rat(1, 3), rat(1, 5));
        let c = IndecSheaf::skyscraper(q.clone(), 1).unwrap().class().unwrap();
        assert!(c.approx_eq(&K0Class { rk: 0, deg: 1, pt: q.clone() }, TOL));
        let f = IndecSheaf::bundle(2, 1, q).unwrap();
        let s = SheafSum::from_terms(vec![(1, f.clone().shifted(1)), (1, f)]);
        assert!(s.class().unwrap().is_zero(TOL));
    }

    #[test]
    fn divisor_sequences() {
        let two_p0 = TatePoint::p0().pow(2).unwrap();
        let t = ses_divisor(2, &two_p0, &TatePoint::p0()).unwrap();
        assert!(t.total.class().unwrap().approx_eq(&K0Class { rk: 1, deg: 2, pt: TatePoint::origin() }, TOL));
        assert!(t.residual().unwrap().is_zero(TOL));
        let t = ses_divisor(5, &TatePoint::p0(), &TatePoint::origin()).unwrap();
        assert_eq!(t.sub.class().unwrap().deg + t.quot.class().unwrap().deg, 5);
    }

    #[test]
    fn atiyah_sequences() {
        let p = TatePoint::from_phase(rat(2, 7), rat(3, 11));
        for (r, d, n) in [(2, 1, 1), (3, 2, 1), (4, -1, 2)] {
            let t = ses_atiyah_coprime(r, d, &p, n).unwrap();
            let (s, q) = (t.sub.class().unwrap(), t.quot.class().unwrap());
            assert_eq!(s.deg + q.deg, d);
            assert_eq!(s.rk + q.rk, r);
            assert!(t.residual().unwrap().is_zero(TOL));
        }
        assert!(matches!(ses_atiyah_coprime(2, 0, &p, 1), Err(Error::BadGcd(_))));
    }

    #[test]
    fn jordan_towers() {
        let q = TatePoint::from_phase(rat(1, 6), rat(1, 4));
        let oq = IndecSheaf::skyscraper(q.clone(), 1).unwrap();
        let t = ses_jordan_tower(&oq, 1).unwrap();
        assert_eq!(t.total, SheafSum::single(IndecSheaf::skyscraper(q.clone(), 2).unwrap()));
        let o3q = IndecSheaf::skyscraper(q, 3).unwrap().class().unwrap();
        assert!(o3q.approx_eq(&oq.class().unwrap().scale(3).unwrap(), TOL));
        let e = IndecSheaf::bundle(2, 1, TatePoint::p0()).unwrap();
        let t = ses_jordan_tower(&e, 1).unwrap();
        assert_eq!(t.total.class().unwrap().rk, 4);
        assert!(t.residual().unwrap().is_zero(TOL));
        assert!(matches!(ses_jordan_tower(&IndecSheaf::bundle(2, 2, TatePoint::p0()).unwrap(), 1), Err(Error::BadBase(_))));
    }

    #[test]
    fn suite_and_linearization() {
        assert!(relation_suite(&RelationBounds::default()).unwrap().is_empty());
        let bounds = RelationBounds {
            r_max: 3,
            d_max: 3,
            n_max: 2,
            h_max: 3,
            points: vec![TatePoint::p0(), TatePoint::origin(), TatePoint::from_phase(rat(1, 3), rat(2, 5)), TatePoint::from_phase(rat(3, 4), rat(1, 7))],
        };
        let suite = relation_suite(&bounds).unwrap();
        assert!(!suite.is_empty());
        assert!(suite.iter().all(|t| t.residual().unwrap().is_zero(1e-9)));

        let p = TatePoint::from_phase(rat(1, 5), rat(1, 3));
        let t = ses_atiyah_coprime(3, 1, &p, 1).unwrap();
        let pieces = vec![t.sub.clone(), t.quot.clone()];
        assert!(linearization_sum(&pieces).unwrap().approx_eq(&t.total.class().unwrap(), 1e-12));
    }
}
