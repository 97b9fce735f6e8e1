//! The mirror dictionary between sheaves on the Tate curve and branes on the
//! torus, the induced map on K-theory classes, and the bridge between the
//! vanishing of a μ² product and the vanishing of a theta section.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::floer::{cf, mu2, FloerElement};
use crate::novikov::NovikovSeries;
use crate::rat::{frac, int, rat, Rational};
use crate::sheafk::{IndecSheaf, K0Class, SheafKind};
use crate::tate::{eval_section, vanishes_to, SectionCoeffs, TatePoint};
use crate::torus::{Brane, LocalSystem, Slope};

#[derive(Clone, Debug, PartialEq)]
pub struct MirrorImage {
    pub brane: Brane,
    /// `false` when only slope and rank are determined; shift and
    /// monodromy are then placeholders (shift 0, unipotent monodromy).
    pub anchored: bool,
}

const ANCHOR_TOL: f64 = 1e-12;

pub fn mirror_of_sheaf(s: &IndecSheaf) -> Result<MirrorImage> {
    let (brane, anchored) = match &s.kind {
        SheafKind::Skyscraper { pt, h } => {
            let e = LocalSystem::jordan(pt.unit().clone(), *h as usize)?;
            (Brane::new(Slope::new(0, -1)?, pt.x()).with_local_system(e), true)
        }
        SheafKind::Bundle { r: 1, d, det_pt } if det_pt.approx_eq(&TatePoint::p0().pow(*d)?, ANCHOR_TOL) => {
            (Brane::new(Slope::new(1, -d)?, int(0)), true)
        }
        SheafKind::Bundle { r, d, .. } => {
            let h = num_integer::gcd(*r, *d);
            let e = LocalSystem::jordan(NovikovSeries::one(), h as usize)?;
            (Brane::new(Slope::new(r / h, -d / h)?, int(0)).with_local_system(e), false)
        }
    };
    Ok(MirrorImage { brane: brane.shifted(s.shift), anchored })
}

/// K-theory class of a brane on an anchored slope: `L_{(1,−n)} ↦ (1, n, n⊙P₀)`
/// and `(L_{(0,−1),x}, E^h_M) ↦ (0, h, h⊙[−q^x M])`, with grading shifts and
/// orientation reversal accounted for.
pub fn theta_sharp(b: &Brane) -> Result<K0Class> {
    let v = b.slope();
    let u = if v.m() == 0 {
        Slope::new(0, -1)?
    } else if v.m().abs() == 1 {
        if v.m() > 0 {
            v
        } else {
            v.neg()
        }
    } else {
        return Err(Error::UnanchoredSlope(format!("slope {v}")));
    };
    // b = Std(u)[s]
    let alpha_gap = if u == v {
        0
    } else if v.in_upper_half() {
        -1
    } else {
        1
    };
    let s = alpha_gap - b.grading_offset();
    // monodromy is measured along the slope vector
    let reversed = v != u;
    let e = if reversed { b.local_system().reversed(None)? } else { b.local_system().clone() };

    let class = if u.m() == 0 {
        let mut acc = K0Class::zero();
        for blk in e.blocks() {
            let q = TatePoint::normalize(b.shift(), blk.eigenvalue.clone())?;
            let h = blk.size as i64;
            acc = acc.add(&K0Class { rk: 0, deg: h, pt: q.pow(h)? });
        }
        acc
    } else {
        if !frac(b.shift()).is_zero() || !e.is_trivial() {
            return Err(Error::UnanchoredSlope(format!(
                "slope {v} with nonzero shift or nontrivial local system"
            )));
        }
        let n = -u.n();
        K0Class { rk: 1, deg: n, pt: TatePoint::p0().pow(n)? }
    };
    if s.rem_euclid(2) == 1 {
        class.neg()
    } else {
        Ok(class)
    }
}

pub fn theta_sharp_sum(terms: &[(i64, Brane)]) -> Result<K0Class> {
    let mut acc = K0Class::zero();
    for (k, b) in terms {
        acc = acc.add(&theta_sharp(b)?.scale(*k)?);
    }
    Ok(acc)
}

/// `[O_{[−q⁰]}] − [O_{[−q^x]}]`, zero exactly when `x ∈ ℤ`.
pub fn zeta_injectivity_witness(x: Rational) -> Result<K0Class> {
    let a = TatePoint::from_phase(int(0), int(0));
    let b = TatePoint::from_phase(x, int(0));
    Ok(K0Class { rk: 0, deg: 0, pt: a.div(&b)? })
}

/// Marker position on the vertical brane at shift `x`: the midpoint of the
/// arc between its intersections with `L_{(1,0)}` (arc 0) and `L_{(1,2)}`
/// (arc `−2x`), on the side that gives the translate family its
/// alternating sign pattern.
pub fn step1_marker(x: Rational) -> Rational {
    let a = frac(int(-2) * x);
    if frac(x) < rat(1, 2) {
        a / int(2)
    } else {
        (a + int(1)) / int(2)
    }
}

/// The configuration `Y₀ = L_{(1,2)}`, `Y₁ = L_{(1,0)}`,
/// `Y₂ = (L_{(0,−1),x}, E¹_M)`.
#[derive(Clone, Debug)]
pub struct Step1Config {
    pub y0: Brane,
    pub y1: Brane,
    pub y2: Brane,
}

impl Step1Config {
    pub fn new(x: Rational, m: &NovikovSeries) -> Result<Self> {
        Ok(Step1Config {
            y0: Brane::from_ints(1, 2, int(0))?,
            y1: Brane::from_ints(1, 0, int(0))?,
            y2: Brane::from_ints(0, -1, x)?
                .with_local_system(LocalSystem::jordan(m.clone(), 1)?)
                .with_marker(step1_marker(x)),
        })
    }

    /// `c₁ = σ⁰c₁⁰ + σ¹c₁¹ ∈ CF(Y₀, Y₁)`, with `c₁⁰ = (0,0)` and `c₁¹ = (1/2,0)`.
    pub fn c1(&self, sigma: &SectionCoeffs) -> Result<FloerElement> {
        FloerElement::from_scalars(&cf(&self.y0, &self.y1)?, vec![sigma.sigma0.clone(), sigma.sigma1.clone()])
    }

    /// The generator of `CF(Y₂, Y₀)`.
    pub fn c3(&self) -> Result<FloerElement> {
        FloerElement::from_scalars(&cf(&self.y2, &self.y0)?, vec![NovikovSeries::one()])
    }

    /// Coefficient of `μ²(c₁, c₃)` on the generator of `CF(Y₂, Y₁)`.
    pub fn product(&self, sigma: &SectionCoeffs, cutoff: Rational) -> Result<NovikovSeries> {
        let out = mu2(&self.c1(sigma)?, &self.c3()?, cutoff)?;
        Ok(out.components()[0].get(0, 0).clone())
    }
}

/// Verdicts `(μ²(c₁, c₃) vanishes, s([−q^{−x}M^{−1}]) vanishes)`.
pub fn theta_floer_equiv(x: Rational, m: &NovikovSeries, sigma: &SectionCoeffs, cutoff: Rational) -> Result<(bool, bool)> {
    let config = Step1Config::new(x, m)?;
    let lhs = vanishes_to(&config.product(sigma, cutoff)?, cutoff);
    let conj = TatePoint::normalize(x, m.clone())?;
    let conj = TatePoint::normalize(-conj.x(), m.invert_to(cutoff + int(1))?)?;
    let rhs = vanishes_to(&eval_section(sigma, &conj, cutoff)?, cutoff);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::Complex;
    use crate::tate::section_through;

    const TOL: f64 = 1e-12;

    #[test]
    fn dictionary_rows() {
        let img = mirror_of_sheaf(&IndecSheaf::o_n_p0(3).unwrap()).unwrap();
        assert!(img.anchored);
        assert_eq!(img.brane, Brane::from_ints(1, -3, int(0)).unwrap());
        let img = mirror_of_sheaf(&IndecSheaf::skyscraper(TatePoint::p0(), 1).unwrap()).unwrap();
        assert_eq!(img.brane, Brane::from_ints(0, -1, rat(1, 2)).unwrap());
        let q = TatePoint::from_phase(rat(1, 3), rat(2, 5));
        let img = mirror_of_sheaf(&IndecSheaf::skyscraper(q.clone(), 2).unwrap()).unwrap();
        assert_eq!(img.brane.local_system().rank(), 2);
        assert_eq!(img.brane.shift(), rat(1, 3));
        let img = mirror_of_sheaf(&IndecSheaf::bundle(4, 2, q).unwrap()).unwrap();
        assert!(!img.anchored);
        assert_eq!((img.brane.slope(), img.brane.rank()), (Slope::new(2, -1).unwrap(), 2));
    }

    #[test]
    fn theta_sharp_examples() {
        let c = theta_sharp(&Brane::from_ints(1, 0, int(0)).unwrap()).unwrap();
        assert!(c.approx_eq(&K0Class { rk: 1, deg: 0, pt: TatePoint::origin() }, TOL));
        let c = theta_sharp(&Brane::from_ints(1, -2, int(0)).unwrap()).unwrap();
        assert!(c.approx_eq(&K0Class { rk: 1, deg: 2, pt: TatePoint::origin() }, TOL));
        let m = NovikovSeries::phase(rat(1, 8));
        let b = Brane::from_ints(0, -1, rat(1, 5)).unwrap().with_local_system(LocalSystem::jordan(m.clone(), 1).unwrap());
        let c = theta_sharp(&b).unwrap();
        assert!(c.approx_eq(&K0Class { rk: 0, deg: 1, pt: TatePoint::normalize(rat(1, 5), m).unwrap() }, TOL));
        assert!(theta_sharp(&b.clone().shifted(1)).unwrap().add(&c).is_zero(TOL));
        assert!(matches!(theta_sharp(&Brane::from_ints(2, 1, int(0)).unwrap()), Err(Error::UnanchoredSlope(_))));
    }

    #[test]
    fn reversed_vertical_brane_is_a_shift() {
        // L_{(0,1),x} with monodromy M is L_{(0,−1),x} with M⁻¹, shifted once
        let m = NovikovSeries::phase(rat(2, 9));
        let up = Brane::from_ints(0, 1, rat(1, 4)).unwrap().with_local_system(LocalSystem::jordan(m.clone(), 1).unwrap());
        let down = Brane::from_ints(0, -1, rat(1, 4))
            .unwrap()
            .with_local_system(LocalSystem::jordan(m.invert().unwrap(), 1).unwrap());
        assert!(theta_sharp(&up).unwrap().add(&theta_sharp(&down).unwrap()).is_zero(TOL));
    }

    #[test]
    fn witness() {
        let w = zeta_injectivity_witness(rat(1, 3)).unwrap();
        assert!(!w.is_zero(1e-9));
        assert_eq!(w.pt.x(), rat(2, 3));
        assert!(w.pt.unit().approx_eq(&NovikovSeries::constant(Complex::new(-1.0, 0.0)), TOL));
        assert!(zeta_injectivity_witness(int(0)).unwrap().is_zero(TOL));
        assert!(zeta_injectivity_witness(int(1)).unwrap().is_zero(TOL));
    }

    #[test]
    fn equivalence_verdicts() {
        let (x, m) = (rat(1, 4), NovikovSeries::phase(rat(1, 3)));
        let conj = TatePoint::normalize(-x, m.invert().unwrap()).unwrap();
        let sigma = section_through(&conj, int(6)).unwrap();
        assert_eq!(theta_floer_equiv(x, &m, &sigma, int(6)).unwrap(), (true, true));
        let sigma = SectionCoeffs::constant(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(theta_floer_equiv(x, &m, &sigma, int(6)).unwrap(), (false, false));
        assert!(matches!(theta_floer_equiv(int(0), &m, &sigma, int(6)), Err(Error::DegenerateConfiguration(_))));
    }
}
