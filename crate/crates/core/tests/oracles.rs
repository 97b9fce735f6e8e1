mod common;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use common::*;
use torushms::cobord::{rho, surgery, CurveClass};
use torushms::floer::{cf, mu2, FloerElement};
use torushms::novikov::NovikovSeries;
use torushms::torus::{index, intersections as lib_intersections, Brane, LocalSystem, Slope};
use torushms::Error;

const TOL: f64 = 1e-9;

fn brane(l: &Line) -> Brane {
    Brane::from_ints(l.v[0], l.v[1], l.shift)
        .unwrap()
        .with_grading_offset(l.offset)
        .with_marker(l.marker)
        .with_local_system(LocalSystem::jordan(NovikovSeries::phase(l.phase), 1).unwrap())
}

fn random_line(r: &mut rand_chacha::ChaCha8Rng, v: [i64; 2]) -> Line {
    Line {
        v,
        shift: random_unit_rational(r, 10),
        offset: r.gen_range(-2..=2),
        marker: q(r.gen_range(0..89), 89),
        phase: q(r.gen_range(-5..=5), 7),
    }
}

#[test]
fn intersections_and_index_match_lattice_solve() {
    let mut r = rng(3);
    let slopes = [[1, 0], [0, 1], [1, 2], [2, -1], [3, 1], [1, -3], [-1, 1], [2, 3]];
    for a in slopes {
        for b in slopes {
            if a[0] * b[1] - a[1] * b[0] == 0 {
                continue;
            }
            let (la, lb) = (random_line(&mut r, a), random_line(&mut r, b));
            let (ba, bb) = (brane(&la), brane(&lb));
            let mut got: Vec<Pt> = lib_intersections(&ba, &bb).unwrap().iter().map(|p| p.coords).collect();
            let mut want = intersections(&la, &lb);
            got.sort();
            want.sort();
            assert_eq!(got, want, "slopes {a:?} {b:?}");
            assert_eq!(index(&ba, &bb).unwrap(), float_index(&la, &lb), "slopes {a:?} {b:?}");
        }
    }
}

#[test]
fn mu2_matches_brute_force_triangles() {
    let cutoff = q(5, 1);
    let triples = [[[0, 1], [1, 2], [1, 0]], [[1, 2], [1, 1], [1, 0]], [[1, 1], [1, -1], [1, -3]], [[0, 1], [2, 1], [1, -1]]];
    let mut r = rng(21);
    let mut terms = 0;
    for tri in triples {
        for _ in 0..3 {
            let lines: Vec<Line> = tri.iter().map(|v| random_line(&mut r, *v)).collect();
            let bs: Vec<Brane> = lines.iter().map(brane).collect();
            let (s01, s12) = (cf(&bs[0], &bs[1]).unwrap(), cf(&bs[1], &bs[2]).unwrap());
            let mut rc = || C::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let c1: Vec<C> = s01.generators.iter().map(|_| rc()).collect();
            let c2: Vec<C> = s12.generators.iter().map(|_| rc()).collect();
            let p1 = FloerElement::from_scalars(&s01, c1.iter().map(|c| NovikovSeries::constant(*c)).collect()).unwrap();
            let p2 = FloerElement::from_scalars(&s12, c2.iter().map(|c| NovikovSeries::constant(*c)).collect()).unwrap();
            let got = match mu2(&p2, &p1, cutoff) {
                Err(Error::DegenerateConfiguration(_) | Error::MarkerCollision(_)) => continue,
                other => other.unwrap(),
            };
            let phi1: HashMap<Pt, C> = s01.generators.iter().map(|g| g.coords).zip(c1).collect();
            let phi2: HashMap<Pt, C> = s12.generators.iter().map(|g| g.coords).zip(c2).collect();
            let want = brute_mu2(&lines[0], &lines[1], &lines[2], &phi1, &phi2, cutoff);
            for (g, m) in got.space().generators.iter().zip(got.components()) {
                let w: BTreeMap<Q, C> = want[&g.coords].iter().filter(|(_, c)| c.norm() > 1e-10).map(|(e, c)| (*e, *c)).collect();
                let s: BTreeMap<Q, C> =
                    m.get(0, 0).terms().iter().filter(|(e, c)| *e < cutoff && c.norm() > 1e-10).cloned().collect();
                assert_eq!(s.keys().collect::<Vec<_>>(), w.keys().collect::<Vec<_>>(), "slopes {tri:?}");
                for (e, c) in &s {
                    assert!((c - w[e]).norm() < TOL, "slopes {tri:?}, exponent {e}");
                }
                terms += w.len();
            }
        }
    }
    assert!(terms > 0);
}

#[test]
fn rho_agrees_with_every_farey_decomposition() {
    let mut memo = HashMap::new();
    for m in -7i64..=7 {
        for n in -7i64..=7 {
            let Ok(s) = Slope::new(m, n) else { continue };
            let want = farey_rho([m, n], &mut memo).unwrap_or_else(|| panic!("Farey paths disagree at ({m},{n})"));
            assert_eq!(rho(&s), want, "({m},{n})");
        }
    }
}

#[test]
fn surgery_handle_matches_staircase_area() {
    let zero = q(0, 1);
    for (a, b) in [([1, 0], [0, 1]), ([0, 1], [1, 0]), ([1, 1], [1, 2]), ([2, 1], [1, 1]), ([1, -1], [0, 1]), ([3, 2], [1, 1])] {
        let c0 = CurveClass::new(Slope::new(a[0], a[1]).unwrap(), zero);
        let c1 = CurveClass::new(Slope::new(b[0], b[1]).unwrap(), zero);
        let s = surgery(&c0, &c1).unwrap();
        let p1 = [qi(a[0]), qi(a[1])];
        let p2 = [qi(a[0] + b[0]), qi(a[1] + b[1])];
        assert_eq!(s.flux, staircase_flux(&[[zero, zero], p1, p2]), "{a:?} # {b:?}");
    }
}
