//! Command-line front end.
//!
//! Every verb prints one JSON document with `--json` (keys sorted, rationals
//! as `{num, den}`, complex numbers as `{re, im}`, series as lists of
//! `{num, den, re, im}` terms) and a short human summary otherwise. Exit
//! codes: 0 success, 1 usage or parse error, 2 domain error. Errors are
//! reported as `{"error": message, "kind": name, "detail": ...}`.
//!
//! Literal syntax is described in [`crate::expr`]. Cochain elements are given
//! as comma-separated complex coefficients `a`, `a+bi`, `bi`, one per
//! generator in the order printed by `cf`; a coefficient multiplies the
//! matrix with ones on the diagonal.

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::cobord::{normal_form, sum_normal_form, CobordClass};
use crate::error::Error;
use crate::expr::{parse_expr, Expr, ParseError};
use crate::floer::{assoc_defect, cf, mu2, triangles, CFSpace, FloerElement};
use crate::json;
use crate::matrix::SeriesMatrix;
use crate::mirror::{mirror_of_sheaf, theta_sharp_sum, zeta_injectivity_witness};
use crate::novikov::{Complex, NovikovSeries};
use crate::rat::{fmt_rational, int, parse_rational, Rational};
use crate::sheafk::{relation_suite, RelationBounds};
use crate::tate::{eval_section, section_through, theta_eval, vanishes_to, TatePoint, ThetaKind};

#[derive(Parser, Debug)]
#[command(name = "torushms", version, about = "Fukaya category of the torus and its mirror on the Tate curve")]
pub struct Cli {
    /// Truncation exponent for all series, as p/q.
    #[arg(long, global = true, default_value = "8")]
    pub cutoff: String,
    /// Mantissa bits kept in printed coefficients (computation is in f64).
    #[arg(long, global = true, default_value_t = 64)]
    pub prec: u32,
    /// Tolerance for numerical equality verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Emit JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generators and graded dimensions of CF(L0, L1).
    Cf {
        #[arg(long)]
        l0: String,
        #[arg(long)]
        l1: String,
    },
    /// The product mu2(phi2, phi1) for phi1 in CF(L0,L1), phi2 in CF(L1,L2).
    Mu2 {
        #[arg(long)]
        l0: String,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        /// Coefficients of phi1 (default: 1 on every generator).
        #[arg(long)]
        phi1: Option<String>,
        /// Coefficients of phi2 (default: 1 on every generator).
        #[arg(long)]
        phi2: Option<String>,
        /// Also list the contributing triangles.
        #[arg(long)]
        triangles: bool,
    },
    /// Residual of the signed associativity relation for a, b, c.
    Assoc {
        #[arg(long)]
        l0: String,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        #[arg(long)]
        l3: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
    /// A theta function evaluated at a point.
    Theta {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        kind: u8,
        #[arg(long)]
        point: String,
    },
    /// The section of O(2P0) vanishing at a point, optionally evaluated elsewhere.
    Section {
        #[arg(long)]
        through: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// K-theory class of a sum of sheaves.
    K0 {
        #[arg(long)]
        sheaf: String,
    },
    /// Check the K-theory relations over a parameter grid.
    Relations {
        #[arg(long, default_value_t = 3)]
        r_max: i64,
        #[arg(long, default_value_t = 3)]
        d_max: i64,
        #[arg(long, default_value_t = 2)]
        n_max: i64,
        #[arg(long, default_value_t = 3)]
        h_max: i64,
        /// Points to use (repeatable; default the origin, P0 and pt(x=1/3, phase=1/5)).
        #[arg(long)]
        point: Vec<String>,
    },
    /// Mirror brane of an indecomposable sheaf.
    Mirror {
        #[arg(long)]
        sheaf: String,
    },
    /// K-theory class of a sum of anchored branes.
    ThetaSharp {
        #[arg(long)]
        brane: String,
    },
    /// A nonzero K-theory class killed by the forgetful map to cobordism.
    Witness {
        #[arg(long)]
        x: String,
    },
    /// Cobordism normal form of a sum of branes.
    CobNf {
        #[arg(long)]
        brane: String,
    },
    /// Whether two sums of branes have the same cobordism class.
    CobCheck {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
}

enum Failure {
    Usage(String),
    Parse { input: String, err: ParseError },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = std::result::Result<(Value, String), Failure>;

struct Ctx {
    cutoff: Rational,
    tol: f64,
}

fn parse(text: &str) -> std::result::Result<Expr, Failure> {
    parse_expr(text).map_err(|err| Failure::Parse { input: text.to_string(), err })
}

fn parse_rat_arg(name: &str, text: &str) -> std::result::Result<Rational, Failure> {
    parse_rational(text.trim()).ok_or_else(|| Failure::Usage(format!("--{name}: expected a rational p/q, got {text:?}")))
}

fn parse_complex(text: &str) -> Option<Complex> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().ok().map(|re| Complex::new(re, 0.0));
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().ok()?,
    };
    Some(Complex::new(re, im))
}

fn unit_matrix(rows: usize, cols: usize, c: Complex) -> SeriesMatrix {
    SeriesMatrix::from_fn(rows, cols, |i, j| if i == j { NovikovSeries::constant(c) } else { NovikovSeries::zero() })
}

fn element(space: &CFSpace, name: &str, coeffs: Option<&str>) -> std::result::Result<FloerElement, Failure> {
    let n = space.generators.len();
    let cs: Vec<Complex> = match coeffs {
        None => vec![Complex::new(1.0, 0.0); n],
        Some(text) => text
            .split(',')
            .map(|c| parse_complex(c).ok_or_else(|| Failure::Usage(format!("--{name}: bad coefficient {c:?}"))))
            .collect::<std::result::Result<_, _>>()?,
    };
    if cs.len() != n {
        return Err(Failure::Usage(format!("--{name}: {} coefficients given, CF has {n} generators", cs.len())));
    }
    let (r, c) = space.hom_shape();
    Ok(FloerElement::new(space, cs.into_iter().map(|z| unit_matrix(r, c, z)).collect())?)
}

fn element_json(e: &FloerElement) -> Value {
    Value::Array(
        e.space()
            .generators
            .iter()
            .zip(e.components())
            .map(|(g, m)| json!({ "point": json::point(g.coords), "index": g.index, "coeff": json::matrix(m) }))
            .collect(),
    )
}

fn element_text(e: &FloerElement) -> String {
    let mut s = String::new();
    for (g, m) in e.space().generators.iter().zip(e.components()) {
        s.push_str(&format!("({}, {}) [deg {}]:", fmt_rational(g.coords[0]), fmt_rational(g.coords[1]), g.index));
        if m.rows() == 1 && m.cols() == 1 {
            s.push_str(&format!(" {}\n", m.get(0, 0)));
        } else {
            s.push('\n');
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    s.push_str(&format!("  [{i},{j}] {}\n", m.get(i, j)));
                }
            }
        }
    }
    s
}

fn k0_json(c: &crate::sheafk::K0Class) -> Value {
    c.to_json()
}

fn k0_text(c: &crate::sheafk::K0Class) -> String {
    format!("rk {} deg {} point x={} unit {}", c.rk, c.deg, fmt_rational(c.pt.x()), c.pt.unit())
}

fn cob_json(c: &CobordClass) -> Value {
    json!({ "zeta": json::rational(c.zeta), "hom": c.hom })
}

fn run_cmd(cmd: &Cmd, ctx: &Ctx) -> Out {
    match cmd {
        Cmd::Cf { l0, l1 } => {
            let space = cf(&parse(l0)?.brane()?, &parse(l1)?.brane()?)?;
            let (r, c) = space.hom_shape();
            let gens: Vec<Value> =
                space.generators.iter().map(|g| json!({ "point": json::point(g.coords), "index": g.index })).collect();
            let dims: serde_json::Map<String, Value> =
                space.graded_dims().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let mut text = format!("{} generators, degree {}, Hom shape {}x{}\n", space.generators.len(), space.degree(), r, c);
            for g in &space.generators {
                text.push_str(&format!("  ({}, {})\n", fmt_rational(g.coords[0]), fmt_rational(g.coords[1])));
            }
            Ok((json!({ "generators": gens, "degree": space.degree(), "hom_shape": [r, c], "graded_dims": dims }), text))
        }
        Cmd::Mu2 { l0, l1, l2, phi1, phi2, triangles: dump } => {
            let (b0, b1, b2) = (parse(l0)?.brane()?, parse(l1)?.brane()?, parse(l2)?.brane()?);
            let p1 = element(&cf(&b0, &b1)?, "phi1", phi1.as_deref())?;
            let p2 = element(&cf(&b1, &b2)?, "phi2", phi2.as_deref())?;
            let out = mu2(&p2, &p1, ctx.cutoff)?;
            let mut v = json!({ "result": element_json(&out), "cutoff": json::rational(ctx.cutoff) });
            let mut text = element_text(&out);
            if *dump {
                let bound = ctx.cutoff - p1.valuation_lower_bound().unwrap_or(int(0)) - p2.valuation_lower_bound().unwrap_or(int(0));
                let tris = triangles(&b0, &b1, &b2, bound)?;
                text.push_str(&format!("{} triangles below area {}\n", tris.len(), fmt_rational(bound)));
                v["triangles"] = serde_json::to_value(&tris).expect("triangles serialize");
            }
            Ok((v, text))
        }
        Cmd::Assoc { l0, l1, l2, l3, a, b, c } => {
            let bs = [l0, l1, l2, l3].iter().map(|s| parse(s)?.brane().map_err(Failure::from)).collect::<std::result::Result<Vec<_>, _>>()?;
            let ea = element(&cf(&bs[0], &bs[1])?, "a", a.as_deref())?;
            let eb = element(&cf(&bs[1], &bs[2])?, "b", b.as_deref())?;
            let ec = element(&cf(&bs[2], &bs[3])?, "c", c.as_deref())?;
            let d = assoc_defect(&ea, &eb, &ec, ctx.cutoff)?;
            let ok = d <= ctx.tol;
            Ok((json!({ "defect": d, "within_tol": ok }), format!("defect {d:e} ({})\n", if ok { "ok" } else { "exceeds tolerance" })))
        }
        Cmd::Theta { kind, point } => {
            let p = parse(point)?.point()?;
            let k = ThetaKind::from_index(*kind).expect("range checked by clap");
            let s = theta_eval(k, &p, ctx.cutoff)?;
            Ok((json!({ "value": json::series_with_cutoff(&s) }), format!("{s}\n")))
        }
        Cmd::Section { through, at } => {
            let q = parse(through)?.point()?;
            let sigma = section_through(&q, ctx.cutoff)?;
            let mut v = json!({ "sigma0": json::series_with_cutoff(&sigma.sigma0), "sigma1": json::series_with_cutoff(&sigma.sigma1) });
            let mut text = format!("sigma0 = {}\nsigma1 = {}\n", sigma.sigma0, sigma.sigma1);
            if let Some(at) = at {
                let p = parse(at)?.point()?;
                let val = eval_section(&sigma, &p, ctx.cutoff)?;
                let vanishes = vanishes_to(&val, ctx.cutoff);
                text.push_str(&format!("value = {val}\nvanishes: {vanishes}\n"));
                v["value"] = json::series_with_cutoff(&val);
                v["vanishes"] = json!(vanishes);
            }
            Ok((v, text))
        }
        Cmd::K0 { sheaf } => {
            let c = parse(sheaf)?.sheaf_sum()?.class()?;
            Ok((k0_json(&c), format!("{}\n", k0_text(&c))))
        }
        Cmd::Relations { r_max, d_max, n_max, h_max, point } => {
            let points = if point.is_empty() {
                vec![TatePoint::origin(), TatePoint::p0(), TatePoint::from_phase(Rational::new(1, 3), Rational::new(1, 5))]
            } else {
                point.iter().map(|p| parse(p)?.point().map_err(Failure::from)).collect::<std::result::Result<_, _>>()?
            };
            let bounds = RelationBounds { r_max: *r_max, d_max: *d_max, n_max: *n_max, h_max: *h_max, points };
            let suite = relation_suite(&bounds)?;
            let mut failed = 0usize;
            for t in &suite {
                if !t.residual()?.is_zero(ctx.tol) {
                    failed += 1;
                }
            }
            Ok((
                json!({ "checked": suite.len(), "failed": failed }),
                format!("{} relations checked, {} failed\n", suite.len(), failed),
            ))
        }
        Cmd::Mirror { sheaf } => {
            let img = mirror_of_sheaf(&parse(sheaf)?.sheaf()?)?;
            let b = &img.brane;
            let blocks: Vec<Value> = b
                .local_system()
                .blocks()
                .iter()
                .map(|blk| json!({ "eigenvalue": json::series(&blk.eigenvalue), "size": blk.size }))
                .collect();
            let v = json!({
                "slope": [b.slope().m(), b.slope().n()],
                "shift": json::rational(b.shift()),
                "grading_offset": b.grading_offset(),
                "local_system": blocks,
                "anchored": img.anchored,
            });
            let text = format!(
                "slope ({},{}) shift {} grading offset {} rank {}{}\n",
                b.slope().m(),
                b.slope().n(),
                fmt_rational(b.shift()),
                b.grading_offset(),
                b.rank(),
                if img.anchored { "" } else { " (slope and rank only)" }
            );
            Ok((v, text))
        }
        Cmd::ThetaSharp { brane } => {
            let c = theta_sharp_sum(&parse(brane)?.brane_sum()?)?;
            Ok((k0_json(&c), format!("{}\n", k0_text(&c))))
        }
        Cmd::Witness { x } => {
            let x = parse_rat_arg("x", x)?;
            let c = zeta_injectivity_witness(x)?;
            let zero = c.is_zero(ctx.tol);
            let mut v = k0_json(&c);
            v["is_zero"] = json!(zero);
            v["cobordism_class"] = cob_json(&CobordClass::zero());
            Ok((v, format!("{} ({})\n", k0_text(&c), if zero { "zero" } else { "nonzero" })))
        }
        Cmd::CobNf { brane } => {
            let terms = parse(brane)?.brane_sum()?;
            let c = sum_normal_form(&terms);
            let mut v = cob_json(&c);
            v["terms"] = Value::Array(terms.iter().map(|(k, b)| json!({ "coeff": k, "class": cob_json(&normal_form(b)) })).collect());
            Ok((v, format!("{c}\n")))
        }
        Cmd::CobCheck { lhs, rhs } => {
            let l = sum_normal_form(&parse(lhs)?.brane_sum()?);
            let r = sum_normal_form(&parse(rhs)?.brane_sum()?);
            let eq = l == r;
            Ok((json!({ "lhs": cob_json(&l), "rhs": cob_json(&r), "equal": eq }), format!("{l} vs {r}: {}\n", if eq { "equal" } else { "different" })))
        }
    }
}

/// Rounds a float to `bits` significant bits.
fn round_bits(x: f64, bits: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if bits >= 53 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log2().floor() as i32;
    let scale = 2f64.powi(bits as i32 - 1 - e);
    (x * scale).round() / scale
}

fn round_value(v: &mut Value, bits: u32) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_bits(n.as_f64().expect("f64"), bits);
            *v = json!(r);
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_value(x, bits)),
        Value::Object(o) => o.values_mut().for_each(|x| round_value(x, bits)),
        _ => {}
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("TORUSHMS_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        // fails only if the pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the CLI on `args`; returns the exit code and what to print on stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (1, String::new(), text) };
        }
    };
    configure_threads();
    let json_out = cli.json;
    let result = (|| {
        let cutoff = parse_rat_arg("cutoff", &cli.cutoff)?;
        if cutoff <= int(0) {
            return Err(Failure::Usage("--cutoff must be positive".into()));
        }
        if cli.tol.is_nan() || cli.tol <= 0.0 {
            return Err(Failure::Usage("--tol must be positive".into()));
        }
        if cli.prec == 0 {
            return Err(Failure::Usage("--prec must be positive".into()));
        }
        run_cmd(&cli.cmd, &Ctx { cutoff, tol: cli.tol })
    })();
    match result {
        Ok((mut v, text)) => {
            if json_out {
                round_value(&mut v, cli.prec);
                (0, format!("{}\n", serde_json::to_string_pretty(&v).expect("json")), String::new())
            } else {
                (0, text, String::new())
            }
        }
        Err(f) => {
            let (code, v) = match f {
                Failure::Usage(msg) => (1, json!({ "error": msg, "kind": "Usage", "detail": Value::Null })),
                Failure::Parse { input, err } => (
                    1,
                    json!({
                        "error": err.to_string(),
                        "kind": "ParseError",
                        "detail": { "input": input, "column": err.column, "expected": err.expected },
                    }),
                ),
                Failure::Domain(e) => (2, json!({ "error": e.to_string(), "kind": e.kind(), "detail": Value::Null })),
            };
            let text = if json_out {
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            } else {
                format!("error: {}\n", v["error"].as_str().unwrap_or_default())
            };
            (code, String::new(), text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2"), Some(Complex::new(2.0, 0.0)));
        assert_eq!(parse_complex("1.5-2i"), Some(Complex::new(1.5, -2.0)));
        assert_eq!(parse_complex(" -i "), Some(Complex::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3+1e2i"), Some(Complex::new(1e-3, 100.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_bits(1.0 / 3.0, 64), 1.0 / 3.0);
        assert_eq!(round_bits(0.3, 2), 0.25);
        assert_eq!(round_bits(-5.0, 1), -4.0);
    }

    #[test]
    fn exit_codes() {
        let (c, out, _) = run(["torushms", "cf", "--l0", "L(1,2;0)", "--l1", "L(1,0;0)", "--json"]);
        assert_eq!(c, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["generators"].as_array().unwrap().len(), 2);
        assert_eq!(v["degree"], 0);
        let (c, _, err) = run(["torushms", "--json", "cf", "--l0", "L(1,0;0)", "--l1", "L(1,0;1/3)"]);
        assert_eq!(c, 2);
        let v: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["kind"], "NonTransverse");
        let (c, _, err) = run(["torushms", "--json", "cf", "--l0", "L(1,0", "--l1", "L(1,0;0)"]);
        assert_eq!(c, 1);
        let v: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["detail"]["column"], 6);
        assert_eq!(run(["torushms", "frobnicate"]).0, 1);
        assert_eq!(run(["torushms", "--cutoff", "0", "witness", "--x", "1/3"]).0, 1);
    }
}
