//! Text literals for branes, points, sheaves and their formal sums.
//!
//! ```text
//! sum      = [ "-" ] term { ( "+" | "-" ) term } ;
//! term     = [ uint "*" ] atom ;
//! atom     = brane | point | sheaf ;
//! brane    = "L(" int "," int ";" rat ")" [ shift ] [ "{" option { "," option } "}" ] ;
//! option   = "M=phase" rat | "rank" uint | "marker" rat ;
//! point    = "pt(" "x=" rat "," "phase=" rat ")" ;
//! sheaf    = ( "O(" int "P0)" | "O(D:" divisor ")" | "Sky(" point "," uint ")"
//!            | "Bun(" uint "," int "," point ")" ) [ shift ] ;
//! divisor  = [ "-" ] point { ( "+" | "-" ) point } ;
//! shift    = "[" int "]" ;
//! rat      = int [ "/" uint ] ;
//! int      = [ "-" ] uint ;
//! ```
//!
//! Whitespace is allowed between tokens. `M=phase p/q` is the monodromy
//! eigenvalue `e^{2πi p/q}`, `rank h` the size of its Jordan block and
//! `marker a` the marker position along the curve. `pt(x=a, phase=b)` is the
//! point `[−q^a e^{2πi b}]`. The printer emits the canonical form, which
//! parses back to the same tree.

use std::fmt;

use crate::error::{Error, Result};
use crate::rat::{fmt_rational, int, Rational};
use crate::sheafk::{IndecSheaf, SheafSum};
use crate::tate::TatePoint;
use crate::torus::{Brane, LocalSystem, Slope};
use crate::novikov::NovikovSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based column of the offending character (one past the end at EOF).
    pub column: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: expected {}", self.column, self.expected.join(" or "))
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointLit {
    pub x: Rational,
    pub phase: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraneLit {
    pub m: i64,
    pub n: i64,
    pub x: Rational,
    pub shift: i64,
    pub phase: Option<Rational>,
    pub rank: Option<i64>,
    pub marker: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafBody {
    ONP0(i64),
    Divisor(Vec<(i64, PointLit)>),
    Sky(PointLit, i64),
    Bun(i64, i64, PointLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafLit {
    pub body: SheafBody,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Brane(BraneLit),
    Point(PointLit),
    Sheaf(SheafLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(i64, Atom)>,
}

pub fn parse_expr(text: &str) -> std::result::Result<Expr, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err(&["\"+\"", "\"-\"", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, expected: &[&str]) -> ParseError {
        let column = std::str::from_utf8(&self.s[..self.pos.min(self.s.len())]).map(|p| p.chars().count()).unwrap_or(self.pos) + 1;
        ParseError { column, expected: expected.iter().map(|e| e.to_string()).collect() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn looking_at(&mut self, tok: &str) -> bool {
        self.ws();
        self.s[self.pos..].starts_with(tok.as_bytes())
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.looking_at(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> std::result::Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&[&format!("\"{tok}\"")]))
        }
    }

    fn uint(&mut self) -> std::result::Result<i64, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(&["digit"]));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| {
            self.pos = start;
            self.err(&["integer in range"])
        })
    }

    fn int(&mut self) -> std::result::Result<i64, ParseError> {
        let neg = self.eat("-");
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn rat(&mut self) -> std::result::Result<Rational, ParseError> {
        let num = self.int()?;
        if self.eat("/") {
            let at = self.pos;
            let den = self.uint()?;
            if den == 0 {
                self.pos = at;
                self.ws();
                return Err(self.err(&["nonzero denominator"]));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(int(num))
        }
    }

    fn shift(&mut self) -> std::result::Result<i64, ParseError> {
        if self.eat("[") {
            let k = self.int()?;
            self.expect("]")?;
            Ok(k)
        } else {
            Ok(0)
        }
    }

    fn sum(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            let (c, a) = self.term()?;
            terms.push((sign * c, a));
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> std::result::Result<(i64, Atom), ParseError> {
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            let c = self.uint()?;
            self.expect("*")?;
            Ok((c, self.atom()?))
        } else {
            Ok((1, self.atom()?))
        }
    }

    fn atom(&mut self) -> std::result::Result<Atom, ParseError> {
        if self.looking_at("L(") {
            self.brane().map(Atom::Brane)
        } else if self.looking_at("pt(") {
            self.point().map(Atom::Point)
        } else if self.looking_at("O(") || self.looking_at("Sky(") || self.looking_at("Bun(") {
            self.sheaf().map(Atom::Sheaf)
        } else {
            Err(self.err(&["\"L(\"", "\"pt(\"", "\"O(\"", "\"Sky(\"", "\"Bun(\"", "integer"]))
        }
    }

    fn brane(&mut self) -> std::result::Result<BraneLit, ParseError> {
        self.expect("L(")?;
        let m = self.int()?;
        self.expect(",")?;
        let n = self.int()?;
        self.expect(";")?;
        let x = self.rat()?;
        self.expect(")")?;
        let shift = self.shift()?;
        let mut b = BraneLit { m, n, x, shift, phase: None, rank: None, marker: None };
        if self.eat("{") {
            loop {
                if b.phase.is_none() && self.eat("M=phase") {
                    b.phase = Some(self.rat()?);
                } else if b.rank.is_none() && self.eat("rank") {
                    b.rank = Some(self.uint()?);
                } else if b.marker.is_none() && self.eat("marker") {
                    b.marker = Some(self.rat()?);
                } else {
                    let mut exp = Vec::new();
                    if b.phase.is_none() {
                        exp.push("\"M=phase\"");
                    }
                    if b.rank.is_none() {
                        exp.push("\"rank\"");
                    }
                    if b.marker.is_none() {
                        exp.push("\"marker\"");
                    }
                    return Err(self.err(&exp));
                }
                if !self.eat(",") {
                    break;
                }
            }
            if !self.eat("}") {
                return Err(self.err(&["\",\"", "\"}\""]));
            }
        }
        Ok(b)
    }

    fn point(&mut self) -> std::result::Result<PointLit, ParseError> {
        self.expect("pt(")?;
        self.expect("x=")?;
        let x = self.rat()?;
        self.expect(",")?;
        self.expect("phase=")?;
        let phase = self.rat()?;
        self.expect(")")?;
        Ok(PointLit { x, phase })
    }

    fn sheaf(&mut self) -> std::result::Result<SheafLit, ParseError> {
        let body = if self.eat("O(") {
            if self.eat("D:") {
                let mut pts = Vec::new();
                let mut sign = if self.eat("-") { -1 } else { 1 };
                loop {
                    pts.push((sign, self.point()?));
                    if self.eat("+") {
                        sign = 1;
                    } else if self.eat("-") {
                        sign = -1;
                    } else {
                        break;
                    }
                }
                if !self.eat(")") {
                    return Err(self.err(&["\"+\"", "\"-\"", "\")\""]));
                }
                SheafBody::Divisor(pts)
            } else if matches!(self.peek(), Some(b'-' | b'0'..=b'9')) {
                let n = self.int()?;
                self.expect("P0)")?;
                SheafBody::ONP0(n)
            } else {
                return Err(self.err(&["integer", "\"D:\""]));
            }
        } else if self.eat("Sky(") {
            let p = self.point()?;
            self.expect(",")?;
            let h = self.uint()?;
            self.expect(")")?;
            SheafBody::Sky(p, h)
        } else {
            self.expect("Bun(")?;
            let r = self.uint()?;
            self.expect(",")?;
            let d = self.int()?;
            self.expect(",")?;
            let p = self.point()?;
            self.expect(")")?;
            SheafBody::Bun(r, d, p)
        };
        Ok(SheafLit { body, shift: self.shift()? })
    }
}

fn fmt_shift(f: &mut fmt::Formatter<'_>, k: i64) -> fmt::Result {
    if k != 0 {
        write!(f, "[{k}]")?;
    }
    Ok(())
}

impl fmt::Display for PointLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pt(x={}, phase={})", fmt_rational(self.x), fmt_rational(self.phase))
    }
}

impl fmt::Display for BraneLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{};{})", self.m, self.n, fmt_rational(self.x))?;
        fmt_shift(f, self.shift)?;
        let mut opts = Vec::new();
        if let Some(p) = self.phase {
            opts.push(format!("M=phase {}", fmt_rational(p)));
        }
        if let Some(h) = self.rank {
            opts.push(format!("rank {h}"));
        }
        if let Some(a) = self.marker {
            opts.push(format!("marker {}", fmt_rational(a)));
        }
        if !opts.is_empty() {
            write!(f, "{{{}}}", opts.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for SheafLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            SheafBody::ONP0(n) => write!(f, "O({n}P0)")?,
            SheafBody::Divisor(pts) => {
                write!(f, "O(D: ")?;
                for (i, (s, p)) in pts.iter().enumerate() {
                    match (i, *s < 0) {
                        (0, false) => write!(f, "{p}")?,
                        (0, true) => write!(f, "-{p}")?,
                        (_, false) => write!(f, " + {p}")?,
                        (_, true) => write!(f, " - {p}")?,
                    }
                }
                write!(f, ")")?;
            }
            SheafBody::Sky(p, h) => write!(f, "Sky({p}, {h})")?,
            SheafBody::Bun(r, d, p) => write!(f, "Bun({r},{d},{p})")?,
        }
        fmt_shift(f, self.shift)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Brane(b) => b.fmt(f),
            Atom::Point(p) => p.fmt(f),
            Atom::Sheaf(s) => s.fmt(f),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, a)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            match (i, *c < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl PointLit {
    pub fn to_point(&self) -> TatePoint {
        TatePoint::from_phase(self.x, self.phase)
    }
}

impl BraneLit {
    pub fn to_brane(&self) -> Result<Brane> {
        let rank = self.rank.unwrap_or(1);
        if rank < 1 {
            return Err(Error::InvalidArgument("local system rank must be positive".into()));
        }
        let eigen = match self.phase {
            Some(p) => NovikovSeries::phase(p),
            None => NovikovSeries::one(),
        };
        let mut b = Brane::new(Slope::new(self.m, self.n)?, self.x)
            .with_local_system(LocalSystem::jordan(eigen, rank as usize)?)
            .shifted(self.shift);
        if let Some(a) = self.marker {
            b = b.with_marker(a);
        }
        Ok(b)
    }
}

impl SheafLit {
    pub fn to_sheaf(&self) -> Result<IndecSheaf> {
        let s = match &self.body {
            SheafBody::ONP0(n) => IndecSheaf::o_n_p0(*n)?,
            SheafBody::Divisor(pts) => {
                let d: Vec<(i64, TatePoint)> = pts.iter().map(|(s, p)| (*s, p.to_point())).collect();
                IndecSheaf::line_bundle(&d)?
            }
            SheafBody::Sky(p, h) => IndecSheaf::skyscraper(p.to_point(), *h)?,
            SheafBody::Bun(r, d, p) => IndecSheaf::bundle(*r, *d, p.to_point())?,
        };
        Ok(s.shifted(self.shift))
    }
}

fn kind_mismatch(what: &str, a: &Atom) -> Error {
    Error::InvalidArgument(format!("expected {what}, found {a}"))
}

impl Expr {
    fn single(&self) -> Result<&Atom> {
        match self.terms.as_slice() {
            [(1, a)] => Ok(a),
            _ => Err(Error::InvalidArgument(format!("expected a single literal, found {self}"))),
        }
    }

    pub fn brane(&self) -> Result<Brane> {
        match self.single()? {
            Atom::Brane(b) => b.to_brane(),
            a => Err(kind_mismatch("a brane", a)),
        }
    }

    pub fn point(&self) -> Result<TatePoint> {
        match self.single()? {
            Atom::Point(p) => Ok(p.to_point()),
            a => Err(kind_mismatch("a point", a)),
        }
    }

    pub fn sheaf(&self) -> Result<IndecSheaf> {
        match self.single()? {
            Atom::Sheaf(s) => s.to_sheaf(),
            a => Err(kind_mismatch("a sheaf", a)),
        }
    }

    pub fn brane_sum(&self) -> Result<Vec<(i64, Brane)>> {
        self.terms
            .iter()
            .map(|(c, a)| match a {
                Atom::Brane(b) => Ok((*c, b.to_brane()?)),
                a => Err(kind_mismatch("a brane", a)),
            })
            .collect()
    }

    pub fn sheaf_sum(&self) -> Result<SheafSum> {
        let mut out = SheafSum::zero();
        for (c, a) in &self.terms {
            match a {
                Atom::Sheaf(s) => out.push(*c, s.to_sheaf()?),
                a => return Err(kind_mismatch("a sheaf", a)),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn brane_literals() {
        let b = parse_expr("L(1,2;0)").unwrap().brane().unwrap();
        assert_eq!(b, Brane::from_ints(1, 2, int(0)).unwrap());
        let b = parse_expr("L(0,-1;1/2)").unwrap().brane().unwrap();
        assert_eq!((b.slope(), b.shift(), b.rank()), (Slope::new(0, -1).unwrap(), rat(1, 2), 1));
        let e = parse_expr("L(0,-1;1/3)[2]{M=phase 1/5, rank 2}").unwrap();
        assert_eq!(e.to_string(), "L(0,-1;1/3)[2]{M=phase 1/5, rank 2}");
        assert_eq!(e.brane().unwrap().grading_offset(), -2);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_expr("L(1,0").unwrap_err();
        assert_eq!(e.column, 6);
        assert_eq!(e.expected, vec!["\";\""]);
        assert_eq!(parse_expr("L(1,0;1/0)").unwrap_err().column, 9);
        assert_eq!(parse_expr("X").unwrap_err().column, 1);
        assert_eq!(parse_expr("L(1,0;0) L").unwrap_err().column, 10);
        assert_eq!(parse_expr("L(1,0;0){rank 2, rank 3}").unwrap_err().column, 18);
    }

    #[test]
    fn sums_and_sheaves() {
        let src = "L(0,1;1/3) - L(0,1;0) + 2*L(1,0;0)[1]";
        let e = parse_expr(src).unwrap();
        assert_eq!(e.to_string(), src);
        assert_eq!(e.brane_sum().unwrap().iter().map(|t| t.0).collect::<Vec<_>>(), vec![1, -1, 2]);
        let src = "O(3P0) - Sky(pt(x=1/3, phase=2/5), 2)[1] + O(D: pt(x=0, phase=0) - pt(x=1/2, phase=0)) + Bun(2,1,pt(x=0, phase=1/4))";
        let e = parse_expr(src).unwrap();
        assert_eq!(e.to_string(), src);
        assert_eq!(e.sheaf_sum().unwrap().terms().len(), 4);
        assert!(parse_expr("  L( 1 , 0 ; -1/2 ) ").unwrap().brane().is_ok());
        assert!(matches!(parse_expr("L(2,4;0)").unwrap().brane(), Err(Error::InvalidArgument(_))));
    }
}
