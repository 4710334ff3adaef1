//! Text grammar for forms, curves and arrangements.
//!
//! ```text
//! roots=0,1,-1;k=1;H=1          split form (X - 0Y)(X - Y)(X + Y) H = k e
//! form=xy(x-y);k=2              XY(X - Y) = k e
//! family=mordell;k=-2           curve families, see CurveSpec
//! hyperplanes=1,0;0,1;1,1       arrangement, one coefficient vector per hyperplane
//! ```
//!
//! Numbers are exact rationals (`3`, `-7/4`).

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::curves::CurveSpec;
use crate::hyperarr::{HyperArrError, LinearFormSystem};
use crate::projective::Hyperplane;
use crate::sarith::{self, Rational, SContext};
use crate::thuemahler::{BinaryForm, BinaryFormSpec, ThueMahlerError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("roots must be pairwise distinct")]
    DuplicateRoots,
    #[error("k must be nonzero")]
    ZeroK,
    #[error("invalid spec: {0}")]
    Invalid(String),
}

fn at(position: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse { position, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedSpec {
    Form(BinaryForm),
    Curve(CurveSpec),
    Arrangement(LinearFormSystem),
}

/// A `key=value` item with the byte offset of its value.
struct Field<'a> {
    key: &'a str,
    value: &'a str,
    offset: usize,
}

fn split_fields(text: &str) -> Result<Vec<Field<'_>>, SpecError> {
    let mut out: Vec<Field<'_>> = Vec::new();
    let mut start = 0;
    for piece in text.split(';') {
        let lead = piece.len() - piece.trim_start().len();
        let trimmed = piece.trim();
        if !trimmed.is_empty() {
            let Some((k, v)) = trimmed.split_once('=') else {
                return Err(at(start + lead, format!("expected key=value, found {trimmed:?}")));
            };
            let key = k.trim();
            if out.iter().any(|f| f.key == key) {
                return Err(at(start + lead, format!("repeated key {key:?}")));
            }
            let value_start = start + lead + k.len() + 1;
            let value_lead = v.len() - v.trim_start().len();
            out.push(Field { key, value: v.trim(), offset: value_start + value_lead });
        }
        start += piece.len() + 1;
    }
    if out.is_empty() {
        return Err(at(0, "empty spec"));
    }
    Ok(out)
}

fn rational_list(value: &str, offset: usize) -> Result<Vec<Rational>, SpecError> {
    let mut out = Vec::new();
    let mut pos = offset;
    for item in value.split(',') {
        let lead = item.len() - item.trim_start().len();
        out.push(sarith::parse_rational(item).map_err(|_| at(pos + lead, format!("not a rational: {:?}", item.trim())))?);
        pos += item.len() + 1;
    }
    Ok(out)
}

fn rational(f: &Field<'_>) -> Result<Rational, SpecError> {
    let list = rational_list(f.value, f.offset)?;
    if list.len() != 1 {
        return Err(at(f.offset, format!("{} takes a single number", f.key)));
    }
    Ok(list.into_iter().next().expect("one item"))
}

fn integer_list(f: &Field<'_>) -> Result<Vec<i64>, SpecError> {
    rational_list(f.value, f.offset)?
        .iter()
        .map(|x| {
            let n = x.is_integer().then(|| x.to_integer()).and_then(|n| i64::try_from(n).ok());
            n.ok_or_else(|| at(f.offset, format!("{} needs 64-bit integers", f.key)))
        })
        .collect()
}

fn integer(f: &Field<'_>) -> Result<i64, SpecError> {
    let list = integer_list(f)?;
    if list.len() != 1 {
        return Err(at(f.offset, format!("{} takes a single integer", f.key)));
    }
    Ok(list[0])
}

fn primes(f: &Field<'_>) -> Result<SContext, SpecError> {
    let ints = integer_list(f)?;
    let ps: Option<Vec<u64>> = ints.iter().map(|&p| u64::try_from(p).ok()).collect();
    let ps = ps.ok_or_else(|| at(f.offset, "primes must be positive"))?;
    SContext::new(ps).map_err(|e| at(f.offset, e.to_string()))
}

struct Fields<'a> {
    fields: Vec<Field<'a>>,
    used: Vec<bool>,
}

impl<'a> Fields<'a> {
    fn get(&mut self, key: &str) -> Option<&Field<'a>> {
        let i = self.fields.iter().position(|f| f.key == key)?;
        self.used[i] = true;
        Some(&self.fields[i])
    }

    fn require(&mut self, key: &str, end: usize) -> Result<&Field<'a>, SpecError> {
        self.get(key).ok_or_else(|| at(end, format!("missing {key}")))
    }

    fn finish(&self) -> Result<(), SpecError> {
        match self.fields.iter().zip(&self.used).find(|(_, used)| !**used) {
            Some((f, _)) => Err(at(f.offset - f.key.len() - 1, format!("unexpected key {:?}", f.key))),
            None => Ok(()),
        }
    }
}

fn map_form_error(e: ThueMahlerError) -> SpecError {
    match e {
        ThueMahlerError::DuplicateRoots => SpecError::DuplicateRoots,
        ThueMahlerError::ZeroK => SpecError::ZeroK,
        other => SpecError::Invalid(other.to_string()),
    }
}

fn parse_arrangement(value: &str, offset: usize) -> Result<LinearFormSystem, SpecError> {
    let mut forms = Vec::new();
    let mut pos = offset;
    for vector in value.split(';') {
        let coeffs = rational_list(vector, pos)?;
        forms.push(Hyperplane::new(&coeffs).map_err(|e| at(pos, e.to_string()))?);
        pos += vector.len() + 1;
    }
    LinearFormSystem::new(forms).map_err(|e| match e {
        HyperArrError::Repeated(..) => SpecError::DuplicateRoots,
        other => SpecError::Invalid(other.to_string()),
    })
}

pub fn parse_equation_spec(text: &str) -> Result<ParsedSpec, SpecError> {
    let lead = text.len() - text.trim_start().len();
    if let Some(rest) = text.trim_start().strip_prefix("hyperplanes=") {
        return parse_arrangement(rest, lead + "hyperplanes=".len()).map(ParsedSpec::Arrangement);
    }
    let end = text.len();
    let fields = split_fields(text)?;
    let used = vec![false; fields.len()];
    let mut fs = Fields { fields, used };
    let parsed = if let Some(family) = fs.get("family").map(|f| (f.value, f.offset)) {
        ParsedSpec::Curve(parse_curve(family, &mut fs, end)?)
    } else if let Some(form) = fs.get("form").map(|f| (f.value, f.offset)) {
        if form.0.replace(' ', "").to_ascii_lowercase() != "xy(x-y)" {
            return Err(at(form.1, format!("unknown form {:?}", form.0)));
        }
        let k = match fs.get("k") {
            Some(f) => rational(f)?,
            None => Rational::one(),
        };
        ParsedSpec::Form(BinaryForm::pivot(k).map_err(map_form_error)?)
    } else {
        let f = fs.require("roots", end)?;
        let roots = rational_list(f.value, f.offset)?;
        let offset = f.offset;
        if roots.iter().enumerate().any(|(i, r)| roots[..i].contains(r)) {
            return Err(SpecError::DuplicateRoots);
        }
        let roots: [Rational; 3] = roots.try_into().map_err(|_| at(offset, "split forms take exactly three roots"))?;
        let k = rational(fs.require("k", end)?)?;
        let h = match fs.get("H") {
            Some(f) => rational_list(f.value, f.offset)?,
            None => vec![Rational::one()],
        };
        ParsedSpec::Form(BinaryForm::Split(BinaryFormSpec::new(roots, h, k).map_err(map_form_error)?))
    };
    fs.finish()?;
    Ok(parsed)
}

fn parse_curve(family: (&str, usize), fs: &mut Fields<'_>, end: usize) -> Result<CurveSpec, SpecError> {
    let spec = match family.0 {
        "mordell" => CurveSpec::Mordell { k: integer(fs.require("k", end)?)? },
        "elliptic" => CurveSpec::Elliptic { f: integer_list(fs.require("f", end)?)? },
        "hyperelliptic" => CurveSpec::Hyperelliptic { f: integer_list(fs.require("f", end)?)? },
        "superelliptic" => {
            let m = integer(fs.require("m", end)?)?;
            let m = u32::try_from(m).map_err(|_| at(end, "m must be positive"))?;
            CurveSpec::Superelliptic { m, f: integer_list(fs.require("f", end)?)? }
        }
        "thue" => {
            let f = fs.require("roots", end)?;
            let roots = rational_list(f.value, f.offset)?;
            let k = rational(fs.require("k", end)?)?;
            if roots.iter().enumerate().any(|(i, r)| roots[..i].contains(r)) {
                return Err(SpecError::DuplicateRoots);
            }
            CurveSpec::ThueClassic { roots, k }
        }
        "siegel" => {
            let a1 = rational(fs.require("a1", end)?)?;
            let a2 = rational(fs.require("a2", end)?)?;
            let primes = match fs.get("primes") {
                Some(f) => primes(f)?,
                None => SContext::empty(),
            };
            CurveSpec::SiegelUnits { a1, a2, primes }
        }
        other => return Err(at(family.1, format!("unknown family {other:?}"))),
    };
    match &spec {
        CurveSpec::Mordell { k: 0 } => return Err(SpecError::ZeroK),
        CurveSpec::ThueClassic { k, .. } if k.is_zero() => return Err(SpecError::ZeroK),
        _ => {}
    }
    spec.validate().map_err(|e| SpecError::Invalid(e.to_string()))?;
    Ok(spec)
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(sarith::format_rational).collect::<Vec<_>>().join(",")
}

fn join_ints(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Canonical text that parses back to the same spec.
impl fmt::Display for ParsedSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedSpec::Form(BinaryForm::Pivot { k }) => write!(out, "form=xy(x-y);k={}", sarith::format_rational(k)),
            ParsedSpec::Form(BinaryForm::Split(f)) => {
                let roots: Vec<Rational> = f.roots().into_iter().cloned().collect();
                write!(out, "roots={};k={};H={}", join(&roots), sarith::format_rational(f.k()), join(f.cofactor()))
            }
            ParsedSpec::Curve(c) => match c {
                CurveSpec::Mordell { k } => write!(out, "family=mordell;k={k}"),
                CurveSpec::Elliptic { f } => write!(out, "family=elliptic;f={}", join_ints(f)),
                CurveSpec::Hyperelliptic { f } => write!(out, "family=hyperelliptic;f={}", join_ints(f)),
                CurveSpec::Superelliptic { m, f } => write!(out, "family=superelliptic;m={m};f={}", join_ints(f)),
                CurveSpec::ThueClassic { roots, k } => {
                    write!(out, "family=thue;roots={};k={}", join(roots), sarith::format_rational(k))
                }
                CurveSpec::SiegelUnits { a1, a2, primes } => {
                    write!(out, "family=siegel;a1={};a2={}", sarith::format_rational(a1), sarith::format_rational(a2))?;
                    if !primes.is_empty() {
                        let ps: Vec<String> = primes.primes().iter().map(u64::to_string).collect();
                        write!(out, ";primes={}", ps.join(","))?;
                    }
                    Ok(())
                }
            },
            ParsedSpec::Arrangement(sys) => {
                let vecs: Vec<String> = sys
                    .forms()
                    .iter()
                    .map(|h| h.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                write!(out, "hyperplanes={}", vecs.join(";"))
            }
        }
    }
}

/// Comma-separated prime list, as taken by `--primes`.
pub fn parse_primes(text: &str) -> Result<SContext, SpecError> {
    if text.trim().is_empty() {
        return Ok(SContext::empty());
    }
    primes(&Field { key: "primes", value: text, offset: 0 })
}

pub fn parse_rationals(text: &str) -> Result<Vec<Rational>, SpecError> {
    rational_list(text, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{frac, int};

    const GOLDEN: &[&str] = &[
        "roots=0,1,-1;k=1;H=1",
        "roots=1/2,3,-7;k=-5/3;H=1,0,2",
        "form=xy(x-y);k=1",
        "form=xy(x-y);k=-1/4",
        "family=mordell;k=-2",
        "family=elliptic;f=1,0,-1,0",
        "family=hyperelliptic;f=1,0,-5,0,4",
        "family=superelliptic;m=3;f=1,0,-1",
        "family=thue;roots=0,1,-1;k=1",
        "family=siegel;a1=1;a2=1;primes=2,3",
        "hyperplanes=1,0,0;0,1,0;0,0,1;1,1,1",
    ];

    #[test]
    fn split_cubic() {
        let ParsedSpec::Form(BinaryForm::Split(f)) = parse_equation_spec("roots=0,1,-1;k=1;H=1").unwrap() else {
            panic!("expected a split form");
        };
        assert_eq!(f.roots(), [&int(0), &int(1), &int(-1)]);
        assert_eq!(f.k(), &int(1));
        assert_eq!(f.cofactor(), &[int(1)]);
    }

    #[test]
    fn pivot_and_defaults() {
        assert_eq!(parse_equation_spec("form=xy(x-y)").unwrap(), ParsedSpec::Form(BinaryForm::Pivot { k: int(1) }));
        assert_eq!(parse_equation_spec("form=XY(X - Y);k=3/2").unwrap(), ParsedSpec::Form(BinaryForm::Pivot { k: frac(3, 2) }));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_equation_spec("roots=0,0,1;k=1"), Err(SpecError::DuplicateRoots));
        assert_eq!(parse_equation_spec("roots=0,0,1"), Err(SpecError::DuplicateRoots));
        assert_eq!(parse_equation_spec("roots=0,1,2;k=0"), Err(SpecError::ZeroK));
        assert_eq!(parse_equation_spec("form=xy(x-y);k=0"), Err(SpecError::ZeroK));
        assert_eq!(parse_equation_spec("family=mordell;k=0"), Err(SpecError::ZeroK));
        assert!(matches!(parse_equation_spec("roots=0,x,1;k=1"), Err(SpecError::Parse { position: 8, .. })));
        assert!(matches!(parse_equation_spec("roots=0,1,2;k=1;zap=3"), Err(SpecError::Parse { position: 16, .. })));
        assert!(matches!(parse_equation_spec("roots=0,1"), Err(SpecError::Parse { position: 6, .. })));
        assert!(matches!(parse_equation_spec("family=quartic;k=1"), Err(SpecError::Parse { position: 7, .. })));
        assert!(matches!(parse_equation_spec(""), Err(SpecError::Parse { .. })));
        assert_eq!(parse_equation_spec("hyperplanes=1,0;2,0;1,1"), Err(SpecError::DuplicateRoots));
    }

    #[test]
    fn round_trip() {
        for text in GOLDEN {
            let parsed = parse_equation_spec(text).unwrap();
            let printed = parsed.to_string();
            assert_eq!(&printed, text);
            assert_eq!(parse_equation_spec(&printed).unwrap(), parsed);
        }
    }

    #[test]
    fn primes_flag() {
        assert_eq!(parse_primes("2,3").unwrap(), SContext::new([2, 3]).unwrap());
        assert_eq!(parse_primes("").unwrap(), SContext::empty());
        assert!(parse_primes("4").is_err());
        assert!(parse_primes("-2").is_err());
    }
}
