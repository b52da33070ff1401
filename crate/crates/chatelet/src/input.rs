//! Problem input: inline flags, problem files and certificate files.

use std::fs;
use std::path::Path;

use chatelet_core::chatelet::RootAction;
use chatelet_core::decider::{Certificates, Cond3Certificate, Problem};
use chatelet_core::exact_math::{Poly, Rat};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot parse rational {0:?}")]
    Rational(String),
    #[error("empty coefficient list")]
    EmptyPoly,
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error(transparent)]
    Core(#[from] chatelet_core::Error),
}

/// `"3"`, `"-2/5"`, with surrounding whitespace allowed.
pub fn parse_rational(s: &str) -> Result<Rat, InputError> {
    let t = s.trim();
    let q: Rat = t.parse().map_err(|_| InputError::Rational(s.to_string()))?;
    Ok(q)
}

/// Comma-separated coefficients, lowest degree first.
pub fn parse_poly(s: &str) -> Result<Poly, InputError> {
    if s.trim().is_empty() {
        return Err(InputError::EmptyPoly);
    }
    let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// A coefficient given either as a JSON number or as a string.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_rat(&self) -> Result<Rat, InputError> {
        match self {
            Scalar::Int(n) => Ok(chatelet_core::exact_math::rat(*n)),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PolyInput {
    List(Vec<Scalar>),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionInput {
    image: Vec<usize>,
    in_n: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Cond3Input {
    holds: bool,
    #[serde(default)]
    justification: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificatesInput {
    galois_group: Option<Vec<ActionInput>>,
    cond3: Option<Cond3Input>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemInput {
    a: Scalar,
    poly: PolyInput,
    #[serde(default)]
    certificates: CertificatesInput,
}

impl From<CertificatesInput> for Certificates {
    fn from(c: CertificatesInput) -> Self {
        Certificates {
            galois_group: c.galois_group.map(|g| {
                g.into_iter()
                    .map(|a| RootAction {
                        image: a.image,
                        in_n: a.in_n,
                    })
                    .collect()
            }),
            cond3: c.cond3.map(|c| Cond3Certificate {
                holds: c.holds,
                justification: c.justification,
            }),
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_certificates(json: &str) -> Result<Certificates, InputError> {
    let c: CertificatesInput = serde_json::from_str(json)?;
    Ok(c.into())
}

pub fn read_certificates(path: &Path) -> Result<Certificates, InputError> {
    parse_certificates(&read(path)?)
}

/// `{"a": "6", "poly": "2,0,1", "certificates": {...}}`; `poly` may also be a JSON list.
pub fn parse_problem(json: &str) -> Result<Problem, InputError> {
    let p: ProblemInput = serde_json::from_str(json)?;
    let a = p.a.to_rat()?;
    let poly = match p.poly {
        PolyInput::Text(s) => parse_poly(&s)?,
        PolyInput::List(v) if v.is_empty() => return Err(InputError::EmptyPoly),
        PolyInput::List(v) => Poly::new(v.iter().map(Scalar::to_rat).collect::<Result<_, _>>()?),
    };
    Ok(Problem::new(a, poly)?.with_certificates(p.certificates.into()))
}

pub fn read_problem(path: &Path) -> Result<Problem, InputError> {
    parse_problem(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chatelet_core::exact_math::ratio;

    #[test]
    fn rationals_and_polys() {
        assert_eq!(parse_rational(" -2/4 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_poly("1, 0,1").unwrap(), Poly::from_ints(&[1, 0, 1]));
        assert_eq!(parse_poly("1/2,3").unwrap().coeff(0), ratio(1, 2));
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn problem_json() {
        let p = parse_problem(r#"{"a": 6, "poly": ["6", 0, "5", 0, 1]}"#).unwrap();
        assert_eq!(p.p, Poly::from_ints(&[6, 0, 5, 0, 1]));
        let p = parse_problem(
            r#"{"a": "-1", "poly": "1,1", "certificates": {"cond3": {"holds": false, "justification": "x"}}}"#,
        )
        .unwrap();
        assert!(!p.certificates.cond3.unwrap().holds);
        assert!(parse_problem(r#"{"a": 0, "poly": "1"}"#).is_err());
        assert!(parse_problem(r#"{"a": 1, "poly": "1", "extra": 2}"#).is_err());
    }
}
