//! JSON file formats for circuits and systems.
//!
//! Rationals are written as "p/q" strings (integers as "p"); on input decimal
//! literals such as "3.65" are accepted and read exactly.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::galesystem::CircuitSystem;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GEntry {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub circuit: CircuitFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gs: Option<Vec<GEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general: Option<Vec<Vec<String>>>,
}

/// Parses "p/q", "p" or a decimal literal like "-3.65" exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if (digits.is_empty() && frac.is_empty()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole = format!("{digits}{frac}");
        let num: BigInt = whole.parse().map_err(|_| bad())?;
        let den: BigInt = Pow::pow(&BigInt::from(10), frac.len() as u32);
        let q = Rational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad())
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

impl CircuitFile {
    pub fn parse(text: &str) -> Result<CircuitFile> {
        parse_json(text)
    }

    pub fn from_points(points: &[Vec<i64>]) -> CircuitFile {
        CircuitFile { n: points.first().map_or(0, Vec::len), points: points.to_vec() }
    }

    pub fn to_circuit(&self) -> Result<Circuit> {
        Circuit::with_dimension(self.n, self.points.clone())
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<SystemFile> {
        parse_json(text)
    }

    pub fn reduced(points: &[Vec<i64>], gs: &[(Rational, Rational)]) -> SystemFile {
        SystemFile {
            circuit: CircuitFile::from_points(points),
            gs: Some(gs.iter().map(|(a, b)| GEntry { a: format_rational(a), b: format_rational(b) }).collect()),
            general: None,
        }
    }

    pub fn to_system(&self) -> Result<CircuitSystem> {
        let circuit = self.circuit.to_circuit()?;
        match (&self.gs, &self.general) {
            (Some(gs), None) => {
                let gs = gs
                    .iter()
                    .map(|g| Ok((parse_rational(&g.a)?, parse_rational(&g.b)?)))
                    .collect::<Result<Vec<_>>>()?;
                CircuitSystem::from_reduced(&circuit, gs)
            }
            (None, Some(rows)) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                CircuitSystem::from_general(&circuit, rows)
            }
            _ => Err(Error::Parse("a system needs exactly one of \"gs\" and \"general\"".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::positive_count;
    use crate::scalar::rat;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3.65").unwrap(), rat(73, 20));
        assert_eq!(parse_rational("-0.1").unwrap(), rat(-1, 10));
        assert_eq!(parse_rational(" -7/14 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("12").unwrap(), rat(12, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        for bad in ["", "1/0", "abc", "1.2.3", "-", "1e5", "2/x"] {
            assert!(matches!(parse_rational(bad), Err(Error::Parse(_))), "{bad}");
        }
        assert_eq!(format_rational(&rat(-73, 20)), "-73/20");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn running_example_file() {
        let text = r#"{"circuit": {"n": 2, "points": [[0,0],[1,0],[0,1],[2,-2]]},
                       "gs": [{"a": "1", "b": "1"}, {"a": "-2/73", "b": "20/73"}]}"#;
        let f = SystemFile::parse(text).unwrap();
        let sys = f.to_system().unwrap();
        assert_eq!(SystemFile::parse(&f.to_json()).unwrap(), f);
        assert_eq!(positive_count(&sys).unwrap(), 3);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(CircuitFile::parse("{\"n\": 2}"), Err(Error::Parse(_))));
        assert!(matches!(SystemFile::parse("[1,2]"), Err(Error::Parse(_))));
        let both = r#"{"circuit": {"n": 1, "points": [[0],[1],[3]]}}"#;
        assert!(matches!(SystemFile::parse(both).unwrap().to_system(), Err(Error::Parse(_))));
        let collinear = CircuitFile::parse(r#"{"n": 2, "points": [[0,0],[1,1],[2,2],[3,3]]}"#).unwrap();
        assert!(matches!(collinear.to_circuit(), Err(Error::DegenerateSpan)));
    }
}
