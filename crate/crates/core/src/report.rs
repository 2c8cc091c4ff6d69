//! Machine-readable forms. Every big integer crosses this boundary as a
//! decimal string.

use num_bigint::{BigInt, BigUint};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::field::Prime;
use crate::solver::{OracleStatus, SolveReport};
use crate::trunc::{TruncError, TruncSeries};

/// `{"p": "...", "n": N, "coeffs": ["c0", "c1", ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub p: String,
    pub n: usize,
    pub coeffs: Vec<String>,
}

impl SeriesJson {
    pub fn from_series(s: &TruncSeries) -> Self {
        SeriesJson {
            p: s.prime().to_string(),
            n: s.degree_bound(),
            coeffs: decimal_strings(s.coeffs()),
        }
    }

    pub fn to_series(&self) -> Result<TruncSeries, JsonError> {
        let p: BigUint = parse_decimal(&self.p)?;
        let prime = Prime::new(p).map_err(|e| JsonError::Invalid(e.to_string()))?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| parse_decimal::<BigInt>(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruncSeries::from_integers(&prime, &coeffs, self.n)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("not a decimal integer: {0:?}")]
    NotDecimal(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Series(#[from] TruncError),
    #[error(transparent)]
    Syntax(#[from] serde_json::Error),
}

pub fn decimal_strings(values: &[BigUint]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

/// Parses an optionally signed decimal integer, rejecting anything else
/// (fractions, exponents, hex).
pub fn parse_decimal<T: std::str::FromStr>(s: &str) -> Result<T, JsonError> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(JsonError::NotDecimal(s.to_string()));
    }
    s.parse().map_err(|_| JsonError::NotDecimal(s.to_string()))
}

/// Parses a JSON array whose elements are integers or decimal strings.
/// Numbers are read from their source text, never through floating point.
pub fn parse_integer_array(text: &str) -> Result<Vec<BigInt>, JsonError> {
    let values: Vec<serde_json::Value> = serde_json::from_str(text)?;
    values
        .iter()
        .map(|v| match v {
            serde_json::Value::Number(n) => parse_decimal(&n.to_string()),
            serde_json::Value::String(s) => parse_decimal(s.trim()),
            other => Err(JsonError::NotDecimal(other.to_string())),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RootJson {
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub enum OracleJson {
    Ran(bool),
    Skipped,
}

impl From<OracleStatus> for OracleJson {
    fn from(s: OracleStatus) -> Self {
        match s {
            OracleStatus::Agree => OracleJson::Ran(true),
            OracleStatus::Disagree => OracleJson::Ran(false),
            OracleStatus::Skipped => OracleJson::Skipped,
        }
    }
}

impl Serialize for OracleJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            OracleJson::Ran(b) => serializer.serialize_bool(*b),
            OracleJson::Skipped => serializer.serialize_str("skipped"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OraclesJson {
    pub fixed_point: bool,
    pub hensel: OracleJson,
    pub brute_force: OracleJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericJson {
    pub modulus: String,
    pub x1: String,
    pub x2: String,
}

/// The frozen solve report schema.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReportJson {
    pub p: String,
    pub n: usize,
    pub a: String,
    pub form: &'static str,
    pub roots: [RootJson; 2],
    pub verified: bool,
    pub oracles: OraclesJson,
    pub numeric: Option<NumericJson>,
}

impl From<&SolveReport> for SolveReportJson {
    fn from(r: &SolveReport) -> Self {
        let prob = &r.problem;
        SolveReportJson {
            p: prob.prime().to_string(),
            n: prob.n(),
            a: prob.a().to_string(),
            form: prob.form().name(),
            roots: [
                RootJson {
                    coeffs: decimal_strings(r.root1.coeffs()),
                },
                RootJson {
                    coeffs: decimal_strings(r.root2.coeffs()),
                },
            ],
            verified: r.verified(),
            oracles: OraclesJson {
                fixed_point: r.oracles.fixed_point,
                hensel: r.oracles.hensel.into(),
                brute_force: r.oracles.brute_force.into(),
            },
            numeric: r.numeric.as_ref().map(|num| NumericJson {
                modulus: num.modulus.to_string(),
                x1: num.x1.to_string(),
                x2: num.x2.to_string(),
            }),
        }
    }
}

fn status_word(s: OracleStatus) -> &'static str {
    match s {
        OracleStatus::Agree => "agree",
        OracleStatus::Disagree => "DISAGREE",
        OracleStatus::Skipped => "skipped",
    }
}

/// Human-readable report, one fact per line.
pub fn render_solve_text(r: &SolveReport, balanced: bool) -> String {
    let prob = &r.problem;
    let series = |s: &TruncSeries| {
        if balanced {
            s.balanced().to_string()
        } else {
            s.to_string()
        }
    };
    let sign = match prob.form() {
        crate::solver::Form::PlusA => '+',
        crate::solver::Form::MinusA => '-',
    };
    let zero = |s: &TruncSeries| if s.is_zero() { "zero" } else { "NONZERO" };
    let mut out = String::new();
    out.push_str(&format!(
        "equation: t {sign} {}*x + x^2 = 0 (mod t^{}) over F_{}\n",
        prob.a(),
        prob.n(),
        prob.prime()
    ));
    out.push_str(&format!("x1 = {}\n", series(&r.root1)));
    out.push_str(&format!("x2 = {}\n", series(&r.root2)));
    out.push_str(&format!(
        "residuals: x1 {}, x2 {}\n",
        zero(&r.residual1),
        zero(&r.residual2)
    ));
    if !r.residual1.is_zero() {
        out.push_str(&format!("residual x1 = {}\n", series(&r.residual1)));
    }
    if !r.residual2.is_zero() {
        out.push_str(&format!("residual x2 = {}\n", series(&r.residual2)));
    }
    out.push_str(&format!(
        "oracles: fixed_point {}, hensel {}, brute_force {}\n",
        if r.oracles.fixed_point { "agree" } else { "DISAGREE" },
        status_word(r.oracles.hensel),
        status_word(r.oracles.brute_force)
    ));
    if let Some(num) = &r.numeric {
        out.push_str(&format!(
            "numeric (t = {}, mod {}): x1 = {}, x2 = {}\n",
            prob.prime(),
            num.modulus,
            num.x1,
            num.x2
        ));
    }
    out.push_str(if r.success() {
        "status: verified\n"
    } else {
        "status: FAILED\n"
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_strict() {
        assert_eq!(parse_decimal::<BigInt>("-42").unwrap(), BigInt::from(-42));
        assert!(parse_decimal::<BigInt>("1.5").is_err());
        assert!(parse_decimal::<BigInt>("1e3").is_err());
        assert!(parse_decimal::<BigInt>("").is_err());
        assert!(parse_decimal::<BigUint>("-1").is_err());
    }

    #[test]
    fn integer_arrays_keep_precision() {
        let big = "123456789012345678901234567890";
        let parsed = parse_integer_array(&format!("[{big}, \"-7\", 3]")).unwrap();
        assert_eq!(parsed[0].to_string(), big);
        assert_eq!(parsed[1], BigInt::from(-7));
        assert!(parse_integer_array("[1.25]").is_err());
        assert!(parse_integer_array("[true]").is_err());
        assert!(parse_integer_array("{}").is_err());
    }

    #[test]
    fn series_json_round_trip() {
        let p = Prime::from_u64(7).unwrap();
        let ints: Vec<BigInt> = [3, -1, 0, 2].iter().map(|&c| BigInt::from(c)).collect();
        let s = TruncSeries::from_integers(&p, &ints, 5).unwrap();
        let json = serde_json::to_string(&SeriesJson::from_series(&s)).unwrap();
        assert_eq!(json, r#"{"p":"7","n":5,"coeffs":["3","6","0","2","0"]}"#);
        let back: SeriesJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }
}
