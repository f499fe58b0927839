//! JSON encoding of forms and multivector fields.
//!
//! ```json
//! { "chart": 3, "terms": [ { "degree": 2, "indices": [1, 3], "num": "x2", "den": "1" } ] }
//! ```
//! Indices are 1-based and strictly increasing; `num` and `den` use the
//! polynomial grammar `coef*x1^a*x2^b` joined by `+`/`-`.

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::poly::Poly;
use crate::scalar::Scalar;

use super::{Blade, Graded, Kind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub degree: usize,
    pub indices: Vec<usize>,
    pub num: String,
    #[serde(default = "one_string")]
    pub den: String,
}

fn one_string() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJson {
    pub chart: usize,
    pub terms: Vec<TermJson>,
}

impl<K: Kind> Graded<K> {
    pub fn to_json(&self) -> GradedJson {
        GradedJson {
            chart: self.dim(),
            terms: self
                .terms()
                .map(|(b, c)| TermJson {
                    degree: b.degree(),
                    indices: b.indices().into_iter().map(|i| i + 1).collect(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GradedJson) -> Result<Self, ParseError> {
        if j.chart == 0 || j.chart > super::MAX_DIM {
            return Err(ParseError::Schema(format!("invalid chart dimension {}", j.chart)));
        }
        let mut out = Self::zero(j.chart);
        for t in &j.terms {
            if t.indices.len() != t.degree {
                return Err(ParseError::Schema(format!(
                    "term degree {} does not match {} indices",
                    t.degree,
                    t.indices.len()
                )));
            }
            if t.indices.iter().any(|&i| i == 0 || i > j.chart) {
                return Err(ParseError::Schema(format!("index out of range in {:?}", t.indices)));
            }
            let zero_based: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            let blade = Blade::from_indices(&zero_based)
                .ok_or_else(|| ParseError::Schema(format!("indices not increasing: {:?}", t.indices)))?;
            let num: Poly = t.num.parse()?;
            let den: Poly = t.den.parse()?;
            let c = Scalar::new(num, den).ok_or_else(|| ParseError::Schema("zero denominator".into()))?;
            out.add_term(blade, c);
        }
        Ok(out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ParseError> {
        let j: GradedJson = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}
