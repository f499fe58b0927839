//! Instance files: the input format of `run` and the counterexample format of reports.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::exterior::json::GradedJson;
use crate::exterior::{DifferentialForm, MultivectorField};

/// A self-contained input. Which fields are required depends on `check`;
/// without `check`, the runner picks the checks the payload supports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub chart: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<GradedJson>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<GradedJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ref_point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<GradedJson>,
    #[serde(rename = "Z", default, skip_serializing_if = "Option::is_none")]
    pub z: Option<GradedJson>,
    /// Distribution frame (vector fields), e.g. a kernel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<GradedJson>>,
    /// Homogeneous forms with their degrees (zero forms keep a degree).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<DegreeForm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multivectors: Vec<GradedJson>,
    /// Coordinate values of the sample grid (the grid is their n-fold product).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<String>>,
    /// Use the relaxed certification rule.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub relaxed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeForm {
    pub degree: usize,
    pub form: GradedJson,
}

fn schema(msg: impl Into<String>) -> ParseError {
    ParseError::Schema(msg.into())
}

fn chart_of(j: &GradedJson, n: usize, what: &str) -> Result<(), ParseError> {
    if j.chart != n {
        return Err(schema(format!("{what} has chart {} but the instance chart is {n}", j.chart)));
    }
    Ok(())
}

impl Instance {
    pub fn new(chart: usize, check: &str) -> Self {
        Instance { chart, check: Some(check.to_string()), ..Default::default() }
    }

    pub fn from_json_str(s: &str) -> Result<Self, ParseError> {
        let inst: Instance = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        if inst.chart == 0 || inst.chart > crate::exterior::MAX_DIM {
            return Err(schema(format!("invalid chart dimension {}", inst.chart)));
        }
        Ok(inst)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn with_eta(mut self, eta: &DifferentialForm) -> Self {
        self.eta = Some(eta.to_json());
        self
    }

    pub fn with_beta(mut self, beta: &DifferentialForm) -> Self {
        self.beta = Some(beta.to_json());
        self
    }

    pub fn with_z(mut self, z: &MultivectorField) -> Self {
        self.z = Some(z.to_json());
        self
    }

    pub fn with_g(mut self, g: &[MultivectorField]) -> Self {
        self.g = Some(g.iter().map(|v| v.to_json()).collect());
        self
    }

    pub fn with_frame(mut self, k: &[MultivectorField]) -> Self {
        self.frame = Some(k.iter().map(|v| v.to_json()).collect());
        self
    }

    pub fn with_forms(mut self, forms: &[(usize, DifferentialForm)]) -> Self {
        self.forms = forms.iter().map(|(d, f)| DegreeForm { degree: *d, form: f.to_json() }).collect();
        self
    }

    pub fn with_multivectors(mut self, m: &[MultivectorField]) -> Self {
        self.multivectors = m.iter().map(|v| v.to_json()).collect();
        self
    }

    pub fn with_point(mut self, p: &[BigRational]) -> Self {
        self.ref_point = Some(p.iter().map(|q| q.to_string()).collect());
        self
    }

    fn form_field(&self, j: &Option<GradedJson>, what: &str) -> Result<Option<DifferentialForm>, ParseError> {
        match j {
            None => Ok(None),
            Some(j) => {
                chart_of(j, self.chart, what)?;
                Ok(Some(DifferentialForm::from_json(j)?))
            }
        }
    }

    pub fn eta(&self) -> Result<Option<DifferentialForm>, ParseError> {
        self.form_field(&self.eta, "eta")
    }

    pub fn beta(&self) -> Result<Option<DifferentialForm>, ParseError> {
        self.form_field(&self.beta, "beta")
    }

    pub fn z(&self) -> Result<Option<MultivectorField>, ParseError> {
        match &self.z {
            None => Ok(None),
            Some(j) => {
                chart_of(j, self.chart, "Z")?;
                let z = MultivectorField::from_json(j)?;
                if !z.is_homogeneous_of(2) {
                    return Err(schema("Z must be a bivector field"));
                }
                Ok(Some(z))
            }
        }
    }

    fn fields(&self, list: &[GradedJson], what: &str) -> Result<Vec<MultivectorField>, ParseError> {
        list.iter()
            .map(|j| {
                chart_of(j, self.chart, what)?;
                MultivectorField::from_json(j)
            })
            .collect()
    }

    pub fn g(&self) -> Result<Option<Vec<MultivectorField>>, ParseError> {
        self.g.as_ref().map(|g| self.fields(g, "G")).transpose()
    }

    pub fn frame(&self) -> Result<Option<Vec<MultivectorField>>, ParseError> {
        self.frame.as_ref().map(|g| self.fields(g, "frame")).transpose()
    }

    pub fn multivectors(&self) -> Result<Vec<MultivectorField>, ParseError> {
        self.fields(&self.multivectors, "multivector")
    }

    pub fn forms(&self) -> Result<Vec<(usize, DifferentialForm)>, ParseError> {
        self.forms
            .iter()
            .map(|f| {
                chart_of(&f.form, self.chart, "form")?;
                let form = DifferentialForm::from_json(&f.form)?;
                if !form.is_homogeneous_of(f.degree) {
                    return Err(schema(format!("form is not homogeneous of degree {}", f.degree)));
                }
                Ok((f.degree, form))
            })
            .collect()
    }

    /// Sample grid: `grid` values to the power `chart`, or the default grid.
    pub fn grid_points(&self) -> Result<Vec<Vec<BigRational>>, ParseError> {
        let Some(values) = &self.grid else { return Ok(crate::koszul::default_grid(self.chart)) };
        let values = values
            .iter()
            .map(|s| s.trim().parse::<BigRational>().map_err(|_| schema(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
        for _ in 0..self.chart {
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    pub fn ref_point(&self) -> Result<Option<Vec<BigRational>>, ParseError> {
        let Some(p) = &self.ref_point else { return Ok(None) };
        if p.len() != self.chart {
            return Err(schema(format!("ref_point has {} coordinates, chart is {}", p.len(), self.chart)));
        }
        p.iter()
            .map(|s| s.trim().parse::<BigRational>().map_err(|_| schema(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let n = 3;
        let inst = Instance::new(n, "d_squared")
            .with_forms(&[(1, DifferentialForm::basis(n, &[0]).scale(&"x2^2".parse().unwrap()))])
            .with_point(&[BigRational::new(1.into(), 2.into()), BigRational::from_integer(0.into()), BigRational::from_integer((-3).into())]);
        let s = serde_json::to_string(&inst).unwrap();
        let back = Instance::from_json_str(&s).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.forms().unwrap()[0].0, 1);
        assert_eq!(back.ref_point().unwrap().unwrap()[0], BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn schema_errors() {
        assert!(Instance::from_json_str("{").is_err());
        assert!(Instance::from_json_str(r#"{"chart": 0}"#).is_err());
        let bad = r#"{"chart": 2, "eta": {"chart": 3, "terms": []}}"#;
        assert!(Instance::from_json_str(bad).unwrap().eta().is_err());
        let bad_deg = r#"{"chart": 2, "forms": [{"degree": 2, "form": {"chart": 2, "terms": [{"degree": 1, "indices": [1], "num": "1"}]}}]}"#;
        assert!(Instance::from_json_str(bad_deg).unwrap().forms().is_err());
    }
}
