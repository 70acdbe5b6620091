//! JSON report types. Floats are written in `{:.16e}` form; non-finite values become `null`.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};

fn sci<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let n: serde_json::Number = format!("{x:.16e}").parse().map_err(S::Error::custom)?;
    n.serialize(s)
}

fn sci_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => sci(v, s),
        None => s.serialize_none(),
    }
}

/// Sign and normalization conventions in force for every number in the report.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub laplacian: &'static str,
    pub curvature: &'static str,
    pub exterior_derivative: &'static str,
    pub symmetric_product: &'static str,
    pub complex_structure: &'static str,
    pub kahler_primitive: &'static str,
    pub beta_squared: &'static str,
    pub rescaling_coordinate: &'static str,
    pub einstein_constant: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    laplacian: "Δφ = tr Hess φ (non-negative on convex functions)",
    curvature: "R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, Ric(Y,Z) = tr(X ↦ R(X,Y)Z)",
    exterior_derivative: "dω(X,Y) = X ω(Y) − Y ω(X) − ω([X,Y]) (no ½)",
    symmetric_product: "α∘β = ½(α⊗β + β⊗α), α² = α∘α",
    complex_structure: "J∂x = −∂y on each complex coordinate z = x + iy",
    kahler_primitive: "dγ = h(·,J·), dθ = −π*dγ, dθ(X,Y) = h(JX,Y) on H",
    beta_squared: "β₁ = a_W + a_ac, β₂ = a_W − a_ac/(m+1), f = π*h + C(β₂² − β₁²), C = 4m(m+1)/((m+2)² scal^h)",
    rescaling_coordinate: "τ = −((m+2)/2) s, φ = −ln cos(s/2)",
    einstein_constant: "Ric(f̃) = λ f̃ is checked; f itself is not Einstein and its residual is reported as a measurement",
};

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub example: String,
    pub m: usize,
    pub seed: u64,
    pub points: usize,
    pub suites: Vec<String>,
    #[serde(serialize_with = "sci")]
    pub scal_h: f64,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub suite: String,
    pub anchor: String,
    pub bound: &'static str,
    pub points_evaluated: usize,
    pub failures: usize,
    /// Reduced value: the maximum for `max`, the minimum for `min`, the spread for `spread`.
    #[serde(serialize_with = "sci")]
    pub max_residual: f64,
    #[serde(serialize_with = "sci")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Measurement {
    pub name: String,
    pub suite: String,
    #[serde(serialize_with = "sci")]
    pub value: f64,
    #[serde(serialize_with = "sci_opt")]
    pub expected: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub header: Header,
    pub checks: Vec<CheckResult>,
    pub measurements: Vec<Measurement>,
    pub pass: bool,
}

/// Several reports, one per (example, m).
#[derive(Clone, Debug, Serialize)]
pub struct ReportSet {
    pub runs: Vec<Report>,
    pub pass: bool,
}

impl ReportSet {
    pub fn new(runs: Vec<Report>) -> Self {
        let pass = runs.iter().all(|r| r.pass);
        ReportSet { runs, pass }
    }
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn measurement(&self, name: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|c| c.name == name)
    }

    /// One line per check, for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} m={} seed={} points={}: {}\n",
            self.header.example,
            self.header.m,
            self.header.seed,
            self.header.points,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<5} {:<40} {:>11.3e} {} {:.1e}{}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.max_residual,
                match c.bound {
                    "min" => ">",
                    _ => "≤",
                },
                c.tolerance,
                c.error.as_deref().map(|e| format!("  ({e})")).unwrap_or_default()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct W {
        #[serde(serialize_with = "sci")]
        x: f64,
    }

    #[test]
    fn floats_are_scientific() {
        assert_eq!(serde_json::to_string(&W { x: 0.1 }).unwrap(), r#"{"x":1.0000000000000001e-1}"#);
        assert_eq!(serde_json::to_string(&W { x: -2.0 }).unwrap(), r#"{"x":-2.0000000000000000e+0}"#);
        assert_eq!(serde_json::to_string(&W { x: f64::NAN }).unwrap(), r#"{"x":null}"#);
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&W { x: 1e-300 }).unwrap()).unwrap();
        assert_eq!(v["x"].as_f64().unwrap(), 1e-300);
    }
}
