//! Conformally Fefferman Einstein metrics written directly in chart form.
//!
//! Flat base, chart `(x, t, s)`:
//!
//! ```text
//! f̃ = cos⁻²(t) (π*h + 4 dt∘(γ + ds))                                   Ric = 0
//! ```
//!
//! `scal^h ≠ 0`, chart `(x, τ, t)` with `a = dτ + (scal^h/2m) γ`:
//!
//! ```text
//! f̃ = cos⁻²(t) (π*h − (4m(m+1)/scal^h) dt² + (4m/((m+1) scal^h)) a²)   Ric = λ f̃
//! ```
//!
//! with `λ = (2m+1) scal^h / (4m(m+1))`. The bracket in the second case is the
//! product of the line `(t)` with an Einstein metric on `(x, τ)` whose Einstein
//! constant is `scal^h / (2(m+1))`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{symmetric_product, OneForm, ScalarField};
use crate::linalg::max_abs;
use crate::semi_riemannian::{curvature_from, MetricField};

use super::kahler::KahlerEinsteinChart;
use super::rescale::RescaledChart;

/// Half-width of the conformal-factor coordinate interval.
pub const LINE_HALF_WIDTH: f64 = 0.45 * PI;
/// Half-width of the `τ` interval in the `scal^h ≠ 0` chart.
pub const TAU_HALF_WIDTH: f64 = 10.0;

/// The explicit metric and the bracket it rescales.
#[derive(Clone, Debug)]
pub struct ExplicitEinsteinMetric {
    pub ke: KahlerEinsteinChart,
    pub chart: Arc<Chart>,
    /// `cos²(t) f̃`.
    pub bracket: MetricField,
    pub metric: MetricField,
    pub lambda: f64,
    pub scalar: f64,
    /// Index of the coordinate `t` in the conformal factor.
    pub line: usize,
}

/// Residuals of the explicit metric at one point.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExplicitResiduals {
    /// `Ric − λ f̃`.
    pub einstein: f64,
    /// Measured minus expected scalar curvature.
    pub scalar: f64,
    pub measured_scalar: f64,
}

/// Product-structure residuals of the bracket (only for `scal^h ≠ 0`).
#[derive(Clone, Copy, Debug, Default)]
pub struct SasakiResiduals {
    /// Bracket components `g(∂t, ∂i)`, `i ≠ t`.
    pub mixed_metric: f64,
    /// Curvature components `R_abcd` with at least one index equal to `t`.
    pub mixed_curvature: f64,
    /// `Ric − (scal^h/(2(m+1))) g` restricted to the `(x, τ)` directions.
    pub einstein: f64,
}

impl SasakiResiduals {
    pub fn max(&self) -> f64 {
        self.mixed_metric.max(self.mixed_curvature).max(self.einstein)
    }
}

/// Builds the explicit metric for a Kähler–Einstein chart.
pub fn explicit_einstein_metric(ke: &KahlerEinsteinChart) -> Result<ExplicitEinsteinMetric> {
    if !ke.einstein {
        return Err(GeomError::Unsupported(format!("{} is not Kähler–Einstein", ke.label())));
    }
    let n = ke.dim();
    let m = ke.m as f64;
    let scal = ke.scal_h;
    let flat = scal == 0.0;
    let mut bounds = ke.base.bounds().to_vec();
    let mut names = ke.base.coordinate_names().to_vec();
    if flat {
        bounds.extend([(-LINE_HALF_WIDTH, LINE_HALF_WIDTH), (-PI, PI)]);
        names.extend(["t".to_string(), "s".to_string()]);
    } else {
        bounds.extend([(-TAU_HALF_WIDTH, TAU_HALF_WIDTH), (-LINE_HALF_WIDTH, LINE_HALF_WIDTH)]);
        names.extend(["tau".to_string(), "t".to_string()]);
    }
    let chart = Chart::new(bounds, names)?;
    let idx: Vec<usize> = (0..n).collect();
    let h = ke.h.tensor().pull_back(&chart, &idx);
    let gamma = ke.gamma.pull_back(&chart, &idx);
    let (bracket, line) = if flat {
        let dt = OneForm::coordinate(&chart, n);
        let ds = OneForm::coordinate(&chart, n + 1);
        (&h + &symmetric_product(&dt, &(&gamma + &ds)).scale(4.0), n)
    } else {
        let dtau = OneForm::coordinate(&chart, n);
        let dt = OneForm::coordinate(&chart, n + 1);
        let a = &dtau + &gamma.scale(scal / (2.0 * m));
        let g = &(&h - &symmetric_product(&dt, &dt).scale(4.0 * m * (m + 1.0) / scal))
            + &symmetric_product(&a, &a).scale(4.0 * m / ((m + 1.0) * scal));
        (g, n + 1)
    };
    let sig = (n + 1, 1);
    let bracket = MetricField::new(bracket, sig)?;
    let t = ScalarField::coordinate(&chart, line);
    let phi = -t.cos().ln();
    Ok(ExplicitEinsteinMetric {
        metric: bracket.conformal(&phi),
        bracket,
        ke: ke.clone(),
        chart,
        lambda: (2.0 * m + 1.0) * scal / (4.0 * m * (m + 1.0)),
        scalar: (2.0 * m + 1.0) * scal / (2.0 * m),
        line,
    })
}

impl ExplicitEinsteinMetric {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn is_flat(&self) -> bool {
        self.ke.scal_h == 0.0
    }

    pub fn residuals(&self, p: &Point) -> Result<ExplicitResiduals> {
        let curv = curvature_from(&self.metric.at(p, 2)?)?;
        let g = self.metric.values(p)?;
        Ok(ExplicitResiduals {
            einstein: max_abs(curv.ricci.iter().zip(&g).map(|(r, gv)| r - self.lambda * gv)),
            scalar: (curv.scalar - self.scalar).abs(),
            measured_scalar: curv.scalar,
        })
    }

    /// Chart map from the Fefferman chart `(x, t_M, s)` and its constant Jacobian (row = new coordinate).
    ///
    /// Flat: `(x, t_M, s) ↦ (x, −s/2, t_M)`. Otherwise: `(x, t_M, s) ↦ (x, t_M − (m+1)s/2, −s/2)`.
    pub fn identification(&self) -> Vec<f64> {
        let d = self.dim();
        let n = d - 2;
        let m = self.ke.m as f64;
        let mut jac = vec![0.0; d * d];
        for i in 0..n {
            jac[i * d + i] = 1.0;
        }
        let (tm, s) = (n, n + 1);
        if self.is_flat() {
            jac[n * d + s] = -0.5;
            jac[(n + 1) * d + tm] = 1.0;
        } else {
            jac[n * d + tm] = 1.0;
            jac[n * d + s] = -(m + 1.0) / 2.0;
            jac[(n + 1) * d + s] = -0.5;
        }
        jac
    }

    /// `max |f̃_pipeline − Φ* f̃|` at a point of the Fefferman chart.
    pub fn pipeline_residual(&self, rescaled: &RescaledChart, p: &Point) -> Result<f64> {
        let d = self.dim();
        let jac = self.identification();
        let new: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|k| jac[i * d + k] * p.coords()[k]).sum())
            .collect();
        let q = self.chart.point(&new)?;
        let g = self.metric.values(&q)?;
        let ours = rescaled.metric.values(p)?;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut pulled = 0.0;
                for i in 0..d {
                    for k in 0..d {
                        pulled += jac[i * d + a] * g[i * d + k] * jac[k * d + b];
                    }
                }
                worst = worst.max((pulled - ours[a * d + b]).abs());
            }
        }
        Ok(worst)
    }

    /// Product-structure residuals of the bracket; `None` for flat bases.
    pub fn sasaki_residuals(&self, p: &Point) -> Result<Option<SasakiResiduals>> {
        if self.is_flat() {
            return Ok(None);
        }
        let d = self.dim();
        let t = self.line;
        let g = self.bracket.values(p)?;
        let curv = curvature_from(&self.bracket.at(p, 2)?)?;
        let mut r = SasakiResiduals::default();
        for i in 0..d {
            if i != t {
                r.mixed_metric = r.mixed_metric.max(g[t * d + i].abs());
            }
        }
        for (flat, v) in curv.riemann.iter().enumerate() {
            let idx = [flat / (d * d * d), (flat / (d * d)) % d, (flat / d) % d, flat % d];
            if idx.contains(&t) {
                r.mixed_curvature = r.mixed_curvature.max(v.abs());
            }
        }
        let k = self.ke.scal_h / (2.0 * (self.ke.m as f64 + 1.0));
        for a in (0..d).filter(|&a| a != t) {
            for b in (0..d).filter(|&b| b != t) {
                r.einstein = r.einstein.max((curv.ricci[a * d + b] - k * g[a * d + b]).abs());
            }
        }
        Ok(Some(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::anticanonical::anticanonical_structure;
    use crate::constructions::fefferman::fefferman_metric;
    use crate::constructions::kahler::{make_kahler_einstein, KahlerKind};
    use crate::constructions::rescale::einstein_rescale;

    #[test]
    fn explicit_metrics_are_einstein_and_match_pipeline() {
        for kind in KahlerKind::CATALOG {
            for m in [1, 2] {
                let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
                let ex = explicit_einstein_metric(&ke).unwrap();
                let u: Vec<f64> = (0..ex.dim()).map(|i| 0.15 + 0.14 * i as f64).collect();
                let q = ex.chart.interior_point(&u, 0.1).unwrap();
                ex.metric.check_at(&q).unwrap();
                let r = ex.residuals(&q).unwrap();
                assert!(r.einstein < 1e-9 && r.scalar < 1e-9, "{kind} {m}: {r:?}");
                if let Some(s) = ex.sasaki_residuals(&q).unwrap() {
                    assert!(s.max() < 1e-10, "{kind} {m}: {s:?}");
                }
                let fc = fefferman_metric(&anticanonical_structure(&ke).unwrap()).unwrap();
                let rc = einstein_rescale(&fc).unwrap();
                let p = fc.chart.interior_point(&u, 0.1).unwrap();
                assert!(ex.pipeline_residual(&rc, &p).unwrap() < 1e-12, "{kind} {m}");
            }
        }
    }

    #[test]
    fn three_sphere_of_radius_two() {
        // m = 1, scal^h = 2: the (x, τ) factor is the round 3-sphere of radius 2, Ric = g/2.
        let ke = make_kahler_einstein(KahlerKind::FubiniStudy, 1, 1.0).unwrap();
        let ex = explicit_einstein_metric(&ke).unwrap();
        let q = ex.chart.point(&[0.2, -0.1, 1.0, 0.3]).unwrap();
        let curv = curvature_from(&ex.bracket.at(&q, 2).unwrap()).unwrap();
        let g = ex.bracket.values(&q).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!((curv.ricci[a * 4 + b] - 0.5 * g[a * 4 + b]).abs() < 1e-12);
            }
        }
        assert!((ex.lambda - 0.75).abs() < 1e-15);
    }
}
