//! Pseudo-Hermitian Einstein structures on circle bundles over Kähler–Einstein charts.
//!
//! The bundle is trivialized as `N × (t)`. With `γ` a primitive of the Kähler form,
//! the anticanonical connection has real representative `a = dt + (scal^h/2m) γ`, and
//!
//! * `scal^h ≠ 0`: `θ = −(2m/scal^h) a = −(2m/scal^h) dt − γ`,
//! * `scal^h = 0`: `θ = −dt − γ`.
//!
//! In both cases `dθ = −π*dγ` and the Reeb field is a constant multiple of `∂t`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{exterior_derivative, OneForm, ScalarField};
use crate::frame::orthonormal_frame;
use crate::linalg;
use crate::pseudo_hermitian::{horizontal_lift, PHStructure, WebsterAt};
use crate::semi_riemannian;
use crate::tensor::pointwise::{bilinear, mat_vec, unit};

use super::kahler::KahlerEinsteinChart;

/// Half-width of the fiber interval used for the `t` coordinate.
pub const FIBER_HALF_WIDTH: f64 = PI;

/// `θ` and the lifted CR structure on `N × (t)`.
#[derive(Clone, Debug)]
pub struct AnticanonicalChart {
    pub ke: KahlerEinsteinChart,
    pub chart: Arc<Chart>,
    /// Real representative `a` of the connection, `ρ_ac = i a`.
    pub rho_ac_rep: OneForm,
    pub ph: PHStructure,
    /// Whether `θ = −dt − γ` (flat gauge) was used.
    pub flat_gauge: bool,
}

fn total_chart(ke: &KahlerEinsteinChart) -> Result<Arc<Chart>> {
    let mut bounds = ke.base.bounds().to_vec();
    let mut names = ke.base.coordinate_names().to_vec();
    bounds.push((-FIBER_HALF_WIDTH, FIBER_HALF_WIDTH));
    names.push("t".into());
    Chart::new(bounds, names)
}

fn build(ke: &KahlerEinsteinChart, flat_gauge: bool, gauge: Option<&ScalarField>) -> Result<AnticanonicalChart> {
    let n = ke.dim();
    let chart = total_chart(ke)?;
    let base_idx: Vec<usize> = (0..n).collect();
    let gamma = ke.gamma.pull_back(&chart, &base_idx);
    let dt = OneForm::coordinate(&chart, n);
    let k = ke.scal_h / (2.0 * ke.m as f64);
    let rho_ac_rep = &dt + &gamma.scale(k);
    let mut theta = if flat_gauge {
        (&dt + &gamma).scale(-1.0)
    } else {
        rho_ac_rep.scale(-1.0 / k)
    };
    if let Some(f) = gauge {
        theta = &theta + &OneForm::differential(&f.pull_back(&chart, &base_idx));
    }
    let j = horizontal_lift(&theta, &ke.j, &base_idx);
    let ph = PHStructure::new(theta, j, ke.m, (ke.m, 0))?;
    Ok(AnticanonicalChart {
        ke: ke.clone(),
        chart,
        rho_ac_rep,
        ph,
        flat_gauge,
    })
}

/// The pseudo-Hermitian structure of the anticanonical bundle in the gauge fixed by `scal^h`.
pub fn anticanonical_structure(ke: &KahlerEinsteinChart) -> Result<AnticanonicalChart> {
    if !ke.einstein {
        return Err(GeomError::Unsupported(format!(
            "{} is not Kähler–Einstein; use flat_gauge_structure for controls",
            ke.label()
        )));
    }
    build(ke, ke.scal_h == 0.0, None)
}

/// `θ = −dt − γ` on `N × (t)` for any Kähler chart with a Kähler-form primitive.
pub fn flat_gauge_structure(ke: &KahlerEinsteinChart) -> Result<AnticanonicalChart> {
    build(ke, true, None)
}

/// The same construction with `θ` replaced by `θ + d(π*f)` for a base function `f`.
pub fn gauge_shifted_structure(ke: &KahlerEinsteinChart, f: &ScalarField) -> Result<AnticanonicalChart> {
    if !ke.einstein {
        return Err(GeomError::Unsupported(format!("{} is not Kähler–Einstein", ke.label())));
    }
    build(ke, ke.scal_h == 0.0, Some(f))
}

/// Negative control: `θ + ε x₀ dt` with the CR structure lifted along the new kernel.
///
/// The Reeb field of the perturbed form picks up base components, so it is no
/// longer an infinitesimal CR automorphism.
pub fn perturbed_structure(ke: &KahlerEinsteinChart, eps: f64) -> Result<PHStructure> {
    let ac = anticanonical_structure(ke)?;
    let n = ke.dim();
    let x0 = ScalarField::coordinate(&ac.chart, 0);
    let theta = ac.ph.theta() + &OneForm::coordinate(&ac.chart, n).times(&(eps * x0));
    let base_idx: Vec<usize> = (0..n).collect();
    let j = horizontal_lift(&theta, &ke.j, &base_idx);
    PHStructure::new(theta, j, ke.m, (ke.m, 0))
}

/// Residuals of the submersion `(M, g_θ) → (N, h)` at one point.
#[derive(Clone, Copy, Debug)]
pub struct SubmersionResiduals {
    /// `g_θ(X*, Y*) − h(X, Y)`.
    pub metric: f64,
    /// `Ric^g(T,T) − (m/2) g_θ(T,T)`.
    pub ricci_tt: f64,
    /// `Ric^g(T, X*)`.
    pub ricci_tx: f64,
    /// `Ric^h(X,Y) − Ric^g(X*,Y*) − ½ g_θ(X*,Y*)`.
    pub ricci_h: f64,
    /// `Ric^h(X,Y) + W(X*, JY*)`.
    pub ricci_w: f64,
}

impl SubmersionResiduals {
    pub fn max(&self) -> f64 {
        [self.metric, self.ricci_tt, self.ricci_tx, self.ricci_h, self.ricci_w]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl AnticanonicalChart {
    pub fn m(&self) -> usize {
        self.ke.m
    }

    pub fn dim(&self) -> usize {
        2 * self.ke.m + 1
    }

    /// Projection of a total-chart point to the base.
    pub fn project(&self, p: &Point) -> Result<Point> {
        self.ke.base.point(&p.coords()[..self.ke.dim()])
    }

    /// Expected Reeb field `T = −(scal^h/2m) ∂t` (or `−∂t` in the flat gauge).
    pub fn expected_reeb(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.dim()];
        t[self.dim() - 1] = if self.flat_gauge {
            -1.0
        } else {
            -self.ke.scal_h / (2.0 * self.m() as f64)
        };
        t
    }

    /// `d a − π*(Ric^h(·, J·))`.
    pub fn curvature_relation_residual(&self, p: &Point) -> Result<f64> {
        let d = self.dim();
        let n = d - 1;
        let da = exterior_derivative(&self.rho_ac_rep).values(p)?;
        let rf = self.ke.ricci_form(&self.project(p)?)?;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let expected = if a < n && b < n { rf[a * n + b] } else { 0.0 };
                worst = worst.max((da[a * d + b] - expected).abs());
            }
        }
        Ok(worst)
    }

    /// `dθ(X,Y) − h(JX, Y)` on `H` (projected coordinate fields).
    pub fn dtheta_base_residual(&self, p: &Point) -> Result<f64> {
        let d = self.dim();
        let n = d - 1;
        let q = self.project(p)?;
        let h = self.ke.h.values(&q)?;
        let jb = self.ke.j.values(&q)?;
        let loc = self.ph.local(p, 0)?;
        let dth = linalg::values(&loc.dtheta);
        let hv: Vec<Vec<f64>> = loc.h_projections().iter().map(|x| linalg::values(x)).collect();
        let mut worst: f64 = 0.0;
        for x in &hv {
            for y in &hv {
                let jx = mat_vec(&jb, &x[..n]);
                worst = worst.max((bilinear(&dth, x, y) - bilinear(&h, &jx, &y[..n])).abs());
            }
        }
        Ok(worst)
    }

    /// Submersion identities, with horizontal lifts `X* = X̃ − θ(X̃) T` of an `h`-orthonormal base frame.
    pub fn submersion_residuals(&self, p: &Point) -> Result<SubmersionResiduals> {
        let d = self.dim();
        let n = d - 1;
        let m = self.m() as f64;
        let q = self.project(p)?;
        let at = WebsterAt::new(self.ph.local(p, 2)?)?;
        let w = at.curvature()?.ricw_rep;
        let g = at.metric.g_values();
        let ric_g = linalg::values(&at.metric.ricci());
        let theta = linalg::values(&at.local.theta);
        let t = linalg::values(&at.local.reeb);
        let j = linalg::values(&at.local.j);
        let h = self.ke.h.values(&q)?;
        let ric_h = semi_riemannian::ricci(&self.ke.h, &q)?;
        let base = orthonormal_frame(&h, (0..n).map(|i| unit(n, i)).collect(), n)?;
        let lift = |x: &[f64]| -> Vec<f64> {
            let mut v = x.to_vec();
            v.push(0.0);
            let th: f64 = v.iter().zip(&theta).map(|(a, b)| a * b).sum();
            v.iter().zip(&t).map(|(vi, ti)| vi - th * ti).collect()
        };
        let lifts: Vec<Vec<f64>> = base.vectors.iter().map(|x| lift(x)).collect();
        let mut r = SubmersionResiduals {
            metric: 0.0,
            ricci_tt: (bilinear(&ric_g, &t, &t) - 0.5 * m * bilinear(&g, &t, &t)).abs(),
            ricci_tx: 0.0,
            ricci_h: 0.0,
            ricci_w: 0.0,
        };
        for (x, xs) in base.vectors.iter().zip(&lifts) {
            r.ricci_tx = r.ricci_tx.max(bilinear(&ric_g, &t, xs).abs());
            for (y, ys) in base.vectors.iter().zip(&lifts) {
                let rh = bilinear(&ric_h, x, y);
                r.metric = r.metric.max((bilinear(&g, xs, ys) - bilinear(&h, x, y)).abs());
                r.ricci_h = r
                    .ricci_h
                    .max((rh - bilinear(&ric_g, xs, ys) - 0.5 * bilinear(&g, xs, ys)).abs());
                r.ricci_w = r.ricci_w.max((rh + bilinear(&w, xs, &mat_vec(&j, ys))).abs());
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::kahler::{make_kahler_einstein, sphere_times_flat, KahlerKind};
    use crate::field::ScalarField;

    fn sample(ac: &AnticanonicalChart) -> Point {
        let u: Vec<f64> = (0..ac.dim()).map(|i| 0.25 + 0.11 * i as f64).collect();
        ac.chart.interior_point(&u, 0.1).unwrap()
    }

    #[test]
    fn catalog_is_transversally_symmetric_einstein() {
        for kind in KahlerKind::CATALOG {
            for m in [1, 2] {
                let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
                let ac = anticanonical_structure(&ke).unwrap();
                let p = sample(&ac);
                let reeb = ac.ph.reeb_at(&p).unwrap();
                for (a, b) in reeb.iter().zip(ac.expected_reeb()) {
                    assert!((a - b).abs() < 1e-13, "{kind} {m}");
                }
                assert!(ac.ph.transversal_symmetry_residual(&p).unwrap().max() < 1e-12);
                assert!(ac.curvature_relation_residual(&p).unwrap() < 1e-11, "{kind} {m}");
                assert!(ac.dtheta_base_residual(&p).unwrap() < 1e-12, "{kind} {m}");
                let s = ac.submersion_residuals(&p).unwrap();
                assert!(s.max() < 1e-10, "{kind} {m}: {s:?}");
                let e = ac.ph.webster_connection().einstein_residual(&p).unwrap();
                assert!(e.max() < 1e-10, "{kind} {m}: {e:?}");
                assert!((e.scal_w - ke.scal_h / 2.0).abs() < 1e-10, "{kind} {m}: {e:?}");
            }
        }
    }

    #[test]
    fn gauge_shift_keeps_einstein() {
        let ke = make_kahler_einstein(KahlerKind::FubiniStudy, 1, 1.0).unwrap();
        let x = ScalarField::coordinate(&ke.base, 0);
        let y = ScalarField::coordinate(&ke.base, 1);
        let f = 0.3 * (&x * &y).sin();
        let ac = gauge_shifted_structure(&ke, &f).unwrap();
        let p = sample(&ac);
        let e = ac.ph.webster_connection().einstein_residual(&p).unwrap();
        assert!(e.max() < 1e-10, "{e:?}");
    }

    #[test]
    fn perturbation_breaks_transversal_symmetry() {
        let ke = make_kahler_einstein(KahlerKind::Flat, 1, 1.0).unwrap();
        let ph = perturbed_structure(&ke, 0.1).unwrap();
        let p = ph.chart().point(&[0.3, -0.2, 0.4]).unwrap();
        assert!(ph.structure_residuals(&p).unwrap().j_squared < 1e-14);
        assert!(ph.transversal_symmetry_residual(&p).unwrap().max() > 1e-3);
        let wd = ph.webster_connection();
        assert!(wd.einstein_residual(&p).is_err());
    }

    #[test]
    fn control_is_not_einstein() {
        let ke = sphere_times_flat().unwrap();
        assert!(anticanonical_structure(&ke).is_err());
        let ac = flat_gauge_structure(&ke).unwrap();
        let p = sample(&ac);
        let e = ac.ph.webster_connection().einstein_residual(&p).unwrap();
        assert!(e.torsion < 1e-12);
        assert!(e.ricci > 1e-2, "{e:?}");
    }
}
