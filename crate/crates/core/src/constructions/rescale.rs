//! The conformal rescaling `f̃ = e^{2φ} f` with `φ = −ln cos(s/2)`.
//!
//! In the coordinate `τ = −((m+2)/2) s`, `φ` solves `φ'' − φ'² = 1/(m+2)²`.
//! The rescaled metric is Einstein with `Ric = λ f̃`, `λ = (2m+1) scal^h / (4m(m+1))`.

use crate::chart::Point;
use crate::error::{GeomError, Result};
use crate::field::ScalarField;
use crate::linalg::max_abs;
use crate::semi_riemannian::{conformal_correction_from, curvature_from, MetricField};
use crate::tensor::pointwise::bilinear;

use super::fefferman::FeffermanChart;

/// `f̃` together with the Fefferman chart it rescales.
#[derive(Clone, Debug)]
pub struct RescaledChart {
    pub fefferman: FeffermanChart,
    pub phi: ScalarField,
    pub metric: MetricField,
    /// Expected Einstein constant `λ`.
    pub lambda: f64,
    /// Expected scalar curvature `(2m+1) scal^h / (2m)`.
    pub scalar: f64,
}

/// Residuals of the rescaling at one point.
#[derive(Clone, Copy, Debug, Default)]
pub struct RescaleResiduals {
    /// `φ_ττ − φ_τ² − 1/(m+2)²`.
    pub ode: f64,
    /// `Ric(f̃) − λ f̃`, recomputed from `f̃`.
    pub einstein: f64,
    /// `Ric(f) + C_φ − Ric(f̃)`.
    pub oracle: f64,
    /// `scal(f̃)` minus its expected value.
    pub scalar: f64,
    /// `C_φ − c₁ ds² − c₂ f` with `c₁ = C_φ(P,P)`, `c₂ = C_φ(P,T*) + S c₁`.
    pub support: f64,
    /// `c₁ + m/2`.
    pub support_ds2: f64,
    /// `c₂`, which vanishes for flat bases.
    pub support_f: f64,
    /// `‖Ric(f) − λ f‖`, for comparison (not expected to vanish).
    pub unrescaled_einstein: f64,
    /// `C_φ(P,P)`.
    pub c1: f64,
    /// Measured `scal(f̃)`.
    pub measured_scalar: f64,
}

impl RescaleResiduals {
    /// Maximum over the residuals that are expected to vanish.
    pub fn max(&self) -> f64 {
        [self.ode, self.einstein, self.oracle, self.scalar, self.support, self.support_ds2]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `f̃ = e^{2φ} f` with `φ = −ln cos(s/2)`.
pub fn einstein_rescale(fc: &FeffermanChart) -> Result<RescaledChart> {
    let m = fc.m() as f64;
    let scal = fc.ac.ke.scal_h;
    let s = ScalarField::coordinate(&fc.chart, fc.dim() - 1);
    let phi = -(0.5 * s).cos().ln();
    Ok(RescaledChart {
        metric: fc.metric.conformal(&phi),
        phi,
        lambda: (2.0 * m + 1.0) * scal / (4.0 * m * (m + 1.0)),
        scalar: (2.0 * m + 1.0) * scal / (2.0 * m),
        fefferman: fc.clone(),
    })
}

impl RescaledChart {
    pub fn residuals(&self, p: &Point) -> Result<RescaleResiduals> {
        let fc = &self.fefferman;
        let m = fc.m() as f64;
        let d = fc.dim();
        let si = d - 1;
        let phij = self.phi.jet(p, 2)?;
        let phi_s = phij.derivative(&[si]);
        let phi_ss = phij.derivative(&[si, si]);
        let k = -2.0 / (m + 2.0);
        let ode = (k * k * phi_ss - (k * phi_s).powi(2) - (m + 2.0).powi(-2)).abs();

        let at_f = fc.metric.at(p, 2)?;
        let ric_f = curvature_from(&at_f)?.ricci;
        let c = conformal_correction_from(&at_f, &phij);
        let curv = curvature_from(&self.metric.at(p, 2)?)?;
        let ft = self.metric.values(p)?;
        let f = at_f.g_values();

        let pv = fc.p.values(p)?;
        let ts = fc.t_star.values(p)?;
        let ds = fc.ds().values(p)?;
        let c1 = bilinear(&c, &pv, &pv);
        let c2 = bilinear(&c, &pv, &ts) + fc.s_const * c1;
        let support = max_abs((0..d * d).map(|i| c[i] - c1 * ds[i / d] * ds[i % d] - c2 * f[i]));

        Ok(RescaleResiduals {
            ode,
            einstein: max_abs(curv.ricci.iter().zip(&ft).map(|(r, g)| r - self.lambda * g)),
            oracle: max_abs((0..d * d).map(|i| ric_f[i] + c[i] - curv.ricci[i])),
            scalar: (curv.scalar - self.scalar).abs(),
            support,
            support_ds2: (c1 + 0.5 * m).abs(),
            support_f: c2.abs(),
            unrescaled_einstein: max_abs(ric_f.iter().zip(&f).map(|(r, g)| r - self.lambda * g)),
            c1,
            measured_scalar: curv.scalar,
        })
    }

    /// `‖f̃ − f‖` on the slice `s = 0` through `p`.
    pub fn slice_residual(&self, p: &Point) -> Result<f64> {
        let mut coords = p.coords().to_vec();
        let last = coords.len() - 1;
        coords[last] = 0.0;
        let q = self.fefferman.chart.point(&coords)?;
        let ft = self.metric.values(&q)?;
        let f = self.fefferman.metric.values(&q)?;
        Ok(max_abs(ft.iter().zip(&f).map(|(a, b)| a - b)))
    }

    /// Rejects points where `cos(s/2)` is too small for the rescaled metric to be well conditioned.
    pub fn check_point(&self, p: &Point, min_cos: f64) -> Result<()> {
        let s = p.coords()[p.dim() - 1];
        let c = (0.5 * s).cos();
        if c < min_cos {
            return Err(GeomError::Degenerate {
                what: "rescaled metric",
                detail: format!("cos(s/2) = {c:.3e} below {min_cos:.3e}"),
            });
        }
        Ok(())
    }
}
