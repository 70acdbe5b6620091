//! The Fefferman metric of a transversally symmetric pseudo-Hermitian Einstein chart.
//!
//! The circle bundle is trivialized as `M × (s)`, with chart `(x, t, s)`. With
//! `ρ = scal^W`, the measured Webster scalar curvature, and `P = ∂s`:
//!
//! ```text
//! a_W = ((m+2)/2) (ds + (2ρ/(m(m+2))) θ)
//! a_θ = a_W − (ρ/(2(m+1))) θ
//! f   = π*L_θ + (4/(m+2)) θ∘a_θ
//! ```
//!
//! `S = ρ/(m(m+1))` and `T* = T − S P` are the constants and fields the
//! curvature identities are stated in.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{exterior_derivative, symmetric_product, OneForm, SymmetricTwoTensor, VectorField};
use crate::linalg::{self, max_abs};
use crate::pseudo_hermitian::WebsterData;
use crate::semi_riemannian::{self, curvature_from, killing_residual, MetricField};
use crate::tensor::pointwise::{axpy, bilinear, dot, mat_vec, scale, sub};

use super::anticanonical::AnticanonicalChart;

/// Half-width of the `s` interval; kept inside `(−π, π)` so `cos(s/2)` stays away from zero.
pub const S_HALF_WIDTH: f64 = 0.9 * PI;

/// Bound on `|W + (ρ/m) dθ|` and the transversal symmetry residual for accepting the input.
pub const EINSTEIN_PRECONDITION_TOL: f64 = 1e-8;

/// `f` on `M × (s)` together with the forms and fields it is built from.
#[derive(Clone, Debug)]
pub struct FeffermanChart {
    pub ac: AnticanonicalChart,
    pub chart: Arc<Chart>,
    pub metric: MetricField,
    /// Measured `scal^W`.
    pub scal_w: f64,
    /// `S = scal^W / (m(m+1))`.
    pub s_const: f64,
    pub theta: OneForm,
    pub a_w: OneForm,
    pub a_theta: OneForm,
    /// Pullback of the anticanonical connection representative.
    pub a_ac: OneForm,
    pub p: VectorField,
    pub t_star: VectorField,
    webster: WebsterData,
}

/// Builds `f` after checking that the input is transversally symmetric and Einstein at the chart center.
pub fn fefferman_metric(ac: &AnticanonicalChart) -> Result<FeffermanChart> {
    let webster = ac.ph.webster_connection();
    let center = ac.chart.center();
    let e = webster.einstein_residual(&center)?;
    if e.max() > EINSTEIN_PRECONDITION_TOL {
        return Err(GeomError::Precondition {
            name: "pseudo-Hermitian Einstein",
            residual: e.max(),
            tolerance: EINSTEIN_PRECONDITION_TOL,
        });
    }
    let m = ac.m() as f64;
    let rho = e.scal_w;
    let dm = ac.dim();

    let mut bounds = ac.chart.bounds().to_vec();
    let mut names = ac.chart.coordinate_names().to_vec();
    bounds.push((-S_HALF_WIDTH, S_HALF_WIDTH));
    names.push("s".into());
    let chart = Chart::new(bounds, names)?;
    let idx: Vec<usize> = (0..dm).collect();

    let theta = ac.ph.theta().pull_back(&chart, &idx);
    let ds = OneForm::coordinate(&chart, dm);
    let a_w = (&ds + &theta.scale(2.0 * rho / (m * (m + 2.0)))).scale((m + 2.0) / 2.0);
    let a_theta = &a_w - &theta.scale(rho / (2.0 * (m + 1.0)));
    let levi = ac.ph.levi_form().pull_back(&chart, &idx);
    let f = &levi + &symmetric_product(&theta, &a_theta).scale(4.0 / (m + 2.0));
    let metric = MetricField::new(f, (dm, 1))?;

    let s_const = rho / (m * (m + 1.0));
    let p = VectorField::coordinate(&chart, dm);
    let t_star = &ac.ph.reeb_field().extend(&chart, &idx) - &p.scale(s_const);
    Ok(FeffermanChart {
        ac: ac.clone(),
        a_ac: ac.rho_ac_rep.pull_back(&chart, &idx),
        chart,
        metric,
        scal_w: rho,
        s_const,
        theta,
        a_w,
        a_theta,
        p,
        t_star,
        webster,
    })
}

/// Residuals of the algebraic structure of `f` on the frame `(X*, T*, P)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FeffermanStructure {
    /// `f(P,P)`, `f(T*,T*)`, `f(P,T*) − 1`.
    pub null_pair: f64,
    /// `f(X*, P)`, `f(X*, T*)`.
    pub orthogonality: f64,
    /// `f(X*, Y*) − L_θ(X, Y)`.
    pub levi: f64,
    /// `f` minus its closed form in `π*h` and the connection forms.
    pub closed_form: f64,
    /// `f⁻¹(θ,θ)` and `f⁻¹(a_θ,a_θ)`.
    pub lightlike: f64,
    /// `d a_W + π*W`, with `Ric^W = iW` on the pseudo-Hermitian chart.
    pub connection_curvature: f64,
}

impl FeffermanStructure {
    pub fn max(&self) -> f64 {
        [
            self.null_pair,
            self.orthogonality,
            self.levi,
            self.closed_form,
            self.lightlike,
            self.connection_curvature,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Ricci residuals of `f` at one point.
#[derive(Clone, Copy, Debug, Default)]
pub struct FeffermanRicci {
    /// `Ric − (m S f + (m/2) ds²)`.
    pub closed_form: f64,
    /// `Ric − (m S f + (2m/(m+2)²) b²)` with `b = a_θ − ((m+2)/2) S θ`.
    pub closed_form_b: f64,
    /// `Ric(P,P) − m/2`, `Ric(T*,P) − (m/2) S`, `Ric(T*,T*) − (m/2) S²`.
    pub components: f64,
    /// Trace-free Ricci minus `(m/2) ds² + (mS/(2m+2)) f`.
    pub trace_free: f64,
    /// `Ric₀(P,P)`, which is `m/2`.
    pub trace_free_pp: f64,
    /// Max-norm of the trace-free Ricci tensor; positive means `f` is not Einstein.
    pub trace_free_norm: f64,
    /// Measured scalar curvature.
    pub scalar: f64,
}

impl FeffermanRicci {
    pub fn max(&self) -> f64 {
        self.closed_form.max(self.closed_form_b).max(self.components).max(self.trace_free)
    }
}

/// Residuals of the curvature and covariant derivative identities in the frame `(X*, T*, P)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FeffermanIdentities {
    /// `R(P, T*)`.
    pub r_p_tstar: f64,
    /// `R(X*, P) T* − ¼ S X*`.
    pub r_x_p_tstar: f64,
    /// `R(P, X*) Y* − ¼ L(X,Y) (T* + S P)`.
    pub r_p_x_y: f64,
    /// `R(T*, X*) Y* − ¼ S L(X,Y) (T* + S P)`.
    pub r_tstar_x_y: f64,
    /// `R(X*,Y*)Z* − (R^W(X,Y)Z)* + ½S (dθ(Y,Z) JX − dθ(X,Z) JY)* − S dθ(X,Y) (JZ)*`.
    pub r_horizontal: f64,
    /// `∇_{X*}Y* − (∇^W_X Y)* + ½ dθ(X,Y)(T* + S P)`.
    pub nabla_xy: f64,
    /// `∇_{T*}X* = ∇_{X*}T* = ½ S (JX)*`.
    pub nabla_tstar_x: f64,
    /// `∇_P X* = ∇_{X*}P = ½ (JX)*`.
    pub nabla_p_x: f64,
    /// `∇_P T*`, `∇_{T*}P`, `∇_{T*}T*`, `∇_P P`.
    pub nabla_vertical: f64,
    /// `∇(T* − S P)` and `∇ ds`.
    pub parallel: f64,
    /// `f(T* − S P, ·) − ds`.
    pub dual: f64,
    /// `L_{T*} f` and `L_P f`.
    pub killing: f64,
}

impl FeffermanIdentities {
    pub fn max(&self) -> f64 {
        [
            self.r_p_tstar,
            self.r_x_p_tstar,
            self.r_p_x_y,
            self.r_tstar_x_y,
            self.r_horizontal,
            self.nabla_xy,
            self.nabla_tstar_x,
            self.nabla_p_x,
            self.nabla_vertical,
            self.parallel,
            self.dual,
            self.killing,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `R(X,Y)Z` for `R(∂a,∂b)∂c = R^f_{cab} ∂f` stored at `((f*d + c)*d + a)*d + b`.
fn curv_apply(r: &[f64], d: usize, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    (0..d)
        .map(|f| {
            let mut s = 0.0;
            for c in 0..d {
                if z[c] == 0.0 {
                    continue;
                }
                for a in 0..d {
                    if x[a] == 0.0 {
                        continue;
                    }
                    for b in 0..d {
                        s += r[((f * d + c) * d + a) * d + b] * z[c] * x[a] * y[b];
                    }
                }
            }
            s
        })
        .collect()
}

/// `∇_u Y` from `∇Y` stored with the derivative index last.
fn along(nabla: &[f64], u: &[f64]) -> Vec<f64> {
    let d = u.len();
    (0..d).map(|a| dot(&nabla[a * d..(a + 1) * d], u)).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    max_abs(sub(a, b))
}

impl FeffermanChart {
    pub fn m(&self) -> usize {
        self.ac.m()
    }

    pub fn dim(&self) -> usize {
        self.ac.dim() + 1
    }

    /// Projection to the pseudo-Hermitian chart.
    pub fn project(&self, p: &Point) -> Result<Point> {
        self.ac.chart.point(&p.coords()[..self.ac.dim()])
    }

    /// `ds` on the Fefferman chart.
    pub fn ds(&self) -> OneForm {
        OneForm::coordinate(&self.chart, self.dim() - 1)
    }

    /// `f` from `π*h` and the connection forms: `π*h + C(−β₁² + β₂²)` with
    /// `C = 4m(m+1)/((m+2)² scal^h)`, `β₁ = a_W + a_ac`, `β₂ = a_W − a_ac/(m+1)`;
    /// in the flat gauge `π*h + (4/(m+2)) θ∘a_W`.
    pub fn closed_form_metric(&self) -> SymmetricTwoTensor {
        let m = self.m() as f64;
        let n = self.ac.ke.dim();
        let idx: Vec<usize> = (0..n).collect();
        let h = self.ac.ke.h.tensor().pull_back(&self.chart, &idx);
        if self.ac.flat_gauge {
            return &h + &symmetric_product(&self.theta, &self.a_w).scale(4.0 / (m + 2.0));
        }
        let c = 4.0 * m * (m + 1.0) / ((m + 2.0).powi(2) * self.ac.ke.scal_h);
        let b1 = &self.a_w + &self.a_ac;
        let b2 = &self.a_w - &self.a_ac.scale(1.0 / (m + 1.0));
        let quad = &symmetric_product(&b2, &b2) - &symmetric_product(&b1, &b1);
        &h + &quad.scale(c)
    }

    /// `X* = X̃ − θ(X̃) T* − (2/(m+2)) a_θ(X̃) P` for a vector field on the pseudo-Hermitian chart.
    pub fn lift(&self, x: &VectorField) -> VectorField {
        let m = self.m() as f64;
        let idx: Vec<usize> = (0..self.ac.dim()).collect();
        let xt = x.extend(&self.chart, &idx);
        let th = self.theta.apply(&xt);
        let at = (2.0 / (m + 2.0)) * self.a_theta.apply(&xt);
        &(&xt - &self.t_star.times(&th)) - &self.p.times(&at)
    }

    /// Pointwise version of [`lift`](Self::lift) for a vector `v` at `π(p)`.
    pub fn lift_vector(&self, p: &Point, v: &[f64]) -> Result<Vec<f64>> {
        let m = self.m() as f64;
        let mut xt = v.to_vec();
        xt.push(0.0);
        let th = dot(&self.theta.values(p)?, &xt);
        let at = (2.0 / (m + 2.0)) * dot(&self.a_theta.values(p)?, &xt);
        let ts = self.t_star.values(p)?;
        let pv = self.p.values(p)?;
        Ok(axpy(-at, &pv, &axpy(-th, &ts, &xt)))
    }

    /// Horizontal projections `∂i − θ(∂i) T` of the base coordinate fields on the pseudo-Hermitian chart.
    pub fn horizontal_fields(&self) -> Vec<VectorField> {
        let c = &self.ac.chart;
        let reeb = self.ac.ph.reeb_field();
        let theta = self.ac.ph.theta();
        (0..self.ac.ke.dim())
            .map(|i| &VectorField::coordinate(c, i) - &reeb.times(&theta.component(i)))
            .collect()
    }

    pub fn signature_check(&self, p: &Point) -> Result<()> {
        self.metric.check_at(p)
    }

    pub fn structure_residuals(&self, p: &Point) -> Result<FeffermanStructure> {
        let q = self.project(p)?;
        let f = self.metric.values(p)?;
        let pv = self.p.values(p)?;
        let ts = self.t_star.values(p)?;
        let levi = self.ac.ph.levi_form().values(&q)?;
        let xs: Vec<Vec<f64>> = self.horizontal_fields().iter().map(|x| x.values(&q)).collect::<Result<_>>()?;
        let lifts: Vec<Vec<f64>> = xs.iter().map(|x| self.lift_vector(p, x)).collect::<Result<_>>()?;
        let mut r = FeffermanStructure {
            null_pair: [bilinear(&f, &pv, &pv), bilinear(&f, &ts, &ts), bilinear(&f, &pv, &ts) - 1.0]
                .into_iter()
                .fold(0.0_f64, |a, b| a.max(b.abs())),
            ..Default::default()
        };
        for (x, xl) in xs.iter().zip(&lifts) {
            r.orthogonality = r
                .orthogonality
                .max(bilinear(&f, xl, &pv).abs())
                .max(bilinear(&f, xl, &ts).abs());
            for (y, yl) in xs.iter().zip(&lifts) {
                r.levi = r.levi.max((bilinear(&f, xl, yl) - bilinear(&levi, x, y)).abs());
            }
        }
        let closed = self.closed_form_metric().values(p)?;
        r.closed_form = dist(&f, &closed);
        let d = self.dim();
        let finv = self.metric.at(p, 1)?.ginv_values();
        let th = self.theta.values(p)?;
        let at = self.a_theta.values(p)?;
        r.lightlike = bilinear(&finv, &th, &th).abs().max(bilinear(&finv, &at, &at).abs());
        let daw = exterior_derivative(&self.a_w).values(p)?;
        let w = self.webster.curvature(&q)?.ricw_rep;
        let dm = d - 1;
        r.connection_curvature = max_abs((0..d * d).map(|i| {
            let (a, b) = (i / d, i % d);
            let wv = if a < dm && b < dm { w[a * dm + b] } else { 0.0 };
            daw[i] + wv
        }));
        Ok(r)
    }

    pub fn ricci_residuals(&self, p: &Point) -> Result<FeffermanRicci> {
        let m = self.m() as f64;
        let s = self.s_const;
        let curv = semi_riemannian::riemann(&self.metric, p)?;
        let f = self.metric.values(p)?;
        let ds = self.ds().values(p)?;
        let d = self.dim();
        let sq = |a: &[f64]| -> Vec<f64> { (0..d * d).map(|i| a[i / d] * a[i % d]).collect() };
        let ds2 = sq(&ds);
        let closed: Vec<f64> = f.iter().zip(&ds2).map(|(g, q)| m * s * g + 0.5 * m * q).collect();
        let theta = self.theta.values(p)?;
        let b = axpy(-(m + 2.0) / 2.0 * s, &theta, &self.a_theta.values(p)?);
        let b2 = sq(&b);
        let closed_b: Vec<f64> = f
            .iter()
            .zip(&b2)
            .map(|(g, q)| m * s * g + 2.0 * m / (m + 2.0).powi(2) * q)
            .collect();
        let pv = self.p.values(p)?;
        let ts = self.t_star.values(p)?;
        let ric = &curv.ricci;
        let components = [
            bilinear(ric, &pv, &pv) - 0.5 * m,
            bilinear(ric, &ts, &pv) - 0.5 * m * s,
            bilinear(ric, &ts, &ts) - 0.5 * m * s * s,
        ]
        .into_iter()
        .fold(0.0_f64, |a, b| a.max(b.abs()));
        let tf = semi_riemannian::trace_free_ricci(&curv, &f);
        let tf_expected: Vec<f64> = f
            .iter()
            .zip(&ds2)
            .map(|(g, q)| 0.5 * m * q + m * s / (2.0 * m + 2.0) * g)
            .collect();
        Ok(FeffermanRicci {
            closed_form: dist(ric, &closed),
            closed_form_b: dist(ric, &closed_b),
            components,
            trace_free: dist(&tf, &tf_expected),
            trace_free_pp: bilinear(&tf, &pv, &pv),
            trace_free_norm: max_abs(tf.iter().copied()),
            scalar: curv.scalar,
        })
    }

    pub fn identity_residuals(&self, p: &Point) -> Result<FeffermanIdentities> {
        let d = self.dim();
        let s = self.s_const;
        let q = self.project(p)?;
        let at = self.metric.at(p, 2)?;
        let r_up = linalg::values(&at.riemann_up());
        let cov = |v: &VectorField| -> Result<Vec<f64>> {
            semi_riemannian::covariant_derivative(&self.metric, v.tensor(), p)
        };

        let w_at = self.webster.at(&q, 2)?;
        let rw_up = linalg::values(&w_at.webster.curvature());
        let dth = linalg::values(&w_at.local.dtheta);
        let jm = linalg::values(&w_at.local.j);
        let levi = self.ac.ph.levi_form().values(&q)?;

        let hfields = self.horizontal_fields();
        let xs: Vec<Vec<f64>> = hfields.iter().map(|x| x.values(&q)).collect::<Result<_>>()?;
        let xl: Vec<Vec<f64>> = xs.iter().map(|x| self.lift_vector(p, x)).collect::<Result<_>>()?;
        let jxl: Vec<Vec<f64>> = xs.iter().map(|x| self.lift_vector(p, &mat_vec(&jm, x))).collect::<Result<_>>()?;
        let pv = self.p.values(p)?;
        let ts = self.t_star.values(p)?;
        let u = axpy(s, &pv, &ts);
        let zero = vec![0.0; d];

        let mut r = FeffermanIdentities::default();
        for e in 0..d {
            let z = crate::tensor::pointwise::unit(d, e);
            r.r_p_tstar = r.r_p_tstar.max(max_abs(curv_apply(&r_up, d, &pv, &ts, &z)));
        }
        for (i, x) in xl.iter().enumerate() {
            r.r_x_p_tstar = r
                .r_x_p_tstar
                .max(dist(&curv_apply(&r_up, d, x, &pv, &ts), &scale(0.25 * s, x)));
            for (k, y) in xl.iter().enumerate() {
                let l = bilinear(&levi, &xs[i], &xs[k]);
                r.r_p_x_y = r.r_p_x_y.max(dist(&curv_apply(&r_up, d, &pv, x, y), &scale(0.25 * l, &u)));
                r.r_tstar_x_y = r
                    .r_tstar_x_y
                    .max(dist(&curv_apply(&r_up, d, &ts, x, y), &scale(0.25 * s * l, &u)));
                for (n, z) in xl.iter().enumerate() {
                    let rw = curv_apply(&rw_up, d - 1, &xs[i], &xs[k], &xs[n]);
                    let mut expected = self.lift_vector(p, &rw)?;
                    expected = axpy(-0.5 * s * bilinear(&dth, &xs[k], &xs[n]), &jxl[i], &expected);
                    expected = axpy(0.5 * s * bilinear(&dth, &xs[i], &xs[n]), &jxl[k], &expected);
                    expected = axpy(s * bilinear(&dth, &xs[i], &xs[k]), &jxl[n], &expected);
                    r.r_horizontal = r.r_horizontal.max(dist(&curv_apply(&r_up, d, x, y, z), &expected));
                }
            }
        }

        let lifted: Vec<VectorField> = hfields.iter().map(|x| self.lift(x)).collect();
        let nabla_l: Vec<Vec<f64>> = lifted.iter().map(&cov).collect::<Result<_>>()?;
        let nabla_t = cov(&self.t_star)?;
        let nabla_p = cov(&self.p)?;
        let hj: Vec<Vec<crate::jet::Jet>> = hfields.iter().map(|y| y.jets(&q, 1)).collect::<Result<_>>()?;
        for (i, x) in xl.iter().enumerate() {
            for k in 0..xl.len() {
                let w = w_at.webster.along(&xs[i], &hj[k]);
                let expected = axpy(-0.5 * bilinear(&dth, &xs[i], &xs[k]), &u, &self.lift_vector(p, &w)?);
                r.nabla_xy = r.nabla_xy.max(dist(&along(&nabla_l[k], x), &expected));
            }
            r.nabla_tstar_x = r
                .nabla_tstar_x
                .max(dist(&along(&nabla_l[i], &ts), &scale(0.5 * s, &jxl[i])))
                .max(dist(&along(&nabla_t, x), &scale(0.5 * s, &jxl[i])));
            r.nabla_p_x = r
                .nabla_p_x
                .max(dist(&along(&nabla_l[i], &pv), &scale(0.5, &jxl[i])))
                .max(dist(&along(&nabla_p, x), &scale(0.5, &jxl[i])));
        }
        r.nabla_vertical = [
            along(&nabla_t, &pv),
            along(&nabla_p, &ts),
            along(&nabla_t, &ts),
            along(&nabla_p, &pv),
        ]
        .iter()
        .fold(0.0_f64, |a, v| a.max(dist(v, &zero)));

        let v = &self.t_star - &self.p.scale(s);
        let ds = self.ds();
        r.parallel = max_abs(cov(&v)?).max(max_abs(semi_riemannian::covariant_derivative(
            &self.metric,
            ds.tensor(),
            p,
        )?));
        let f = self.metric.values(p)?;
        let vv = v.values(p)?;
        r.dual = dist(&mat_vec(&f, &vv), &ds.values(p)?);
        r.killing = killing_residual(&self.metric, &self.t_star, p)?.max(killing_residual(&self.metric, &self.p, p)?);
        Ok(r)
    }

    /// `max |d(a_W + a_ac)|`; the sum is a constant multiple of `ds` in the curved gauge.
    pub fn closed_sum_residual(&self, p: &Point) -> Result<f64> {
        Ok(max_abs(exterior_derivative(&(&self.a_w + &self.a_ac)).values(p)?))
    }

    /// Ricci curvature of `f` at `p` (values).
    pub fn ricci(&self, p: &Point) -> Result<Vec<f64>> {
        Ok(curvature_from(&self.metric.at(p, 2)?)?.ricci)
    }
}
