//! Pseudo-Hermitian structures `(θ, J)` on charts of dimension `2m+1` and their
//! Tanaka–Webster geometry in the transversally symmetric case.
//!
//! `J` is stored as an endomorphism of the whole tangent space with `J(T) = 0`.
//! The Webster–Ricci tensor is purely imaginary; it is handled through its real
//! representative `W` with `Ric^W = iW`, so that
//!
//! * `W(X,Y) = Σ ε_α R^W(X, Y, e_α, Je_α)`,
//! * `scal^W = −Σ ε_α W(e_α, Je_α)`,
//! * the Einstein condition reads `W = −(scal^W / m) dθ`.

use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{Endomorphism, OneForm, SymmetricTwoTensor, TwoForm, VectorField};
use crate::frame::{unitary_frame, Frame, UnitaryFrame};
use crate::jet::Jet;
use crate::linalg::{self, max_abs};
use crate::semi_riemannian::{lie_derivative_metric, lower_curvature, MetricAt, MetricField};
use crate::tensor::pointwise::{bilinear, eval4, mat_vec, sub, unit};
use crate::tensor::{Connection, TensorJets};

/// Largest transversal-symmetry residual accepted by [`WebsterData`].
pub const TSPH_TOL: f64 = 1e-8;

/// A contact form `θ` and a complex structure `J` on `H = ker θ`.
#[derive(Clone, Debug)]
pub struct PHStructure {
    theta: OneForm,
    j: Endomorphism,
    m: usize,
    levi_signature: (usize, usize),
}

impl PHStructure {
    pub fn new(theta: OneForm, j: Endomorphism, m: usize, levi_signature: (usize, usize)) -> Result<Self> {
        if theta.dim() != 2 * m + 1 || j.dim() != 2 * m + 1 {
            return Err(GeomError::DimensionMismatch {
                expected: 2 * m + 1,
                got: theta.dim(),
            });
        }
        if levi_signature.0 + levi_signature.1 != m {
            return Err(GeomError::Unsupported(format!(
                "Levi signature {levi_signature:?} does not add up to m = {m}"
            )));
        }
        Ok(PHStructure {
            theta,
            j,
            m,
            levi_signature,
        })
    }

    pub fn theta(&self) -> &OneForm {
        &self.theta
    }

    pub fn j(&self) -> &Endomorphism {
        &self.j
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 1
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.theta.chart()
    }

    pub fn levi_signature(&self) -> (usize, usize) {
        self.levi_signature
    }

    pub fn dtheta(&self) -> TwoForm {
        crate::field::exterior_derivative(&self.theta)
    }

    /// The Reeb field as a field. Points where the defining system is singular
    /// evaluate to NaN; use [`PHStructure::reeb_at`] for a checked value.
    pub fn reeb_field(&self) -> VectorField {
        let ph = self.clone();
        VectorField::from_fn(self.chart(), move |x, k| {
            let (theta, dtheta, _) = ph.raw_jets(x, k);
            reeb_from(&theta, &dtheta, ph.dim()).unwrap_or_else(|_| vec![Jet::constant(x.len(), k, f64::NAN); x.len()])
        })
    }

    pub fn reeb_at(&self, p: &Point) -> Result<Vec<f64>> {
        Ok(linalg::values(&self.local(p, 0)?.reeb))
    }

    /// `L_θ(X,Y) = dθ(X, JY)`, extended by zero along `T`.
    pub fn levi_form(&self) -> SymmetricTwoTensor {
        let ph = self.clone();
        SymmetricTwoTensor::from_fn(self.chart(), move |x, k| {
            let (_, dtheta, j) = ph.raw_jets(x, k);
            levi_from(&dtheta, &j, ph.dim())
        })
    }

    /// `g_θ = L_θ + θ∘θ`, with signature `(2p+1, 2q)`.
    pub fn g_theta(&self) -> MetricField {
        let ph = self.clone();
        let g = SymmetricTwoTensor::from_fn(self.chart(), move |x, k| {
            let (theta, dtheta, j) = ph.raw_jets(x, k);
            g_theta_from(&theta, &dtheta, &j, ph.dim())
        });
        let (p, q) = self.levi_signature;
        MetricField::new(g, (2 * p + 1, 2 * q)).expect("dimension checked in PHStructure::new")
    }

    fn raw_jets(&self, x: &[f64], k: usize) -> (Vec<Jet>, Vec<Jet>, Vec<Jet>) {
        let d = self.dim();
        let hi = self.theta.eval_raw(x, k + 1);
        let dtheta = dtheta_from(&hi, d);
        let theta = hi.iter().map(|t| t.truncate(k)).collect();
        (theta, dtheta, self.j.eval_raw(x, k))
    }

    /// Jets of all structure data at `p`, expanded to `degree`.
    pub fn local(&self, p: &Point, degree: usize) -> Result<PHLocal> {
        self.chart().check(p.coords())?;
        let d = self.dim();
        let hi = self.theta.jets(p, degree + 1)?;
        let dtheta = dtheta_from(&hi, d);
        let theta: Vec<Jet> = hi.iter().map(|t| t.truncate(degree)).collect();
        let j = self.j.jets(p, degree)?;
        let reeb = reeb_from(&theta, &dtheta, d)?;
        Ok(PHLocal {
            dim: d,
            m: self.m,
            theta,
            dtheta,
            j,
            reeb,
        })
    }

    /// Residuals of the structure invariants at `p`.
    pub fn structure_residuals(&self, p: &Point) -> Result<StructureResiduals> {
        let loc = self.local(p, 1)?;
        let d = self.dim();
        let theta = linalg::values(&loc.theta);
        let j = linalg::values(&loc.j);
        let t = linalg::values(&loc.reeb);
        let dth = linalg::values(&loc.dtheta);
        let h = loc.h_projections();
        let hv: Vec<Vec<f64>> = h.iter().map(|x| linalg::values(x)).collect();

        let mut j_squared = max_abs(mat_vec(&j, &t));
        for v in &hv {
            let jv = mat_vec(&j, v);
            let jjv = mat_vec(&j, &jv);
            j_squared = j_squared
                .max(max_abs(jjv.iter().zip(v).map(|(a, b)| a + b)))
                .max(dot(&theta, &jv).abs());
        }
        let levi = levi_from(&loc.dtheta, &loc.j, d);
        let lv = linalg::values(&levi);
        let mut levi_symmetry: f64 = 0.0;
        for a in &hv {
            for b in &hv {
                levi_symmetry = levi_symmetry.max((bilinear(&lv, a, b) - bilinear(&lv, b, a)).abs());
            }
        }
        let reeb = (dot(&theta, &t) - 1.0)
            .abs()
            .max(max_abs((0..d).map(|a| (0..d).map(|b| t[b] * dth[b * d + a]).sum::<f64>())));
        let contact = linalg::determinant(&linalg::values(&reeb_matrix(&loc.theta, &loc.dtheta, d)), d);
        Ok(StructureResiduals {
            reeb,
            j_squared,
            levi_symmetry,
            integrability: loc.integrability_residual(),
            contact_volume: contact,
        })
    }

    /// Transversal symmetry at `p`: `max |[T,X] + J[T,JX]|` over the projected
    /// coordinate fields `X = ∂_i − θ_i T`, and the Killing residual of `T` for `g_θ`.
    pub fn transversal_symmetry_residual(&self, p: &Point) -> Result<TsphResidual> {
        let loc = self.local(p, 1)?;
        let d = self.dim();
        let g = g_theta_from(&loc.theta, &loc.dtheta, &loc.j, d);
        Ok(TsphResidual {
            bracket: loc.tsph_bracket_residual(),
            killing: max_abs(lie_derivative_metric(&g, &loc.reeb, d)),
        })
    }

    /// Tanaka–Webster data; every point evaluation checks transversal symmetry first.
    pub fn webster_connection(&self) -> WebsterData {
        WebsterData { ph: self.clone() }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dtheta_from(theta_hi: &[Jet], d: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for k in 0..d {
            out.push(theta_hi[k].partial(i) - theta_hi[i].partial(k));
        }
    }
    out
}

/// `A_ab = dθ_ba + θ_a θ_b`; `A T = θ` encodes `θ(T) = 1`, `T⌟dθ = 0`.
fn reeb_matrix(theta: &[Jet], dtheta: &[Jet], d: usize) -> Vec<Jet> {
    let mut a = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            a.push(&dtheta[c * d + r] + &(&theta[r] * &theta[c]));
        }
    }
    a
}

fn reeb_from(theta: &[Jet], dtheta: &[Jet], d: usize) -> Result<Vec<Jet>> {
    let deg = dtheta[0].degree().min(theta[0].degree());
    let theta: Vec<Jet> = theta.iter().map(|t| t.truncate(deg)).collect();
    linalg::solve(&reeb_matrix(&theta, dtheta, d), &theta, d, "Reeb system (contact condition)")
}

fn levi_from(dtheta: &[Jet], j: &[Jet], d: usize) -> Vec<Jet> {
    let nv = dtheta[0].nvars();
    let deg = dtheta[0].degree().min(j[0].degree());
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Jet::zero(nv, deg);
            for c in 0..d {
                acc += &dtheta[a * d + c] * &j[c * d + b];
            }
            out.push(acc);
        }
    }
    out
}

fn g_theta_from(theta: &[Jet], dtheta: &[Jet], j: &[Jet], d: usize) -> Vec<Jet> {
    let mut g = levi_from(dtheta, j, d);
    for a in 0..d {
        for b in 0..d {
            g[a * d + b] += &theta[a] * &theta[b];
        }
    }
    g
}

/// `[u, v]` at the base point for vector fields given as jets of degree ≥ 1.
fn bracket_at(u: &[Jet], v: &[Jet]) -> Vec<f64> {
    let d = u.len();
    (0..d)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..d {
                s += u[i].value() * v[k].partial(i).value() - v[i].value() * u[k].partial(i).value();
            }
            s
        })
        .collect()
}

fn apply_jets(j: &[Jet], x: &[Jet]) -> Vec<Jet> {
    let d = x.len();
    (0..d).map(|a| crate::jet::dot(&j[a * d..(a + 1) * d], x)).collect()
}

/// Invariants of a [`PHStructure`] at one point.
#[derive(Clone, Debug)]
pub struct StructureResiduals {
    /// `max(|θ(T) − 1|, |T⌟dθ|)`.
    pub reeb: f64,
    /// `J² = −1` on `H`, `J(T) = 0`, `θ∘J = 0`.
    pub j_squared: f64,
    pub levi_symmetry: f64,
    pub integrability: f64,
    /// Determinant of the Reeb system; nonzero iff `θ` is contact.
    pub contact_volume: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct TsphResidual {
    pub bracket: f64,
    pub killing: f64,
}

impl TsphResidual {
    pub fn max(&self) -> f64 {
        self.bracket.max(self.killing)
    }
}

/// Jets of `θ`, `dθ`, `J` and `T` at a point.
#[derive(Clone, Debug)]
pub struct PHLocal {
    pub dim: usize,
    pub m: usize,
    pub theta: Vec<Jet>,
    pub dtheta: Vec<Jet>,
    pub j: Vec<Jet>,
    pub reeb: Vec<Jet>,
}

impl PHLocal {
    /// Fields `∂_i − θ_i T`, spanning `H`.
    pub fn h_projections(&self) -> Vec<Vec<Jet>> {
        let d = self.dim;
        let nv = self.theta[0].nvars();
        let deg = self.reeb[0].degree().min(self.theta[0].degree());
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| Jet::constant(nv, deg, if i == k { 1.0 } else { 0.0 }) - &self.theta[i] * &self.reeb[k])
                    .collect()
            })
            .collect()
    }

    fn tsph_bracket_residual(&self) -> f64 {
        let j = linalg::values(&self.j);
        let mut worst: f64 = 0.0;
        for x in self.h_projections() {
            let jx = apply_jets(&self.j, &x);
            let a = bracket_at(&self.reeb, &x);
            let b = mat_vec(&j, &bracket_at(&self.reeb, &jx));
            worst = worst.max(max_abs(a.iter().zip(&b).map(|(u, v)| u + v)));
        }
        worst
    }

    /// `[JX,Y] + [X,JY] ∈ H` and `[JX,JY] − [X,Y] − J([JX,Y] + [X,JY]) = 0` on pairs of `H`-fields.
    pub fn integrability_residual(&self) -> f64 {
        let theta = linalg::values(&self.theta);
        let j = linalg::values(&self.j);
        let h = self.h_projections();
        let jh: Vec<Vec<Jet>> = h.iter().map(|x| apply_jets(&self.j, x)).collect();
        let mut worst: f64 = 0.0;
        for a in 0..h.len() {
            for b in a + 1..h.len() {
                let z: Vec<f64> = bracket_at(&jh[a], &h[b])
                    .iter()
                    .zip(bracket_at(&h[a], &jh[b]))
                    .map(|(u, v)| u + v)
                    .collect();
                let n = sub(&sub(&bracket_at(&jh[a], &jh[b]), &bracket_at(&h[a], &h[b])), &mat_vec(&j, &z));
                worst = worst.max(dot(&theta, &z).abs()).max(max_abs(n));
            }
        }
        worst
    }
}

/// Tanaka–Webster geometry of a transversally symmetric structure.
#[derive(Clone, Debug)]
pub struct WebsterData {
    ph: PHStructure,
}

impl WebsterData {
    pub fn structure(&self) -> &PHStructure {
        &self.ph
    }

    pub fn reeb(&self) -> VectorField {
        self.ph.reeb_field()
    }

    pub fn g_theta(&self) -> MetricField {
        self.ph.g_theta()
    }

    /// Everything at `p`, with `g_θ` expanded to `degree` (2 suffices for curvature).
    pub fn at(&self, p: &Point, degree: usize) -> Result<WebsterAt> {
        let tsph = self.ph.transversal_symmetry_residual(p)?;
        if tsph.max() > TSPH_TOL {
            return Err(GeomError::Precondition {
                name: "transversal symmetry",
                residual: tsph.max(),
                tolerance: TSPH_TOL,
            });
        }
        WebsterAt::new(self.ph.local(p, degree)?)
    }

    pub fn axiom_residuals(&self, p: &Point) -> Result<WebsterAxioms> {
        Ok(self.at(p, 2)?.axiom_residuals())
    }

    pub fn curvature(&self, p: &Point) -> Result<WebsterCurvature> {
        self.at(p, 2)?.curvature()
    }

    pub fn einstein_residual(&self, p: &Point) -> Result<EinsteinResidual> {
        self.at(p, 2)?.einstein_residual()
    }

    pub fn comparison_residuals(&self, p: &Point) -> Result<ComparisonResiduals> {
        self.at(p, 2)?.comparison_residuals()
    }
}

/// Tanaka–Webster data at one point.
#[derive(Clone, Debug)]
pub struct WebsterAt {
    pub local: PHLocal,
    /// Levi-Civita data of `g_θ`.
    pub metric: MetricAt,
    /// `∇^W = ∇^{g_θ} + D^θ`.
    pub webster: Connection,
    pub frame: UnitaryFrame,
}

impl WebsterAt {
    pub fn new(local: PHLocal) -> Result<Self> {
        let d = local.dim;
        let g = g_theta_from(&local.theta, &local.dtheta, &local.j, d);
        let metric = MetricAt::from_jets(g, d)?;
        let delta = comparison_tensor(&local);
        let webster = metric.connection.shifted(&delta);
        let gv = metric.g_values();
        let jv = linalg::values(&local.j);
        let cands: Vec<Vec<f64>> = local.h_projections().iter().map(|x| linalg::values(x)).collect();
        let frame = unitary_frame(&gv, &jv, cands, local.m)?;
        Ok(WebsterAt {
            local,
            metric,
            webster,
            frame,
        })
    }

    fn dim(&self) -> usize {
        self.local.dim
    }

    fn reeb(&self) -> Vec<f64> {
        linalg::values(&self.local.reeb)
    }

    pub fn axiom_residuals(&self) -> WebsterAxioms {
        let d = self.dim();
        let l = &self.local;
        let nabla = |up, down, comps: Vec<Jet>| max_abs(self.webster.covariant_derivative(&TensorJets::new(d, up, down, comps)).values());
        let metricity = nabla(0, 2, self.metric.g.clone());
        let theta_parallel = nabla(0, 1, l.theta.clone());
        let j_parallel = nabla(1, 1, l.j.clone());

        let tor = linalg::values(&self.webster.torsion());
        let tor_at = |x: &[f64], y: &[f64]| -> Vec<f64> {
            (0..d)
                .map(|c| {
                    let mut s = 0.0;
                    for a in 0..d {
                        for b in 0..d {
                            s += tor[(c * d + a) * d + b] * x[a] * y[b];
                        }
                    }
                    s
                })
                .collect()
        };
        let t = self.reeb();
        let jv = linalg::values(&l.j);
        let levi = linalg::values(&levi_from(&l.dtheta, &l.j, d));
        let real = self.frame.real();
        let mut torsion_h: f64 = 0.0;
        for x in &real.vectors {
            for y in &real.vectors {
                let expected = bilinear(&levi, &mat_vec(&jv, x), y);
                let got = tor_at(x, y);
                torsion_h = torsion_h.max(max_abs(got.iter().zip(&t).map(|(g, ti)| g - expected * ti)));
            }
        }
        // Tor(T,X) = −½([T,X] + J[T,JX]) on the projected coordinate fields.
        let mut torsion_reeb: f64 = 0.0;
        let mut reeb_torsion: f64 = 0.0;
        for x in l.h_projections() {
            let jx = apply_jets(&l.j, &x);
            let rhs: Vec<f64> = bracket_at(&l.reeb, &x)
                .iter()
                .zip(mat_vec(&jv, &bracket_at(&l.reeb, &jx)))
                .map(|(a, b)| -0.5 * (a + b))
                .collect();
            let got = tor_at(&t, &linalg::values(&x));
            reeb_torsion = reeb_torsion.max(max_abs(got.iter().copied()));
            torsion_reeb = torsion_reeb.max(max_abs(sub(&got, &rhs)));
        }
        WebsterAxioms {
            metricity,
            theta_parallel,
            j_parallel,
            torsion_h,
            torsion_reeb,
            reeb_torsion,
        }
    }

    /// `R^W(X,Y,Z,V)` as a row-major (4,0) array (degree 0 values).
    pub fn webster_riemann(&self) -> Vec<f64> {
        linalg::values(&lower_curvature(&self.webster.curvature(), &self.metric.g, self.dim()))
    }

    pub fn curvature(&self) -> Result<WebsterCurvature> {
        let d = self.dim();
        let rw = self.webster_riemann();
        let mut w = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                let (ea, eb) = (unit(d, a), unit(d, b));
                w[a * d + b] = (0..self.local.m)
                    .map(|al| self.frame.signs[al] * eval4(&rw, d, &ea, &eb, &self.frame.e[al], &self.frame.je[al]))
                    .sum();
            }
        }
        let scal = -(0..self.local.m)
            .map(|al| self.frame.signs[al] * bilinear(&w, &self.frame.e[al], &self.frame.je[al]))
            .sum::<f64>();
        Ok(WebsterCurvature {
            dim: d,
            m: self.local.m,
            rw,
            ricw_rep: w,
            scal_w: scal,
            frame: self.frame.clone(),
        })
    }

    pub fn einstein_residual(&self) -> Result<EinsteinResidual> {
        let c = self.curvature()?;
        let dth = linalg::values(&self.local.dtheta);
        let k = c.scal_w / c.m as f64;
        let ricci = max_abs(c.ricw_rep.iter().zip(&dth).map(|(w, t)| w + k * t));
        let ax = self.axiom_residuals();
        Ok(EinsteinResidual {
            ricci,
            torsion: ax.reeb_torsion,
            scal_w: c.scal_w,
        })
    }

    pub fn comparison_residuals(&self) -> Result<ComparisonResiduals> {
        let d = self.dim();
        let m = self.local.m as f64;
        let l = &self.local;
        let rw_up = linalg::values(&self.webster.curvature());
        let rg_up = linalg::values(&self.metric.riemann_up());
        let scale = max_abs(rg_up.iter().copied()).max(1.0);
        let theta = linalg::values(&l.theta);
        let dth = linalg::values(&l.dtheta);
        let jv = linalg::values(&l.j);
        let t = self.reeb();
        let ndth = self
            .metric
            .connection
            .covariant_derivative(&TensorJets::new(d, 0, 2, l.dtheta.clone()))
            .values();
        let up = |r: &[f64], f: usize, c: usize, a: usize, b: usize| r[((f * d + c) * d + a) * d + b];

        // R^W(∂a,∂b)∂c against R^g plus the correction terms.
        let mut formula: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for f in 0..d {
                        let delta = |i: usize, k: usize| if i == k { 1.0 } else { 0.0 };
                        let rhs = up(&rg_up, f, c, a, b) - 0.5 * ndth[(a * d + b) * d + c] * t[f]
                            - 0.5 * dth[a * d + b] * jv[f * d + c]
                            + 0.25 * dth[b * d + c] * jv[f * d + a]
                            - 0.25 * dth[a * d + c] * jv[f * d + b]
                            + 0.25 * theta[c] * theta[a] * delta(f, b)
                            - 0.25 * theta[c] * theta[b] * delta(f, a);
                        formula = formula.max((up(&rw_up, f, c, a, b) - rhs).abs());
                    }
                }
            }
        }

        let rw = self.webster_riemann();
        let r4 = |a: usize, b: usize, c: usize, e: usize| rw[((a * d + b) * d + c) * d + e];
        let mut bianchi: f64 = 0.0;
        let mut pair: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        bianchi = bianchi.max((r4(a, b, c, e) + r4(b, c, a, e) + r4(c, a, b, e)).abs());
                        pair = pair.max((r4(a, b, c, e) - r4(c, e, a, b)).abs());
                    }
                }
            }
        }
        // R^W(X,JY,JZ,V) = R^W(JX,Y,Z,JV)
        let real = self.frame.real();
        let mut basis = real.vectors.clone();
        basis.push(t.clone());
        let mut j_pair: f64 = 0.0;
        for x in &basis {
            let jx = mat_vec(&jv, x);
            for y in &basis {
                let jy = mat_vec(&jv, y);
                for z in &basis {
                    let jz = mat_vec(&jv, z);
                    for v in &basis {
                        let jvv = mat_vec(&jv, v);
                        let lhs = eval4(&rw, d, x, &jy, &jz, v);
                        let rhs = eval4(&rw, d, &jx, y, z, &jvv);
                        j_pair = j_pair.max((lhs - rhs).abs());
                    }
                }
            }
        }

        let curv = self.curvature()?;
        let w = &curv.ricw_rep;
        let ric_g = linalg::values(&self.metric.ricci());
        let g = self.metric.g_values();
        let mut ricci_h: f64 = 0.0;
        let mut ricci_tx: f64 = 0.0;
        let mut rtt: f64 = 0.0;
        for x in &real.vectors {
            for y in &real.vectors {
                let rhs = -bilinear(w, x, &mat_vec(&jv, y)) - 0.5 * bilinear(&g, x, y);
                ricci_h = ricci_h.max((bilinear(&ric_g, x, y) - rhs).abs());
            }
            ricci_tx = ricci_tx.max(bilinear(&ric_g, &t, x).abs());
            // R^g(X,T)T = ¼X
            let v: Vec<f64> = (0..d)
                .map(|f| {
                    let mut s = 0.0;
                    for c in 0..d {
                        for a in 0..d {
                            for b in 0..d {
                                s += up(&rg_up, f, c, a, b) * t[c] * x[a] * t[b];
                            }
                        }
                    }
                    s - 0.25 * x[f]
                })
                .collect();
            rtt = rtt.max(max_abs(v));
        }
        let ricci_w_reeb = max_abs((0..d).map(|b| (0..d).map(|a| t[a] * w[a * d + b]).sum::<f64>()));
        let ricci_tt_value = bilinear(&ric_g, &t, &t);
        let ricci_tt = (ricci_tt_value - 0.5 * m * bilinear(&g, &t, &t)).abs();
        Ok(ComparisonResiduals {
            curvature_formula: formula / scale,
            bianchi,
            pair_symmetry: pair,
            j_pair,
            ricci_h,
            ricci_w_reeb,
            ricci_tt,
            ricci_tt_value,
            ricci_tx,
            rtt,
        })
    }
}

/// `D^c_{ab} = ½(dθ_ab T^c − θ_a J^c_b − θ_b J^c_a)`, i.e.
/// `D(X,Y) = ½(dθ(X,Y) T − θ(X) JY − θ(Y) JX)`.
pub fn comparison_tensor(l: &PHLocal) -> Vec<Jet> {
    let d = l.dim;
    let mut out = Vec::with_capacity(d * d * d);
    for c in 0..d {
        for a in 0..d {
            for b in 0..d {
                let v = &(&l.dtheta[a * d + b] * &l.reeb[c]) - &(&l.theta[a] * &l.j[c * d + b]);
                out.push((v - &l.theta[b] * &l.j[c * d + a]) * 0.5);
            }
        }
    }
    out
}

/// Postcondition residuals of the Tanaka–Webster axioms.
#[derive(Clone, Copy, Debug)]
pub struct WebsterAxioms {
    /// `|∇^W g_θ|`
    pub metricity: f64,
    /// `|∇^W θ|`
    pub theta_parallel: f64,
    /// `|∇^W J|`
    pub j_parallel: f64,
    /// `Tor(X,Y) − L_θ(JX,Y) T` over an `H`-frame.
    pub torsion_h: f64,
    /// `Tor(T,X) + ½([T,X] + J[T,JX])`.
    pub torsion_reeb: f64,
    /// `|Tor(T,X)|` itself, which vanishes exactly in the transversally symmetric case.
    pub reeb_torsion: f64,
}

/// Webster curvature at a point.
#[derive(Clone, Debug)]
pub struct WebsterCurvature {
    pub dim: usize,
    pub m: usize,
    /// `R^W(X,Y,Z,V) = g_θ(R^{∇^W}(X,Y)Z, V)`, row-major.
    pub rw: Vec<f64>,
    /// Real representative `W` of `Ric^W = iW`.
    pub ricw_rep: Vec<f64>,
    pub scal_w: f64,
    pub frame: UnitaryFrame,
}

impl WebsterCurvature {
    pub fn rw(&self, a: usize, b: usize, c: usize, e: usize) -> f64 {
        let d = self.dim;
        self.rw[((a * d + b) * d + c) * d + e]
    }

    /// Residuals of `R(X,Y,Z,V) = −R(Y,X,Z,V) = −R(X,Y,V,Z)`, `R(X,Y,JZ,V) = −R(X,Y,Z,JV)` and `W = −Wᵀ`.
    pub fn symmetry_residual(&self, j: &[f64]) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                worst = worst.max((self.ricw_rep[a * d + b] + self.ricw_rep[b * d + a]).abs());
                for c in 0..d {
                    for e in 0..d {
                        let r = self.rw(a, b, c, e);
                        let mut rjz = 0.0;
                        let mut rjv = 0.0;
                        for f in 0..d {
                            rjz += self.rw(a, b, f, e) * j[f * d + c];
                            rjv += self.rw(a, b, c, f) * j[f * d + e];
                        }
                        worst = worst
                            .max((r + self.rw(b, a, c, e)).abs())
                            .max((r + self.rw(a, b, e, c)).abs())
                            .max((rjz + rjv).abs());
                    }
                }
            }
        }
        worst
    }

    /// `W` recomputed without a frame: `W_ab = ½ g^{ef} R^W_{ab e k} J^k_f`.
    pub fn frame_free_w(&self, ginv: &[f64], j: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut w = vec![0.0; d * d];
        for a in 0..d {
            for b in 0..d {
                let mut s = 0.0;
                for e in 0..d {
                    for f in 0..d {
                        let gi = ginv[e * d + f];
                        if gi == 0.0 {
                            continue;
                        }
                        for k in 0..d {
                            s += gi * self.rw(a, b, e, k) * j[k * d + f];
                        }
                    }
                }
                w[a * d + b] = 0.5 * s;
            }
        }
        w
    }

    pub fn real_frame(&self) -> Frame {
        self.frame.real()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EinsteinResidual {
    /// `|W + (scal^W/m) dθ|`
    pub ricci: f64,
    /// Pseudo-Hermitian torsion `|Tor(T, X)|`.
    pub torsion: f64,
    pub scal_w: f64,
}

impl EinsteinResidual {
    pub fn max(&self) -> f64 {
        self.ricci.max(self.torsion)
    }
}

/// Residuals of the curvature comparison and the Ricci relations between `g_θ` and `∇^W`.
#[derive(Clone, Copy, Debug)]
pub struct ComparisonResiduals {
    /// Full comparison formula, relative to `max(1, |R^g|)`.
    pub curvature_formula: f64,
    /// First Bianchi cyclic sum of `R^W`.
    pub bianchi: f64,
    /// `R^W(X,Y,Z,V) − R^W(Z,V,X,Y)`.
    pub pair_symmetry: f64,
    /// `R^W(X,JY,JZ,V) − R^W(JX,Y,Z,JV)`.
    pub j_pair: f64,
    /// `Ric^g(X,Y) + W(X,JY) + ½ g_θ(X,Y)` on `H`.
    pub ricci_h: f64,
    /// `W(T, ·)`.
    pub ricci_w_reeb: f64,
    /// `Ric^g(T,T) − (m/2) g_θ(T,T)`.
    pub ricci_tt: f64,
    pub ricci_tt_value: f64,
    /// `Ric^g(T, X)` on `H`.
    pub ricci_tx: f64,
    /// `R^g(X,T)T − ¼X` on `H`.
    pub rtt: f64,
}

impl ComparisonResiduals {
    pub fn max(&self) -> f64 {
        [
            self.curvature_formula,
            self.bianchi,
            self.pair_symmetry,
            self.j_pair,
            self.ricci_h,
            self.ricci_w_reeb,
            self.ricci_tt,
            self.ricci_tx,
            self.rtt,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn reeb_field(ph: &PHStructure) -> VectorField {
    ph.reeb_field()
}

pub fn g_theta(ph: &PHStructure) -> MetricField {
    ph.g_theta()
}

pub fn webster_connection(ph: &PHStructure) -> WebsterData {
    ph.webster_connection()
}

pub fn transversal_symmetry_residual(ph: &PHStructure, p: &Point) -> Result<TsphResidual> {
    ph.transversal_symmetry_residual(p)
}

pub fn webster_curvature(wd: &WebsterData, p: &Point) -> Result<WebsterCurvature> {
    wd.curvature(p)
}

pub fn ph_einstein_residual(wd: &WebsterData, p: &Point) -> Result<EinsteinResidual> {
    wd.einstein_residual(p)
}

pub fn comparison_identities_residual(wd: &WebsterData, p: &Point) -> Result<ComparisonResiduals> {
    wd.comparison_residuals(p)
}

/// `J∂x_k = −∂y_k`, `J∂y_k = ∂x_k` on a chart `(x_1, y_1, ..., x_m, y_m)`.
pub fn standard_complex_structure(base: &Arc<Chart>, m: usize) -> Endomorphism {
    let n = 2 * m;
    Endomorphism::from_fn(base, move |_, k| {
        let mut out = vec![Jet::zero(n, k); n * n];
        for a in 0..m {
            let (xi, yi) = (2 * a, 2 * a + 1);
            out[yi * n + xi] = Jet::constant(n, k, -1.0);
            out[xi * n + yi] = Jet::constant(n, k, 1.0);
        }
        out
    })
}

/// Lifts a complex structure of the base to `H = ker θ` on a chart with exactly one
/// extra (fiber) coordinate. `base_coords[i]` is the total-chart index of base coordinate `i`.
/// `JX` is the horizontal lift of `J_base π_*(X − θ(X) T)`, so `J(T) = 0`.
pub fn horizontal_lift(theta: &OneForm, j_base: &Endomorphism, base_coords: &[usize]) -> Endomorphism {
    let d = theta.dim();
    let n = j_base.dim();
    assert_eq!(n + 1, d, "horizontal lift needs exactly one fiber coordinate");
    assert_eq!(base_coords.len(), n);
    let fiber = (0..d).find(|i| !base_coords.contains(i)).expect("one coordinate is not a base coordinate");
    let (theta, jb, map) = (theta.clone(), j_base.clone(), base_coords.to_vec());
    let chart = theta.chart().clone();
    Endomorphism::from_fn(&chart, move |x, k| {
        let hi = theta.eval_raw(x, k + 1);
        let th: Vec<Jet> = hi.iter().map(|t| t.truncate(k)).collect();
        let reeb = reeb_from(&th, &dtheta_from(&hi, d), d)
            .unwrap_or_else(|_| vec![Jet::constant(d, k, f64::NAN); d]);
        let q: Vec<f64> = map.iter().map(|&i| x[i]).collect();
        let jbase: Vec<Jet> = jb.eval_raw(&q, k).iter().map(|j| j.embed(d, &map)).collect();
        let inv_f = th[fiber].recip();
        let mut out = vec![Jet::zero(d, k); d * d];
        for i in 0..n {
            let mut c = Jet::zero(d, k);
            for jj in 0..n {
                let v = &jbase[jj * n + i];
                out[map[jj] * d + map[i]] = v.clone();
                c -= &th[map[jj]] * v;
            }
            out[fiber * d + map[i]] = &c * &inv_f;
        }
        // compose with the projection X ↦ X − θ(X) T
        let mut jt = vec![Jet::zero(d, k); d];
        for a in 0..d {
            for c in 0..d {
                jt[a] += &out[a * d + c] * &reeb[c];
            }
        }
        for a in 0..d {
            for b in 0..d {
                let corr = &jt[a] * &th[b];
                out[a * d + b] -= corr;
            }
        }
        out
    })
}

/// The standard structure on the Heisenberg chart `(x_1, y_1, ..., x_m, y_m, t)`:
/// `θ = −dt − ½Σ(x dy − y dx)`, `J∂x = −∂y`, `J∂y = ∂x`, Reeb field `−∂t`.
pub fn heisenberg(m: usize, half_width: f64) -> Result<PHStructure> {
    let d = 2 * m + 1;
    let mut names: Vec<String> = Vec::with_capacity(d);
    for k in 1..=m {
        names.push(format!("x{k}"));
        names.push(format!("y{k}"));
    }
    names.push("t".into());
    let chart = Chart::new(vec![(-half_width, half_width); d], names)?;
    let theta = OneForm::from_fn(&chart, move |x, k| {
        let mut out = vec![Jet::zero(d, k); d];
        for a in 0..m {
            out[2 * a] = Jet::variable(d, k, 2 * a + 1, x[2 * a + 1]) * 0.5;
            out[2 * a + 1] = Jet::variable(d, k, 2 * a, x[2 * a]) * -0.5;
        }
        out[d - 1] = Jet::constant(d, k, -1.0);
        out
    });
    let base = Chart::cube(2 * m, -half_width, half_width)?;
    let j = horizontal_lift(&theta, &standard_complex_structure(&base, m), &(0..2 * m).collect::<Vec<_>>());
    PHStructure::new(theta, j, m, (m, 0))
}
