//! Levi-Civita geometry of metrics of arbitrary signature.
//!
//! Curvature follows the operator convention `R(X,Y) = [∇X,∇Y] − ∇[X,Y]`, the
//! (4,0) tensor is `R(X,Y,Z,V) = g(R(X,Y)Z, V)`, and the Ricci tensor is
//! `Ric(X,Y) = Σ ε_i R(X,e_i,e_i,Y)`, which is positive on round spheres.
//! The Laplacian is the trace of the Hessian (no sign flip).

use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{ScalarField, SymmetricTwoTensor, TensorField, VectorField};
use crate::jet::Jet;
use crate::linalg::{self, max_abs};
use crate::tensor::{Connection, TensorJets};

/// Smallest `|det g|` accepted as nondegenerate.
pub const DET_TOL: f64 = 1e-10;

/// A symmetric 2-tensor field together with its declared signature.
#[derive(Clone, Debug)]
pub struct MetricField {
    g: SymmetricTwoTensor,
    signature: (usize, usize),
}

impl MetricField {
    pub fn new(g: SymmetricTwoTensor, signature: (usize, usize)) -> Result<Self> {
        if signature.0 + signature.1 != g.dim() {
            return Err(GeomError::Unsupported(format!(
                "signature {:?} does not match dimension {}",
                signature,
                g.dim()
            )));
        }
        Ok(MetricField { g, signature })
    }

    pub fn tensor(&self) -> &SymmetricTwoTensor {
        &self.g
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.g.chart()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn values(&self, p: &Point) -> Result<Vec<f64>> {
        self.g.values(p)
    }

    /// Checks nondegeneracy and the declared signature at `p`.
    pub fn check_at(&self, p: &Point) -> Result<()> {
        let g = self.values(p)?;
        let n = self.dim();
        let det = linalg::determinant(&g, n);
        if det.abs() <= DET_TOL {
            return Err(GeomError::Degenerate {
                what: "metric",
                detail: format!("|det g| = {:.3e} at {:?}", det.abs(), p.coords()),
            });
        }
        let sig = linalg::signature(&g, n, 1e-12);
        if sig != self.signature {
            return Err(GeomError::Degenerate {
                what: "metric signature",
                detail: format!("measured {:?}, declared {:?}", sig, self.signature),
            });
        }
        Ok(())
    }

    /// The conformally related metric `e^{2φ} g`.
    pub fn conformal(&self, phi: &ScalarField) -> MetricField {
        let factor = (2.0 * phi).exp();
        MetricField {
            g: self.g.times(&factor),
            signature: self.signature,
        }
    }

    /// Local Levi-Civita data at `p`, with the metric expanded to `degree`.
    pub fn at(&self, p: &Point, degree: usize) -> Result<MetricAt> {
        let g = self.g.jets(p, degree)?;
        MetricAt::from_jets(g, self.dim())
    }
}

/// Levi-Civita data at a point, carried as jets.
#[derive(Clone, Debug)]
pub struct MetricAt {
    pub dim: usize,
    pub g: Vec<Jet>,
    pub ginv: Vec<Jet>,
    pub connection: Connection,
}

impl MetricAt {
    /// `g` must carry at least one derivative so the connection can be formed.
    pub fn from_jets(g: Vec<Jet>, dim: usize) -> Result<Self> {
        let d = dim;
        if g.first().map_or(true, |j| j.degree() < 1) {
            return Err(GeomError::Unsupported("metric jets need degree ≥ 1".into()));
        }
        let det = linalg::determinant(&linalg::values(&g), d);
        if det.abs() <= DET_TOL {
            return Err(GeomError::Degenerate {
                what: "metric",
                detail: format!("|det g| = {:.3e}", det.abs()),
            });
        }
        let ginv = linalg::inverse(&g, d, "metric")?;
        let dg: Vec<Vec<Jet>> = (0..d).map(|e| g.iter().map(|j| j.partial(e)).collect()).collect();
        let nv = g[0].nvars();
        let deg = g.iter().map(Jet::degree).min().unwrap_or(1) - 1;
        // Γ_{e,ab} = ½(∂a g_eb + ∂b g_ea − ∂e g_ab)
        let mut lower = Vec::with_capacity(d * d * d);
        for e in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let s = &(&dg[a][e * d + b] + &dg[b][e * d + a]) - &dg[e][a * d + b];
                    lower.push(s * 0.5);
                }
            }
        }
        let mut gamma = Vec::with_capacity(d * d * d);
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut acc = Jet::zero(nv, deg);
                    for e in 0..d {
                        acc += &ginv[c * d + e] * &lower[(e * d + a) * d + b];
                    }
                    gamma.push(acc);
                }
            }
        }
        Ok(MetricAt {
            dim: d,
            g,
            ginv,
            connection: Connection::new(d, gamma),
        })
    }

    pub fn g_values(&self) -> Vec<f64> {
        linalg::values(&self.g)
    }

    pub fn ginv_values(&self) -> Vec<f64> {
        linalg::values(&self.ginv)
    }

    /// `R^f_{cab}` (see [`Connection::curvature`]).
    pub fn riemann_up(&self) -> Vec<Jet> {
        self.connection.curvature()
    }

    /// `R_{abcd} = g(R(∂a,∂b)∂c, ∂d)`.
    pub fn riemann_down(&self) -> Vec<Jet> {
        lower_curvature(&self.riemann_up(), &self.g, self.dim)
    }

    /// `Ric_{ad} = g^{bc} R_{abcd}`.
    pub fn ricci(&self) -> Vec<Jet> {
        ricci_from_down(&self.riemann_down(), &self.ginv, self.dim)
    }
}

/// Lowers `R^f_{cab}` to `R_{abcd} = g_{df} R^f_{cab}`.
pub fn lower_curvature(up: &[Jet], g: &[Jet], d: usize) -> Vec<Jet> {
    let nv = up[0].nvars();
    let deg = up.iter().map(Jet::degree).min().unwrap_or(0);
    let idx = |f: usize, c: usize, a: usize, b: usize| ((f * d + c) * d + a) * d + b;
    let mut out = Vec::with_capacity(d * d * d * d);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for dd in 0..d {
                    let mut acc = Jet::zero(nv, deg);
                    for f in 0..d {
                        acc += &g[dd * d + f] * &up[idx(f, c, a, b)];
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

fn ricci_from_down(r: &[Jet], ginv: &[Jet], d: usize) -> Vec<Jet> {
    let nv = r[0].nvars();
    let deg = r.iter().map(Jet::degree).min().unwrap_or(0);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for dd in 0..d {
            let mut acc = Jet::zero(nv, deg);
            for b in 0..d {
                for c in 0..d {
                    acc += &ginv[b * d + c] * &r[((a * d + b) * d + c) * d + dd];
                }
            }
            out.push(acc);
        }
    }
    out
}

/// Christoffel symbols `Γ^k_{ij}` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    pub dim: usize,
    /// `Γ^k_{ij}` at `(k*d + i)*d + j`.
    pub gamma: Vec<f64>,
}

impl ConnectionCoefficients {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[(k * self.dim + i) * self.dim + j]
    }
}

/// Riemann, Ricci and scalar curvature at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    pub dim: usize,
    /// `R_{ijkl} = g(R(∂i,∂j)∂k, ∂l)`, row-major.
    pub riemann: Vec<f64>,
    pub ricci: Vec<f64>,
    pub scalar: f64,
}

impl CurvatureTensor {
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let d = self.dim;
        self.riemann[((i * d + j) * d + k) * d + l]
    }

    /// Largest violation of `R_ijkl = −R_jikl = −R_ijlk = R_klij`, relative to the largest component.
    pub fn symmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let r = self.r(i, j, k, l);
                        worst = worst
                            .max((r + self.r(j, i, k, l)).abs())
                            .max((r + self.r(i, j, l, k)).abs())
                            .max((r - self.r(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst / self.scale()
    }

    /// Largest first-Bianchi cyclic sum `R_ijkl + R_jkil + R_kijl`, relative to the largest component.
    pub fn bianchi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = self.r(i, j, k, l) + self.r(j, k, i, l) + self.r(k, i, j, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst / self.scale()
    }

    fn scale(&self) -> f64 {
        max_abs(self.riemann.iter().copied()).max(1.0)
    }
}

pub fn christoffel(g: &MetricField, p: &Point) -> Result<ConnectionCoefficients> {
    let at = g.at(p, 1)?;
    Ok(ConnectionCoefficients {
        dim: g.dim(),
        gamma: linalg::values(&at.connection.gamma),
    })
}

pub fn riemann(g: &MetricField, p: &Point) -> Result<CurvatureTensor> {
    let at = g.at(p, 2)?;
    curvature_from(&at)
}

/// Curvature data at the base point of an already expanded metric (degree ≥ 2).
pub fn curvature_from(at: &MetricAt) -> Result<CurvatureTensor> {
    let down = at.riemann_down();
    let ricci = ricci_from_down(&down, &at.ginv, at.dim);
    let ricci_v = linalg::values(&ricci);
    let ginv = at.ginv_values();
    let scalar = ricci_v.iter().zip(&ginv).map(|(a, b)| a * b).sum();
    Ok(CurvatureTensor {
        dim: at.dim,
        riemann: linalg::values(&down),
        ricci: ricci_v,
        scalar,
    })
}

/// Ricci tensor of `g` at `p` (row-major values).
pub fn ricci(g: &MetricField, p: &Point) -> Result<Vec<f64>> {
    Ok(riemann(g, p)?.ricci)
}

/// Levi-Civita covariant derivative of a tensor field at `p`; the derivative index is last.
pub fn covariant_derivative(g: &MetricField, t: &TensorField, p: &Point) -> Result<Vec<f64>> {
    let at = g.at(p, 1)?;
    let (up, down) = t.valence();
    let comps = t.jets(p, 1)?;
    let tj = TensorJets::new(g.dim(), up, down, comps);
    Ok(at.connection.covariant_derivative(&tj).values())
}

/// Max-norm of the Lie derivative `L_X g` at `p`.
pub fn killing_residual(g: &MetricField, x: &VectorField, p: &Point) -> Result<f64> {
    let gj = g.tensor().jets(p, 1)?;
    let xj = x.jets(p, 1)?;
    Ok(max_abs(lie_derivative_metric(&gj, &xj, g.dim())))
}

/// `(L_X g)_ab = X^c ∂c g_ab + g_cb ∂a X^c + g_ac ∂b X^c` at the base point.
pub fn lie_derivative_metric(g: &[Jet], x: &[Jet], d: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut s = 0.0;
            for c in 0..d {
                s += x[c].value() * g[a * d + b].partial(c).value();
                s += g[c * d + b].value() * x[c].partial(a).value();
                s += g[a * d + c].value() * x[c].partial(b).value();
            }
            out.push(s);
        }
    }
    out
}

/// Hessian `∇dφ`, its trace `Δφ` and `‖dφ‖²` at a point, all with respect to `g`.
#[derive(Clone, Debug)]
pub struct SecondOrder {
    pub gradient: Vec<f64>,
    pub hessian: Vec<f64>,
    pub laplacian: f64,
    pub norm_sq: f64,
}

pub fn second_order(at: &MetricAt, phi: &Jet) -> SecondOrder {
    let d = at.dim;
    let grad: Vec<f64> = (0..d).map(|i| phi.partial(i).value()).collect();
    let mut hess = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut h = phi.partial(a).partial(b).value();
            for c in 0..d {
                h -= at.connection.gamma(c, a, b).value() * grad[c];
            }
            hess.push(h);
        }
    }
    let ginv = at.ginv_values();
    let laplacian = hess.iter().zip(&ginv).map(|(h, g)| h * g).sum();
    let mut norm_sq = 0.0;
    for a in 0..d {
        for b in 0..d {
            norm_sq += ginv[a * d + b] * grad[a] * grad[b];
        }
    }
    SecondOrder {
        gradient: grad,
        hessian: hess,
        laplacian,
        norm_sq,
    }
}

/// `C_φ = −(n−2)(Hess φ − dφ∘dφ) + (−Δφ − (n−2)‖dφ‖²) g`, the difference
/// `Ric(e^{2φ}g) − Ric(g)` in dimension `n`.
pub fn conformal_ricci_correction(g: &MetricField, phi: &ScalarField, p: &Point) -> Result<Vec<f64>> {
    let at = g.at(p, 1)?;
    let phij = phi.jet(p, 2)?;
    Ok(conformal_correction_from(&at, &phij))
}

pub fn conformal_correction_from(at: &MetricAt, phi: &Jet) -> Vec<f64> {
    let d = at.dim;
    let k = d as f64 - 2.0;
    let so = second_order(at, phi);
    let g = at.g_values();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let hess_part = so.hessian[a * d + b] - so.gradient[a] * so.gradient[b];
            out.push(-k * hess_part + (-so.laplacian - k * so.norm_sq) * g[a * d + b]);
        }
    }
    out
}

/// Largest second-Bianchi residual `∇_e R_abcd + ∇_c R_abde + ∇_d R_abec` at `p`, relative to the curvature scale.
pub fn second_bianchi_residual(g: &MetricField, p: &Point) -> Result<f64> {
    let at = g.at(p, 3)?;
    let d = at.dim;
    let down = at.riemann_down();
    let scale = max_abs(down.iter().map(Jet::value)).max(1.0);
    let nabla = at.connection.covariant_derivative(&TensorJets::new(d, 0, 4, down)).values();
    let ix = |a: usize, b: usize, c: usize, dd: usize, e: usize| (((a * d + b) * d + c) * d + dd) * d + e;
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for dd in 0..d {
                    for e in 0..d {
                        let s = nabla[ix(a, b, c, dd, e)] + nabla[ix(a, b, dd, e, c)] + nabla[ix(a, b, e, c, dd)];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    Ok(worst / scale)
}

/// Max-norm of `∇g` at `p` (metric compatibility of the computed connection).
pub fn metricity_residual(g: &MetricField, p: &Point) -> Result<f64> {
    let at = g.at(p, 1)?;
    let t = TensorJets::new(g.dim(), 0, 2, at.g.clone());
    Ok(max_abs(at.connection.covariant_derivative(&t).values()))
}

/// Trace-free part `Ric − (scal/n) g` as values.
pub fn trace_free_ricci(curv: &CurvatureTensor, g: &[f64]) -> Vec<f64> {
    let n = curv.dim as f64;
    curv.ricci.iter().zip(g).map(|(r, gv)| r - curv.scalar / n * gv).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{OneForm, ScalarField};
    use approx::assert_abs_diff_eq;

    fn conformal_plane(sign: f64) -> (Arc<Chart>, MetricField) {
        let c = Chart::cube(2, -0.6, 0.6).unwrap();
        let x = ScalarField::coordinate(&c, 0);
        let y = ScalarField::coordinate(&c, 1);
        let r2 = &x * &x + &y * &y;
        let e = 4.0 * (1.0 + sign * r2).powi(-2);
        let g = SymmetricTwoTensor::from_entries(&c, vec![(0, 0, e.clone()), (1, 1, e)]);
        (c.clone(), MetricField::new(g, (2, 0)).unwrap())
    }

    /// Gauss curvature of `E(dx²+dy²)` from `K = −Δ(ln E) / (2E)` by central differences.
    fn gauss_oracle(e: impl Fn(f64, f64) -> f64, x: f64, y: f64) -> f64 {
        let h = 1e-3;
        let l = |x: f64, y: f64| e(x, y).ln();
        let lap = (l(x + h, y) + l(x - h, y) + l(x, y + h) + l(x, y - h) - 4.0 * l(x, y)) / (h * h);
        -lap / (2.0 * e(x, y))
    }

    #[test]
    fn flat_metrics_have_no_curvature() {
        for sig in [(2, 0), (1, 1)] {
            let c = Chart::cube(2, -1.0, 1.0).unwrap();
            let one = ScalarField::constant(&c, 1.0);
            let first = if sig.1 == 1 { -1.0 * &one } else { one.clone() };
            let g = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, first), (1, 1, one)]), sig).unwrap();
            let p = c.point(&[0.2, -0.3]).unwrap();
            assert!(christoffel(&g, &p).unwrap().gamma.iter().all(|v| *v == 0.0));
            let r = riemann(&g, &p).unwrap();
            assert!(r.riemann.iter().all(|v| *v == 0.0));
            assert_eq!(r.scalar, 0.0);
        }
    }

    #[test]
    fn sphere_chart_christoffels_vanish_at_origin() {
        let (c, g) = conformal_plane(1.0);
        let gamma = christoffel(&g, &c.point(&[0.0, 0.0]).unwrap()).unwrap();
        assert!(gamma.gamma.iter().all(|v| v.abs() < 1e-15));
        // away from the origin: Γ^x_xx = ∂x ln sqrt(E) = −2x/(1+r²)
        let p = c.point(&[0.3, 0.1]).unwrap();
        let gamma = christoffel(&g, &p).unwrap();
        assert_abs_diff_eq!(gamma.get(0, 0, 0), -2.0 * 0.3 / 1.1, epsilon = 1e-14);
    }

    #[test]
    fn sphere_and_disc_scalar_curvature() {
        for (sign, expected) in [(1.0, 2.0), (-1.0, -2.0)] {
            let (c, g) = conformal_plane(sign);
            for coords in [[0.0, 0.0], [0.31, -0.2], [-0.5, 0.45]] {
                let p = c.point(&coords).unwrap();
                let r = riemann(&g, &p).unwrap();
                assert_abs_diff_eq!(r.scalar, expected, epsilon = 1e-12);
                let k = gauss_oracle(|x, y| 4.0 / (1.0 + sign * (x * x + y * y)).powi(2), coords[0], coords[1]);
                assert_abs_diff_eq!(r.scalar, 2.0 * k, epsilon = 1e-5);
                assert!(r.symmetry_residual() < 1e-12);
                assert!(r.bianchi_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn metric_compatibility_and_second_bianchi() {
        let (c, g) = conformal_plane(1.0);
        let p = c.point(&[0.2, 0.4]).unwrap();
        assert!(metricity_residual(&g, &p).unwrap() < 1e-13);
        assert!(second_bianchi_residual(&g, &p).unwrap() < 1e-12);
    }

    #[test]
    fn hessian_in_flat_space() {
        let c = Chart::cube(2, -1.0, 1.0).unwrap();
        let one = ScalarField::constant(&c, 1.0);
        let g = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, one.clone()), (1, 1, one)]), (2, 0)).unwrap();
        let x = ScalarField::coordinate(&c, 0);
        let df = OneForm::differential(&(&x * &x));
        let p = c.point(&[0.3, 0.3]).unwrap();
        let h = covariant_derivative(&g, df.tensor(), &p).unwrap();
        assert_abs_diff_eq!(h[0], 2.0, epsilon = 1e-14);
        assert!(h[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn killing_fields() {
        let c = Chart::cube(2, -1.0, 1.0).unwrap();
        let x = ScalarField::coordinate(&c, 0);
        let y = ScalarField::coordinate(&c, 1);
        let one = ScalarField::constant(&c, 1.0);
        let flat = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, one.clone()), (1, 1, one)]), (2, 0)).unwrap();
        let rot = VectorField::from_components(&c, vec![-&y, x.clone()]);
        let p = c.point(&[0.4, -0.7]).unwrap();
        assert!(killing_residual(&flat, &rot, &p).unwrap() < 1e-15);
        // ∂x for e^{2x}(dx²+dy²): L g = 2 e^{2x} δ
        let e = (2.0 * &x).exp();
        let warped = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, e.clone()), (1, 1, e)]), (2, 0)).unwrap();
        let r = killing_residual(&warped, &VectorField::coordinate(&c, 0), &p).unwrap();
        assert_abs_diff_eq!(r, 2.0 * (0.8f64).exp(), epsilon = 1e-13);
    }

    #[test]
    fn conformal_correction_matches_direct_recomputation() {
        let c = Chart::cube(2, -1.0, 1.0).unwrap();
        let x = ScalarField::coordinate(&c, 0);
        let one = ScalarField::constant(&c, 1.0);
        let flat = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, one.clone()), (1, 1, one)]), (2, 0)).unwrap();
        let p = c.point(&[0.1, 0.2]).unwrap();
        let corr = conformal_ricci_correction(&flat, &x, &p).unwrap();
        let direct = ricci(&flat.conformal(&x), &p).unwrap();
        for (a, b) in corr.iter().zip(&direct) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
        // e^{2x} δ is flat: Δ(2x) = 0 so the correction vanishes in 2D.
        assert!(corr.iter().all(|v| v.abs() < 1e-13));
        let constant = ScalarField::constant(&c, 0.7);
        assert!(conformal_ricci_correction(&flat, &constant, &p).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let c = Chart::cube(2, -1.0, 1.0).unwrap();
        let one = ScalarField::constant(&c, 1.0);
        let g = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, one)]), (1, 0));
        assert!(g.is_err());
        let one = ScalarField::constant(&c, 1.0);
        let g = MetricField::new(SymmetricTwoTensor::from_entries(&c, vec![(0, 0, one)]), (1, 1)).unwrap();
        let p = c.point(&[0.0, 0.0]).unwrap();
        assert!(matches!(christoffel(&g, &p), Err(GeomError::Degenerate { .. })));
        assert!(g.check_at(&p).is_err());
    }
}
