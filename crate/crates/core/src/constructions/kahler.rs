//! Kähler charts built from potentials, and the catalog of Kähler–Einstein examples.

use std::fmt;
use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::field::{exterior_derivative, Endomorphism, OneForm, ScalarField, SymmetricTwoTensor};
use crate::jet::Jet;
use crate::linalg::max_abs;
use crate::pseudo_hermitian::standard_complex_structure;
use crate::semi_riemannian::{self, MetricField};

/// Which Kähler–Einstein model a chart realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KahlerKind {
    /// `C^m` with the Euclidean metric.
    Flat,
    /// An affine chart of `CP^m`.
    FubiniStudy,
    /// The unit ball model of complex hyperbolic space.
    ComplexHyperbolic,
    /// `CP^1 × C`: Kähler with constant scalar curvature, not Einstein (negative control).
    SphereTimesFlat,
}

impl KahlerKind {
    pub const CATALOG: [KahlerKind; 3] = [KahlerKind::Flat, KahlerKind::FubiniStudy, KahlerKind::ComplexHyperbolic];

    pub fn id(self) -> &'static str {
        match self {
            KahlerKind::Flat => "flat",
            KahlerKind::FubiniStudy => "fubini_study",
            KahlerKind::ComplexHyperbolic => "complex_hyperbolic",
            KahlerKind::SphereTimesFlat => "sphere_times_flat",
        }
    }

    pub fn from_id(id: &str) -> Option<KahlerKind> {
        [
            KahlerKind::Flat,
            KahlerKind::FubiniStudy,
            KahlerKind::ComplexHyperbolic,
            KahlerKind::SphereTimesFlat,
        ]
        .into_iter()
        .find(|k| k.id() == id)
    }

    /// Scalar curvature for the potential used by [`make_kahler_einstein`].
    pub fn scalar_curvature(self, m: usize, scale: f64) -> f64 {
        let mm = (m * (m + 1)) as f64;
        match self {
            KahlerKind::Flat => 0.0,
            KahlerKind::FubiniStudy => mm / scale,
            KahlerKind::ComplexHyperbolic => -mm / scale,
            KahlerKind::SphereTimesFlat => 2.0 / scale,
        }
    }
}

impl fmt::Display for KahlerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A Kähler chart `(N^{2m}, h, J)` with a primitive `γ` of the Kähler form.
#[derive(Clone, Debug)]
pub struct KahlerEinsteinChart {
    pub kind: KahlerKind,
    pub m: usize,
    pub scale: f64,
    pub base: Arc<Chart>,
    pub potential: ScalarField,
    pub h: MetricField,
    pub j: Endomorphism,
    /// `dγ = h(·, J·)`.
    pub gamma: OneForm,
    pub scal_h: f64,
    /// False only for the non-Einstein control.
    pub einstein: bool,
}

/// `h` and `γ` from a real Kähler potential `Φ` on `(x_1, y_1, ..., x_m, y_m)`.
///
/// With `H_jk = ∂_j ∂̄_k Φ = A + iB`: `h(∂x_j,∂x_k) = h(∂y_j,∂y_k) = 2A_jk`,
/// `h(∂x_j,∂y_k) = 2B_jk`, and `γ = ½ Σ (∂x_k Φ dy_k − ∂y_k Φ dx_k)`.
pub fn kahler_from_potential(base: &Arc<Chart>, m: usize, phi: &ScalarField) -> (SymmetricTwoTensor, OneForm) {
    let n = 2 * m;
    let p1 = phi.clone();
    let h = SymmetricTwoTensor::from_fn(base, move |x, k| {
        let f = p1.eval_raw(x, k + 2);
        let d: Vec<Jet> = (0..n).map(|i| f.partial(i)).collect();
        let dd = |i: usize, l: usize| d[i].partial(l);
        let mut out = vec![Jet::zero(n, k); n * n];
        for a in 0..m {
            for b in 0..m {
                let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
                // 2A = ½(Φ_xx + Φ_yy), 2B = ½(Φ_{x_a y_b} − Φ_{y_a x_b})
                let two_a = (dd(xa, xb) + dd(ya, yb)) * 0.5;
                let two_b = (dd(xa, yb) - dd(ya, xb)) * 0.5;
                out[xa * n + xb] = two_a.clone();
                out[ya * n + yb] = two_a;
                out[xa * n + yb] = two_b.clone();
                out[yb * n + xa] = two_b;
            }
        }
        out
    });
    let p2 = phi.clone();
    let gamma = OneForm::from_fn(base, move |x, k| {
        let f = p2.eval_raw(x, k + 1);
        let mut out = Vec::with_capacity(n);
        for a in 0..m {
            out.push(f.partial(2 * a + 1) * -0.5);
            out.push(f.partial(2 * a) * 0.5);
        }
        out
    });
    (h, gamma)
}

fn base_chart(m: usize, half_width: f64) -> Result<Arc<Chart>> {
    let mut names = Vec::with_capacity(2 * m);
    for k in 1..=m {
        names.push(format!("x{k}"));
        names.push(format!("y{k}"));
    }
    Chart::new(vec![(-half_width, half_width); 2 * m], names)
}

fn r_squared(base: &Arc<Chart>, coords: &[usize]) -> ScalarField {
    let xs = ScalarField::coordinates(base);
    coords.iter().fold(ScalarField::constant(base, 0.0), |acc, &i| acc + &xs[i] * &xs[i])
}

/// Catalog chart of the given kind. `scale` multiplies the metric, so `scal^h` scales by `1/scale`.
///
/// * flat: `Φ = ½ scale r²`, `h = scale·δ`;
/// * Fubini–Study: `Φ = 2 scale ln(1 + r²)` on `(−1, 1)^{2m}`, `scal^h = m(m+1)/scale`;
/// * complex hyperbolic: `Φ = −2 scale ln(1 − r²)` on a box inside the unit ball, `scal^h = −m(m+1)/scale`.
pub fn make_kahler_einstein(kind: KahlerKind, m: usize, scale: f64) -> Result<KahlerEinsteinChart> {
    if !(1..=2).contains(&m) {
        return Err(GeomError::Unsupported(format!("m = {m}; catalog charts exist for m = 1, 2")));
    }
    if !(scale > 0.0) {
        return Err(GeomError::Unsupported(format!("scale must be positive, got {scale}")));
    }
    let c = 2.0 * scale;
    let all: Vec<usize> = (0..2 * m).collect();
    let (base, potential) = match kind {
        KahlerKind::Flat => {
            let base = base_chart(m, 1.0)?;
            let phi = 0.5 * scale * r_squared(&base, &all);
            (base, phi)
        }
        KahlerKind::FubiniStudy => {
            let base = base_chart(m, 1.0)?;
            let phi = c * (1.0 + r_squared(&base, &all)).ln();
            (base, phi)
        }
        KahlerKind::ComplexHyperbolic => {
            let base = base_chart(m, if m == 1 { 0.6 } else { 0.45 })?;
            let phi = -c * (1.0 - r_squared(&base, &all)).ln();
            (base, phi)
        }
        KahlerKind::SphereTimesFlat => {
            if m != 2 {
                return Err(GeomError::Unsupported("sphere_times_flat exists only for m = 2".into()));
            }
            let base = base_chart(m, 1.0)?;
            let phi = c * (1.0 + r_squared(&base, &[0, 1])).ln() + 0.5 * scale * r_squared(&base, &[2, 3]);
            (base, phi)
        }
    };
    let (h, gamma) = kahler_from_potential(&base, m, &potential);
    Ok(KahlerEinsteinChart {
        kind,
        m,
        scale,
        j: standard_complex_structure(&base, m),
        h: MetricField::new(h, (2 * m, 0))?,
        gamma,
        potential,
        scal_h: kind.scalar_curvature(m, scale),
        einstein: kind != KahlerKind::SphereTimesFlat,
        base,
    })
}

/// The `CP^1 × C` control (m = 2).
pub fn sphere_times_flat() -> Result<KahlerEinsteinChart> {
    make_kahler_einstein(KahlerKind::SphereTimesFlat, 2, 1.0)
}

/// Residuals of the Kähler–Einstein invariants at a base point.
#[derive(Clone, Copy, Debug)]
pub struct KahlerResiduals {
    /// `J² + 1`.
    pub j_squared: f64,
    /// `∇^h J`.
    pub j_parallel: f64,
    /// `Ric^h − (scal^h/2m) h`.
    pub einstein: f64,
    /// `dγ − h(·, J·)`.
    pub gamma: f64,
    /// Scalar curvature measured at the point.
    pub scal: f64,
}

impl KahlerEinsteinChart {
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn label(&self) -> String {
        format!("{} (m = {})", self.kind, self.m)
    }

    /// `Ric^h(·, J·)` at a base point, row-major.
    pub fn ricci_form(&self, p: &Point) -> Result<Vec<f64>> {
        let n = self.dim();
        let ric = semi_riemannian::ricci(&self.h, p)?;
        let j = self.j.values(p)?;
        Ok(compose_right(&ric, &j, n))
    }

    pub fn residuals(&self, p: &Point) -> Result<KahlerResiduals> {
        let n = self.dim();
        let j = self.j.values(p)?;
        let mut jj = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                jj[a * n + b] = (0..n).map(|c| j[a * n + c] * j[c * n + b]).sum::<f64>() + if a == b { 1.0 } else { 0.0 };
            }
        }
        let curv = semi_riemannian::riemann(&self.h, p)?;
        let h = self.h.values(p)?;
        let k = self.scal_h / n as f64;
        let einstein = max_abs(curv.ricci.iter().zip(&h).map(|(r, g)| r - k * g));
        let omega = compose_right(&h, &j, n);
        let dg = exterior_derivative(&self.gamma).values(p)?;
        Ok(KahlerResiduals {
            j_squared: max_abs(jj),
            j_parallel: max_abs(semi_riemannian::covariant_derivative(&self.h, self.j.tensor(), p)?),
            einstein,
            gamma: max_abs(dg.iter().zip(&omega).map(|(a, b)| a - b)),
            scal: curv.scalar,
        })
    }
}

/// `B(·, J·)` for a bilinear form `B` and endomorphism `J` (both row-major).
pub fn compose_right(b: &[f64], j: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for a in 0..n {
        for c in 0..n {
            out[a * n + c] = (0..n).map(|e| b[a * n + e] * j[e * n + c]).sum();
        }
    }
    out
}
