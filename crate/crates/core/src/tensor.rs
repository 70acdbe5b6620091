//! Pointwise tensors (jets or plain values) and affine connections acting on them.

use crate::jet::Jet;

/// Components of a tensor at one point, as jets. Contravariant indices come
/// first, then covariant ones; storage is row-major.
#[derive(Clone, Debug)]
pub struct TensorJets {
    pub dim: usize,
    pub up: usize,
    pub down: usize,
    pub comps: Vec<Jet>,
}

impl TensorJets {
    pub fn new(dim: usize, up: usize, down: usize, comps: Vec<Jet>) -> Self {
        assert_eq!(comps.len(), dim.pow((up + down) as u32), "component count mismatch");
        TensorJets { dim, up, down, comps }
    }

    pub fn rank(&self) -> usize {
        self.up + self.down
    }

    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(Jet::value).collect()
    }

    pub fn degree(&self) -> usize {
        self.comps.iter().map(Jet::degree).min().unwrap_or(0)
    }
}

/// Affine connection coefficients at a point: `∇_{∂a} ∂b = Γ^c_{ab} ∂c`,
/// stored at `c*d*d + a*d + b`. The direction index `a` comes first.
#[derive(Clone, Debug)]
pub struct Connection {
    pub dim: usize,
    pub gamma: Vec<Jet>,
}

impl Connection {
    pub fn new(dim: usize, gamma: Vec<Jet>) -> Self {
        assert_eq!(gamma.len(), dim * dim * dim);
        Connection { dim, gamma }
    }

    #[inline]
    pub fn gamma(&self, c: usize, a: usize, b: usize) -> &Jet {
        &self.gamma[(c * self.dim + a) * self.dim + b]
    }

    pub fn degree(&self) -> usize {
        self.gamma.iter().map(Jet::degree).min().unwrap_or(0)
    }

    /// Curvature `R(∂a,∂b)∂c = R^f_{cab} ∂f` with `R(X,Y) = [∇X,∇Y] − ∇[X,Y]`,
    /// stored at `((f*d + c)*d + a)*d + b`. Output degree is one lower.
    pub fn curvature(&self) -> Vec<Jet> {
        let d = self.dim;
        let nv = self.gamma[0].nvars();
        let deg = self.degree() - 1;
        let dgamma: Vec<Vec<Jet>> = (0..d).map(|e| self.gamma.iter().map(|g| g.partial(e)).collect()).collect();
        let dg = |e: usize, c: usize, a: usize, b: usize| &dgamma[e][(c * d + a) * d + b];
        let mut out = Vec::with_capacity(d * d * d * d);
        for f in 0..d {
            for c in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        let mut r = dg(a, f, b, c) - dg(b, f, a, c);
                        let mut acc = Jet::zero(nv, deg);
                        for e in 0..d {
                            acc += self.gamma(f, a, e) * self.gamma(e, b, c);
                            acc -= self.gamma(f, b, e) * self.gamma(e, a, c);
                        }
                        r += acc;
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    /// Torsion `T(∂a,∂b) = Γ^c_{ab} − Γ^c_{ba}`, stored at `(c*d + a)*d + b`.
    pub fn torsion(&self) -> Vec<Jet> {
        let d = self.dim;
        let mut out = Vec::with_capacity(d * d * d);
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    out.push(self.gamma(c, a, b) - self.gamma(c, b, a));
                }
            }
        }
        out
    }

    /// Covariant derivative of a tensor; the derivative index is appended as the
    /// last covariant index. Output degree is one lower.
    pub fn covariant_derivative(&self, t: &TensorJets) -> TensorJets {
        let d = self.dim;
        assert_eq!(t.dim, d);
        let rank = t.rank();
        let n_in = t.comps.len();
        let deg = t.degree().min(self.degree() + 1) - 1;
        let partials: Vec<Vec<Jet>> = (0..d).map(|e| t.comps.iter().map(|j| j.partial(e)).collect()).collect();
        let mut out = Vec::with_capacity(n_in * d);
        let mut idx = vec![0usize; rank];
        for flat in 0..n_in {
            decode(flat, d, &mut idx);
            for c in 0..d {
                let mut acc = partials[c][flat].truncate(deg);
                for slot in 0..rank {
                    let stride = d.pow((rank - 1 - slot) as u32);
                    let base = flat - idx[slot] * stride;
                    for e in 0..d {
                        let other = &t.comps[base + e * stride];
                        if slot < t.up {
                            acc += self.gamma(idx[slot], c, e) * other;
                        } else {
                            acc -= self.gamma(e, c, idx[slot]) * other;
                        }
                    }
                }
                out.push(acc);
            }
        }
        TensorJets::new(d, t.up, t.down + 1, out)
    }

    /// `∇_X Y` at the base point, for a direction `x` and a vector field given by jets `y` (degree ≥ 1).
    pub fn along(&self, x: &[f64], y: &[Jet]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|c| {
                let mut s = 0.0;
                for a in 0..d {
                    if x[a] == 0.0 {
                        continue;
                    }
                    let mut v = y[c].partial(a).value();
                    for b in 0..d {
                        v += self.gamma(c, a, b).value() * y[b].value();
                    }
                    s += x[a] * v;
                }
                s
            })
            .collect()
    }

    /// Connection with `Γ + D` where `D^c_{ab}` uses the same layout.
    pub fn shifted(&self, delta: &[Jet]) -> Connection {
        Connection::new(self.dim, self.gamma.iter().zip(delta).map(|(a, b)| a + b).collect())
    }
}

fn decode(mut flat: usize, d: usize, idx: &mut [usize]) {
    for slot in (0..idx.len()).rev() {
        idx[slot] = flat % d;
        flat /= d;
    }
}

/// Plain-value helpers for small tensors at a point.
pub mod pointwise {
    /// `M v` for row-major `n×n` matrix.
    pub fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
    }

    /// `B(u, v)` for a bilinear form stored row-major.
    pub fn bilinear(b: &[f64], u: &[f64], v: &[f64]) -> f64 {
        let n = u.len();
        let mut s = 0.0;
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                s += u[i] * b[i * n + j] * v[j];
            }
        }
        s
    }

    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
    }

    pub fn scale(a: f64, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| a * v).collect()
    }

    pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn unit(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    /// Evaluates a covariant 4-tensor stored row-major on four vectors.
    pub fn eval4(t: &[f64], n: usize, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0.0 {
                    continue;
                }
                let ab = a[i] * b[j];
                for k in 0..n {
                    if c[k] == 0.0 {
                        continue;
                    }
                    let abc = ab * c[k];
                    let base = ((i * n + j) * n + k) * n;
                    for l in 0..n {
                        s += abc * t[base + l] * d[l];
                    }
                }
            }
        }
        s
    }
}
