//! Orthonormal and unitary frames for possibly indefinite bilinear forms.

use crate::error::{GeomError, Result};
use crate::tensor::pointwise::{bilinear, mat_vec, scale};

/// Pivot magnitude for `|g(v,v)|` below which a candidate counts as null.
pub const FRAME_PIVOT_TOL: f64 = 1e-10;

/// An orthonormal frame `e_i` with signs `ε_i = g(e_i, e_i) = ±1`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub vectors: Vec<Vec<f64>>,
    pub signs: Vec<f64>,
}

/// A frame `(e_α, J e_α)` orthonormal for `g`, with `ε_α = g(e_α, e_α)`.
#[derive(Clone, Debug)]
pub struct UnitaryFrame {
    pub e: Vec<Vec<f64>>,
    pub je: Vec<Vec<f64>>,
    pub signs: Vec<f64>,
}

impl UnitaryFrame {
    /// The real frame `e_1, Je_1, ..., e_m, Je_m` with its signs.
    pub fn real(&self) -> Frame {
        let mut vectors = Vec::with_capacity(2 * self.e.len());
        let mut signs = Vec::with_capacity(2 * self.e.len());
        for ((e, je), s) in self.e.iter().zip(&self.je).zip(&self.signs) {
            vectors.push(e.clone());
            vectors.push(je.clone());
            signs.push(*s);
            signs.push(*s);
        }
        Frame { vectors, signs }
    }
}

/// Picks the candidate with the largest `|g(v,v)|`; if every candidate is
/// (nearly) null, falls back to `v ± w` for the pair with the largest `|g(v,w)|`.
fn pivot(g: &[f64], cands: &[Vec<f64>]) -> Option<Vec<f64>> {
    let best = cands
        .iter()
        .map(|v| (bilinear(g, v, v).abs(), v))
        .max_by(|a, b| a.0.total_cmp(&b.0))?;
    if best.0 > FRAME_PIVOT_TOL {
        return Some(best.1.clone());
    }
    let mut pair: Option<(f64, usize, usize)> = None;
    for i in 0..cands.len() {
        for k in i + 1..cands.len() {
            let c = bilinear(g, &cands[i], &cands[k]).abs();
            if pair.map_or(true, |p| c > p.0) {
                pair = Some((c, i, k));
            }
        }
    }
    let (c, i, k) = pair?;
    if c <= FRAME_PIVOT_TOL {
        return None;
    }
    Some(cands[i].iter().zip(&cands[k]).map(|(a, b)| a + b).collect())
}

fn project_out(g: &[f64], v: &mut [f64], e: &[f64], sign: f64) {
    let c = sign * bilinear(g, v, e);
    for (vi, ei) in v.iter_mut().zip(e) {
        *vi -= c * ei;
    }
}

fn normalize(g: &[f64], v: &[f64]) -> (Vec<f64>, f64) {
    let n = bilinear(g, v, v);
    (scale(1.0 / n.abs().sqrt(), v), n.signum())
}

/// Gram–Schmidt with signature pivoting, producing `count` vectors from `candidates`.
pub fn orthonormal_frame(g: &[f64], mut candidates: Vec<Vec<f64>>, count: usize) -> Result<Frame> {
    let mut vectors = Vec::with_capacity(count);
    let mut signs = Vec::with_capacity(count);
    while vectors.len() < count {
        let v = pivot(g, &candidates).ok_or_else(|| GeomError::Degenerate {
            what: "orthonormal frame",
            detail: format!("no pivot above {FRAME_PIVOT_TOL:e} after {} vectors", vectors.len()),
        })?;
        let (e, s) = normalize(g, &v);
        for c in candidates.iter_mut() {
            project_out(g, c, &e, s);
        }
        vectors.push(e);
        signs.push(s);
    }
    Ok(Frame { vectors, signs })
}

/// Unitary frame for a `J`-invariant form: each pivot `e` is paired with `Je`.
/// `j` is the row-major matrix `J^a_b`.
pub fn unitary_frame(g: &[f64], j: &[f64], mut candidates: Vec<Vec<f64>>, m: usize) -> Result<UnitaryFrame> {
    let mut e_out = Vec::with_capacity(m);
    let mut je_out = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    while e_out.len() < m {
        let v = pivot(g, &candidates).ok_or_else(|| GeomError::Degenerate {
            what: "unitary frame",
            detail: format!("no pivot above {FRAME_PIVOT_TOL:e} after {} pairs", e_out.len()),
        })?;
        let (e, s) = normalize(g, &v);
        let mut je = mat_vec(j, &e);
        // Je is orthogonal to e for J-invariant g; the projection only removes rounding.
        project_out(g, &mut je, &e, s);
        let (je, sj) = normalize(g, &je);
        if sj != s {
            return Err(GeomError::Degenerate {
                what: "unitary frame",
                detail: "g(Je,Je) and g(e,e) differ in sign; g is not J-invariant".into(),
            });
        }
        for c in candidates.iter_mut() {
            project_out(g, c, &e, s);
            project_out(g, c, &je, s);
        }
        e_out.push(e);
        je_out.push(je);
        signs.push(s);
    }
    Ok(UnitaryFrame {
        e: e_out,
        je: je_out,
        signs,
    })
}
