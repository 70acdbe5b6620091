//! Scalar and tensor fields on a chart, evaluated as jets.
//!
//! A field is a pure closure from `(coordinates, degree)` to jets of that
//! degree. Fields built from the elementary basis (coordinates, constants,
//! arithmetic, `exp`, `ln`, `sin`, `cos`, powers) carry exact derivatives;
//! derived fields such as Lie brackets and exterior derivatives evaluate their
//! inputs one degree higher and differentiate the jets.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::chart::{Chart, Point};
use crate::error::{GeomError, Result};
use crate::jet::{Jet, MAX_DEGREE};

type ScalarEval = dyn Fn(&[f64], usize) -> Jet + Send + Sync;
type TensorEval = dyn Fn(&[f64], usize) -> Vec<Jet> + Send + Sync;

/// Highest derivative order exposed through [`ScalarField::derivative`].
pub const MAX_QUERY_ORDER: usize = 3;

/// A smooth real function on a chart.
#[derive(Clone)]
pub struct ScalarField {
    chart: Arc<Chart>,
    eval: Arc<ScalarEval>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("dim", &self.chart.dim()).finish()
    }
}

impl ScalarField {
    /// Wraps a jet-valued closure. The closure must return a jet of exactly the
    /// requested degree in `chart.dim()` variables.
    pub fn from_fn(chart: &Arc<Chart>, f: impl Fn(&[f64], usize) -> Jet + Send + Sync + 'static) -> Self {
        ScalarField {
            chart: chart.clone(),
            eval: Arc::new(f),
        }
    }

    pub fn constant(chart: &Arc<Chart>, c: f64) -> Self {
        let n = chart.dim();
        Self::from_fn(chart, move |_, k| Jet::constant(n, k, c))
    }

    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let n = chart.dim();
        assert!(i < n, "coordinate {i} out of range for a {n}-dimensional chart");
        Self::from_fn(chart, move |p, k| Jet::variable(n, k, i, p[i]))
    }

    /// All coordinate functions of the chart.
    pub fn coordinates(chart: &Arc<Chart>) -> Vec<Self> {
        (0..chart.dim()).map(|i| Self::coordinate(chart, i)).collect()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Jet at raw coordinates without a bounds check.
    pub(crate) fn eval_raw(&self, coords: &[f64], degree: usize) -> Jet {
        (self.eval)(coords, degree)
    }

    pub fn jet(&self, p: &Point, degree: usize) -> Result<Jet> {
        self.chart.check(p.coords())?;
        check_degree(degree)?;
        Ok(self.eval_raw(p.coords(), degree))
    }

    pub fn value(&self, p: &Point) -> Result<f64> {
        Ok(self.jet(p, 0)?.value())
    }

    /// Mixed partial derivative along `multi_index` (at most third order).
    pub fn derivative(&self, p: &Point, multi_index: &[usize]) -> Result<f64> {
        if multi_index.len() > MAX_QUERY_ORDER {
            return Err(GeomError::OrderTooHigh {
                requested: multi_index.len(),
                max: MAX_QUERY_ORDER,
            });
        }
        if let Some(&bad) = multi_index.iter().find(|&&i| i >= self.dim()) {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                got: bad + 1,
            });
        }
        Ok(self.jet(p, multi_index.len())?.derivative(multi_index))
    }

    /// The field `∂f/∂x_i`.
    pub fn partial(&self, i: usize) -> ScalarField {
        let f = self.clone();
        Self::from_fn(&self.chart, move |p, k| f.eval_raw(p, k + 1).partial(i))
    }

    fn map(&self, g: impl Fn(&Jet) -> Jet + Send + Sync + 'static) -> ScalarField {
        let f = self.clone();
        Self::from_fn(&self.chart, move |p, k| g(&f.eval_raw(p, k)))
    }

    fn zip(&self, other: &ScalarField, g: impl Fn(&Jet, &Jet) -> Jet + Send + Sync + 'static) -> ScalarField {
        assert_same_chart(&self.chart, &other.chart);
        let (a, b) = (self.clone(), other.clone());
        Self::from_fn(&self.chart, move |p, k| g(&a.eval_raw(p, k), &b.eval_raw(p, k)))
    }

    pub fn exp(&self) -> ScalarField {
        self.map(Jet::exp)
    }

    pub fn ln(&self) -> ScalarField {
        self.map(Jet::ln)
    }

    pub fn sin(&self) -> ScalarField {
        self.map(Jet::sin)
    }

    pub fn cos(&self) -> ScalarField {
        self.map(Jet::cos)
    }

    pub fn sqrt(&self) -> ScalarField {
        self.map(Jet::sqrt)
    }

    pub fn recip(&self) -> ScalarField {
        self.map(Jet::recip)
    }

    pub fn powi(&self, n: i32) -> ScalarField {
        self.map(move |j| j.powi(n))
    }

    pub fn powf(&self, a: f64) -> ScalarField {
        self.map(move |j| j.powf(a))
    }

    /// Pulls back along the projection `target -> self.chart` that reads
    /// coordinate `coords[i]` of the target as coordinate `i` of this chart.
    pub fn pull_back(&self, target: &Arc<Chart>, coords: &[usize]) -> ScalarField {
        assert_eq!(coords.len(), self.dim(), "projection must name one target coordinate per source coordinate");
        let f = self.clone();
        let map = coords.to_vec();
        let n = target.dim();
        Self::from_fn(target, move |p, k| {
            let q: Vec<f64> = map.iter().map(|&i| p[i]).collect();
            f.eval_raw(&q, k).embed(n, &map)
        })
    }

    /// Pulls back along an arbitrary smooth map `target -> self.chart` given by component functions.
    pub fn pull_back_along(&self, target: &Arc<Chart>, map: &[ScalarField]) -> ScalarField {
        assert_eq!(map.len(), self.dim(), "map must have one component per source coordinate");
        let f = self.clone();
        let map = map.to_vec();
        Self::from_fn(target, move |p, k| {
            let inner: Vec<Jet> = map.iter().map(|m| m.eval_raw(p, k)).collect();
            let q: Vec<f64> = inner.iter().map(Jet::value).collect();
            f.eval_raw(&q, k).compose(&inner)
        })
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(GeomError::OrderTooHigh {
            requested: degree,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

fn assert_same_chart(a: &Arc<Chart>, b: &Arc<Chart>) {
    assert!(
        Arc::ptr_eq(a, b) || **a == **b,
        "fields live on different charts ({}-dim vs {}-dim)",
        a.dim(),
        b.dim()
    );
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                self.zip(rhs, |a, b| a $op b)
            }
        }
        impl $tr<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                (&self).$method(rhs)
            }
        }
        impl $tr<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                self.$method(&rhs)
            }
        }
        impl $tr<f64> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                self.$method(&ScalarField::constant(&self.chart, rhs))
            }
        }
        impl $tr<f64> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                (&self).$method(rhs)
            }
        }
        impl $tr<&ScalarField> for f64 {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                ScalarField::constant(&rhs.chart, self).$method(rhs)
            }
        }
        impl $tr<ScalarField> for f64 {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|j| -j)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -&self
    }
}

/// A tensor field with `up` contravariant and `down` covariant indices.
///
/// Components are stored row-major with the contravariant indices first, so an
/// endomorphism `J` has `J^a_b` at position `a * dim + b`.
#[derive(Clone)]
pub struct TensorField {
    chart: Arc<Chart>,
    up: usize,
    down: usize,
    eval: Arc<TensorEval>,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorField")
            .field("dim", &self.chart.dim())
            .field("up", &self.up)
            .field("down", &self.down)
            .finish()
    }
}

impl TensorField {
    pub fn from_fn(
        chart: &Arc<Chart>,
        up: usize,
        down: usize,
        f: impl Fn(&[f64], usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        TensorField {
            chart: chart.clone(),
            up,
            down,
            eval: Arc::new(f),
        }
    }

    pub fn from_components(chart: &Arc<Chart>, up: usize, down: usize, comps: Vec<ScalarField>) -> Self {
        let n = chart.dim().pow((up + down) as u32);
        assert_eq!(comps.len(), n, "expected {n} components");
        for c in &comps {
            assert_same_chart(chart, &c.chart);
        }
        Self::from_fn(chart, up, down, move |p, k| comps.iter().map(|c| c.eval_raw(p, k)).collect())
    }

    pub fn zero(chart: &Arc<Chart>, up: usize, down: usize) -> Self {
        let d = chart.dim();
        let n = d.pow((up + down) as u32);
        Self::from_fn(chart, up, down, move |_, k| vec![Jet::zero(d, k); n])
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.up, self.down)
    }

    pub(crate) fn eval_raw(&self, coords: &[f64], degree: usize) -> Vec<Jet> {
        (self.eval)(coords, degree)
    }

    pub fn jets(&self, p: &Point, degree: usize) -> Result<Vec<Jet>> {
        self.chart.check(p.coords())?;
        check_degree(degree)?;
        Ok(self.eval_raw(p.coords(), degree))
    }

    pub fn values(&self, p: &Point) -> Result<Vec<f64>> {
        Ok(self.jets(p, 0)?.iter().map(Jet::value).collect())
    }

    /// The component with flat index `i` as a scalar field.
    pub fn component(&self, i: usize) -> ScalarField {
        let t = self.clone();
        ScalarField::from_fn(&self.chart, move |p, k| t.eval_raw(p, k).swap_remove(i))
    }

    fn zip(&self, other: &TensorField, g: impl Fn(&Jet, &Jet) -> Jet + Send + Sync + 'static) -> TensorField {
        assert_same_chart(&self.chart, &other.chart);
        assert_eq!(self.valence(), other.valence(), "valence mismatch");
        let (a, b) = (self.clone(), other.clone());
        Self::from_fn(&self.chart, self.up, self.down, move |p, k| {
            a.eval_raw(p, k)
                .iter()
                .zip(b.eval_raw(p, k).iter())
                .map(|(x, y)| g(x, y))
                .collect()
        })
    }

    pub fn add(&self, other: &TensorField) -> TensorField {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> TensorField {
        let t = self.clone();
        Self::from_fn(&self.chart, self.up, self.down, move |p, k| {
            t.eval_raw(p, k).iter().map(|j| j * c).collect()
        })
    }

    /// Multiplies every component by a scalar field.
    pub fn times(&self, f: &ScalarField) -> TensorField {
        assert_same_chart(&self.chart, &f.chart);
        let (t, f) = (self.clone(), f.clone());
        Self::from_fn(&self.chart, self.up, self.down, move |p, k| {
            let s = f.eval_raw(p, k);
            t.eval_raw(p, k).iter().map(|j| j * &s).collect()
        })
    }

    /// Pullback of a covariant tensor along a coordinate projection (see [`ScalarField::pull_back`]).
    pub fn pull_back(&self, target: &Arc<Chart>, coords: &[usize]) -> TensorField {
        assert_eq!(self.up, 0, "only covariant tensors pull back");
        assert_eq!(coords.len(), self.dim());
        let src = self.clone();
        let map = coords.to_vec();
        let down = self.down;
        let (m, n) = (self.dim(), target.dim());
        Self::from_fn(target, 0, down, move |p, k| {
            let q: Vec<f64> = map.iter().map(|&i| p[i]).collect();
            let base = src.eval_raw(&q, k);
            let mut out = vec![Jet::zero(n, k); n.pow(down as u32)];
            for (flat, j) in base.iter().enumerate() {
                let mut rest = flat;
                let mut target_flat = 0;
                let mut stride = 1;
                for _ in 0..down {
                    let idx = rest % m;
                    rest /= m;
                    target_flat += map[idx] * stride;
                    stride *= n;
                }
                out[target_flat] = j.embed(n, &map);
            }
            out
        })
    }
}

macro_rules! typed_field {
    ($(#[$doc:meta])* $name:ident, $up:expr, $down:expr) => {
        $(#[$doc])*
        #[derive(Clone, Debug)]
        pub struct $name(pub TensorField);

        impl $name {
            pub fn from_fn(
                chart: &Arc<Chart>,
                f: impl Fn(&[f64], usize) -> Vec<Jet> + Send + Sync + 'static,
            ) -> Self {
                $name(TensorField::from_fn(chart, $up, $down, f))
            }

            pub fn from_components(chart: &Arc<Chart>, comps: Vec<ScalarField>) -> Self {
                $name(TensorField::from_components(chart, $up, $down, comps))
            }

            pub fn zero(chart: &Arc<Chart>) -> Self {
                $name(TensorField::zero(chart, $up, $down))
            }

            pub fn chart(&self) -> &Arc<Chart> {
                self.0.chart()
            }

            pub fn dim(&self) -> usize {
                self.0.dim()
            }

            pub fn jets(&self, p: &Point, degree: usize) -> Result<Vec<Jet>> {
                self.0.jets(p, degree)
            }

            pub fn values(&self, p: &Point) -> Result<Vec<f64>> {
                self.0.values(p)
            }

            #[allow(dead_code)]
            pub(crate) fn eval_raw(&self, coords: &[f64], degree: usize) -> Vec<Jet> {
                self.0.eval_raw(coords, degree)
            }

            pub fn component(&self, i: usize) -> ScalarField {
                self.0.component(i)
            }

            pub fn scale(&self, c: f64) -> Self {
                $name(self.0.scale(c))
            }

            pub fn times(&self, f: &ScalarField) -> Self {
                $name(self.0.times(f))
            }

            pub fn tensor(&self) -> &TensorField {
                &self.0
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name(self.0.add(&rhs.0))
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name(self.0.sub(&rhs.0))
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(-1.0)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(-1.0)
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            fn mul(self, rhs: $name) -> $name {
                rhs.scale(self)
            }
        }

        impl Mul<&$name> for f64 {
            type Output = $name;
            fn mul(self, rhs: &$name) -> $name {
                rhs.scale(self)
            }
        }
    };
}

typed_field!(
    /// Contravariant vector field `X^a`.
    VectorField, 1, 0
);
typed_field!(
    /// Covariant 1-form `α_a`.
    OneForm, 0, 1
);
typed_field!(
    /// Antisymmetric covariant 2-tensor `ω_ab`.
    TwoForm, 0, 2
);
typed_field!(
    /// Symmetric covariant 2-tensor `g_ab`.
    SymmetricTwoTensor, 0, 2
);
typed_field!(
    /// (1,1)-tensor `J^a_b`, acting as `(JX)^a = J^a_b X^b`.
    Endomorphism, 1, 1
);

impl VectorField {
    /// Coordinate vector field `∂/∂x_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let d = chart.dim();
        Self::from_fn(chart, move |_, k| {
            (0..d).map(|a| Jet::constant(d, k, if a == i { 1.0 } else { 0.0 })).collect()
        })
    }

    /// Extends `X` to a chart that contains this one as the coordinates `coords`
    /// (source coordinate `i` becomes target coordinate `coords[i]`); the new
    /// components vanish and nothing depends on the new coordinates.
    pub fn extend(&self, target: &Arc<Chart>, coords: &[usize]) -> Self {
        assert_eq!(coords.len(), self.dim());
        let src = self.clone();
        let map = coords.to_vec();
        let n = target.dim();
        Self::from_fn(target, move |p, k| {
            let q: Vec<f64> = map.iter().map(|&i| p[i]).collect();
            let mut out = vec![Jet::zero(n, k); n];
            for (i, j) in src.eval_raw(&q, k).iter().enumerate() {
                out[map[i]] = j.embed(n, &map);
            }
            out
        })
    }

    /// Applies the vector field to a function: `X(f) = X^i ∂_i f`.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        let (x, f) = (self.clone(), f.clone());
        ScalarField::from_fn(self.chart(), move |p, k| {
            let xs = x.eval_raw(p, k);
            let fj = f.eval_raw(p, k + 1);
            let mut acc = Jet::zero(xs[0].nvars(), k);
            for (i, xi) in xs.iter().enumerate() {
                acc += xi * &fj.partial(i);
            }
            acc
        })
    }
}

impl OneForm {
    /// The differential `df`.
    pub fn differential(f: &ScalarField) -> Self {
        let f = f.clone();
        let d = f.dim();
        let chart = f.chart().clone();
        Self::from_fn(&chart, move |p, k| {
            let j = f.eval_raw(p, k + 1);
            (0..d).map(|i| j.partial(i)).collect()
        })
    }

    /// Coordinate differential `dx_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        OneForm(VectorField::coordinate(chart, i).0.clone().with_valence(0, 1))
    }

    pub fn pull_back(&self, target: &Arc<Chart>, coords: &[usize]) -> Self {
        OneForm(self.0.pull_back(target, coords))
    }

    /// Contraction `α(X)`.
    pub fn apply(&self, x: &VectorField) -> ScalarField {
        let (a, x) = (self.clone(), x.clone());
        ScalarField::from_fn(self.chart(), move |p, k| crate::jet::dot(&a.eval_raw(p, k), &x.eval_raw(p, k)))
    }
}

impl SymmetricTwoTensor {
    pub fn pull_back(&self, target: &Arc<Chart>, coords: &[usize]) -> Self {
        SymmetricTwoTensor(self.0.pull_back(target, coords))
    }

    /// Builds a symmetric tensor from its upper-triangular components `(i, j, g_ij)`; missing entries are zero.
    pub fn from_entries(chart: &Arc<Chart>, entries: Vec<(usize, usize, ScalarField)>) -> Self {
        let d = chart.dim();
        let mut comps: Vec<ScalarField> = (0..d * d).map(|_| ScalarField::constant(chart, 0.0)).collect();
        for (i, j, f) in entries {
            comps[i * d + j] = f.clone();
            comps[j * d + i] = f;
        }
        Self::from_components(chart, comps)
    }
}

impl TwoForm {
    pub fn pull_back(&self, target: &Arc<Chart>, coords: &[usize]) -> Self {
        TwoForm(self.0.pull_back(target, coords))
    }
}

impl TensorField {
    fn with_valence(mut self, up: usize, down: usize) -> Self {
        assert_eq!(up + down, self.up + self.down);
        self.up = up;
        self.down = down;
        self
    }
}

/// `[X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert_same_chart(x.chart(), y.chart());
    let (x, y) = (x.clone(), y.clone());
    let d = x.dim();
    let chart = x.chart().clone();
    VectorField::from_fn(&chart, move |p, k| {
        let xs = x.eval_raw(p, k + 1);
        let ys = y.eval_raw(p, k + 1);
        (0..d)
            .map(|c| {
                let mut acc = Jet::zero(d, k);
                for i in 0..d {
                    acc += &xs[i] * &ys[c].partial(i);
                    acc -= &ys[i] * &xs[c].partial(i);
                }
                acc
            })
            .collect()
    })
}

/// `(dω)_ij = ∂_i ω_j − ∂_j ω_i`, i.e. `dω(X,Y) = X ω(Y) − Y ω(X) − ω([X,Y])`.
pub fn exterior_derivative(w: &OneForm) -> TwoForm {
    let w = w.clone();
    let d = w.dim();
    let chart = w.chart().clone();
    TwoForm::from_fn(&chart, move |p, k| {
        let ws = w.eval_raw(p, k + 1);
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(ws[j].partial(i) - ws[i].partial(j));
            }
        }
        out
    })
}

/// `(α∘β)(X,Y) = ½(α(X)β(Y) + α(Y)β(X))`, so `α∘α = α⊗α`.
pub fn symmetric_product(a: &OneForm, b: &OneForm) -> SymmetricTwoTensor {
    assert_same_chart(a.chart(), b.chart());
    let (a, b) = (a.clone(), b.clone());
    let d = a.dim();
    let chart = a.chart().clone();
    SymmetricTwoTensor::from_fn(&chart, move |p, k| {
        let (x, y) = (a.eval_raw(p, k), b.eval_raw(p, k));
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push((&x[i] * &y[j] + &x[j] * &y[i]) * 0.5);
            }
        }
        out
    })
}

/// `(α∧β)_ij = α_i β_j − α_j β_i`, matching the normalization of [`exterior_derivative`].
pub fn wedge(a: &OneForm, b: &OneForm) -> TwoForm {
    assert_same_chart(a.chart(), b.chart());
    let (a, b) = (a.clone(), b.clone());
    let d = a.dim();
    let chart = a.chart().clone();
    TwoForm::from_fn(&chart, move |p, k| {
        let (x, y) = (a.eval_raw(p, k), b.eval_raw(p, k));
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(&x[i] * &y[j] - &x[j] * &y[i]);
            }
        }
        out
    })
}

/// `(JX)^a = J^a_b X^b`.
pub fn apply_endomorphism(j: &Endomorphism, x: &VectorField) -> VectorField {
    assert_same_chart(j.chart(), x.chart());
    let (j, x) = (j.clone(), x.clone());
    let d = j.dim();
    let chart = j.chart().clone();
    VectorField::from_fn(&chart, move |p, k| {
        let js = j.eval_raw(p, k);
        let xs = x.eval_raw(p, k);
        (0..d).map(|a| crate::jet::dot(&js[a * d..(a + 1) * d], &xs)).collect()
    })
}
