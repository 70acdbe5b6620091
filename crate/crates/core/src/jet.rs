//! Truncated multivariate Taylor polynomials ("jets").
//!
//! A [`Jet`] of degree `k` in `n` variables stores the Taylor coefficients of a
//! smooth function around a base point, up to total degree `k`. Arithmetic and
//! elementary functions act on the coefficients exactly, so every derivative
//! up to order `k` is available to machine rounding, with no step-size error.
//!
//! Coefficients are stored in graded order: all monomials of degree 0, then
//! degree 1, and so on. A jet of degree `k` therefore has a prefix layout
//! shared with any jet of higher degree in the same number of variables, which
//! lets jets of different degrees interoperate (the result of a binary
//! operation has the smaller degree).
//!
//! Differentiating a jet lowers its degree by one. Derived quantities such as
//! Christoffel symbols or curvature are computed directly on jets, so the
//! degree bookkeeping tracks how many derivatives remain valid.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

/// Highest total degree supported by the coefficient tables.
pub const MAX_DEGREE: usize = 6;

/// Highest number of variables supported by the coefficient tables.
pub const MAX_VARS: usize = 10;

struct Tables {
    /// Exponent vectors in graded order.
    monomials: Vec<Vec<u8>>,
    /// `upto[k]` = number of monomials of degree <= k.
    upto: Vec<usize>,
    /// Product triples `(a, b, a*b)` sorted by the degree of the product.
    products: Vec<(u32, u32, u32)>,
    /// `product_upto[k]` = number of triples whose product has degree <= k.
    product_upto: Vec<usize>,
    /// Per variable: `(source, target, factor)` with `d/dx_i x^src = factor * x^target`,
    /// sorted by the degree of the source monomial.
    derivs: Vec<Vec<(u32, u32, f64)>>,
    /// `deriv_upto[i][k]` = number of entries of `derivs[i]` with source degree <= k.
    deriv_upto: Vec<Vec<usize>>,
    index: HashMap<Vec<u8>, usize>,
}

impl Tables {
    fn build(nvars: usize) -> Tables {
        let mut monomials: Vec<Vec<u8>> = Vec::new();
        let mut upto = Vec::with_capacity(MAX_DEGREE + 1);
        for deg in 0..=MAX_DEGREE {
            let mut layer = Vec::new();
            let mut current = vec![0u8; nvars];
            push_compositions(nvars, deg, 0, &mut current, &mut layer);
            monomials.extend(layer);
            upto.push(monomials.len());
        }
        let index: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let degree = |m: &[u8]| m.iter().map(|&e| e as usize).sum::<usize>();

        let mut products = Vec::new();
        for (a, ma) in monomials.iter().enumerate() {
            let da = degree(ma);
            for (b, mb) in monomials.iter().enumerate() {
                if da + degree(mb) > MAX_DEGREE {
                    continue;
                }
                let prod: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                products.push((a as u32, b as u32, index[&prod] as u32));
            }
        }
        products.sort_by_key(|&(_, _, c)| c);
        let mut product_upto = Vec::with_capacity(MAX_DEGREE + 1);
        for k in 0..=MAX_DEGREE {
            product_upto.push(products.partition_point(|&(_, _, c)| (c as usize) < upto[k]));
        }

        let mut derivs = Vec::with_capacity(nvars);
        let mut deriv_upto = Vec::with_capacity(nvars);
        for var in 0..nvars {
            let mut list = Vec::new();
            for (src, m) in monomials.iter().enumerate() {
                if m[var] == 0 {
                    continue;
                }
                let mut t = m.clone();
                t[var] -= 1;
                list.push((src as u32, index[&t] as u32, m[var] as f64));
            }
            let counts = (0..=MAX_DEGREE)
                .map(|k| list.partition_point(|&(s, _, _)| (s as usize) < upto[k]))
                .collect();
            derivs.push(list);
            deriv_upto.push(counts);
        }

        Tables {
            monomials,
            upto,
            products,
            product_upto,
            derivs,
            deriv_upto,
            index,
        }
    }
}

fn push_compositions(nvars: usize, remaining: usize, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos == nvars - 1 {
        cur[pos] = remaining as u8;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e as u8;
        push_compositions(nvars, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

fn tables(nvars: usize) -> &'static Tables {
    static CACHE: OnceLock<RwLock<Vec<Option<&'static Tables>>>> = OnceLock::new();
    assert!(
        (1..=MAX_VARS).contains(&nvars),
        "jets support 1..={MAX_VARS} variables, got {nvars}"
    );
    let cache = CACHE.get_or_init(|| RwLock::new(vec![None; MAX_VARS + 1]));
    if let Some(t) = cache.read().expect("jet table cache poisoned")[nvars] {
        return t;
    }
    let mut guard = cache.write().expect("jet table cache poisoned");
    if let Some(t) = guard[nvars] {
        return t;
    }
    let t: &'static Tables = Box::leak(Box::new(Tables::build(nvars)));
    guard[nvars] = Some(t);
    t
}

/// Number of Taylor coefficients of a degree-`degree` jet in `nvars` variables.
pub fn coefficient_count(nvars: usize, degree: usize) -> usize {
    tables(nvars).upto[degree]
}

/// Truncated Taylor expansion of a smooth function around a point.
#[derive(Clone, PartialEq)]
pub struct Jet {
    nvars: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.nvars)
            .field("degree", &self.degree)
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    pub fn constant(nvars: usize, degree: usize, value: f64) -> Jet {
        assert!(degree <= MAX_DEGREE, "jet degree {degree} exceeds {MAX_DEGREE}");
        let mut coeffs = vec![0.0; coefficient_count(nvars, degree)];
        coeffs[0] = value;
        Jet {
            nvars,
            degree,
            coeffs,
        }
    }

    pub fn zero(nvars: usize, degree: usize) -> Jet {
        Jet::constant(nvars, degree, 0.0)
    }

    /// The coordinate function `x_var` expanded around `x_var = value`.
    pub fn variable(nvars: usize, degree: usize, var: usize, value: f64) -> Jet {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut j = Jet::constant(nvars, degree, value);
        if degree >= 1 {
            j.coeffs[1 + var] = 1.0;
        }
        j
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Highest total derivative order carried by this jet.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exponents: &[u8]) -> f64 {
        let t = tables(self.nvars);
        match t.index.get(exponents) {
            Some(&i) if i < self.coeffs.len() => self.coeffs[i],
            _ => 0.0,
        }
    }

    /// Mixed partial derivative along the listed variables (order of the list is irrelevant).
    ///
    /// Panics if the multi-index is longer than the jet degree.
    pub fn derivative(&self, multi_index: &[usize]) -> f64 {
        assert!(
            multi_index.len() <= self.degree,
            "derivative of order {} requested from a degree-{} jet",
            multi_index.len(),
            self.degree
        );
        let mut exps = vec![0u8; self.nvars];
        for &i in multi_index {
            assert!(i < self.nvars, "variable index {i} out of range");
            exps[i] += 1;
        }
        let factorial: f64 = exps.iter().map(|&e| (1..=e as u64).product::<u64>() as f64).product();
        self.coefficient(&exps) * factorial
    }

    /// First partial derivatives at the base point.
    pub fn gradient(&self) -> Vec<f64> {
        assert!(self.degree >= 1, "gradient requested from a degree-0 jet");
        self.coeffs[1..=self.nvars].to_vec()
    }

    /// The jet of `d/dx_var` of this function; its degree is one lower.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(self.degree >= 1, "cannot differentiate a degree-0 jet");
        assert!(var < self.nvars, "variable index {var} out of range");
        let t = tables(self.nvars);
        let out_degree = self.degree - 1;
        let mut coeffs = vec![0.0; t.upto[out_degree]];
        let n = t.deriv_upto[var][self.degree];
        for &(src, dst, factor) in &t.derivs[var][..n] {
            coeffs[dst as usize] += factor * self.coeffs[src as usize];
        }
        Jet {
            nvars: self.nvars,
            degree: out_degree,
            coeffs,
        }
    }

    /// Drops all coefficients above `degree`.
    pub fn truncate(&self, degree: usize) -> Jet {
        let degree = degree.min(self.degree);
        let n = coefficient_count(self.nvars, degree);
        Jet {
            nvars: self.nvars,
            degree,
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Re-expresses this jet in a larger variable set, where old variable `i`
    /// becomes new variable `map[i]`. Used to pull back along coordinate projections.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Jet {
        assert_eq!(map.len(), self.nvars, "embedding map has wrong length");
        let src = tables(self.nvars);
        let dst = tables(nvars);
        let mut coeffs = vec![0.0; dst.upto[self.degree]];
        let mut exps = vec![0u8; nvars];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            exps.iter_mut().for_each(|e| *e = 0);
            for (old, &e) in src.monomials[i].iter().enumerate() {
                exps[map[old]] += e;
            }
            coeffs[dst.index[&exps]] += c;
        }
        Jet {
            nvars,
            degree: self.degree,
            coeffs,
        }
    }

    /// Substitutes `inner[i]` for variable `i`: given the jet of `f` around `y0`
    /// and jets of `y_i(x)` with `y_i(x0) = y0_i`, returns the jet of `f(y(x))`.
    pub fn compose(&self, inner: &[Jet]) -> Jet {
        assert_eq!(inner.len(), self.nvars, "composition needs one inner jet per variable");
        let nvars = inner[0].nvars;
        let degree = inner.iter().map(|j| j.degree).min().unwrap_or(0).min(self.degree);
        let src = tables(self.nvars);
        let shifts: Vec<Jet> = inner
            .iter()
            .map(|j| {
                let mut s = j.truncate(degree);
                s.coeffs[0] = 0.0;
                s
            })
            .collect();
        // powers[i] = product of shifts^monomial_i, built incrementally in graded order.
        let count = src.upto[degree];
        let mut powers: Vec<Jet> = Vec::with_capacity(count);
        powers.push(Jet::constant(nvars, degree, 1.0));
        let mut result = Jet::constant(nvars, degree, self.coeffs[0]);
        for i in 1..count {
            let m = &src.monomials[i];
            let var = m.iter().position(|&e| e > 0).expect("non-constant monomial");
            let mut prev = m.clone();
            prev[var] -= 1;
            let p = &powers[src.index[&prev]] * &shifts[var];
            if self.coeffs[i] != 0.0 {
                result.axpy(self.coeffs[i], &p);
            }
            powers.push(p);
        }
        result
    }

    /// Applies a univariate function given its derivatives `[f(u0), f'(u0), f''(u0), ...]`
    /// at `u0 = self.value()`. Needs at least `degree + 1` entries.
    pub fn apply(&self, derivs: &[f64]) -> Jet {
        assert!(derivs.len() > self.degree, "not enough derivatives supplied");
        let mut shift = self.clone();
        shift.coeffs[0] = 0.0;
        let mut factorial = 1.0;
        let scaled: Vec<f64> = (0..=self.degree)
            .map(|n| {
                if n > 0 {
                    factorial *= n as f64;
                }
                derivs[n] / factorial
            })
            .collect();
        let mut result = Jet::constant(self.nvars, self.degree, scaled[self.degree]);
        for n in (0..self.degree).rev() {
            result = &result * &shift;
            result.coeffs[0] += scaled[n];
        }
        result
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Jet) {
        self.check_vars(other);
        if other.degree < self.degree {
            *self = self.truncate(other.degree);
        }
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
    }

    pub fn scale(&self, a: f64) -> Jet {
        Jet {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.apply(&vec![e; self.degree + 1])
    }

    pub fn ln(&self) -> Jet {
        let u = self.value();
        let mut d = vec![u.ln()];
        let mut fact = 1.0;
        for n in 1..=self.degree {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            d.push(sign * fact / u.powi(n as i32));
        }
        self.apply(&d)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.apply(&(0..=self.degree).map(|n| cycle[n % 4]).collect::<Vec<_>>())
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.apply(&(0..=self.degree).map(|n| cycle[n % 4]).collect::<Vec<_>>())
    }

    /// Real power `self^a`; the base value must be positive unless `a` is integral.
    pub fn powf(&self, a: f64) -> Jet {
        let u = self.value();
        let mut d = Vec::with_capacity(self.degree + 1);
        let mut falling = 1.0;
        for n in 0..=self.degree {
            d.push(falling * u.powf(a - n as f64));
            falling *= a - n as f64;
        }
        self.apply(&d)
    }

    pub fn powi(&self, n: i32) -> Jet {
        let u = self.value();
        let mut d = Vec::with_capacity(self.degree + 1);
        let mut falling = 1.0;
        for k in 0..=self.degree {
            d.push(if falling == 0.0 { 0.0 } else { falling * u.powi(n - k as i32) });
            falling *= (n - k as i32) as f64;
        }
        self.apply(&d)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Jet {
        self.powi(-1)
    }

    fn check_vars(&self, other: &Jet) {
        assert_eq!(
            self.nvars, other.nvars,
            "jets over different variable sets cannot be combined"
        );
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        self.check_vars(other);
        let degree = self.degree.min(other.degree);
        let n = coefficient_count(self.nvars, degree);
        Jet {
            nvars: self.nvars,
            degree,
            coeffs: self.coeffs[..n]
                .iter()
                .zip(&other.coeffs[..n])
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn product(&self, other: &Jet) -> Jet {
        self.check_vars(other);
        let degree = self.degree.min(other.degree);
        let t = tables(self.nvars);
        let mut coeffs = vec![0.0; t.upto[degree]];
        let a = &self.coeffs;
        let b = &other.coeffs;
        for &(i, j, k) in &t.products[..t.product_upto[degree]] {
            coeffs[k as usize] += a[i as usize] * b[j as usize];
        }
        Jet {
            nvars: self.nvars,
            degree,
            coeffs,
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.product(rhs)
    }
}

impl Div for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        self.product(&rhs.recip())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut j = self.clone();
        j.coeffs[0] += rhs;
        j
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        self.axpy(1.0, rhs);
    }
}

impl AddAssign<Jet> for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        self.axpy(1.0, &rhs);
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        self.axpy(-1.0, rhs);
    }
}

impl SubAssign<Jet> for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        self.axpy(-1.0, &rhs);
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, rhs: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
    }
}

/// Sum of products `Σ a_i * b_i` without intermediate allocation per term beyond the products.
pub fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    assert_eq!(a.len(), b.len());
    let mut it = a.iter().zip(b);
    let (x, y) = it.next().expect("dot of empty slices");
    let mut acc = x * y;
    for (x, y) in it {
        acc += x * y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn var(n: usize, k: usize, i: usize, v: f64) -> Jet {
        Jet::variable(n, k, i, v)
    }

    #[test]
    fn coefficient_layout_is_graded() {
        // 2 variables, degree 3: 1 + 2 + 3 + 4 monomials.
        assert_eq!(coefficient_count(2, 3), 10);
        assert_eq!(coefficient_count(3, 2), 10);
        assert_eq!(coefficient_count(6, 3), 84);
    }

    #[test]
    fn polynomial_mixed_partial() {
        // f = x y^2 ; d2f/dxdy = 2y
        let x = var(2, 3, 0, 1.0);
        let y = var(2, 3, 1, 1.0);
        let f = &x * &(&y * &y);
        assert_abs_diff_eq!(f.derivative(&[0, 1]), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.derivative(&[1, 0]), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.derivative(&[1, 1]), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.derivative(&[0, 1, 1]), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.derivative(&[0, 0]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn constant_has_no_derivatives() {
        let c = Jet::constant(3, 3, 4.5);
        for idx in [vec![0], vec![1, 2], vec![0, 1, 2], vec![2, 2, 2]] {
            assert_eq!(c.derivative(&idx), 0.0);
        }
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = var(1, 4, 0, 0.3);
        let e = x.exp();
        for k in 0..=4 {
            let idx = vec![0; k];
            assert_abs_diff_eq!(e.derivative(&idx), 0.3f64.exp(), epsilon = 1e-14);
        }
        let s = x.sin();
        assert_abs_diff_eq!(s.derivative(&[0, 0, 0]), -(0.3f64).cos(), epsilon = 1e-14);
        let l = x.ln();
        assert_abs_diff_eq!(l.derivative(&[0, 0]), -1.0 / 0.09, epsilon = 1e-12);
        assert_abs_diff_eq!(l.derivative(&[0, 0, 0]), 2.0 / 0.027, epsilon = 1e-10);
        let r = x.powf(2.5);
        assert_abs_diff_eq!(r.derivative(&[0, 0]), 2.5 * 1.5 * 0.3f64.powf(0.5), epsilon = 1e-13);
        let q = x.powi(3);
        assert_abs_diff_eq!(q.derivative(&[0, 0, 0]), 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(q.derivative(&[0, 0, 0, 0]), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn partial_lowers_degree() {
        let x = var(2, 3, 0, 0.5);
        let y = var(2, 3, 1, -0.25);
        let f = (&x * &y).sin();
        let fx = f.partial(0);
        assert_eq!(fx.degree(), 2);
        assert_abs_diff_eq!(fx.value(), f.derivative(&[0]), epsilon = 1e-15);
        assert_abs_diff_eq!(fx.derivative(&[1, 1]), f.derivative(&[0, 1, 1]), epsilon = 1e-14);
    }

    #[test]
    fn embed_and_compose_agree() {
        // f(u, v) = u^2 v, pulled back along (x, y, z) -> (z, x).
        let u = var(2, 3, 0, 0.7);
        let v = var(2, 3, 1, -1.2);
        let f = &(&u * &u) * &v;
        let embedded = f.embed(3, &[2, 0]);
        let x = var(3, 3, 0, -1.2);
        let z = var(3, 3, 2, 0.7);
        let composed = f.compose(&[z.clone(), x.clone()]);
        let direct = &(&z * &z) * &x;
        for (a, b) in embedded.coefficients().iter().zip(direct.coefficients()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        for (a, b) in composed.coefficients().iter().zip(direct.coefficients()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn mixed_degrees_truncate_to_the_smaller() {
        let a = var(2, 3, 0, 1.0);
        let b = var(2, 1, 1, 2.0);
        let c = &a * &b;
        assert_eq!(c.degree(), 1);
        assert_abs_diff_eq!(c.derivative(&[0]), 2.0);
        assert_abs_diff_eq!(c.derivative(&[1]), 1.0);
    }
}
