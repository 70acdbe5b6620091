//! Coordinate boxes and points inside them.

use std::sync::Arc;

use crate::error::{GeomError, Result};

/// An open box in R^d with named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    bounds: Vec<(f64, f64)>,
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(bounds: Vec<(f64, f64)>, names: Vec<S>) -> Result<Arc<Chart>> {
        if bounds.is_empty() {
            return Err(GeomError::InvalidChart("dimension must be at least 1".into()));
        }
        if bounds.len() > crate::jet::MAX_VARS {
            return Err(GeomError::InvalidChart(format!(
                "dimension {} exceeds the supported maximum {}",
                bounds.len(),
                crate::jet::MAX_VARS
            )));
        }
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != bounds.len() {
            return Err(GeomError::InvalidChart(format!(
                "{} coordinate names for a {}-dimensional chart",
                names.len(),
                bounds.len()
            )));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(GeomError::InvalidChart(format!(
                    "interval for `{}` is empty or unbounded: ({lo}, {hi})",
                    names[i]
                )));
            }
        }
        Ok(Arc::new(Chart { bounds, names }))
    }

    /// A chart with default names `x0, x1, ...`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Arc<Chart>> {
        Chart::new(vec![(lo, hi); dim], (0..dim).map(|i| format!("x{i}")).collect())
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        self.check(coords).is_ok()
    }

    pub fn check(&self, coords: &[f64]) -> Result<()> {
        if coords.len() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        for (axis, (&x, &(lo, hi))) in coords.iter().zip(&self.bounds).enumerate() {
            if !(x > lo && x < hi) {
                return Err(GeomError::Domain {
                    coords: coords.to_vec(),
                    axis,
                });
            }
        }
        Ok(())
    }

    /// Validates `coords` and wraps them as a point of this chart.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        self.check(coords)?;
        Ok(Point {
            coords: coords.to_vec(),
        })
    }

    /// Maps `u ∈ [0,1]^d` affinely into the box shrunk by `margin` (a fraction of each side) at both ends.
    pub fn interior_point(&self, unit: &[f64], margin: f64) -> Result<Point> {
        let coords: Vec<f64> = unit
            .iter()
            .zip(&self.bounds)
            .map(|(&u, &(lo, hi))| {
                let w = hi - lo;
                let (a, b) = (lo + margin * w, hi - margin * w);
                a + u * (b - a)
            })
            .collect();
        self.point(&coords)
    }

    /// Midpoint of the box.
    pub fn center(&self) -> Point {
        Point {
            coords: self.bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect(),
        }
    }
}

/// Coordinates of a point that has been checked against a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}
