//! Deterministic sample points inside a chart.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{Chart, Point};

/// Default number of sample points per check.
pub const DEFAULT_POINTS: usize = 32;
/// Default seed.
pub const DEFAULT_SEED: u64 = 42;
/// Fraction of each side removed at both ends before sampling.
pub const SAMPLE_MARGIN: f64 = 0.1;

/// `count` points drawn uniformly from the box shrunk by [`SAMPLE_MARGIN`], reproducible from `seed`.
pub fn sample_points(chart: &Chart, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..chart.dim()).map(|_| rng.random::<f64>()).collect();
            chart
                .interior_point(&u, SAMPLE_MARGIN)
                .expect("shrunk box lies inside the chart")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_inside() {
        let c = Chart::cube(3, -1.0, 2.0).unwrap();
        let a = sample_points(&c, 5, 7);
        let b = sample_points(&c, 5, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_points(&c, 5, 8));
        for p in &a {
            assert!(p.coords().iter().all(|&x| (-0.7..=1.7).contains(&x)));
        }
    }
}
