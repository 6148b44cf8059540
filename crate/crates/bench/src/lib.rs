//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigcert::{GraphMap, MultiPoly, PathModel, PiecewiseLinearPath, SampledPath};

/// Random piecewise-linear path with coordinates in `[-1, 1]`.
pub fn random_pl(seed: u64, dim: usize, segments: usize) -> PiecewiseLinearPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..=segments)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    PiecewiseLinearPath::new(points).unwrap()
}

/// Legendrian curve on the cylinder `x1^2 + x3^2 = 1`, sampled on `[0, 3π]`.
pub fn cylinder(n: usize) -> PathModel {
    SampledPath::from_fn(0.0, 3.0 * std::f64::consts::PI, n, |t| {
        vec![t.cos(), 0.5 * (t.sin() * t.cos() - t), t.sin()]
    })
    .unwrap()
    .into()
}

pub fn paraboloid_map() -> GraphMap {
    GraphMap::at_origin(MultiPoly::parse("2*x1^2 - x2^2", 2).unwrap())
}
