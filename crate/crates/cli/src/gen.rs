//! Seeded synthetic point data.
//!
//! Dataset centres are scattered around a handful of cluster centres and
//! each dataset's points are scattered around its own centre. Point counts
//! are log-uniform, so a few datasets are much larger than the rest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub datasets: usize,
    pub min_points: usize,
    pub max_points: usize,
    pub clusters: usize,
    /// Standard deviation of dataset centres around their cluster centre.
    pub cluster_radius: f64,
    /// Standard deviation of points around their dataset centre.
    pub spread: f64,
    /// Side of the square `[0, extent]²` all points are clamped to.
    pub extent: f64,
    pub seed: u64,
    pub decimals: usize,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            datasets: 1000,
            min_points: 4,
            max_points: 40,
            clusters: 6,
            cluster_radius: 40.0,
            spread: 6.0,
            extent: 1000.0,
            seed: 42,
            decimals: 4,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.datasets == 0 {
            return bad("dataset count must be positive");
        }
        if self.min_points == 0 || self.min_points > self.max_points {
            return bad("point counts must satisfy 1 <= min-points <= max-points");
        }
        if self.clusters == 0 {
            return bad("cluster count must be positive");
        }
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return bad("extent must be positive");
        }
        for v in [self.cluster_radius, self.spread] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad("cluster radius and spread must be finite and non-negative");
            }
        }
        if self.decimals > 12 {
            return bad("at most 12 decimals");
        }
        Ok(())
    }
}

/// Dataset ids are zero-padded so that id order matches generation order.
pub fn generate(spec: &GenSpec) -> Result<Vec<(String, f64, f64)>, CliError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let width = spec.datasets.to_string().len();
    let clamp = |v: f64| v.clamp(0.0, spec.extent);
    let centres: Vec<(f64, f64)> = (0..spec.clusters)
        .map(|_| {
            (
                rng.random_range(0.0..=spec.extent),
                rng.random_range(0.0..=spec.extent),
            )
        })
        .collect();
    let around = Normal::new(0.0, spec.cluster_radius).expect("validated");
    let jitter = Normal::new(0.0, spec.spread).expect("validated");
    let (lo, hi) = (
        (spec.min_points as f64).ln(),
        ((spec.max_points + 1) as f64).ln(),
    );

    let mut rows = Vec::new();
    for i in 0..spec.datasets {
        let id = format!("ds{i:0width$}");
        let (cx, cy) = centres[rng.random_range(0..spec.clusters)];
        let (dx, dy) = (
            clamp(cx + around.sample(&mut rng)),
            clamp(cy + around.sample(&mut rng)),
        );
        let n = if lo < hi {
            (rng.random_range(lo..hi).exp().floor() as usize)
                .clamp(spec.min_points, spec.max_points)
        } else {
            spec.min_points
        };
        for _ in 0..n {
            rows.push((
                id.clone(),
                clamp(dx + jitter.sample(&mut rng)),
                clamp(dy + jitter.sample(&mut rng)),
            ));
        }
    }
    Ok(rows)
}
