//! Loading point files or catalogs and turning them into marketplaces.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bmcc_core::catalog::Catalog;
use bmcc_core::{rasterize, Bounds, GridConfig, Marketplace, Price, PricingFunction};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{PricingKind, RunConfig, DEFAULT_THETA};
use crate::error::CliError;
use crate::points::{read_points, read_prices, PointFile};

/// Either raw points (re-rasterizable at any θ) or a rasterized catalog.
#[derive(Clone, Debug)]
pub enum Source {
    Points(PointFile),
    Catalog(Catalog),
}

impl Source {
    /// `.json` files are catalogs; anything else is read as a point file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::data(path.display(), e))?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            Ok(Source::Catalog(
                Catalog::from_json(&text).map_err(|e| CliError::data(path.display(), e))?,
            ))
        } else {
            read_points(text.as_bytes())
                .map(Source::Points)
                .map_err(|e| CliError::data(path.display(), e))
        }
    }

    /// Resolution used when none is configured.
    pub fn natural_theta(&self) -> u32 {
        match self {
            Source::Points(_) => DEFAULT_THETA,
            Source::Catalog(c) => c.grid.theta,
        }
    }

    /// Dataset ids in ascending order.
    pub fn ids(&self) -> Vec<String> {
        match self {
            Source::Points(p) => p.groups.keys().cloned().collect(),
            Source::Catalog(c) => {
                let mut ids: Vec<String> = c.datasets.iter().map(|d| d.id.clone()).collect();
                ids.sort();
                ids
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Source::Points(p) => p.groups.len(),
            Source::Catalog(c) => c.datasets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Seeded subsample: shuffle the sorted ids and keep the first `⌈m·n⌉`.
/// Fractions are prefixes of one shuffle, so smaller samples nest in larger ones.
pub fn subsample_ids(ids: &[String], fraction: f64, seed: u64) -> Vec<String> {
    let n = ids.len();
    // Guard against 0.2 * 1000 = 200.00000000000003 rounding up.
    let keep = ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1));
    if keep >= n {
        return ids.to_vec();
    }
    let mut shuffled = ids.to_vec();
    shuffled.sort();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    shuffled.truncate(keep);
    shuffled.sort();
    shuffled
}

/// Grid over the configured bounds, or over the envelope of all points.
pub fn grid_for(
    points: &PointFile,
    theta: u32,
    bounds: Option<Bounds>,
) -> Result<GridConfig, CliError> {
    let bounds = match bounds {
        Some(b) => b,
        None => points
            .envelope()
            .ok_or_else(|| CliError::Data("no points".into()))?,
    };
    let grid =
        GridConfig::from_bounds(theta, &bounds).map_err(|e| CliError::Usage(e.to_string()))?;
    points.check_inside(&grid)?;
    Ok(grid)
}

fn price_table(
    config: &RunConfig,
    embedded: Option<&BTreeMap<String, Price>>,
) -> Result<BTreeMap<String, Price>, CliError> {
    if let Some(path) = &config.prices {
        let text = fs::read_to_string(path).map_err(|e| CliError::data(path.display(), e))?;
        return read_prices(text.as_bytes()).map_err(|e| CliError::data(path.display(), e));
    }
    embedded.cloned().ok_or_else(|| {
        CliError::Usage(
            "table pricing needs a price file (--prices) or a catalog with prices".into(),
        )
    })
}

/// Builds the marketplace over `ids` at resolution `theta`. The grid spans
/// the whole source (or the configured bounds) whatever the subset.
pub fn build_market(
    source: &Source,
    ids: &[String],
    theta: u32,
    config: &RunConfig,
) -> Result<Marketplace, CliError> {
    let (grid, datasets, embedded) = match source {
        Source::Points(points) => {
            let grid = grid_for(points, theta, config.bounds)?;
            let subset = points.subset(ids);
            let datasets = subset
                .datasets()
                .iter()
                .map(|d| rasterize(d, &grid))
                .collect::<Result<Vec<_>, _>>()?;
            (grid, datasets, None)
        }
        Source::Catalog(catalog) => {
            if catalog.grid.theta != theta {
                return Err(CliError::Usage(format!(
                    "catalog is rasterized at theta {}; pass the point file to use theta {theta}",
                    catalog.grid.theta
                )));
            }
            let keep: std::collections::BTreeSet<&String> = ids.iter().collect();
            let datasets = catalog
                .datasets
                .iter()
                .filter(|d| keep.contains(&d.id))
                .cloned()
                .collect();
            (catalog.grid.clone(), datasets, catalog.prices.as_ref())
        }
    };
    let pricing = match config.pricing {
        PricingKind::Usage => PricingFunction::UsageBased,
        PricingKind::Table => PricingFunction::ExplicitTable(price_table(config, embedded)?),
    };
    Ok(Marketplace::new(grid, datasets, pricing)?)
}
