use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellBasedDataset, GridConfig};
use crate::price::Price;

/// How dataset prices are derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "table", rename_all = "snake_case")]
pub enum PricingFunction {
    /// Price equals the number of covered cells.
    UsageBased,
    /// Seller-set prices keyed by dataset id.
    ExplicitTable(BTreeMap<String, Price>),
}

impl PricingFunction {
    fn resolve(&self, dataset: &CellBasedDataset) -> Result<Price> {
        let price = match self {
            PricingFunction::UsageBased => Price::from_units(dataset.coverage() as i64),
            PricingFunction::ExplicitTable(table) => *table
                .get(&dataset.id)
                .ok_or_else(|| Error::UnknownDataset(dataset.id.clone()))?,
        };
        if !price.is_positive() {
            return Err(Error::InvalidPrice(format!(
                "dataset {:?} has non-positive price {price}",
                dataset.id
            )));
        }
        Ok(price)
    }
}

/// An immutable catalog of priced cell-based datasets on one grid.
///
/// Datasets are kept sorted by id; the position of a dataset in that order
/// is its node id everywhere downstream (graphs, solvers, solutions).
#[derive(Clone, Debug)]
pub struct Marketplace {
    grid: GridConfig,
    datasets: Vec<CellBasedDataset>,
    prices: Vec<Price>,
    pricing: PricingFunction,
}

impl Marketplace {
    pub fn new(
        grid: GridConfig,
        mut datasets: Vec<CellBasedDataset>,
        pricing: PricingFunction,
    ) -> Result<Self> {
        grid.validate()?;
        if datasets.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        datasets.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in datasets.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateDataset(pair[0].id.clone()));
            }
        }
        for d in &datasets {
            d.validate()?;
            if d.theta != grid.theta {
                return Err(Error::Mismatch(format!(
                    "dataset {:?} rasterized at theta {}, catalog grid has theta {}",
                    d.id, d.theta, grid.theta
                )));
            }
            if d.coverage() == 0 {
                return Err(Error::EmptyDataset(d.id.clone()));
            }
        }
        let prices = datasets
            .iter()
            .map(|d| pricing.resolve(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Marketplace {
            grid,
            datasets,
            prices,
            pricing,
        })
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn pricing(&self) -> &PricingFunction {
        &self.pricing
    }

    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }

    pub fn datasets(&self) -> &[CellBasedDataset] {
        &self.datasets
    }

    pub fn dataset(&self, node: usize) -> &CellBasedDataset {
        &self.datasets[node]
    }

    pub fn id(&self, node: usize) -> &str {
        &self.datasets[node].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.datasets
            .binary_search_by(|d| d.id.as_str().cmp(id))
            .map_err(|_| Error::UnknownDataset(id.to_string()))
    }

    /// Price of the dataset at node index `node`.
    pub fn price_of(&self, node: usize) -> Price {
        self.prices[node]
    }

    pub fn prices(&self) -> &[Price] {
        &self.prices
    }

    /// Price of the dataset with the given id.
    pub fn price(&self, id: &str) -> Result<Price> {
        self.index_of(id).map(|i| self.prices[i])
    }

    pub fn min_price(&self) -> Price {
        *self.prices.iter().min().expect("catalog is non-empty")
    }

    pub fn max_price(&self) -> Price {
        *self.prices.iter().max().expect("catalog is non-empty")
    }

    pub fn total_price(&self) -> Price {
        self.prices.iter().copied().sum()
    }

    /// Node indices of every dataset priced at most `budget`, ascending.
    pub fn affordable_subset(&self, budget: Price) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.prices[i] <= budget)
            .collect()
    }
}
