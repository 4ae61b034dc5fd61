//! Versioned JSON serialization of a rasterized catalog.
//!
//! ```json
//! { "format": "bmcc-catalog", "version": 1,
//!   "grid": { "theta": 3, "origin_x": 0.0, ... },
//!   "datasets": [ { "id": "d1", "theta": 3, "cells": [0, 1] } ],
//!   "prices": { "d1": "5.00" } }
//! ```
//!
//! `prices` is optional; when present it can back an explicit price table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellBasedDataset, GridConfig};
use crate::marketplace::{Marketplace, PricingFunction};
use crate::price::Price;

pub const FORMAT_NAME: &str = "bmcc-catalog";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub format: String,
    pub version: u32,
    pub grid: GridConfig,
    pub datasets: Vec<CellBasedDataset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prices: Option<BTreeMap<String, Price>>,
}

impl Catalog {
    pub fn new(grid: GridConfig, datasets: Vec<CellBasedDataset>) -> Self {
        Catalog {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            grid,
            datasets,
            prices: None,
        }
    }

    pub fn from_market(market: &Marketplace) -> Self {
        let mut c = Catalog::new(market.grid().clone(), market.datasets().to_vec());
        if let PricingFunction::ExplicitTable(table) = market.pricing() {
            c.prices = Some(table.clone());
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: Catalog =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if catalog.format != FORMAT_NAME {
            return Err(Error::Format(format!(
                "expected format {FORMAT_NAME:?}, found {:?}",
                catalog.format
            )));
        }
        if catalog.version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported catalog version {} (expected {FORMAT_VERSION})",
                catalog.version
            )));
        }
        catalog.grid.validate()?;
        Ok(catalog)
    }

    /// Builds the marketplace. `explicit_prices` selects the stored price
    /// table; otherwise prices are usage-based.
    pub fn into_market(self, explicit_prices: bool) -> Result<Marketplace> {
        let pricing = if explicit_prices {
            PricingFunction::ExplicitTable(
                self.prices
                    .ok_or_else(|| Error::Format("catalog carries no price table".to_string()))?,
            )
        } else {
            PricingFunction::UsageBased
        };
        Marketplace::new(self.grid, self.datasets, pricing)
    }
}
