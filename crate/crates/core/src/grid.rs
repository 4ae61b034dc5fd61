//! Uniform grid over the bounding space, z-order cell ids and rasterization.
//!
//! Cells are addressed by `(x, y)` column/row indices in `[0, 2^θ)` and
//! numbered by Morton interleaving with the x bits in even positions, so
//! `encode_cell(1, 2, 2) == 0b1001 == 9`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CellId = u64;

pub const MAX_THETA: u32 = 31;

/// Slack, in cell units, tolerated when deciding whether a point sits on the
/// upper boundary of the grid.
const BOUNDARY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub theta: u32,
    pub origin_x: f64,
    pub origin_y: f64,
    pub cell_width: f64,
    pub cell_height: f64,
}

/// Axis-aligned coordinate envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Bounds {
    /// Smallest envelope containing every point of every dataset.
    pub fn envelope<'a>(datasets: impl IntoIterator<Item = &'a PointDataset>) -> Option<Bounds> {
        let mut it = datasets.into_iter().flat_map(|d| d.points.iter());
        let &(x0, y0) = it.next()?;
        let init = Bounds {
            min_x: x0,
            min_y: y0,
            max_x: x0,
            max_y: y0,
        };
        Some(it.fold(init, |b, &(x, y)| Bounds {
            min_x: b.min_x.min(x),
            min_y: b.min_y.min(y),
            max_x: b.max_x.max(x),
            max_y: b.max_y.max(y),
        }))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }
}

impl GridConfig {
    pub fn new(
        theta: u32,
        origin_x: f64,
        origin_y: f64,
        cell_width: f64,
        cell_height: f64,
    ) -> Result<Self> {
        let grid = GridConfig {
            theta,
            origin_x,
            origin_y,
            cell_width,
            cell_height,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid whose `2^θ × 2^θ` cells exactly tile `bounds`.
    ///
    /// A degenerate axis (zero extent) gets unit-width cells so that every
    /// point on it still falls into column or row 0.
    pub fn from_bounds(theta: u32, bounds: &Bounds) -> Result<Self> {
        check_theta(theta)?;
        let side = (1u64 << theta) as f64;
        let extent = |lo: f64, hi: f64| {
            let w = (hi - lo) / side;
            if w > 0.0 {
                w
            } else {
                1.0
            }
        };
        GridConfig::new(
            theta,
            bounds.min_x,
            bounds.min_y,
            extent(bounds.min_x, bounds.max_x),
            extent(bounds.min_y, bounds.max_y),
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_theta(self.theta)?;
        if !(self.cell_width > 0.0 && self.cell_width.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "cell width must be positive, got {}",
                self.cell_width
            )));
        }
        if !(self.cell_height > 0.0 && self.cell_height.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "cell height must be positive, got {}",
                self.cell_height
            )));
        }
        if !self.origin_x.is_finite() || !self.origin_y.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(())
    }

    /// Number of cells along one axis.
    pub fn side(&self) -> u64 {
        1u64 << self.theta
    }

    /// Total number of cells, `4^θ`.
    pub fn cell_count(&self) -> u64 {
        cell_count(self.theta)
    }

    pub fn bounds(&self) -> Bounds {
        let side = self.side() as f64;
        Bounds {
            min_x: self.origin_x,
            min_y: self.origin_y,
            max_x: self.origin_x + side * self.cell_width,
            max_y: self.origin_y + side * self.cell_height,
        }
    }

    /// Column/row of the cell containing `(x, y)`, or `None` outside the grid.
    pub fn locate(&self, x: f64, y: f64) -> Option<(u32, u32)> {
        let side = self.side();
        let axis = |v: f64, origin: f64, extent: f64| -> Option<u32> {
            let f = (v - origin) / extent;
            if !f.is_finite() || f < -BOUNDARY_SLACK || f > side as f64 + BOUNDARY_SLACK {
                return None;
            }
            Some((f.max(0.0).floor() as u64).min(side - 1) as u32)
        };
        Some((
            axis(x, self.origin_x, self.cell_width)?,
            axis(y, self.origin_y, self.cell_height)?,
        ))
    }
}

fn check_theta(theta: u32) -> Result<()> {
    if theta == 0 || theta > MAX_THETA {
        return Err(Error::InvalidGrid(format!(
            "theta must lie in 1..={MAX_THETA}, got {theta}"
        )));
    }
    Ok(())
}

pub fn cell_count(theta: u32) -> u64 {
    1u64 << (2 * theta)
}

/// Spreads the low 32 bits of `v` into the even bit positions of a `u64`.
fn spread_bits(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Inverse of [`spread_bits`]: gathers the even bits of `v`.
fn gather_bits(v: u64) -> u32 {
    let mut x = v & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

/// Z-order id of the cell at column `x`, row `y`.
pub fn encode_cell(x: u32, y: u32, theta: u32) -> Result<CellId> {
    check_theta(theta)?;
    let limit = 1u64 << theta;
    if x as u64 >= limit {
        return Err(Error::CellIndexOutOfRange {
            axis: 'x',
            index: x as u64,
            theta,
            limit,
        });
    }
    if y as u64 >= limit {
        return Err(Error::CellIndexOutOfRange {
            axis: 'y',
            index: y as u64,
            theta,
            limit,
        });
    }
    Ok(spread_bits(x) | (spread_bits(y) << 1))
}

pub fn decode_cell(cell: CellId, theta: u32) -> Result<(u32, u32)> {
    check_theta(theta)?;
    if cell >= cell_count(theta) {
        return Err(Error::CellIdOutOfRange { id: cell, theta });
    }
    Ok(decode_unchecked(cell))
}

#[inline]
pub(crate) fn decode_unchecked(cell: CellId) -> (u32, u32) {
    (gather_bits(cell), gather_bits(cell >> 1))
}

/// A raw spatial dataset: an identifier plus its points in input units.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDataset {
    pub id: String,
    pub points: Vec<(f64, f64)>,
}

impl PointDataset {
    pub fn new(id: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        let id = id.into();
        if points.is_empty() {
            return Err(Error::EmptyDataset(id));
        }
        Ok(PointDataset { id, points })
    }
}

/// A dataset reduced to the strictly ascending set of grid cells it touches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBasedDataset {
    pub id: String,
    pub theta: u32,
    cells: Vec<CellId>,
}

impl CellBasedDataset {
    /// Builds a dataset from arbitrary cell ids; duplicates collapse.
    pub fn new(id: impl Into<String>, theta: u32, mut cells: Vec<CellId>) -> Result<Self> {
        check_theta(theta)?;
        cells.sort_unstable();
        cells.dedup();
        if let Some(&last) = cells.last() {
            if last >= cell_count(theta) {
                return Err(Error::CellIdOutOfRange { id: last, theta });
            }
        }
        Ok(CellBasedDataset {
            id: id.into(),
            theta,
            cells,
        })
    }

    pub fn cells(&self) -> &[CellId] {
        &self.cells
    }

    /// Spatial coverage: the number of distinct cells.
    pub fn coverage(&self) -> usize {
        self.cells.len()
    }

    /// Decoded `(x, y)` cell indices, in cell-id order.
    pub fn coordinates(&self) -> Vec<(u32, u32)> {
        self.cells.iter().map(|&c| decode_unchecked(c)).collect()
    }

    /// Re-checks the invariants after deserialization.
    pub fn validate(&self) -> Result<()> {
        check_theta(self.theta)?;
        if !self.cells.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Format(format!(
                "cells of dataset {:?} are not strictly ascending",
                self.id
            )));
        }
        if let Some(&last) = self.cells.last() {
            if last >= cell_count(self.theta) {
                return Err(Error::CellIdOutOfRange {
                    id: last,
                    theta: self.theta,
                });
            }
        }
        Ok(())
    }
}

pub fn rasterize(dataset: &PointDataset, grid: &GridConfig) -> Result<CellBasedDataset> {
    if dataset.points.is_empty() {
        return Err(Error::EmptyDataset(dataset.id.clone()));
    }
    let mut cells = Vec::with_capacity(dataset.points.len());
    for (index, &(x, y)) in dataset.points.iter().enumerate() {
        let (cx, cy) = grid.locate(x, y).ok_or_else(|| Error::PointOutOfBounds {
            dataset: dataset.id.clone(),
            index,
            x,
            y,
        })?;
        cells.push(encode_cell(cx, cy, grid.theta)?);
    }
    CellBasedDataset::new(dataset.id.clone(), grid.theta, cells)
}

/// Number of distinct cells across all datasets, by k-way merge of the
/// sorted cell sequences.
pub fn coverage_of_union<'a>(collection: impl IntoIterator<Item = &'a CellBasedDataset>) -> usize {
    collection
        .into_iter()
        .map(|d| d.cells.iter().copied())
        .kmerge()
        .dedup()
        .count()
}
