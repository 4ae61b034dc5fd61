//! Delimited text formats: point files and price tables.
//!
//! A point file has the header `dataset_id,x,y` and one point per row.
//! A price table has the header `dataset_id,price`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use bmcc_core::{Bounds, GridConfig, PointDataset, Price};

use crate::error::CliError;

/// One dataset's points together with the file line of each point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGroup {
    pub points: Vec<(f64, f64)>,
    pub lines: Vec<u64>,
}

/// Points grouped by dataset id, in id order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointFile {
    pub groups: BTreeMap<String, PointGroup>,
    pub point_count: usize,
}

impl PointFile {
    pub fn envelope(&self) -> Option<Bounds> {
        let all = self.groups.values().flat_map(|g| g.points.iter());
        let mut b: Option<Bounds> = None;
        for &(x, y) in all {
            b = Some(match b {
                None => Bounds {
                    min_x: x,
                    min_y: y,
                    max_x: x,
                    max_y: y,
                },
                Some(b) => Bounds {
                    min_x: b.min_x.min(x),
                    min_y: b.min_y.min(y),
                    max_x: b.max_x.max(x),
                    max_y: b.max_y.max(y),
                },
            });
        }
        b
    }

    /// Fails at the first point lying outside `grid`, naming its line.
    pub fn check_inside(&self, grid: &GridConfig) -> Result<(), CliError> {
        for (id, g) in &self.groups {
            for (&(x, y), line) in g.points.iter().zip(&g.lines) {
                if grid.locate(x, y).is_none() {
                    return Err(CliError::Data(format!(
                        "line {line}: point ({x}, {y}) of dataset {id:?} lies outside the bounding space"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn datasets(&self) -> Vec<PointDataset> {
        self.groups
            .iter()
            .map(|(id, g)| PointDataset {
                id: id.clone(),
                points: g.points.clone(),
            })
            .collect()
    }

    /// Keeps only the listed dataset ids.
    pub fn subset(&self, ids: &[String]) -> PointFile {
        let groups: BTreeMap<_, _> = ids
            .iter()
            .filter_map(|id| self.groups.get(id).map(|g| (id.clone(), g.clone())))
            .collect();
        let point_count = groups.values().map(|g| g.points.len()).sum();
        PointFile {
            groups,
            point_count,
        }
    }
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<(), CliError> {
    let headers = rdr
        .headers()
        .map_err(|e| CliError::data("line 1", e))?
        .clone();
    if headers.is_empty() {
        return Err(CliError::Data("empty file".into()));
    }
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != expected {
        return Err(CliError::Data(format!(
            "line 1: expected header {:?}, found {:?}",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

pub fn read_points(input: impl Read) -> Result<PointFile, CliError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    check_header(&mut rdr, &["dataset_id", "x", "y"])?;
    let mut file = PointFile::default();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::data(format!("line {line}"), e)
        })?;
        let line = line_of(&record);
        if record.len() != 3 {
            return Err(CliError::Data(format!(
                "line {line}: expected 3 fields, found {}",
                record.len()
            )));
        }
        let id = record[0].trim();
        if id.is_empty() {
            return Err(CliError::Data(format!("line {line}: empty dataset id")));
        }
        let coord = |i: usize, name: &str| -> Result<f64, CliError> {
            let v: f64 = record[i].trim().parse().map_err(|_| {
                CliError::Data(format!(
                    "line {line}: invalid {name} coordinate {:?}",
                    &record[i]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "line {line}: {name} coordinate is not finite"
                )));
            }
            Ok(v)
        };
        let (x, y) = (coord(1, "x")?, coord(2, "y")?);
        let group = file
            .groups
            .entry(id.to_string())
            .or_insert_with(|| PointGroup {
                points: Vec::new(),
                lines: Vec::new(),
            });
        group.points.push((x, y));
        group.lines.push(line);
        file.point_count += 1;
    }
    if file.point_count == 0 {
        return Err(CliError::Data("point file has no data rows".into()));
    }
    Ok(file)
}

/// Writes points with a fixed number of decimals so output is reproducible.
pub fn write_points<'a>(
    out: impl Write,
    rows: impl IntoIterator<Item = (&'a str, f64, f64)>,
    decimals: usize,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(["dataset_id", "x", "y"]).map_err(io)?;
    for (id, x, y) in rows {
        w.write_record([id, &format!("{x:.decimals$}"), &format!("{y:.decimals$}")])
            .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Data(e.to_string()))
}

pub fn read_prices(input: impl Read) -> Result<BTreeMap<String, Price>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    check_header(&mut rdr, &["dataset_id", "price"])?;
    let mut table = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::data("price table", e))?;
        let line = line_of(&record);
        if record.len() != 2 {
            return Err(CliError::Data(format!("line {line}: expected 2 fields")));
        }
        let price: Price = record[1]
            .trim()
            .parse()
            .map_err(|e| CliError::data(format!("line {line}"), e))?;
        if table.insert(record[0].trim().to_string(), price).is_some() {
            return Err(CliError::Data(format!(
                "line {line}: duplicate price for {:?}",
                &record[0]
            )));
        }
    }
    Ok(table)
}
