//! Run configuration: defaults, `key=value` files and flag overrides.

use std::path::PathBuf;
use std::str::FromStr;

use bmcc_core::solvers::DEFAULT_ORACLE_CAP;
use bmcc_core::{Algorithm, Bounds, Price};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PricingKind {
    Usage,
    Table,
}

impl FromStr for PricingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "usage" => Ok(PricingKind::Usage),
            "table" => Ok(PricingKind::Table),
            other => Err(format!(
                "unknown pricing {other:?}; expected usage or table"
            )),
        }
    }
}

/// How the budget of one parameter point is given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BudgetSpec {
    Absolute(Price),
    /// Fraction of the total catalog price.
    Ratio(f64),
}

impl BudgetSpec {
    pub fn resolve(self, total_price: Price) -> Price {
        match self {
            BudgetSpec::Absolute(p) => p,
            BudgetSpec::Ratio(r) => total_price.scale_floor(r),
        }
    }

    pub fn ratio(self) -> Option<f64> {
        match self {
            BudgetSpec::Ratio(r) => Some(r),
            BudgetSpec::Absolute(_) => None,
        }
    }
}

pub const DEFAULT_THETA: u32 = 11;
pub const DEFAULT_DELTA: f64 = 10.0;
pub const DEFAULT_BUDGET_RATIO: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Grid resolution; defaults to the catalog's own, or 11 for point files.
    pub theta: Option<u32>,
    pub delta: f64,
    pub budget: Option<Price>,
    pub budget_ratio: Option<f64>,
    pub pricing: PricingKind,
    /// `dataset_id,price` file backing table pricing for point inputs.
    pub prices: Option<PathBuf>,
    pub solvers: Vec<Algorithm>,
    pub seed: u64,
    pub oracle_cap: usize,
    pub bounds: Option<Bounds>,
    pub thetas: Option<Vec<u32>>,
    pub deltas: Option<Vec<f64>>,
    pub budgets: Option<Vec<Price>>,
    pub budget_ratios: Option<Vec<f64>>,
    pub scales: Option<Vec<f64>>,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta: None,
            delta: DEFAULT_DELTA,
            budget: None,
            budget_ratio: None,
            pricing: PricingKind::Usage,
            prices: None,
            solvers: vec![
                Algorithm::Dsa,
                Algorithm::Dpsa,
                Algorithm::DpsaBa,
                Algorithm::CmcMc,
                Algorithm::CmcMg,
            ],
            seed: 0,
            oracle_cap: DEFAULT_ORACLE_CAP,
            bounds: None,
            thetas: None,
            deltas: None,
            budgets: None,
            budget_ratios: None,
            scales: None,
            parallel: false,
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    let items = value
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("{key}: {e}")))
        })
        .collect::<Result<Vec<T>, _>>()?;
    if items.is_empty() {
        return Err(CliError::Usage(format!("{key}: empty list")));
    }
    Ok(items)
}

fn one<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("{key}: {e}")))
}

pub fn parse_bounds(value: &str) -> Result<Bounds, String> {
    let v: Vec<f64> = value
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [min_x, min_y, max_x, max_y] if min_x <= max_x && min_y <= max_y => Ok(Bounds {
            min_x,
            min_y,
            max_x,
            max_y,
        }),
        _ => Err(format!(
            "bounds must be min_x,min_y,max_x,max_y with min <= max, got {value:?}"
        )),
    }
}

impl RunConfig {
    /// Applies one `key=value` setting. Keys use underscores; dashes are accepted too.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        match key.as_str() {
            "theta" => self.theta = Some(one(&key, value)?),
            "delta" => self.delta = one(&key, value)?,
            "budget" => self.budget = Some(one(&key, value)?),
            "budget_ratio" => self.budget_ratio = Some(one(&key, value)?),
            "pricing" => self.pricing = one(&key, value)?,
            "prices" => self.prices = Some(PathBuf::from(value.trim())),
            "solvers" => self.solvers = list(&key, value)?,
            "seed" => self.seed = one(&key, value)?,
            "oracle_cap" => self.oracle_cap = one(&key, value)?,
            "bounds" => {
                self.bounds = Some(parse_bounds(value).map_err(CliError::Usage)?);
            }
            "thetas" => self.thetas = Some(list(&key, value)?),
            "deltas" => self.deltas = Some(list(&key, value)?),
            "budgets" => self.budgets = Some(list(&key, value)?),
            "budget_ratios" => self.budget_ratios = Some(list(&key, value)?),
            "scales" => self.scales = Some(list(&key, value)?),
            "parallel" => self.parallel = one(&key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a config file: one `key = value` per line, `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", n + 1))
            })?;
            self.set(key, value)
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        for &t in self.thetas.iter().flatten().chain(self.theta.iter()) {
            if !(1..=31).contains(&t) {
                return bad(format!("theta must lie in 1..=31, got {t}"));
            }
        }
        for &d in self.deltas.as_deref().unwrap_or(&[self.delta]) {
            if !(d >= 0.0 && d.is_finite()) {
                return bad(format!(
                    "delta must be a finite non-negative number, got {d}"
                ));
            }
        }
        let ratios = self
            .budget_ratios
            .iter()
            .flatten()
            .chain(self.budget_ratio.iter());
        for &r in ratios {
            if !(r >= 0.0 && r.is_finite()) {
                return bad(format!("budget ratio must be non-negative, got {r}"));
            }
        }
        for &m in self.scales.iter().flatten() {
            if !(m > 0.0 && m <= 1.0) {
                return bad(format!("scale fractions must lie in (0, 1], got {m}"));
            }
        }
        if self.solvers.is_empty() {
            return bad("solver list is empty".into());
        }
        Ok(())
    }

    /// Budget of a single-point run; a ratio takes precedence over an absolute value.
    pub fn budget_spec(&self) -> BudgetSpec {
        match (self.budget_ratio, self.budget) {
            (Some(r), _) => BudgetSpec::Ratio(r),
            (None, Some(b)) => BudgetSpec::Absolute(b),
            (None, None) => BudgetSpec::Ratio(DEFAULT_BUDGET_RATIO),
        }
    }

    pub fn delta_axis(&self) -> Vec<f64> {
        self.deltas.clone().unwrap_or_else(|| vec![self.delta])
    }

    pub fn budget_axis(&self) -> Vec<BudgetSpec> {
        if let Some(r) = &self.budget_ratios {
            r.iter().map(|&r| BudgetSpec::Ratio(r)).collect()
        } else if let Some(b) = &self.budgets {
            b.iter().map(|&b| BudgetSpec::Absolute(b)).collect()
        } else {
            vec![self.budget_spec()]
        }
    }

    pub fn scale_axis(&self) -> Vec<f64> {
        self.scales.clone().unwrap_or_else(|| vec![1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let mut c = RunConfig::default();
        c.apply_file_text("# sweep\ntheta = 9\nsolvers=dsa, exact\nbudget-ratios=0.01,0.1 # two\n")
            .unwrap();
        assert_eq!(c.theta, Some(9));
        assert_eq!(c.solvers, vec![Algorithm::Dsa, Algorithm::Exact]);
        assert_eq!(c.budget_axis().len(), 2);
        c.set("theta", "12").unwrap();
        assert_eq!(c.theta, Some(12));
    }

    #[test]
    fn ratio_beats_absolute() {
        let mut c = RunConfig::default();
        c.set("budget", "50").unwrap();
        assert_eq!(c.budget_spec(), BudgetSpec::Absolute(Price::from_units(50)));
        c.set("budget_ratio", "0.5").unwrap();
        assert_eq!(c.budget_spec(), BudgetSpec::Ratio(0.5));
        assert_eq!(
            c.budget_spec().resolve(Price::from_units(9)),
            Price::from_cents(450)
        );
    }

    #[test]
    fn rejects_bad_settings() {
        let mut c = RunConfig::default();
        assert!(c.apply_file_text("theta").is_err());
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("solvers", "dsa,greedy").is_err());
        c.set("scales", "0.5,1.5").unwrap();
        assert!(c.validate().is_err());
        assert!(parse_bounds("0,0,1").is_err());
        assert!(parse_bounds("0,0,-1,1").is_err());
    }
}
