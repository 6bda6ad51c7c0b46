//! Run configuration: a flat `key = value` file, then flag overrides.
//!
//! Recognised keys:
//!
//! ```text
//! quad.abs_tol            quad.rel_tol          quad.max_subdivisions
//! time.t_min              time.t_max            time.count
//! time.spacing (log|linear)                     time.refine (true|false)
//! lambda_grid_size        output_precision
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use exobessel::grid::{Spacing, TimeGrid};
use exobessel::norms::LAMBDA_GRID;
use exobessel::quad::QuadratureConfig;
use exobessel::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub quadrature: QuadratureConfig,
    pub time_grid: TimeGrid,
    pub lambda_grid_size: usize,
    pub output_precision: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature: QuadratureConfig::default(),
            time_grid: TimeGrid::default(),
            lambda_grid_size: LAMBDA_GRID,
            output_precision: 15,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse(format!("bad value '{value}' for {key}")))
}

impl Config {
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse(format!("config line {}: expected key = value", i + 1)));
            };
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "quad.abs_tol" => self.quadrature.abs_tol = parse(key, v)?,
            "quad.rel_tol" => self.quadrature.rel_tol = parse(key, v)?,
            "quad.max_subdivisions" => self.quadrature.max_subdivisions = parse(key, v)?,
            "time.t_min" => self.time_grid.t_min = parse(key, v)?,
            "time.t_max" => self.time_grid.t_max = parse(key, v)?,
            "time.count" => self.time_grid.count = parse(key, v)?,
            "time.spacing" => {
                self.time_grid.spacing = match v {
                    "log" => Spacing::Log,
                    "linear" => Spacing::Linear,
                    _ => return Err(Error::Parse(format!("bad value '{v}' for {key} (log|linear)"))),
                }
            }
            "time.refine" => self.time_grid.refine = parse(key, v)?,
            "lambda_grid_size" => self.lambda_grid_size = parse(key, v)?,
            "output_precision" => self.output_precision = parse(key, v)?,
            _ => return Err(Error::Parse(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.time_grid.validate()?;
        if self.lambda_grid_size == 0 {
            return Err(Error::domain("lambda_grid_size must be positive"));
        }
        if !(1..=17).contains(&self.output_precision) {
            return Err(Error::domain("output_precision must lie in 1..=17"));
        }
        Ok(())
    }
}
