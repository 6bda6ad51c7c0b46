//! Sampled input functions and time grids.

use crate::error::{Error, Result};

/// How a [`GridFunction`] is extended between its nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interp {
    /// Value `v_i` on `[x_i, x_{i+1})`; the last value is unused.
    Constant,
    /// Linear interpolation between nodes.
    Linear,
}

impl std::str::FromStr for Interp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "pc" | "step" => Ok(Interp::Constant),
            "linear" | "pl" => Ok(Interp::Linear),
            _ => Err(Error::Parse(format!("unknown interpolation '{s}' (use constant|linear)"))),
        }
    }
}

/// A function on `(0, inf)` given by samples; zero outside `[x_0, x_{n-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    vs: Vec<f64>,
    interp: Interp,
}

/// One piece of a grid function: `f(y) = c0 + c1 y` on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Cell {
    pub fn eval(&self, y: f64) -> f64 {
        self.c0 + self.c1 * y
    }
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, vs: Vec<f64>, interp: Interp) -> Result<Self> {
        if xs.len() != vs.len() {
            return Err(Error::domain("abscissae and values differ in length"));
        }
        if xs.len() < 2 {
            return Err(Error::domain("a grid function needs at least two nodes"));
        }
        if !(xs[0] > 0.0) {
            return Err(Error::domain("abscissae must be positive"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("abscissae must be strictly increasing"));
        }
        if xs.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("grid function entries must be finite"));
        }
        Ok(GridFunction { xs, vs, interp })
    }

    /// `chi_(a, b)`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![1.0, 0.0], Interp::Constant)
    }

    /// Sample `f` at `xs`.
    pub fn from_fn(xs: Vec<f64>, f: impl Fn(f64) -> f64, interp: Interp) -> Result<Self> {
        let vs = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, vs, interp)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.vs
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, y: f64) -> f64 {
        let n = self.xs.len();
        if !(y >= self.xs[0]) || y > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&x| x <= y).saturating_sub(1);
        match self.interp {
            Interp::Constant => {
                if i + 1 >= n {
                    0.0
                } else {
                    self.vs[i]
                }
            }
            Interp::Linear => {
                if i + 1 >= n {
                    return self.vs[n - 1];
                }
                let (x0, x1) = (self.xs[i], self.xs[i + 1]);
                let s = (y - x0) / (x1 - x0);
                self.vs[i] + s * (self.vs[i + 1] - self.vs[i])
            }
        }
    }

    /// The pieces on which the function is affine.
    pub fn cells(&self) -> Vec<Cell> {
        self.xs
            .windows(2)
            .enumerate()
            .map(|(i, w)| match self.interp {
                Interp::Constant => Cell { a: w[0], b: w[1], c0: self.vs[i], c1: 0.0 },
                Interp::Linear => {
                    let c1 = (self.vs[i + 1] - self.vs[i]) / (w[1] - w[0]);
                    Cell { a: w[0], b: w[1], c0: self.vs[i] - c1 * w[0], c1 }
                }
            })
            .collect()
    }

    /// `|f|`, with zero crossings of linear pieces inserted as nodes.
    pub fn abs(&self) -> GridFunction {
        match self.interp {
            Interp::Constant => GridFunction {
                xs: self.xs.clone(),
                vs: self.vs.iter().map(|v| v.abs()).collect(),
                interp: Interp::Constant,
            },
            Interp::Linear => {
                let mut xs = vec![self.xs[0]];
                let mut vs = vec![self.vs[0].abs()];
                for i in 0..self.xs.len() - 1 {
                    let (v0, v1) = (self.vs[i], self.vs[i + 1]);
                    if v0 * v1 < 0.0 {
                        let z = self.xs[i] + (self.xs[i + 1] - self.xs[i]) * v0 / (v0 - v1);
                        if z > xs[xs.len() - 1] && z < self.xs[i + 1] {
                            xs.push(z);
                            vs.push(0.0);
                        }
                    }
                    xs.push(self.xs[i + 1]);
                    vs.push(v1.abs());
                }
                GridFunction { xs, vs, interp: Interp::Linear }
            }
        }
    }

    /// Parse a two-column CSV (`x,value` with a header row).
    pub fn from_csv(text: &str, interp: Interp) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("line {}: expected two columns", lineno + 1)));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vs.push(v);
                }
                _ if xs.is_empty() && lineno == 0 => continue, // header
                _ => return Err(Error::Parse(format!("line {}: non-numeric entry '{line}'", lineno + 1))),
            }
        }
        Self::new(xs, vs, interp)
    }
}

/// Anything that can be integrated against a kernel.
pub trait Profile: Sync {
    fn eval(&self, y: f64) -> f64;
    /// Closed interval outside of which the function vanishes.
    fn support(&self) -> (f64, f64);
    /// Points where the function is not smooth.
    fn breakpoints(&self) -> Vec<f64>;
}

impl Profile for GridFunction {
    fn eval(&self, y: f64) -> f64 {
        GridFunction::eval(self, y)
    }
    fn support(&self) -> (f64, f64) {
        GridFunction::support(self)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.xs.clone()
    }
}

/// `y^exponent f(y)`.
pub struct PowerWeighted<'a, P: Profile + ?Sized> {
    pub inner: &'a P,
    pub exponent: f64,
}

impl<P: Profile + ?Sized> Profile for PowerWeighted<'_, P> {
    fn eval(&self, y: f64) -> f64 {
        let v = self.inner.eval(y);
        if v == 0.0 {
            0.0
        } else {
            v * y.powf(self.exponent)
        }
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// A closure with declared support.
pub struct FnProfile<F: Fn(f64) -> f64 + Sync> {
    pub f: F,
    pub support: (f64, f64),
    pub breaks: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> Profile for FnProfile<F> {
    fn eval(&self, y: f64) -> f64 {
        if y < self.support.0 || y > self.support.1 {
            0.0
        } else {
            (self.f)(y)
        }
    }
    fn support(&self) -> (f64, f64) {
        self.support
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![self.support.0, self.support.1];
        b.extend(self.breaks.iter().copied());
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Time samples for suprema and square functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub spacing: Spacing,
    /// Polish the best grid point with a golden-section search (never lowers the value).
    pub refine: bool,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { t_min: 1e-6, t_max: 1e6, count: 4000, spacing: Spacing::Log, refine: false }
    }
}

impl TimeGrid {
    pub fn log(t_min: f64, t_max: f64, count: usize) -> Self {
        TimeGrid { t_min, t_max, count, spacing: Spacing::Log, refine: false }
    }

    pub fn with_refine(mut self, refine: bool) -> Self {
        self.refine = refine;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) || self.count < 2 {
            return Err(Error::domain("time grid needs 0 < t_min < t_max and at least two points"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Log => (self.t_min.ln() + s * (self.t_max / self.t_min).ln()).exp(),
                    Spacing::Linear => self.t_min + s * (self.t_max - self.t_min),
                }
            })
            .collect()
    }
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| (a.ln() + (b / a).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Parse `start:stop:step` into an inclusive arithmetic grid.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let nums = |s: &[&str]| -> Result<Vec<f64>> {
        s.iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{p}' in '{text}'"))))
            .collect()
    };
    match parts.as_slice() {
        [single] => Ok(vec![nums(&[single])?[0]]),
        ["log", a, b, n] => {
            let v = nums(&[a, b])?;
            let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad count in '{text}'")))?;
            if !(v[0] > 0.0 && v[1] > v[0]) || n == 0 {
                return Err(Error::domain(format!("log grid needs 0 < a < b and n >= 1: '{text}'")));
            }
            Ok(logspace(v[0], v[1], n))
        }
        [a, b, step] => {
            let v = nums(&[a, b, step])?;
            let (a, b, h) = (v[0], v[1], v[2]);
            if !(h > 0.0) || b < a {
                return Err(Error::domain(format!("range needs start <= stop and step > 0: '{text}'")));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * h).collect())
        }
        _ => Err(Error::Parse(format!("cannot parse grid '{text}' (use a:b:step or log:a:b:n)"))),
    }
}
