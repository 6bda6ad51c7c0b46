//! Hardy operators, integrated exactly on piecewise affine inputs.
//!
//! * `H_0^xi f(x) = x^{-xi-1} int_0^{x/b} f(y) y^xi dy`
//! * `H_inf^xi f(x) = x^xi int_{bx}^inf f(y) y^{-xi-1} dy`
//! * `H_0^{1,log} f(x) = x^{-2} int_0^{x/b} log(x/y) f(y) y dy`
//! * `H_inf^{-1,log} f(x) = x^{-1} int_{bx}^inf log(y/x) f(y) dy`
//!
//! `b >= 1` truncates the range; `b = 1` is the plain operator.

use crate::error::{Error, Result};
use crate::grid::{Cell, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyKind {
    /// Averages over `(0, x/b)`.
    Zero,
    /// Averages over `(bx, inf)`.
    Infinity,
    /// Logarithmic variant at zero (fixed `xi = 1`).
    ZeroLog,
    /// Logarithmic variant at infinity (fixed `xi = -1`).
    InfinityLog,
}

impl std::str::FromStr for HardyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy0" | "zero" => Ok(HardyKind::Zero),
            "hardyinf" | "infinity" => Ok(HardyKind::Infinity),
            "hardy0log" | "zerolog" => Ok(HardyKind::ZeroLog),
            "hardyinflog" | "infinitylog" => Ok(HardyKind::InfinityLog),
            _ => Err(Error::Parse(format!("unknown Hardy operator '{s}'"))),
        }
    }
}

/// `int_a^b y^k dy`, stable as `k -> -1`.
pub(crate) fn power_integral(a: f64, b: f64, k: f64) -> f64 {
    let r = (b / a).ln();
    let e = k + 1.0;
    if e.abs() * r.abs() < 1e-12 {
        return a.powf(e) * r * (1.0 + 0.5 * e * r);
    }
    a.powf(e) * (e * r).exp_m1() / e
}

/// `int_a^b y^k log(x/y) dy`.
fn log_power_integral(a: f64, b: f64, k: f64, x: f64) -> f64 {
    let e = k + 1.0;
    if e.abs() < 1e-12 {
        let la = (x / a).ln();
        let lb = (x / b).ln();
        return 0.5 * (la * la - lb * lb);
    }
    let anti = |y: f64| y.powf(e) / e * ((x / y).ln() + 1.0 / e);
    anti(b) - anti(a)
}

/// `int_{lo}^{hi} (c0 + c1 y) y^k dy` over the part of the cell inside `[lo, hi]`.
fn cell_power(c: &Cell, lo: f64, hi: f64, k: f64) -> f64 {
    let (a, b) = (c.a.max(lo), c.b.min(hi));
    if !(b > a) {
        return 0.0;
    }
    let mut s = 0.0;
    if c.c0 != 0.0 {
        s += c.c0 * power_integral(a, b, k);
    }
    if c.c1 != 0.0 {
        s += c.c1 * power_integral(a, b, k + 1.0);
    }
    s
}

fn cell_log_power(c: &Cell, lo: f64, hi: f64, k: f64, x: f64) -> f64 {
    let (a, b) = (c.a.max(lo), c.b.min(hi));
    if !(b > a) {
        return 0.0;
    }
    let mut s = 0.0;
    if c.c0 != 0.0 {
        s += c.c0 * log_power_integral(a, b, k, x);
    }
    if c.c1 != 0.0 {
        s += c.c1 * log_power_integral(a, b, k + 1.0, x);
    }
    s
}

/// `int_lo^hi f(y) y^k dy` exactly.
pub fn moment(f: &GridFunction, lo: f64, hi: f64, k: f64) -> f64 {
    f.cells().iter().map(|c| cell_power(c, lo, hi, k)).sum()
}

/// `int_lo^hi f(y) y^k log(x/y) dy` exactly.
pub fn log_moment(f: &GridFunction, lo: f64, hi: f64, k: f64, x: f64) -> f64 {
    f.cells().iter().map(|c| cell_log_power(c, lo, hi, k, x)).sum()
}

/// Apply a Hardy operator at `x`. `xi` is ignored by the logarithmic variants.
pub fn hardy(kind: HardyKind, xi: f64, b: f64, f: &GridFunction, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("evaluation point must be positive, got {x}")));
    }
    if !(b >= 1.0 && b.is_finite()) {
        return Err(Error::domain(format!("truncation parameter must satisfy b >= 1, got {b}")));
    }
    if !xi.is_finite() {
        return Err(Error::domain("xi must be finite"));
    }
    let (lo, hi) = f.support();
    let tail_check = |k: f64| -> Result<()> {
        // A finite grid cannot certify convergence at infinity; flag inputs whose
        // last cell still carries a non-decaying integrand.
        let n = f.values().len();
        let last = f.values()[n - 1];
        if f.interp() == crate::grid::Interp::Linear && last != 0.0 && k + 1.0 >= 0.0 {
            return Err(Error::Divergent(format!(
                "integrand y^{k} f(y) does not decay at the end of the grid ({hi})"
            )));
        }
        Ok(())
    };
    Ok(match kind {
        HardyKind::Zero => x.powf(-xi - 1.0) * moment(f, lo.min(x / b), x / b, xi),
        HardyKind::Infinity => {
            tail_check(-xi - 1.0)?;
            x.powf(xi) * moment(f, b * x, hi.max(b * x), -xi - 1.0)
        }
        HardyKind::ZeroLog => x.powf(-2.0) * log_moment(f, lo.min(x / b), x / b, 1.0, x),
        HardyKind::InfinityLog => {
            tail_check(0.0)?;
            // log(y/x) = -log(x/y)
            -x.powf(-1.0) * log_moment(f, b * x, hi.max(b * x), 0.0, x)
        }
    })
}
