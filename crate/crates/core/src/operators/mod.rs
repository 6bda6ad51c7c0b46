//! Operators acting on sampled functions.
//!
//! * [`semigroup`]: heat and Poisson semigroups, their maximal functions and the
//!   square function, in both settings.
//! * [`hardy`]: Hardy operators and their logarithmic variants, integrated exactly
//!   on piecewise constant and piecewise linear inputs.
//! * [`local`]: local maximal function, local Hilbert transform, local square
//!   function and the auxiliary `N`, `N^log` and `T_psi` operators.
//! * [`singular`]: Riesz transforms and fractional integrals.
//!
//! Suprema over time are taken on a [`TimeGrid`](crate::grid::TimeGrid), so the
//! maximal operators return lower bounds of the true supremum.

pub mod hardy;
pub mod local;
pub mod semigroup;
pub mod singular;

use crate::error::Result;
use crate::grid::Profile;
use crate::quad::{breakpoints_within, integrate_breaks, QuadResult, QuadratureConfig};

/// `int k(y) f(y) dy` over `supp f` intersected with `[lo, hi]`.
pub(crate) fn integrate_against<P, K>(
    f: &P,
    lo: f64,
    hi: f64,
    extra: &[f64],
    k: K,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    P: Profile + ?Sized,
    K: Fn(f64) -> f64,
{
    let (a, b) = f.support();
    let (a, b) = (a.max(lo), b.min(hi));
    if !(b > a) {
        return Ok(QuadResult { converged: true, ..Default::default() });
    }
    let pts = breakpoints_within(a, b, f.breakpoints().into_iter().chain(extra.iter().copied()));
    let g = |y: f64| {
        let v = f.eval(y);
        if v == 0.0 {
            0.0
        } else {
            v * k(y)
        }
    };
    integrate_breaks(&g, &pts, cfg)
}

/// Maximise `|h(t)|` over a time grid, optionally polishing the best point.
pub(crate) fn sup_over_time<H>(h: H, grid: &crate::grid::TimeGrid) -> Result<Supremum>
where
    H: Fn(f64) -> Result<f64>,
{
    grid.validate()?;
    let ts = grid.points();
    let mut best = Supremum { value: 0.0, t_star: ts[0], at_grid_edge: false };
    let mut best_i = 0;
    for (i, &t) in ts.iter().enumerate() {
        let v = h(t)?.abs();
        if v > best.value {
            best = Supremum { value: v, t_star: t, at_grid_edge: false };
            best_i = i;
        }
    }
    best.at_grid_edge = best_i == 0 || best_i == ts.len() - 1;
    if grid.refine && !best.at_grid_edge && best.value > 0.0 {
        // Golden-section search on ln t inside the neighbouring grid cells.
        let (mut a, mut b) = (ts[best_i - 1].ln(), ts[best_i + 1].ln());
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let eval = |u: f64| h(u.exp()).map(f64::abs);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = eval(c)?;
        let mut fd = eval(d)?;
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = eval(d)?;
            }
            if (b - a).abs() < 1e-9 {
                break;
            }
        }
        for (v, u) in [(fc, c), (fd, d)] {
            if v > best.value {
                best.value = v;
                best.t_star = u.exp();
            }
        }
    }
    Ok(best)
}

/// A supremum over a time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supremum {
    /// Lower bound for the true supremum.
    pub value: f64,
    /// Time at which it was attained.
    pub t_star: f64,
    /// The maximiser sits on the first or last grid point; the true supremum may lie outside.
    pub at_grid_edge: bool,
}
