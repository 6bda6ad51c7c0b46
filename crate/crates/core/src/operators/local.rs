//! Local pieces that control the exotic operators near the diagonal.
//!
//! * `M^k_loc f(x) = sup { avg_(u,v) |f| : 0 < u < x < v < k u }`
//! * `H_{nu,loc} f(x) = (1/pi) p.v. int_{x/b}^{bx} (xy)^{-nu-1/2} f(y) / (y - x) d eta_nu(y)`
//! * `g_{nu,loc} f(x)`: `L^2(t dt)` norm of `int_{x/2}^{2x} (xy)^{-nu-1/2} d/dt G_t(x - y) f(y) d eta_nu(y)`
//! * `N f(x) = int_{x/2}^{2x} f(y) dy / y`
//! * `N^log f(x) = int_{x/2}^{2x} (1 + log(xy / (x - y)^2)) f(y) dy / y`
//! * `T_psi^xi f(x) = sup_t |x^xi int_{bx}^inf f(y) psi(t, y) y^{-xi-1} dy|`,
//!   `psi(t, y) = (y^2/t)^eps e^{-c y^2/t}`

use super::hardy::moment;
use super::{integrate_against, sup_over_time, Supremum};
use crate::error::{Error, Result};
use crate::grid::{Cell, GridFunction, Profile, TimeGrid};
use crate::kernels::gauss_weierstrass_dt;
use crate::quad::{integrate, integrate_log_range, QuadratureConfig};
use crate::special_fn::dilog;
use std::f64::consts::PI;

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("evaluation point must be positive, got {x}")))
    }
}

/// Grid-search lower bound for `M^k_loc f(x)`; `n` samples per endpoint.
pub fn local_maximal(k: f64, f: &GridFunction, x: f64, n: usize) -> Result<f64> {
    check_x(x)?;
    if !(k > 1.0 && k.is_finite()) {
        return Err(Error::domain(format!("local maximal function needs k > 1, got {k}")));
    }
    let af = f.abs();
    let lo = x / k;
    let mut us: Vec<f64> = (1..=n).map(|i| lo * (k).powf(i as f64 / (n + 1) as f64)).collect();
    us.extend(af.nodes().iter().copied().filter(|&p| p > lo && p < x));
    let mut best = 0.0f64;
    for &u in &us {
        let vmax = k * u;
        let mut vs: Vec<f64> = (1..=n).map(|i| x + (vmax - x) * i as f64 / (n + 1) as f64).collect();
        vs.extend(af.nodes().iter().copied().filter(|&p| p > x && p < vmax));
        for v in vs {
            let avg = moment(&af, u, v, 0.0) / (v - u);
            best = best.max(avg);
        }
    }
    Ok(best)
}

/// Principal value with its extrapolation history.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalValue {
    pub value: f64,
    /// Truncated integrals for `eps_k = 2^{-k} x / 100`, `k = 0..=8`.
    pub truncated: Vec<f64>,
    /// Richardson extrapolants from consecutive triples.
    pub extrapolants: Vec<f64>,
}

/// Number of excision radii used by the principal-value extrapolation.
pub const PV_STEPS: usize = 9;
/// Successive extrapolants must agree to this relative tolerance.
pub const PV_TOL: f64 = 1e-6;

/// Local Hilbert transform by symmetric excision and Richardson extrapolation.
pub fn local_hilbert<P: Profile + ?Sized>(nu: f64, f: &P, x: f64, b: f64, cfg: &QuadratureConfig) -> Result<PrincipalValue> {
    check_x(x)?;
    if !(b > 1.02 && b.is_finite()) {
        return Err(Error::domain(format!("window factor must exceed 1.02, got {b}")));
    }
    let g = |y: f64| {
        let v = f.eval(y);
        if v == 0.0 {
            0.0
        } else {
            (x * y).powf(-nu - 0.5) * y.powf(2.0 * nu + 1.0) * v / PI
        }
    };
    let left = x - x / b;
    // Folded integrand on (0, left]: (g(x+s) - g(x-s)) / s.
    let folded = |s: f64| (g(x + s) - g(x - s)) / s;
    let fold_breaks: Vec<f64> = f
        .breakpoints()
        .into_iter()
        .map(|p| (p - x).abs())
        .filter(|s| *s > 0.0 && *s < left)
        .collect();
    let mass = integrate(&|y: f64| g(y).abs(), x / b, b * x, cfg).map(|q| q.value).unwrap_or(0.0);
    // Small excised slices cancel to near zero; measure their error against the window mass.
    let pcfg = QuadratureConfig { abs_tol: cfg.abs_tol.max(1e-3 * cfg.rel_tol * mass / x), ..*cfg };
    let piece = |a: f64, bb: f64| -> Result<f64> {
        let pts = crate::quad::breakpoints_within(a, bb, fold_breaks.iter().copied());
        Ok(crate::quad::integrate_breaks(&folded, &pts, &pcfg)?.into_result("local Hilbert transform")?.value)
    };
    // One-sided remainder (x + left, bx), no singularity.
    let outer = {
        let h = |y: f64| g(y) / (y - x);
        let pts = crate::quad::breakpoints_within(x + left, b * x, f.breakpoints());
        crate::quad::integrate_breaks(&h, &pts, cfg)?.into_result("local Hilbert transform")?.value
    };
    let eps: Vec<f64> = (0..PV_STEPS).map(|k| x * 1e-2 / 2f64.powi(k as i32)).collect();
    let mut truncated = Vec::with_capacity(PV_STEPS);
    let mut acc = piece(eps[0], left)? + outer;
    truncated.push(acc);
    for k in 1..PV_STEPS {
        acc += piece(eps[k], eps[k - 1])?;
        truncated.push(acc);
    }
    // I(eps) = I0 + c1 eps + c3 eps^3 + ...; eliminate eps, then eps^3.
    let extrap = |i: usize| {
        let r1a = 2.0 * truncated[i + 1] - truncated[i];
        let r1b = 2.0 * truncated[i + 2] - truncated[i + 1];
        (8.0 * r1b - r1a) / 7.0
    };
    let extrapolants: Vec<f64> = (0..PV_STEPS - 2).map(extrap).collect();
    let value = extrapolants[extrapolants.len() - 1];
    let prev = extrapolants[extrapolants.len() - 2];
    let scale = value.abs().max(mass / x);
    if (value - prev).abs() > PV_TOL * scale {
        return Err(Error::NonConvergence {
            what: format!("principal value at x = {x} (extrapolants {prev:e}, {value:e})"),
            estimate: value,
            error: (value - prev).abs(),
        });
    }
    Ok(PrincipalValue { value, truncated, extrapolants })
}

/// Local square function built from the Gauss-Weierstrass kernel.
pub fn local_g<P: Profile + ?Sized>(nu: f64, f: &P, x: f64, grid: &TimeGrid, cfg: &QuadratureConfig) -> Result<f64> {
    check_x(x)?;
    grid.validate()?;
    let inner = cfg.tightened(0.01);
    let err = std::cell::RefCell::new(None);
    let h = |t: f64| {
        let s = t.sqrt();
        let breaks = [x, x - s, x + s, x - 5.0 * s, x + 5.0 * s];
        let k = |y: f64| (x * y).powf(-nu - 0.5) * y.powf(2.0 * nu + 1.0) * gauss_weierstrass_dt(t, x, y);
        match integrate_against(f, x / 2.0, 2.0 * x, &breaks, k, &inner).and_then(|q| q.into_result("local square function")) {
            Ok(q) => q.value * q.value * t,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let (a, b) = f.support();
    let scales = [x * x, (x - a) * (x - a), (x - b) * (x - b)];
    let q = integrate_log_range(&h, grid.t_min, grid.t_max, &scales, cfg)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(q.into_result("local square function")?.value.max(0.0).sqrt())
}

/// `N f(x) = int_{x/2}^{2x} f(y) dy / y`, exact.
pub fn n_operator(f: &GridFunction, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(moment(f, x / 2.0, 2.0 * x, -1.0))
}

/// `int log|x - y| / y dy` antiderivative on one side of `x`.
fn log_dist_over_y(x: f64, y: f64) -> Result<f64> {
    let lx = x.ln();
    let ly = y.ln();
    if y < x {
        Ok(lx * ly - dilog(y / x)?)
    } else if y > x {
        Ok(0.5 * ly * ly + dilog(x / y)?)
    } else {
        Err(Error::contract("antiderivative evaluated at the singular point"))
    }
}

fn log_dist_over_y_at(x: f64, side: f64) -> f64 {
    let lx = x.ln();
    if side < 0.0 {
        lx * lx - PI * PI / 6.0
    } else {
        0.5 * lx * lx + PI * PI / 6.0
    }
}

/// `int_a^b log|x - y| dy` with `x` outside `(a, b)` or at an end.
fn log_dist(x: f64, a: f64, b: f64) -> f64 {
    let anti = |y: f64| {
        let d = y - x;
        if d == 0.0 {
            -y
        } else {
            d * d.abs().ln() - y
        }
    };
    anti(b) - anti(a)
}

fn nlog_cell(c: &Cell, x: f64, lo: f64, hi: f64) -> Result<f64> {
    let (a, b) = (c.a.max(lo), c.b.min(hi));
    if !(b > a) {
        return Ok(0.0);
    }
    // Split at x so each piece sees the singularity only at an end.
    let mut parts = vec![(a, b)];
    if a < x && x < b {
        parts = vec![(a, x), (x, b)];
    }
    let lx = x.ln();
    let mut s = 0.0;
    for (a, b) in parts {
        let side = if b <= x { -1.0 } else { 1.0 };
        let f_at = |y: f64| -> Result<f64> {
            if y == x {
                Ok(log_dist_over_y_at(x, side))
            } else {
                log_dist_over_y(x, y)
            }
        };
        if c.c0 != 0.0 {
            let la = a.ln();
            let lb = b.ln();
            let v = (1.0 + lx) * (lb - la) + 0.5 * (lb * lb - la * la) - 2.0 * (f_at(b)? - f_at(a)?);
            s += c.c0 * v;
        }
        if c.c1 != 0.0 {
            let ylogy = |y: f64| y * y.ln() - y;
            let v = (1.0 + lx) * (b - a) + ylogy(b) - ylogy(a) - 2.0 * log_dist(x, a, b);
            s += c.c1 * v;
        }
    }
    Ok(s)
}

/// `N^log f(x)`, exact for piecewise affine `f` (via the dilogarithm).
pub fn nlog_operator(f: &GridFunction, x: f64) -> Result<f64> {
    check_x(x)?;
    let mut s = 0.0;
    for c in f.cells() {
        s += nlog_cell(&c, x, x / 2.0, 2.0 * x)?;
    }
    Ok(s)
}

/// Parameters of `psi(t, y) = (y^2/t)^eps e^{-c y^2/t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiParams {
    pub eps: f64,
    pub c: f64,
}

/// `T_psi^xi f(x)` with window start `bx`.
pub fn t_psi<P: Profile + ?Sized>(
    xi: f64,
    psi: PsiParams,
    b: f64,
    f: &P,
    x: f64,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
) -> Result<Supremum> {
    check_x(x)?;
    if !(psi.eps > 0.0 && psi.c > 0.0) {
        return Err(Error::domain("psi needs eps > 0 and c > 0"));
    }
    if !(b >= 1.0) {
        return Err(Error::domain("window factor must satisfy b >= 1"));
    }
    let h = |t: f64| -> Result<f64> {
        let k = |y: f64| {
            let r = y * y / t;
            r.powf(psi.eps) * (-psi.c * r).exp() * y.powf(-xi - 1.0)
        };
        let s = t.sqrt();
        let q = integrate_against(f, b * x, f64::INFINITY, &[s, 3.0 * s, 10.0 * s], k, cfg)?;
        Ok(x.powf(xi) * q.into_result("T_psi")?.value)
    };
    sup_over_time(h, grid)
}
