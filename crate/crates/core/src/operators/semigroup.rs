//! Heat and Poisson semigroups, maximal functions and the square function.

use super::{integrate_against, sup_over_time, Supremum};
use crate::error::{Error, Result};
use crate::grid::{Profile, TimeGrid};
use crate::kernels::{Heat, Setting};
use crate::quad::{integrate_log_range, integrate_positive_axis, QuadratureConfig};
use std::f64::consts::PI;

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("evaluation point must be positive, got {x}")))
    }
}

/// Spatial breakpoints resolving the Gaussian bump of width `sqrt(t)` around `x`.
fn bump_breaks(x: f64, t: f64) -> Vec<f64> {
    let s = t.sqrt();
    let mut v = vec![x];
    for k in [0.5, 2.0, 6.0, 15.0] {
        v.push(x - k * s);
        v.push(x + k * s);
    }
    v
}

/// Heat semigroup for one setting and order, reused across many evaluations.
#[derive(Debug, Clone, Copy)]
pub struct HeatSemigroup {
    setting: Setting,
    nu: f64,
    h: Heat,
}

impl HeatSemigroup {
    pub fn new(setting: Setting, nu: f64) -> Result<Self> {
        setting.check_nu(nu)?;
        Ok(HeatSemigroup { setting, nu, h: Heat::new(setting.heat_order(nu))? })
    }

    /// Kernel times the measure density: `W_t(x, y) y^{2 nu + 1}`.
    fn density(&self, t: f64, x: f64, y: f64) -> f64 {
        match self.setting {
            Setting::Classical => self.h.value(t, x, y) * y.powf(2.0 * self.nu + 1.0),
            // (xy)^{-2nu} W^{-nu} y^{2nu+1} = x^{-2nu} y W^{-nu}
            Setting::Exotic => x.powf(-2.0 * self.nu) * y * self.h.value(t, x, y),
        }
    }

    fn density_dt(&self, t: f64, x: f64, y: f64) -> f64 {
        match self.setting {
            Setting::Classical => self.h.dt(t, x, y) * y.powf(2.0 * self.nu + 1.0),
            Setting::Exotic => x.powf(-2.0 * self.nu) * y * self.h.dt(t, x, y),
        }
    }

    /// `W_t f(x)`.
    pub fn apply<P: Profile + ?Sized>(&self, t: f64, f: &P, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        check_x(x)?;
        if !(t > 0.0) {
            return Err(Error::domain("time must be positive"));
        }
        let q = integrate_against(f, 0.0, f64::INFINITY, &bump_breaks(x, t), |y| self.density(t, x, y), cfg)?;
        Ok(q.into_result("heat semigroup")?.value)
    }

    /// `d/dt W_t f(x)`.
    pub fn apply_dt<P: Profile + ?Sized>(&self, t: f64, f: &P, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        check_x(x)?;
        let q = integrate_against(f, 0.0, f64::INFINITY, &bump_breaks(x, t), |y| self.density_dt(t, x, y), cfg)?;
        Ok(q.into_result("heat semigroup time derivative")?.value)
    }

    /// `P_t f(x) = (2/sqrt(pi)) int_0^inf e^{-v^2} W_{t^2/(4v^2)} f(x) dv`.
    pub fn poisson<P: Profile + ?Sized>(&self, t: f64, f: &P, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        check_x(x)?;
        let inner = cfg.tightened(0.1);
        let err = std::cell::RefCell::new(None);
        let g = |v: f64| {
            let s = t * t / (4.0 * v * v);
            if s == 0.0 || !s.is_finite() {
                return 0.0;
            }
            match self.apply(s, f, x, &inner) {
                Ok(w) => (-v * v).exp() * w,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let (a, b) = f.support();
        let mut scales: Vec<f64> = [x * x, (x - a) * (x - a), (x - b) * (x - b), a * a, b * b]
            .into_iter()
            .filter(|s| *s > 0.0)
            .map(|s| t / (2.0 * s.sqrt()))
            .collect();
        scales.push(1.0);
        let q = integrate_positive_axis(&g, &scales, cfg)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(2.0 / PI.sqrt() * q.into_result("Poisson semigroup")?.value)
    }
}

/// `W_t f(x)` in either setting.
pub fn heat_apply<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    t: f64,
    f: &P,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    HeatSemigroup::new(setting, nu)?.apply(t, f, x, cfg)
}

/// `sup_t |W_t f(x)|` over the grid.
pub fn heat_maximal<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    f: &P,
    x: f64,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
) -> Result<Supremum> {
    let s = HeatSemigroup::new(setting, nu)?;
    check_x(x)?;
    sup_over_time(|t| s.apply(t, f, x, cfg), grid)
}

/// `P_t f(x)` in either setting, by subordination to the heat semigroup.
pub fn poisson_apply<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    t: f64,
    f: &P,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    HeatSemigroup::new(setting, nu)?.poisson(t, f, x, cfg)
}

/// `sup_t |P_t f(x)|` over the grid.
pub fn poisson_maximal<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    f: &P,
    x: f64,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
) -> Result<Supremum> {
    let s = HeatSemigroup::new(setting, nu)?;
    check_x(x)?;
    sup_over_time(|t| s.poisson(t, f, x, cfg), grid)
}

/// Square function `(int_{t_min}^{t_max} |d/dt W_t f(x)|^2 t dt)^{1/2}`.
///
/// Truncating the time range gives a lower bound for the full square function.
pub fn g_function<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    f: &P,
    x: f64,
    grid: &TimeGrid,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let s = HeatSemigroup::new(setting, nu)?;
    check_x(x)?;
    grid.validate()?;
    let inner = cfg.tightened(0.01);
    let err = std::cell::RefCell::new(None);
    let h = |t: f64| match s.apply_dt(t, f, x, &inner) {
        Ok(v) => v * v * t,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let (a, b) = f.support();
    let scales = [x * x, (x - a) * (x - a), (x - b) * (x - b), a * a, b * b, x * a, x * b];
    let q = integrate_log_range(&h, grid.t_min, grid.t_max, &scales, cfg)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(q.into_result("square function")?.value.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridFunction, PowerWeighted};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-10, max_subdivisions: 4000 }
    }

    #[test]
    fn half_order_heat_on_indicator_is_erf() {
        // nu = -1/2: W_t f(x) = int (G_t(x - y) + G_t(x + y)) f(y) dy.
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let erf_diff = |lo: f64, hi: f64, t: f64| {
            // int_lo^hi G_t(z) dz by quadrature of the Gaussian (independent of the kernel code).
            let g = |z: f64| (4.0 * PI * t).powf(-0.5) * (-z * z / (4.0 * t)).exp();
            crate::quad::integrate(&g, lo, hi, &cfg()).unwrap().value
        };
        for &(t, x) in &[(0.1, 1.5), (1.0, 0.3), (4.0, 5.0)] {
            let want = erf_diff(x - 2.0, x - 1.0, t) + erf_diff(x + 1.0, x + 2.0, t);
            let got = heat_apply(Setting::Classical, -0.5, t, &f, x, &cfg()).unwrap();
            assert!(((got - want) / want).abs() < 1e-9);
        }
    }

    #[test]
    fn transference_identity_for_heat() {
        // W~_t f(x) = x^{-2nu} W_t^{-nu}(y^{2nu} f)(x)
        let f = GridFunction::indicator(0.5, 1.5).unwrap();
        for nu in [-0.5, 0.25, 0.75] {
            for &(t, x) in &[(0.2, 1.0), (3.0, 0.4)] {
                let lhs = heat_apply(Setting::Exotic, nu, t, &f, x, &cfg()).unwrap();
                let g = PowerWeighted { inner: &f, exponent: 2.0 * nu };
                let rhs = x.powf(-2.0 * nu) * heat_apply(Setting::Classical, -nu, t, &g, x, &cfg()).unwrap();
                assert!(((lhs - rhs) / rhs).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn heat_preserves_constants_locally() {
        // Mass conservation: int W_t(x, y) d eta(y) = 1 in the classical setting.
        let big = GridFunction::indicator(1e-8, 200.0).unwrap();
        for nu in [-0.5, 0.0, 1.3] {
            let v = heat_apply(Setting::Classical, nu, 0.7, &big, 2.0, &cfg()).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "nu={nu} v={v}");
        }
    }

    #[test]
    fn poisson_half_order_closed_form() {
        // Exotic nu = -1/2 has P~_t(x, y) = (1/pi)(t/(t^2+(x-y)^2) - t/(t^2+(x+y)^2)) and d eta = dy.
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let prim = |z: f64, t: f64| (z / t).atan() / PI;
        for &(t, x) in &[(0.3, 1.2), (2.0, 4.0)] {
            let want = (prim(2.0 - x, t) - prim(1.0 - x, t)) - (prim(x + 2.0, t) - prim(x + 1.0, t));
            let got = poisson_apply(Setting::Exotic, -0.5, t, &f, x, &QuadratureConfig::relative(1e-9)).unwrap();
            assert!(((got - want) / want).abs() < 1e-7, "t={t} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn maximal_dominates_semigroup() {
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let grid = TimeGrid::log(1e-4, 1e4, 60).with_refine(true);
        let m = heat_maximal(Setting::Exotic, 0.5, &f, 3.0, &grid, &cfg()).unwrap();
        for t in [0.1, 1.0, 10.0] {
            assert!(m.value >= heat_apply(Setting::Exotic, 0.5, t, &f, 3.0, &cfg()).unwrap());
        }
    }

    #[test]
    fn g_function_positive_and_transference() {
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let grid = TimeGrid::log(1e-6, 1e6, 2);
        let c = QuadratureConfig::relative(1e-8);
        let nu = 0.5;
        let x = 3.0;
        let lhs = g_function(Setting::Exotic, nu, &f, x, &grid, &c).unwrap();
        let g = PowerWeighted { inner: &f, exponent: 2.0 * nu };
        let rhs = x.powf(-2.0 * nu) * g_function(Setting::Classical, -nu, &g, x, &grid, &c).unwrap();
        assert!(lhs > 0.0);
        assert!(((lhs - rhs) / rhs).abs() < 1e-6);
    }
}
