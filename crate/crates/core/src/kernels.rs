//! Heat, Poisson, Riesz and potential kernels for both settings.
//!
//! Classical kernels are taken with respect to `d eta_nu(y) = y^{2 nu + 1} dy`
//! for `nu > -1`. The exotic kernels are obtained by the transference
//! `K~^nu(x, y) = (xy)^{-2 nu} K^{-nu}(x, y)`, valid for `nu < 1`.
//!
//! The heat kernel is evaluated as
//! `W_t(x, y) = (2t)^{-nu-1} e^{-(x-y)^2/4t} [e^{-w} w^{-nu} I_nu(w)]`, `w = xy/2t`,
//! which never overflows. Everything else is a `t`-integral of heat-kernel
//! quantities done on the log axis with breakpoints at the natural scales
//! `(x-y)^2/4`, `xy/2` and `(x+y)^2/4`.

use crate::error::{Error, Result};
use crate::quad::{integrate_positive_axis, QuadResult, QuadratureConfig};
use crate::special_fn::{gamma_real, BesselI};
use std::f64::consts::PI;

/// Which Bessel operator a kernel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    #[serde(rename = "cls")]
    Classical,
    #[serde(rename = "exo")]
    Exotic,
}

impl std::str::FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cls" | "classical" => Ok(Setting::Classical),
            "exo" | "exotic" => Ok(Setting::Exotic),
            _ => Err(Error::Parse(format!("unknown setting '{s}' (use cls|exo)"))),
        }
    }
}

impl Setting {
    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Classical => "cls",
            Setting::Exotic => "exo",
        }
    }

    /// Admissible range of `nu` for this setting.
    pub fn check_nu(self, nu: f64) -> Result<()> {
        let ok = nu.is_finite()
            && match self {
                Setting::Classical => nu > -1.0,
                Setting::Exotic => nu < 1.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "nu = {nu} outside the {} range ({})",
                self.as_str(),
                match self {
                    Setting::Classical => "nu > -1",
                    Setting::Exotic => "nu < 1",
                }
            )))
        }
    }

    /// Order of the classical heat kernel behind this setting.
    pub fn heat_order(self, nu: f64) -> f64 {
        match self {
            Setting::Classical => nu,
            Setting::Exotic => -nu,
        }
    }

    /// Factor converting the classical kernel of order `heat_order` into this setting's kernel.
    pub fn transfer_factor(self, nu: f64, x: f64, y: f64) -> f64 {
        match self {
            Setting::Classical => 1.0,
            Setting::Exotic => (x * y).powf(-2.0 * nu),
        }
    }
}

/// How a quadrature-based kernel value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    Quadrature,
    /// Leading singular term in closed form plus quadrature of the remainder.
    NearDiagonal,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::Quadrature => "quadrature",
            Route::NearDiagonal => "near-diagonal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Diagnostics {
    pub error_estimate: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub route: Route,
}

/// A kernel value with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub value: f64,
    pub diagnostics: Diagnostics,
}

impl KernelEval {
    fn from_quad(q: &QuadResult, scale: f64, shift: f64, route: Route) -> Self {
        KernelEval {
            value: scale * q.value + shift,
            diagnostics: Diagnostics {
                error_estimate: (scale * q.error).abs(),
                evaluations: q.evaluations,
                subdivisions: q.subdivisions,
                route,
            },
        }
    }
}

/// Below this relative distance the Riesz kernels use the near-diagonal route.
pub const NEAR_DIAGONAL: f64 = 0.01;

fn check_point(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and positive, got {v}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    check_point("t", t)
}

/// Classical heat kernel of a fixed order with its derivatives.
#[derive(Debug, Clone, Copy)]
pub struct Heat {
    nu: f64,
    b: BesselI,
}

impl Heat {
    pub fn new(nu: f64) -> Result<Self> {
        Setting::Classical.check_nu(nu)?;
        Ok(Heat { nu, b: BesselI::with_mu(nu)? })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    fn pref(&self, t: f64) -> f64 {
        (2.0 * t).powf(-self.nu - 1.0)
    }

    /// `W_t(x, y)` for `x, y >= 0`.
    pub fn value(&self, t: f64, x: f64, y: f64) -> f64 {
        let w = x * y / (2.0 * t);
        let d2 = (x - y) * (x - y) / (4.0 * t);
        let (r0, _) = self.b.ratio_decayed(w);
        self.pref(t) * r0 * (-d2).exp()
    }

    /// `W_t(0, y)`.
    pub fn at_zero(&self, t: f64, y: f64) -> f64 {
        self.pref(t) * self.b.ratio_at_zero() * (-y * y / (4.0 * t)).exp()
    }

    /// `W_t(x, y) - W_t(0, y)`, accurate for `t >> xy`.
    pub fn compensated(&self, t: f64, x: f64, y: f64) -> f64 {
        let w = x * y / (2.0 * t);
        if w < 0.5 {
            let ex = -x * x / (4.0 * t);
            let inner = ex.exp() * self.b.ratio_minus_limit(w) + self.b.ratio_at_zero() * ex.exp_m1();
            self.pref(t) * (-y * y / (4.0 * t)).exp() * inner
        } else {
            self.value(t, x, y) - self.at_zero(t, y)
        }
    }

    /// `d/dt W_t(x, y)`.
    pub fn dt(&self, t: f64, x: f64, y: f64) -> f64 {
        let w = x * y / (2.0 * t);
        let d2 = (x - y) * (x - y) / (4.0 * t);
        let p = self.b.decayed_parts(w);
        let bracket = p.r0 * (d2 - (self.nu + 1.0)) / t + p.diff * w / t;
        self.pref(t) * (-d2).exp() * bracket
    }

    /// `d/dx W_t(x, y)`.
    pub fn dx(&self, t: f64, x: f64, y: f64) -> f64 {
        let w = x * y / (2.0 * t);
        let d2 = (x - y) * (x - y) / (4.0 * t);
        let p = self.b.decayed_parts(w);
        let bracket = -(p.diff * y + p.r0 * (x - y)) / (2.0 * t);
        self.pref(t) * (-d2).exp() * bracket
    }

    /// `d/dx W_t(x, y) - (xy)^{-nu-1/2} d/dx G_t(x - y)` with `G_t` the Gauss-Weierstrass kernel.
    /// This removes the part of the Riesz integrand responsible for the `1/(y - x)` singularity.
    pub fn dx_regular(&self, t: f64, x: f64, y: f64) -> f64 {
        let w = x * y / (2.0 * t);
        let d2 = (x - y) * (x - y) / (4.0 * t);
        let p = self.b.decayed_parts(w);
        let bracket = -(p.diff * y + p.rem * (x - y)) / (2.0 * t);
        self.pref(t) * (-d2).exp() * bracket
    }
}

/// Gauss-Weierstrass kernel `(4 pi t)^{-1/2} e^{-(x-y)^2/4t}`.
pub fn gauss_weierstrass(t: f64, x: f64, y: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5) * (-(x - y) * (x - y) / (4.0 * t)).exp()
}

/// `d/dt` of the Gauss-Weierstrass kernel.
pub fn gauss_weierstrass_dt(t: f64, x: f64, y: f64) -> f64 {
    let d2 = (x - y) * (x - y) / (4.0 * t);
    gauss_weierstrass(t, x, y) * (d2 - 0.5) / t
}

/// `W_t^nu(x, y)`, `nu > -1`, `x, y >= 0`.
pub fn heat_classical(nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::domain("heat kernel needs x, y >= 0"));
    }
    Ok(Heat::new(nu)?.value(t, x, y))
}

/// `W~_t^nu(x, y) = (xy)^{-2 nu} W_t^{-nu}(x, y)`, `nu < 1`, `x, y > 0`.
pub fn heat_exotic(nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    heat_kernel(Setting::Exotic, nu, t, x, y)
}

pub fn heat_kernel(setting: Setting, nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    setting.check_nu(nu)?;
    check_time(t)?;
    check_point("x", x)?;
    check_point("y", y)?;
    let h = Heat::new(setting.heat_order(nu))?;
    Ok(setting.transfer_factor(nu, x, y) * h.value(t, x, y))
}

/// `W_t^mu(0, y) = e^{-y^2/4t} / ((2t)^{mu+1} 2^mu Gamma(mu+1))`.
pub fn heat_at_zero(mu: f64, t: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::domain("heat_at_zero needs y >= 0"));
    }
    Ok(Heat::new(mu)?.at_zero(t, y))
}

/// `d/dt` of the heat kernel in either setting.
pub fn heat_time_derivative(setting: Setting, nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    setting.check_nu(nu)?;
    check_time(t)?;
    check_point("x", x)?;
    check_point("y", y)?;
    let h = Heat::new(setting.heat_order(nu))?;
    Ok(setting.transfer_factor(nu, x, y) * h.dt(t, x, y))
}

/// `d/dx` of the heat kernel in either setting.
pub fn heat_space_derivative(setting: Setting, nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    setting.check_nu(nu)?;
    check_time(t)?;
    check_point("x", x)?;
    check_point("y", y)?;
    let h = Heat::new(setting.heat_order(nu))?;
    Ok(match setting {
        Setting::Classical => h.dx(t, x, y),
        Setting::Exotic => (x * y).powf(-2.0 * nu) * (h.dx(t, x, y) - 2.0 * nu / x * h.value(t, x, y)),
    })
}

fn time_scales(x: f64, y: f64) -> Vec<f64> {
    vec![(x - y) * (x - y) / 4.0, x * y / 2.0, (x + y) * (x + y) / 4.0, x * x / 4.0, y * y / 4.0]
}

fn distinct(x: f64, y: f64) -> Result<()> {
    check_point("x", x)?;
    check_point("y", y)?;
    if x == y {
        return Err(Error::SingularInput(format!("kernel is singular on the diagonal x = y = {x}")));
    }
    Ok(())
}

/// Compensated potential
/// `K_mu(x, y) = pi^{-1/2} int_0^inf (W_t^mu(x, y) - chi_{mu <= -1/2} W_t^mu(0, y)) t^{-1/2} dt`.
pub fn comp_potential(mu: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    distinct(x, y)?;
    let h = Heat::new(mu)?;
    let comp = mu <= -0.5;
    let f = |t: f64| {
        let w = if comp { h.compensated(t, x, y) } else { h.value(t, x, y) };
        w / t.sqrt()
    };
    let q = integrate_positive_axis(&f, &time_scales(x, y), cfg)?.into_result("compensated potential")?;
    Ok(KernelEval::from_quad(&q, 1.0 / PI.sqrt(), 0.0, Route::Quadrature))
}

/// Leading diagonal singularity `(1/pi) (xy)^{-nu-1/2} / (y - x)` shared by both settings.
pub fn riesz_leading(nu: f64, x: f64, y: f64) -> f64 {
    (x * y).powf(-nu - 0.5) / (PI * (y - x))
}

/// Integrand of the Riesz kernel (before the `pi^{-1/2}` factor and the transfer factor).
fn riesz_integrand(setting: Setting, nu: f64, h: &Heat, t: f64, x: f64, y: f64, regular: bool) -> f64 {
    let dx = if regular { h.dx_regular(t, x, y) } else { h.dx(t, x, y) };
    let extra = match setting {
        Setting::Classical => 0.0,
        Setting::Exotic => {
            let w = if nu >= 0.5 { h.compensated(t, x, y) } else { h.value(t, x, y) };
            2.0 * nu / x * w
        }
    };
    (dx - extra) / t.sqrt()
}

fn riesz_check(setting: Setting, nu: f64, x: f64, y: f64) -> Result<()> {
    setting.check_nu(nu)?;
    if setting == Setting::Exotic && nu == 0.0 {
        return Err(Error::domain("exotic Riesz kernel requires nu != 0"));
    }
    distinct(x, y)
}

/// Riesz kernel minus its leading diagonal term, valid for every `x != y`.
pub fn riesz_remainder(setting: Setting, nu: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    riesz_check(setting, nu, x, y)?;
    let h = Heat::new(setting.heat_order(nu))?;
    let f = |t: f64| riesz_integrand(setting, nu, &h, t, x, y, true);
    let q = integrate_positive_axis(&f, &time_scales(x, y), cfg)?.into_result("Riesz kernel remainder")?;
    let scale = setting.transfer_factor(nu, x, y) / PI.sqrt();
    Ok(KernelEval::from_quad(&q, scale, 0.0, Route::NearDiagonal))
}

/// Classical `R_nu(x, y)` (`nu > -1`) or exotic `R~_nu(x, y)` (`0 != nu < 1`).
///
/// The exotic kernel is `(xy)^{-2 nu} (R_{-nu} - (2 nu / x) K_{-nu})`, with the
/// compensated potential when `nu >= 1/2`.
pub fn riesz_kernel(setting: Setting, nu: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    riesz_check(setting, nu, x, y)?;
    if (x - y).abs() < NEAR_DIAGONAL * x {
        let mut r = riesz_remainder(setting, nu, x, y, cfg)?;
        r.value += riesz_leading(nu, x, y);
        return Ok(r);
    }
    let h = Heat::new(setting.heat_order(nu))?;
    let f = |t: f64| riesz_integrand(setting, nu, &h, t, x, y, false);
    let q = integrate_positive_axis(&f, &time_scales(x, y), cfg)?.into_result("Riesz kernel")?;
    let scale = setting.transfer_factor(nu, x, y) / PI.sqrt();
    Ok(KernelEval::from_quad(&q, scale, 0.0, Route::Quadrature))
}

fn potential_check(setting: Setting, nu: f64, sigma: f64) -> Result<f64> {
    setting.check_nu(nu)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("potential order must satisfy sigma > 0, got {sigma}")));
    }
    gamma_real(sigma)
}

/// `K^{nu,sigma}` or `K~^{nu,sigma}`: `Gamma(sigma)^{-1} int_0^inf W_t(x, y) t^{sigma-1} dt`.
///
/// Finite only for `sigma < nu + 1` (classical) or `sigma < -nu + 1` (exotic);
/// otherwise this returns [`Error::Divergent`].
pub fn potential_kernel(setting: Setting, nu: f64, sigma: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    let g = potential_check(setting, nu, sigma)?;
    check_point("x", x)?;
    check_point("y", y)?;
    let order = setting.heat_order(nu);
    if sigma >= order + 1.0 {
        return Err(Error::Divergent(format!(
            "potential kernel diverges at t = inf for sigma = {sigma} >= {}",
            order + 1.0
        )));
    }
    if x == y && sigma <= 0.5 {
        return Err(Error::SingularInput(format!("potential kernel is infinite on the diagonal for sigma = {sigma} <= 1/2")));
    }
    let h = Heat::new(order)?;
    let f = |t: f64| h.value(t, x, y) * t.powf(sigma - 1.0);
    let q = integrate_positive_axis(&f, &time_scales(x, y), cfg)?.into_result("potential kernel")?;
    Ok(KernelEval::from_quad(&q, setting.transfer_factor(nu, x, y) / g, 0.0, Route::Quadrature))
}

/// The potential integral truncated at `t <= t_max`; finite for every `sigma > 0`.
pub fn potential_truncated(
    setting: Setting,
    nu: f64,
    sigma: f64,
    x: f64,
    y: f64,
    t_max: f64,
    cfg: &QuadratureConfig,
) -> Result<KernelEval> {
    let g = potential_check(setting, nu, sigma)?;
    check_point("x", x)?;
    check_point("y", y)?;
    check_point("t_max", t_max)?;
    let h = Heat::new(setting.heat_order(nu))?;
    let f = |t: f64| if t > t_max { 0.0 } else { h.value(t, x, y) * t.powf(sigma - 1.0) };
    let mut scales = time_scales(x, y);
    scales.retain(|s| *s < t_max);
    scales.push(t_max);
    let q = integrate_positive_axis(&f, &scales, cfg)?.into_result("truncated potential kernel")?;
    Ok(KernelEval::from_quad(&q, setting.transfer_factor(nu, x, y) / g, 0.0, Route::Quadrature))
}

/// Poisson kernel by subordination,
/// `P_t = t / (2 sqrt(pi)) int_0^inf e^{-t^2/4s} W_s s^{-3/2} ds`,
/// evaluated as `(2/sqrt(pi)) int_0^inf e^{-v^2} W_{t^2/(4 v^2)} dv`.
pub fn poisson_kernel(setting: Setting, nu: f64, t: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    setting.check_nu(nu)?;
    check_time(t)?;
    check_point("x", x)?;
    check_point("y", y)?;
    let h = Heat::new(setting.heat_order(nu))?;
    let f = |v: f64| {
        let s = t * t / (4.0 * v * v);
        if s == 0.0 || !s.is_finite() {
            0.0
        } else {
            (-v * v).exp() * h.value(s, x, y)
        }
    };
    let mut scales: Vec<f64> = time_scales(x, y)
        .into_iter()
        .filter(|s| *s > 0.0)
        .map(|s| t / (2.0 * s.sqrt()))
        .collect();
    scales.push(1.0);
    let q = integrate_positive_axis(&f, &scales, cfg)?.into_result("Poisson kernel")?;
    Ok(KernelEval::from_quad(&q, setting.transfer_factor(nu, x, y) * 2.0 / PI.sqrt(), 0.0, Route::Quadrature))
}

pub fn poisson_exotic(nu: f64, t: f64, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    poisson_kernel(Setting::Exotic, nu, t, x, y, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-11, max_subdivisions: 4000 }
    }

    #[test]
    fn heat_frozen_values() {
        // Extended-precision references (mpmath, 30 digits).
        assert!(rel(heat_classical(0.0, 0.5, 1.0, 1.0).unwrap(), 0.465_759_607_593_640_44) < 1e-13);
        assert!(rel(heat_classical(0.3, 0.02, 1.0, 1.1).unwrap(), 1.635_936_319_766_904_2) < 1e-12);
        assert!(rel(heat_exotic(0.5, 1.0, 1.0, 1.0).unwrap(), 0.385_871_666_129_026_8) < 1e-13);
        assert!(rel(heat_time_derivative(Setting::Classical, 0.0, 1.0, 1.0, 1.0).unwrap(), -0.200_364_018_408_505_44) < 1e-12);
    }

    #[test]
    fn heat_half_order_closed_form() {
        for &(t, x, y) in &[(1.0, 1.0, 2.0), (0.01, 3.0, 3.05), (50.0, 0.1, 7.0), (1e-4, 2.0, 2.0)] {
            let g = |d: f64| (-(d * d) / (4.0 * t)).exp();
            let want = (4.0 * PI * t).powf(-0.5) * (g(x - y) + g(x + y));
            assert!(rel(heat_classical(-0.5, t, x, y).unwrap(), want) < 1e-13);
        }
    }

    #[test]
    fn heat_at_zero_examples() {
        assert!(rel(heat_at_zero(-0.5, 1.0, 0.0).unwrap(), 1.0 / PI.sqrt()) < 1e-14);
        let h = Heat::new(0.7).unwrap();
        assert!(rel(h.value(0.3, 0.0, 1.2), h.at_zero(0.3, 1.2)) < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for nu in [-0.75, -0.5, 0.0, 0.6] {
            let h = Heat::new(nu).unwrap();
            for &(t, x, y) in &[(0.3, 1.0, 1.5), (2.0, 0.5, 3.0), (0.01, 2.0, 2.1), (1e-3, 5.0, 5.02)] {
                let e = 1e-5;
                let fd_t = (h.value(t * (1.0 + e), x, y) - h.value(t * (1.0 - e), x, y)) / (2.0 * t * e);
                let fd_x = (h.value(t, x * (1.0 + e), y) - h.value(t, x * (1.0 - e), y)) / (2.0 * x * e);
                let scale = h.value(t, x, y) / t;
                assert!((h.dt(t, x, y) - fd_t).abs() < 1e-6 * scale, "nu={nu} t={t} x={x} y={y}");
                let scale_x = h.value(t, x, y) * (1.0 / x + (x - y).abs() / t + y / t);
                assert!((h.dx(t, x, y) - fd_x).abs() < 1e-6 * scale_x, "nu={nu} t={t} x={x} y={y}");
                let gw = (x * y).powf(-nu - 0.5) * -(x - y) / (2.0 * t) * gauss_weierstrass(t, x, y);
                assert!((h.dx_regular(t, x, y) - (h.dx(t, x, y) - gw)).abs() < 1e-9 * scale_x);
            }
        }
    }

    #[test]
    fn compensated_difference_is_accurate() {
        let h = Heat::new(-0.75).unwrap();
        for &t in &[1e-2, 1.0, 1e3, 1e8] {
            let direct = h.value(t, 1.0, 2.0) - h.at_zero(t, 2.0);
            let c = h.compensated(t, 1.0, 2.0);
            assert!((c - direct).abs() <= 1e-8 * direct.abs().max(1e-300) + 1e-14 * h.at_zero(t, 2.0));
        }
    }

    #[test]
    fn potential_frozen_values() {
        let k = comp_potential(0.25, 1.0, 3.0, &cfg()).unwrap();
        assert!(rel(k.value, 0.152_030_628_848_754_3) < 1e-9, "{}", k.value);
        let k = comp_potential(-0.75, 1.0, 2.0, &cfg()).unwrap();
        assert!(rel(k.value, 0.153_034_567_249_922_1) < 1e-9, "{}", k.value);
        let p = potential_kernel(Setting::Exotic, 0.5, 0.25, 1.0, 2.0, &cfg()).unwrap();
        assert!(rel(p.value, 0.314_635_856_691_161_5) < 1e-9, "{}", p.value);
    }

    #[test]
    fn riesz_frozen_values() {
        let r = riesz_kernel(Setting::Classical, 0.5, 1.0, 3.0, &cfg()).unwrap();
        assert!(rel(r.value, 0.006_032_271_495_063_803) < 1e-8, "{}", r.value);
        let r = riesz_kernel(Setting::Classical, -0.25, 2.0, 1.5, &cfg()).unwrap();
        assert!(rel(r.value, -0.602_728_153_836_923_7) < 1e-9, "{}", r.value);
    }

    #[test]
    fn log_potential_and_half_riesz_closed_forms() {
        for &(x, y) in &[(1.0, 2.0), (3.0, 0.5), (0.2, 0.25)] {
            let k = comp_potential(-0.5, x, y, &cfg()).unwrap().value;
            let want = (y * y / ((x - y as f64).abs() * (x + y))).ln() / PI;
            assert!(rel(k, want) < 1e-9, "x={x} y={y} {k} {want}");
            let r = riesz_kernel(Setting::Classical, -0.5, x, y, &cfg()).unwrap().value;
            let want = (1.0 / (y - x) - 1.0 / (y + x)) / PI;
            assert!(rel(r, want) < 1e-9);
        }
        let r = riesz_kernel(Setting::Exotic, 0.5, 1.0, 2.0, &cfg()).unwrap().value;
        let want = (1.0 - 1.0 / 3.0 - (4.0f64 / 3.0).ln()) / (2.0 * PI);
        assert!(rel(r, want) < 1e-8, "{r} {want}");
    }

    #[test]
    fn near_diagonal_route_matches_direct() {
        for (setting, nu) in [(Setting::Classical, 0.3), (Setting::Exotic, -0.25), (Setting::Exotic, 0.75)] {
            for &(x, y) in &[(1.0, 1.03), (2.0, 1.9), (1.0, 1.012)] {
                let h = Heat::new(setting.heat_order(nu)).unwrap();
                let f = |t: f64| riesz_integrand(setting, nu, &h, t, x, y, false);
                let q = integrate_positive_axis(&f, &time_scales(x, y), &cfg()).unwrap();
                let direct = setting.transfer_factor(nu, x, y) * q.value / PI.sqrt();
                let mut via = riesz_remainder(setting, nu, x, y, &cfg()).unwrap().value;
                via += riesz_leading(nu, x, y);
                assert!(rel(via, direct) < 1e-8, "{setting:?} nu={nu} x={x} y={y}: {via} vs {direct}");
            }
        }
    }

    #[test]
    fn poisson_closed_form_half_order() {
        for &(t, x, y) in &[(1.0, 1.0, 1.0), (0.1, 1.0, 1.3), (3.0, 0.5, 4.0)] {
            let p = poisson_exotic(-0.5, t, x, y, &cfg()).unwrap().value;
            let want = (t / (t * t + (x - y) * (x - y)) - t / (t * t + (x + y) * (x + y))) / PI;
            assert!(rel(p, want) < 1e-9, "t={t} x={x} y={y}: {p} vs {want}");
        }
        let p = poisson_exotic(0.3, 0.7, 1.2, 1.5, &cfg()).unwrap().value;
        assert!(rel(p, 0.259_065_686_790_953) < 1e-9);
    }

    #[test]
    fn potential_finiteness() {
        assert!(matches!(
            potential_kernel(Setting::Exotic, 0.5, 0.5, 1.0, 2.0, &cfg()),
            Err(Error::Divergent(_))
        ));
        assert!(potential_kernel(Setting::Classical, 0.0, 0.5, 1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn domain_checks() {
        assert!(heat_exotic(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(heat_classical(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(heat_classical(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(matches!(
            riesz_kernel(Setting::Exotic, 0.25, 1.0, 1.0, &cfg()),
            Err(Error::SingularInput(_))
        ));
        assert!(riesz_kernel(Setting::Exotic, 0.0, 1.0, 2.0, &cfg()).is_err());
    }
}
