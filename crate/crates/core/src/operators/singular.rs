//! Riesz transforms and fractional integrals.

use super::integrate_against;
use super::local::local_hilbert;
use crate::error::{Error, Result};
use crate::grid::{PowerWeighted, Profile};
use crate::kernels::{potential_kernel, riesz_kernel, riesz_remainder, Setting};
use crate::quad::QuadratureConfig;
use std::cell::RefCell;

/// `R f(x)` (or the adjoint `R^* f(x)`) in either setting.
///
/// Away from `(x/2, 2x)` the kernel is integrated directly. Inside that window
/// the kernel is split into its leading term, handled by the local Hilbert
/// transform, and an absolutely integrable remainder.
pub fn riesz_apply<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    f: &P,
    x: f64,
    adjoint: bool,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    setting.check_nu(nu)?;
    if setting == Setting::Exotic && nu == 0.0 {
        return Err(Error::domain("exotic Riesz transform requires nu != 0"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("evaluation point must be positive"));
    }
    let kcfg = cfg.tightened(0.01);
    let err = RefCell::new(None);
    let keep = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let density = |y: f64| y.powf(2.0 * nu + 1.0);
    let full = |y: f64| {
        let k = if adjoint { riesz_kernel(setting, nu, y, x, &kcfg) } else { riesz_kernel(setting, nu, x, y, &kcfg) };
        keep(k.map(|k| k.value)) * density(y)
    };
    let rem = |y: f64| {
        let k = if adjoint { riesz_remainder(setting, nu, y, x, &kcfg) } else { riesz_remainder(setting, nu, x, y, &kcfg) };
        keep(k.map(|k| k.value)) * density(y)
    };
    let near = |a: f64, b: f64| [x, 0.5 * (x + a), 0.5 * (x + b), x * 0.999, x * 1.001];
    let mut total = 0.0;
    total += integrate_against(f, 0.0, x / 2.0, &[], full, cfg)?.into_result("Riesz transform")?.value;
    total += integrate_against(f, 2.0 * x, f64::INFINITY, &[], full, cfg)?.into_result("Riesz transform")?.value;
    total += integrate_against(f, x / 2.0, 2.0 * x, &near(x / 2.0, 2.0 * x), rem, cfg)?
        .into_result("Riesz transform")?
        .value;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let pv = local_hilbert(nu, f, x, 2.0, &cfg.tightened(0.01))?.value;
    Ok(total + if adjoint { -pv } else { pv })
}

/// Fractional integral `I^{nu,sigma} f(x) = int K^{nu,sigma}(x, y) f(y) d eta_nu(y)`.
///
/// The exotic operator is evaluated through `I~ f(x) = x^{-2nu} I^{-nu,sigma}(y^{2nu} f)(x)`.
pub fn frac_integral_apply<P: Profile + ?Sized>(
    setting: Setting,
    nu: f64,
    sigma: f64,
    f: &P,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    setting.check_nu(nu)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("evaluation point must be positive"));
    }
    match setting {
        Setting::Exotic => {
            let g = PowerWeighted { inner: f, exponent: 2.0 * nu };
            Ok(x.powf(-2.0 * nu) * frac_integral_classical(-nu, sigma, &g, x, cfg)?)
        }
        Setting::Classical => frac_integral_classical(nu, sigma, f, x, cfg),
    }
}

fn frac_integral_classical<P: Profile + ?Sized>(
    nu: f64,
    sigma: f64,
    f: &P,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(sigma > 0.0 && sigma < nu + 1.0) {
        return Err(Error::domain(format!("fractional integral needs 0 < sigma < nu + 1, got sigma = {sigma}")));
    }
    let kcfg = cfg.tightened(0.01);
    let err = RefCell::new(None);
    let k = |y: f64| match potential_kernel(Setting::Classical, nu, sigma, x, y, &kcfg) {
        Ok(k) => k.value * y.powf(2.0 * nu + 1.0),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let q = integrate_against(f, 0.0, f64::INFINITY, &[x, 0.9 * x, 1.1 * x], k, cfg)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(q.into_result("fractional integral")?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;
    use std::f64::consts::PI;

    #[test]
    fn half_order_riesz_on_indicator() {
        // R_{-1/2} f(x) = (1/pi) p.v. int f(y) (1/(y-x) - 1/(y+x)) dy, d eta = dy.
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let c = QuadratureConfig::relative(1e-8);
        for x in [0.4f64, 1.3, 3.0] {
            let want = (((2.0 - x) as f64).abs().ln() - ((1.0 - x) as f64).abs().ln() - ((2.0 + x) / (1.0 + x)).ln()) / PI;
            let got = riesz_apply(Setting::Classical, -0.5, &f, x, false, &c).unwrap();
            assert!((got - want).abs() < 1e-6 * want.abs().max(1.0), "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn exotic_riesz_via_classical_adjoint() {
        // For nu < 0: R~_nu f(x) = -x^{-2nu-1} R^*_{-nu-1}(y^{2nu+1} f)(x).
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let c = QuadratureConfig::relative(1e-8);
        for nu in [-0.75, -0.25] {
            for x in [0.5, 1.4, 4.0] {
                let lhs = riesz_apply(Setting::Exotic, nu, &f, x, false, &c).unwrap();
                let g = PowerWeighted { inner: &f, exponent: 2.0 * nu + 1.0 };
                let rhs = -x.powf(-2.0 * nu - 1.0) * riesz_apply(Setting::Classical, -nu - 1.0, &g, x, true, &c).unwrap();
                assert!((lhs - rhs).abs() < 1e-6 * rhs.abs().max(1e-3), "nu={nu} x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn fractional_integral_half_order() {
        // Exotic nu = 1/2 uses classical order -1/2, where
        // K^{-1/2,s}(x,y) = Gamma(1/2-s)/(Gamma(s) sqrt(4 pi)) (|x-y|^{2s-1} + (x+y)^{2s-1}) 2^{1-2s}.
        let f = GridFunction::indicator(1.0, 2.0).unwrap();
        let s: f64 = 0.25;
        let c = QuadratureConfig::relative(1e-8);
        let pref = crate::special_fn::gamma_real(0.5 - s).unwrap() / (crate::special_fn::gamma_real(s).unwrap() * (4.0 * PI).sqrt())
            * 2f64.powf(1.0 - 2.0 * s);
        let x: f64 = 3.0;
        // int_1^2 (|x-y|^{-1/2} + (x+y)^{-1/2}) dy
        let e = 2.0 * s;
        let prim = |z: f64| z.powf(e) / e;
        let integral = (prim(x - 1.0) - prim(x - 2.0)) + (prim(x + 2.0) - prim(x + 1.0));
        let cls = frac_integral_apply(Setting::Classical, -0.5, s, &f, x, &c).unwrap();
        assert!((cls - pref * integral).abs() < 1e-7 * cls.abs());
    }
}
