//! Empirical corroboration of region boundaries with explicit test-function families.
//!
//! Each registry entry names a family, the parameter sequence it is evaluated on and
//! the growth law the norm ratio must follow. Fails-side entries must grow at the
//! predicted rate; holds-side entries must stay bounded.

use super::theorems::{classify, Aux, Property, TheoremId, Tri};
use crate::error::{Error, Result};
use crate::grid::{logspace, GridFunction, Interp, TimeGrid};
use crate::kernels::Setting;
use crate::norms::{lp_norm, weak_lp_quasinorm};
use crate::operators::hardy::{hardy, HardyKind};
use crate::operators::semigroup::heat_maximal;
use crate::quad::QuadratureConfig;
use rayon::prelude::*;
use serde::Serialize;

/// Relative band around the fitted law.
pub const GROWTH_BAND: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `chi_(1, 1+eps)`, ratio of `L^1(x^delta)` norms of `W~_* f` over `[1/2, 2]` and of `f`.
    ShrinkingIndicator,
    /// `chi_(1,2)`, weak quasinorm of `W~_* f` restricted to `[1, X]`.
    HeatTail,
    /// `chi_(1,2)`, weak quasinorm of `H_0^{1,log} f` restricted to `[1, X]`.
    LogHardyTail,
}

impl Family {
    /// The inequality the family tests.
    pub fn property(self) -> Property {
        match self {
            Family::ShrinkingIndicator => Property::Strong,
            Family::HeatTail | Family::LogHardyTail => Property::Weak,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Law {
    /// `ratio ~ log(1/s)`.
    LogInverse,
    /// `ratio ~ log s`.
    Log,
    /// `ratio ~ s^e`.
    Power(f64),
    /// `ratio ~ 1`.
    Bounded,
}

impl Law {
    fn shape(self, s: f64) -> f64 {
        match self {
            Law::LogInverse => (1.0 / s).ln(),
            Law::Log => s.ln(),
            Law::Power(e) => s.powf(e),
            Law::Bounded => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub name: &'static str,
    pub theorem: TheoremId,
    pub nu: f64,
    pub p: f64,
    pub delta: f64,
    pub family: Family,
    /// Family parameters: `eps` for shrinking indicators, window ends `X` otherwise.
    pub params: Vec<f64>,
    pub law: Law,
}

impl Counterexample {
    /// The verdict the entry is meant to corroborate.
    pub fn expected(&self) -> Tri {
        if self.law == Law::Bounded {
            Tri::Holds
        } else {
            Tri::Fails
        }
    }
}

/// The registered cases, one per side of the boundaries they probe.
pub fn registry() -> Vec<Counterexample> {
    let eps = vec![0.1, 0.05, 0.02, 0.01];
    let windows = vec![1e2, 1e3, 1e4, 1e5];
    let mut out = Vec::new();
    for nu in [-0.5, 0.5] {
        out.push(Counterexample {
            name: "heat maximal, L1 blow-up on shrinking indicators",
            theorem: TheoremId::MaxWexo,
            nu,
            p: 1.0,
            delta: 0.5,
            family: Family::ShrinkingIndicator,
            params: eps.clone(),
            law: Law::LogInverse,
        });
        // delta = 2p - 1 + 1: predicted exponent (delta + 1)/p - 2 = 1/2.
        out.push(Counterexample {
            name: "heat maximal, x^-2 tail above the upper line",
            theorem: TheoremId::MaxWexo,
            nu,
            p: 2.0,
            delta: 4.0,
            family: Family::HeatTail,
            params: windows.clone(),
            law: Law::Power(0.5),
        });
        out.push(Counterexample {
            name: "heat maximal, x^-2 tail inside the strip",
            theorem: TheoremId::MaxWexo,
            nu,
            p: 2.0,
            delta: 2.0,
            family: Family::HeatTail,
            params: windows.clone(),
            law: Law::Bounded,
        });
    }
    out.push(Counterexample {
        name: "log Hardy operator on the boundary line",
        theorem: TheoremId::Hlog0,
        nu: 0.0,
        p: 2.0,
        delta: 3.0,
        family: Family::LogHardyTail,
        params: windows.clone(),
        law: Law::Log,
    });
    out.push(Counterexample {
        name: "log Hardy operator below the boundary line",
        theorem: TheoremId::Hlog0,
        nu: 0.0,
        p: 2.0,
        delta: 2.0,
        family: Family::LogHardyTail,
        params: windows,
        law: Law::Bounded,
    });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub case: Counterexample,
    /// Verdict of the predicate for the property the family tests.
    pub predicate: Tri,
    /// Norm ratios, one per family parameter.
    pub ratios: Vec<f64>,
    /// `exp(mean log(ratio / shape))`.
    pub fitted_constant: f64,
    /// Largest `|ratio / (constant * shape) - 1|`.
    pub max_deviation: f64,
    /// Free log-log slope of the ratios against the family parameter.
    pub fitted_exponent: f64,
    pub outcome: Outcome,
    pub note: String,
}

/// Least-squares fit of `ln ratio = ln C + ln shape`, returning `C` and the worst relative deviation.
pub fn fit_law(law: Law, params: &[f64], ratios: &[f64]) -> (f64, f64) {
    let logs: Vec<f64> = params.iter().zip(ratios).map(|(&s, &r)| (r / law.shape(s)).ln()).collect();
    let c = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    let dev = params
        .iter()
        .zip(ratios)
        .map(|(&s, &r)| (r / (c * law.shape(s)) - 1.0).abs())
        .fold(0.0, f64::max);
    (c, dev)
}

/// Slope of `ln r` against `ln s`.
pub fn loglog_slope(params: &[f64], ratios: &[f64]) -> f64 {
    let n = params.len() as f64;
    let xs: Vec<f64> = params.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn quad() -> QuadratureConfig {
    QuadratureConfig { abs_tol: 1e-14, rel_tol: 1e-7, max_subdivisions: 400 }
}

/// `W~_* f` sampled on `xs` in parallel; the order of `xs` is kept.
fn sample_maximal(nu: f64, f: &GridFunction, xs: &[f64], grid: &TimeGrid) -> Result<Vec<f64>> {
    let cfg = quad();
    xs.par_iter()
        .map(|&x| heat_maximal(Setting::Exotic, nu, f, x, grid, &cfg).map(|s| s.value))
        .collect()
}

/// Mesh on `[1/2, 2]` resolving the scale `eps` around `(1, 1+eps)`.
fn shrinking_mesh(eps: f64) -> Vec<f64> {
    let per_decade = 25.0;
    let mut xs = Vec::new();
    let count = |lo: f64, hi: f64| ((hi / lo).log10() * per_decade).ceil() as usize + 1;
    let d0 = eps / 16.0;
    for d in logspace(d0, 0.5, count(d0, 0.5)) {
        xs.push(1.0 - d);
    }
    for k in 0..=8 {
        xs.push(1.0 + eps * k as f64 / 8.0);
    }
    for d in logspace(d0, 1.0 - eps, count(d0, 1.0 - eps)) {
        xs.push(1.0 + eps + d);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn tail_mesh(x_max: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..10).map(|k| 1.0 + 0.1 * k as f64).collect();
    let n = ((x_max / 2.0).log10() * 20.0).ceil() as usize + 1;
    xs.extend(logspace(2.0, x_max, n));
    xs
}

/// `f` restricted to nodes `<= x_max`.
fn window(xs: &[f64], vs: &[f64], x_max: f64) -> Result<GridFunction> {
    let n = xs.iter().take_while(|&&x| x <= x_max * (1.0 + 1e-12)).count();
    GridFunction::new(xs[..n].to_vec(), vs[..n].to_vec(), Interp::Linear)
}

fn ratios(case: &Counterexample) -> Result<Vec<f64>> {
    match case.family {
        Family::ShrinkingIndicator => {
            let grid = TimeGrid::log(1e-8, 10.0, 90).with_refine(true);
            case.params
                .iter()
                .map(|&eps| {
                    let f = GridFunction::indicator(1.0, 1.0 + eps)?;
                    let xs = shrinking_mesh(eps);
                    let vs = sample_maximal(case.nu, &f, &xs, &grid)?;
                    let m = GridFunction::new(xs, vs, Interp::Linear)?;
                    Ok(lp_norm(&m, 1.0, case.delta)?.value / lp_norm(&f, 1.0, case.delta)?.value)
                })
                .collect()
        }
        Family::HeatTail | Family::LogHardyTail => {
            let x_max = case.params.iter().copied().fold(0.0, f64::max);
            let xs = tail_mesh(x_max);
            let f = GridFunction::indicator(1.0, 2.0)?;
            let vs = if case.family == Family::HeatTail {
                let grid = TimeGrid::log(1e-4, 1e3 * x_max * x_max, 160).with_refine(true);
                sample_maximal(case.nu, &f, &xs, &grid)?
            } else {
                xs.iter().map(|&x| hardy(HardyKind::ZeroLog, 1.0, 1.0, &f, x)).collect::<Result<_>>()?
            };
            let norm_f = lp_norm(&f, case.p, case.delta)?.value;
            case.params
                .iter()
                .map(|&x_max| Ok(weak_lp_quasinorm(&window(&xs, &vs, x_max)?, case.p, case.delta)?.value / norm_f))
                .collect()
        }
    }
}

/// Evaluate one registry entry and compare its growth with the predicted law.
///
/// Numerical failures of the underlying operators give `Inconclusive`, never `Pass`.
pub fn probe_boundary(case: &Counterexample) -> Result<ProbeReport> {
    if case.params.len() < 4 {
        return Err(Error::contract("growth fits need at least four family parameters"));
    }
    let aux = Aux::default();
    let predicate = classify(case.theorem, case.nu, case.p, case.delta, &aux)?.get(case.family.property());
    let mut report = ProbeReport {
        case: case.clone(),
        predicate,
        ratios: Vec::new(),
        fitted_constant: f64::NAN,
        max_deviation: f64::NAN,
        fitted_exponent: f64::NAN,
        outcome: Outcome::Inconclusive,
        note: String::new(),
    };
    if predicate != case.expected() {
        report.outcome = Outcome::Fail;
        report.note = format!("predicate gives {predicate:?}, registry expects {:?}", case.expected());
        return Ok(report);
    }
    let r = match ratios(case) {
        Ok(r) => r,
        Err(e) if e.is_numerical() => {
            report.note = e.to_string();
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    if r.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        report.ratios = r;
        report.note = "non-positive or non-finite ratio".into();
        return Ok(report);
    }
    let (c, dev) = fit_law(case.law, &case.params, &r);
    report.fitted_exponent = loglog_slope(&case.params, &r);
    report.fitted_constant = c;
    report.max_deviation = dev;
    report.ratios = r;
    report.outcome = if dev <= GROWTH_BAND { Outcome::Pass } else { Outcome::Fail };
    Ok(report)
}

/// All registry entries, evaluated in parallel and returned in registry order.
pub fn probe_all() -> Result<Vec<ProbeReport>> {
    registry().par_iter().map(probe_boundary).collect()
}
