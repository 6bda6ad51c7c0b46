//! Adaptive Gauss-Kronrod quadrature.
//!
//! The basic rule is the 21-point Kronrod extension of 10-point Gauss. Intervals
//! are bisected in order of their error estimate until the global estimate meets
//! `max(abs_tol, rel_tol * |I|)`. Integrals over `(0, inf)` are done in the
//! variable `u = ln t`, with the central region split at caller-supplied scales
//! and the two tails marched outward panel by panel.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Cancellation floor: tolerance never drops below this fraction of `rel_tol * int |f|`.
const CANCEL_FLOOR: f64 = 1e-3;

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-12, rel_tol: 1e-9, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn relative(rel_tol: f64) -> Self {
        QuadratureConfig { abs_tol: 0.0, rel_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::domain("quadrature tolerances must be non-negative and not both zero"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be positive"));
        }
        Ok(())
    }

    /// Same limits with a tighter relative tolerance, for inner integrals.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Integral of |f|, used to judge cancellation.
    pub abs_mass: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn into_result(self, what: &str) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { what: what.to_string(), estimate: self.value, error: self.error })
        }
    }

    fn absorb(&mut self, other: &QuadResult) {
        self.value += other.value;
        self.error += other.error;
        self.abs_mass += other.abs_mass;
        self.evaluations += other.evaluations;
        self.subdivisions += other.subdivisions;
        self.converged &= other.converged;
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_mass: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut fv = [0.0; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() {
        return Err(Error::NonConvergence {
            what: format!("integrand not finite on [{a:e}, {b:e}]"),
            estimate: resk,
            error: f64::INFINITY,
        });
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }
    let hl = h.abs();
    resasc *= hl;
    resabs *= hl;
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1f64.min((200.0 * err / resasc).powf(1.5)));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value: resk * h, error: err, abs_mass: resabs })
}

fn target(cfg: &QuadratureConfig, value: f64, abs_mass: f64) -> f64 {
    // Errors below the normal range cannot be resolved further.
    cfg.abs_tol
        .max(f64::MIN_POSITIVE)
        .max(cfg.rel_tol * value.abs()).max(CANCEL_FLOOR * cfg.rel_tol * abs_mass)
}

/// Integrate `f` over the polyline of `points` (sorted, at least two entries).
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: &F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult> {
    cfg.validate()?;
    if points.len() < 2 {
        return Ok(QuadResult { converged: true, ..Default::default() });
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    let mut subdivisions = 0;
    let mut frozen = QuadResult::default();
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum::<f64>() + frozen.value;
        let error: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen.error;
        let abs_mass: f64 = heap.iter().map(|s| s.abs_mass).sum::<f64>() + frozen.abs_mass;
        let tol = target(cfg, value, abs_mass);
        let done = error <= tol;
        if done || subdivisions >= cfg.max_subdivisions || heap.is_empty() {
            return Ok(QuadResult {
                value,
                error,
                abs_mass,
                evaluations,
                subdivisions,
                converged: done || heap.is_empty() && frozen.error <= tol,
            });
        }
        let seg = heap.pop().expect("heap non-empty");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a) < 1e-14 * seg.a.abs().max(seg.b.abs()) {
            // Cannot be refined further in floating point.
            frozen.value += seg.value;
            frozen.error += seg.error;
            frozen.abs_mass += seg.abs_mass;
            continue;
        }
        heap.push(gk21(f, seg.a, mid)?);
        heap.push(gk21(f, mid, seg.b)?);
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { converged: true, ..Default::default() });
    }
    if a > b {
        let r = integrate_breaks(f, &[b, a], cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    integrate_breaks(f, &[a, b], cfg)
}

/// Sorted, deduplicated breakpoints restricted to `[a, b]`, including both ends.
pub fn breakpoints_within(a: f64, b: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts = vec![a, b];
    pts.extend(extra.into_iter().filter(|p| p.is_finite() && *p > a && *p < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * y.abs().max(1e-300));
    pts
}

const PANEL: f64 = 2.0;
const U_MAX: f64 = 700.0;
const U_MIN: f64 = -740.0;

/// Integrate `f` over `(0, inf)` using `u = ln t`.
///
/// `scales` are values of `t` where the integrand changes character; they
/// become breakpoints of the central region. Tails beyond the central region
/// are marched in panels of width 2 in `u` until they are negligible.
pub fn integrate_positive_axis<F: Fn(f64) -> f64>(f: &F, scales: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult> {
    let g = |u: f64| {
        let t = u.exp();
        if t == 0.0 || !t.is_finite() {
            0.0
        } else {
            f(t) * t
        }
    };
    let mut logs: Vec<f64> = scales.iter().filter(|s| **s > 0.0 && s.is_finite()).map(|s| s.ln()).collect();
    if logs.is_empty() {
        logs.push(0.0);
    }
    logs.sort_by(f64::total_cmp);
    let lo = (logs[0] - 3.0).max(U_MIN);
    let hi = (logs[logs.len() - 1] + 3.0).min(U_MAX);
    let core_pts = breakpoints_within(lo, hi, logs.iter().copied());
    let mut total = integrate_breaks(&g, &core_pts, cfg)?;
    march_tail(&g, hi, 1.0, &mut total, cfg)?;
    march_tail(&g, lo, -1.0, &mut total, cfg)?;
    Ok(total)
}

/// Integrate `f` over `[lo, hi]` (with `0 < lo < hi`) using `u = ln t`.
pub fn integrate_log_range<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    scales: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!("log-range quadrature needs 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let g = |u: f64| {
        let t = u.exp();
        f(t) * t
    };
    let (a, b) = (lo.ln(), hi.ln());
    let pts = breakpoints_within(a, b, scales.iter().filter(|s| **s > 0.0).map(|s| s.ln()));
    integrate_breaks(&g, &pts, cfg)
}

fn march_tail<G: Fn(f64) -> f64>(g: &G, start: f64, dir: f64, total: &mut QuadResult, cfg: &QuadratureConfig) -> Result<()> {
    let mut u = start;
    let mut prev: Option<f64> = None;
    let mut quiet = 0;
    loop {
        let next = u + dir * PANEL;
        if next > U_MAX || next < U_MIN {
            let tol = target(cfg, total.value, total.abs_mass);
            if prev.map_or(true, |p| p.abs() > tol) {
                total.converged = false;
            }
            return Ok(());
        }
        let (a, b) = if dir > 0.0 { (u, next) } else { (next, u) };
        let panel_cfg = QuadratureConfig {
            abs_tol: 0.1 * target(cfg, total.value, total.abs_mass),
            ..*cfg
        };
        let p = integrate_breaks(g, &[a, b], &panel_cfg)?;
        total.absorb(&p);
        let thr = 0.1 * target(cfg, total.value, total.abs_mass);
        if p.value.abs() <= thr {
            quiet += 1;
            if quiet >= 2 {
                return Ok(());
            }
        } else {
            quiet = 0;
            if let Some(pv) = prev {
                let r = p.value / pv;
                if r > 0.0 && r < 0.9 {
                    // Geometric tail: the rest of the tail is about p r / (1 - r).
                    let rest = p.value * r / (1.0 - r);
                    if rest.abs() <= thr {
                        total.value += rest;
                        total.error += rest.abs();
                        return Ok(());
                    }
                }
            }
        }
        prev = Some(p.value);
        u = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // The Kronrod rule integrates degree 31 exactly, Gauss degree 19.
        let f = |x: f64| x.powi(19) + 3.0 * x.powi(12);
        let r = integrate(&f, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((r.value - (1.0 / 20.0 + 3.0 / 13.0)).abs() < 1e-15);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn endpoint_singularity() {
        let f = |x: f64| x.powf(-0.5);
        let r = integrate(&f, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn log_singularity_inside() {
        let f = |x: f64| (x - 0.3).abs().ln();
        let pts = breakpoints_within(0.0, 1.0, [0.3]);
        let r = integrate_breaks(&f, &pts, &QuadratureConfig::default()).unwrap();
        let exact = 0.3 * 0.3f64.ln() - 0.3 + 0.7 * 0.7f64.ln() - 0.7;
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn positive_axis_slow_power_tail() {
        // int_0^inf dt / ((1 + t) t^{0.2}) = pi / sin(0.8 pi)
        let f = |t: f64| 1.0 / ((1.0 + t) * t.powf(0.2));
        let r = integrate_positive_axis(&f, &[1.0], &QuadratureConfig::relative(1e-10)).unwrap();
        let exact = std::f64::consts::PI / (0.8 * std::f64::consts::PI).sin();
        assert!(r.converged);
        assert!(((r.value - exact) / exact).abs() < 1e-8, "{} vs {exact}", r.value);
    }

    #[test]
    fn positive_axis_gaussian_peak() {
        // Narrow bump far from the scale hint.
        let f = |t: f64| (-(t - 1e3).powi(2) / 2.0).exp();
        let r = integrate_positive_axis(&f, &[1e3], &QuadratureConfig::relative(1e-10)).unwrap();
        let exact = (2.0 * std::f64::consts::PI).sqrt();
        assert!(((r.value - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn nonfinite_integrand_reports_error() {
        let f = |x: f64| 1.0 / (x - 0.5);
        assert!(integrate(&f, 0.0, 1.0, &QuadratureConfig::default()).is_err()
            || !integrate(&f, 0.0, 1.0, &QuadratureConfig::default()).unwrap().converged);
    }
}
