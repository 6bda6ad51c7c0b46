//! Gamma function, modified Bessel functions of the first kind and the dilogarithm.
//!
//! The Bessel routines work with two representations of `I_mu(w)`:
//!
//! * the ratio `w^{-mu} I_mu(w)`, which is entire in `w` and tends to
//!   `1 / (2^mu Gamma(mu + 1))` at the origin;
//! * the decayed ratio `e^{-w} w^{-mu} I_mu(w)`, which stays bounded for all `w`
//!   and is what the heat-type kernels consume.
//!
//! Small arguments use the power series, large arguments the Hankel expansion.
//! The switch point is `30 + 2|mu|`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const SERIES_MAX_TERMS: usize = 200;
const SERIES_REL_TOL: f64 = 1e-17;
const ASYMPTOTIC_MAX_TERMS: usize = 120;

/// Lanczos coefficients, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (j, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + j as f64);
    }
    s
}

/// Gamma function on the real line. Poles (0, -1, -2, ...) are domain errors.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma of non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain(format!("gamma has a pole at {x}")));
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma_real(1.0 - x)?));
    }
    if x > 171.6 {
        return Ok(f64::INFINITY);
    }
    let tmp = x + LANCZOS_G + 0.5;
    let series = (2.0 * PI).sqrt() * lanczos_sum(x) / x;
    // Split the power to keep tmp^(x+0.5) finite for x near the overflow limit.
    let half = tmp.powf(0.5 * (x + 0.5));
    Ok(series * half * (-tmp).exp() * half)
}

/// Natural log of |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let tmp = x + LANCZOS_G + 0.5;
    Ok((x + 0.5) * tmp.ln() - tmp + ((2.0 * PI).sqrt() * lanczos_sum(x) / x).ln())
}

/// A validated Bessel order `mu > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order(f64);

impl Order {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > -1.0 {
            Ok(Order(mu))
        } else {
            Err(Error::domain(format!("Bessel order must satisfy mu > -1, got {mu}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which expansion produced a Bessel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Series,
    Asymptotic,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Series => "series",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

/// Result of evaluating `I_mu(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    /// `I_mu(w)`, or `None` when it overflows `f64`.
    pub value: Option<f64>,
    /// `e^{-w} I_mu(w)`, always finite.
    pub scaled_value: f64,
    pub regime: Regime,
    /// Set when the series hit its term cap or the asymptotic sum stalled.
    pub degraded: bool,
}

/// Regime boundary for order `mu`.
pub fn regime_switch(mu: f64) -> f64 {
    30.0 + 2.0 * mu.abs()
}

/// Decayed ratio and the companion quantities needed by kernel derivatives.
///
/// With `A(w) = w^{-mu-1/2} / sqrt(2 pi)` (leading large-`w` behaviour of `r0`):
/// * `r0 = e^{-w} w^{-mu} I_mu(w)`
/// * `r1 = e^{-w} w^{-mu} I_{mu+1}(w)`
/// * `diff = r0 - r1`, computed without cancellation for large `w`
/// * `rem = r0 - A(w)`, computed without cancellation for large `w`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayedParts {
    pub r0: f64,
    pub r1: f64,
    pub diff: f64,
    pub rem: f64,
    pub regime: Regime,
}

/// Precomputed data for a fixed order, so kernels avoid re-evaluating Gamma.
#[derive(Debug, Clone, Copy)]
pub struct BesselI {
    mu: f64,
    /// `1 / (2^mu Gamma(mu + 1))`, the value of the ratio at the origin.
    norm0: f64,
    /// Same for order `mu + 1`.
    norm1: f64,
    switch: f64,
}

struct SeriesSum {
    sum: f64,
    degraded: bool,
}

/// `sum_{n >= start} q^n / (n! (mu+1)_n)` with `q = w^2/4`, `(mu+1)_n` the rising factorial.
fn ratio_series(mu: f64, w: f64, start: usize) -> SeriesSum {
    let q = 0.25 * w * w;
    let mut term = 1.0;
    for n in 0..start {
        term *= q / ((n as f64 + 1.0) * (n as f64 + 1.0 + mu));
    }
    let mut sum = 0.0;
    for n in start..start + SERIES_MAX_TERMS {
        sum += term;
        if term <= SERIES_REL_TOL * sum.abs() || term == 0.0 {
            return SeriesSum { sum, degraded: false };
        }
        term *= q / ((n as f64 + 1.0) * (n as f64 + 1.0 + mu));
    }
    SeriesSum { sum, degraded: true }
}

/// Hankel expansion coefficients for `e^{-w} sqrt(2 pi w) I_mu(w)`.
/// Returns the terms `(-1)^k a_k(mu) / w^k` for `k = 0..` up to convergence.
fn hankel_terms(mu: f64, w: f64) -> (Vec<f64>, bool) {
    let m = 4.0 * mu * mu;
    let mut terms = Vec::with_capacity(32);
    let mut term = 1.0;
    terms.push(term);
    let mut prev = f64::INFINITY;
    for k in 1..ASYMPTOTIC_MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= -(m - odd * odd) / (k as f64 * 8.0 * w);
        if term == 0.0 {
            return (terms, false);
        }
        if term.abs() > prev {
            // Asymptotic series started to grow before reaching round-off.
            return (terms, true);
        }
        terms.push(term);
        if term.abs() < SERIES_REL_TOL {
            return (terms, false);
        }
        prev = term.abs();
    }
    (terms, true)
}

impl BesselI {
    pub fn new(order: Order) -> Self {
        let mu = order.value();
        // Both orders are > -1 so Gamma is finite and positive.
        let g0 = gamma_real(mu + 1.0).expect("mu > -1");
        let g1 = gamma_real(mu + 2.0).expect("mu > -1");
        BesselI {
            mu,
            norm0: 1.0 / (2f64.powf(mu) * g0),
            norm1: 1.0 / (2f64.powf(mu + 1.0) * g1),
            switch: regime_switch(mu).max(regime_switch(mu + 1.0)),
        }
    }

    pub fn with_mu(mu: f64) -> Result<Self> {
        Ok(Self::new(Order::new(mu)?))
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `lim_{w -> 0} w^{-mu} I_mu(w)`.
    pub fn ratio_at_zero(&self) -> f64 {
        self.norm0
    }

    fn check_arg(&self, w: f64) -> Result<()> {
        if w.is_finite() && w >= 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!("Bessel argument must be finite and >= 0, got {w}")))
        }
    }

    /// `e^{-w} w^{-mu} I_mu(w)` together with the regime flag.
    pub fn ratio_decayed(&self, w: f64) -> (f64, Regime) {
        if w < regime_switch(self.mu) {
            let s = ratio_series(self.mu, w, 0).sum;
            (self.norm0 * s * (-w).exp(), Regime::Series)
        } else {
            let (t, _) = hankel_terms(self.mu, w);
            let s: f64 = t.iter().rev().sum();
            (w.powf(-self.mu - 0.5) * s / (2.0 * PI).sqrt(), Regime::Asymptotic)
        }
    }

    /// `w^{-mu} I_mu(w)`; overflows to infinity for very large `w`.
    pub fn ratio(&self, w: f64) -> f64 {
        if w < regime_switch(self.mu) {
            self.norm0 * ratio_series(self.mu, w, 0).sum
        } else {
            let (r, _) = self.ratio_decayed(w);
            // exp(w) may overflow; do it in log space.
            (r.ln() + w).exp()
        }
    }

    /// `w^{-mu} I_mu(w) - 1/(2^mu Gamma(mu+1))`, accurate as `w -> 0`.
    pub fn ratio_minus_limit(&self, w: f64) -> f64 {
        if w < regime_switch(self.mu) {
            self.norm0 * ratio_series(self.mu, w, 1).sum
        } else {
            self.ratio(w) - self.norm0
        }
    }

    /// All decayed quantities used by kernel derivatives. See [`DecayedParts`].
    pub fn decayed_parts(&self, w: f64) -> DecayedParts {
        let mu = self.mu;
        let lead = |w: f64| w.powf(-mu - 0.5) / (2.0 * PI).sqrt();
        if w < self.switch {
            let e = (-w).exp();
            let r0 = self.norm0 * ratio_series(mu, w, 0).sum * e;
            let r1 = w * self.norm1 * ratio_series(mu + 1.0, w, 0).sum * e;
            let rem = if w > 0.0 { r0 - lead(w) } else { f64::NEG_INFINITY };
            DecayedParts { r0, r1, diff: r0 - r1, rem, regime: Regime::Series }
        } else {
            let (t0, _) = hankel_terms(mu, w);
            let (t1, _) = hankel_terms(mu + 1.0, w);
            let n = t0.len().max(t1.len());
            let at = |t: &Vec<f64>, k: usize| t.get(k).copied().unwrap_or(0.0);
            let mut s0 = 0.0;
            let mut s1 = 0.0;
            let mut d = 0.0;
            for k in (0..n).rev() {
                s0 += at(&t0, k);
                s1 += at(&t1, k);
                if k > 0 {
                    d += at(&t0, k) - at(&t1, k);
                }
            }
            let rem_sum: f64 = t0.iter().skip(1).rev().sum();
            let a = lead(w);
            DecayedParts {
                r0: a * s0,
                r1: a * s1,
                diff: a * d,
                rem: a * rem_sum,
                regime: Regime::Asymptotic,
            }
        }
    }

    /// Full evaluation with overflow and degradation flags.
    pub fn eval(&self, w: f64) -> Result<BesselEval> {
        self.check_arg(w)?;
        let mu = self.mu;
        if w == 0.0 {
            return if mu == 0.0 {
                Ok(BesselEval { value: Some(1.0), scaled_value: 1.0, regime: Regime::Series, degraded: false })
            } else if mu > 0.0 {
                Ok(BesselEval { value: Some(0.0), scaled_value: 0.0, regime: Regime::Series, degraded: false })
            } else {
                Err(Error::SingularInput(format!("I_{mu}(0) is infinite for mu < 0")))
            };
        }
        if w < regime_switch(mu) {
            let s = ratio_series(mu, w, 0);
            let ratio = self.norm0 * s.sum;
            let value = ratio * w.powf(mu);
            Ok(BesselEval {
                value: Some(value),
                scaled_value: value * (-w).exp(),
                regime: Regime::Series,
                degraded: s.degraded,
            })
        } else {
            let (t, degraded) = hankel_terms(mu, w);
            let s: f64 = t.iter().rev().sum();
            let scaled = s / (2.0 * PI * w).sqrt();
            let value = scaled * w.exp();
            Ok(BesselEval {
                value: value.is_finite().then_some(value),
                scaled_value: scaled,
                regime: Regime::Asymptotic,
                degraded,
            })
        }
    }
}

/// `I_mu(w)` for `mu > -1`, `w >= 0`.
pub fn bessel_i(order: Order, w: f64) -> Result<BesselEval> {
    BesselI::new(order).eval(w)
}

/// `w^{-mu} I_mu(w)` for `w >= 0`, continuous at `w = 0`.
pub fn scaled_ratio(order: Order, w: f64) -> Result<f64> {
    let b = BesselI::new(order);
    b.check_arg(w)?;
    Ok(b.ratio(w))
}

/// Dilogarithm `Li_2(z) = -int_0^z log(1 - s)/s ds` for `0 <= z <= 1`.
pub fn dilog(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("dilog implemented on [0, 1], got {z}")));
    }
    if z == 1.0 {
        return Ok(PI * PI / 6.0);
    }
    if z <= 0.5 {
        let mut sum = 0.0;
        let mut p = z;
        for k in 1..200 {
            let t = p / (k * k) as f64;
            sum += t;
            if t < 1e-18 * sum.abs() || p == 0.0 {
                break;
            }
            p *= z;
        }
        return Ok(sum);
    }
    Ok(PI * PI / 6.0 - z.ln() * (1.0 - z).ln() - dilog(1.0 - z)?)
}
