//! Exact `(nu, p, delta)` predicates for every boundedness characterization.
//!
//! `delta` is the exponent of the measure `x^delta dx`. Boundary equalities are
//! decided with a small tolerance so that grid points computed as `a + k * step`
//! land on the lines they are meant to sit on.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Relative tolerance for deciding that a point lies on a boundary line.
pub const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    /// `H_0^xi`.
    H0,
    /// `H_inf^xi`.
    Hinf,
    /// `H_0^{1,log}`.
    Hlog0,
    /// `H_inf^{-1,log}`.
    HlogInf,
    /// Classical heat maximal operator.
    MaxWcls,
    /// Exotic heat maximal operator.
    MaxWexo,
    /// Exotic Poisson maximal operator.
    PoissonExo,
    /// Classical Riesz transform.
    Rcls,
    /// Its adjoint.
    RclsStar,
    /// Exotic Riesz transform, `0 != nu < 1/2`.
    Rexo,
    RexoStar,
    /// Exotic Riesz transform, `1/2 <= nu < 1`.
    Rexob,
    RexobStar,
    /// Classical vertical g-function.
    Gcls,
    /// Exotic vertical g-function.
    Gexo,
    /// Classical fractional integral, two power weights.
    PotCls,
    /// Exotic fractional integral, two power weights.
    PotExo,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::H0,
        TheoremId::Hinf,
        TheoremId::Hlog0,
        TheoremId::HlogInf,
        TheoremId::MaxWcls,
        TheoremId::MaxWexo,
        TheoremId::PoissonExo,
        TheoremId::Rcls,
        TheoremId::RclsStar,
        TheoremId::Rexo,
        TheoremId::RexoStar,
        TheoremId::Rexob,
        TheoremId::RexobStar,
        TheoremId::Gcls,
        TheoremId::Gexo,
        TheoremId::PotCls,
        TheoremId::PotExo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::H0 => "H0",
            TheoremId::Hinf => "Hinf",
            TheoremId::Hlog0 => "Hlog0",
            TheoremId::HlogInf => "HlogInf",
            TheoremId::MaxWcls => "MaxWcls",
            TheoremId::MaxWexo => "MaxWexo",
            TheoremId::PoissonExo => "PoissonExo",
            TheoremId::Rcls => "Rcls",
            TheoremId::RclsStar => "RclsStar",
            TheoremId::Rexo => "Rexo",
            TheoremId::RexoStar => "RexoStar",
            TheoremId::Rexob => "Rexob",
            TheoremId::RexobStar => "RexobStar",
            TheoremId::Gcls => "Gcls",
            TheoremId::Gexo => "Gexo",
            TheoremId::PotCls => "PotCls",
            TheoremId::PotExo => "PotExo",
        }
    }

    /// Whether the predicate depends on `nu`.
    pub fn uses_nu(self) -> bool {
        !matches!(self, TheoremId::H0 | TheoremId::Hinf | TheoremId::Hlog0 | TheoremId::HlogInf)
    }

    /// Check that `nu` (and the auxiliary parameters) are in the range the characterization covers.
    pub fn check_params(self, nu: f64, aux: &Aux) -> Result<()> {
        use TheoremId::*;
        if self.uses_nu() && !nu.is_finite() {
            return Err(Error::domain("nu must be finite"));
        }
        let bad = |range: &str| Err(Error::domain(format!("{} requires {range}, got nu = {nu}", self.name())));
        match self {
            H0 | Hinf => {
                aux.require_xi(self)?;
            }
            Hlog0 | HlogInf => {}
            MaxWcls | Rcls | RclsStar | Gcls => {
                if !(nu > -1.0) {
                    return bad("nu > -1");
                }
            }
            MaxWexo | PoissonExo | Gexo => {
                if !(nu < 1.0) {
                    return bad("nu < 1");
                }
            }
            Rexo | RexoStar => {
                if !(nu < 0.5) || nu == 0.0 {
                    return bad("0 != nu < 1/2");
                }
            }
            Rexob | RexobStar => {
                if !(0.5..1.0).contains(&nu) {
                    return bad("1/2 <= nu < 1");
                }
            }
            PotCls => {
                if !(nu > -1.0) {
                    return bad("nu > -1");
                }
                let s = aux.require_sigma(self)?;
                if !(s > 0.0 && s < nu + 1.0) {
                    return Err(Error::domain(format!("PotCls requires 0 < sigma < nu + 1, got sigma = {s}")));
                }
            }
            PotExo => {
                if !(nu < 1.0) {
                    return bad("nu < 1");
                }
                let s = aux.require_sigma(self)?;
                if !(s > 0.0 && s < 1.0 - nu) {
                    return Err(Error::domain(format!("PotExo requires 0 < sigma < 1 - nu, got sigma = {s}")));
                }
            }
        }
        if let Some(q) = aux.q {
            if !(q >= 1.0) {
                return Err(Error::domain(format!("q must satisfy q >= 1, got {q}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown theorem id '{s}'")))
    }
}

/// One entry of a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tri {
    Holds,
    Fails,
    Open,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Holds
        } else {
            Tri::Fails
        }
    }

    /// CSV cell: `1`, `0` or `?`.
    pub fn cell(self) -> char {
        match self {
            Tri::Holds => '1',
            Tri::Fails => '0',
            Tri::Open => '?',
        }
    }

    pub fn is_definite(self) -> bool {
        self != Tri::Open
    }
}

/// Which inequality a verdict entry is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    Strong,
    Weak,
    RestrictedWeak,
}

/// Strong, weak and restricted weak type `(p, p)` for one `(nu, p, delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Verdict {
    pub strong: Tri,
    pub weak: Tri,
    pub rwt: Tri,
}

impl Verdict {
    fn new(strong: bool, weak: bool, rwt: bool) -> Verdict {
        Verdict { strong: Tri::from_bool(strong), weak: Tri::from_bool(weak), rwt: Tri::from_bool(rwt) }
    }

    fn uniform(b: bool) -> Verdict {
        Verdict::new(b, b, b)
    }

    pub fn get(&self, prop: Property) -> Tri {
        match prop {
            Property::Strong => self.strong,
            Property::Weak => self.weak,
            Property::RestrictedWeak => self.rwt,
        }
    }

    /// `strong => weak => rwt` among the definite entries.
    pub fn is_monotone(&self) -> bool {
        let implies = |a: Tri, b: Tri| !(a == Tri::Holds && b == Tri::Fails);
        implies(self.strong, self.weak)
            && implies(self.weak, self.rwt)
            && (self.weak != Tri::Open || implies(self.strong, self.rwt))
    }
}

/// Parameters some characterizations need besides `(nu, p, delta)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Aux {
    /// Hardy exponent for `H0` and `Hinf`.
    pub xi: Option<f64>,
    /// Order of the fractional integral.
    pub sigma: Option<f64>,
    /// Target exponent of the fractional integral; defaults to `p`.
    pub q: Option<f64>,
}

impl Aux {
    pub fn xi(xi: f64) -> Aux {
        Aux { xi: Some(xi), ..Aux::default() }
    }

    pub fn sigma(sigma: f64) -> Aux {
        Aux { sigma: Some(sigma), ..Aux::default() }
    }

    fn require_xi(&self, id: TheoremId) -> Result<f64> {
        match self.xi {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(Error::domain(format!("{id} needs a finite xi"))),
        }
    }

    fn require_sigma(&self, id: TheoremId) -> Result<f64> {
        match self.sigma {
            Some(s) if s.is_finite() => Ok(s),
            _ => Err(Error::domain(format!("{id} needs sigma"))),
        }
    }
}

fn tol(a: f64, b: f64) -> f64 {
    BOUNDARY_EPS * (1.0 + a.abs().max(b.abs()))
}

/// `a == b` up to the boundary tolerance.
fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol(a, b)
}

/// `a < b`, with points on the boundary counted as equal.
fn lt(a: f64, b: f64) -> bool {
    a < b - tol(a, b)
}

/// `a <= b`, with points on the boundary counted as equal.
fn le(a: f64, b: f64) -> bool {
    a <= b + tol(a, b)
}

/// `lo < d < hi` with either end optionally closed.
fn within(lo: f64, lo_closed: bool, d: f64, hi: f64, hi_closed: bool) -> bool {
    let left = if lo_closed { le(lo, d) } else { lt(lo, d) };
    let right = if hi_closed { le(d, hi) } else { lt(d, hi) };
    left && right
}

/// Verdict for the common shape of the heat-type theorems:
/// strong on the open strip for `p > 1`, weak with `lo_weak` deciding the left edge and
/// the right edge closed at `p = 1`, restricted weak with `lo_rwt` on the left and a
/// closed right edge.
fn strip(p1: bool, lo: f64, hi: f64, d: f64, lo_weak: bool, lo_rwt: bool) -> Verdict {
    Verdict::new(!p1 && within(lo, false, d, hi, false), within(lo, lo_weak, d, hi, p1), within(lo, lo_rwt, d, hi, true))
}

/// Classify `(nu, p, delta)` for the operator `id`.
///
/// `p = inf` is answered only where the characterization speaks about it; there
/// weak and restricted weak type coincide with strong type.
pub fn classify(id: TheoremId, nu: f64, p: f64, delta: f64, aux: &Aux) -> Result<Verdict> {
    use TheoremId::*;
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p must satisfy p >= 1, got {p}")));
    }
    if !delta.is_finite() {
        return Err(Error::domain("delta must be finite"));
    }
    id.check_params(nu, aux)?;
    // For nu = 0 both settings coincide.
    if nu == 0.0 {
        match id {
            MaxWexo | PoissonExo => return classify(MaxWcls, 0.0, p, delta, aux),
            Gexo => return classify(Gcls, 0.0, p, delta, aux),
            _ => {}
        }
    }
    if p.is_infinite() {
        let holds = match id {
            H0 => aux.require_xi(id)? > -1.0,
            Hinf => aux.require_xi(id)? > 0.0,
            MaxWcls => true,
            MaxWexo | PoissonExo => nu < 0.0,
            _ => return Err(Error::domain(format!("{id} has no characterization at p = inf"))),
        };
        return Ok(Verdict::uniform(holds));
    }
    let p1 = eq(p, 1.0);
    let d = delta;
    Ok(match id {
        H0 => {
            let xi = aux.require_xi(id)?;
            let hi = (xi + 1.0) * p - 1.0;
            let xi_m1 = eq(xi, -1.0);
            Verdict::new(lt(d, hi), if p1 && !xi_m1 { le(d, hi) } else { lt(d, hi) }, if xi_m1 { lt(d, hi) } else { le(d, hi) })
        }
        Hinf => {
            let xi = aux.require_xi(id)?;
            let lo = -xi * p - 1.0;
            let xi_0 = eq(xi, 0.0);
            Verdict::new(lt(lo, d), if p1 && !xi_0 { le(lo, d) } else { lt(lo, d) }, if xi_0 { lt(lo, d) } else { le(lo, d) })
        }
        Hlog0 => Verdict::uniform(lt(d, 2.0 * p - 1.0)),
        HlogInf => Verdict::uniform(lt(p - 1.0, d)),
        MaxWcls | Gcls => strip(p1, -1.0, (2.0 * nu + 2.0) * p - 1.0, d, false, false),
        MaxWexo | PoissonExo => strip(p1, 2.0 * nu * p - 1.0, 2.0 * p - 1.0, d, true, true),
        Gexo => {
            let lo = 2.0 * nu * p - 1.0;
            let hi = 2.0 * p - 1.0;
            let mut v = strip(p1, lo, hi, d, p1, true);
            if !p1 && eq(d, lo) {
                v.weak = Tri::Open;
            }
            v
        }
        Rcls => strip(p1, -1.0 - p, (2.0 * nu + 2.0) * p - 1.0, d, p1, true),
        RclsStar => strip(p1, -1.0, (2.0 * nu + 3.0) * p - 1.0, d, false, false),
        Rexo => {
            let half = eq(nu, -0.5);
            strip(p1, (2.0 * nu + 1.0) * p - 1.0, 2.0 * p - 1.0, d, p1 && !half, !half)
        }
        RexoStar => {
            let (lo, hi) = (2.0 * nu * p - 1.0, p - 1.0);
            strip(p1, lo, hi, d, p1, true)
        }
        Rexob => {
            let half = eq(nu, 0.5);
            let (lo, hi) = ((2.0 * nu - 1.0) * p - 1.0, 2.0 * p - 1.0);
            Verdict::new(
                !p1 && within(lo, false, d, hi, false),
                within(lo, p1 && !half, d, hi, p1 && !half),
                within(lo, !half, d, hi, !half),
            )
        }
        RexobStar => {
            let half = eq(nu, 0.5);
            strip(p1, 2.0 * nu * p - 1.0, 3.0 * p - 1.0, d, p1 && !half, !half)
        }
        PotCls | PotExo => potential(id, nu, p, d, aux)?,
    })
}

/// Two-weight `L^p(x^{Ap} d eta_nu) -> L^q(x^{-Bq} d eta_nu)` boundedness.
///
/// The source weight is fixed by `delta = A p + 2 nu + 1`; the target exponent `B`
/// is the one allowed by scaling, so only the remaining conditions are tested.
/// Only strong type is characterized; weak and restricted weak entries are open.
fn potential(id: TheoremId, nu: f64, p: f64, delta: f64, aux: &Aux) -> Result<Verdict> {
    let sigma = aux.require_sigma(id)?;
    let q = aux.q.unwrap_or(p);
    let ip = 1.0 / p;
    let iq = if q.is_infinite() { 0.0 } else { 1.0 / q };
    let a = (delta - 2.0 * nu - 1.0) / p;
    let b = 2.0 * sigma + (2.0 * nu + 2.0) * (iq - ip) - a;
    let shift = if id == TheoremId::PotExo { 2.0 * nu } else { 0.0 };
    let pq = eq(p, 1.0) && q.is_infinite();
    let cond_a = le(p, q) || q.is_infinite();
    let c_bound = (2.0 * nu + 2.0) * (1.0 - ip) - shift;
    let cond_c = if pq { le(a, c_bound) } else { lt(a, c_bound) };
    let d_bound = (2.0 * nu + 2.0) * iq - shift;
    let cond_d = if pq { le(b, d_bound) } else { lt(b, d_bound) };
    let cond_e = if eq(p, 1.0) || q.is_infinite() { lt(-2.0 * sigma, iq - ip) } else { le(-2.0 * sigma, iq - ip) };
    Ok(Verdict { strong: Tri::from_bool(cond_a && cond_c && cond_d && cond_e), weak: Tri::Open, rwt: Tri::Open })
}
