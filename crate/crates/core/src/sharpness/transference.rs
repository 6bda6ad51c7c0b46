use super::theorems::{classify, Aux, Property, TheoremId, Tri};
use crate::error::{Error, Result};
use serde::Serialize;

/// Result of comparing an exotic predicate with its transferred classical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transference {
    pub exotic: TheoremId,
    pub classical: TheoremId,
    /// Exotic verdict at `(nu, p, delta)`.
    pub exo: Tri,
    /// Classical verdict at `(-nu, p, delta - 2 nu p)`.
    pub cls: Tri,
}

impl Transference {
    pub fn agrees(&self) -> bool {
        self.exo == self.cls
    }
}

/// The classical operator conjugate to an exotic one under `f -> x^{2nu} f`.
pub fn classical_partner(id: TheoremId) -> Result<TheoremId> {
    match id {
        TheoremId::MaxWexo => Ok(TheoremId::MaxWcls),
        TheoremId::Gexo => Ok(TheoremId::Gcls),
        TheoremId::PotExo => Ok(TheoremId::PotCls),
        _ => Err(Error::contract(format!("{id} has no transference partner"))),
    }
}

/// Strong type of `id` at `(nu, p, delta)` against its classical partner at
/// `(-nu, p, delta - 2 nu p)`. Only strong type with finite `p` transfers.
pub fn transference_check(id: TheoremId, property: Property, nu: f64, p: f64, delta: f64, aux: &Aux) -> Result<Transference> {
    if property != Property::Strong {
        return Err(Error::contract("transference only preserves strong type"));
    }
    if !p.is_finite() {
        return Err(Error::contract("transference needs finite p"));
    }
    let classical = classical_partner(id)?;
    let exo = classify(id, nu, p, delta, aux)?.strong;
    let cls = classify(classical, -nu, p, delta - 2.0 * nu * p, aux)?.strong;
    Ok(Transference { exotic: id, classical, exo, cls })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_strong_and_riesz() {
        assert!(transference_check(TheoremId::MaxWexo, Property::Weak, 0.5, 2.0, 0.0, &Aux::default()).is_err());
        assert!(transference_check(TheoremId::Rexo, Property::Strong, 0.25, 2.0, 0.0, &Aux::default()).is_err());
        assert!(transference_check(TheoremId::MaxWexo, Property::Strong, 0.5, f64::INFINITY, 0.0, &Aux::default()).is_err());
    }

    #[test]
    fn maximal_pair_agrees() {
        for nu in [-0.75, -0.3, 0.2, 0.9] {
            for p in [1.0, 1.5, 2.0, 4.0] {
                for k in -40..=40 {
                    let d = k as f64 * 0.25;
                    let t = transference_check(TheoremId::MaxWexo, Property::Strong, nu, p, d, &Aux::default()).unwrap();
                    assert!(t.agrees(), "nu={nu} p={p} delta={d}: {t:?}");
                }
            }
        }
    }
}
