//! Boundedness regions in the `(p, delta)` plane.
//!
//! [`classify`] answers strong, weak and restricted weak type `(p, p)` on
//! `L^p(x^delta dx)` exactly. [`scan_region`] tabulates it, [`transference_check`]
//! compares exotic and classical strong-type regions, and [`probes`] corroborates
//! boundaries numerically with explicit test functions.

pub mod probes;
mod scan;
mod theorems;
mod transference;

pub use scan::{region_csv, scan_region, RegionCell, REGION_HEADER};
pub use theorems::{classify, Aux, Property, TheoremId, Tri, Verdict, BOUNDARY_EPS};
pub use transference::{classical_partner, transference_check, Transference};
