//! Exact combinatorial invariants of rational cuspidal plane curves.
//!
//! The crate is layered bottom-up:
//!
//! - [`chain`]: weighted linear chains, discriminants, inductance and adjoints.
//! - [`cusp`]: multiplicity sequences, proximity reconstruction and the
//!   minimal embedded resolution of a single cusp.
//! - [`lattice`]: the Picard lattice of the blown-up plane, twigs, barks and
//!   the Zariski decomposition of `K + D`.
//! - [`verifier`]: the built-in curve catalog and end-to-end reports.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod chain;
pub mod cusp;
pub mod lattice;
mod linalg;
pub mod rational;
pub mod selfcheck;
pub mod verdict;
pub mod verifier;

pub use chain::{Inductance, LinearChain};
pub use cusp::{CuspSpec, LocalResolution};
pub use lattice::{QDivisor, SurfaceModel, ZariskiResult};
pub use rational::Q;
pub use verdict::{Status, Verdict};
pub use verifier::{CurveSpec, Report};
