//! Exact and numerical verification tools for abelian scrolls in projective
//! space.
//!
//! * [`trunc_ring`]: the truncated cohomology ring of `A x P^(k-1)`.
//! * [`scroll_invariants`]: degree, normal Chern class and double point
//!   number of a scroll.
//! * [`theorem_verifier`]: exhaustive checks of the binomial inequality that
//!   bounds the irregularity of half-dimensional scrolls.
//! * [`theta_geometry`]: theta-function embeddings of elliptic curves and
//!   abelian surfaces with rank probes of the scroll construction.

pub mod par;
pub mod scroll_invariants;
pub mod theorem_verifier;
pub mod theta_geometry;
pub mod trunc_ring;

pub use par::Execution;
pub use scroll_invariants::{build_report, ScrollData, ScrollReport, Verdict};
pub use trunc_ring::{binomial, RingShape, TruncPoly};
