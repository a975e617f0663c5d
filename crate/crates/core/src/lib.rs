//! Exact first and second moments of monochromatic and bichromatic edge
//! counts in graphs colored uniformly at random with prescribed class sizes.
//!
//! The crate is organised bottom-up:
//!
//! - [`symfun`]: falling factorials, elementary symmetric polynomials, power sums
//! - [`graph`]: graphs, degree invariants (Σ₂, ζ², wedges), generators, edge-list files
//! - [`coloring`]: compositions, uniform sampling, edge counting, event probabilities
//! - [`moments`]: closed-form means and variances, a(c), b(c), ρ, Paley–Zygmund bound
//! - [`oracle`]: exhaustive enumeration of colorings as ground truth
//! - [`randgraph`]: random graph models and the E[Σ₂]/[E m]² ratio criterion
//! - [`experiments`]: regime sweeps, Monte Carlo comparisons and report emission
//! - [`cli`]: the `chromstat` command line

pub mod cli;
pub mod coloring;
pub mod exact;
pub mod experiments;
pub mod graph;
pub mod moments;
pub mod oracle;
pub mod randgraph;
pub mod seed;
pub mod stats;
pub mod symfun;

pub use coloring::{ClassSpec, ColorAssignment, Composition, EdgeCounts};
pub use exact::Rational;
pub use graph::{Family, Graph, GraphStats};
pub use moments::{full_report, MomentReport};
pub use oracle::{enumerate, exact_moments, ExactDistribution};
