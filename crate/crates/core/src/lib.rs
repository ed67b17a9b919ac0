//! k-min-sum-radii clustering under mergeable constraints.
//!
//! The solver guesses a radius profile and, for every guess tuple, grows a
//! candidate cover of balls by repeated k-center completion. Each cover is
//! turned into a clustering by one of three assignment strategies, and the
//! cheapest feasible clustering wins. Brute-force oracles in [`oracle`] give
//! exact optima for small instances.

pub mod assign;
pub mod bench;
pub mod constraints;
pub mod gen;
pub mod instance;
pub mod kcenter;
pub mod oracle;
pub mod profiles;
pub mod search;

pub use assign::{CenterRule, Mode};
pub use constraints::{cluster_feasible, clustering_feasible, merge_clusters, ColorHistogram};
pub use instance::{Clustering, ConstraintSpec, Instance, InstanceError, Rational, SolutionFile, SolutionMeta};
pub use kcenter::{adjusted_distance, fft_completion, CompletionInput, CompletionOutput};
pub use oracle::{exact_completion, exact_matching, exact_msr, ExactSolution};
pub use profiles::{enumerate_profiles, RadiusProfile};
pub use search::{centers_and_radii, solve, CandidateCover, GuessTuple, SolveOptions, SolveReport};
