//! Growth-replay likelihoods, grid maximum-likelihood fitting and model
//! selection.
//!
//! Likelihoods are defined on a [`GrowthTrace`](crate::GrowthTrace): the
//! graph state before each event is rebuilt and the probability of the
//! realized target is accumulated. Replay first reduces every event to a few
//! sufficient statistics ([`ReplayStats`]), after which evaluating any
//! parameter value costs O(events) and the 101 × 101 grids are cheap.
//!
//! Only target choices are scored. Source choice in the directed family
//! depends on latent activities that no candidate model parameterizes, so it
//! cancels in every comparison.

mod fit;
mod mixing;
mod order;
mod replay;
mod select;

pub use fit::{fit_model, grid_value, log_lik_surface, FitReport, LogLikSurface, GRID_STEPS};
pub use mixing::{mixing_counts, MixingCounts};
pub use order::order_assumed_trace;
pub use replay::{
    replay_loglik, replay_probabilities, Candidate, EventProbabilities, LogLik, ReplayStats,
};
pub use select::{
    bayes_factor, chi_square_sf, log_marginal, lrt, select_model, Comparison, Criterion, LrtResult,
    SelectionTable,
};
