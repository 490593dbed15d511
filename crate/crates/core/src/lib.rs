//! Attributed social network toolkit.
//!
//! Six growth/density models generate two-class attributed graphs together
//! with a [`GrowthTrace`] of every edge event. The trace makes exact
//! sequential likelihoods possible, which [`inference`] uses for grid
//! maximum-likelihood fitting and model selection (AIC, BIC, likelihood-ratio
//! tests, Bayes factors). The [`ranking`], [`sampling`] and [`spreading`]
//! modules run minority-visibility, sampling-bias and contagion experiments
//! on the generated graphs. [`io`] holds the plain-text file formats.

pub mod error;
pub mod generators;
pub mod graph;
pub mod inference;
pub mod io;
pub mod ranking;
pub mod rng;
pub mod sampling;
pub mod spreading;
pub mod stats;

pub use error::{Error, Result};
pub use generators::{generate, EventKind, GenParams, GrowthTrace, Model, TraceEvent};
pub use graph::{assign_classes, AttributedGraph, Class, Degrees, MixingMatrix};
pub use rng::Rng;
