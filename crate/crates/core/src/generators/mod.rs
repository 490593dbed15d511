//! The six generative models and their growth traces.
//!
//! Undirected models (PA, PAH, PATCH) grow one node at a time from a seed
//! clique on the first `m` nodes; each arrival attaches `m` edges without
//! replacement. Directed models (DPA, DH, DPAH) fix all `n` nodes upfront
//! and place edges until a target density is reached, choosing sources by
//! activity and targets by in-degree and/or class affinity.
//!
//! Labels, activities and edge placement draw from three independent
//! sub-streams of the run seed, so a change in one mechanism does not shift
//! the random numbers another mechanism sees. In particular PAH at `h = 0.5`
//! consumes exactly the same draws as PA and produces the same trace.

mod activity;
mod directed;
mod trace;
mod undirected;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{assign_classes, AttributedGraph, MixingMatrix};
use crate::rng::{derive_seed, stream, Rng};

pub use activity::{pareto_inverse_cdf, sample_activity};
pub use directed::{directed_edge_target, target_weights_directed};
pub use trace::{EventKind, GrowthTrace, TraceEvent};
pub use undirected::{target_weights_undirected, AttachMode, TargetWeights};

/// Consecutive failed source draws after which the directed generator gives up.
pub const MAX_SOURCE_FAILURES: usize = 1000;

pub const DEFAULT_GAMMA_A: f64 = 2.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Pa,
    Pah,
    Patch,
    Dpa,
    Dh,
    Dpah,
}

impl Model {
    pub const UNDIRECTED: [Model; 3] = [Model::Pa, Model::Pah, Model::Patch];
    pub const DIRECTED: [Model; 3] = [Model::Dpa, Model::Dh, Model::Dpah];

    pub fn is_directed(self) -> bool {
        matches!(self, Model::Dpa | Model::Dh | Model::Dpah)
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Pa => "pa",
            Model::Pah => "pah",
            Model::Patch => "patch",
            Model::Dpa => "dpa",
            Model::Dh => "dh",
            Model::Dpah => "dpah",
        }
    }

    pub fn uses_homophily(self) -> bool {
        matches!(self, Model::Pah | Model::Patch | Model::Dh | Model::Dpah)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pa" => Ok(Model::Pa),
            "pah" => Ok(Model::Pah),
            "patch" => Ok(Model::Patch),
            "dpa" => Ok(Model::Dpa),
            "dh" => Ok(Model::Dh),
            "dpah" => Ok(Model::Dpah),
            other => Err(Error::invalid(format!("unknown model `{other}`"))),
        }
    }
}

/// Full parameter record for any of the six models. Fields a model does
/// not use are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    /// Edges per arriving node (undirected family).
    pub m: usize,
    /// Minority fraction in `[0, 0.5]`.
    pub f_m: f64,
    pub mixing: MixingMatrix,
    /// Triadic-closure probability (PATCH).
    pub p_tc: f64,
    /// Target edge density in `(0, 1]` (directed family).
    pub density: f64,
    /// Activity power-law exponent (directed family).
    pub gamma_a: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        GenParams {
            model,
            n,
            m: 2,
            f_m: 0.0,
            mixing: MixingMatrix::uniform(),
            p_tc: 0.0,
            density: 0.01,
            gamma_a: DEFAULT_GAMMA_A,
            seed,
        }
    }

    pub fn pa(n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            m,
            ..Self::new(Model::Pa, n, seed)
        }
    }

    pub fn pah(n: usize, m: usize, f_m: f64, mixing: MixingMatrix, seed: u64) -> Self {
        GenParams {
            m,
            f_m,
            mixing,
            ..Self::new(Model::Pah, n, seed)
        }
    }

    pub fn patch(n: usize, m: usize, f_m: f64, mixing: MixingMatrix, p_tc: f64, seed: u64) -> Self {
        GenParams {
            m,
            f_m,
            mixing,
            p_tc,
            ..Self::new(Model::Patch, n, seed)
        }
    }

    pub fn directed(
        model: Model,
        n: usize,
        density: f64,
        f_m: f64,
        mixing: MixingMatrix,
        gamma_a: f64,
        seed: u64,
    ) -> Self {
        GenParams {
            density,
            f_m,
            mixing,
            gamma_a,
            ..Self::new(model, n, seed)
        }
    }

    pub fn with_f_m(mut self, f_m: f64) -> Self {
        self.f_m = f_m;
        self
    }

    /// Edge count the directed family aims for: `round(d * n * (n - 1))`.
    pub fn target_edges(&self) -> usize {
        let pairs = self.n as f64 * (self.n as f64 - 1.0);
        (self.density * pairs).round_ties_even() as usize
    }

    /// Mixing matrix actually used by the attachment kernel.
    pub(crate) fn kernel_mixing(&self) -> MixingMatrix {
        if self.model.uses_homophily() {
            self.mixing
        } else {
            MixingMatrix::uniform()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.f_m) {
            return Err(Error::invalid(format!(
                "minority fraction {} outside [0, 0.5]",
                self.f_m
            )));
        }
        if self.model.is_directed() {
            if self.n < 2 {
                return Err(Error::invalid("directed models need n >= 2"));
            }
            if !(self.density > 0.0 && self.density <= 1.0) {
                return Err(Error::invalid(format!(
                    "density {} outside (0, 1]",
                    self.density
                )));
            }
            if self.target_edges() < 1 {
                return Err(Error::invalid(format!(
                    "density {} yields zero edges for n = {}",
                    self.density, self.n
                )));
            }
            if self.gamma_a.is_nan() || self.gamma_a <= 1.0 {
                return Err(Error::invalid(format!(
                    "activity exponent {} must exceed 1",
                    self.gamma_a
                )));
            }
        } else {
            if self.m < 1 || self.m >= self.n {
                return Err(Error::invalid(format!(
                    "need 1 <= m < n, got m = {}, n = {}",
                    self.m, self.n
                )));
            }
            if !(0.0..=1.0).contains(&self.p_tc) {
                return Err(Error::invalid(format!(
                    "triadic-closure probability {} outside [0, 1]",
                    self.p_tc
                )));
            }
        }
        Ok(())
    }
}

/// Runs the model named in `params`.
pub fn generate(params: &GenParams) -> Result<(AttributedGraph, GrowthTrace)> {
    params.validate()?;
    let mut label_rng = Rng::new(derive_seed(params.seed, stream::LABELS));
    let labels = assign_classes(params.n, params.f_m, &mut label_rng)?;
    let mut rng = Rng::new(derive_seed(params.seed, stream::GROWTH));
    if params.model.is_directed() {
        let mut act_rng = Rng::new(derive_seed(params.seed, stream::ACTIVITY));
        let activity = sample_activity(params.n, params.gamma_a, &mut act_rng)?;
        directed::grow(params, labels, &activity, &mut rng)
    } else {
        undirected::grow(params, labels, &mut rng)
    }
}

/// Plain preferential attachment; all nodes in the majority class.
pub fn gen_pa(n: usize, m: usize, seed: u64) -> Result<(AttributedGraph, GrowthTrace)> {
    generate(&GenParams::pa(n, m, seed))
}

pub fn gen_pah(
    n: usize,
    m: usize,
    f_m: f64,
    mixing: MixingMatrix,
    seed: u64,
) -> Result<(AttributedGraph, GrowthTrace)> {
    generate(&GenParams::pah(n, m, f_m, mixing, seed))
}

pub fn gen_patch(
    n: usize,
    m: usize,
    f_m: f64,
    mixing: MixingMatrix,
    p_tc: f64,
    seed: u64,
) -> Result<(AttributedGraph, GrowthTrace)> {
    generate(&GenParams::patch(n, m, f_m, mixing, p_tc, seed))
}

pub fn gen_directed(
    model: Model,
    n: usize,
    density: f64,
    f_m: f64,
    mixing: MixingMatrix,
    gamma_a: f64,
    seed: u64,
) -> Result<(AttributedGraph, GrowthTrace)> {
    if !model.is_directed() {
        return Err(Error::invalid(format!("{model} is not a directed model")));
    }
    generate(&GenParams::directed(
        model, n, density, f_m, mixing, gamma_a, seed,
    ))
}
