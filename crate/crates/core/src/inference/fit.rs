use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{GrowthTrace, Model};
use crate::graph::Class;

use super::replay::{Candidate, ReplayStats};

/// Grid intervals per parameter: values `i / 100` for `i = 0..=100`.
pub const GRID_STEPS: usize = 100;

#[inline]
pub fn grid_value(i: usize) -> f64 {
    i as f64 / GRID_STEPS as f64
}

/// Log-likelihood over a model's parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub enum LogLikSurface {
    /// No free parameters.
    Point(f64),
    /// Indexed by `h` grid position.
    Line(Vec<f64>),
    /// Row-major `[h][p_tc]`.
    Plane(Vec<Vec<f64>>),
}

impl LogLikSurface {
    /// Grid argmax; ties resolve to the smaller `h`, then the smaller `p_tc`.
    pub fn argmax(&self) -> (Option<usize>, Option<usize>, f64) {
        match self {
            LogLikSurface::Point(v) => (None, None, *v),
            LogLikSurface::Line(vals) => {
                let (i, v) = first_max(vals.iter().copied());
                (Some(i), None, v)
            }
            LogLikSurface::Plane(rows) => {
                let mut best = (0, 0, f64::NEG_INFINITY);
                let mut found = false;
                for (i, row) in rows.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        if !found || v > best.2 {
                            best = (i, j, v);
                            found = true;
                        }
                    }
                }
                (Some(best.0), Some(best.1), best.2)
            }
        }
    }
}

fn first_max(vals: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in vals.enumerate() {
        if i == 0 || v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Evaluates `model` over its full grid. Grid points are independent and
/// computed in parallel; results come back in grid order.
pub fn log_lik_surface(stats: &ReplayStats, model: Model) -> Result<LogLikSurface> {
    if model.is_directed() != stats.is_directed() {
        return Err(Error::invalid(format!(
            "model {model} does not match the trace family"
        )));
    }
    let grid: Vec<f64> = (0..=GRID_STEPS).map(grid_value).collect();
    Ok(match model {
        Model::Pa | Model::Dpa => {
            LogLikSurface::Point(stats.log_lik(&Candidate::new(model, 0.5, 0.0)))
        }
        Model::Pah | Model::Dh | Model::Dpah => LogLikSurface::Line(
            grid.par_iter()
                .map(|&h| stats.log_lik(&Candidate::new(model, h, 0.0)))
                .collect(),
        ),
        Model::Patch => LogLikSurface::Plane(
            grid.par_iter()
                .map(|&h| {
                    let row = stats.patch_row(h);
                    grid.iter().map(|&p| row.at(p)).collect()
                })
                .collect(),
        ),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub model: Model,
    pub h_hat: Option<f64>,
    pub p_tc_hat: Option<f64>,
    /// Maximized natural-log likelihood.
    pub log_lik: f64,
    /// Free parameters.
    pub k: usize,
    /// Scored (non-fallback) pick events; the BIC sample size.
    pub n_events: usize,
    pub n_fallback: usize,
    pub aic: f64,
    pub bic: f64,
}

impl FitReport {
    pub fn new(
        model: Model,
        h_hat: Option<f64>,
        p_tc_hat: Option<f64>,
        log_lik: f64,
        n_events: usize,
        n_fallback: usize,
    ) -> Self {
        let k = free_parameters(model);
        FitReport {
            model,
            h_hat,
            p_tc_hat,
            log_lik,
            k,
            n_events,
            n_fallback,
            aic: 2.0 * k as f64 - 2.0 * log_lik,
            bic: k as f64 * (n_events as f64).ln() - 2.0 * log_lik,
        }
    }

    pub(crate) fn from_surface(
        model: Model,
        surface: &LogLikSurface,
        n_events: usize,
        n_fallback: usize,
    ) -> Self {
        let (hi, pi, ll) = surface.argmax();
        FitReport::new(
            model,
            hi.map(grid_value),
            pi.map(grid_value),
            ll,
            n_events,
            n_fallback,
        )
    }
}

pub(crate) fn free_parameters(model: Model) -> usize {
    match model {
        Model::Pa | Model::Dpa => 0,
        Model::Pah | Model::Dh | Model::Dpah => 1,
        Model::Patch => 2,
    }
}

/// Grid maximum-likelihood fit of `model` to a trace.
pub fn fit_model(trace: &GrowthTrace, labels: &[Class], model: Model) -> Result<FitReport> {
    let stats = ReplayStats::extract(trace, labels)?;
    fit_stats(&stats, model)
}

pub(crate) fn fit_stats(stats: &ReplayStats, model: Model) -> Result<FitReport> {
    if stats.n_events() == 0 {
        return Err(Error::invalid("trace has no scoreable events"));
    }
    let surface = log_lik_surface(stats, model)?;
    Ok(FitReport::from_surface(
        model,
        &surface,
        stats.n_events(),
        stats.n_fallback(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pa, gen_pah};
    use crate::graph::MixingMatrix;

    #[test]
    fn information_criteria_formulas() {
        let r = FitReport::new(Model::Pah, Some(0.5), None, -10.0, 100, 0);
        assert_eq!(r.k, 1);
        assert!((r.aic - 22.0).abs() < 1e-12);
        assert!((r.bic - 24.6052).abs() < 1e-4);
    }

    #[test]
    fn argmax_ties_go_to_smaller_values() {
        let s = LogLikSurface::Line(vec![-3.0, -1.0, -1.0, -2.0]);
        assert_eq!(s.argmax(), (Some(1), None, -1.0));
        let s = LogLikSurface::Plane(vec![vec![-5.0, -1.0], vec![-1.0, -1.0]]);
        assert_eq!(s.argmax(), (Some(0), Some(1), -1.0));
        let s = LogLikSurface::Line(vec![f64::NEG_INFINITY; 3]);
        assert_eq!(s.argmax().0, Some(0));
    }

    #[test]
    fn fit_needs_scoreable_events() {
        // m = 1, n = 2: the only event is a forced fallback
        let (g, t) = gen_pa(2, 1, 0).unwrap();
        assert!(fit_model(&t, g.labels(), Model::Pa).is_err());
    }

    #[test]
    fn nested_fits_are_monotone() {
        let (g, t) = gen_pah(500, 2, 0.3, MixingMatrix::symmetric(0.7).unwrap(), 2).unwrap();
        let pa = fit_model(&t, g.labels(), Model::Pa).unwrap();
        let pah = fit_model(&t, g.labels(), Model::Pah).unwrap();
        let patch = fit_model(&t, g.labels(), Model::Patch).unwrap();
        assert!(pah.log_lik >= pa.log_lik - 1e-9);
        assert!(patch.log_lik >= pah.log_lik - 1e-9);
        assert_eq!(patch.k, 2);
        assert!(pa.h_hat.is_none() && pah.p_tc_hat.is_none());
    }
}
