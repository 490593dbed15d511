use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::{GrowthTrace, Model};
use crate::graph::Class;

use super::fit::{grid_value, log_lik_surface, FitReport, LogLikSurface, GRID_STEPS};
use super::replay::ReplayStats;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrtResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Upper tail of chi-square(`df`) at `x`: `Q(df / 2, x / 2)`.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    statrs::function::gamma::gamma_ur(df as f64 / 2.0, x / 2.0)
}

fn is_nested(small: Model, big: Model) -> bool {
    matches!(
        (small, big),
        (Model::Pa, Model::Pah)
            | (Model::Pah, Model::Patch)
            | (Model::Pa, Model::Patch)
            | (Model::Dpa, Model::Dpah)
    )
}

/// Likelihood-ratio test of `nested` against the larger model `full`.
pub fn lrt(nested: &FitReport, full: &FitReport) -> Result<LrtResult> {
    if !is_nested(nested.model, full.model) {
        return Err(Error::invalid(format!(
            "{} is not nested in {}",
            nested.model, full.model
        )));
    }
    let raw = 2.0 * (full.log_lik - nested.log_lik);
    let statistic = if raw.is_nan() { 0.0 } else { raw.max(0.0) };
    let df = full.k - nested.k;
    Ok(LrtResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
    })
}

/// Natural-log marginal likelihood under uniform priors on the grid,
/// integrated with the trapezoidal rule in log space.
pub fn log_marginal(surface: &LogLikSurface) -> f64 {
    let step = grid_value(1);
    let weight = |i: usize| {
        if i == 0 || i == GRID_STEPS {
            0.5 * step
        } else {
            step
        }
    };
    let terms: Vec<(f64, f64)> = match surface {
        LogLikSurface::Point(v) => return *v,
        LogLikSurface::Line(vals) => vals
            .iter()
            .enumerate()
            .map(|(i, &v)| (weight(i), v))
            .collect(),
        LogLikSurface::Plane(rows) => rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (weight(i) * weight(j), v))
            })
            .collect(),
    };
    let max = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.iter().map(|&(w, v)| w * (v - max).exp()).sum();
    max + sum.ln()
}

/// `log10(Z_a / Z_b)` from grid-integrated marginal likelihoods.
pub fn bayes_factor(
    trace: &GrowthTrace,
    labels: &[Class],
    model_a: Model,
    model_b: Model,
) -> Result<f64> {
    let stats = ReplayStats::extract(trace, labels)?;
    let za = log_marginal(&log_lik_surface(&stats, model_a)?);
    let zb = log_marginal(&log_lik_surface(&stats, model_b)?);
    Ok(log10_ratio(za, zb))
}

fn log10_ratio(ln_a: f64, ln_b: f64) -> f64 {
    if ln_a == ln_b {
        0.0
    } else {
        (ln_a - ln_b) / std::f64::consts::LN_10
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Criterion {
    Aic,
    #[default]
    Bic,
    LogLik,
}

impl Criterion {
    fn score(self, r: &FitReport) -> f64 {
        match self {
            Criterion::Aic => r.aic,
            Criterion::Bic => r.bic,
            Criterion::LogLik => -r.log_lik,
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "bic" => Ok(Criterion::Bic),
            "loglik" | "logl" => Ok(Criterion::LogLik),
            other => Err(Error::invalid(format!("unknown criterion `{other}`"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Aic => "aic",
            Criterion::Bic => "bic",
            Criterion::LogLik => "loglik",
        })
    }
}

/// Pairwise comparison of two candidates (in candidate order).
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub model_a: Model,
    pub model_b: Model,
    pub log10_bayes_factor: f64,
    /// Present when one model is nested in the other.
    pub lrt: Option<LrtResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionTable {
    pub criterion: Criterion,
    /// Best first.
    pub reports: Vec<FitReport>,
    pub comparisons: Vec<Comparison>,
}

impl SelectionTable {
    pub fn winner(&self) -> Model {
        self.reports[0].model
    }

    pub fn comparison(&self, a: Model, b: Model) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .find(|c| (c.model_a, c.model_b) == (a, b) || (c.model_a, c.model_b) == (b, a))
    }
}

/// Fits every candidate, compares all pairs and ranks by `criterion`.
pub fn select_model(
    trace: &GrowthTrace,
    labels: &[Class],
    candidates: &[Model],
    criterion: Criterion,
) -> Result<SelectionTable> {
    let Some(&first) = candidates.first() else {
        return Err(Error::invalid("no candidate models"));
    };
    if candidates
        .iter()
        .any(|m| m.is_directed() != first.is_directed())
    {
        return Err(Error::invalid(
            "candidates mix directed and undirected models",
        ));
    }
    let mut unique = candidates.to_vec();
    unique.sort();
    unique.dedup();
    if unique.len() != candidates.len() {
        return Err(Error::invalid("duplicate candidate models"));
    }
    let stats = ReplayStats::extract(trace, labels)?;
    if stats.n_events() == 0 {
        return Err(Error::invalid("trace has no scoreable events"));
    }
    let mut fitted = Vec::with_capacity(candidates.len());
    for &model in candidates {
        let surface = log_lik_surface(&stats, model)?;
        let report = FitReport::from_surface(model, &surface, stats.n_events(), stats.n_fallback());
        fitted.push((report, log_marginal(&surface)));
    }
    let mut comparisons = Vec::new();
    for i in 0..fitted.len() {
        for j in i + 1..fitted.len() {
            let (a, za) = &fitted[i];
            let (b, zb) = &fitted[j];
            let lrt = if is_nested(a.model, b.model) {
                Some(lrt(a, b)?)
            } else if is_nested(b.model, a.model) {
                Some(lrt(b, a)?)
            } else {
                None
            };
            comparisons.push(Comparison {
                model_a: a.model,
                model_b: b.model,
                log10_bayes_factor: log10_ratio(*za, *zb),
                lrt,
            });
        }
    }
    let mut reports: Vec<FitReport> = fitted.into_iter().map(|(r, _)| r).collect();
    reports.sort_by(|x, y| {
        criterion
            .score(x)
            .partial_cmp(&criterion.score(y))
            .unwrap_or(Ordering::Equal)
    });
    Ok(SelectionTable {
        criterion,
        reports,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pa, gen_pah};
    use crate::graph::MixingMatrix;

    fn report(model: Model, ll: f64) -> FitReport {
        FitReport::new(model, None, None, ll, 100, 0)
    }

    #[test]
    fn lrt_examples() {
        let r = lrt(&report(Model::Pa, -12.0), &report(Model::Pah, -10.0)).unwrap();
        assert_eq!((r.statistic, r.df), (4.0, 1));
        assert!((r.p_value - 0.045500263896).abs() < 1e-9);
        let r = lrt(&report(Model::Pa, -10.0), &report(Model::Pah, -10.0)).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let r = lrt(&report(Model::Pa, -10.0), &report(Model::Patch, -10.0)).unwrap();
        assert_eq!((r.df, r.p_value), (2, 1.0));
        // a worse full model clamps to zero
        let r = lrt(&report(Model::Pa, -10.0), &report(Model::Pah, -11.0)).unwrap();
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn non_nested_pairs_are_rejected() {
        assert!(lrt(&report(Model::Dh, -1.0), &report(Model::Dpah, -1.0)).is_err());
        assert!(lrt(&report(Model::Pah, -1.0), &report(Model::Pa, -1.0)).is_err());
    }

    #[test]
    fn chi_square_reference_values() {
        // scipy.stats.chi2.sf
        assert!((chi_square_sf(3.841458820694124, 1) - 0.05).abs() < 1e-12);
        assert!((chi_square_sf(5.991464547107979, 2) - 0.05).abs() < 1e-12);
        assert!((chi_square_sf(6.634896601021213, 1) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn marginal_of_flat_surface_is_its_value() {
        let s = LogLikSurface::Line(vec![-7.0; GRID_STEPS + 1]);
        assert!((log_marginal(&s) + 7.0).abs() < 1e-12);
        let s = LogLikSurface::Plane(vec![vec![-3.0; GRID_STEPS + 1]; GRID_STEPS + 1]);
        assert!((log_marginal(&s) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn model_against_itself_is_even() {
        let (g, t) = gen_pa(200, 2, 1).unwrap();
        assert_eq!(
            bayes_factor(&t, g.labels(), Model::Pah, Model::Pah).unwrap(),
            0.0
        );
    }

    #[test]
    fn single_candidate_table() {
        let (g, t) = gen_pa(200, 2, 1).unwrap();
        let table = select_model(&t, g.labels(), &[Model::Pa], Criterion::Bic).unwrap();
        assert_eq!(table.reports.len(), 1);
        assert!(table.comparisons.is_empty());
    }

    #[test]
    fn mixed_or_empty_candidates_fail() {
        let (g, t) = gen_pa(50, 2, 1).unwrap();
        assert!(select_model(&t, g.labels(), &[Model::Pa, Model::Dpa], Criterion::Bic).is_err());
        assert!(select_model(&t, g.labels(), &[], Criterion::Bic).is_err());
        assert!(select_model(&t, g.labels(), &[Model::Pa, Model::Pa], Criterion::Bic).is_err());
    }

    #[test]
    fn homophilic_trace_prefers_pah() {
        let (g, t) = gen_pah(1500, 2, 0.5, MixingMatrix::symmetric(0.8).unwrap(), 4).unwrap();
        let table = select_model(&t, g.labels(), &[Model::Pa, Model::Pah], Criterion::Bic).unwrap();
        assert_eq!(table.winner(), Model::Pah);
        let cmp = table.comparison(Model::Pa, Model::Pah).unwrap();
        assert!(cmp.lrt.unwrap().p_value < 0.01);
        assert!(cmp.log10_bayes_factor < -1.0);
    }
}
