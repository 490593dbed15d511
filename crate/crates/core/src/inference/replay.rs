use crate::error::{Error, Result};
use crate::generators::{
    target_weights_directed, target_weights_undirected, AttachMode, EventKind, GrowthTrace, Model,
};
use crate::graph::{AttributedGraph, Class, MixingMatrix};

/// Parameter point at which a trace is scored. `h` is the symmetric
/// homophily and `p_tc` the triadic-closure probability; each is ignored by
/// models that do not use it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub model: Model,
    pub h: f64,
    pub p_tc: f64,
}

impl Candidate {
    pub fn new(model: Model, h: f64, p_tc: f64) -> Self {
        Candidate { model, h, p_tc }
    }

    pub fn pa() -> Self {
        Candidate::new(Model::Pa, 0.5, 0.0)
    }

    fn check(&self, trace: &GrowthTrace) -> Result<()> {
        if self.model.is_directed() != trace.directed {
            return Err(Error::invalid(format!(
                "model {} cannot score a {} trace",
                self.model,
                if trace.directed {
                    "directed"
                } else {
                    "undirected"
                }
            )));
        }
        if !(0.0..=1.0).contains(&self.h) || !(0.0..=1.0).contains(&self.p_tc) {
            return Err(Error::invalid("candidate parameters outside [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLik {
    /// Natural-log likelihood of the whole trace.
    pub log_lik: f64,
    /// Parameter-informative events (everything but fallback picks).
    pub n_events: usize,
    pub n_fallback: usize,
}

/// Sufficient statistics of one undirected pick.
#[derive(Clone, Copy, Debug)]
pub(crate) struct UndirectedPick {
    same_class: bool,
    degree: u64,
    /// Eligible degree mass in the newcomer's class and in the other class.
    mass_same: u64,
    mass_cross: u64,
    /// `None` for the first pick of an arrival (no closure branch).
    /// Otherwise the triadic candidate set size and target membership.
    triadic: Option<(usize, bool)>,
}

/// Sufficient statistics of one directed pick.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DirectedPick {
    same_class: bool,
    in_degree: u64,
    /// Eligible `indeg + 1` mass per (same, cross) class.
    pref_same: u64,
    pref_cross: u64,
    /// Eligible node counts per (same, cross) class.
    count_same: u64,
    count_cross: u64,
}

/// Per-event sufficient statistics extracted by one replay pass.
#[derive(Clone, Debug)]
pub struct ReplayStats {
    pub(crate) directed: bool,
    pub(crate) undirected: Vec<UndirectedPick>,
    pub(crate) directed_picks: Vec<DirectedPick>,
    /// Sum of `ln(1 / |eligible|)` over fallback events.
    pub(crate) fallback_log_lik: f64,
    pub(crate) n_fallback: usize,
}

#[inline]
fn affinity(h: f64, same: bool) -> f64 {
    if same {
        h
    } else {
        1.0 - h
    }
}

#[inline]
fn ln_ratio(num: f64, den: f64) -> f64 {
    if num <= 0.0 {
        f64::NEG_INFINITY
    } else {
        (num / den).ln()
    }
}

impl UndirectedPick {
    #[inline]
    fn pah_prob(&self, h: f64) -> f64 {
        let num = affinity(h, self.same_class) * self.degree as f64;
        if num <= 0.0 {
            return 0.0;
        }
        num / (h * self.mass_same as f64 + (1.0 - h) * self.mass_cross as f64)
    }

    #[inline]
    fn pa_log_prob(&self) -> f64 {
        ln_ratio(
            self.degree as f64,
            (self.mass_same + self.mass_cross) as f64,
        )
    }
}

impl DirectedPick {
    #[inline]
    fn log_prob(&self, model: Model, h: f64) -> f64 {
        let w = affinity(h, self.same_class);
        let pref = self.in_degree as f64 + 1.0;
        match model {
            Model::Dpa => ln_ratio(pref, (self.pref_same + self.pref_cross) as f64),
            Model::Dh => ln_ratio(
                w,
                h * self.count_same as f64 + (1.0 - h) * self.count_cross as f64,
            ),
            _ => ln_ratio(
                w * pref,
                h * self.pref_same as f64 + (1.0 - h) * self.pref_cross as f64,
            ),
        }
    }
}

/// Per-arrival triadic candidate bookkeeping: nodes adjacent to chosen
/// targets, minus the newcomer and the chosen targets themselves.
struct TriadicSet {
    epoch: Vec<usize>,
    state: Vec<u8>,
    size: usize,
}

const IN_SET: u8 = 1;
const CHOSEN: u8 = 2;

impl TriadicSet {
    fn new(n: usize) -> Self {
        TriadicSet {
            epoch: vec![usize::MAX; n],
            state: vec![0; n],
            size: 0,
        }
    }

    fn state(&self, v: usize, newcomer: usize) -> u8 {
        if self.epoch[v] == newcomer {
            self.state[v]
        } else {
            0
        }
    }

    fn set(&mut self, v: usize, newcomer: usize, s: u8) {
        self.epoch[v] = newcomer;
        self.state[v] = s;
    }

    fn contains(&self, v: usize, newcomer: usize) -> bool {
        self.state(v, newcomer) == IN_SET
    }

    /// Marks `target` chosen and adds its neighbors as candidates. Must be
    /// called after the edge to the newcomer exists.
    fn choose(&mut self, g: &AttributedGraph, newcomer: usize, target: usize) {
        if self.state(target, newcomer) == IN_SET {
            self.size -= 1;
        }
        self.set(target, newcomer, CHOSEN);
        for &w in g.neighbors(target) {
            if w != newcomer && self.state(w, newcomer) == 0 {
                self.set(w, newcomer, IN_SET);
                self.size += 1;
            }
        }
    }
}

impl ReplayStats {
    /// Replays `trace` over `labels`, recording each event's statistics.
    pub fn extract(trace: &GrowthTrace, labels: &[Class]) -> Result<Self> {
        if labels.len() != trace.n {
            return Err(Error::invalid(format!(
                "trace has n = {} but {} labels were given",
                trace.n,
                labels.len()
            )));
        }
        trace.validate()?;
        if trace.directed {
            Self::extract_directed(trace, labels)
        } else {
            Self::extract_undirected(trace, labels)
        }
    }

    fn extract_undirected(trace: &GrowthTrace, labels: &[Class]) -> Result<Self> {
        let mut g = AttributedGraph::new(false, labels.to_vec())?;
        let mut class_mass = [0u64; 2];
        fn connect(
            g: &mut AttributedGraph,
            class_mass: &mut [u64; 2],
            u: usize,
            v: usize,
        ) -> Result<()> {
            if !g.add_edge(u, v)? {
                return Err(Error::invalid(format!("repeated edge ({u}, {v}) in trace")));
            }
            class_mass[g.label(u).index()] += 1;
            class_mass[g.label(v).index()] += 1;
            Ok(())
        }
        for (u, v) in trace.seed_edges() {
            connect(&mut g, &mut class_mass, u, v)?;
        }
        let mut stats = ReplayStats {
            directed: false,
            undirected: Vec::with_capacity(trace.events.len()),
            directed_picks: Vec::new(),
            fallback_log_lik: 0.0,
            n_fallback: 0,
        };
        let mut triadic = TriadicSet::new(trace.n);
        let mut chosen: Vec<usize> = Vec::new();
        let mut current = usize::MAX;
        for e in &trace.events {
            let (v, t) = (e.source, e.target);
            if v != current {
                current = v;
                chosen.clear();
                triadic.size = 0;
            }
            if e.kind == EventKind::FallbackUniform {
                let eligible = v - chosen.len();
                stats.fallback_log_lik -= (eligible as f64).ln();
                stats.n_fallback += 1;
            } else {
                let cv = labels[v];
                let mut mass = class_mass;
                mass[cv.index()] -= g.degree(v) as u64;
                for &c in &chosen {
                    mass[labels[c].index()] -= g.degree(c) as u64;
                }
                let triadic_info = if chosen.is_empty() {
                    None
                } else {
                    Some((triadic.size, triadic.contains(t, v)))
                };
                stats.undirected.push(UndirectedPick {
                    same_class: labels[t] == cv,
                    degree: g.degree(t) as u64,
                    mass_same: mass[cv.index()],
                    mass_cross: mass[cv.other().index()],
                    triadic: triadic_info,
                });
            }
            connect(&mut g, &mut class_mass, v, t)?;
            chosen.push(t);
            triadic.choose(&g, v, t);
        }
        Ok(stats)
    }

    fn extract_directed(trace: &GrowthTrace, labels: &[Class]) -> Result<Self> {
        let mut g = AttributedGraph::new(true, labels.to_vec())?;
        let mut counts = [0u64; 2];
        for c in labels {
            counts[c.index()] += 1;
        }
        // indeg + 1 mass per class
        let mut pref = counts;
        let mut picks = Vec::with_capacity(trace.events.len());
        for e in &trace.events {
            let (s, t) = (e.source, e.target);
            let cs = labels[s];
            let mut p = pref;
            let mut c = counts;
            p[cs.index()] -= g.in_degree(s) as u64 + 1;
            c[cs.index()] -= 1;
            for &x in g.neighbors(s) {
                p[labels[x].index()] -= g.in_degree(x) as u64 + 1;
                c[labels[x].index()] -= 1;
            }
            let (same, cross) = (cs.index(), cs.other().index());
            picks.push(DirectedPick {
                same_class: labels[t] == cs,
                in_degree: g.in_degree(t) as u64,
                pref_same: p[same],
                pref_cross: p[cross],
                count_same: c[same],
                count_cross: c[cross],
            });
            if !g.add_edge(s, t)? {
                return Err(Error::invalid(format!("repeated edge ({s}, {t}) in trace")));
            }
            pref[labels[t].index()] += 1;
        }
        Ok(ReplayStats {
            directed: true,
            undirected: Vec::new(),
            directed_picks: picks,
            fallback_log_lik: 0.0,
            n_fallback: 0,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn n_events(&self) -> usize {
        if self.directed {
            self.directed_picks.len()
        } else {
            self.undirected.len()
        }
    }

    pub fn n_fallback(&self) -> usize {
        self.n_fallback
    }

    /// Log-likelihood at `candidate`. The first −∞ event short-circuits.
    pub fn log_lik(&self, candidate: &Candidate) -> f64 {
        let Candidate { model, h, p_tc } = *candidate;
        let mut total = self.fallback_log_lik;
        if self.directed {
            for pick in &self.directed_picks {
                total += pick.log_prob(model, h);
                if total == f64::NEG_INFINITY {
                    break;
                }
            }
            return total;
        }
        for pick in &self.undirected {
            total += match model {
                Model::Pa => pick.pa_log_prob(),
                Model::Pah => pick.pah_prob(h).ln(),
                _ => match pick.triadic {
                    Some((size, member)) if size > 0 => {
                        let tc = if member { 1.0 / size as f64 } else { 0.0 };
                        (p_tc * tc + (1.0 - p_tc) * pick.pah_prob(h)).ln()
                    }
                    _ => pick.pah_prob(h).ln(),
                },
            };
            if total == f64::NEG_INFINITY {
                break;
            }
        }
        total
    }

    /// `Σ ln P_pah(h)` over picks, plus the pieces of the triadic mixture
    /// that factor out of the `p_tc` loop.
    pub(crate) fn patch_row(&self, h: f64) -> PatchRow {
        let mut row = PatchRow {
            fixed: self.fallback_log_lik,
            n_outside: 0,
            members: Vec::new(),
        };
        for pick in &self.undirected {
            let b = pick.pah_prob(h);
            match pick.triadic {
                Some((size, member)) if size > 0 => {
                    if member {
                        row.members.push((1.0 / size as f64, b));
                    } else {
                        row.fixed += b.ln();
                        row.n_outside += 1;
                    }
                }
                _ => row.fixed += b.ln(),
            }
        }
        row
    }
}

/// PATCH log-likelihood at fixed `h`, as a function of `p_tc`:
/// `fixed + n_outside * ln(1 - p) + Σ ln(p * a + (1 - p) * b)`.
pub(crate) struct PatchRow {
    fixed: f64,
    n_outside: usize,
    members: Vec<(f64, f64)>,
}

impl PatchRow {
    pub(crate) fn at(&self, p: f64) -> f64 {
        let mut total = self.fixed;
        if self.n_outside > 0 {
            total += self.n_outside as f64 * (1.0 - p).ln();
        }
        for &(a, b) in &self.members {
            total += (p * a + (1.0 - p) * b).ln();
        }
        total
    }
}

/// Log-likelihood of `trace` under `candidate`.
pub fn replay_loglik(
    trace: &GrowthTrace,
    labels: &[Class],
    candidate: &Candidate,
) -> Result<LogLik> {
    candidate.check(trace)?;
    let stats = ReplayStats::extract(trace, labels)?;
    Ok(LogLik {
        log_lik: stats.log_lik(candidate),
        n_events: stats.n_events(),
        n_fallback: stats.n_fallback(),
    })
}

/// Full pick distribution of one event.
#[derive(Clone, Debug, PartialEq)]
pub struct EventProbabilities {
    pub eligible: Vec<usize>,
    pub probs: Vec<f64>,
    /// Position of the realized target in `eligible`.
    pub target_index: usize,
    pub fallback: bool,
    /// Total attachment weight was zero on a non-fallback event. `probs`
    /// then holds only the triadic share (PATCH) or all zeros.
    pub degenerate: bool,
}

impl EventProbabilities {
    pub fn target_prob(&self) -> f64 {
        self.probs[self.target_index]
    }
}

/// Explicit per-event probability vectors (O(n) per event). Meant for
/// instrumentation and invariant checks; [`replay_loglik`] is the fast path.
pub fn replay_probabilities(
    trace: &GrowthTrace,
    labels: &[Class],
    candidate: &Candidate,
) -> Result<Vec<EventProbabilities>> {
    candidate.check(trace)?;
    if labels.len() != trace.n {
        return Err(Error::invalid("label count does not match trace"));
    }
    trace.validate()?;
    let mixing = MixingMatrix::symmetric(candidate.h)?;
    let mut g = AttributedGraph::new(trace.directed, labels.to_vec())?;
    for (u, v) in trace.seed_edges() {
        g.add_edge(u, v)?;
    }
    let mut out = Vec::with_capacity(trace.events.len());
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = usize::MAX;
    for e in &trace.events {
        let (s, t) = (e.source, e.target);
        let (eligible, weights) = if trace.directed {
            target_weights_directed(&g, candidate.model, &mixing, s)?
        } else {
            if s != current {
                current = s;
                chosen.clear();
            }
            let eligible: Vec<usize> = (0..s).filter(|x| !chosen.contains(x)).collect();
            let mode = if candidate.model == Model::Pa {
                AttachMode::Pa
            } else {
                AttachMode::Pah
            };
            let w = target_weights_undirected(&g, labels[s], &eligible, &mixing, mode)?;
            (eligible, w)
        };
        let target_index = eligible
            .iter()
            .position(|&x| x == t)
            .ok_or_else(|| Error::invalid(format!("target {t} not eligible for source {s}")))?;
        let fallback = e.kind == EventKind::FallbackUniform;
        let degenerate = !fallback && weights.fallback;
        let probs = if fallback {
            vec![1.0 / eligible.len() as f64; eligible.len()]
        } else {
            let mut p = if degenerate {
                vec![0.0; eligible.len()]
            } else {
                weights.probabilities()
            };
            if candidate.model == Model::Patch && !chosen.is_empty() {
                let tc: Vec<bool> = eligible
                    .iter()
                    .map(|&x| chosen.iter().any(|&c| g.has_edge(c, x)))
                    .collect();
                let size = tc.iter().filter(|&&b| b).count();
                if size > 0 {
                    let share = 1.0 / size as f64;
                    for (pi, &in_tc) in p.iter_mut().zip(&tc) {
                        let a = if in_tc { share } else { 0.0 };
                        *pi = candidate.p_tc * a + (1.0 - candidate.p_tc) * *pi;
                    }
                }
            }
            p
        };
        out.push(EventProbabilities {
            eligible,
            probs,
            target_index,
            fallback,
            degenerate,
        });
        g.add_edge(s, t)?;
        if !trace.directed {
            chosen.push(t);
        }
    }
    Ok(out)
}
