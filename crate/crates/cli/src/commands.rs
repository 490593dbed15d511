use std::fmt::{Display, Write as _};
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;

use socnet::generators::{self, GenParams, Model};
use socnet::graph::{AttributedGraph, MixingMatrix};
use socnet::inference::{order_assumed_trace, select_model, Criterion, FitReport};
use socnet::io::{self, parse_list, parse_range};
use socnet::ranking::{rank_report, Metric};
use socnet::rng::{derive_seed, Rng};
use socnet::sampling::{benchmark, Strategy};
use socnet::spreading::{cascade, equality_report, seeding, threshold_cascade, Seeding};

use crate::settings::Settings;
use crate::CliError;

const NETWORK: &str = "network";

#[derive(Args)]
pub struct Common {
    /// key=value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

fn flag(b: bool) -> Option<String> {
    b.then(|| "true".to_owned())
}

fn na<T: Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_owned(), |x| x.to_string())
}

fn list<T>(text: &str, item: impl FnMut(&str) -> socnet::Result<T>) -> Result<Vec<T>, CliError>
where
    T: PartialEq,
{
    parse_list(text, item).map_err(|e| CliError::Usage(e.to_string()))
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// `h` for a symmetric matrix, or all four `h00..h11` entries.
fn mixing(s: &mut Settings) -> Result<MixingMatrix, CliError> {
    let entries: Vec<Option<f64>> = ["h00", "h01", "h10", "h11"]
        .iter()
        .map(|k| s.opt::<f64>(k))
        .collect::<Result<_, _>>()?;
    let given = entries.iter().filter(|e| e.is_some()).count();
    match (given, s.opt::<f64>("h")?) {
        (0, h) => {
            let h = match h {
                Some(h) => h,
                None => s.or("h", 0.5)?,
            };
            Ok(MixingMatrix::symmetric(h)?)
        }
        (4, None) => {
            let e: Vec<f64> = entries.into_iter().flatten().collect();
            Ok(MixingMatrix::new([[e[0], e[1]], [e[2], e[3]]])?)
        }
        (4, Some(_)) => Err(usage("give either h or h00..h11, not both")),
        _ => Err(usage("a mixing matrix needs all of h00, h01, h10, h11")),
    }
}

#[derive(Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    /// pa, pah, patch, dpa, dh or dpah.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Edges per arriving node (undirected models, default 2).
    #[arg(long)]
    m: Option<String>,
    /// Minority fraction (default 0.2).
    #[arg(long = "fm")]
    f_m: Option<String>,
    /// Symmetric homophily (default 0.5).
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    h00: Option<String>,
    #[arg(long)]
    h01: Option<String>,
    #[arg(long)]
    h10: Option<String>,
    #[arg(long)]
    h11: Option<String>,
    /// Triadic-closure probability (patch).
    #[arg(long = "ptc")]
    p_tc: Option<String>,
    /// Edge density (directed models, default 0.01).
    #[arg(long)]
    d: Option<String>,
    /// Activity exponent (directed models, default 2.5).
    #[arg(long = "gamma-a")]
    gamma_a: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

fn gen_params(s: &mut Settings) -> Result<GenParams, CliError> {
    let model: Model = s.req("model")?;
    let n = s.req("n")?;
    let seed = s.or("seed", 0u64)?;
    let mut p = GenParams::new(model, n, seed);
    p.f_m = s.or("f_m", 0.2)?;
    if model.is_directed() {
        p.density = s.or("d", p.density)?;
        p.gamma_a = s.or("gamma_a", p.gamma_a)?;
    } else {
        p.m = s.or("m", p.m)?;
    }
    if model.uses_homophily() {
        p.mixing = mixing(s)?;
    }
    if model == Model::Patch {
        p.p_tc = s.req("p_tc")?;
    }
    p.validate()?;
    Ok(p)
}

pub fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let keys = [
        "model", "n", "m", "f_m", "h", "h00", "h01", "h10", "h11", "p_tc", "d", "gamma_a", "seed",
    ];
    let flags = vec![
        ("model", a.model),
        ("n", a.n),
        ("m", a.m),
        ("f_m", a.f_m),
        ("h", a.h),
        ("h00", a.h00),
        ("h01", a.h01),
        ("h10", a.h10),
        ("h11", a.h11),
        ("p_tc", a.p_tc),
        ("d", a.d),
        ("gamma_a", a.gamma_a),
        ("seed", a.seed),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let params = gen_params(&mut s)?;
    s.finish()?;
    let (g, trace) = generators::generate(&params)?;
    io::write_network(&g, &s.out_dir().join(NETWORK))?;
    io::write_trace(&trace, &s.out_dir().join("trace.csv"))?;
    Ok(())
}

/// Network input shared by the analysis commands.
#[derive(Args)]
pub struct InputArgs {
    /// Network file prefix (reads PREFIX.nodes.csv and PREFIX.edges.csv).
    #[arg(long)]
    input: Option<String>,
    /// Treat edges as directed.
    #[arg(long)]
    directed: bool,
}

const INPUT_KEYS: [&str; 2] = ["input", "directed"];

fn read_input(s: &mut Settings) -> Result<AttributedGraph, CliError> {
    let input: String = s.req("input")?;
    let directed = s.or("directed", false)?;
    Ok(io::read_network(Path::new(&input), directed)?)
}

#[derive(Args)]
pub struct FitArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// Growth trace file; without it an arrival order is assumed.
    #[arg(long)]
    trace: Option<String>,
    /// Comma-separated candidates (default: every model of the family).
    #[arg(long)]
    models: Option<String>,
    /// bic, aic or loglik.
    #[arg(long)]
    criterion: Option<String>,
    /// Seed for the assumed edge order of directed networks.
    #[arg(long)]
    seed: Option<String>,
}

pub fn fit(a: FitArgs, ranked: bool) -> Result<(), CliError> {
    let keys = [
        INPUT_KEYS[0],
        INPUT_KEYS[1],
        "trace",
        "models",
        "criterion",
        "seed",
    ];
    let flags = vec![
        ("input", a.input.input),
        ("directed", flag(a.input.directed)),
        ("trace", a.trace),
        ("models", a.models),
        ("criterion", a.criterion),
        ("seed", a.seed),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let input: String = s.req("input")?;
    let directed = s.or("directed", false)?;
    let trace_path: Option<String> = s.opt("trace")?;
    let family: &[Model] = if directed {
        &Model::DIRECTED
    } else {
        &Model::UNDIRECTED
    };
    let default_models = family
        .iter()
        .map(|m| m.name())
        .collect::<Vec<_>>()
        .join(",");
    let models = list(&s.or("models", default_models)?, str::parse::<Model>)?;
    let criterion: Criterion = s.or("criterion", Criterion::Bic)?;
    let seed = if trace_path.is_none() && directed {
        s.or("seed", 0u64)?
    } else {
        0
    };
    s.finish()?;

    let g = io::read_network(Path::new(&input), directed)?;
    let order_assumed = trace_path.is_none();
    let trace = match &trace_path {
        Some(p) => {
            let t = io::read_trace(Path::new(p), directed, g.node_count())?;
            if t.replay(g.labels())? != g {
                return Err(CliError::Runtime(format!(
                    "trace {p} does not reproduce network {input}"
                )));
            }
            t
        }
        None => order_assumed_trace(&g, seed),
    };
    let table = select_model(&trace, g.labels(), &models, criterion)?;
    let mut reports: Vec<&FitReport> = table.reports.iter().collect();
    if !ranked {
        reports.sort_by_key(|r| models.iter().position(|&m| m == r.model));
    }
    let mut out = String::from("model,h_hat,ptc_hat,logL,k,n_events,AIC,BIC,order_assumed\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            na(r.h_hat),
            na(r.p_tc_hat),
            r.log_lik,
            r.k,
            r.n_events,
            r.aic,
            r.bic,
            order_assumed
        );
    }
    s.write("report.csv", &out)?;
    let mut cmp = String::from("model_a,model_b,log10_bf,lrt_statistic,lrt_df,lrt_p_value\n");
    for c in &table.comparisons {
        let _ = writeln!(
            cmp,
            "{},{},{},{},{},{}",
            c.model_a,
            c.model_b,
            c.log10_bayes_factor,
            na(c.lrt.map(|l| l.statistic)),
            na(c.lrt.map(|l| l.df)),
            na(c.lrt.map(|l| format!("{:e}", l.p_value)))
        );
    }
    s.write("comparisons.csv", &cmp)
}

#[derive(Args)]
pub struct RankArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// degree, indegree or pagerank.
    #[arg(long)]
    metric: Option<String>,
}

pub fn rank(a: RankArgs) -> Result<(), CliError> {
    let keys = [INPUT_KEYS[0], INPUT_KEYS[1], "metric"];
    let flags = vec![
        ("input", a.input.input),
        ("directed", flag(a.input.directed)),
        ("metric", a.metric),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let metric: Metric = s.or("metric", Metric::Degree)?;
    let g = read_input(&mut s)?;
    if metric == Metric::InDegree && !g.is_directed() {
        return Err(usage(
            "metric indegree needs a directed network (pass --directed)",
        ));
    }
    s.finish()?;
    let report = rank_report(&g, metric)?;
    let mut out = String::from("k_percent,minority_fraction\n");
    for (k, f) in &report.curve.points {
        let _ = writeln!(out, "{k},{f}");
    }
    s.write("visibility.csv", &out)?;
    s.write(
        "rank_summary.csv",
        &format!(
            "metric,f_m,gini,ME\n{},{},{},{}\n",
            metric, report.curve.f_m, report.gini, report.inequity
        ),
    )
}

#[derive(Args)]
pub struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated strategies (default: all five).
    #[arg(long)]
    strategies: Option<String>,
    /// Comma-separated sample sizes.
    #[arg(long)]
    budgets: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

pub fn sample(a: SampleArgs) -> Result<(), CliError> {
    let keys = [
        INPUT_KEYS[0],
        INPUT_KEYS[1],
        "strategies",
        "budgets",
        "reps",
        "seed",
    ];
    let flags = vec![
        ("input", a.input.input),
        ("directed", flag(a.input.directed)),
        ("strategies", a.strategies),
        ("budgets", a.budgets),
        ("reps", a.reps),
        ("seed", a.seed),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let all = Strategy::ALL.map(|st| st.name()).join(",");
    let strategies = list(&s.or("strategies", all)?, str::parse::<Strategy>)?;
    let budgets = list(&s.req::<String>("budgets")?, |b| {
        b.parse::<usize>()
            .map_err(|_| socnet::Error::InvalidArgument(format!("invalid budget `{b}`")))
    })?;
    let reps = s.or("reps", 10usize)?;
    let seed = s.or("seed", 0u64)?;
    let g = read_input(&mut s)?;
    s.finish()?;
    let report = benchmark(&g, &strategies, &budgets, reps, seed)?;
    let mut runs = String::from("strategy,budget,rep,minority_fraction,mean_degree\n");
    for r in &report.runs {
        let _ = writeln!(
            runs,
            "{},{},{},{},{}",
            r.strategy, r.budget, r.rep, r.minority_fraction, r.mean_degree
        );
    }
    s.write("sample_runs.csv", &runs)?;
    let mut bias = String::from(
        "strategy,budget,reps,population_minority_fraction,population_mean_degree,\
         minority_bias_mean,minority_bias_sd,minority_abs_bias_mean,degree_bias_mean,degree_bias_sd\n",
    );
    for c in &report.cells {
        let _ = writeln!(
            bias,
            "{},{},{},{},{},{},{},{},{},{}",
            c.strategy,
            c.budget,
            c.reps,
            report.population_minority_fraction,
            report.population_mean_degree,
            c.minority_bias_mean,
            c.minority_bias_sd,
            c.minority_abs_bias_mean,
            c.degree_bias_mean,
            c.degree_bias_sd
        );
    }
    s.write("bias.csv", &bias)
}

#[derive(Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// independent (default) or threshold.
    #[arg(long)]
    contagion: Option<String>,
    /// Same-class transmission probability (default 0.1).
    #[arg(long = "p-in")]
    p_in: Option<String>,
    /// Cross-class transmission probability (default 0.1).
    #[arg(long = "p-out")]
    p_out: Option<String>,
    /// Activation threshold (default 0.5).
    #[arg(long)]
    theta: Option<String>,
    /// uniform, majority-only, minority-only or top-degree.
    #[arg(long)]
    seeding: Option<String>,
    /// Number of seed nodes (default 5).
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Step cap (default 10·n).
    #[arg(long = "max-steps")]
    max_steps: Option<String>,
}

pub fn spread(a: SpreadArgs) -> Result<(), CliError> {
    let keys = [
        INPUT_KEYS[0],
        INPUT_KEYS[1],
        "contagion",
        "p_in",
        "p_out",
        "theta",
        "seeding",
        "seeds",
        "seed",
        "max_steps",
    ];
    let flags = vec![
        ("input", a.input.input),
        ("directed", flag(a.input.directed)),
        ("contagion", a.contagion),
        ("p_in", a.p_in),
        ("p_out", a.p_out),
        ("theta", a.theta),
        ("seeding", a.seeding),
        ("seeds", a.seeds),
        ("seed", a.seed),
        ("max_steps", a.max_steps),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let contagion: String = s.or("contagion", "independent".to_owned())?;
    let rates = match contagion.as_str() {
        "independent" => Ok((s.or("p_in", 0.1)?, s.or("p_out", 0.1)?)),
        "threshold" => Err(s.or("theta", 0.5)?),
        other => return Err(usage(format!("unknown contagion `{other}`"))),
    };
    let condition: Seeding = s.or("seeding", Seeding::Uniform)?;
    let count = s.or("seeds", 5usize)?;
    let seed = s.or("seed", 0u64)?;
    let g = read_input(&mut s)?;
    let max_steps = s.or("max_steps", 10 * g.node_count())?;
    s.finish()?;

    let mut rng = Rng::new(seed);
    let seeds = seeding(&g, condition, count, &mut rng)?;
    let trace = match rates {
        Ok((p_in, p_out)) => cascade(&g, &seeds, p_in, p_out, &mut rng, max_steps)?,
        Err(theta) => threshold_cascade(&g, &seeds, theta, max_steps)?,
    };
    let report = equality_report(&trace);
    let mut series = String::from("t,frac_class0,frac_class1,frac_all\n");
    let mut eq = String::from("t,equality\n");
    for (t, (f, all)) in trace.class_fractions.iter().zip(&trace.overall).enumerate() {
        let _ = writeln!(series, "{t},{},{},{all}", f[0], f[1]);
        let _ = writeln!(eq, "{t},{}", report.equality[t]);
    }
    s.write("series.csv", &series)?;
    s.write("equality.csv", &eq)?;
    let mut act = String::from("node,class,time\n");
    for (v, t) in trace.activation.iter().enumerate() {
        let _ = writeln!(act, "{v},{},{}", g.label(v).index(), na(*t));
    }
    s.write("activation.csv", &act)?;
    s.write(
        "spread_summary.csv",
        &format!(
            "seeds,informed,steps,efficiency,terminal_class0,terminal_class1\n{},{},{},{},{},{}\n",
            seeds
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            trace.informed(),
            trace.steps(),
            na(report.efficiency),
            report.terminal[0],
            report.terminal[1]
        ),
    )
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    model: Option<String>,
    /// Values or start:stop:step ranges (inclusive) for each parameter.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long = "fm")]
    f_m: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long = "ptc")]
    p_tc: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long = "gamma-a")]
    gamma_a: Option<String>,
    /// Base seed; repetition r uses a seed derived from it.
    #[arg(long)]
    seed: Option<String>,
    /// Repetitions per grid cell (default 1).
    #[arg(long)]
    reps: Option<String>,
}

const SWEEP_METRICS: [&str; 6] = [
    "edges",
    "mean_degree",
    "clustering",
    "gini",
    "top10_minority",
    "inequity",
];

fn int_range(key: &str, text: &str) -> Result<Vec<usize>, CliError> {
    parse_range(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(usage(format!(
                    "`{key}` must take non-negative integer values, got {v}"
                )))
            }
        })
        .collect()
}

fn sweep_metrics(g: &AttributedGraph) -> Vec<String> {
    let n = g.node_count() as f64;
    let per_node = if g.is_directed() { 1.0 } else { 2.0 };
    let metric = if g.is_directed() {
        Metric::InDegree
    } else {
        Metric::Degree
    };
    let rank = rank_report(g, metric).ok();
    vec![
        g.edge_count().to_string(),
        (per_node * g.edge_count() as f64 / n).to_string(),
        g.average_clustering().to_string(),
        na(rank.as_ref().map(|r| r.gini)),
        na(rank.as_ref().and_then(|r| r.curve.at(10))),
        na(rank.as_ref().map(|r| r.inequity)),
    ]
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let keys = [
        "model", "n", "m", "f_m", "h", "p_tc", "d", "gamma_a", "seed", "reps",
    ];
    let flags = vec![
        ("model", a.model),
        ("n", a.n),
        ("m", a.m),
        ("f_m", a.f_m),
        ("h", a.h),
        ("p_tc", a.p_tc),
        ("d", a.d),
        ("gamma_a", a.gamma_a),
        ("seed", a.seed),
        ("reps", a.reps),
    ];
    let mut s = Settings::load(a.common.config.as_deref(), a.common.out, &keys, flags)?;
    let model: Model = s.req("model")?;
    let ns = int_range("n", &s.req::<String>("n")?)?;
    let ms = int_range("m", &s.or("m", "2".to_owned())?)?;
    let real = |s: &mut Settings, key: &str, default: &str| -> Result<Vec<f64>, CliError> {
        Ok(parse_range(&s.or(key, default.to_owned())?)?)
    };
    let fms = real(&mut s, "f_m", "0.2")?;
    let hs = real(&mut s, "h", "0.5")?;
    let ptcs = real(&mut s, "p_tc", "0")?;
    let ds = real(&mut s, "d", "0.01")?;
    let gammas = real(&mut s, "gamma_a", "2.5")?;
    let base = s.or("seed", 0u64)?;
    let reps = s.or("reps", 1usize)?;
    if reps < 1 {
        return Err(usage("reps must be at least 1"));
    }

    let mut cells = Vec::new();
    for &n in &ns {
        for &m in &ms {
            for &f_m in &fms {
                for &h in &hs {
                    for &p_tc in &ptcs {
                        for &d in &ds {
                            for &gamma_a in &gammas {
                                let mut p = GenParams::new(model, n, 0);
                                p.m = m;
                                p.f_m = f_m;
                                p.mixing = MixingMatrix::symmetric(h)?;
                                p.p_tc = p_tc;
                                p.density = d;
                                p.gamma_a = gamma_a;
                                p.validate()?;
                                cells.push((p, h));
                            }
                        }
                    }
                }
            }
        }
    }
    s.finish()?;

    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..reps).map(move |r| (c, r)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(c, r)| {
            let (mut p, h) = cells[c].clone();
            p.seed = derive_seed(base, r as u64);
            let (g, _) = generators::generate(&p)?;
            let prefix = format!(
                "{c},{},{},{},{},{h},{},{},{},{}",
                p.model, p.n, p.m, p.f_m, p.p_tc, p.density, p.gamma_a, p.seed
            );
            let mut out = String::new();
            for (name, value) in SWEEP_METRICS.iter().zip(sweep_metrics(&g)) {
                let _ = writeln!(out, "{prefix},{name},{value}");
            }
            Ok(out)
        })
        .collect::<Result<Vec<String>, socnet::Error>>()?;
    let mut table = String::from("cell,model,n,m,f_m,h,p_tc,d,gamma_a,seed,metric,value\n");
    for r in rows {
        table.push_str(&r);
    }
    s.write("sweep.csv", &table)
}
