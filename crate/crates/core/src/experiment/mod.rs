//! Experiment runner: builds a model from a [`RunConfig`], fans replicas out
//! over a worker pool, and aggregates them in replica order so that outputs do
//! not depend on the number of workers.

mod config;
mod output;
mod stats;

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cftp::{Dynamics, SweepRandomness, UpdateRule, WindowLadder};
use crate::error::{Error, Result};
use crate::escoupling::{es_color, ColorSources, ColorVariant};
use crate::lattice::{build_grid, line_graph, BoundaryMode, Site, SiteGraph, Window};
use crate::oracle::{self, EnumerationOptions};
use crate::order::OrderKind;
use crate::spec::{Ising, LongRangeIsing, RandomCluster, Specification};

pub use config::{Experiment, ModelKind, OrderChoice, RunConfig, UpdateChoice, SEED_ENV};
pub use output::{
    csv_string, emit_results, parse_csv, DiagonalRow, MixingRow, PottsRow, RadiusRow, Row, SampleRow, SpacetimeRow,
    ValidateRow,
};
pub use stats::{binomial_stderr, fit_tail, NoFit, SurvivalCurve, SurvivalPoint, TailFit};

/// Version string recorded in every envelope.
pub const VERSION: &str = concat!("cftp-lab ", env!("CARGO_PKG_VERSION"));

/// A model instance together with the graph it lives on.
pub struct Model {
    pub graph: Arc<SiteGraph>,
    pub spec: Box<dyn Specification>,
}

/// `x` as a fraction with denominator at most 1000 when it is one to within
/// `1e-12`, else its exact binary value.
pub fn simple_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    for d in 1..=1000i64 {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() < 1e-12 {
            return Some(BigRational::new(BigInt::from(n as i64), BigInt::from(d)));
        }
    }
    BigRational::from_float(x)
}

/// Like [`simple_rational`] but never falls back to the binary expansion.
fn short_rational(x: f64) -> Option<BigRational> {
    (1..=1000i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((n / d as f64 - x).abs() < 1e-12 && n.abs() < 1e15).then(|| BigRational::new(BigInt::from(n as i64), BigInt::from(d)))
    })
}

pub fn build_model(cfg: &RunConfig) -> Result<Model> {
    let base = Arc::new(build_grid(&cfg.extents)?);
    match cfg.model {
        ModelKind::RandomCluster => {
            let graph = Arc::new(line_graph(&base)?);
            let spec: Box<dyn Specification> = match (simple_rational(cfg.p), simple_rational(cfg.q)) {
                (Some(p), Some(q)) => Box::new(RandomCluster::new_rational(graph.clone(), p, q)?),
                _ => Box::new(RandomCluster::new(graph.clone(), cfg.p, cfg.q)?),
            };
            Ok(Model { graph, spec })
        }
        ModelKind::Ising => {
            let spec: Box<dyn Specification> = match short_rational((2.0 * cfg.beta).exp()) {
                Some(w) if cfg.beta >= 0.0 => Box::new(Ising::from_weight(base.clone(), w)?),
                _ => Box::new(Ising::new(base.clone(), cfg.beta)?),
            };
            Ok(Model { graph: base, spec })
        }
        ModelKind::LongRangeIsing => {
            let spec = Box::new(LongRangeIsing::new(base.clone(), cfg.beta, cfg.alpha, cfg.trunc)?);
            Ok(Model { graph: base, spec })
        }
    }
}

fn order_kind(cfg: &RunConfig, graph: &SiteGraph) -> OrderKind {
    match (cfg.order, cfg.digits) {
        (OrderChoice::Real, _) => OrderKind::Real,
        (OrderChoice::Digits, Some(d)) => OrderKind::Digits { d },
        (OrderChoice::Digits, None) => OrderKind::default_digits(graph),
    }
}

fn dynamics<'a>(cfg: &RunConfig, model: &'a Model) -> Result<Dynamics<'a, dyn Specification>> {
    let d = Dynamics::new(model.spec.as_ref(), SweepRandomness::new(cfg.seed))
        .with_order(order_kind(cfg, &model.graph))
        .with_horizon_cap(cfg.horizon_cap);
    match cfg.update {
        UpdateChoice::Continuous => Ok(d.with_rule(UpdateRule::Continuous)),
        UpdateChoice::Finite => d.with_finite_alphabet(),
    }
}

fn ladder(cfg: &RunConfig, graph: &Arc<SiteGraph>) -> Result<WindowLadder> {
    let v = graph
        .center()
        .ok_or_else(|| Error::InvalidGraph("graph has no centre".into()))?;
    Ok(match cfg.radius_cap {
        Some(cap) => WindowLadder::with_cap(graph, v, cap),
        None => WindowLadder::new(graph, v)?,
    })
}

/// Runs `f` for every replica index and returns the results in index order.
fn replicas<T: Send>(n: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Result of one experiment, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    /// CSV body, header included.
    pub csv: String,
    pub summary: Value,
    /// Order comparisons that fell back to site index.
    pub ties: u64,
    /// Validation checks that failed.
    pub failed_checks: usize,
}

/// Runs the configured experiment on a pool of `cfg.workers` threads.
pub fn run_experiment(cfg: &RunConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| match cfg.experiment {
        Experiment::Sample => run_sample(cfg),
        Experiment::Radius => run_radius(cfg),
        Experiment::Diagonal => run_diagonal(cfg),
        Experiment::Spacetime => run_spacetime(cfg),
        Experiment::Mixing => run_mixing(cfg),
        Experiment::Potts => run_potts(cfg),
        Experiment::Validate => run_validate(cfg),
    })
}

fn output<R: Row>(cfg: &RunConfig, rows: &[R], summary: Value, ties: u64, failed_checks: usize) -> Result<ExperimentOutput> {
    Ok(ExperimentOutput {
        experiment: cfg.experiment,
        csv: csv_string(rows)?,
        summary,
        ties,
        failed_checks,
    })
}

fn fit_json(curve: &SurvivalCurve) -> Value {
    match fit_tail(curve) {
        Ok(f) => json!({ "rate": f.rate, "intercept": f.intercept, "r_squared": f.r_squared, "points": f.points }),
        Err(n) => json!({ "no_fit": true, "usable_points": n.usable_points }),
    }
}

fn run_sample(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let d = dynamics(cfg, &model)?;
    let v = model
        .graph
        .center()
        .ok_or_else(|| Error::InvalidGraph("graph has no centre".into()))?;
    let window = Window::ball(&model.graph, v, cfg.radius.unwrap_or(1), cfg.mode)?;
    let master = d.randomness();
    let samples = replicas(cfg.replicas, |i| d.with_randomness(master.replica(i)).cftp_window_sample(&window))?;
    let mut ties = 0;
    let rows: Vec<SampleRow> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            ties += s.stats.ties;
            SampleRow {
                replica: i as u64,
                horizon: s.horizon,
                sweeps: s.stats.sweeps,
                center_spin: s.config.get(v),
                interior: window.interior().iter().map(|&u| char::from(b'0' + s.config.get(u))).collect(),
            }
        })
        .collect();
    let mean_center = rows.iter().map(|r| f64::from(r.center_spin)).sum::<f64>() / rows.len() as f64;
    let max_horizon = rows.iter().map(|r| r.horizon).max().unwrap_or(0);
    let summary = json!({
        "window_sites": window.len(),
        "touches_sides": window.touches_sides(),
        "mean_center_spin": mean_center,
        "max_horizon": max_horizon,
    });
    output(cfg, &rows, summary, ties, 0)
}

fn run_radius(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let d = dynamics(cfg, &model)?;
    let ladder = ladder(cfg, &model.graph)?;
    let master = d.randomness();
    let runs = replicas(cfg.replicas, |i| d.with_randomness(master.replica(i)).coding_radius(&ladder))?;
    let values: Vec<usize> = runs.iter().map(|t| t.r_tilde).collect();
    let ties: u64 = runs.iter().map(|t| t.stats.ties).sum();
    let curve = SurvivalCurve::from_values(&values, cfg.max_r);
    let spins = model.spec.spin_space().size();
    let options = EnumerationOptions::default().with_cap_bits(cfg.enum_cap_bits).float_only();
    let mut rows = Vec::with_capacity(curve.points.len());
    let mut violations = 0;
    for p in &curve.points {
        let bound = if p.x <= ladder.cap() {
            let plus = ladder.get(p.x, BoundaryMode::Plus)?;
            let minus = ladder.get(p.x, BoundaryMode::Minus)?;
            match (
                oracle::site_marginal(model.spec.as_ref(), plus, ladder.center(), options),
                oracle::site_marginal(model.spec.as_ref(), minus, ladder.center(), options),
            ) {
                (Ok(a), Ok(b)) => Some((spins - 1) as f64 * oracle::exact_tv(&a, &b)?),
                (Err(Error::EnumerationCap { .. }), _) | (_, Err(Error::EnumerationCap { .. })) => None,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        } else {
            None
        };
        if let Some(b) = bound {
            violations += usize::from(p.survival > b + 3.0 * p.stderr);
        }
        rows.push(RadiusRow {
            r: p.x,
            trials: p.trials,
            exceedances: p.exceedances,
            survival: p.survival,
            stderr: p.stderr,
            oracle_tv_bound: bound,
        });
    }
    let summary = json!({
        "mean_r_tilde": values.iter().sum::<usize>() as f64 / values.len() as f64,
        "max_r_tilde": values.iter().max(),
        "bound_violations": violations,
        "tail_fit": fit_json(&curve),
    });
    output(cfg, &rows, summary, ties, violations)
}

fn run_diagonal(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let d = dynamics(cfg, &model)?;
    let ladder = ladder(cfg, &model.graph)?;
    let master = d.randomness();
    let runs = replicas(cfg.replicas, |i| d.with_randomness(master.replica(i)).diagonal_t(&ladder))?;
    let values: Vec<usize> = runs.iter().map(|r| r.t).collect();
    let ties = runs.iter().map(|r| r.stats.ties).sum();
    let curve = SurvivalCurve::from_values_from(&values, 1, cfg.max_r.max(1));
    let rows: Vec<DiagonalRow> = curve
        .points
        .iter()
        .map(|p| DiagonalRow {
            n: p.x,
            trials: p.trials,
            exceedances: p.exceedances,
            survival: p.survival,
            stderr: p.stderr,
        })
        .collect();
    let spins = model.spec.spin_space().size();
    let mut law = vec![0u64; spins];
    for r in &runs {
        law[r.spin as usize] += 1;
    }
    let summary = json!({
        "mean_t": values.iter().sum::<usize>() as f64 / values.len() as f64,
        "agreed_spin_counts": law,
        "tail_fit": fit_json(&curve),
    });
    output(cfg, &rows, summary, ties, 0)
}

fn run_spacetime(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let kind = match order_kind(cfg, &model.graph) {
        OrderKind::Real => OrderKind::default_digits(&model.graph),
        k => k,
    };
    let d = Dynamics::new(model.spec.as_ref(), SweepRandomness::new(cfg.seed))
        .with_order(kind)
        .with_horizon_cap(cfg.horizon_cap)
        .with_finite_alphabet()?;
    let ladder = ladder(cfg, &model.graph)?;
    let master = d.randomness();
    let runs = replicas(cfg.replicas, |i| d.with_randomness(master.replica(i)).space_time_t(&ladder))?;
    let ties = runs.iter().map(|r| r.stats.ties).sum();
    let digits = match kind {
        OrderKind::Digits { d } => f64::from(d),
        OrderKind::Real => unreachable!("digit order forced above"),
    };
    let trials = runs.len() as u64;
    let mut rows = Vec::new();
    for n in 1..=cfg.max_r.max(1) {
        let exceed = runs.iter().filter(|r| r.t_star > 2 * n).count() as u64;
        let diag = runs.iter().filter(|r| r.t > n).count() as f64 / trials as f64;
        let ball = if n <= ladder.cap() {
            ladder.get(n, BoundaryMode::Plus)?.len() as f64
        } else {
            f64::NAN
        };
        let p = SurvivalPoint::new(n, trials, exceed);
        rows.push(SpacetimeRow {
            n,
            trials,
            exceedances: exceed,
            survival: p.survival,
            stderr: p.stderr,
            diagonal_survival: diag,
            order_bound: (n as f64 + 1.0) * ball * ball * digits.powi(-(n as i32)),
        });
    }
    let violations = rows
        .iter()
        .filter(|r| r.survival > r.diagonal_survival + r.order_bound + 3.0 * r.stderr)
        .count();
    let summary = json!({
        "digits": digits,
        "mean_t_star": runs.iter().map(|r| r.t_star).sum::<usize>() as f64 / trials as f64,
        "bound_violations": violations,
    });
    output(cfg, &rows, summary, ties, violations)
}

fn run_mixing(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let d = dynamics(cfg, &model)?;
    let ladder = ladder(cfg, &model.graph)?;
    let master = d.randomness();
    let mut rows = Vec::new();
    for n in 0..=cfg.n_max {
        let r = cfg.radius.unwrap_or(n);
        let dn = d.with_randomness(master.replica((1 << 40) + n as u64));
        let e = dn.estimate_phi(&ladder, n as u64, r, cfg.replicas)?;
        rows.push(MixingRow {
            n: e.n,
            r: e.r,
            trials: e.trials,
            disagreements: e.disagreements,
            phi_hat: e.phi,
            stderr: e.stderr,
        });
    }
    let decreasing = rows
        .windows(2)
        .skip(1)
        .all(|w| w[0].phi_hat - w[1].phi_hat > 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt());
    let summary = json!({ "strictly_decreasing_beyond_3se": decreasing });
    output(cfg, &rows, summary, 0, 0)
}

/// Base vertices of the block of side `side` around the box centre.
pub fn centre_block(base: &SiteGraph, side: usize) -> Result<Vec<Site>> {
    let extents = base
        .extents()
        .ok_or_else(|| Error::InvalidGraph("block needs a box".into()))?;
    if extents.iter().any(|&e| e < side) {
        return Err(Error::Config(format!("block of side {side} does not fit the box")));
    }
    let lo: Vec<i64> = extents.iter().map(|&e| ((e - side) / 2) as i64).collect();
    let mut out = Vec::new();
    let total = side.pow(extents.len() as u32);
    for i in 0..total {
        let mut rem = i;
        let c: Vec<i64> = lo
            .iter()
            .map(|&l| {
                let x = l + (rem % side) as i64;
                rem /= side;
                x
            })
            .collect();
        out.push(base.site_at(&c).expect("inside the box"));
    }
    out.sort_unstable();
    Ok(out)
}

/// Line-graph window made of every edge touching `vertices`.
pub fn edges_touching(line: &Arc<SiteGraph>, vertices: &[Site], mode: BoundaryMode) -> Result<Window> {
    let es = line
        .edge_structure()
        .ok_or_else(|| Error::InvalidGraph("expected a line graph".into()))?;
    let mut sites: Vec<Site> = (0..line.len())
        .filter(|&e| {
            let (a, b) = es.endpoints(e);
            vertices.contains(&a) || vertices.contains(&b)
        })
        .collect();
    sites.sort_unstable();
    Window::from_sites(line, &sites, mode)
}

fn run_potts(cfg: &RunConfig) -> Result<ExperimentOutput> {
    if cfg.model != ModelKind::RandomCluster {
        return Err(Error::Config("potts colours random-cluster samples".into()));
    }
    if cfg.q.fract() != 0.0 || cfg.q < 2.0 {
        return Err(Error::Config(format!("potts needs an integer q >= 2, got {}", cfg.q)));
    }
    let q = cfg.q as u32;
    if cfg.boundary_color == 0 || cfg.boundary_color > q {
        return Err(Error::Config(format!("boundary colour must lie in 1..={q}")));
    }
    let model = build_model(cfg)?;
    let d = dynamics(cfg, &model)?;
    let base = model.graph.edge_structure().expect("line graph").base().clone();
    let block = centre_block(&base, cfg.block)?;
    let window = edges_touching(&model.graph, &block, cfg.mode)?;
    let master = d.randomness();
    let colours = replicas(cfg.replicas, |i| {
        let rnd = master.replica(i);
        let s = d.with_randomness(rnd).cftp_window_sample(&window)?;
        let sources = ColorSources::draw(&rnd, base.len(), q, 0);
        let out = es_color(s.config.spins(), &window, &sources, ColorVariant::ArgminZ, cfg.boundary_color)?;
        Ok((block
            .iter()
            .map(|v| out.iter().find(|x| x.0 == *v).expect("block vertex in frame").1)
            .collect::<Vec<u32>>(), s.stats.ties))
    })?;
    let oracle = if cfg.mode == BoundaryMode::Plus {
        let beta = -(1.0 - cfg.p).ln();
        match oracle::potts_window(
            &base,
            &block,
            q as usize,
            beta,
            Some(cfg.boundary_color),
            EnumerationOptions::default().with_cap_bits(cfg.enum_cap_bits),
        ) {
            Ok(p) => Some(p),
            Err(Error::EnumerationCap { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let trials = colours.len() as u64;
    let ties = colours.iter().map(|c| c.1).sum();
    let mut rows = Vec::new();
    let mut max_tv: Option<f64> = None;
    for (k, &v) in block.iter().enumerate() {
        let reference = oracle.as_ref().map(|o| o.marginal(v)).transpose()?;
        let mut freq = Vec::with_capacity(q as usize);
        for c in 1..=q {
            let count = colours.iter().filter(|x| x.0[k] == c).count() as u64;
            let f = count as f64 / trials as f64;
            freq.push(f);
            rows.push(PottsRow {
                vertex: v,
                color: c,
                count,
                frequency: f,
                oracle: reference.as_ref().map(|m| m[(c - 1) as usize]),
            });
        }
        if let Some(m) = &reference {
            let tv = oracle::exact_tv(&freq, m)?;
            max_tv = Some(max_tv.map_or(tv, |x: f64| x.max(tv)));
        }
    }
    let summary = json!({ "block": block, "window_edges": window.len(), "max_vertex_tv": max_tv });
    output(cfg, &rows, summary, ties, 0)
}

fn run_validate(cfg: &RunConfig) -> Result<ExperimentOutput> {
    let model = build_model(cfg)?;
    let sites: Vec<Site> = (0..model.graph.len()).collect();
    let options = EnumerationOptions::default().with_cap_bits(cfg.enum_cap_bits.min(oracle::DEFAULT_CAP_BITS));
    let spec = model.spec.as_ref();
    let mut rows = Vec::new();
    let mut push = |check: &str, mode: BoundaryMode, value: f64, tolerance: f64| {
        rows.push(ValidateRow {
            check: check.into(),
            mode: mode.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        })
    };
    let mut dists = Vec::new();
    for mode in [BoundaryMode::Plus, BoundaryMode::Minus] {
        let window = Window::from_sites(&model.graph, &sites, mode)?;
        let rep = oracle::check_conditional(spec, &window, options)?;
        push("conditional", mode, rep.max_discrepancy, 1e-12);
        if let Some(x) = rep.exact_discrepancy {
            push("conditional_exact", mode, x, 0.0);
        }
        push("stationarity", mode, rep.stationarity_error, 1e-10);
        if spec.exact_params().is_some() {
            let fid = oracle::finite_alphabet_fidelity(spec, &window, options)?;
            push("finite_alphabet", mode, fid.mismatches as f64, 0.0);
        }
        dists.push(oracle::enumerate_gibbs(spec, &window, options.float_only())?);
    }
    let violation = oracle::check_domination(&dists[1], &dists[0], 100, cfg.seed)?;
    push("domination", BoundaryMode::Minus, violation.max(0.0), 1e-12);
    let failed = rows.iter().filter(|r| !r.pass).count();
    let max_disc = rows
        .iter()
        .filter(|r| r.check == "conditional")
        .map(|r| r.value)
        .fold(0.0, f64::max);
    let summary = json!({ "max_conditional_discrepancy": max_disc, "failed_checks": failed, "window_sites": sites.len() });
    output(cfg, &rows, summary, 0, failed)
}

/// Paths of the CSV file and its JSON envelope for `output`.
pub fn output_paths(output: &Path) -> (PathBuf, PathBuf) {
    let csv = if output.extension().is_some() {
        output.to_path_buf()
    } else {
        output.with_extension("csv")
    };
    let json = csv.with_extension("json");
    (csv, json)
}

/// JSON envelope describing a finished run.
pub fn envelope(cfg: &RunConfig, out: &ExperimentOutput, wall_time_s: f64) -> Value {
    json!({
        "version": VERSION,
        "experiment": out.experiment.name(),
        "seed": cfg.seed,
        "config": cfg,
        "wall_time_s": wall_time_s,
        "rows": out.csv.lines().count().saturating_sub(1),
        "degeneracy": { "order_ties": out.ties },
        "failed_checks": out.failed_checks,
        "summary": out.summary,
    })
}

/// Runs the experiment and writes the CSV and JSON files when an output path is configured.
pub fn run_and_write(cfg: &RunConfig) -> Result<(ExperimentOutput, Value)> {
    let start = Instant::now();
    let out = run_experiment(cfg)?;
    let env = envelope(cfg, &out, start.elapsed().as_secs_f64());
    if let Some(path) = &cfg.output {
        let (csv, json_path) = output_paths(path);
        std::fs::write(&csv, &out.csv)?;
        std::fs::write(&json_path, serde_json::to_string_pretty(&env)? + "\n")?;
    }
    Ok((out, env))
}

/// Process exit code for an error: 2 for configuration problems, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parameter(_) | Error::InvalidGraph(_) => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(experiment: Experiment) -> RunConfig {
        let mut c = RunConfig::new(experiment);
        c.extents = vec![11, 11];
        c.replicas = 50;
        c.max_r = 3;
        c.n_max = 3;
        c
    }

    #[test]
    fn rationals() {
        assert_eq!(simple_rational(0.5).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(simple_rational(2.0).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(short_rational((2.0 * 2f64.ln()).exp()).unwrap(), BigRational::from_integer(4.into()));
        assert!(short_rational(std::f64::consts::PI).is_none());
    }

    #[test]
    fn radius_with_q_one_never_exceeds_zero() {
        let mut c = quick(Experiment::Radius);
        c.q = 1.0;
        let out = run_experiment(&c).unwrap();
        let rows: Vec<RadiusRow> = parse_csv(&out.csv).unwrap();
        assert!(rows.iter().all(|r| r.exceedances == 0));
    }

    #[test]
    fn mixing_has_phi_one_at_zero() {
        let out = run_experiment(&quick(Experiment::Mixing)).unwrap();
        let rows: Vec<MixingRow> = parse_csv(&out.csv).unwrap();
        assert_eq!(rows[0].n, 0);
        assert_eq!(rows[0].phi_hat, 1.0);
    }

    #[test]
    fn validate_passes_on_the_square() {
        let mut c = RunConfig::new(Experiment::Validate);
        c.extents = vec![2, 2];
        c.p = 0.5;
        let out = run_experiment(&c).unwrap();
        assert_eq!(out.failed_checks, 0, "{}", out.csv);
        assert!(out.summary["max_conditional_discrepancy"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn every_experiment_runs() {
        for e in Experiment::ALL {
            let mut c = quick(e);
            if e == Experiment::Validate {
                c.extents = vec![2, 2];
            }
            if e == Experiment::Spacetime {
                c.replicas = 10;
            }
            let out = run_experiment(&c).unwrap_or_else(|err| panic!("{e}: {err}"));
            assert!(out.csv.lines().count() > 1, "{e}");
        }
    }

    #[test]
    fn config_errors_map_to_two() {
        let mut c = quick(Experiment::Radius);
        c.p = 2.0;
        let err = run_experiment(&c).unwrap_err();
        assert_eq!(exit_code(&err), 2);
        assert_eq!(exit_code(&Error::HorizonCap { cap: 4 }), 1);
    }
}
