use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::aggregate::{aggregate_tables, Aggregate, Table};
use super::config::{ExperimentConfig, Mode};
use super::seeds::{realization_seed, state_seed, SEED_SCHEME};
use crate::dynamics::{
    correlation_origin, correlation_trajectory, default_offsets, evolve, measure_d_epsilon, Evolution,
    ISOLINE_LEVELS,
};
use crate::error::{Error, Result};
use crate::kernel::TruncationPolicy;
use crate::model::{build_schedule, DisorderRealization, ModelParams, Picture, FIELD_SPLITTING};
use crate::mps::MatrixProductChain;
use crate::oracles::{ed_correlation, free_fermion_correlation, DenseState, ExactXxz};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const ISOLINES_FILE: &str = "isolines.csv";
pub const DISORDER_FILE: &str = "disorder.jsonl";

/// Outcome of one (realization, state) task.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitStatus {
    Ok,
    /// A `d_epsilon` run hit its hard cap and stopped early.
    Truncated,
    Failed(String),
}

impl UnitStatus {
    fn label(&self) -> &'static str {
        match self {
            UnitStatus::Ok => "ok",
            UnitStatus::Truncated => "truncated",
            UnitStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct UnitReport {
    pub realization: usize,
    pub state: usize,
    pub realization_seed: u64,
    pub state_seed: u64,
    pub file: String,
    pub status: UnitStatus,
    pub eta_tot: f64,
    pub max_bond_dim: usize,
    pub capped_gates: usize,
    /// Largest `|Σ_r C − 1/4|` over samples, for modes producing correlations.
    pub sum_rule_dev: Option<f64>,
}

/// Everything written by [`run_ensemble`].
#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub out_dir: PathBuf,
    pub units: Vec<UnitReport>,
    /// Mean over units with status `Ok`; `None` if none completed.
    pub aggregate: Option<Aggregate>,
    pub manifest_path: PathBuf,
}

impl EnsembleResult {
    pub fn completed(&self) -> usize {
        self.units.iter().filter(|u| u.status == UnitStatus::Ok).count()
    }

    pub fn unit_paths(&self) -> Vec<PathBuf> {
        self.units.iter().map(|u| self.out_dir.join(&u.file)).collect()
    }
}

struct UnitOutput {
    contents: String,
    status: UnitStatus,
    eta_tot: f64,
    max_bond_dim: usize,
    capped_gates: usize,
    sum_rule_dev: Option<f64>,
}

impl UnitOutput {
    fn ok(contents: String, eta_tot: f64, max_bond_dim: usize, capped_gates: usize) -> Self {
        Self { contents, status: UnitStatus::Ok, eta_tot, max_bond_dim, capped_gates, sum_rule_dev: None }
    }

    fn with_sum_rule(mut self, dev: f64) -> Self {
        self.sum_rule_dev = Some(dev);
        self
    }
}

fn unit_file(config: &ExperimentConfig, realization: usize, state: usize) -> String {
    let ext = match config.mode {
        Mode::Pure | Mode::Operator => "jsonl",
        _ => "csv",
    };
    if config.mode.uses_states(config.picture) {
        format!("realization_{realization:04}_state_{state:02}.{ext}")
    } else {
        format!("realization_{realization:04}.{ext}")
    }
}

/// Times at which every mode samples: t = 0, every `sample_every` steps, and
/// the final step.
pub fn sample_times(config: &ExperimentConfig) -> Result<Vec<f64>> {
    let steps = crate::dynamics::step_count(config.t_max, config.tau)?;
    let mut times = vec![0.0];
    for k in 1..=steps {
        if k % config.sample_every == 0 || k == steps {
            times.push(k as f64 * config.tau);
        }
    }
    Ok(times)
}

/// Runs every realization (in parallel on `config.threads` workers), then
/// writes per-unit files, the disorder log, the aggregate and a manifest into
/// `config.out`. Output bytes depend only on the config minus `out`/`threads`.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let params = config.model()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let per_realization: Vec<(DisorderRealization<f64>, Vec<(UnitReport, String)>)> = pool.install(|| {
        (0..config.realizations)
            .into_par_iter()
            .map(|i| run_realization(config, &params, i))
            .collect::<Result<Vec<_>>>()
    })?;

    let out = config.out.clone();
    fs::create_dir_all(&out).map_err(|e| file_error(&out, e))?;
    let mut disorder = String::new();
    let mut units = Vec::new();
    let mut tables = Vec::new();
    for (realization, unit_list) in per_realization {
        disorder.push_str(&realization.to_json_line());
        disorder.push('\n');
        for (report, contents) in unit_list {
            let path = out.join(&report.file);
            if !contents.is_empty() {
                write(&path, &contents)?;
            }
            if report.status == UnitStatus::Ok {
                tables.push((report.file.clone(), Table::parse(&contents, &report.file)?));
            }
            units.push(report);
        }
    }
    write(&out.join(DISORDER_FILE), &disorder)?;

    let aggregate = if tables.is_empty() { None } else { Some(aggregate_tables(&tables)?) };
    if let Some(agg) = &aggregate {
        write(&out.join(AGGREGATE_FILE), &agg.to_csv())?;
        if matches!(config.mode, Mode::Correlation | Mode::FfCorrelation) {
            let grid = agg.correlation_grid(correlation_origin(config.n))?;
            write(&out.join(ISOLINES_FILE), &grid.isolines_csv(&ISOLINE_LEVELS))?;
        }
    }
    let manifest_path = out.join(MANIFEST_FILE);
    write(&manifest_path, &manifest(config, &units, aggregate.as_ref()))?;
    Ok(EnsembleResult { out_dir: out, units, aggregate, manifest_path })
}

fn run_realization(
    config: &ExperimentConfig,
    params: &ModelParams<f64>,
    index: usize,
) -> Result<(DisorderRealization<f64>, Vec<(UnitReport, String)>)> {
    let seed = realization_seed(config.seed, index);
    let realization = DisorderRealization::for_params(params, seed)?;
    let mut units = Vec::new();
    for s in 0..config.states() {
        let sseed = state_seed(seed, s);
        let output = run_unit(config, params, &realization, sseed).unwrap_or_else(|e| UnitOutput {
            contents: String::new(),
            status: UnitStatus::Failed(e.to_string()),
            eta_tot: f64::NAN,
            max_bond_dim: 0,
            capped_gates: 0,
            sum_rule_dev: None,
        });
        let report = UnitReport {
            realization: index,
            state: s,
            realization_seed: seed,
            state_seed: sseed,
            file: unit_file(config, index, s),
            status: output.status,
            eta_tot: output.eta_tot,
            max_bond_dim: output.max_bond_dim,
            capped_gates: output.capped_gates,
            sum_rule_dev: output.sum_rule_dev,
        };
        units.push((report, output.contents));
    }
    Ok((realization, units))
}

fn run_unit(
    config: &ExperimentConfig,
    params: &ModelParams<f64>,
    realization: &DisorderRealization<f64>,
    state_seed: u64,
) -> Result<UnitOutput> {
    let n = config.n;
    match config.mode {
        Mode::Pure | Mode::Operator => {
            let picture = if config.mode == Mode::Pure { Picture::State } else { Picture::Heisenberg };
            let schedule = build_schedule(params, realization, picture)?;
            let chain = initial_chain(n, picture, state_seed)?;
            let traj = evolve(chain, &schedule, config.t_max, config.policy()?, config.sample_every)?;
            let contents: String = traj.records.iter().map(|r| r.to_json_line() + "\n").collect();
            let max_d = traj.records.iter().map(|r| r.max_bond_dim).max().unwrap_or(1);
            Ok(UnitOutput::ok(contents, traj.ledger.eta_tot(), max_d, traj.capped_gates))
        }
        Mode::DEpsilon => {
            let schedule = build_schedule(params, realization, config.picture)?;
            let chain = initial_chain(n, config.picture, state_seed)?;
            let curve = measure_d_epsilon(&schedule, chain, config.t_max, config.epsilon, config.hard_cap, config.sample_every)?;
            let max_d = curve.samples.last().map(|s| s.1).unwrap_or(1);
            let mut out = UnitOutput::ok(curve.to_csv(), curve.eta_tot, max_d, 0);
            if curve.truncated {
                out.status = UnitStatus::Truncated;
            }
            Ok(out)
        }
        Mode::Correlation => {
            let schedule = build_schedule(params, realization, Picture::Heisenberg)?;
            let (grid, ledger, chain) =
                correlation_trajectory(&schedule, config.policy()?, config.t_max, config.sample_every, &default_offsets(n))?;
            Ok(UnitOutput::ok(grid.to_csv(), ledger.eta_tot(), chain.max_bond_dim(), ledger.capped_count())
                .with_sum_rule(grid.sum_rule_deviation()))
        }
        Mode::FfCorrelation => {
            let grid = free_fermion_correlation(realization, &sample_times(config)?, &default_offsets(n))?;
            Ok(UnitOutput::ok(grid.to_csv(), 0.0, 0, 0).with_sum_rule(grid.sum_rule_deviation()))
        }
        Mode::EdCheck => ed_check(config, params, realization, state_seed),
    }
}

fn initial_chain(n: usize, picture: Picture, state_seed: u64) -> Result<MatrixProductChain<f64>> {
    match picture {
        Picture::State => MatrixProductChain::random_product_state(n, state_seed),
        Picture::Heisenberg => MatrixProductChain::operator_superket_sz(n, correlation_origin(n)),
    }
}

/// CSV `t,infidelity,C_max_dev`: pure-state infidelity against exact
/// evolution and the largest correlation deviation against the exact grid.
fn ed_check(
    config: &ExperimentConfig,
    params: &ModelParams<f64>,
    realization: &DisorderRealization<f64>,
    state_seed: u64,
) -> Result<UnitOutput> {
    let n = config.n;
    let policy: TruncationPolicy<f64> = config.policy()?;
    let exact = ExactXxz::from_model(params, realization)?;

    let heisenberg = build_schedule(params, realization, Picture::Heisenberg)?;
    let offsets = default_offsets(n);
    let (grid, op_ledger, _) = correlation_trajectory(&heisenberg, policy, config.t_max, config.sample_every, &offsets)?;
    let reference = ed_correlation(params, realization, grid.times(), &offsets)?;

    let schedule = build_schedule(params, realization, Picture::State)?;
    let chain = MatrixProductChain::random_product_state(n, state_seed)?;
    let psi0 = DenseState::new(n, chain.to_dense()?)?;
    let mut run = Evolution::new(chain, &schedule, policy)?;
    let times = sample_times(config)?;
    let mut out = String::from("t,infidelity,C_max_dev\n");
    for (ti, &t) in times.iter().enumerate() {
        while (run.time() - t).abs() > 0.5 * config.tau {
            run.step()?;
        }
        let psi = DenseState::new(n, run.chain().to_dense()?)?;
        let infidelity = 1.0 - exact.evolve(&psi0, t)?.overlap(&psi).norm_sqr();
        let dev = grid.values()[ti]
            .iter()
            .zip(&reference.values()[ti])
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        out.push_str(&format!("{t:.16e},{infidelity:.16e},{dev:.16e}\n"));
    }
    let eta = run.ledger().eta_tot() + op_ledger.eta_tot();
    let max_d = run.max_bond_seen();
    let capped = run.capped_gates() + op_ledger.capped_count();
    Ok(UnitOutput::ok(out, eta, max_d, capped).with_sum_rule(grid.sum_rule_deviation()))
}

fn manifest(config: &ExperimentConfig, units: &[UnitReport], aggregate: Option<&Aggregate>) -> String {
    let mut cfg = serde_json::to_value(config).expect("config serializes");
    if let Value::Object(map) = &mut cfg {
        // neither changes any output byte
        map.remove("out");
        map.remove("threads");
    }
    let unit_values: Vec<Value> = units
        .iter()
        .map(|u| {
            let mut v = json!({
                "realization": u.realization,
                "state": u.state,
                "realization_seed": u.realization_seed,
                "state_seed": u.state_seed,
                "file": u.file,
                "status": u.status.label(),
                "max_bond_dim": u.max_bond_dim,
                "capped_gates": u.capped_gates,
            });
            if u.eta_tot.is_finite() {
                v["eta_tot"] = json!(u.eta_tot);
            }
            if let Some(dev) = u.sum_rule_dev {
                v["sum_rule_dev"] = json!(dev);
            }
            if let UnitStatus::Failed(msg) = &u.status {
                v["error"] = json!(msg);
            }
            v
        })
        .collect();
    let mut m = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "seed_scheme": SEED_SCHEME,
        "field_splitting": FIELD_SPLITTING,
        "disorder_file": DISORDER_FILE,
        "units": unit_values,
        "completed": units.iter().filter(|u| u.status == UnitStatus::Ok).count(),
    });
    if let Some(agg) = aggregate {
        m["aggregate"] = json!({ "file": AGGREGATE_FILE, "count": agg.count });
    }
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    text
}

fn file_error(path: &Path, e: std::io::Error) -> Error {
    Error::File { path: path.to_path_buf(), message: e.to_string() }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| file_error(path, e))
}
