//! Benchmark harness: runs every method on the same simulated instances
//! and emits per-run metrics plus per-scenario summaries.
//!
//! Work is parallelized over (scenario, replicate) pairs with seeds derived
//! per triple, and rows are ordered by (scenario, replicate, method), so
//! output bytes do not depend on scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use shadowboost::rng::mix_seed;
use shadowboost::{
    bootstrap_cv, complete_config, default_probe_cap, make_shadows, probe_select,
    stability_select, BoostConfig, CvConfig, Dataset, LossKind, ResponseKind, SelectionMetrics,
    SimulationScenario, StabilityConfig, StabilityParams,
};

use crate::error::{error_label, AppError, AppResult};

/// Paper grid for stability selection: PFER x pi_thr, q completed per scenario.
pub const PAPER_PFER_GRID: [f64; 3] = [1.0, 2.5, 8.0];
pub const PAPER_PI_THR_GRID: [f64; 3] = [0.6, 0.75, 0.9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    Probing,
    BootstrapCv,
    StabSel { pfer: f64, pi_thr: f64 },
}

impl MethodSpec {
    pub fn label(&self) -> String {
        match self {
            MethodSpec::Probing => "probing".to_string(),
            MethodSpec::BootstrapCv => "cv".to_string(),
            MethodSpec::StabSel { pfer, pi_thr } => {
                format!("stabsel_pi{}_pfer{}", pi_thr, pfer)
            }
        }
    }
}

/// The nine stability-selection settings used in the original comparison.
pub fn paper_grid() -> Vec<MethodSpec> {
    let mut grid = Vec::new();
    for &pfer in &PAPER_PFER_GRID {
        for &pi_thr in &PAPER_PI_THR_GRID {
            grid.push(MethodSpec::StabSel { pfer, pi_thr });
        }
    }
    grid
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub scenarios: Vec<SimulationScenario>,
    pub methods: Vec<MethodSpec>,
    pub nu: f64,
    pub loss: LossKind,
    pub stab_b: usize,
    pub stab_cap: usize,
    pub cv_folds: usize,
    pub cv_m_max: usize,
    /// Safety cap for probing fits; `None` picks `min(10n, 10000)`.
    pub probe_cap: Option<usize>,
    pub seed: u64,
    /// When false, the runtime column is left empty so repeated runs are
    /// byte-identical.
    pub measure_runtime: bool,
    /// Run cross-validation on the shadow-augmented design instead of the
    /// raw one (the variant used to study nesting against probing).
    pub cv_on_augmented: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            scenarios: Vec::new(),
            methods: vec![MethodSpec::Probing, MethodSpec::BootstrapCv],
            nu: 0.1,
            loss: LossKind::Logistic,
            stab_b: 100,
            stab_cap: 5000,
            cv_folds: 25,
            cv_m_max: 1000,
            probe_cap: None,
            seed: 1,
            measure_runtime: true,
            cv_on_augmented: false,
        }
    }
}

/// One benchmark row: either metrics or an error label.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scenario: SimulationScenario,
    pub scenario_id: String,
    pub replicate: usize,
    pub method: String,
    pub metrics: Option<SelectionMetrics>,
    pub error: Option<String>,
    /// Fingerprint of the instance truth; identical across methods within a
    /// replicate because they share the instance.
    pub informative_hash: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub tpr_mean: Option<f64>,
    pub tpr_sd: Option<f64>,
    pub fdr_mean: Option<f64>,
    pub fdr_sd: Option<f64>,
    pub runtime_mean: Option<f64>,
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSummary {
    pub n: usize,
    pub p: usize,
    pub p_inf: usize,
    pub rho: f64,
    pub replications: usize,
    pub methods: BTreeMap<String, MethodSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkSummary {
    pub seed: u64,
    pub scenarios: BTreeMap<String, ScenarioSummary>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutput {
    pub records: Vec<RunRecord>,
}

fn hash_indices(set: &[usize]) -> u64 {
    set.iter().fold(0x5EED, |h, &j| mix_seed(h, j as u64 + 1))
}

/// Runs one method on one instance; returns the selected original-column
/// indices.
fn run_method(
    method: &MethodSpec,
    data: &Dataset<f64>,
    cfg: &BenchmarkConfig,
    method_seed: u64,
) -> shadowboost::Result<Vec<usize>> {
    match method {
        MethodSpec::Probing => {
            let cap = cfg.probe_cap.unwrap_or_else(|| default_probe_cap(data.n_rows()));
            let boost = BoostConfig::new(cfg.nu, cap, cfg.loss);
            Ok(probe_select(data, &boost, method_seed)?.selected)
        }
        MethodSpec::BootstrapCv => {
            let boost = BoostConfig::new(cfg.nu, cfg.cv_m_max, cfg.loss);
            let cv = CvConfig::new(cfg.cv_folds, cfg.cv_m_max, method_seed)?;
            if cfg.cv_on_augmented {
                let augmented = make_shadows(data, mix_seed(method_seed, 7))?;
                let result = bootstrap_cv(&augmented.base, &boost, &cv)?;
                let p = data.n_cols();
                Ok(result
                    .final_trace
                    .distinct_selections()
                    .into_iter()
                    .filter(|&j| j < p)
                    .collect())
            } else {
                let result = bootstrap_cv(data, &boost, &cv)?;
                Ok(result.final_trace.distinct_selections())
            }
        }
        MethodSpec::StabSel { pfer, pi_thr } => {
            let completed = complete_config(
                &StabilityParams {
                    q: None,
                    pi_thr: Some(*pi_thr),
                    pfer: Some(*pfer),
                },
                data.n_cols(),
            )?;
            let stab = StabilityConfig::new(completed, cfg.stab_b, cfg.stab_cap, method_seed)?;
            let boost = BoostConfig::new(cfg.nu, cfg.stab_cap, cfg.loss);
            Ok(stability_select(data, &boost, &stab)?.stable_set)
        }
    }
}

pub fn run_benchmark(cfg: &BenchmarkConfig) -> AppResult<BenchmarkOutput> {
    if cfg.scenarios.is_empty() {
        return Err(AppError::Config("no scenarios given".into()));
    }
    if cfg.methods.is_empty() {
        return Err(AppError::Config("no methods given".into()));
    }
    for s in &cfg.scenarios {
        s.validate()?;
    }

    let tasks: Vec<(usize, usize)> = cfg
        .scenarios
        .iter()
        .enumerate()
        .flat_map(|(s_idx, s)| (0..s.replications).map(move |r| (s_idx, r)))
        .collect();

    let nested: AppResult<Vec<Vec<RunRecord>>> = tasks
        .into_par_iter()
        .map(|(s_idx, replicate)| {
            // The benchmark seed, not any per-file seed, keys the instances,
            // so one flag reproduces the whole run.
            let mut scenario = cfg.scenarios[s_idx];
            scenario.seed = mix_seed(cfg.seed, s_idx as u64);
            let scenario_id = scenario.id();

            let instance =
                shadowboost::simulate_instance::<f64>(&scenario, replicate, ResponseKind::Binary)
                    .map_err(AppError::from)?;
            let informative_hash = hash_indices(&instance.informative_set);
            let triple_seed = mix_seed(scenario.seed, replicate as u64);

            let mut rows = Vec::with_capacity(cfg.methods.len());
            for (m_idx, method) in cfg.methods.iter().enumerate() {
                let method_seed = mix_seed(triple_seed, 1000 + m_idx as u64);
                let start = Instant::now();
                let outcome = run_method(method, &instance.data, cfg, method_seed);
                let runtime = start.elapsed().as_secs_f64();
                let record = match outcome {
                    Ok(selected) => {
                        let tpr_value = if instance.informative_set.is_empty() {
                            None
                        } else {
                            Some(
                                shadowboost::tpr(&selected, &instance.informative_set)
                                    .map_err(AppError::from)?,
                            )
                        };
                        RunRecord {
                            scenario,
                            scenario_id: scenario_id.clone(),
                            replicate,
                            method: method.label(),
                            metrics: Some(SelectionMetrics {
                                method: method.label(),
                                scenario_id: scenario_id.clone(),
                                replicate,
                                n_selected: selected.len(),
                                tpr: tpr_value,
                                fdr: shadowboost::fdr(&selected, &instance.informative_set),
                                runtime_seconds: cfg.measure_runtime.then_some(runtime),
                            }),
                            error: None,
                            informative_hash,
                        }
                    }
                    Err(e) => RunRecord {
                        scenario,
                        scenario_id: scenario_id.clone(),
                        replicate,
                        method: method.label(),
                        metrics: None,
                        error: Some(error_label(&e).to_string()),
                        informative_hash,
                    },
                };
                rows.push(record);
            }
            Ok(rows)
        })
        .collect();

    let records = nested?.into_iter().flatten().collect();
    Ok(BenchmarkOutput { records })
}

impl BenchmarkOutput {
    /// Metrics CSV: one row per (scenario, replicate, method), plus a
    /// trailing error column that is empty on success.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scenario_id,n,p,p_inf,rho,replicate,method,n_selected,tpr,fdr,runtime_seconds,error\n",
        );
        for r in &self.records {
            let (n_selected, tpr, fdr, runtime) = match &r.metrics {
                Some(m) => (
                    m.n_selected.to_string(),
                    m.tpr.map(|v| v.to_string()).unwrap_or_default(),
                    m.fdr.to_string(),
                    m.runtime_seconds
                        .map(|v| format!("{:.6}", v))
                        .unwrap_or_default(),
                ),
                None => (String::new(), String::new(), String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.scenario_id,
                r.scenario.n,
                r.scenario.p,
                r.scenario.p_inf,
                r.scenario.rho,
                r.replicate,
                r.method,
                n_selected,
                tpr,
                fdr,
                runtime,
                r.error.clone().unwrap_or_default(),
            ));
        }
        out
    }

    /// Per-scenario, per-method means and standard deviations. Failed runs
    /// are counted but excluded from the statistics.
    pub fn summarize(&self, seed: u64) -> BenchmarkSummary {
        let mut scenarios: BTreeMap<String, ScenarioSummary> = BTreeMap::new();
        let mut groups: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
        for r in &self.records {
            scenarios
                .entry(r.scenario_id.clone())
                .or_insert_with(|| ScenarioSummary {
                    n: r.scenario.n,
                    p: r.scenario.p,
                    p_inf: r.scenario.p_inf,
                    rho: r.scenario.rho,
                    replications: r.scenario.replications,
                    methods: BTreeMap::new(),
                });
            groups
                .entry((r.scenario_id.clone(), r.method.clone()))
                .or_default()
                .push(r);
        }
        for ((scenario_id, method), rows) in groups {
            let ok: Vec<&SelectionMetrics> =
                rows.iter().filter_map(|r| r.metrics.as_ref()).collect();
            let failures = rows.len() - ok.len();
            let tprs: Vec<f64> = ok.iter().filter_map(|m| m.tpr).collect();
            let fdrs: Vec<f64> = ok.iter().map(|m| m.fdr).collect();
            let runtimes: Vec<f64> = ok.iter().filter_map(|m| m.runtime_seconds).collect();
            let summary = MethodSummary {
                tpr_mean: mean(&tprs),
                tpr_sd: sd(&tprs),
                fdr_mean: mean(&fdrs),
                fdr_sd: sd(&fdrs),
                runtime_mean: mean(&runtimes),
                runs: rows.len(),
                failures,
            };
            scenarios
                .get_mut(&scenario_id)
                .expect("scenario entry exists")
                .methods
                .insert(method, summary);
        }
        BenchmarkSummary { seed, scenarios }
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Sample standard deviation (n - 1 denominator).
fn sd(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(var.sqrt())
}
