//! `shadowboost` command line: fit, probe, stabsel, cv, simulate, benchmark.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use shadowboost::{
    boost_fit, bootstrap_cv, complete_config, default_probe_cap, probe_select, simulate_instance,
    stability_select, BoostConfig, CvConfig, FixedIterations, ResponseKind, SimulationScenario,
    StabilityConfig, StabilityParams,
};
use shadowboost_cli::bench::{paper_grid, run_benchmark, BenchmarkConfig, MethodSpec};
use shadowboost_cli::config::{parse_loss, scenario_from_kv, KvMap};
use shadowboost_cli::error::{AppError, AppResult};
use shadowboost_cli::{init_thread_pool, io};

#[derive(Parser)]
#[command(name = "shadowboost", version)]
#[command(about = "Sparse variable selection with component-wise gradient boosting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the commands that read a CSV dataset.
#[derive(Args, Debug)]
struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    input: PathBuf,

    /// Name of the response column.
    #[arg(long)]
    response: String,

    /// Loss: 'squared' or 'logistic'.
    #[arg(long)]
    loss: Option<String>,

    /// Step length in (0, 1].
    #[arg(long)]
    nu: Option<f64>,

    /// Do not center covariates.
    #[arg(long, default_value_t = false)]
    no_center: bool,

    /// Key-value config file supplying defaults; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl DataArgs {
    fn kv(&self) -> AppResult<KvMap> {
        match &self.config {
            Some(path) => KvMap::load(path),
            None => Ok(KvMap::default()),
        }
    }

    fn resolve(&self, m_stop_key: &str, m_stop_default: usize) -> AppResult<(BoostConfig, KvMap)> {
        let kv = self.kv()?;
        let loss = match &self.loss {
            Some(name) => parse_loss(name)?,
            None => parse_loss(kv.get("loss").unwrap_or("squared"))?,
        };
        let nu = match self.nu {
            Some(nu) => nu,
            None => kv.get_parsed("nu")?.unwrap_or(0.1),
        };
        let m_stop = kv.get_parsed(m_stop_key)?.unwrap_or(m_stop_default);
        let center = if self.no_center {
            false
        } else {
            kv.get_parsed("center")?.unwrap_or(true)
        };
        let config = BoostConfig {
            nu,
            m_stop,
            loss,
            center_covariates: center,
        };
        Ok((config, kv))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a boosting model for a fixed number of iterations.
    Fit {
        #[command(flatten)]
        data: DataArgs,

        /// Number of boosting iterations.
        #[arg(long)]
        m_stop: Option<usize>,

        /// Output CSV: variable,selected.
        #[arg(long)]
        output: PathBuf,
    },

    /// Select variables by probing: stop at the first shadow selection.
    Probe {
        #[command(flatten)]
        data: DataArgs,

        /// Safety cap on iterations; defaults to min(10n, 10000).
        #[arg(long)]
        cap: Option<usize>,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Output CSV: variable,selected.
        #[arg(long)]
        output: PathBuf,
    },

    /// Stability selection; give exactly two of --q, --pi-thr, --pfer.
    Stabsel {
        #[command(flatten)]
        data: DataArgs,

        /// Number of subsamples.
        #[arg(long)]
        b: Option<usize>,

        /// Per-fit cap on distinct selected variables.
        #[arg(long)]
        q: Option<usize>,

        /// Selection-frequency threshold in (0.5, 1].
        #[arg(long)]
        pi_thr: Option<f64>,

        /// Per-family error bound.
        #[arg(long)]
        pfer: Option<f64>,

        /// Iteration cap per subsample fit.
        #[arg(long)]
        cap: Option<usize>,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Output CSV: variable,selected,frequency.
        #[arg(long)]
        output: PathBuf,
    },

    /// Choose the iteration count by bootstrap cross-validation.
    Cv {
        #[command(flatten)]
        data: DataArgs,

        /// Bootstrap replicates.
        #[arg(long)]
        folds: Option<usize>,

        /// Iteration grid upper bound.
        #[arg(long)]
        m_max: Option<usize>,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Output CSV: variable,selected.
        #[arg(long)]
        output: PathBuf,

        /// Also write {m_opt, mean_risk} as JSON.
        #[arg(long)]
        risk_json: Option<PathBuf>,
    },

    /// Generate one simulated instance and write it as CSV.
    Simulate {
        #[arg(long)]
        n: Option<usize>,

        #[arg(long)]
        p: Option<usize>,

        /// Number of informative variables.
        #[arg(long)]
        p_inf: Option<usize>,

        /// Toeplitz correlation in [0, 1).
        #[arg(long)]
        rho: Option<f64>,

        /// Scenario file (key-value) supplying any of the above.
        #[arg(long)]
        scenario_file: Option<PathBuf>,

        /// Which replicate of the scenario to generate.
        #[arg(long, default_value_t = 0)]
        replicate: usize,

        /// 'binary' (Bernoulli via the logistic link) or 'gaussian'.
        #[arg(long, default_value = "binary")]
        response_kind: String,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Output CSV (covariates x1..xp plus response y).
        #[arg(long)]
        output: PathBuf,

        /// Also write the ground truth (beta, informative set) as JSON.
        #[arg(long)]
        truth: Option<PathBuf>,
    },

    /// Run methods over simulated scenarios and emit metrics CSV + summary JSON.
    Benchmark {
        /// Scenario file(s) in key-value format; repeatable.
        #[arg(long)]
        scenario_file: Vec<PathBuf>,

        #[arg(long)]
        n: Option<usize>,

        #[arg(long)]
        p: Option<usize>,

        #[arg(long)]
        p_inf: Option<usize>,

        #[arg(long)]
        rho: Option<f64>,

        #[arg(long)]
        replications: Option<usize>,

        /// Comma-separated subset of probing,cv,stabsel.
        #[arg(long, default_value = "probing,cv")]
        methods: String,

        /// PFER for the 'stabsel' method token.
        #[arg(long)]
        pfer: Option<f64>,

        /// pi_thr for the 'stabsel' method token.
        #[arg(long)]
        pi_thr: Option<f64>,

        /// Add the nine-cell stability grid PFER x pi_thr from the
        /// benchmark design.
        #[arg(long, default_value_t = false)]
        paper_grid: bool,

        /// Subsamples per stability selection run.
        #[arg(long, default_value_t = 100)]
        b: usize,

        /// Iteration cap per stability subsample fit.
        #[arg(long, default_value_t = 5000)]
        stab_cap: usize,

        #[arg(long, default_value_t = 25)]
        cv_folds: usize,

        #[arg(long, default_value_t = 1000)]
        cv_m_max: usize,

        /// Safety cap for probing; defaults to min(10n, 10000).
        #[arg(long)]
        probe_cap: Option<usize>,

        #[arg(long, default_value_t = 0.1)]
        nu: f64,

        /// Loss for all methods (the simulated response is binary).
        #[arg(long, default_value = "logistic")]
        loss: String,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Metrics CSV path.
        #[arg(long)]
        out_csv: PathBuf,

        /// Per-scenario summary JSON path.
        #[arg(long)]
        out_json: Option<PathBuf>,

        /// Leave the runtime column empty so repeated runs are byte-identical.
        #[arg(long, default_value_t = false)]
        omit_runtime: bool,

        /// Run cross-validation on the shadow-augmented design.
        #[arg(long, default_value_t = false)]
        cv_on_augmented: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> AppResult<()> {
    init_thread_pool()?;
    match cli.command {
        Command::Fit {
            data,
            m_stop,
            output,
        } => {
            let (mut config, kv) = data.resolve("m_stop", 100)?;
            if let Some(m) = m_stop {
                config.m_stop = m;
            } else if let Some(m) = kv.get_parsed("m_stop")? {
                config.m_stop = m;
            }
            let dataset = io::load_csv(&data.input, &data.response)?;
            let trace = boost_fit(&dataset, &config, &mut FixedIterations)?;
            let selected = trace.distinct_selections();
            io::write_selection_csv(&output, dataset.column_names(), &selected, None)?;
            println!(
                "fit: {} iterations, {} variables selected, final risk {}",
                trace.iterations_performed,
                selected.len(),
                trace.risk_path.last().expect("risk path is never empty")
            );
            Ok(())
        }

        Command::Probe {
            data,
            cap,
            seed,
            output,
        } => {
            let dataset = io::load_csv(&data.input, &data.response)?;
            let (mut config, kv) = data.resolve("cap", default_probe_cap(dataset.n_rows()))?;
            if let Some(c) = cap {
                config.m_stop = c;
            } else if let Some(c) = kv.get_parsed("cap")? {
                config.m_stop = c;
            }
            let result = probe_select(&dataset, &config, seed)?;
            io::write_selection_csv(&output, dataset.column_names(), &result.selected, None)?;
            if result.capped {
                println!(
                    "probe: hit the safety cap ({} iterations) without a shadow selection; {} variables selected",
                    config.m_stop,
                    result.selected.len()
                );
            } else {
                println!(
                    "probe: first shadow at iteration {}, {} variables selected",
                    result.stop_iteration,
                    result.selected.len()
                );
            }
            Ok(())
        }

        Command::Stabsel {
            data,
            b,
            q,
            pi_thr,
            pfer,
            cap,
            seed,
            output,
        } => {
            let (config, kv) = data.resolve("cap", 5000)?;
            let dataset = io::load_csv(&data.input, &data.response)?;
            let params = StabilityParams {
                q: match q {
                    Some(v) => Some(v),
                    None => kv.get_parsed("q")?,
                },
                pi_thr: match pi_thr {
                    Some(v) => Some(v),
                    None => kv.get_parsed("pi_thr")?,
                },
                pfer: match pfer {
                    Some(v) => Some(v),
                    None => kv.get_parsed("pfer")?,
                },
            };
            let completed = complete_config(&params, dataset.n_cols())?;
            let b = match b {
                Some(v) => v,
                None => kv.get_parsed("b")?.unwrap_or(100),
            };
            let m_stop_cap = match cap {
                Some(v) => v,
                None => kv.get_parsed("cap")?.unwrap_or(5000),
            };
            let stab = StabilityConfig::new(completed, b, m_stop_cap, seed)?;
            let result = stability_select(&dataset, &config, &stab)?;
            io::write_selection_csv(
                &output,
                dataset.column_names(),
                &result.stable_set,
                Some(&result.frequencies),
            )?;
            println!(
                "stabsel: q={}, pi_thr={}, pfer={}; {} stable variables from B={} subsamples{}",
                completed.q,
                completed.pi_thr,
                completed.pfer,
                result.stable_set.len(),
                b,
                if result.cap_hits > 0 {
                    format!(" (warning: {} fits hit the iteration cap)", result.cap_hits)
                } else {
                    String::new()
                }
            );
            Ok(())
        }

        Command::Cv {
            data,
            folds,
            m_max,
            seed,
            output,
            risk_json,
        } => {
            let (config, kv) = data.resolve("m_max", 1000)?;
            let dataset = io::load_csv(&data.input, &data.response)?;
            let folds = match folds {
                Some(v) => v,
                None => kv.get_parsed("folds")?.unwrap_or(25),
            };
            let m_max = match m_max {
                Some(v) => v,
                None => kv.get_parsed("m_max")?.unwrap_or(1000),
            };
            let cv = CvConfig::new(folds, m_max, seed)?;
            let result = bootstrap_cv(&dataset, &config, &cv)?;
            let selected = result.final_trace.distinct_selections();
            io::write_selection_csv(&output, dataset.column_names(), &selected, None)?;
            if let Some(path) = risk_json {
                let doc = json!({
                    "m_opt": result.m_opt,
                    "mean_risk": result.mean_risk,
                });
                io::write_atomic(&path, format!("{:#}\n", doc).as_bytes())?;
            }
            println!(
                "cv: m_opt = {} over {} bootstrap folds, {} variables selected",
                result.m_opt,
                folds,
                selected.len()
            );
            Ok(())
        }

        Command::Simulate {
            n,
            p,
            p_inf,
            rho,
            scenario_file,
            replicate,
            response_kind,
            seed,
            output,
            truth,
        } => {
            let mut kv = match &scenario_file {
                Some(path) => KvMap::load(path)?,
                None => KvMap::default(),
            };
            if let Some(n) = n {
                kv.set("n", n);
            }
            if let Some(p) = p {
                kv.set("p", p);
            }
            if let Some(p_inf) = p_inf {
                kv.set("p_inf", p_inf);
            }
            if let Some(rho) = rho {
                kv.set("rho", rho);
            }
            kv.set("seed", seed);
            let scenario = scenario_from_kv(&kv)?;
            let kind = match response_kind.as_str() {
                "binary" => ResponseKind::Binary,
                "gaussian" => ResponseKind::Gaussian,
                other => {
                    return Err(AppError::Config(format!(
                        "unknown response kind '{}' (expected 'binary' or 'gaussian')",
                        other
                    )))
                }
            };
            let instance = simulate_instance::<f64>(&scenario, replicate, kind)?;
            io::write_dataset_csv(&output, &instance.data, "y")?;
            if let Some(path) = truth {
                let doc = json!({
                    "scenario": {
                        "n": scenario.n,
                        "p": scenario.p,
                        "p_inf": scenario.p_inf,
                        "rho": scenario.rho,
                        "seed": scenario.seed,
                    },
                    "replicate": replicate,
                    "informative_set": instance.informative_set,
                    "beta": instance.beta,
                });
                io::write_atomic(&path, format!("{:#}\n", doc).as_bytes())?;
            }
            println!(
                "simulate: wrote {} rows x {} covariates ({})",
                scenario.n,
                scenario.p,
                scenario.id()
            );
            Ok(())
        }

        Command::Benchmark {
            scenario_file,
            n,
            p,
            p_inf,
            rho,
            replications,
            methods,
            pfer,
            pi_thr,
            paper_grid: use_paper_grid,
            b,
            stab_cap,
            cv_folds,
            cv_m_max,
            probe_cap,
            nu,
            loss,
            seed,
            out_csv,
            out_json,
            omit_runtime,
            cv_on_augmented,
        } => {
            let mut scenarios = Vec::new();
            for path in &scenario_file {
                scenarios.push(scenario_from_kv(&KvMap::load(path)?)?);
            }
            if let (Some(n), Some(p), Some(p_inf), Some(rho)) = (n, p, p_inf, rho) {
                scenarios.push(SimulationScenario {
                    n,
                    p,
                    p_inf,
                    rho,
                    replications: replications.unwrap_or(1),
                    seed: 0,
                });
            } else if n.is_some() || p.is_some() || p_inf.is_some() || rho.is_some() {
                return Err(AppError::Config(
                    "an inline scenario needs all of --n, --p, --p-inf, --rho".into(),
                ));
            }

            let mut method_specs = Vec::new();
            for token in methods.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                match token {
                    "probing" => method_specs.push(MethodSpec::Probing),
                    "cv" => method_specs.push(MethodSpec::BootstrapCv),
                    "stabsel" => {
                        let (pfer, pi_thr) = match (pfer, pi_thr) {
                            (Some(pfer), Some(pi_thr)) => (pfer, pi_thr),
                            _ => {
                                return Err(AppError::Config(
                                    "method 'stabsel' needs --pfer and --pi-thr (or use --paper-grid)"
                                        .into(),
                                ))
                            }
                        };
                        method_specs.push(MethodSpec::StabSel { pfer, pi_thr });
                    }
                    other => {
                        return Err(AppError::Config(format!(
                            "unknown method '{}' (expected probing, cv, stabsel)",
                            other
                        )))
                    }
                }
            }
            if use_paper_grid {
                method_specs.extend(paper_grid());
            }

            let cfg = BenchmarkConfig {
                scenarios,
                methods: method_specs,
                nu,
                loss: parse_loss(&loss)?,
                stab_b: b,
                stab_cap,
                cv_folds,
                cv_m_max,
                probe_cap,
                seed,
                measure_runtime: !omit_runtime,
                cv_on_augmented,
            };
            let output = run_benchmark(&cfg)?;
            io::write_atomic(&out_csv, output.to_csv().as_bytes())?;
            if let Some(path) = out_json {
                let summary = output.summarize(seed);
                let text = serde_json::to_string_pretty(&summary)
                    .map_err(|e| AppError::Runtime(e.to_string()))?;
                io::write_atomic(&path, format!("{}\n", text).as_bytes())?;
            }
            let failures = output.records.iter().filter(|r| r.error.is_some()).count();
            println!(
                "benchmark: {} rows written ({} failures)",
                output.records.len(),
                failures
            );
            Ok(())
        }
    }
}
