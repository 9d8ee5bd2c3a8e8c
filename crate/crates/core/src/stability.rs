//! Stability selection: repeated boosting on half-subsamples, selection
//! frequencies, and the per-family error bound
//! `E(V) <= q^2 / ((2*pi_thr - 1) * p)`.
//!
//! The user provides any two of (q, pi_thr, pfer); the third is completed
//! by assuming equality in the bound. Derived q is floored, which keeps the
//! bound conservative.

use std::collections::BTreeSet;

use rand::seq::index;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boosting::{boost_fit, BoostConfig, StopDecision, StoppedBy, StoppingRule};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::loss::LossKind;
use crate::rng::derive_rng;
use crate::scalar::Scalar;

const SUBSAMPLE_RETRY_LIMIT: usize = 100;

/// User-facing hyperparameters: exactly two of the three must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StabilityParams {
    pub q: Option<usize>,
    pub pi_thr: Option<f64>,
    pub pfer: Option<f64>,
}

/// The (q, pi_thr, pfer) triple after completing the missing member from
/// the error bound at equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedStability {
    pub q: usize,
    pub pi_thr: f64,
    pub pfer: f64,
}

/// Full configuration for a stability-selection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConfig {
    /// Number of subsamples B (at least 2; 100 is the usual choice).
    pub b_subsamples: usize,
    /// Per-fit cap on distinct selected variables.
    pub q: usize,
    /// Selection-frequency threshold in (0.5, 1].
    pub pi_thr: f64,
    /// Upper bound on the expected number of false positives.
    pub pfer: f64,
    /// Iteration cap for each subsample fit.
    pub m_stop_cap: usize,
    pub seed: u64,
}

impl StabilityConfig {
    pub fn new(completed: CompletedStability, b_subsamples: usize, m_stop_cap: usize, seed: u64) -> Result<Self> {
        if b_subsamples < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 subsamples, got {}",
                b_subsamples
            )));
        }
        if m_stop_cap < 1 {
            return Err(Error::InvalidConfig("m_stop_cap must be at least 1".into()));
        }
        Ok(Self {
            b_subsamples,
            q: completed.q,
            pi_thr: completed.pi_thr,
            pfer: completed.pfer,
            m_stop_cap,
            seed,
        })
    }
}

/// Selection frequencies and the stable set.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityResult {
    /// `frequencies[j]` = (number of subsample sets containing j) / B.
    pub frequencies: Vec<f64>,
    /// Variables with frequency at least `pi_thr`, ascending.
    pub stable_set: Vec<usize>,
    /// The B selected-variable sets, each ascending.
    pub per_subsample_sets: Vec<Vec<usize>>,
    /// Subsample fits that hit `m_stop_cap` before selecting q distinct
    /// variables. A nonzero count can bias frequencies downward.
    pub cap_hits: usize,
}

impl StabilityResult {
    /// Aggregates per-subsample selection sets into frequencies and the
    /// stable set (Eqs. for selection frequency and thresholding).
    pub fn from_sets(per_subsample_sets: Vec<Vec<usize>>, p: usize, pi_thr: f64, cap_hits: usize) -> Self {
        let b = per_subsample_sets.len();
        let mut counts = vec![0usize; p];
        for set in &per_subsample_sets {
            for &j in set {
                counts[j] += 1;
            }
        }
        let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / b as f64).collect();
        let stable_set = frequencies
            .iter()
            .enumerate()
            .filter(|(_, &f)| f >= pi_thr)
            .map(|(j, _)| j)
            .collect();
        Self {
            frequencies,
            stable_set,
            per_subsample_sets,
            cap_hits,
        }
    }
}

fn validate_pi_thr(pi_thr: f64) -> Result<()> {
    if pi_thr > 0.5 && pi_thr <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "pi_thr must lie in (0.5, 1], got {}",
            pi_thr
        )))
    }
}

/// Completes the missing member of (q, pi_thr, pfer) from the error bound
/// at equality:
///
/// - `pfer  = q^2 / ((2*pi_thr - 1) * p)`
/// - `q     = floor(sqrt(pfer * (2*pi_thr - 1) * p))`
/// - `pi_thr = (q^2 / (pfer * p) + 1) / 2`
pub fn complete_config(params: &StabilityParams, p: usize) -> Result<CompletedStability> {
    if p < 1 {
        return Err(Error::InvalidConfig("need at least one variable".into()));
    }
    let p_f = p as f64;
    if let Some(q) = params.q {
        if q < 1 {
            return Err(Error::InvalidConfig("q must be at least 1".into()));
        }
    }
    if let Some(pfer) = params.pfer {
        if !(pfer > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "pfer must be positive, got {}",
                pfer
            )));
        }
    }
    match (params.q, params.pi_thr, params.pfer) {
        (Some(q), Some(pi_thr), None) => {
            validate_pi_thr(pi_thr)?;
            let pfer = (q * q) as f64 / ((2.0 * pi_thr - 1.0) * p_f);
            Ok(CompletedStability { q, pi_thr, pfer })
        }
        (None, Some(pi_thr), Some(pfer)) => {
            validate_pi_thr(pi_thr)?;
            let target = pfer * (2.0 * pi_thr - 1.0) * p_f;
            let mut q = target.sqrt().floor() as usize;
            // Largest integer with q^2 <= target, robust to the rounding of
            // the product above (a perfect square must survive the round trip).
            if ((q + 1) as f64).powi(2) <= target * (1.0 + 1e-9) {
                q += 1;
            }
            if q < 1 {
                return Err(Error::InvalidConfig(format!(
                    "derived q is below 1 for pfer={}, pi_thr={}, p={}",
                    pfer, pi_thr, p
                )));
            }
            Ok(CompletedStability { q, pi_thr, pfer })
        }
        (Some(q), None, Some(pfer)) => {
            let pi_thr = ((q * q) as f64 / (pfer * p_f) + 1.0) / 2.0;
            validate_pi_thr(pi_thr)?;
            Ok(CompletedStability { q, pi_thr, pfer })
        }
        _ => Err(Error::InvalidConfig(
            "exactly two of q, pi_thr, pfer must be provided".into(),
        )),
    }
}

/// Uniform subsample of size `floor(n/2)` without replacement, ascending,
/// deterministic in `(seed, b)`.
pub fn subsample_indices(n: usize, seed: u64, b: u64) -> Result<Vec<usize>> {
    if n < 4 {
        return Err(Error::InvalidConfig(format!(
            "subsampling needs n >= 4, got {}",
            n
        )));
    }
    let mut rng = derive_rng(seed, b);
    Ok(draw_half(&mut rng, n))
}

fn draw_half(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut rows = index::sample(rng, n, n / 2).into_vec();
    rows.sort_unstable();
    rows
}

/// Fires once `cap` distinct variables have been selected; the triggering
/// update is kept, so the q-th variable counts as selected.
#[derive(Debug, Clone)]
pub struct DistinctCountRule {
    cap: usize,
    seen: BTreeSet<usize>,
}

impl DistinctCountRule {
    pub fn new(cap: usize) -> Self {
        Self {
            cap,
            seen: BTreeSet::new(),
        }
    }
}

impl StoppingRule for DistinctCountRule {
    fn evaluate(&mut self, selected: usize, _mask: &[bool], _iteration: usize) -> StopDecision {
        self.seen.insert(selected);
        if self.seen.len() >= self.cap {
            StopDecision::StopKeep
        } else {
            StopDecision::Continue
        }
    }
}

fn is_degenerate_response<F: Scalar>(y: &[F], loss: LossKind) -> bool {
    match loss {
        LossKind::SquaredError => false,
        LossKind::Logistic => y.iter().all(|&v| v == F::zero()) || y.iter().all(|&v| v == F::one()),
    }
}

/// Runs B subsample fits (in parallel, with per-subsample derived streams)
/// and aggregates selection frequencies into the stable set.
///
/// `boost.m_stop` is ignored; each subsample fit runs under
/// [`DistinctCountRule`] capped at `stab.m_stop_cap` iterations. Subsamples
/// with a degenerate response are redrawn from the same stream, up to 100
/// times each.
pub fn stability_select<F: Scalar>(
    data: &Dataset<F>,
    boost: &BoostConfig,
    stab: &StabilityConfig,
) -> Result<StabilityResult> {
    if data.has_shadows() {
        return Err(Error::InvalidConfig(
            "stability selection expects an unaugmented dataset".into(),
        ));
    }
    let n = data.n_rows();
    if n < 4 {
        return Err(Error::InvalidConfig(format!(
            "stability selection needs n >= 4, got {}",
            n
        )));
    }
    let fit_config = BoostConfig {
        m_stop: stab.m_stop_cap,
        ..*boost
    };

    let fits: Result<Vec<(Vec<usize>, bool)>> = (0..stab.b_subsamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = derive_rng(stab.seed, b as u64);
            let mut rows = draw_half(&mut rng, n);
            let mut retries = 0;
            loop {
                let sub = data.select_rows(&rows)?;
                if !is_degenerate_response(sub.response(), boost.loss) {
                    let mut rule = DistinctCountRule::new(stab.q);
                    let trace = boost_fit(&sub, &fit_config, &mut rule)?;
                    let selected = trace.distinct_selections();
                    let cap_hit = matches!(trace.stopped_by, StoppedBy::MaxIterations)
                        && selected.len() < stab.q;
                    return Ok((selected, cap_hit));
                }
                retries += 1;
                if retries >= SUBSAMPLE_RETRY_LIMIT {
                    return Err(Error::RetryLimit {
                        limit: SUBSAMPLE_RETRY_LIMIT,
                        context: format!("subsample {} kept a single-class response", b),
                    });
                }
                rows = draw_half(&mut rng, n);
            }
        })
        .collect();

    let fits = fits?;
    let cap_hits = fits.iter().filter(|(_, hit)| *hit).count();
    let sets = fits.into_iter().map(|(s, _)| s).collect();
    Ok(StabilityResult::from_sets(
        sets,
        data.n_cols(),
        stab.pi_thr,
        cap_hits,
    ))
}
