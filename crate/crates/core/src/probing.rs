//! Shadow-variable probing: augment the design matrix with permuted copies
//! of every column and stop boosting at the first shadow selection.
//!
//! A shadow column is independent of the response by construction but keeps
//! the marginal distribution of its origin column, so the first time one
//! wins the greedy selection, every later pick is indistinguishable from
//! noise. The variables selected before that point are returned.

use rand::seq::SliceRandom;

use crate::boosting::{boost_fit, BoostConfig, FitTrace, StopDecision, StoppedBy, StoppingRule};
use crate::dataset::{ColMatrix, Dataset};
use crate::error::{Error, Result};
use crate::rng::derive_rng;
use crate::scalar::Scalar;

/// Dataset inflated to `2p` columns: the originals followed by one shadow
/// per original.
#[derive(Debug, Clone)]
pub struct ShadowAugmentedDataset<F> {
    /// The augmented dataset; columns `p..2p` carry the shadow mask.
    pub base: Dataset<F>,
    /// `origin_index[k]` is the original column permuted into column `p + k`.
    pub origin_index: Vec<usize>,
    pub permutation_seed: u64,
}

/// Outcome of one probing run.
#[derive(Debug, Clone)]
pub struct ProbeResult<F> {
    /// Distinct original-column indices selected before the first shadow.
    pub selected: Vec<usize>,
    /// 1-based iteration at which the first shadow was chosen; equals
    /// `iterations kept + 1`. If no shadow was selected before the safety
    /// cap, this is `m_stop + 1` (see [`ProbeResult::capped`]).
    pub stop_iteration: usize,
    /// Trace of the kept prefix, over the augmented (2p-column) design.
    pub trace: FitTrace<F>,
    pub seed: u64,
    /// True when the fit hit the `m_stop` safety cap without ever selecting
    /// a shadow column.
    pub capped: bool,
}

/// Default safety cap for probing fits. Probing normally stops within a few
/// dozen iterations; the cap only guards termination.
pub fn default_probe_cap(n: usize) -> usize {
    (10 * n).min(10_000)
}

/// Fires at the first selection of a shadow column; the triggering update
/// is discarded.
#[derive(Debug, Default, Clone, Copy)]
pub struct FirstShadowRule;

impl StoppingRule for FirstShadowRule {
    fn evaluate(&mut self, selected: usize, shadow_mask: &[bool], _iteration: usize) -> StopDecision {
        if shadow_mask[selected] {
            StopDecision::StopDiscard
        } else {
            StopDecision::Continue
        }
    }
}

/// Permutation of one column, drawn from its own ChaCha8 stream `(seed, j)`
/// so shadow generation is reproducible independently of scheduling.
fn permute_column<F: Scalar>(col: &[F], seed: u64, j: usize) -> Vec<F> {
    let mut rng = derive_rng(seed, j as u64);
    let mut shuffled = col.to_vec();
    shuffled.shuffle(&mut rng);
    shuffled
}

/// Appends one uniformly permuted copy of every column.
pub fn make_shadows<F: Scalar>(data: &Dataset<F>, seed: u64) -> Result<ShadowAugmentedDataset<F>> {
    if data.has_shadows() {
        return Err(Error::InvalidConfig(
            "dataset already contains shadow columns".into(),
        ));
    }
    let p = data.n_cols();
    let mut columns = Vec::with_capacity(2 * p);
    let mut names = Vec::with_capacity(2 * p);
    let mut mask = Vec::with_capacity(2 * p);
    for j in 0..p {
        columns.push(data.matrix().col(j).to_vec());
        names.push(data.column_names()[j].clone());
        mask.push(false);
    }
    for j in 0..p {
        columns.push(permute_column(data.matrix().col(j), seed, j));
        names.push(format!("{}.shadow", data.column_names()[j]));
        mask.push(true);
    }
    let base = Dataset::new(
        ColMatrix::from_columns(columns)?,
        data.response().to_vec(),
        names,
        mask,
    )?;
    Ok(ShadowAugmentedDataset {
        base,
        origin_index: (0..p).collect(),
        permutation_seed: seed,
    })
}

/// Runs boosting on the shadow-augmented design with the first-shadow
/// stopping rule and returns the original-column selections.
///
/// `config.m_stop` acts as a safety cap; see [`default_probe_cap`].
pub fn probe_select<F: Scalar>(
    data: &Dataset<F>,
    config: &BoostConfig,
    seed: u64,
) -> Result<ProbeResult<F>> {
    let augmented = make_shadows(data, seed)?;
    let mut rule = FirstShadowRule;
    let trace = boost_fit(&augmented.base, config, &mut rule)?;

    let capped = matches!(trace.stopped_by, StoppedBy::MaxIterations);
    let stop_iteration = trace.iterations_performed + 1;
    let selected = trace.distinct_selections();
    debug_assert!(
        selected.iter().all(|&j| !augmented.base.shadow_mask()[j]),
        "kept prefix must not contain shadow selections"
    );
    Ok(ProbeResult {
        selected,
        stop_iteration,
        trace,
        seed,
        capped,
    })
}
