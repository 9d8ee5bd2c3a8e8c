//! Selection-quality metrics for the benchmark harness.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Fraction of the informative variables that were selected.
pub fn tpr(selected: &[usize], informative: &[usize]) -> Result<f64> {
    if informative.is_empty() {
        return Err(Error::EmptyInformativeSet);
    }
    let informative: HashSet<usize> = informative.iter().copied().collect();
    let selected: HashSet<usize> = selected.iter().copied().collect();
    let hits = selected.intersection(&informative).count();
    Ok(hits as f64 / informative.len() as f64)
}

/// Fraction of the selected set that is uninformative. An empty selection
/// has FDR 0 by convention.
pub fn fdr(selected: &[usize], informative: &[usize]) -> f64 {
    let selected: HashSet<usize> = selected.iter().copied().collect();
    if selected.is_empty() {
        return 0.0;
    }
    let informative: HashSet<usize> = informative.iter().copied().collect();
    let false_positives = selected.difference(&informative).count();
    false_positives as f64 / selected.len() as f64
}

/// One method's selection quality on one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionMetrics {
    pub method: String,
    pub scenario_id: String,
    pub replicate: usize,
    pub n_selected: usize,
    /// `None` when the scenario has no informative variables (TPR is
    /// undefined without them).
    pub tpr: Option<f64>,
    pub fdr: f64,
    /// Wall-clock of the selection call only; `None` when timing is
    /// suppressed for byte-reproducible output.
    pub runtime_seconds: Option<f64>,
}
