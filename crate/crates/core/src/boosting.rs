//! Component-wise gradient boosting with slope-only linear base learners.
//!
//! Each iteration fits one least-squares slope per column to the current
//! negative gradient, picks the column with the smallest squared error
//! (ties go to the lowest column index), and adds a `nu`-scaled multiple of
//! that fit to the additive predictor. Covariates are centered once up
//! front; the intercept stays fixed at the loss-minimal offset.

use crate::dataset::{ColMatrix, Dataset};
use crate::error::{Error, Result};
use crate::loss::{empirical_risk, init_offset, negative_gradient, LossKind};
use crate::scalar::Scalar;

/// Boosting hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConfig {
    /// Step length in (0, 1].
    pub nu: f64,
    /// Maximum number of iterations (at least 1).
    pub m_stop: usize,
    pub loss: LossKind,
    /// Center covariates once before fitting and record the means.
    pub center_covariates: bool,
}

impl BoostConfig {
    pub fn new(nu: f64, m_stop: usize, loss: LossKind) -> Self {
        Self {
            nu,
            m_stop,
            loss,
            center_covariates: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "step length nu must be in (0, 1], got {}",
                self.nu
            )));
        }
        if self.m_stop < 1 {
            return Err(Error::InvalidConfig("m_stop must be at least 1".into()));
        }
        Ok(())
    }
}

/// Verdict of a stopping rule after a column has been selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    /// Stop without applying the triggering update (probing semantics).
    StopDiscard,
    /// Apply the triggering update, then stop (selection-count semantics).
    StopKeep,
}

/// Early-stopping predicate, evaluated once per iteration right after the
/// best column has been identified and before the update is applied.
pub trait StoppingRule {
    fn evaluate(&mut self, selected: usize, shadow_mask: &[bool], iteration: usize)
        -> StopDecision;
}

/// Runs all `m_stop` iterations; never fires.
#[derive(Debug, Default, Clone, Copy)]
pub struct FixedIterations;

impl StoppingRule for FixedIterations {
    fn evaluate(&mut self, _selected: usize, _mask: &[bool], _iteration: usize) -> StopDecision {
        StopDecision::Continue
    }
}

/// How a fit ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoppedBy {
    /// Ran through all `m_stop` iterations without the rule firing.
    MaxIterations,
    /// The rule fired at this 1-based iteration; `kept_update` records
    /// whether the triggering update was applied.
    Rule { iteration: usize, kept_update: bool },
}

/// Full record of one boosting fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitTrace<F> {
    /// Loss-minimal constant fit.
    pub offset: F,
    /// Per-column centering constants (all zero when centering is off).
    pub column_means: Vec<F>,
    /// Accumulated slopes, one per column.
    pub coefficients: Vec<F>,
    /// Column selected at each performed iteration.
    pub selection_path: Vec<usize>,
    /// `nu`-scaled slope applied at each performed iteration.
    pub increments: Vec<F>,
    /// In-sample empirical risk; entry 0 is the offset-only model, so the
    /// length is always `iterations_performed + 1`.
    pub risk_path: Vec<F>,
    pub iterations_performed: usize,
    pub stopped_by: StoppedBy,
}

impl<F: Scalar> FitTrace<F> {
    /// Distinct selected columns in ascending order.
    pub fn distinct_selections(&self) -> Vec<usize> {
        let mut s = self.selection_path.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Coefficient vector after the first `m` iterations (`m <= iterations_performed`).
    pub fn coefficients_at(&self, m: usize) -> Vec<F> {
        assert!(m <= self.iterations_performed);
        let mut coef = vec![F::zero(); self.coefficients.len()];
        for (&j, &inc) in self.selection_path.iter().zip(&self.increments).take(m) {
            coef[j] += inc;
        }
        coef
    }
}

/// Least-squares slope of `u` on a centered column, plus the squared error
/// of that fit. Returns `None` for constant columns, which are excluded
/// from the selection with `sse = +inf` semantics.
pub fn fit_base_learner<F: Scalar>(x: &[F], u: &[F]) -> Option<(F, F)> {
    assert_eq!(x.len(), u.len(), "column and gradient must have equal length");
    let mut sxx = F::zero();
    let mut sxu = F::zero();
    for (&xi, &ui) in x.iter().zip(u) {
        sxx += xi * xi;
        sxu += xi * ui;
    }
    if sxx == F::zero() {
        return None;
    }
    let slope = sxu / sxx;
    let mut sse = F::zero();
    for (&xi, &ui) in x.iter().zip(u) {
        let r = ui - slope * xi;
        sse += r * r;
    }
    Some((slope, sse))
}

struct PreparedColumns<F> {
    centered: ColMatrix<F>,
    means: Vec<F>,
    fittable: Vec<bool>,
}

fn prepare_columns<F: Scalar>(data: &Dataset<F>, center: bool) -> Result<PreparedColumns<F>> {
    let (n, p) = (data.n_rows(), data.n_cols());
    let n_f = F::from_usize(n);
    let mut buf = Vec::with_capacity(n * p);
    let mut means = Vec::with_capacity(p);
    let mut fittable = Vec::with_capacity(p);
    for j in 0..p {
        let col = data.matrix().col(j);
        let constant = col.iter().all(|&v| v == col[0]);
        let mean = if center {
            col.iter().copied().sum::<F>() / n_f
        } else {
            F::zero()
        };
        means.push(mean);
        if constant {
            // Zero-variance column: exclude it and keep its centered image
            // exactly zero so downstream sums stay clean.
            fittable.push(false);
            buf.extend(std::iter::repeat(F::zero()).take(n));
        } else {
            fittable.push(true);
            buf.extend(col.iter().map(|&v| v - mean));
        }
    }
    if fittable.iter().all(|&f| !f) {
        return Err(Error::NoUsableCovariate);
    }
    Ok(PreparedColumns {
        centered: ColMatrix::from_col_major(buf, n, p)?,
        means,
        fittable,
    })
}

/// Runs component-wise boosting until the stopping rule fires or `m_stop`
/// iterations have been performed.
///
/// When the rule answers [`StopDecision::StopDiscard`], the triggering
/// iteration leaves no trace: the returned state is exactly the fit before
/// that selection.
pub fn boost_fit<F: Scalar>(
    data: &Dataset<F>,
    config: &BoostConfig,
    rule: &mut dyn StoppingRule,
) -> Result<FitTrace<F>> {
    config.validate()?;
    config.loss.validate_response(data.response())?;

    let (n, p) = (data.n_rows(), data.n_cols());
    let prep = prepare_columns(data, config.center_covariates)?;
    let y = data.response();
    let mask = data.shadow_mask();
    let nu = F::from_f64(config.nu);

    let offset = init_offset(y, config.loss)?;
    let mut fitted = vec![offset; n];
    let mut coefficients = vec![F::zero(); p];
    let mut selection_path = Vec::new();
    let mut increments = Vec::new();
    let mut risk_path = vec![empirical_risk(config.loss, y, &fitted)];
    let mut stopped_by = StoppedBy::MaxIterations;

    for m in 1..=config.m_stop {
        let u = negative_gradient(config.loss, y, &fitted);
        let mut best: Option<(F, usize, F)> = None; // (sse, column, slope)
        for j in 0..p {
            if !prep.fittable[j] {
                continue;
            }
            let (slope, sse) = fit_base_learner(prep.centered.col(j), u.as_slice())
                .expect("fittable column has positive variance");
            // Ties go to the lowest column index: strict < with ascending j.
            if best.map_or(true, |(b, _, _)| sse < b) {
                best = Some((sse, j, slope));
            }
        }
        let (_, j_star, slope) = best.expect("at least one fittable column");

        match rule.evaluate(j_star, mask, m) {
            StopDecision::StopDiscard => {
                stopped_by = StoppedBy::Rule {
                    iteration: m,
                    kept_update: false,
                };
                break;
            }
            decision => {
                let step = nu * slope;
                coefficients[j_star] += step;
                for (fi, &xi) in fitted.iter_mut().zip(prep.centered.col(j_star)) {
                    *fi += step * xi;
                }
                selection_path.push(j_star);
                increments.push(step);
                risk_path.push(empirical_risk(config.loss, y, &fitted));
                if decision == StopDecision::StopKeep {
                    stopped_by = StoppedBy::Rule {
                        iteration: m,
                        kept_update: true,
                    };
                    break;
                }
            }
        }
    }

    let iterations_performed = selection_path.len();
    Ok(FitTrace {
        offset,
        column_means: prep.means,
        coefficients,
        selection_path,
        increments,
        risk_path,
        iterations_performed,
        stopped_by,
    })
}

/// Offset-only fit: the state of a boosting model after zero iterations.
pub fn fit_offset_only<F: Scalar>(data: &Dataset<F>, config: &BoostConfig) -> Result<FitTrace<F>> {
    config.loss.validate_response(data.response())?;
    let prep = prepare_columns(data, config.center_covariates)?;
    let offset = init_offset(data.response(), config.loss)?;
    let fitted = vec![offset; data.n_rows()];
    Ok(FitTrace {
        offset,
        column_means: prep.means,
        coefficients: vec![F::zero(); data.n_cols()],
        selection_path: Vec::new(),
        increments: Vec::new(),
        risk_path: vec![empirical_risk(config.loss, data.response(), &fitted)],
        iterations_performed: 0,
        stopped_by: StoppedBy::MaxIterations,
    })
}

/// Additive-model prediction: offset plus the centered linear effects.
pub fn predict<F: Scalar>(trace: &FitTrace<F>, x: &ColMatrix<F>) -> Result<Vec<F>> {
    if x.n_cols() != trace.coefficients.len() {
        return Err(Error::ShapeMismatch(format!(
            "prediction matrix has {} columns, trace has {}",
            x.n_cols(),
            trace.coefficients.len()
        )));
    }
    let mut f = vec![trace.offset; x.n_rows()];
    for (j, &coef) in trace.coefficients.iter().enumerate() {
        if coef == F::zero() {
            continue;
        }
        let mean = trace.column_means[j];
        for (fi, &xi) in f.iter_mut().zip(x.col(j)) {
            *fi += coef * (xi - mean);
        }
    }
    Ok(f)
}
