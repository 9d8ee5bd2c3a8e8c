//! Bootstrap cross-validation of the number of boosting iterations.
//!
//! Each replicate draws n rows with replacement, fits the full path on the
//! in-bag rows, and scores every prefix of the path on the out-of-bag rows.
//! The iteration count minimizing the mean out-of-bag risk wins, and the
//! model is refit on the full data at that count.

use rand::Rng;
use rayon::prelude::*;

use crate::boosting::{boost_fit, fit_offset_only, BoostConfig, FitTrace, FixedIterations};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::loss::{empirical_risk, LossKind};
use crate::rng::derive_rng;
use crate::scalar::Scalar;

const BOOTSTRAP_RETRY_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    /// Bootstrap replicates (at least 2; 25 is the usual default).
    pub folds: usize,
    /// Upper bound of the iteration grid; every m in 0..=m_max is scored.
    pub m_max: usize,
    pub seed: u64,
}

impl CvConfig {
    pub fn new(folds: usize, m_max: usize, seed: u64) -> Result<Self> {
        if folds < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 bootstrap folds, got {}",
                folds
            )));
        }
        if m_max < 1 {
            return Err(Error::InvalidConfig("m_max must be at least 1".into()));
        }
        Ok(Self {
            folds,
            m_max,
            seed,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CvResult<F> {
    /// Out-of-bag risk per fold and iteration count: folds x (m_max + 1).
    pub risk_matrix: Vec<Vec<F>>,
    /// Column means of `risk_matrix`.
    pub mean_risk: Vec<F>,
    /// argmin of `mean_risk`; ties go to the smaller (more regularized) m.
    pub m_opt: usize,
    /// Fit on the full data with `m_opt` iterations.
    pub final_trace: FitTrace<F>,
}

fn is_degenerate_response<F: Scalar>(y: &[F], loss: LossKind) -> bool {
    match loss {
        LossKind::SquaredError => false,
        LossKind::Logistic => y.iter().all(|&v| v == F::zero()) || y.iter().all(|&v| v == F::one()),
    }
}

/// Out-of-bag risks along the boosting path, built incrementally from the
/// per-iteration increments of the in-bag fit.
fn oob_risk_path<F: Scalar>(
    trace: &FitTrace<F>,
    data: &Dataset<F>,
    oob: &[usize],
    loss: LossKind,
    m_max: usize,
) -> Vec<F> {
    let y_oob: Vec<F> = oob.iter().map(|&r| data.response()[r]).collect();
    let mut f_oob = vec![trace.offset; oob.len()];
    let mut risks = Vec::with_capacity(m_max + 1);
    risks.push(empirical_risk(loss, &y_oob, &f_oob));
    for m in 0..trace.iterations_performed {
        let j = trace.selection_path[m];
        let inc = trace.increments[m];
        let mean = trace.column_means[j];
        let col = data.matrix().col(j);
        for (fi, &r) in f_oob.iter_mut().zip(oob) {
            *fi += inc * (col[r] - mean);
        }
        risks.push(empirical_risk(loss, &y_oob, &f_oob));
    }
    // A fit can only end before m_max if nothing was fittable; keep the
    // grid rectangular by carrying the last risk forward.
    while risks.len() < m_max + 1 {
        risks.push(*risks.last().unwrap());
    }
    risks
}

/// Bootstrap cross-validation: picks the iteration count with the smallest
/// mean out-of-bag risk and refits on the full data.
///
/// Replicates with an empty out-of-bag set or a degenerate in-bag response
/// are redrawn (limit 100 per fold). `boost.m_stop` is ignored in favor of
/// `cv.m_max`.
pub fn bootstrap_cv<F: Scalar>(
    data: &Dataset<F>,
    boost: &BoostConfig,
    cv: &CvConfig,
) -> Result<CvResult<F>> {
    let n = data.n_rows();
    if n < 10 {
        return Err(Error::InvalidConfig(format!(
            "bootstrap cross-validation needs n >= 10, got {}",
            n
        )));
    }
    let fit_config = BoostConfig {
        m_stop: cv.m_max,
        ..*boost
    };

    let risk_matrix: Result<Vec<Vec<F>>> = (0..cv.folds)
        .into_par_iter()
        .map(|fold| {
            let mut rng = derive_rng(cv.seed, fold as u64);
            let mut retries = 0;
            loop {
                let in_bag: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                let mut hit = vec![false; n];
                for &r in &in_bag {
                    hit[r] = true;
                }
                let oob: Vec<usize> = (0..n).filter(|&r| !hit[r]).collect();

                let in_bag_data = data.select_rows(&in_bag)?;
                if !oob.is_empty() && !is_degenerate_response(in_bag_data.response(), boost.loss) {
                    let trace = boost_fit(&in_bag_data, &fit_config, &mut FixedIterations)?;
                    return Ok(oob_risk_path(&trace, data, &oob, boost.loss, cv.m_max));
                }
                retries += 1;
                if retries >= BOOTSTRAP_RETRY_LIMIT {
                    return Err(Error::RetryLimit {
                        limit: BOOTSTRAP_RETRY_LIMIT,
                        context: format!(
                            "bootstrap fold {} kept drawing degenerate replicates",
                            fold
                        ),
                    });
                }
            }
        })
        .collect();
    let risk_matrix = risk_matrix?;

    let folds_f = F::from_usize(cv.folds);
    let mean_risk: Vec<F> = (0..=cv.m_max)
        .map(|m| {
            risk_matrix
                .iter()
                .map(|row| row[m])
                .sum::<F>()
                / folds_f
        })
        .collect();

    let mut m_opt = 0;
    for (m, &risk) in mean_risk.iter().enumerate() {
        if risk < mean_risk[m_opt] {
            m_opt = m;
        }
    }

    let final_trace = if m_opt == 0 {
        fit_offset_only(data, boost)?
    } else {
        let refit_config = BoostConfig {
            m_stop: m_opt,
            ..*boost
        };
        boost_fit(data, &refit_config, &mut FixedIterations)?
    };

    Ok(CvResult {
        risk_matrix,
        mean_risk,
        m_opt,
        final_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boosting::predict;
    use crate::dataset::ColMatrix;
    use approx::assert_relative_eq;
    use rand::Rng as _;

    fn signal_dataset(seed: u64, n: usize, p: usize, noise: f64) -> Dataset<f64> {
        let mut rng = derive_rng(seed, 0);
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 1.5 * cols[0][i] - cols[1][i] + noise * rng.gen_range(-1.0..1.0))
            .collect();
        Dataset::from_parts(ColMatrix::from_columns(cols).unwrap(), y).unwrap()
    }

    #[test]
    fn grid_contract_m_max_one() {
        let data = signal_dataset(1, 30, 4, 0.5);
        let boost = BoostConfig::new(0.1, 1, LossKind::SquaredError);
        let cv = CvConfig::new(5, 1, 7).unwrap();
        let result = bootstrap_cv(&data, &boost, &cv).unwrap();
        assert!(result.m_opt <= 1);
        assert_eq!(result.risk_matrix.len(), 5);
        for row in &result.risk_matrix {
            assert_eq!(row.len(), 2);
        }
        assert_eq!(result.mean_risk.len(), 2);
    }

    #[test]
    fn mean_risk_is_column_mean() {
        let data = signal_dataset(2, 40, 5, 0.3);
        let boost = BoostConfig::new(0.2, 1, LossKind::SquaredError);
        let cv = CvConfig::new(8, 20, 3).unwrap();
        let result = bootstrap_cv(&data, &boost, &cv).unwrap();
        for m in 0..=20 {
            let mean: f64 =
                result.risk_matrix.iter().map(|row| row[m]).sum::<f64>() / 8.0;
            assert_relative_eq!(result.mean_risk[m], mean, max_relative = 1e-12);
        }
        // argmin contract with ties toward the smallest m.
        for (m, &r) in result.mean_risk.iter().enumerate() {
            assert!(result.mean_risk[result.m_opt] <= r || m == result.m_opt);
        }
        assert!(result
            .mean_risk
            .iter()
            .take(result.m_opt)
            .all(|&r| r > result.mean_risk[result.m_opt]));
    }

    #[test]
    fn signal_data_picks_positive_m() {
        let data = signal_dataset(3, 60, 5, 0.2);
        let boost = BoostConfig::new(0.1, 1, LossKind::SquaredError);
        let cv = CvConfig::new(10, 150, 11).unwrap();
        let result = bootstrap_cv(&data, &boost, &cv).unwrap();
        assert!(result.m_opt > 0);
        assert_eq!(result.final_trace.iterations_performed, result.m_opt);
        let selected = result.final_trace.distinct_selections();
        assert!(selected.contains(&0));
    }

    // Oracle: rebuild the coefficient vector at every m and re-predict the
    // out-of-bag rows from scratch.
    #[test]
    fn incremental_risk_matches_full_reprediction() {
        let data = signal_dataset(4, 30, 4, 0.4);
        let boost = BoostConfig::new(0.15, 1, LossKind::SquaredError);
        let m_max = 25;

        let mut rng = derive_rng(21, 0);
        let n = data.n_rows();
        let in_bag: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut hit = vec![false; n];
        for &r in &in_bag {
            hit[r] = true;
        }
        let oob: Vec<usize> = (0..n).filter(|&r| !hit[r]).collect();
        assert!(!oob.is_empty());

        let in_bag_data = data.select_rows(&in_bag).unwrap();
        let fit_config = BoostConfig {
            m_stop: m_max,
            ..boost
        };
        let trace = boost_fit(&in_bag_data, &fit_config, &mut FixedIterations).unwrap();
        let incremental = oob_risk_path(&trace, &data, &oob, boost.loss, m_max);

        let oob_matrix = data.matrix().select_rows(&oob);
        let y_oob: Vec<f64> = oob.iter().map(|&r| data.response()[r]).collect();
        for m in 0..=m_max {
            let mut at_m = trace.clone();
            at_m.coefficients = trace.coefficients_at(m);
            let f = predict(&at_m, &oob_matrix).unwrap();
            let naive = empirical_risk(boost.loss, &y_oob, &f);
            assert_relative_eq!(incremental[m], naive, max_relative = 1e-10);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let data = signal_dataset(5, 25, 3, 0.5);
        let boost = BoostConfig::new(0.1, 1, LossKind::SquaredError);
        let cv = CvConfig::new(6, 40, 99).unwrap();
        let a = bootstrap_cv(&data, &boost, &cv).unwrap();
        let b = bootstrap_cv(&data, &boost, &cv).unwrap();
        assert_eq!(a.m_opt, b.m_opt);
        assert_eq!(a.mean_risk, b.mean_risk);
        assert_eq!(a.final_trace.selection_path, b.final_trace.selection_path);
    }

    #[test]
    fn logistic_in_bag_degenerates_are_redrawn() {
        let mut rng = derive_rng(6, 0);
        let n = 12;
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        // Two positives in twelve rows: many bootstrap draws miss both.
        let mut y = vec![0.0; n];
        y[0] = 1.0;
        y[5] = 1.0;
        let data = Dataset::from_parts(ColMatrix::from_columns(cols).unwrap(), y).unwrap();
        let boost = BoostConfig::new(0.1, 1, LossKind::Logistic);
        let cv = CvConfig::new(10, 15, 17).unwrap();
        let result = bootstrap_cv(&data, &boost, &cv).unwrap();
        assert_eq!(result.risk_matrix.len(), 10);
    }

    #[test]
    fn config_validation() {
        assert!(CvConfig::new(1, 10, 0).is_err());
        assert!(CvConfig::new(5, 0, 0).is_err());
        let data = signal_dataset(7, 8, 3, 0.1);
        let boost = BoostConfig::new(0.1, 1, LossKind::SquaredError);
        let cv = CvConfig::new(5, 10, 0).unwrap();
        assert!(bootstrap_cv(&data, &boost, &cv).is_err(), "n < 10 rejected");
    }
}
