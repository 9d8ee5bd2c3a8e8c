//! Benchmark data generation: Toeplitz-correlated Gaussian covariates,
//! sparse uniform coefficients, and Bernoulli responses.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dataset::{ColMatrix, Dataset};
use crate::error::{Error, Result};
use crate::loss::sigmoid;
use crate::rng::{derive_rng, mix_seed};
use crate::scalar::Scalar;

/// Linear predictors are clamped to this magnitude before the logistic
/// transform; sigma(35) is 1 within double precision, so draws are
/// unchanged while exp cannot overflow.
const ETA_CAP: f64 = 35.0;

/// One cell of the benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationScenario {
    pub n: usize,
    pub p: usize,
    /// Number of informative (non-zero coefficient) variables.
    pub p_inf: usize,
    /// Toeplitz correlation parameter in [0, 1).
    pub rho: f64,
    pub replications: usize,
    pub seed: u64,
}

impl SimulationScenario {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "scenario needs n >= 2, got {}",
                self.n
            )));
        }
        if self.p < 1 {
            return Err(Error::InvalidConfig("scenario needs p >= 1".into()));
        }
        if self.p_inf > self.p {
            return Err(Error::InvalidConfig(format!(
                "p_inf = {} exceeds p = {}",
                self.p_inf, self.p
            )));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidConfig(format!(
                "rho must lie in [0, 1), got {}",
                self.rho
            )));
        }
        if self.replications < 1 {
            return Err(Error::InvalidConfig("need at least 1 replication".into()));
        }
        Ok(())
    }

    /// Stable label used in benchmark output: `n100_p500_pinf5_rho0.9`.
    pub fn id(&self) -> String {
        format!("n{}_p{}_pinf{}_rho{}", self.n, self.p, self.p_inf, self.rho)
    }
}

/// One generated dataset with its ground truth.
#[derive(Debug, Clone)]
pub struct SimulatedInstance<F> {
    pub data: Dataset<F>,
    pub beta: Vec<F>,
    /// Ascending indices of the non-zero coefficients.
    pub informative_set: Vec<usize>,
    /// Linear predictor `X * beta`.
    pub eta: Vec<F>,
}

/// Gaussian design with Cov(x_i, x_j) = rho^|i-j| and unit variances.
///
/// Rows are generated independently by the AR(1) recursion
/// `x_1 = e_1, x_j = rho * x_{j-1} + sqrt(1 - rho^2) * e_j`, which realizes
/// the Toeplitz covariance exactly without a p x p factorization. Each row
/// draws from its own stream, so parallel generation stays deterministic.
pub fn gen_toeplitz_gaussian<F: Scalar>(
    n: usize,
    p: usize,
    rho: f64,
    seed: u64,
) -> Result<ColMatrix<F>> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidConfig(format!(
            "rho must lie in [0, 1), got {}",
            rho
        )));
    }
    let innovation_scale = (1.0 - rho * rho).sqrt();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_rng(seed, i as u64);
            let mut row = Vec::with_capacity(p);
            let mut prev: f64 = rng.sample(StandardNormal);
            row.push(prev);
            for _ in 1..p {
                let eps: f64 = rng.sample(StandardNormal);
                prev = rho * prev + innovation_scale * eps;
                row.push(prev);
            }
            row
        })
        .collect();

    let mut data = Vec::with_capacity(n * p);
    for j in 0..p {
        data.extend(rows.iter().map(|row| F::from_f64(row[j])));
    }
    ColMatrix::from_col_major(data, n, p)
}

/// Sparse coefficient vector: `p_inf` positions drawn uniformly without
/// replacement, values i.i.d. uniform on (-1, 1) with exact zeros redrawn.
pub fn gen_coefficients<F: Scalar>(
    p: usize,
    p_inf: usize,
    seed: u64,
) -> Result<(Vec<F>, Vec<usize>)> {
    if p_inf > p {
        return Err(Error::InvalidConfig(format!(
            "p_inf = {} exceeds p = {}",
            p_inf, p
        )));
    }
    let mut rng = derive_rng(seed, 0);
    let mut beta = vec![F::zero(); p];
    if p_inf == 0 {
        return Ok((beta, Vec::new()));
    }
    let mut positions = rand::seq::index::sample(&mut rng, p, p_inf).into_vec();
    positions.sort_unstable();
    for &j in &positions {
        let v = loop {
            let v: f64 = rng.gen_range(-1.0..1.0);
            if v != 0.0 {
                break v;
            }
        };
        beta[j] = F::from_f64(v);
    }
    Ok((beta, positions))
}

/// Bernoulli response with success probability `sigma(eta_i)`.
pub fn gen_response_binary<F: Scalar>(x: &ColMatrix<F>, beta: &[F], seed: u64) -> Result<Vec<F>> {
    let eta = x.mat_vec(beta)?;
    let cap = F::from_f64(ETA_CAP);
    let mut rng = derive_rng(seed, 0);
    Ok(eta
        .into_iter()
        .map(|e| {
            let pi = sigmoid(e.min(cap).max(-cap));
            if F::from_f64(rng.gen::<f64>()) < pi {
                F::one()
            } else {
                F::zero()
            }
        })
        .collect())
}

/// Continuous response `eta + N(0, 1)`. Utility for squared-error demos;
/// the benchmark itself is binary.
pub fn gen_response_gaussian<F: Scalar>(x: &ColMatrix<F>, beta: &[F], seed: u64) -> Result<Vec<F>> {
    let eta = x.mat_vec(beta)?;
    let mut rng = derive_rng(seed, 0);
    Ok(eta
        .into_iter()
        .map(|e| {
            let noise: f64 = rng.sample(StandardNormal);
            e + F::from_f64(noise)
        })
        .collect())
}

/// Which response generator a simulated instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    Binary,
    Gaussian,
}

/// Generates the instance for one replicate of a scenario: design, sparse
/// truth, and response, all from seeds derived from `(scenario.seed, replicate)`.
pub fn simulate_instance<F: Scalar>(
    scenario: &SimulationScenario,
    replicate: usize,
    response: ResponseKind,
) -> Result<SimulatedInstance<F>> {
    scenario.validate()?;
    let instance_seed = mix_seed(scenario.seed, replicate as u64);
    let x = gen_toeplitz_gaussian::<F>(scenario.n, scenario.p, scenario.rho, mix_seed(instance_seed, 1))?;
    let (beta, informative_set) = gen_coefficients::<F>(scenario.p, scenario.p_inf, mix_seed(instance_seed, 2))?;
    let eta = x.mat_vec(&beta)?;
    let y = match response {
        ResponseKind::Binary => gen_response_binary(&x, &beta, mix_seed(instance_seed, 3))?,
        ResponseKind::Gaussian => gen_response_gaussian(&x, &beta, mix_seed(instance_seed, 3))?,
    };
    let data = Dataset::from_parts(x, y)?;
    Ok(SimulatedInstance {
        data,
        beta,
        informative_set,
        eta,
    })
}
