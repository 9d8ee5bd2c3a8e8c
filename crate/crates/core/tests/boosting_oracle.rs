//! Path equivalence against a from-scratch reference implementation.
//!
//! The reference below recomputes everything per iteration (means, dot
//! products, squared errors) with plain loops and shares no code with the
//! library's fitting path.

use rand::Rng;
use shadowboost::{boost_fit, BoostConfig, ColMatrix, Dataset, FixedIterations, LossKind};

struct NaiveFit {
    selection_path: Vec<usize>,
    coefficients: Vec<f64>,
}

fn naive_boost(
    x: &[Vec<f64>], // columns
    y: &[f64],
    loss: LossKind,
    nu: f64,
    m_stop: usize,
) -> NaiveFit {
    let n = y.len();
    let p = x.len();

    // Offset: mean for squared error, logit of the mean for logistic.
    let mean_y: f64 = y.iter().sum::<f64>() / n as f64;
    let offset = match loss {
        LossKind::SquaredError => mean_y,
        LossKind::Logistic => (mean_y / (1.0 - mean_y)).ln(),
    };

    // Centered columns, recomputed here from first principles.
    let mut centered = vec![vec![0.0; n]; p];
    let mut constant = vec![false; p];
    for j in 0..p {
        let mean: f64 = x[j].iter().sum::<f64>() / n as f64;
        constant[j] = x[j].iter().all(|&v| v == x[j][0]);
        for i in 0..n {
            centered[j][i] = x[j][i] - mean;
        }
    }

    let mut f = vec![offset; n];
    let mut coefficients = vec![0.0; p];
    let mut selection_path = Vec::new();

    for _ in 0..m_stop {
        let u: Vec<f64> = (0..n)
            .map(|i| match loss {
                LossKind::SquaredError => y[i] - f[i],
                LossKind::Logistic => y[i] - 1.0 / (1.0 + (-f[i]).exp()),
            })
            .collect();

        let mut best_j = usize::MAX;
        let mut best_sse = f64::INFINITY;
        let mut best_slope = 0.0;
        for j in 0..p {
            if constant[j] {
                continue;
            }
            let mut sxu = 0.0;
            let mut sxx = 0.0;
            for i in 0..n {
                sxu += centered[j][i] * u[i];
                sxx += centered[j][i] * centered[j][i];
            }
            let slope = sxu / sxx;
            let mut sse = 0.0;
            for i in 0..n {
                let r = u[i] - slope * centered[j][i];
                sse += r * r;
            }
            if sse < best_sse {
                best_sse = sse;
                best_j = j;
                best_slope = slope;
            }
        }

        coefficients[best_j] += nu * best_slope;
        for i in 0..n {
            f[i] += nu * best_slope * centered[best_j][i];
        }
        selection_path.push(best_j);
    }

    NaiveFit {
        selection_path,
        coefficients,
    }
}

fn random_instance(seed: u64, n: usize, p: usize, loss: LossKind) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = shadowboost::rng::derive_rng(seed, 0);
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let signal = cols[0][i] - 0.5 * cols[p / 2][i];
            match loss {
                LossKind::SquaredError => signal + rng.gen_range(-0.5..0.5),
                LossKind::Logistic => {
                    let pi = 1.0 / (1.0 + (-signal).exp());
                    if rng.gen::<f64>() < pi {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        })
        .collect();
    (cols, y)
}

#[test]
fn selection_path_matches_reference_implementation() {
    for &loss in &[LossKind::SquaredError, LossKind::Logistic] {
        for seed in 0..20u64 {
            let p = 3 + (seed as usize % 8); // p <= 10
            let (cols, y) = random_instance(1000 + seed, 30, p, loss);
            let m_stop = 40;
            let nu = 0.1;

            let reference = naive_boost(&cols, &y, loss, nu, m_stop);

            let data =
                Dataset::from_parts(ColMatrix::from_columns(cols).unwrap(), y).unwrap();
            let config = BoostConfig::new(nu, m_stop, loss);
            let trace = boost_fit(&data, &config, &mut FixedIterations).unwrap();

            assert_eq!(
                trace.selection_path, reference.selection_path,
                "path diverged (loss {:?}, seed {})",
                loss, seed
            );
            for (a, b) in trace.coefficients.iter().zip(&reference.coefficients) {
                assert!(
                    (a - b).abs() <= 1e-10 * (1.0 + b.abs()),
                    "coefficient mismatch: {} vs {}",
                    a,
                    b
                );
            }
        }
    }
}

#[test]
fn fixed_seed_small_instance_path_matches() {
    let (cols, y) = random_instance(424_242, 20, 5, LossKind::SquaredError);
    let reference = naive_boost(&cols, &y, LossKind::SquaredError, 0.1, 60);
    let data = Dataset::from_parts(ColMatrix::from_columns(cols).unwrap(), y).unwrap();
    let config = BoostConfig::new(0.1, 60, LossKind::SquaredError);
    let trace = boost_fit(&data, &config, &mut FixedIterations).unwrap();
    assert_eq!(trace.selection_path, reference.selection_path);
}
