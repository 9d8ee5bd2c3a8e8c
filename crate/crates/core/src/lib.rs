//! Component-wise gradient boosting for sparse variable selection.
//!
//! The crate implements three ways to decide which variables a boosted
//! linear model should keep:
//!
//! - **Probing** ([`probing`]): augment the design with one randomly
//!   permuted copy of every column and stop the fit the first time such a
//!   shadow column wins the greedy selection. A single fit, no tuning.
//! - **Stability selection** ([`stability`]): refit on B half-subsamples,
//!   keep variables whose selection frequency clears a threshold, with a
//!   provable bound on the expected number of false positives.
//! - **Bootstrap cross-validation** ([`resampling`]): the classical
//!   baseline that picks the iteration count by out-of-bag risk.
//!
//! [`simgen`] generates the Toeplitz-Gaussian benchmark data and
//! [`metrics`] scores selections, so the three methods can be compared on
//! equal footing.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` aliases below cover the common case.

pub mod boosting;
pub mod dataset;
pub mod error;
pub mod loss;
pub mod metrics;
pub mod probing;
pub mod resampling;
pub mod rng;
pub mod scalar;
pub mod simgen;
pub mod stability;

pub use boosting::{
    boost_fit, fit_base_learner, fit_offset_only, predict, BoostConfig, FitTrace, FixedIterations,
    StopDecision, StoppedBy, StoppingRule,
};
pub use dataset::{ColMatrix, Dataset};
pub use error::{Error, Result};
pub use loss::{empirical_risk, init_offset, negative_gradient, sigmoid, GradientVector, LossKind};
pub use metrics::{fdr, tpr, SelectionMetrics};
pub use probing::{
    default_probe_cap, make_shadows, probe_select, FirstShadowRule, ProbeResult,
    ShadowAugmentedDataset,
};
pub use resampling::{bootstrap_cv, CvConfig, CvResult};
pub use scalar::Scalar;
pub use simgen::{
    gen_coefficients, gen_response_binary, gen_response_gaussian, gen_toeplitz_gaussian,
    simulate_instance, ResponseKind, SimulatedInstance, SimulationScenario,
};
pub use stability::{
    complete_config, stability_select, subsample_indices, CompletedStability, DistinctCountRule,
    StabilityConfig, StabilityParams, StabilityResult,
};

/// Double-precision aliases for the generic containers.
pub type DatasetF64 = Dataset<f64>;
pub type ColMatrixF64 = ColMatrix<f64>;
pub type FitTraceF64 = FitTrace<f64>;
pub type ProbeResultF64 = ProbeResult<f64>;
pub type CvResultF64 = CvResult<f64>;
pub type SimulatedInstanceF64 = SimulatedInstance<f64>;

/// Single-precision aliases.
pub type DatasetF32 = Dataset<f32>;
pub type ColMatrixF32 = ColMatrix<f32>;
pub type FitTraceF32 = FitTrace<f32>;
