//! Most Relevant Explanation over discrete Bayesian networks.
//!
//! Everything numeric is generic over [`Real`] (`f64` or `f32`); the
//! unsuffixed type names default to `f64` and the `*32` aliases below pin
//! single precision.

pub mod baselines;
pub mod error;
pub mod eval;
pub mod factor;
pub mod fixtures;
pub mod format;
pub mod inference;
pub mod network;
pub mod real;
pub mod sampling;
pub mod scoring;
pub mod solver;

pub use baselines::{
    map_explanation, marginal_explanation, mpe_explanation, top_k_map, top_k_mpe, BaselineResult, Method,
};
pub use error::{Error, Result};
pub use eval::{
    f_score, generate_test_cases, precision, recall, run_benchmark, run_grid, BenchmarkConfig, BenchmarkReport,
    CaseOptions, DedupKey, EvalRecord, TestCase,
};
pub use format::{parse_network, write_network};
pub use inference::{
    joint_probability, posterior_probability, prior_probability, target_tables, TargetTables, DEFAULT_TABLE_BUDGET,
};
pub use network::{Assignment, Cpt, Network, Probability, Role, VarId, Variable};
pub use real::Real;
pub use sampling::forward_sample;
pub use scoring::{
    belief_update_ratio, cbf, gbf, gbf_ratio_form, inclusion_boundary, score_bundle, Score, ScoreBundle,
};
pub use solver::{
    solve_kmre, solve_mre, CandidateSpace, Explanation, PoolRule, SolutionPool, SolverOptions,
    DEFAULT_CANDIDATE_BUDGET,
};

pub type Network32 = Network<f32>;
pub type Cpt32 = Cpt<f32>;
pub type Probability32 = Probability<f32>;
pub type Score32 = Score<f32>;
pub type ScoreBundle32 = ScoreBundle<f32>;
pub type Explanation32 = Explanation<f32>;
pub type TargetTables32 = TargetTables<f32>;
pub type BaselineResult32 = BaselineResult<f32>;
