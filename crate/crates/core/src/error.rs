use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("log_gamma: pole at nonpositive integer {0}")]
    Pole(f64),

    #[error("{what}: argument {value} outside the admissible range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid warp: {0}")]
    InvalidWarp(String),

    #[error("integrator step size collapsed to {h:e} at t = {t}")]
    StepCollapse { t: f64, h: f64 },

    #[error("integrator exceeded {0} steps")]
    TooManySteps(usize),

    #[error("Frobenius start t0 = {t0} exceeds half the estimated series radius {radius}")]
    SeriesStart { t0: f64, radius: f64 },

    #[error("ill-conditioned branch fit: {0}")]
    IllConditioned(String),

    #[error("quadrature did not reach tolerance {target:e} (achieved {achieved:e})")]
    Quadrature { target: f64, achieved: f64 },

    #[error("weighted J cross-check failed: max discrepancy {max_discrepancy:e} > {tolerance:e}")]
    CrossCheck {
        max_discrepancy: f64,
        tolerance: f64,
        lemma: Vec<f64>,
        direct: Vec<f64>,
    },

    #[error("extrapolation is ill-conditioned: {0}")]
    Extrapolation(String),

    #[error("trial function is not positive at quadrature node {node} (value {value})")]
    Inadmissible { node: usize, value: f64 },

    #[error("minimization did not converge after {iters} iterations (last value {value})")]
    NonConvergence { iters: usize, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
