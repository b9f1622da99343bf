//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, WplabError>;

#[derive(Debug, Clone, Error)]
pub enum WplabError {
    /// The geodesic-space density chart only covers finite endpoints.
    #[error("density chart excludes infinity; rotate the chart first")]
    DensityChartExcludesInfinity,

    /// Trace too close to [-2, 2]: no translation length / axis.
    #[error("parabolic or elliptic element (|trace| = {trace_abs} <= 2)")]
    NotHyperbolic { trace_abs: f64 },

    /// Rational slope not in lowest terms (or 0/0).
    #[error("slope {p}/{q} is not a reduced rational")]
    NonReducedSlope { p: i64, q: i64 },

    /// Word/lift enumeration would exceed the configured hard cap.
    #[error("enumeration exceeds hard cap ({requested} > {cap})")]
    EnumerationCap { requested: usize, cap: usize },

    /// A series did not meet the requested tolerance at the truncation cap.
    /// Carries the partial value and the estimated tail.
    #[error("series did not converge: tail bound {tail_bound:e} > tolerance {tolerance:e} (partial value {partial})")]
    SeriesConvergence {
        partial: f64,
        tail_bound: f64,
        tolerance: f64,
    },

    /// Quadrature failed to reach its target accuracy.
    #[error("quadrature did not converge: estimated error {estimate:e} > tolerance {tolerance:e}")]
    QuadratureConvergence { estimate: f64, tolerance: f64 },

    /// Dirichlet polygon did not close at the given word-length cap.
    #[error("fundamental polygon not closed at word length {max_word_len}; retry with a larger cap")]
    PolygonNotClosed { max_word_len: usize },

    /// Tangent-matching system is numerically singular.
    #[error("tangent matching system ill-conditioned (cond = {cond:e}); choose different test curves")]
    IllConditionedMatching { cond: f64 },

    /// Finite-difference stencil left the coordinate chart (l_alpha <= 0).
    #[error("finite-difference stencil leaves the coordinate chart at l = {l_alpha}")]
    StencilLeavesChart { l_alpha: f64 },

    /// Geodesic integration hit the length floor near the stratum.
    #[error("path approached stratum (l_alpha fell below {floor})")]
    ApproachedStratum { floor: f64 },

    /// Fourier analysis detected aliasing at the requested mode count.
    #[error("aliasing detected: |a_N| = {edge_magnitude:e} not small; increase N beyond {n_modes}")]
    Aliasing { edge_magnitude: f64, n_modes: usize },

    /// A path family failed to reach the length floor.
    #[error("no path in the family reached the length floor {floor}")]
    FloorNotReached { floor: f64 },

    #[error("{0}")]
    Invalid(String),
}
