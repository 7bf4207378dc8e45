use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid spiral parameters: {0}")]
    InvalidSpec(String),

    #[error("angle must be non-negative, got θ = {0}")]
    NegativeAngle(f64),

    #[error("radial profile is not increasing at θ = {theta}: a0 + ρ'(θ) = {slope}")]
    NotMonotone { theta: f64, slope: f64 },

    #[error("width function is not positive at θ = {theta} (a = {width})")]
    NonPositiveWidth { theta: f64, width: f64 },

    #[error("curvature undefined at θ = {0}: r and r' both vanish")]
    DegenerateCurvature(f64),

    #[error("quadrature did not converge on [{a}, {b}]: value {value:e}, error estimate {error:e}")]
    Quadrature { a: f64, b: f64, value: f64, error: f64 },

    #[error("coil width needs a previous coil: θ = {0} < 2π")]
    NoPreviousCoil(f64),

    #[error("no normal crossing within {limit} of the curve at θ = {theta}")]
    NoCrossing { theta: f64, limit: f64 },

    #[error("no admissible s0 below horizon {horizon} (margin {margin})")]
    NoAdmissibleS0 { horizon: f64, margin: f64 },

    #[error("arc length {s} lies below s0 = {s0}")]
    BelowS0 { s: f64, s0: f64 },

    #[error("arc length {s} lies beyond the window horizon {horizon}")]
    BeyondHorizon { s: f64, horizon: f64 },

    #[error("singular Fermi denominator: u·γ = {0} ≥ 1")]
    SingularDenominator(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("positive part of the bound integrand is not localized: still positive at s = {s}")]
    SupportNotLocalized { s: f64 },

    #[error("self-intersecting boundary polyline for Ω₂ at θ0 = {0}")]
    SelfIntersection(f64),

    #[error("tail undetermined at the horizon s = {s}: {reason}")]
    Undetermined { s: f64, reason: String },
}
