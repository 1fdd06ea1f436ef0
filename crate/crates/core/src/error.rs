use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not in SL(2,R): det = {det}")]
    NotUnimodular { det: f64 },

    #[error("degenerate Möbius denominator")]
    DegenerateDenominator,

    #[error("reduction did not terminate after {steps} steps")]
    ReductionDidNotTerminate { steps: usize },

    #[error("phi too close to axis for quadrature: phi = {phi}")]
    PhiNearAxis { phi: f64 },

    #[error("phi outside validity band: |sin phi| = {sin_phi} < {band}")]
    PhiOutsideBand { sin_phi: f64, band: f64 },

    #[error("pole of leading-order window at w = 0")]
    WindowPole,

    #[error("transform not available for {window} at phi = {phi}")]
    TransformUnavailable { window: &'static str, phi: f64 },

    #[error("geometric case: use closed form (l = 0)")]
    GeometricCase,

    #[error("pole in series: y = {y} is integral")]
    SeriesPole { y: f64 },

    #[error("N = {n} exceeds the supported maximum {max}")]
    TooManyIterates { n: u64, max: u64 },

    #[error("no c <= {n} with ||c u|| <= 1/N for u = {u}")]
    DirichletScanFailed { u: f64, n: u64 },

    #[error("inconsistent convergent: gcd({c}, {d}) = {gcd}")]
    InconsistentConvergent { c: i64, d: i64, gcd: i64 },

    #[error("empty sample")]
    EmptySample,

    #[error("invalid sample value {0}")]
    InvalidSample(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
